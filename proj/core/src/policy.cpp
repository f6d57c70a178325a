#include "disclosure/policy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "analytic.hpp"
#include "disclosure/benchmarks.hpp"
#include "disclosure/numerics.hpp"

namespace disclosure {

namespace {

constexpr double kObedienceTol = 1e-7;  // in units of v
constexpr double kInvE = 0.36787944117144233;

using detail::Kern;

double sbar_no_info(const Kern& kk) {
  if (!(kk.k < kInvE)) {
    throw std::domain_error("no interior prior-only stop for kappa >= 1/e");
  }
  return -lambert_wm1(-kk.k) / kk.lam;
}

// Schedule lag pi(t) on the raw kernel (same math as the public function,
// callable after the policy-level preconditions were already checked).
double schedule_lag(const Kern& kk, double t) {
  const double arg = -(kk.lam * t / kk.k) * std::exp(-kk.lam * t - 1.0);
  const double u = -lambert_wm1(arg);
  return std::max(0.0, (u - 1.0) / kk.lam);
}

// Inverse of the schedule: the disclosure date for a completion at z,
// from p1(date) = kappa (1 + lz) e^{-lz} on the decreasing branch.
double schedule_inverse(const Kern& kk, double z) {
  const double m = kk.k * (1.0 + kk.lam * z) * std::exp(-kk.lam * z);
  return -lambert_wm1(-m) / kk.lam;
}

}  // namespace

std::string_view policy_type_name(const Policy& policy) {
  return std::visit(
      [](const auto& alt) -> std::string_view {
        using A = std::decay_t<decltype(alt)>;
        if constexpr (std::is_same_v<A, NonDisclosure>) return "non-disclosure";
        if constexpr (std::is_same_v<A, PostponedDisclosure>)
          return "postponed-disclosure";
        if constexpr (std::is_same_v<A, InterimDeadline>)
          return "interim-deadline";
        if constexpr (std::is_same_v<A, DelayedDisclosure>)
          return "delayed-disclosure";
        return "full-information";
      },
      policy);
}

std::optional<Policy> optimal_policy(const ProjectParams& p) {
  switch (classify(p)) {
    case Regime::NonDisclosureInvestToT:
      return Policy{NonDisclosure{}};
    case Regime::PostponedDisclosure:
      return Policy{solve_postponed_start(p)};
    case Regime::InterimDeadline:
      return Policy{solve_interim_deadline(p)};
    case Regime::Reject:
      return std::nullopt;
  }
  throw std::logic_error("optimal_policy: unreachable");
}

PostponedDisclosure solve_postponed_start(const ProjectParams& p) {
  const auto kk = Kern::from(p);
  const CutoffSet cs = cutoffs(p);
  if (!(kk.k > cs.kappa_nd && kk.k <= cs.kappa_tilde)) {
    throw std::domain_error(
        "solve_postponed_start: kappa outside the postponement regime");
  }
  // The participation constraint binds at the prior-only stop date when the
  // investor would fund that far on priors alone, and at date 0 otherwise.
  const double lo = (kk.k <= cs.kappa_ni) ? sbar_no_info(kk) : 0.0;
  const auto balance = [&kk, lo](double s) {
    return kk.F(lo, s) + kk.G(s, kk.T);
  };
  // balance is strictly decreasing in s (its derivative is -kappa p2(s)),
  // positive at lo in this regime and negative at T. At the regime's edges
  // the root sits exactly on a bracket end, where the residual is a rounding
  // wobble around zero; take the endpoint rather than demand a sign change.
  if (balance(lo) <= 0.0) return PostponedDisclosure{lo};      // kappa ~ kappa_tilde
  if (balance(kk.T) >= 0.0) return PostponedDisclosure{kk.T};  // kappa ~ kappa_nd
  const double s_star = find_root(balance, Bracket{lo, kk.T});
  return PostponedDisclosure{s_star};
}

double binding_deadline_equation(const ProjectParams& p, double s) {
  const auto kk = Kern::from(p);
  // Date-0 value of funding under a state-0 deadline at s: the never-stop
  // value minus the state-0 tail cut off at s.
  return kk.vtau2() - kk.p0(s) * kk.v0cond(s);
}

InterimDeadline solve_interim_deadline(const ProjectParams& p) {
  const auto kk = Kern::from(p);
  const CutoffSet cs = cutoffs(p);
  if (!(kk.k > cs.kappa_tilde && kk.k < cs.kappa_fi)) {
    throw std::domain_error(
        "solve_interim_deadline: kappa outside the interim-deadline regime");
  }
  const double gamma =
      std::exp(kk.lam * kk.T) * (1.0 - 2.0 * kk.k) / (1.0 - kk.k);
  if (!(gamma > 1.0)) {
    throw std::domain_error("solve_interim_deadline: gamma <= 1");
  }
  // The date-0 participation constraint rearranges to ls + gamma e^{-ls} =
  // gamma, whose nontrivial root is the larger Lambert branch point below.
  const double s0a =
      (gamma + lambert_w0(-gamma * std::exp(-gamma))) / kk.lam;
  return InterimDeadline{s0a};
}

double delayed_disclosure_schedule(const ProjectParams& p, double t) {
  const auto kk = Kern::from(p);
  const CutoffSet cs = cutoffs(p);
  if (!(kk.k <= cs.kappa_ni)) {
    throw std::domain_error(
        "delayed_disclosure_schedule: kappa above the prior-funding cutoff");
  }
  const double start = sbar_no_info(kk);
  if (!(kk.T > start)) {
    throw std::domain_error(
        "delayed_disclosure_schedule: horizon ends before the schedule starts");
  }
  if (t < start - 1e-9 * std::max(1.0, start)) {
    throw std::domain_error(
        "delayed_disclosure_schedule: t before the schedule start");
  }
  return schedule_lag(kk, t);
}

DelayedDisclosure make_delayed_policy(const ProjectParams& p) {
  const auto kk = Kern::from(p);
  const CutoffSet cs = cutoffs(p);
  if (!(kk.k <= cs.kappa_ni)) {
    throw std::domain_error(
        "make_delayed_policy: kappa above the prior-funding cutoff");
  }
  const double start = sbar_no_info(kk);
  if (!(kk.T > start)) {
    throw std::domain_error(
        "make_delayed_policy: horizon ends before the schedule starts");
  }
  return DelayedDisclosure{start};
}

namespace {

// Closed-form continuation value per policy. Shared by the public function
// and the obedience/oracle grids.
struct ContinuationEval {
  const Kern kk;
  const ProjectParams& p;

  double non_disclosure(double t) const {
    const NoInfoSolution sol = solve_no_info(p);
    if (t >= sol.s_ni) return 0.0;
    return (kk.p2(sol.s_ni) - kk.p2(t)) * kk.v - kk.c * (sol.s_ni - t);
  }

  double postponed(double s_star, double t) const {
    if (t <= s_star) {
      // Silent until s_star (value accrues at the unconditional flow),
      // then the disclosure-phase surplus, discounted by nothing since no
      // stop can happen before s_star.
      return kk.v * kk.lam * (kk.F(t, s_star) + kk.G(s_star, kk.T));
    }
    // Disclosure phase: conditional on no stop yet (not complete).
    return kk.v * kk.lam * kk.G(t, kk.T) / kk.surv(t);
  }

  double interim(double rho, double t) const {
    if (t <= rho) {
      const double q0 = kk.p0(t) / kk.surv(t);
      const double q1 = kk.p1(t) / kk.surv(t);
      // State-0 branch: never-stop value minus the tail removed by the
      // deadline, discounted by staying in state 0 until rho.
      const double state0 =
          kk.v0cond(t) - std::exp(-kk.lam * (rho - t)) * kk.v0cond(rho);
      return q0 * state0 + q1 * kk.v1fi(t);
    }
    // Past the deadline, funding continues only with the first stage done.
    return kk.v1fi(t);
  }

  double full_info(double t) const {
    const double rho = std::max(0.0, solve_full_info(p).s0_p);
    if (t >= rho) return kk.v1fi(t);
    const double q0 = kk.p0(t) / kk.surv(t);
    const double q1 = kk.p1(t) / kk.surv(t);
    // State 0 under observation: either the first stage completes before
    // rho (worth v1fi from that date) or the investor walks at rho.
    const double e_rho = std::exp(-kk.lam * (rho - t));
    const double jump_gain =
        (kk.v - kk.c / kk.lam) *
        ((1.0 - e_rho) - kk.lam * (rho - t) * std::exp(-kk.lam * (kk.T - t)));
    const double dwell_cost = (kk.c / kk.lam) * (1.0 - e_rho);
    return q0 * (jump_gain - dwell_cost) + q1 * kk.v1fi(t);
  }

  double delayed(double start, double t) const {
    if (t < start) {
      // Silent phase ending in a zero-value continuation at start.
      return kk.v * kk.lam * kk.F(t, start);
    }
    // Direct quadrature of the net value: conditional on no disclosure yet
    // (completion after pi(t)), the stop collects v exactly when the
    // project completes by T, costs run to the scheduled disclosure date,
    // and the mass completed-but-undisclosed at t is value the investor
    // could already cash by stopping now, so it nets out.
    const double pit = schedule_lag(kk, t);
    const double piT = schedule_lag(kk, kk.T);
    const double alive = 1.0 - kk.p2(pit);
    const auto weighted_stop = [this, t](double z) {
      const double f2 = kk.lam * kk.lam * z * std::exp(-kk.lam * z);
      return (schedule_inverse(kk, z) - t) * f2;
    };
    const double e_extra = integrate(weighted_stop, pit, piT) +
                           (1.0 - kk.p2(piT)) * (kk.T - t);
    return ((kk.p2(kk.T) - kk.p2(t)) * kk.v - kk.c * e_extra) / alive;
  }

  double operator()(const Policy& policy, double t) const {
    return std::visit(
        [this, t](const auto& alt) -> double {
          using A = std::decay_t<decltype(alt)>;
          if constexpr (std::is_same_v<A, NonDisclosure>) {
            return non_disclosure(t);
          } else if constexpr (std::is_same_v<A, PostponedDisclosure>) {
            return postponed(alt.s_star, t);
          } else if constexpr (std::is_same_v<A, InterimDeadline>) {
            return interim(alt.s0_a, t);
          } else if constexpr (std::is_same_v<A, DelayedDisclosure>) {
            return delayed(alt.start, t);
          } else {
            return full_info(t);
          }
        },
        policy);
  }
};

// Phase decomposition for the backward value recursion and the obedience
// grid. Between phases the conditioning set changes discontinuously; the
// left limit equals the right limit times the no-stop weight at the
// boundary (junction factor).
struct Phase {
  double lo = 0.0;
  double hi = 0.0;
  // dV/dt = l q1(t) V + v l (kappa - q1(t)) with the phase's posterior,
  // or the unconditional silent flow dV/dt = v l (kappa - p1(t)).
  enum Kind { Silent, CondNoStop, CondState1, CondDelayed } kind = Silent;
  double junction = 1.0;  // V(lo-) = junction * V(lo+)
};

std::vector<Phase> policy_phases(const Kern& kk, const ProjectParams& p,
                                 const Policy& policy) {
  std::vector<Phase> ph;
  std::visit(
      [&](const auto& alt) {
        using A = std::decay_t<decltype(alt)>;
        if constexpr (std::is_same_v<A, NonDisclosure>) {
          const double stop = solve_no_info(p).s_ni;
          ph.push_back({0.0, stop, Phase::Silent, 1.0});
        } else if constexpr (std::is_same_v<A, PostponedDisclosure>) {
          const double s = alt.s_star;
          if (s > 0.0) {
            // Crossing s from the right removes the already-complete mass.
            ph.push_back({0.0, s, Phase::Silent, 1.0});
            ph.push_back({s, kk.T, Phase::CondNoStop, kk.surv(s)});
          } else {
            ph.push_back({0.0, kk.T, Phase::CondNoStop, 1.0});
          }
        } else if constexpr (std::is_same_v<A, InterimDeadline> ||
                             std::is_same_v<A, FullInformation>) {
          double rho;
          if constexpr (std::is_same_v<A, InterimDeadline>) {
            rho = alt.s0_a;
          } else {
            rho = std::max(0.0, solve_full_info(p).s0_p);
          }
          if (rho > 0.0 && rho < kk.T) {
            // Left of rho only the not-complete survive; right of rho only
            // state 1. The boundary drops the state-0 mass.
            ph.push_back({0.0, rho, Phase::CondNoStop, 1.0});
            ph.push_back({rho, kk.T, Phase::CondState1,
                          kk.p1(rho) / kk.surv(rho)});
          } else if (rho <= 0.0) {
            ph.push_back({0.0, kk.T, Phase::CondState1, 1.0});
          } else {
            ph.push_back({0.0, kk.T, Phase::CondNoStop, 1.0});
          }
        } else if constexpr (std::is_same_v<A, DelayedDisclosure>) {
          const double s = alt.start;
          if (s > 0.0) {
            ph.push_back({0.0, s, Phase::Silent, 1.0});
          }
          // No mass can be stopped exactly at the start date, so the value
          // is continuous there.
          ph.push_back({s, kk.T, Phase::CondDelayed, 1.0});
        }
      },
      policy);
  return ph;
}

double phase_rhs(const Kern& kk, Phase::Kind kind, double t, double V) {
  switch (kind) {
    case Phase::Silent:
      return kk.v * kk.lam * (kk.k - kk.p1(t));
    case Phase::CondNoStop: {
      const double q1 = kk.lam * t / (1.0 + kk.lam * t);
      return kk.lam * q1 * V + kk.v * kk.lam * (kk.k - q1);
    }
    case Phase::CondState1:
      return kk.lam * V + kk.v * kk.lam * (kk.k - 1.0);
    case Phase::CondDelayed: {
      const double q1 = kk.p1(t) / (1.0 - kk.p2(schedule_lag(kk, t)));
      return kk.lam * q1 * V + kk.v * kk.lam * (kk.k - q1);
    }
  }
  throw std::logic_error("phase_rhs: unreachable");
}

// Classic RK4 from b down to a (a <= b), fixed step chosen for ~1e-10
// accuracy on these smooth right-hand sides.
double rk4_backward(const Kern& kk, Phase::Kind kind, double a, double b,
                    double Vb) {
  if (b <= a) return Vb;
  const int n = std::max(32, static_cast<int>(std::ceil((b - a) / 0.002)));
  const double h = (b - a) / n;
  double V = Vb;
  double t = b;
  for (int i = 0; i < n; ++i) {
    const double k1 = phase_rhs(kk, kind, t, V);
    const double k2 = phase_rhs(kk, kind, t - 0.5 * h, V - 0.5 * h * k1);
    const double k3 = phase_rhs(kk, kind, t - 0.5 * h, V - 0.5 * h * k2);
    const double k4 = phase_rhs(kk, kind, t - h, V - h * k3);
    V -= h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    t -= h;
  }
  return V;
}

}  // namespace

double continuation_value(const ProjectParams& p, const Policy& policy,
                          double t) {
  const auto kk = Kern::from(p);
  if (!(t >= 0.0 && t < kk.T)) {
    throw std::domain_error("continuation_value: t outside [0, T)");
  }
  return ContinuationEval{kk, p}(policy, t);
}

double continuation_value_ode(const ProjectParams& p, const Policy& policy,
                              double t) {
  const auto kk = Kern::from(p);
  if (!(t >= 0.0 && t < kk.T)) {
    throw std::domain_error("continuation_value_ode: t outside [0, T)");
  }
  const auto phases = policy_phases(kk, p, policy);
  if (phases.empty() || t >= phases.back().hi) {
    return 0.0;  // at or past the final recommended stop
  }
  double V = 0.0;  // terminal condition at the last phase end
  for (int i = static_cast<int>(phases.size()) - 1; i >= 0; --i) {
    const Phase& ph = phases[i];
    if (t >= ph.hi) break;  // V already holds the left limit at ph.hi
    const double target = std::max(ph.lo, t);
    V = rk4_backward(kk, ph.kind, target, ph.hi, V);
    if (t > ph.lo) return V;
    // t at or below this phase's start: apply the junction to get the
    // left limit, which is also the value "evaluated from the left" when
    // t lands exactly on the boundary.
    if (i > 0) V *= ph.junction;
    if (t >= ph.lo) return V;
  }
  return V;
}

ObedienceReport verify_obedience(const ProjectParams& p, const Policy& policy,
                                 int grid_size) {
  if (grid_size < 2) {
    throw std::invalid_argument("verify_obedience: grid_size must be >= 2");
  }
  const auto kk = Kern::from(p);
  const ContinuationEval eval{kk, p};
  const auto phases = policy_phases(kk, p, policy);

  ObedienceReport rep;
  rep.grid_size = grid_size;
  rep.min_continuation_value = 0.0;
  rep.argmin_t = 0.0;
  bool first = true;
  for (const Phase& ph : phases) {
    if (!(ph.hi > ph.lo)) continue;
    for (int j = 0; j < grid_size; ++j) {
      // Stay strictly inside [lo, hi): the hi endpoint belongs to the next
      // phase (or is the stop itself, where the value is 0 by definition).
      const double t = ph.lo + (ph.hi - ph.lo) * j / grid_size;
      const double val = eval(policy, t);
      if (first || val < rep.min_continuation_value) {
        rep.min_continuation_value = val;
        rep.argmin_t = t;
        first = false;
      }
    }
  }

  // Post-stop side: at a recommended stop the investor must not prefer to
  // keep funding. What "keep funding" can earn depends on what the stop
  // revealed; evaluate the best fresh plan on a grid of later dates.
  const double stop_tol = kObedienceTol * kk.v;
  double post_max = 0.0;
  bool have_post = false;
  auto scan_post = [&](double stop, auto fresh_value) {
    if (!(stop < kk.T)) return;
    for (int j = 1; j <= grid_size; ++j) {
      const double h = (kk.T - stop) * j / grid_size;
      const double val = fresh_value(stop, h);
      if (!have_post || val > post_max) {
        post_max = val;
        have_post = true;
      }
    }
  };
  // Completion was disclosed at the stop: later stopping only adds cost.
  auto after_completed = [&kk](double, double h) { return -kk.c * h; };
  // The stop revealed the first stage incomplete: best later plan restarts
  // the two-stage clock from zero over the remaining horizon.
  auto after_state0 = [&kk](double, double h) {
    const double lh = kk.lam * h;
    return kk.v * (1.0 - std::exp(-lh) * (1.0 + lh)) - kk.c * h;
  };
  // Prior-only stop: beliefs are the date-stop priors.
  auto after_prior = [&kk](double stop, double h) {
    return (kk.p2(stop + h) - kk.p2(stop)) * kk.v - kk.c * h;
  };
  std::visit(
      [&](const auto& alt) {
        using A = std::decay_t<decltype(alt)>;
        if constexpr (std::is_same_v<A, NonDisclosure>) {
          scan_post(solve_no_info(p).s_ni, after_prior);
        } else if constexpr (std::is_same_v<A, PostponedDisclosure>) {
          scan_post(alt.s_star, after_completed);
        } else if constexpr (std::is_same_v<A, InterimDeadline>) {
          scan_post(alt.s0_a, after_state0);
          scan_post(alt.s0_a, after_completed);
        } else if constexpr (std::is_same_v<A, DelayedDisclosure>) {
          scan_post(alt.start, after_completed);
        } else {
          scan_post(std::max(0.0, solve_full_info(p).s0_p), after_state0);
          scan_post(std::max(0.0, solve_full_info(p).s0_p), after_completed);
        }
      },
      policy);
  rep.post_stop_value = have_post ? post_max : 0.0;
  rep.post_stop_ok = rep.post_stop_value <= stop_tol;
  rep.feasible =
      (rep.min_continuation_value >= -stop_tol) && rep.post_stop_ok;
  return rep;
}

DecompositionCheck decomposition_check(const ProjectParams& p, double s,
                                       double t) {
  const auto kk = Kern::from(p);
  if (!(0.0 <= t && t <= s && s <= kk.T)) {
    throw std::domain_error("decomposition_check: need 0 <= t <= s <= T");
  }
  const double lam = kk.lam;
  const double alive = 1.0 - kk.p2(t);

  // Direct route: integrate the joint law of the two completion times.
  // P(tau1 <= s, tau2 <= T) = p2(T) - P(tau1 > s, tau2 <= T).
  const double p_late_first = integrate(
      [lam, &kk](double a) {
        return lam * std::exp(-lam * a) *
               (1.0 - std::exp(-lam * (kk.T - a)));
      },
      s, kk.T);
  const double p_both = kk.p2(kk.T) - p_late_first;

  DecompositionCheck out;
  out.sv_lhs = kk.v * (p_both - kk.p2(t)) / alive;

  // E[tau | alive at t] by cases on the stop reason: deadline at s (first
  // stage late), disclosure at tau2 <= T, or the horizon.
  const auto f2 = [lam](double z) {
    return lam * lam * z * std::exp(-lam * z);
  };
  const double m_deadline = s * std::exp(-lam * s);
  const double m_disclose =
      integrate([&](double z) { return z * f2(z); }, t, s) +
      integrate(
          [&](double z) {
            // For completions after s, only paths whose first stage beat
            // the deadline survive: tau1 | tau2 = z is uniform on (0, z).
            return z * lam * lam * s * std::exp(-lam * z);
          },
          s, kk.T);
  const double m_horizon =
      kk.T * ((1.0 - std::exp(-lam * s)) - p_both);
  const double e_tau = (m_deadline + m_disclose + m_horizon) / alive - t;
  out.v_lhs = out.sv_lhs - kk.c * e_tau;

  // Reference route: benchmark closed forms glued by conditional weights.
  const double q0 = kk.p0(t) / alive;
  const double q1 = kk.p1(t) / alive;
  const double px0 = kk.p0(s) / alive;  // P(x_s = 0 | alive at t)
  const double sv1 = kk.v * (1.0 - std::exp(-lam * (kk.T - t)));
  out.sv_rhs = q0 * kk.sv0(t) + q1 * sv1 - px0 * kk.sv0(s);
  out.v_rhs =
      q0 * kk.v0cond(t) + q1 * kk.v1fi(t) - px0 * kk.v0cond(s);
  return out;
}

double agent_payoff(const ProjectParams& p, const Policy& policy) {
  return analytic_payoffs(p, policy).w_agent;
}

PolicyAnalytics analytic_payoffs(const ProjectParams& p,
                                 const Policy& policy) {
  const auto kk = Kern::from(p);

  // P(tau1 <= rho, tau2 <= T): completion probability under a state-0
  // deadline at rho.
  const auto p_complete_deadline = [&kk](double rho) {
    const double late_first =
        std::exp(-kk.lam * rho) - std::exp(-kk.lam * kk.T) -
        kk.lam * (kk.T - rho) * std::exp(-kk.lam * kk.T);
    return kk.p2(kk.T) - late_first;
  };

  PolicyAnalytics out;
  std::visit(
      [&](const auto& alt) {
        using A = std::decay_t<decltype(alt)>;
        if constexpr (std::is_same_v<A, NonDisclosure>) {
          const NoInfoSolution sol = solve_no_info(p);
          out.e_tau = sol.s_ni;
          out.p_complete = kk.p2(sol.s_ni);
        } else if constexpr (std::is_same_v<A, PostponedDisclosure>) {
          const double s = alt.s_star;
          out.e_tau = s * kk.p2(s) + kk.E2(s, kk.T) +
                      kk.T * (1.0 - kk.p2(kk.T));
          out.p_complete = kk.p2(kk.T);
        } else if constexpr (std::is_same_v<A, InterimDeadline>) {
          out.e_tau = kk.etau2T() - kk.p0(alt.s0_a) * kk.sfn0(alt.s0_a);
          out.p_complete = p_complete_deadline(alt.s0_a);
        } else if constexpr (std::is_same_v<A, DelayedDisclosure>) {
          // c E[tau] = v p2(T) - V(tau) and the investor keeps exactly the
          // prior-only value, so E[tau] has this closed form.
          out.e_tau = (kk.p2(kk.T) - kk.p2(alt.start)) / (kk.lam * kk.k) +
                      alt.start;
          out.p_complete = kk.p2(kk.T);
        } else {
          const double rho = std::max(0.0, solve_full_info(p).s0_p);
          out.e_tau = kk.etau2T() - kk.p0(rho) * kk.sfn0(rho);
          out.p_complete = p_complete_deadline(rho);
        }
      },
      policy);
  out.w_agent = kk.c * out.e_tau;
  out.v_principal = kk.v * out.p_complete - kk.c * out.e_tau;
  return out;
}

}  // namespace disclosure
