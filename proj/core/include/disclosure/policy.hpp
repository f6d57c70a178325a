#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "disclosure/model.hpp"

// Disclosure mechanisms the agent can commit to, their solvers, and the
// machinery for checking that following the recommendations is actually the
// investor's best response (obedience).

namespace disclosure {

// Stay silent forever; the investor stops on priors alone.
struct NonDisclosure {};

// Say nothing before s_star; from s_star on, disclose completion
// immediately (including completions that happened earlier).
struct PostponedDisclosure {
  double s_star = 0.0;
};

// Disclose completion immediately and additionally tell the investor to
// stop at s0_a if the first stage is still unfinished then.
struct InterimDeadline {
  double s0_a = 0.0;
};

// From `start` (the prior-only interior stop date) onward, disclose at t
// the completion of the second stage if it happened before the scheduled
// past date pi(t); see delayed_disclosure_schedule.
struct DelayedDisclosure {
  double start = 0.0;
};

// Reveal the state outright; the investor follows the observed-state rule.
struct FullInformation {};

using Policy = std::variant<NonDisclosure, PostponedDisclosure,
                            InterimDeadline, DelayedDisclosure,
                            FullInformation>;

// Stable lowercase-hyphen tag used in JSON and CLI output.
std::string_view policy_type_name(const Policy& policy);

// Tagged-document serialization: {"type": <tag>, <numeric payload>}.
std::string policy_to_json(const Policy& policy, int indent = 2);
Policy policy_from_json(std::string_view json_text);

// The investor-optimal mechanism for the classified regime; nullopt when
// no mechanism attracts funding (reject regime).
std::optional<Policy> optimal_policy(const ProjectParams& p);

// Latest silence date S* such that the investor is still willing to fund
// through the quiet period: solves
//   int_lo^S (kappa - p1(z)) dz = int_S^T e^{-lz}(lz - kappa(1+lz)) dz,
// the indifference between forgone flow profit before S and the surplus
// earned from the disclosure phase after S. The lower limit lo is the
// prior-only stop date when kappa <= kappa_ni (the binding date), else 0.
// Throws std::domain_error outside (kappa_nd, kappa_tilde].
PostponedDisclosure solve_postponed_start(const ProjectParams& p);

// Agent-optimal interim deadline: with gamma = e^{lT}(1-2k)/(1-k) > 1,
//   s0_a = (gamma + W0(-gamma e^{-gamma})) / lambda.
// The same date must solve the date-0 participation constraint directly;
// see binding_deadline_equation. Throws std::domain_error outside
// (kappa_tilde, kappa_fi) or when gamma <= 1.
InterimDeadline solve_interim_deadline(const ProjectParams& p);

// Residual of the date-0 participation constraint as a function of a
// candidate deadline s: the investor's value of funding under an interim
// deadline at s, which the optimal s0_a drives to zero from above. Exposed
// so tests can recover s0_a by root finding without Lambert W. s = 0 is a
// degenerate second root, so brackets should start strictly above 0.
double binding_deadline_equation(const ProjectParams& p, double s);

// Scheduled disclosure lag: at date t >= start the mechanism discloses
// completions that happened by pi(t) < t. The schedule holds the
// investor's posterior of "first stage done, second pending" exactly at
// kappa, making him indifferent forever: solving
// e^{-l(t-pi)} lt / (1 + l pi) = kappa for pi via u = 1 + l*pi gives
// u = -W_{-1}(-(lt/kappa) e^{-lt-1}), pi = (u-1)/l. Throws
// std::domain_error if t < start (schedule begins at the prior-only stop).
double delayed_disclosure_schedule(const ProjectParams& p, double t);

// Date at which the scheduled-lag policy starts disclosing: the prior-only
// interior stop date. Requires kappa <= kappa_ni and T > that date.
DelayedDisclosure make_delayed_policy(const ProjectParams& p);

// Investor's continuation value V_t at date t conditional on funding being
// still recommended, net of the value cashed by stopping immediately (a
// disclosed-on-stop completed project pays v even at t, so V_t measures
// only the gain from continuing). Closed-form piecewise evaluation per
// policy phase; continuation_value_ode computes the same quantity by
// backward integration of
//   dV/dt = l q1(t) V + v l (kappa - q1(t))
// from terminal data (q1 = the policy's no-stop posterior of state 1; on
// silent phases the unconditional flow dV/dt = v l (kappa - p1(t))
// applies) and must agree to 1e-6 v.
double continuation_value(const ProjectParams& p, const Policy& policy,
                          double t);
double continuation_value_ode(const ProjectParams& p, const Policy& policy,
                              double t);

struct ObedienceReport {
  double min_continuation_value = 0.0;
  double argmin_t = 0.0;
  int grid_size = 0;
  bool feasible = false;
  // Largest value the investor could get by NOT stopping when told to
  // (fresh prior-only planning from the recommended stop date); obedience
  // requires this to be non-positive up to tolerance.
  double post_stop_value = 0.0;
  bool post_stop_ok = true;
};

// Evaluates continuation_value on a uniform grid over each policy phase;
// feasible iff the minimum is >= -1e-7 v and the post-stop check passes.
// grid_size >= 2.
ObedienceReport verify_obedience(const ProjectParams& p, const Policy& policy,
                                 int grid_size);

struct DecompositionCheck {
  double sv_lhs = 0.0;  // total surplus, direct conditional expansion
  double sv_rhs = 0.0;  // total surplus, reference closed-form blocks
  double v_lhs = 0.0;   // investor value, direct conditional expansion
  double v_rhs = 0.0;   // investor value, reference closed-form blocks
};

// Two accounting identities for the deterministic-deadline-at-s policy,
// evaluated at date t <= s through two independent routes: a stop at s in
// state 0 removes exactly the state-0 tail from the never-stop plan,
//   SV_t(tau) = SV_t(tau2) - P(x_s = 0 | alive at t) SV_{s|0}(tau2)
//   V_t(tau)  = V_t(tau2)  - P(x_s = 0 | alive at t) V_{s|0}(tau2).
// The lhs fields integrate the joint completion-time law directly by
// quadrature; the rhs fields combine benchmark closed forms.
DecompositionCheck decomposition_check(const ProjectParams& p, double s,
                                       double t);

// c * E[tau]: everything the investor spends is the agent's gross benefit.
// Closed form per policy.
double agent_payoff(const ProjectParams& p, const Policy& policy);

struct PolicyAnalytics {
  double e_tau = 0.0;       // expected funding duration
  double p_complete = 0.0;  // P(project complete at the stop)
  double w_agent = 0.0;     // c E[tau]
  double v_principal = 0.0; // v P(complete) - c E[tau]
};

PolicyAnalytics analytic_payoffs(const ProjectParams& p, const Policy& policy);

}  // namespace disclosure
