#include "disclosure/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <stdexcept>
#include <thread>

#include "analytic.hpp"
#include "disclosure/benchmarks.hpp"
#include "disclosure/numerics.hpp"

namespace disclosure {

namespace {

using detail::Kern;

// Fixed block size: the (seed, block index) pair fully determines every
// path in the block, so estimates are reproducible no matter how blocks
// are assigned to threads.
constexpr std::int64_t kBlock = 1 << 16;

Trajectory draw_trajectory(RngStream& rng, double lambda) {
  Trajectory tr;
  tr.tau1 = rng.exponential(lambda);
  tr.tau2 = tr.tau1 + rng.exponential(lambda);
  return tr;
}

// Per-path execution constants resolved once per policy, not once per
// path: the public execute_policy re-derives them each call, which is fine
// for spot checks but not inside a 10^6-path loop.
struct Executor {
  enum Kind { FixedStop, Postponed, Deadline, Delayed } kind = FixedStop;
  double date = 0.0;     // stop date / s_star / deadline / schedule start
  double pi_T = 0.0;     // Delayed only: latest disclosed completion time
  double lam = 0.0, k = 0.0, T = 0.0;

  static Executor from(const Policy& policy, const ProjectParams& p) {
    Executor ex;
    ex.lam = p.lambda;
    ex.k = p.kappa();
    ex.T = p.T;
    std::visit(
        [&](const auto& alt) {
          using A = std::decay_t<decltype(alt)>;
          if constexpr (std::is_same_v<A, NonDisclosure>) {
            ex.kind = FixedStop;
            ex.date = solve_no_info(p).s_ni;
          } else if constexpr (std::is_same_v<A, PostponedDisclosure>) {
            ex.kind = Postponed;
            ex.date = alt.s_star;
          } else if constexpr (std::is_same_v<A, InterimDeadline>) {
            ex.kind = Deadline;
            ex.date = alt.s0_a;
          } else if constexpr (std::is_same_v<A, DelayedDisclosure>) {
            ex.kind = Delayed;
            ex.date = alt.start;
            ex.pi_T = delayed_disclosure_schedule(p, p.T);
          } else {
            ex.kind = Deadline;
            ex.date = std::max(0.0, solve_full_info(p).s0_p);
          }
        },
        policy);
    return ex;
  }

  Execution run(const Trajectory& tr) const {
    Execution out;
    switch (kind) {
      case FixedStop:
        out.tau = date;
        break;
      case Postponed:
        out.tau = std::max(date, std::min(tr.tau2, T));
        break;
      case Deadline:
        out.tau = (tr.tau1 > date) ? date : std::min(tr.tau2, T);
        break;
      case Delayed:
        if (tr.tau2 <= pi_T) {
          // Disclosure date for a completion at tau2: invert the schedule
          // through the decreasing branch of p1.
          const double m =
              k * (1.0 + lam * tr.tau2) * std::exp(-lam * tr.tau2);
          out.tau = -lambert_wm1(-m) / lam;
        } else {
          out.tau = T;
        }
        break;
    }
    out.completed = (tr.tau2 <= out.tau);
    return out;
  }

  // Structural stopping rules that must hold path by path.
  bool violates(const Trajectory& tr, const Execution& ex) const {
    switch (kind) {
      case Postponed:
      case Delayed:
        // Funding never stops before disclosure or the horizon.
        return ex.tau < std::min(tr.tau2, T) - 1e-9;
      case Deadline: {
        if (ex.tau >= T - 1e-12) return false;  // horizon end, not a stop
        const int state = (tr.tau2 <= ex.tau) ? 2 : (tr.tau1 <= ex.tau ? 1 : 0);
        if (state == 1) return true;  // never stop with stage 1 done only
        if (state == 2 && std::abs(ex.tau - tr.tau2) > 1e-9) {
          return true;  // completion must stop funding immediately
        }
        return false;
      }
      case FixedStop:
        return false;
    }
    return false;
  }
};

struct BlockSum {
  double w = 0.0, v = 0.0, tau = 0.0, comp = 0.0;
  double w2 = 0.0, v2 = 0.0, tau2 = 0.0;
  std::int64_t violations = 0;

  void add(const BlockSum& o) {
    w += o.w;
    v += o.v;
    tau += o.tau;
    comp += o.comp;
    w2 += o.w2;
    v2 += o.v2;
    tau2 += o.tau2;
    violations += o.violations;
  }
};

// Deterministic pairwise-tree reduction over [lo, hi).
BlockSum reduce_tree(const std::vector<BlockSum>& sums, std::int64_t lo,
                     std::int64_t hi) {
  if (hi - lo == 1) return sums[static_cast<std::size_t>(lo)];
  const std::int64_t mid = lo + (hi - lo) / 2;
  BlockSum out = reduce_tree(sums, lo, mid);
  out.add(reduce_tree(sums, mid, hi));
  return out;
}

}  // namespace

std::vector<Trajectory> sample_trajectories(const ProjectParams& p,
                                            std::int64_t n,
                                            std::uint64_t seed) {
  p.validate();
  if (n < 1) throw std::invalid_argument("sample_trajectories: n >= 1");
  std::vector<Trajectory> out(static_cast<std::size_t>(n));
  const std::int64_t nb = (n + kBlock - 1) / kBlock;
  for (std::int64_t b = 0; b < nb; ++b) {
    RngStream rng(seed, static_cast<std::uint64_t>(b));
    const std::int64_t end = std::min(n, (b + 1) * kBlock);
    for (std::int64_t i = b * kBlock; i < end; ++i) {
      out[static_cast<std::size_t>(i)] = draw_trajectory(rng, p.lambda);
    }
  }
  return out;
}

Execution execute_policy(const Trajectory& traj, const Policy& policy,
                         const ProjectParams& p) {
  p.validate();
  return Executor::from(policy, p).run(traj);
}

PayoffEstimate estimate(const ProjectParams& p, const Policy& policy,
                        std::int64_t n, std::uint64_t seed, int max_threads) {
  p.validate();
  if (n < 1000) throw std::invalid_argument("estimate: n must be >= 1000");
  const Executor ex = Executor::from(policy, p);

  const bool baseline = (p.r == 0.0 && p.alpha == 1.0 && p.beta == 1.0);
  const double lam = p.lambda;
  const double c = p.c;
  const double v = p.v;

  const std::int64_t nb = (n + kBlock - 1) / kBlock;
  std::vector<BlockSum> sums(static_cast<std::size_t>(nb));

  auto run_block = [&](std::int64_t b) {
    RngStream rng(seed, static_cast<std::uint64_t>(b));
    const std::int64_t count = std::min(n, (b + 1) * kBlock) - b * kBlock;
    BlockSum s;
    for (std::int64_t i = 0; i < count; ++i) {
      const Trajectory tr = draw_trajectory(rng, lam);
      const Execution e = ex.run(tr);
      if (ex.violates(tr, e)) ++s.violations;
      double w, val;
      if (baseline) {
        w = c * e.tau;
        val = (e.completed ? v : 0.0) - c * e.tau;
      } else {
        const double disc = std::exp(-p.r * e.tau);
        const double annuity =
            (p.r > 0.0) ? -std::expm1(-p.r * e.tau) / p.r : e.tau;
        const double prize = e.completed ? v * disc : 0.0;
        w = (1.0 - p.alpha) * prize + p.beta * c * annuity;
        val = p.alpha * prize - c * annuity;
      }
      s.w += w;
      s.v += val;
      s.tau += e.tau;
      s.comp += e.completed ? 1.0 : 0.0;
      s.w2 += w * w;
      s.v2 += val * val;
      s.tau2 += e.tau * e.tau;
    }
    sums[static_cast<std::size_t>(b)] = s;
  };

  int threads = max_threads > 0
                    ? max_threads
                    : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(1, std::min<int>(threads, static_cast<int>(nb)));
  if (threads == 1) {
    for (std::int64_t b = 0; b < nb; ++b) run_block(b);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
    for (int tix = 0; tix < threads; ++tix) {
      pool.emplace_back([&, tix] {
        try {
          for (std::int64_t b = tix; b < nb; b += threads) run_block(b);
        } catch (...) {
          errors[static_cast<std::size_t>(tix)] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (const auto& err : errors) {
      if (err) std::rethrow_exception(err);
    }
  }

  const BlockSum total = reduce_tree(sums, 0, nb);
  if (total.violations > 0) {
    throw std::logic_error(
        "estimate: structural stopping rule violated on simulated paths");
  }

  const double dn = static_cast<double>(n);
  auto half_width = [dn](double sum, double sumsq) {
    const double var =
        std::max(0.0, (sumsq - sum * sum / dn) / (dn - 1.0));
    return 1.96 * std::sqrt(var / dn);
  };

  PayoffEstimate est;
  est.n_paths = n;
  est.w_mean = total.w / dn;
  est.v_mean = total.v / dn;
  est.e_tau = total.tau / dn;
  est.p_complete = total.comp / dn;
  est.hw_w = half_width(total.w, total.w2);
  est.hw_v = half_width(total.v, total.v2);
  est.hw_e_tau = half_width(total.tau, total.tau2);
  est.hw_p_complete = half_width(total.comp, total.comp);  // Bernoulli
  return est;
}

GridSearchResult grid_search_oracle(const ProjectParams& p,
                                    PolicyFamily family, int grid,
                                    std::int64_t n, std::uint64_t seed) {
  (void)n;     // reserved for families without closed-form payoffs
  (void)seed;
  p.validate();
  if (grid < 10) throw std::invalid_argument("grid_search_oracle: grid >= 10");
  const auto kk = Kern::from(p);
  const double ir_tol = -1e-7 * kk.v;

  GridSearchResult best;
  best.best_agent_payoff = -std::numeric_limits<double>::infinity();

  // Participation check for the single-date families: the continuation
  // value along the whole path, sampled on a fixed internal grid (binding
  // dates sit at 0, the prior-only stop, and the phase boundary, all of
  // which the grid covers or brackets tightly).
  constexpr int kIrGrid = 96;
  const auto feasible_policy = [&](const Policy& pol, double boundary) {
    const double endpoints[] = {0.0, boundary};
    for (double t : endpoints) {
      if (t >= 0.0 && t < kk.T &&
          continuation_value(p, pol, t) < ir_tol) {
        return false;
      }
    }
    for (int j = 1; j < kIrGrid; ++j) {
      const double t = kk.T * j / kIrGrid;
      if (continuation_value(p, pol, t) < ir_tol) return false;
    }
    return true;
  };

  switch (family) {
    case PolicyFamily::StartDate: {
      for (int i = 0; i < grid; ++i) {
        const double s = kk.T * i / (grid - 1);
        const Policy pol{PostponedDisclosure{s}};
        if (!feasible_policy(pol, s)) continue;
        ++best.feasible_count;
        const double w = kk.c * (s * kk.p2(s) + kk.E2(s, kk.T) +
                                 kk.T * (1.0 - kk.p2(kk.T)));
        if (w > best.best_agent_payoff) {
          best.best_agent_payoff = w;
          best.best_param = {s};
        }
      }
      break;
    }
    case PolicyFamily::InterimDeadlinePoint: {
      for (int i = 0; i < grid; ++i) {
        const double s = kk.T * i / (grid - 1);
        const Policy pol{InterimDeadline{s}};
        if (!feasible_policy(pol, s)) continue;
        ++best.feasible_count;
        const double w = kk.c * (kk.etau2T() - kk.p0(s) * kk.sfn0(s));
        if (w > best.best_agent_payoff) {
          best.best_agent_payoff = w;
          best.best_param = {s};
        }
      }
      break;
    }
    case PolicyFamily::TwoPointDeadlineMixture: {
      // Budget ~grid total deadline pairs; weights on a fixed lattice. The
      // date-0 participation constraint is linear in the mixture, so it is
      // the whole analytic check here (a superset of the obedient set:
      // sufficient for showing mixtures do not beat the point mass).
      const int m = std::max(10, static_cast<int>(std::lround(
                                     std::sqrt(static_cast<double>(grid)))));
      const double vt2 = kk.vtau2();
      std::vector<double> cut(static_cast<std::size_t>(m));
      std::vector<double> spend(static_cast<std::size_t>(m));
      for (int i = 0; i < m; ++i) {
        const double rho = kk.T * i / (m - 1);
        cut[static_cast<std::size_t>(i)] = kk.p0(rho) * kk.v0cond(rho);
        spend[static_cast<std::size_t>(i)] = kk.p0(rho) * kk.sfn0(rho);
      }
      for (int i = 0; i < m; ++i) {
        for (int j = i; j < m; ++j) {
          for (int wi = 1; wi <= 19; ++wi) {
            const double w = wi * 0.05;
            const double v0 = vt2 - (w * cut[static_cast<std::size_t>(i)] +
                                     (1.0 - w) * cut[static_cast<std::size_t>(j)]);
            if (v0 < ir_tol) continue;
            ++best.feasible_count;
            const double pay =
                kk.c * (kk.etau2T() - w * spend[static_cast<std::size_t>(i)] -
                        (1.0 - w) * spend[static_cast<std::size_t>(j)]);
            if (pay > best.best_agent_payoff) {
              best.best_agent_payoff = pay;
              best.best_param = {kk.T * i / (m - 1), kk.T * j / (m - 1), w};
            }
          }
        }
      }
      break;
    }
  }
  return best;
}

}  // namespace disclosure
