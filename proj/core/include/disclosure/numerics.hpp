#pragma once

#include <cstdint>
#include <functional>

// Scalar numerical kernels: Lambert W on both real branches, safeguarded
// bracketing root finder, adaptive quadrature, and a counter-based random
// stream. Everything is deterministic; nothing allocates after construction.

namespace disclosure {

struct ToleranceConfig {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  int max_iter = 200;
};

struct Bracket {
  double lo = 0.0;
  double hi = 0.0;
};

// Principal branch W0(x) for x >= -1/e: the solution w >= -1 of w e^w = x.
// Halley iteration from a branch-aware initial guess, safeguarded by a
// maintained bracket so it cannot diverge. Result satisfies
// |w e^w - x| <= abs_tol * |x|, or sits at the floating-point resolution of
// the safeguarding bracket when rounding makes that target unreachable.
// Throws std::domain_error for x < -1/e beyond a small branch-point slack.
double lambert_w0(double x, const ToleranceConfig& tol = {});

// Lower branch W-1(x) for -1/e <= x < 0: the solution w <= -1 of w e^w = x.
// Same contract and safeguards as lambert_w0. Throws std::domain_error
// outside [-1/e, 0).
double lambert_wm1(double x, const ToleranceConfig& tol = {});

// Finds a root of f inside a bracket with opposite signs at the ends.
// Brent-style: inverse quadratic / secant steps with a bisection fallback,
// so convergence is guaranteed for continuous f. Stops once |f(x)| <=
// abs_tol or the bracket collapses to floating point resolution. Throws
// std::invalid_argument when f(lo) and f(hi) have the same sign and
// std::runtime_error when max_iter is exhausted.
double find_root(const std::function<double(double)>& f, Bracket bracket,
                 const ToleranceConfig& tol = {});

// Adaptive Simpson quadrature of f over [a, b], a <= b. The estimate err
// satisfies err <= max(abs_tol, rel_tol * |result|). Throws
// std::invalid_argument when a > b and std::runtime_error when the
// refinement budget is exhausted without reaching the tolerance.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const ToleranceConfig& tol = {});

// Deterministic pseudo-random stream. The same (seed, stream_id) pair always
// produces the same sequence, and distinct stream ids give statistically
// independent streams, so parallel consumers can be assigned one stream per
// work block and results do not depend on scheduling. xoshiro256** state
// seeded through SplitMix64.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t next_u64();

  // Uniform draw on [0, 1) with 53 random mantissa bits.
  double uniform();

  // Exponential draw with the given rate (mean 1/rate); rate > 0.
  double exponential(double rate);

 private:
  std::uint64_t state_[4];
};

}  // namespace disclosure
