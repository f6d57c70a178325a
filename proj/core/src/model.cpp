#include "disclosure/model.hpp"

#include <cmath>
#include <limits>
#include <mutex>
#include <stdexcept>

#include "disclosure/numerics.hpp"

namespace disclosure {

bool ProjectParams::is_infinite_horizon() const {
  return std::isinf(T);
}

void ProjectParams::validate() const {
  auto positive = [](double x) { return std::isfinite(x) && x > 0.0; };
  if (!positive(lambda)) throw std::invalid_argument("params: lambda must be > 0");
  if (!positive(c)) throw std::invalid_argument("params: c must be > 0");
  if (!positive(v)) throw std::invalid_argument("params: v must be > 0");
  if (!(T > 0.0)) throw std::invalid_argument("params: T must be > 0");
  if (!(std::isfinite(r) && r >= 0.0)) throw std::invalid_argument("params: r must be >= 0");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("params: alpha must be in (0, 1]");
  if (!(std::isfinite(beta) && beta >= 0.0)) throw std::invalid_argument("params: beta must be >= 0");
}

BeliefState prior_beliefs(const ProjectParams& p, double t) {
  if (!(t >= 0.0)) throw std::domain_error("prior_beliefs: t must be >= 0");
  const double lt = p.lambda * t;
  BeliefState b;
  b.p0 = std::exp(-lt);
  b.p1 = lt * b.p0;
  b.p2 = 1.0 - b.p0 - b.p1;
  if (b.p2 < 0.0) b.p2 = 0.0;  // guard tiny negative rounding at small t
  return b;
}

double posterior_q1_no_stop(const ProjectParams& p, double t) {
  if (!(t >= 0.0)) throw std::domain_error("posterior_q1_no_stop: t must be >= 0");
  const double lt = p.lambda * t;
  return lt / (1.0 + lt);
}

double kappa0() {
  // e^y = 1 + y + y^2 has a single positive root; bracket it away from the
  // trivial root at 0 and cache the result.
  static std::once_flag once;
  static double value = 0.0;
  std::call_once(once, [] {
    const double y0 = find_root(
        [](double y) { return std::exp(y) - (1.0 + y + y * y); },
        Bracket{1.0, 3.0});
    value = y0 * std::exp(-y0);
    if (std::abs(value - 0.298426) > 1e-5) {
      throw std::logic_error("kappa0: computed constant failed its self-check");
    }
  });
  return value;
}

namespace {

// e^x > x(x+1) + 1 at x = lambda*T. The boundary is exactly the root y0
// used by kappa0(), so the comparison is equivalent to x > y0; testing
// against the cached root avoids overflow for large horizons.
bool separation_condition(double x) {
  // Recover y0 from kappa0's cached value lazily via the same root.
  static const double y0 = [] {
    return find_root([](double y) { return std::exp(y) - (1.0 + y + y * y); },
                     Bracket{1.0, 3.0});
  }();
  return x > y0;
}

}  // namespace

CutoffSet cutoffs(const ProjectParams& p) {
  p.validate();
  if (p.is_infinite_horizon()) {
    throw std::domain_error("cutoffs: finite horizon required");
  }
  const double x = p.lambda * p.T;
  const double emx = std::exp(-x);

  CutoffSet cs;
  cs.long_horizon = separation_condition(x);

  // kappa_ni: the largest cost at which unconditional funding to T beats
  // every earlier stop. For long horizons the binding comparison is with
  // the interior optimum and the cutoff is the constant kappa0; for short
  // horizons it is with stopping at 0 and equals the average completion
  // hazard over [0, T].
  const double kappa_avg = (1.0 - emx) / x - emx;  // e^{-x}((e^x - 1)/x - 1)
  cs.kappa_ni = cs.long_horizon ? kappa0() : kappa_avg;

  // kappa_nd: below this, full silence is investor-optimal on its own and
  // no disclosure promise is needed. When the horizon is too short for the
  // separation condition the two cutoffs collapse.
  cs.kappa_nd = cs.long_horizon ? x * emx : cs.kappa_ni;

  // kappa_tilde: indifference cost for funding to T against the value of
  // the completion-time disclosure promise. Written with e^{-x} factors so
  // it stays finite for large x (limit 1/2).
  cs.kappa_tilde = (emx * (1.0 + x) - 1.0) / (emx * (2.0 + x) - 2.0);

  // kappa_fi: participation bound under full information.
  cs.kappa_fi = (1.0 - emx) / (2.0 - emx);
  return cs;
}

Regime classify(const ProjectParams& p) {
  const CutoffSet cs = cutoffs(p);
  const double k = p.kappa();
  if (k <= cs.kappa_nd) return Regime::NonDisclosureInvestToT;
  if (k <= cs.kappa_tilde) return Regime::PostponedDisclosure;
  if (k < cs.kappa_fi) return Regime::InterimDeadline;
  return Regime::Reject;
}

std::string_view regime_name(Regime r) {
  switch (r) {
    case Regime::NonDisclosureInvestToT: return "non-disclosure";
    case Regime::PostponedDisclosure: return "postponed-disclosure";
    case Regime::InterimDeadline: return "interim-deadline";
    case Regime::Reject: return "reject";
  }
  throw std::logic_error("regime_name: unreachable");
}

}  // namespace disclosure
