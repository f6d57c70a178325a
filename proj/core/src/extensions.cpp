#include "disclosure/extensions.hpp"

#include <cmath>
#include <stdexcept>

#include "analytic.hpp"
#include "disclosure/numerics.hpp"

namespace disclosure {

double kappa_tilde_general(const ProjectParams& p) {
  const auto kk = detail::Kern::from(p);
  const double lam = kk.lam;
  const double r = p.r;

  const auto f2 = [lam](double z) {
    return lam * lam * z * std::exp(-lam * z);
  };
  // Present value of one funding dollar per unit time until t. The r = 0
  // case is the exact limit, not a small-r substitution.
  const auto annuity = [r](double t) {
    return (r > 0.0) ? -std::expm1(-r * t) / r : t;
  };

  const double num =
      integrate([&](double z) { return std::exp(-r * z) * f2(z); }, 0.0, kk.T);
  const double den =
      integrate([&](double z) { return annuity(z) * f2(z); }, 0.0, kk.T) +
      (1.0 - kk.p2(kk.T)) * annuity(kk.T);
  return num / (lam * p.alpha * den);
}

GeneralRegime classify_general(const ProjectParams& p) {
  p.validate();
  if (p.alpha == 1.0 && p.beta == 0.0) {
    throw std::invalid_argument(
        "classify_general: alpha = 1, beta = 0 leaves the agent indifferent; "
        "no informative policy exists");
  }
  return (p.kappa() <= kappa_tilde_general(p))
             ? GeneralRegime::PromisingNoInterimDeadline
             : GeneralRegime::InterimDeadlineRequired;
}

std::string_view general_regime_name(GeneralRegime r) {
  switch (r) {
    case GeneralRegime::PromisingNoInterimDeadline:
      return "promising-no-interim-deadline";
    case GeneralRegime::InterimDeadlineRequired:
      return "interim-deadline-required";
  }
  throw std::logic_error("general_regime_name: unreachable");
}

InfiniteHorizonSolution infinite_horizon(const ProjectParams& p) {
  p.validate();
  if (!p.is_infinite_horizon()) {
    throw std::domain_error("infinite_horizon: requires the T = inf sentinel");
  }
  const double k = p.kappa();
  InfiniteHorizonSolution sol;
  // Without a horizon the deadline instruments lose their bite: either a
  // disclosure promise supports funding forever (state-0 value positive
  // iff kappa < 1/2) or nothing does.
  sol.policy_class =
      (k < 0.5) ? Regime::PostponedDisclosure : Regime::Reject;
  sol.v1 = p.v * (1.0 - k);
  return sol;
}

}  // namespace disclosure
