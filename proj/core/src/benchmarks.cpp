#include "disclosure/benchmarks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "analytic.hpp"
#include "disclosure/numerics.hpp"

namespace disclosure {

namespace {
constexpr double kInvE = 0.36787944117144233;
}

NoInfoSolution solve_no_info(const ProjectParams& p) {
  const auto kk = detail::Kern::from(p);
  const CutoffSet cs = cutoffs(p);

  NoInfoSolution sol;
  if (kk.k < kInvE) {
    // Later of the two dates where the prior first-stage mass crosses the
    // cost line: p1(s) = kappa on the decreasing branch.
    sol.s_bar_ni = -lambert_wm1(-kk.k) / kk.lam;
  }
  sol.invests = (kk.k <= cs.kappa_ni);
  if (sol.invests) {
    sol.s_ni = std::min(p.T, *sol.s_bar_ni);
    sol.v_ni = std::max(0.0, kk.v * kk.p2(sol.s_ni) - kk.c * sol.s_ni);
  }
  return sol;
}

double no_info_continuation(const ProjectParams& p, double t) {
  const auto kk = detail::Kern::from(p);
  if (!(kk.k < kInvE)) {
    throw std::domain_error(
        "no_info_continuation: no interior stop date for kappa >= 1/e");
  }
  const double stop = std::min(p.T, -lambert_wm1(-kk.k) / kk.lam);
  return (kk.p2(stop) - kk.p2(t)) * kk.v - kk.c * (stop - t);
}

FullInfoSolution solve_full_info(const ProjectParams& p) {
  const auto kk = detail::Kern::from(p);
  const CutoffSet cs = cutoffs(p);

  FullInfoSolution sol;
  if (kk.k < 0.5) {
    sol.s0_p = p.T + std::log((1.0 - 2.0 * kk.k) / (1.0 - kk.k)) / kk.lam;
  } else {
    // State-0 funding loses money at any date; there is no start date.
    sol.s0_p = -std::numeric_limits<double>::infinity();
  }
  sol.invests = (kk.k <= cs.kappa_fi);
  return sol;
}

double exp_stop_given_state1(const ProjectParams& p, double t) {
  const auto kk = detail::Kern::from(p);
  return (1.0 - std::exp(-kk.lam * (p.T - t))) / kk.lam;
}

double exp_stop_given_state0(const ProjectParams& p, double t) {
  return detail::Kern::from(p).sfn0(t);
}

double surplus_given_state0(const ProjectParams& p, double t) {
  return detail::Kern::from(p).sv0(t);
}

double full_info_state1_value(const ProjectParams& p, double t) {
  return detail::Kern::from(p).v1fi(t);
}

double exp_stop_given_state0_quadrature(const ProjectParams& p, double t) {
  const auto kk = detail::Kern::from(p);
  const double h = p.T - t;
  const double lam = kk.lam;
  // Remaining completion time from state 0 has density l^2 z e^{-lz};
  // funding runs to completion or the horizon, whichever is first.
  const double body = integrate(
      [lam](double z) { return z * lam * lam * z * std::exp(-lam * z); }, 0.0,
      h);
  const double tail = h * (std::exp(-lam * h) * (1.0 + lam * h));
  return body + tail;
}

double surplus_given_state0_quadrature(const ProjectParams& p, double t) {
  const auto kk = detail::Kern::from(p);
  const double h = p.T - t;
  const double lam = kk.lam;
  return kk.v *
         integrate(
             [lam](double z) { return lam * lam * z * std::exp(-lam * z); },
             0.0, h);
}

}  // namespace disclosure
