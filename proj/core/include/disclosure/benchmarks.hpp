#pragma once

#include <optional>

#include "disclosure/model.hpp"

// Reference solutions the disclosure mechanisms are measured against: the
// investor acting on priors alone (no information) and the investor
// observing stage completions directly (full information).

namespace disclosure {

struct NoInfoSolution {
  // Stop date actually used: min(interior optimum, T), or 0 when not
  // investing at all.
  double s_ni = 0.0;
  // Interior optimum -W_{-1}(-kappa)/lambda, where the prior first-stage
  // mass p1 falls back through kappa. Undefined (not clamped) once
  // kappa >= 1/e, where p1 never reaches kappa.
  std::optional<double> s_bar_ni;
  // Value of the best prior-only plan, floored at zero.
  double v_ni = 0.0;
  bool invests = false;
};

NoInfoSolution solve_no_info(const ProjectParams& p);

// Value at t of continuing the prior-only plan to its stop date
// min(T, s_bar_ni): [p2(stop) - p2(t)]v - c(stop - t). Requires
// kappa < 1/e so the interior optimum exists.
double no_info_continuation(const ProjectParams& p, double t);

struct FullInfoSolution {
  // Date at which an investor who sees the state abandons a still-stage-0
  // project: T + ln((1-2k)/(1-k))/lambda. -infinity when kappa >= 1/2
  // (no start date works). May be negative for kappa in (kappa_fi, 1/2):
  // the investor would not fund state 0 at all.
  double s0_p = 0.0;
  bool invests = false;
};

FullInfoSolution solve_full_info(const ProjectParams& p);

// Expected remaining funding time E[tau2 ^ T - t | x_t = 1]:
// (1/l)(1 - e^{-l(T-t)}).
double exp_stop_given_state1(const ProjectParams& p, double t);

// Expected remaining funding time E[tau2 ^ T - t | x_t = 0] when funding
// continues to completion or T: 2/l - (2/l)e^{-l(T-t)} - (T-t)e^{-l(T-t)}.
double exp_stop_given_state0(const ProjectParams& p, double t);

// Completion surplus v P(tau2 <= T | x_t = 0):
// v[1 - e^{-l(T-t)} - l(T-t)e^{-l(T-t)}].
double surplus_given_state0(const ProjectParams& p, double t);

// Investor value in state 1 under direct observation, funding to tau2 ^ T:
// (v - c/l)(1 - e^{-l(T-t)}).
double full_info_state1_value(const ProjectParams& p, double t);

// Quadrature counterparts of the two state-0 expectations, integrating the
// remaining-completion-time density l^2 z e^{-lz} directly. Slower; exist
// so tests can cross-check the closed forms through an independent route.
double exp_stop_given_state0_quadrature(const ProjectParams& p, double t);
double surplus_given_state0_quadrature(const ProjectParams& p, double t);

}  // namespace disclosure
