#pragma once

#include <cmath>
#include <stdexcept>

#include "disclosure/model.hpp"

// Internal closed-form building blocks shared by the solver translation
// units. Everything is expressed through two antiderivatives:
//
//   F(a,b) = int_a^b (p1(z) - kappa) dz
//     net flow profit of silent funding: the first-stage mass p1 is the
//     instantaneous completion intensity an uninformed investor earns on,
//     kappa the normalized flow cost.
//
//   G(a,b) = int_a^b e^{-lz} (lz - kappa(1+lz)) dz
//     the same net flow under immediate completion disclosure, weighted by
//     the no-disclosure survival e^{-lz}(1+lz); integrand equals
//     (q1(z) - kappa)(1 - p2(z)).
//
// plus the expected-stop-time kernels for the never-stop plan tau2 ^ T.

namespace disclosure::detail {

struct Kern {
  double lam, v, c, k, T;

  static Kern from(const ProjectParams& p) {
    p.validate();
    if (p.is_infinite_horizon()) {
      throw std::domain_error("finite horizon required");
    }
    return Kern{p.lambda, p.v, p.c, p.kappa(), p.T};
  }

  double p0(double t) const { return std::exp(-lam * t); }
  double p1(double t) const { return lam * t * std::exp(-lam * t); }
  double p2(double t) const {
    return 1.0 - std::exp(-lam * t) * (1.0 + lam * t);
  }
  // P(not complete by t) = 1 - p2(t), the no-stop survival weight under
  // immediate completion disclosure.
  double surv(double t) const {
    return std::exp(-lam * t) * (1.0 + lam * t);
  }

  double anti_f(double z) const {
    return -(z + 1.0 / lam) * std::exp(-lam * z) - k * z;
  }
  double F(double a, double b) const { return anti_f(b) - anti_f(a); }

  double anti_g(double z) const {
    return std::exp(-lam * z) * (k / lam - (1.0 - k) * (z + 1.0 / lam));
  }
  double G(double a, double b) const { return anti_g(b) - anti_g(a); }

  // int_a^b z * l^2 z e^{-lz} dz (completion-time density moment).
  double anti_e2(double z) const {
    const double lz = lam * z;
    return -std::exp(-lam * z) * (lz * lz + 2.0 * lz + 2.0) / lam;
  }
  double E2(double a, double b) const { return anti_e2(b) - anti_e2(a); }

  // E[tau2 ^ T] = 2/l - (2/l)e^{-lT} - T e^{-lT}.
  double etau2T() const {
    const double e = std::exp(-lam * T);
    return 2.0 / lam - (2.0 / lam) * e - T * e;
  }

  // E[tau2 ^ T - t | x_t = 0]: fresh two-stage clock over horizon T - t.
  double sfn0(double t) const {
    const double h = T - t;
    const double e = std::exp(-lam * h);
    return 2.0 / lam - (2.0 / lam) * e - h * e;
  }

  // v P(tau2 <= T | x_t = 0).
  double sv0(double t) const {
    const double lh = lam * (T - t);
    return v * (1.0 - std::exp(-lh) * (1.0 + lh));
  }

  // Investor value in state 0 under the never-stop plan tau2 ^ T.
  double v0cond(double t) const { return sv0(t) - c * sfn0(t); }

  // Investor value in state 1, funding to tau2 ^ T.
  double v1fi(double t) const {
    return (v - c / lam) * (1.0 - std::exp(-lam * (T - t)));
  }

  // Date-0 value of the never-stop plan: v p2(T) - c E[tau2 ^ T].
  double vtau2() const { return v * p2(T) - c * etau2T(); }
};

}  // namespace disclosure::detail
