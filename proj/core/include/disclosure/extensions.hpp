#pragma once

#include <string_view>

#include "disclosure/model.hpp"

// Beyond the baseline preferences: discounting r, investor profit share
// alpha, agent flow benefit beta, and the no-deadline limit T = infinity.

namespace disclosure {

// Cost-benefit threshold below which a promise of eventual disclosure is
// enough to keep the investor funding to tau2 ^ T:
//   (1/(lambda alpha)) * E[e^{-r (tau2^T)} 1{tau2 <= T}]
//                      / E[ int_0^{tau2^T} e^{-rs} ds ].
// Both expectations integrate the completion-time density l^2 z e^{-lz}
// over [0, T] by quadrature (plus the no-completion atom at T in the
// denominator). r = 0 uses the exact limit (annuity = t), not a small-r
// substitute. Reduces to cutoffs().kappa_tilde at r = 0, alpha = 1.
double kappa_tilde_general(const ProjectParams& p);

enum class GeneralRegime {
  PromisingNoInterimDeadline,  // kappa <= generalized threshold
  InterimDeadlineRequired,
};

// Structural classification only: the generalized setting pins down which
// shape the optimal mechanism takes, not its exact dates, so no solver
// accompanies this. Throws std::invalid_argument for alpha = 1, beta = 0
// (the agent is indifferent and discloses nothing).
GeneralRegime classify_general(const ProjectParams& p);

std::string_view general_regime_name(GeneralRegime r);

struct InfiniteHorizonSolution {
  // PostponedDisclosure when kappa < 1/2, Reject otherwise; an interim
  // deadline never helps without an exogenous horizon.
  Regime policy_class = Regime::Reject;
  // Investor value in state 1 when funding to completion: v(1 - kappa).
  double v1 = 0.0;
};

// The no-deadline limit. Requires the T = +infinity sentinel.
InfiniteHorizonSolution infinite_horizon(const ProjectParams& p);

}  // namespace disclosure
