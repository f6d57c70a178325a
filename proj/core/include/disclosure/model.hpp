#pragma once

#include <string>
#include <string_view>

// Primitives of the funding relationship: a two-stage project whose stages
// complete at independent exponential times with common rate lambda, an
// investor who pays flow cost c until stopping and collects v when the
// finished project is disclosed, and a horizon T. The single dimensionless
// quantity kappa = c / (v * lambda) orders every regime cutoff.

namespace disclosure {

struct ProjectParams {
  double lambda = 1.0;  // per-stage completion rate
  double c = 0.25;      // investor flow cost
  double v = 1.0;       // investor payoff on disclosed completion
  double T = 2.0;       // horizon (may be +infinity for the no-deadline case)
  double r = 0.0;       // discount rate
  double alpha = 1.0;   // investor's share of the completion payoff
  double beta = 1.0;    // agent's flow benefit per unit of funding cost

  // Cost per unit of expected stage progress; the model's only free knob
  // once time is measured in units of 1/lambda and money in units of v.
  double kappa() const { return c / (v * lambda); }

  bool is_infinite_horizon() const;

  // Throws std::invalid_argument on any out-of-range field
  // (lambda, c, v, T > 0; r >= 0; alpha in (0, 1]; beta >= 0).
  void validate() const;
};

// Serialization keys: lambda, c, v, T, r, alpha, beta. Unknown keys are
// rejected to catch misspelled configs. T = +infinity round-trips as the
// string "inf" since JSON lacks an infinity literal. Any malformed document
// (parse error, missing/non-numeric field, out-of-range value) throws
// std::invalid_argument.
std::string params_to_json(const ProjectParams& p, int indent = 2);
ProjectParams params_from_json(std::string_view json_text);

struct BeliefState {
  double p0 = 0.0;  // no stage finished
  double p1 = 0.0;  // exactly the first stage finished
  double p2 = 0.0;  // both stages finished
};

// Outside-observer beliefs at time t when nothing has been disclosed:
// p0 = e^{-lt}, p1 = lt e^{-lt}, p2 = 1 - p0 - p1 (l = lambda).
BeliefState prior_beliefs(const ProjectParams& p, double t);

// Probability the first stage is done conditional on the project not being
// complete: lt / (1 + lt). This is the investor's belief along any policy
// that discloses completion immediately, given no disclosure by t.
double posterior_q1_no_stop(const ProjectParams& p, double t);

// Root y0 of e^y = 1 + y + y^2 and the derived constant kappa0 = y0 e^{-y0}.
// Computed once at first use by root finding (not hard-coded) and checked
// against its documented value to 1e-5 before being served.
double kappa0();

struct CutoffSet {
  double kappa_nd = 0.0;     // below: silence is already investor-optimal
  double kappa_ni = 0.0;     // below: the investor funds to T with no news
  double kappa_tilde = 0.0;  // below: a promise of later disclosure suffices
  double kappa_fi = 0.0;     // above: no policy attracts funding
  bool long_horizon = true;  // lambda T > y0, so the two lowest cutoffs separate
};

// The four regime cutoffs at the given (lambda, T). Ordering
// kappa_nd <= kappa_ni <= kappa_tilde < kappa_fi holds whenever
// e^{lT} > lT(lT + 1) + 1 (equivalently lT > y0); when that fails the
// first two cutoffs coincide, long_horizon is false, and kappa_nd
// is set to kappa_ni. Requires a finite horizon.
CutoffSet cutoffs(const ProjectParams& p);

enum class Regime {
  NonDisclosureInvestToT,  // kappa <= kappa_nd
  PostponedDisclosure,     // kappa in (kappa_nd, kappa_tilde]
  InterimDeadline,         // kappa in (kappa_tilde, kappa_fi)
  Reject,                  // kappa >= kappa_fi
};

Regime classify(const ProjectParams& p);

// Stable lowercase-hyphen names used in CLI output and policy JSON.
std::string_view regime_name(Regime r);

}  // namespace disclosure
