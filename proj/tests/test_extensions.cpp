#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>

#include "disclosure/extensions.hpp"
#include "disclosure/model.hpp"

using namespace disclosure;

namespace {

ProjectParams general(double r, double alpha, double T = 2.0) {
  ProjectParams p;  // lambda = 1, v = 1, c = 0.25
  p.r = r;
  p.alpha = alpha;
  p.T = T;
  return p;
}

}  // namespace

TEST_CASE("generalized threshold reduces to the baseline cutoff") {
  ProjectParams p = general(0.0, 1.0);
  CHECK(std::abs(kappa_tilde_general(p) - cutoffs(p).kappa_tilde) <= 1e-9);
  // ... and varies continuously as r leaves zero (exact r = 0 limit, no
  // small-r substitute).
  CHECK(kappa_tilde_general(general(1e-6, 1.0)) ==
        doctest::Approx(0.40721927674290867).epsilon(1e-9));
}

TEST_CASE("generalized threshold at frozen reference points") {
  CHECK(kappa_tilde_general(general(0.1, 1.0)) ==
        doctest::Approx(0.39754323354757678).epsilon(1e-10));
  CHECK(kappa_tilde_general(general(0.1, 0.8)) ==
        doctest::Approx(0.49692904193447098).epsilon(1e-10));
  // alpha scales the threshold exactly: half the share, twice the cutoff.
  const double base = kappa_tilde_general(general(0.0, 1.0));
  CHECK(std::abs(kappa_tilde_general(general(0.0, 0.5)) - 2.0 * base) <=
        1e-12);
  CHECK(kappa_tilde_general(general(0.0, 0.5)) ==
        doctest::Approx(0.81443874740913722).epsilon(1e-10));
}

TEST_CASE("generalized threshold moves the right way") {
  // Discounting makes future completion worth less: threshold falls in r.
  double prev = kappa_tilde_general(general(0.0, 1.0));
  for (double r : {0.05, 0.1, 0.2, 0.5}) {
    const double cur = kappa_tilde_general(general(r, 1.0));
    CHECK(cur < prev);
    prev = cur;
  }
  // A smaller profit share needs a cheaper project: threshold rises as
  // alpha falls.
  prev = kappa_tilde_general(general(0.1, 1.0));
  for (double alpha : {0.9, 0.7, 0.5, 0.3}) {
    const double cur = kappa_tilde_general(general(0.1, alpha));
    CHECK(cur > prev);
    prev = cur;
  }
}

TEST_CASE("structural classification under general preferences") {
  ProjectParams cheap = general(0.1, 0.8);
  cheap.c = 0.3;  // below the 0.4969 threshold
  CHECK(classify_general(cheap) == GeneralRegime::PromisingNoInterimDeadline);
  ProjectParams dear = general(0.1, 0.8);
  dear.c = 0.55;
  CHECK(classify_general(dear) == GeneralRegime::InterimDeadlineRequired);

  CHECK(general_regime_name(GeneralRegime::PromisingNoInterimDeadline) ==
        "promising-no-interim-deadline");
  CHECK(general_regime_name(GeneralRegime::InterimDeadlineRequired) ==
        "interim-deadline-required");

  // alpha = 1 and beta = 0 leaves the agent with no stake at all.
  ProjectParams indifferent = general(0.0, 1.0);
  indifferent.beta = 0.0;
  CHECK_THROWS_AS((void)classify_general(indifferent), std::invalid_argument);
}

TEST_CASE("no-deadline limit") {
  ProjectParams p;
  p.T = std::numeric_limits<double>::infinity();
  p.c = 0.49;
  const auto funded = infinite_horizon(p);
  CHECK(funded.policy_class == Regime::PostponedDisclosure);
  CHECK(funded.v1 == p.v * (1.0 - p.kappa()));

  p.c = 0.5;
  CHECK(infinite_horizon(p).policy_class == Regime::Reject);

  ProjectParams finite;
  CHECK_THROWS_AS((void)infinite_horizon(finite), std::domain_error);
  // The generalized threshold integrates over [0, T]; it needs T finite.
  CHECK_THROWS_AS((void)kappa_tilde_general(p), std::domain_error);
}
