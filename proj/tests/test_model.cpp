#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "disclosure/model.hpp"
#include "disclosure/numerics.hpp"

using namespace disclosure;

TEST_CASE("prior beliefs normalize and move the right way") {
  ProjectParams p;
  p.lambda = 1.3;
  double prev_p2 = -1.0;
  for (int i = 0; i <= 1000; ++i) {
    const double t = 6.0 * i / 1000.0;
    const auto b = prior_beliefs(p, t);
    CHECK(std::abs(b.p0 + b.p1 + b.p2 - 1.0) <= 1e-12);
    CHECK(b.p0 >= 0.0);
    CHECK(b.p1 >= 0.0);
    CHECK(b.p2 >= prev_p2);  // completed mass only accumulates
    prev_p2 = b.p2;
  }
  // The one-stage-done mass peaks at t = 1/lambda with value 1/e.
  const double peak = prior_beliefs(p, 1.0 / p.lambda).p1;
  CHECK(peak == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  CHECK(prior_beliefs(p, 0.9 / p.lambda).p1 < peak);
  CHECK(prior_beliefs(p, 1.1 / p.lambda).p1 < peak);

  const auto b2 = prior_beliefs(ProjectParams{}, 2.0);
  CHECK(b2.p0 == doctest::Approx(0.13533528323661269189).epsilon(1e-14));
  CHECK(b2.p1 == doctest::Approx(0.27067056647322538379).epsilon(1e-14));
  CHECK(b2.p2 == doctest::Approx(0.59399415029016192432).epsilon(1e-14));
}

TEST_CASE("no-stop posterior of the intermediate state") {
  ProjectParams p;
  p.lambda = 2.0;
  CHECK(posterior_q1_no_stop(p, 0.0) == 0.0);
  CHECK(posterior_q1_no_stop(p, 1.0) == doctest::Approx(2.0 / 3.0));
  for (int i = 0; i <= 100; ++i) {
    const double q = posterior_q1_no_stop(p, 0.2 * i);
    CHECK(q >= 0.0);
    CHECK(q < 1.0);
  }
}

TEST_CASE("kappa0 is recomputed, not hard-coded, and lands on the constant") {
  CHECK(kappa0() == doctest::Approx(0.29842560752563911948).epsilon(1e-12));
  // y0 solves e^y = 1 + y + y^2; kappa0 = y0 e^{-y0}.
  const double y0 = find_root(
      [](double y) { return std::exp(y) - (1.0 + y + y * y); }, {1.0, 3.0});
  CHECK(y0 == doctest::Approx(1.7932821329007610076).epsilon(1e-10));
  CHECK(kappa0() == doctest::Approx(y0 * std::exp(-y0)).epsilon(1e-10));
}

TEST_CASE("cutoffs at the reference points") {
  ProjectParams p;  // lambda = 1, T = 2
  const auto cs = cutoffs(p);
  CHECK(cs.long_horizon);
  CHECK(cs.kappa_nd == doctest::Approx(0.27067056647322538379).epsilon(1e-13));
  CHECK(cs.kappa_ni == doctest::Approx(0.29842560752563911948).epsilon(1e-12));
  CHECK(cs.kappa_tilde ==
        doctest::Approx(0.40721937370456860866).epsilon(1e-13));
  CHECK(cs.kappa_fi == doctest::Approx(0.46371055825212308747).epsilon(1e-13));

  // Short horizon: the separation inequality fails and the two lowest
  // cutoffs merge at the average-payoff threshold.
  p.T = 1.5;
  const auto ss = cutoffs(p);
  CHECK_FALSE(ss.long_horizon);
  CHECK(ss.kappa_nd == ss.kappa_ni);
  CHECK(ss.kappa_ni == doctest::Approx(0.29478306641928361844).epsilon(1e-13));
  CHECK(ss.kappa_tilde ==
        doctest::Approx(0.36272229732442014794).epsilon(1e-13));
  CHECK(ss.kappa_fi == doctest::Approx(0.43721257597375031079).epsilon(1e-13));
}

TEST_CASE("cutoff ordering holds across the parameter range") {
  // Cap lambda T at 32: past ~36 the top two cutoffs sit closer to 1/2
  // than one double ulp and strict ordering genuinely degenerates.
  RngStream rng(11, 0);
  for (int i = 0; i < 100; ++i) {
    ProjectParams p;
    p.lambda = 0.25 + 3.75 * rng.uniform();
    p.T = 0.5 + 7.5 * rng.uniform();
    const auto cs = cutoffs(p);
    if (cs.long_horizon) {
      CHECK(cs.kappa_nd < cs.kappa_ni);
    } else {
      CHECK(cs.kappa_nd == cs.kappa_ni);
    }
    CHECK(cs.kappa_ni < cs.kappa_tilde);
    CHECK(cs.kappa_tilde < cs.kappa_fi);
    CHECK(cs.kappa_fi < 0.5);
  }
}

TEST_CASE("classification is monotone in kappa with the stated boundaries") {
  ProjectParams p;
  const auto cs = cutoffs(p);
  const auto at = [&](double k) {
    ProjectParams q = p;
    q.c = k * q.v * q.lambda;
    return classify(q);
  };
  CHECK(at(cs.kappa_nd) == Regime::NonDisclosureInvestToT);
  CHECK(at(cs.kappa_nd + 1e-12) == Regime::PostponedDisclosure);
  CHECK(at(cs.kappa_tilde) == Regime::PostponedDisclosure);
  CHECK(at(cs.kappa_tilde + 1e-12) == Regime::InterimDeadline);
  CHECK(at(cs.kappa_fi - 1e-12) == Regime::InterimDeadline);
  CHECK(at(cs.kappa_fi) == Regime::Reject);

  int prev = -1;
  for (int i = 1; i <= 200; ++i) {
    const int cur = static_cast<int>(at(0.6 * i / 200.0));
    CHECK(cur >= prev);
    prev = cur;
  }

  CHECK(regime_name(Regime::NonDisclosureInvestToT) == "non-disclosure");
  CHECK(regime_name(Regime::PostponedDisclosure) == "postponed-disclosure");
  CHECK(regime_name(Regime::InterimDeadline) == "interim-deadline");
  CHECK(regime_name(Regime::Reject) == "reject");
}

TEST_CASE("parameter validation rejects out-of-range fields") {
  const auto bad = [](auto&& mutate) {
    ProjectParams p;
    mutate(p);
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  };
  bad([](ProjectParams& p) { p.lambda = 0.0; });
  bad([](ProjectParams& p) { p.lambda = -1.0; });
  bad([](ProjectParams& p) { p.c = 0.0; });
  bad([](ProjectParams& p) { p.v = -2.0; });
  bad([](ProjectParams& p) { p.T = 0.0; });
  bad([](ProjectParams& p) { p.r = -0.1; });
  bad([](ProjectParams& p) { p.alpha = 0.0; });
  bad([](ProjectParams& p) { p.alpha = 1.5; });
  bad([](ProjectParams& p) { p.beta = -1.0; });
  bad([](ProjectParams& p) {
    p.lambda = std::numeric_limits<double>::quiet_NaN();
  });
  bad([](ProjectParams& p) {
    p.c = std::numeric_limits<double>::infinity();
  });

  ProjectParams ok;
  ok.T = std::numeric_limits<double>::infinity();  // the one allowed infinity
  CHECK_NOTHROW(ok.validate());
  CHECK(ok.is_infinite_horizon());
}

TEST_CASE("params serialize, round-trip, and reject unknown keys") {
  ProjectParams p;
  p.lambda = 1.75;
  p.c = 0.31;
  p.v = 2.5;
  p.T = 3.25;
  p.r = 0.05;
  p.alpha = 0.8;
  p.beta = 1.5;
  const auto q = params_from_json(params_to_json(p));
  CHECK(q.lambda == p.lambda);
  CHECK(q.c == p.c);
  CHECK(q.v == p.v);
  CHECK(q.T == p.T);
  CHECK(q.r == p.r);
  CHECK(q.alpha == p.alpha);
  CHECK(q.beta == p.beta);

  p.T = std::numeric_limits<double>::infinity();
  const std::string text = params_to_json(p);
  CHECK(text.find("\"inf\"") != std::string::npos);
  CHECK(params_from_json(text).is_infinite_horizon());

  CHECK_THROWS_AS(
      (void)params_from_json(R"({"lambda": 1, "c": 0.2, "v": 1, "T": 2,
                                 "lamda": 3})"),
      std::invalid_argument);
  CHECK_THROWS_AS((void)params_from_json("[1, 2]"), std::invalid_argument);
  // Missing required keys, parse errors, and wrong value types must all
  // surface as invalid_argument, never as a third-party exception type.
  CHECK_THROWS_AS((void)params_from_json(R"({"lambda": 1})"),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)params_from_json("{not json"), std::invalid_argument);
  CHECK_THROWS_AS(
      (void)params_from_json(R"({"lambda": "fast", "c": 0.2, "v": 1, "T": 2})"),
      std::invalid_argument);
  CHECK_THROWS_AS(
      (void)params_from_json(R"({"lambda": 1, "c": 0.2, "v": 1, "T": -3})"),
      std::invalid_argument);
}

TEST_CASE("kappa is the cost-benefit ratio") {
  ProjectParams p;
  p.c = 0.3;
  p.v = 2.0;
  p.lambda = 0.75;
  CHECK(p.kappa() == doctest::Approx(0.2).epsilon(1e-15));
}
