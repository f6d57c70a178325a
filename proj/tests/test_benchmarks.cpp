#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>

#include "disclosure/benchmarks.hpp"
#include "disclosure/model.hpp"

using namespace disclosure;

namespace {

ProjectParams with_kappa(double kappa, double T = 2.0) {
  ProjectParams p;  // lambda = 1, v = 1
  p.c = kappa;
  p.T = T;
  return p;
}

}  // namespace

TEST_CASE("prior-only interior stop dates") {
  // -W_{-1}(-kappa)/lambda: where the prior p1 falls back through kappa.
  CHECK(*solve_no_info(with_kappa(0.20)).s_bar_ni ==
        doctest::Approx(2.5426413577735264538).epsilon(1e-13));
  CHECK(*solve_no_info(with_kappa(0.28)).s_bar_ni ==
        doctest::Approx(1.9310076311864248313).epsilon(1e-13));
  CHECK(*solve_no_info(with_kappa(0.35)).s_bar_ni ==
        doctest::Approx(1.3497172521922488497).epsilon(1e-13));
  // At the interior optimum the prior p1 equals kappa.
  ProjectParams p = with_kappa(0.2, 10.0);
  const auto sol = solve_no_info(p);
  CHECK(prior_beliefs(p, *sol.s_bar_ni).p1 == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("prior-only plan clamps the stop date to the horizon") {
  // kappa = 0.2, T = 2: interior optimum 2.54... exceeds T, fund to T.
  const auto clamped = solve_no_info(with_kappa(0.2, 2.0));
  CHECK(clamped.invests);
  CHECK(clamped.s_ni == 2.0);
  CHECK(clamped.v_ni == doctest::Approx(0.19399415029016192432).epsilon(1e-13));

  // Same kappa, T = 10: the interior optimum binds.
  const auto interior = solve_no_info(with_kappa(0.2, 10.0));
  CHECK(interior.invests);
  CHECK(interior.s_ni == doctest::Approx(2.5426413577735264538).epsilon(1e-13));
  CHECK(interior.v_ni ==
        doctest::Approx(0.21281336815844295).epsilon(1e-11));
  CHECK(interior.v_ni > clamped.v_ni);  // longer horizon can only help
}

TEST_CASE("prior-only plan detects non-participation") {
  // kappa = 0.44 > 1/e: p1 never reaches kappa, no interior optimum, and
  // the full-funding value is negative, so the investor stays out.
  const auto out = solve_no_info(with_kappa(0.44));
  CHECK_FALSE(out.invests);
  CHECK_FALSE(out.s_bar_ni.has_value());
  CHECK(out.v_ni == 0.0);
  CHECK(out.s_ni == 0.0);

  // kappa = 0.32 < 1/e: an interior candidate exists but its value is
  // still negative at T = 2, so the investor stays out with the date set.
  const auto marginal = solve_no_info(with_kappa(0.32));
  CHECK_FALSE(marginal.invests);
  CHECK(marginal.s_bar_ni.has_value());
  CHECK(marginal.v_ni == 0.0);
}

TEST_CASE("prior-only continuation value") {
  ProjectParams p = with_kappa(0.2, 10.0);
  CHECK(no_info_continuation(p, 1.0) ==
        doctest::Approx(0.1485722505013276).epsilon(1e-10));
  // At t = 0 the continuation is the whole plan's value.
  CHECK(no_info_continuation(p, 0.0) ==
        doctest::Approx(solve_no_info(p).v_ni).epsilon(1e-12));
  // At the stop date nothing is left.
  CHECK(no_info_continuation(p, *solve_no_info(p).s_bar_ni) ==
        doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  CHECK_THROWS_AS((void)no_info_continuation(with_kappa(0.44), 0.5),
                  std::domain_error);
}

TEST_CASE("observed-state benchmark") {
  const auto fi = solve_full_info(with_kappa(0.44));
  CHECK(fi.invests);
  CHECK(fi.s0_p == doctest::Approx(0.45955495905285108).epsilon(1e-12));

  // kappa = 1/2 is the hard ceiling: even a state-1 project only breaks even.
  CHECK(std::isinf(solve_full_info(with_kappa(0.5)).s0_p));
  CHECK(solve_full_info(with_kappa(0.5)).s0_p < 0.0);
  CHECK_FALSE(solve_full_info(with_kappa(0.5)).invests);

  // Below kappa_fi the state-0 abandon date is strictly inside (0, T).
  const auto cs = cutoffs(with_kappa(0.44));
  CHECK(cs.kappa_fi > 0.44);
  CHECK(fi.s0_p > 0.0);
  CHECK(fi.s0_p < 2.0);
}

TEST_CASE("state-conditional stopping-time blocks") {
  ProjectParams p = with_kappa(0.44);
  CHECK(exp_stop_given_state1(p, 0.0) ==
        doctest::Approx(0.86466471676338731).epsilon(1e-13));
  CHECK(exp_stop_given_state0(p, 0.0) ==
        doctest::Approx(1.4586588670535492).epsilon(1e-13));
  CHECK(surplus_given_state0(ProjectParams{}, 0.0) ==
        doctest::Approx(0.59399415029016192432).epsilon(1e-13));
  CHECK(full_info_state1_value(p, 1.5) ==
        doctest::Approx(0.22034283056092528).epsilon(1e-12));

  // The state-0 expectations decompose: E[stop|x=0] - E[stop|x=1] is the
  // expected time spent finishing the first stage before T.
  CHECK(exp_stop_given_state0(p, 0.5) > exp_stop_given_state1(p, 0.5));
  // All blocks vanish at the horizon.
  CHECK(exp_stop_given_state1(p, 2.0) == doctest::Approx(0.0));
  CHECK(exp_stop_given_state0(p, 2.0) == doctest::Approx(0.0));
  CHECK(surplus_given_state0(p, 2.0) == doctest::Approx(0.0));
}

TEST_CASE("quadrature routes reproduce the closed forms") {
  ProjectParams p;
  p.lambda = 1.7;
  p.T = 3.0;
  p.c = 0.3;
  for (double t : {0.0, 0.4, 1.1, 2.9}) {
    CHECK(std::abs(exp_stop_given_state0_quadrature(p, t) -
                   exp_stop_given_state0(p, t)) <= 1e-10);
    CHECK(std::abs(surplus_given_state0_quadrature(p, t) -
                   surplus_given_state0(p, t)) <= 1e-10);
  }
}

TEST_CASE("benchmarks require a finite horizon") {
  ProjectParams p = with_kappa(0.2);
  p.T = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS((void)solve_no_info(p), std::domain_error);
  CHECK_THROWS_AS((void)solve_full_info(p), std::domain_error);
}
