// Microbenchmarks for the numeric kernels and solver entry points.
//
// Run:  ./benchmarks/disclosure_bench [--benchmark_filter=<regex>]
//
// The fixtures mirror the parameter ranges the solvers see in practice:
// a unit-rate project over a couple of time units, with the cost share
// placed in each of the disclosure regimes.

#include <benchmark/benchmark.h>

#include <cmath>

#include "disclosure/benchmarks.hpp"
#include "disclosure/extensions.hpp"
#include "disclosure/model.hpp"
#include "disclosure/numerics.hpp"
#include "disclosure/policy.hpp"
#include "disclosure/simulate.hpp"

namespace {

using namespace disclosure;

ProjectParams params_with_kappa(double kappa) {
  ProjectParams p;  // lambda = 1, v = 1, T = 2
  p.c = kappa;      // kappa = c / (v * lambda)
  return p;
}

// --- numerics ---------------------------------------------------------

void BM_LambertW0(benchmark::State& state) {
  // Arguments span the principal branch: near the -1/e branch point,
  // mid-range, and the large-x asymptotic region.
  const double xs[] = {-0.3678, -0.2, 0.5, 3.0, 50.0};
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(lambert_w0(xs[i]));
    i = (i + 1) % std::size(xs);
  }
}
BENCHMARK(BM_LambertW0);

void BM_LambertWm1(benchmark::State& state) {
  // Lower branch: near the branch point and deep into the tail where the
  // initial guess comes from the log-log asymptotic.
  const double xs[] = {-0.3678, -0.25, -0.05, -1e-6, -1e-12};
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(lambert_wm1(xs[i]));
    i = (i + 1) % std::size(xs);
  }
}
BENCHMARK(BM_LambertWm1);

void BM_FindRoot(benchmark::State& state) {
  // The transcendental threshold equation solved during cutoff
  // classification: e^y = 1 + y + y^2 on [1, 3].
  const auto f = [](double y) { return std::exp(y) - (1.0 + y + y * y); };
  for (auto _ : state) {
    benchmark::DoNotOptimize(find_root(f, Bracket{1.0, 3.0}));
  }
}
BENCHMARK(BM_FindRoot);

void BM_Integrate(benchmark::State& state) {
  // Adaptive Simpson on a smooth integrand of the kind the quadrature
  // cross-checks use.
  const auto f = [](double t) { return t * std::exp(-t) / (1.0 + t * t); };
  for (auto _ : state) {
    benchmark::DoNotOptimize(integrate(f, 0.0, 2.0));
  }
}
BENCHMARK(BM_Integrate);

// --- model / benchmarks ----------------------------------------------

void BM_Cutoffs(benchmark::State& state) {
  const ProjectParams p = params_with_kappa(0.35);
  for (auto _ : state) {
    benchmark::DoNotOptimize(cutoffs(p));
  }
}
BENCHMARK(BM_Cutoffs);

void BM_NoInfoBenchmark(benchmark::State& state) {
  const ProjectParams p = params_with_kappa(0.28);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_no_info(p));
  }
}
BENCHMARK(BM_NoInfoBenchmark);

void BM_FullInfoBenchmark(benchmark::State& state) {
  const ProjectParams p = params_with_kappa(0.44);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_full_info(p));
  }
}
BENCHMARK(BM_FullInfoBenchmark);

// --- policy solvers ---------------------------------------------------

void BM_SolvePostponedStart(benchmark::State& state) {
  const ProjectParams p = params_with_kappa(0.35);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_postponed_start(p));
  }
}
BENCHMARK(BM_SolvePostponedStart);

void BM_SolveInterimDeadline(benchmark::State& state) {
  const ProjectParams p = params_with_kappa(0.44);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_interim_deadline(p));
  }
}
BENCHMARK(BM_SolveInterimDeadline);

void BM_OptimalPolicy(benchmark::State& state) {
  // Full classify-then-solve dispatch, cycling through the regimes.
  const ProjectParams ps[] = {params_with_kappa(0.2), params_with_kappa(0.35),
                              params_with_kappa(0.44)};
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(optimal_policy(ps[i]));
    i = (i + 1) % std::size(ps);
  }
}
BENCHMARK(BM_OptimalPolicy);

void BM_DelayedSchedule(benchmark::State& state) {
  ProjectParams p = params_with_kappa(0.2);
  p.T = 10.0;
  const DelayedDisclosure policy = make_delayed_policy(p);
  const double ts[] = {policy.start + 0.1, 4.0, 7.0, 9.9};
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(delayed_disclosure_schedule(p, ts[i]));
    i = (i + 1) % std::size(ts);
  }
}
BENCHMARK(BM_DelayedSchedule);

void BM_ContinuationValue(benchmark::State& state) {
  const ProjectParams p = params_with_kappa(0.44);
  const Policy policy = solve_interim_deadline(p);
  const double ts[] = {0.0, 0.5, 1.0, 1.9};
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(continuation_value(p, policy, ts[i]));
    i = (i + 1) % std::size(ts);
  }
}
BENCHMARK(BM_ContinuationValue);

void BM_ContinuationValueOde(benchmark::State& state) {
  const ProjectParams p = params_with_kappa(0.44);
  const Policy policy = solve_interim_deadline(p);
  for (auto _ : state) {
    benchmark::DoNotOptimize(continuation_value_ode(p, policy, 0.5));
  }
}
BENCHMARK(BM_ContinuationValueOde);

void BM_VerifyObedience(benchmark::State& state) {
  const ProjectParams p = params_with_kappa(0.35);
  const Policy policy = solve_postponed_start(p);
  const int grid = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(verify_obedience(p, policy, grid));
  }
}
BENCHMARK(BM_VerifyObedience)->Arg(64)->Arg(512);

void BM_AnalyticPayoffs(benchmark::State& state) {
  const ProjectParams p = params_with_kappa(0.44);
  const Policy policy = solve_interim_deadline(p);
  for (auto _ : state) {
    benchmark::DoNotOptimize(analytic_payoffs(p, policy));
  }
}
BENCHMARK(BM_AnalyticPayoffs);

// --- extensions -------------------------------------------------------

void BM_KappaTildeGeneral(benchmark::State& state) {
  ProjectParams p = params_with_kappa(0.35);
  p.r = 0.1;
  p.alpha = 0.8;
  for (auto _ : state) {
    benchmark::DoNotOptimize(kappa_tilde_general(p));
  }
}
BENCHMARK(BM_KappaTildeGeneral);

// --- Monte Carlo ------------------------------------------------------

void BM_Estimate(benchmark::State& state) {
  const ProjectParams p = params_with_kappa(0.44);
  const Policy policy = solve_interim_deadline(p);
  const auto n = static_cast<std::int64_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(estimate(p, policy, n, 42, 1));
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_Estimate)->Arg(1000)->Arg(10000)->Unit(benchmark::kMicrosecond);

void BM_GridSearchOracle(benchmark::State& state) {
  const ProjectParams p = params_with_kappa(0.35);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        grid_search_oracle(p, PolicyFamily::StartDate, 16, 1000, 42));
  }
  state.SetLabel("16-point grid, 1000 paths");
}
BENCHMARK(BM_GridSearchOracle)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
