#include <cmath>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"
#include "common.hpp"
#include "disclosure/benchmarks.hpp"
#include "disclosure/extensions.hpp"
#include "disclosure/model.hpp"
#include "disclosure/policy.hpp"

namespace disclose {
namespace {

struct SweepOpts {
  ParamArgs params;
  std::string param;
  double min = 0.0;
  double max = 0.0;
  int steps = 100;
  std::string output;
};

// One CSV cell: empty when the column does not apply to the row's regime.
std::string cell(const std::optional<double>& x) {
  return x ? num_str(*x) : std::string();
}

void baseline_row(std::ostream& os, const disclosure::ProjectParams& q,
                  double value) {
  const auto regime = disclosure::classify(q);
  std::optional<double> s0_a, s0_p, s_star, e_tau, v_pr, w_ag;

  const auto fi = disclosure::solve_full_info(q);
  if (std::isfinite(fi.s0_p)) s0_p = fi.s0_p;

  if (const auto policy = disclosure::optimal_policy(q)) {
    if (const auto* d = std::get_if<disclosure::InterimDeadline>(&*policy)) {
      s0_a = d->s0_a;
    }
    if (const auto* s = std::get_if<disclosure::PostponedDisclosure>(&*policy)) {
      s_star = s->s_star;
    }
    const auto pay = disclosure::analytic_payoffs(q, *policy);
    e_tau = pay.e_tau;
    v_pr = pay.v_principal;
    w_ag = pay.w_agent;
  } else {
    // Rejected project: funding never starts, all payoffs are zero.
    e_tau = 0.0;
    v_pr = 0.0;
    w_ag = 0.0;
  }

  os << num_str(value) << ',' << disclosure::regime_name(regime) << ','
     << cell(s0_a) << ',' << cell(s0_p) << ',' << cell(s_star) << ','
     << cell(e_tau) << ',' << cell(v_pr) << ',' << cell(w_ag) << '\n';
}

void general_row(std::ostream& os, const disclosure::ProjectParams& q,
                 double value) {
  const auto regime = disclosure::classify_general(q);
  os << num_str(value) << ',' << disclosure::general_regime_name(regime)
     << ",,,,,,\n";
}

int run_sweep(const SweepOpts& o) {
  const disclosure::ProjectParams base = o.params.resolve();
  if (!(o.min < o.max)) {
    throw std::invalid_argument("sweep: --min must be strictly below --max");
  }

  const bool general = (o.param == "r" || o.param == "alpha");
  if (!general && (base.r != 0.0 || base.alpha != 1.0)) {
    throw std::invalid_argument(
        "sweep: sweeping " + o.param +
        " uses the dated policy solvers, which assume r = 0 and alpha = 1; "
        "sweep r or alpha instead, or fix baseline preferences");
  }

  std::ostringstream csv;
  csv << "value,regime,s0_a,s0_p,s_star,e_tau,v_principal,w_agent\n";

  for (int i = 0; i < o.steps; ++i) {
    const double value =
        o.min + (o.max - o.min) * static_cast<double>(i) / (o.steps - 1);
    disclosure::ProjectParams q = base;
    if (o.param == "kappa") {
      q.c = value * q.v * q.lambda;  // cutoffs stay put when only c moves
    } else if (o.param == "T") {
      q.T = value;
    } else if (o.param == "lambda") {
      q.lambda = value;
    } else if (o.param == "r") {
      q.r = value;
    } else {
      q.alpha = value;
    }
    try {
      q.validate();
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("sweep: " + o.param + " = " +
                                  num_str(value) + ": " + e.what());
    }
    if (general) {
      general_row(csv, q, value);
    } else {
      baseline_row(csv, q, value);
    }
  }

  write_output(o.output, csv.str());
  return 0;
}

}  // namespace

void register_sweep(CLI::App& app, int& exit_code) {
  auto opts = std::make_shared<SweepOpts>();
  CLI::App* cmd = app.add_subcommand(
      "sweep", "Solve along a parameter grid; CSV on stdout");
  opts->params.add_flags(*cmd);
  cmd->add_option("--param", opts->param, "Swept parameter")
      ->required()
      ->check(CLI::IsMember({"kappa", "T", "lambda", "r", "alpha"}));
  cmd->add_option("--min", opts->min, "Lowest swept value")->required();
  cmd->add_option("--max", opts->max, "Highest swept value")->required();
  cmd->add_option("--steps", opts->steps, "Grid points, endpoints included")
      ->check(CLI::Range(2, 10000000));
  cmd->add_option("-o,--output", opts->output,
                  "Write the CSV here instead of stdout");
  cmd->callback([opts, &exit_code]() { exit_code = run_sweep(*opts); });
}

}  // namespace disclose
