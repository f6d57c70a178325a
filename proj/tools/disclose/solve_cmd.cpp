#include <memory>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "commands.hpp"
#include "common.hpp"
#include "disclosure/benchmarks.hpp"
#include "disclosure/extensions.hpp"
#include "disclosure/model.hpp"
#include "disclosure/policy.hpp"

namespace disclose {
namespace {

using nlohmann::json;

struct SolveOpts {
  ParamArgs params;
  bool strict = false;
  int grid = 512;
  std::string output;
};

json benchmarks_block(const disclosure::ProjectParams& p) {
  const auto ni = disclosure::solve_no_info(p);
  json jni;
  jni["invests"] = ni.invests;
  jni["s_ni"] = ni.s_ni;
  jni["s_bar_ni"] = ni.s_bar_ni ? json(*ni.s_bar_ni) : json(nullptr);
  jni["v_ni"] = ni.v_ni;

  const auto fi = disclosure::solve_full_info(p);
  json jfi;
  jfi["invests"] = fi.invests;
  jfi["s0_p"] = finite_or_null(fi.s0_p);

  return json{{"no_info", jni}, {"full_info", jfi}};
}

int run_solve(const SolveOpts& o) {
  const disclosure::ProjectParams p = o.params.resolve();

  json doc;
  doc["schema_version"] = 1;
  doc["params"] = embed(disclosure::params_to_json(p));
  doc["kappa"] = p.kappa();
  doc["policy"] = nullptr;
  doc["payoffs"] = nullptr;
  doc["obedience"] = nullptr;
  json warnings = json::array();
  bool short_horizon_warned = false;

  if (p.is_infinite_horizon()) {
    const auto ih = disclosure::infinite_horizon(p);
    doc["regime"] = std::string(disclosure::regime_name(ih.policy_class));
    doc["infinite_horizon"] = json{
        {"policy_class",
         std::string(disclosure::regime_name(ih.policy_class))},
        {"v1", ih.v1}};
    doc["cutoffs"] = nullptr;
    doc["benchmarks"] = nullptr;
    warnings.push_back(
        "infinite horizon: reporting the policy class and the state-1 "
        "funding value only; dated solvers need a finite T");
  } else {
    const auto cs = disclosure::cutoffs(p);
    doc["cutoffs"] = json{{"kappa_nd", cs.kappa_nd},
                          {"kappa_ni", cs.kappa_ni},
                          {"kappa_tilde", cs.kappa_tilde},
                          {"kappa_fi", cs.kappa_fi},
                          {"long_horizon", cs.long_horizon}};
    if (!cs.long_horizon) {
      warnings.push_back(
          "short horizon: e^{lambda T} <= 1 + lambda T + (lambda T)^2, so "
          "the prior-only funding threshold follows the average-payoff rule "
          "and kappa_nd coincides with kappa_ni");
      short_horizon_warned = true;
    }
    doc["benchmarks"] = benchmarks_block(p);

    const bool baseline = (p.r == 0.0 && p.alpha == 1.0);
    if (baseline) {
      doc["regime"] =
          std::string(disclosure::regime_name(disclosure::classify(p)));
      const auto policy = disclosure::optimal_policy(p);
      if (policy) {
        doc["policy"] = embed(disclosure::policy_to_json(*policy));
        const auto pay = disclosure::analytic_payoffs(p, *policy);
        doc["payoffs"] = json{{"e_tau", pay.e_tau},
                              {"p_complete", pay.p_complete},
                              {"w_agent", pay.w_agent},
                              {"v_principal", pay.v_principal}};
        const auto ob = disclosure::verify_obedience(p, *policy, o.grid);
        doc["obedience"] = json{
            {"feasible", ob.feasible},
            {"min_continuation_value", ob.min_continuation_value},
            {"argmin_t", ob.argmin_t},
            {"post_stop_value", ob.post_stop_value},
            {"post_stop_ok", ob.post_stop_ok},
            {"grid_size", ob.grid_size}};
      }
      if (p.beta != 1.0) {
        warnings.push_back(
            "beta != 1 only rescales the agent's realized flow benefit; "
            "w_agent is the beta = 1 figure c * E[tau]");
      }
    } else {
      json gen;
      gen["kappa_tilde_general"] = disclosure::kappa_tilde_general(p);
      try {
        const auto gr = disclosure::classify_general(p);
        gen["regime"] = std::string(disclosure::general_regime_name(gr));
        doc["regime"] = gen["regime"];
      } catch (const std::invalid_argument& e) {
        gen["regime"] = nullptr;
        doc["regime"] = nullptr;
        warnings.push_back(e.what());
      }
      doc["general"] = gen;
      warnings.push_back(
          "discounting or payoff sharing active: reporting the generalized "
          "disclosure threshold and classification only; dated policy "
          "solvers assume r = 0 and alpha = 1");
    }
  }

  doc["warnings"] = warnings;
  write_output(o.output, doc.dump(2) + "\n");
  return (o.strict && short_horizon_warned) ? 3 : 0;
}

}  // namespace

void register_solve(CLI::App& app, int& exit_code) {
  auto opts = std::make_shared<SolveOpts>();
  CLI::App* cmd = app.add_subcommand(
      "solve",
      "Classify the disclosure regime and solve one instance; JSON report");
  opts->params.add_flags(*cmd);
  cmd->add_flag("--strict", opts->strict,
                "Exit 3 when the short-horizon warning fires");
  cmd->add_option("--grid", opts->grid,
                  "Grid points per policy phase for the obedience check")
      ->check(CLI::Range(2, 1000000));
  cmd->add_option("-o,--output", opts->output,
                  "Write the report here instead of stdout");
  cmd->callback([opts, &exit_code]() { exit_code = run_solve(*opts); });
}

}  // namespace disclose
