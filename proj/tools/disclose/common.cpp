#include "common.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

#include <CLI11.hpp>

namespace disclose {

void ParamArgs::add_flags(CLI::App& cmd) {
  cmd.add_option("--lambda", lambda, "Per-stage completion rate");
  cmd.add_option("--c", c, "Investor flow cost");
  cmd.add_option("--v", v, "Payoff on disclosed completion");
  cmd.add_option("--T", T, "Horizon (\"inf\" only via --config)");
  cmd.add_option("--r", r, "Discount rate (default 0)");
  cmd.add_option("--alpha", alpha, "Investor's share of the payoff (default 1)");
  cmd.add_option("--beta", beta, "Agent's flow benefit per unit cost (default 1)");
  cmd.add_option("--config", config_path,
                 "JSON parameter file; a solve report works too (its "
                 "\"params\" member is used). Explicit flags override it.");
}

disclosure::ProjectParams resolve_params_impl(const ParamArgs& a) {
  disclosure::ProjectParams p;
  if (!a.config_path.empty()) {
    std::ifstream in(a.config_path);
    if (!in) {
      throw std::invalid_argument("cannot open config file: " + a.config_path);
    }
    std::stringstream buf;
    buf << in.rdbuf();
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(buf.str());
    } catch (const nlohmann::json::exception& e) {
      throw std::invalid_argument(a.config_path + ": " + e.what());
    }
    if (doc.is_object() && doc.contains("params")) {
      doc = doc.at("params");
    }
    p = disclosure::params_from_json(doc.dump());
  }
  if (a.lambda) p.lambda = *a.lambda;
  if (a.c) p.c = *a.c;
  if (a.v) p.v = *a.v;
  if (a.T) p.T = *a.T;
  if (a.r) p.r = *a.r;
  if (a.alpha) p.alpha = *a.alpha;
  if (a.beta) p.beta = *a.beta;
  p.validate();
  return p;
}

disclosure::ProjectParams ParamArgs::resolve() const {
  return resolve_params_impl(*this);
}

std::string num_str(double x) {
  char buf[40];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc{}) throw std::runtime_error("num_str: to_chars failed");
  return std::string(buf, end);
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("PERSUADE_SEED")) {
    char* end = nullptr;
    const unsigned long long val = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && end != env) return val;
    throw std::invalid_argument(std::string("PERSUADE_SEED is not an integer: ") + env);
  }
  return 42;
}

nlohmann::json embed(const std::string& json_text) {
  return nlohmann::json::parse(json_text);
}

nlohmann::json finite_or_null(double x) {
  if (std::isfinite(x)) return x;
  return nullptr;
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot open output file: " + path);
  out << text;
}

}  // namespace disclose
