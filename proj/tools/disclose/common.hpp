#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "disclosure/model.hpp"

namespace CLI {
class App;
}

namespace disclose {

// Model-parameter flags shared by every subcommand. Values resolve in
// layers: library defaults, then --config (either a bare parameter
// document or a full solve report, whose "params" member is used), then
// any explicit flag on top. resolve() throws std::invalid_argument with a
// printable message on unreadable config or out-of-range values.
struct ParamArgs {
  std::optional<double> lambda;
  std::optional<double> c;
  std::optional<double> v;
  std::optional<double> T;
  std::optional<double> r;
  std::optional<double> alpha;
  std::optional<double> beta;
  std::string config_path;

  void add_flags(CLI::App& cmd);
  disclosure::ProjectParams resolve() const;
};

// Shortest decimal string that parses back to exactly the same double.
std::string num_str(double x);

// Seed resolution: explicit flag > PERSUADE_SEED env var > fixed default.
std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag);

// Parse a core *_to_json string into a DOM for embedding in a report.
nlohmann::json embed(const std::string& json_text);

// null for non-finite values (JSON has no infinity literal).
nlohmann::json finite_or_null(double x);

// Write text to path, or to stdout when path is empty.
void write_output(const std::string& path, const std::string& text);

}  // namespace disclose
