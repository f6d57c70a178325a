// JSON (de)serialization for the public document types. nlohmann::json is
// confined to this translation unit so the installed library carries no
// third-party headers in its public surface.

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "disclosure/model.hpp"
#include "disclosure/policy.hpp"

namespace disclosure {

namespace {

using nlohmann::json;

// Every malformed document must surface as std::invalid_argument, so callers
// never see a third-party exception type.
json parse_document(std::string_view text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string(what) + ": " + e.what());
  }
}

double number_or_inf(const json& j, const std::string& key) {
  if (!j.contains(key)) {
    throw std::invalid_argument("params: missing key \"" + key + "\"");
  }
  const auto& val = j.at(key);
  if (val.is_string()) {
    if (val.get<std::string>() == "inf") {
      return std::numeric_limits<double>::infinity();
    }
    throw std::invalid_argument("params: non-numeric value for " + key);
  }
  if (!val.is_number()) {
    throw std::invalid_argument("params: non-numeric value for " + key);
  }
  return val.get<double>();
}

double require_number(const json& j, const std::string& key) {
  if (!j.contains(key) || !j.at(key).is_number()) {
    throw std::invalid_argument("policy: missing or non-numeric \"" + key +
                                "\"");
  }
  return j.at(key).get<double>();
}

}  // namespace

std::string params_to_json(const ProjectParams& p, int indent) {
  json j;
  j["lambda"] = p.lambda;
  j["c"] = p.c;
  j["v"] = p.v;
  if (std::isinf(p.T)) {
    j["T"] = "inf";  // JSON has no infinity literal
  } else {
    j["T"] = p.T;
  }
  j["r"] = p.r;
  j["alpha"] = p.alpha;
  j["beta"] = p.beta;
  return j.dump(indent);
}

ProjectParams params_from_json(std::string_view json_text) {
  json j = parse_document(json_text, "params");
  if (!j.is_object()) {
    throw std::invalid_argument("params: document must be a JSON object");
  }
  static constexpr const char* kKnown[] = {"lambda", "c",     "v",   "T",
                                           "r",      "alpha", "beta"};
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* key : kKnown) {
      if (item.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw std::invalid_argument("params: unknown key \"" + item.key() +
                                  "\"");
    }
  }
  ProjectParams p;
  p.lambda = number_or_inf(j, "lambda");
  p.c = number_or_inf(j, "c");
  p.v = number_or_inf(j, "v");
  p.T = number_or_inf(j, "T");
  if (j.contains("r")) p.r = number_or_inf(j, "r");
  if (j.contains("alpha")) p.alpha = number_or_inf(j, "alpha");
  if (j.contains("beta")) p.beta = number_or_inf(j, "beta");
  p.validate();
  return p;
}

std::string policy_to_json(const Policy& policy, int indent) {
  json j;
  j["type"] = std::string(policy_type_name(policy));
  std::visit(
      [&j](const auto& alt) {
        using A = std::decay_t<decltype(alt)>;
        if constexpr (std::is_same_v<A, PostponedDisclosure>) {
          j["s_star"] = alt.s_star;
        } else if constexpr (std::is_same_v<A, InterimDeadline>) {
          j["s0_a"] = alt.s0_a;
        } else if constexpr (std::is_same_v<A, DelayedDisclosure>) {
          j["start"] = alt.start;
        }
      },
      policy);
  return j.dump(indent);
}

Policy policy_from_json(std::string_view json_text) {
  json j = parse_document(json_text, "policy");
  if (!j.is_object() || !j.contains("type") || !j.at("type").is_string()) {
    throw std::invalid_argument("policy: missing \"type\" discriminator");
  }
  const std::string type = j.at("type").get<std::string>();

  auto expect_keys = [&j](std::initializer_list<const char*> keys) {
    for (const auto& item : j.items()) {
      if (item.key() == "type") continue;
      bool known = false;
      for (const char* key : keys) {
        if (item.key() == key) {
          known = true;
          break;
        }
      }
      if (!known) {
        throw std::invalid_argument("policy: unknown key \"" + item.key() +
                                    "\"");
      }
    }
  };

  if (type == "non-disclosure") {
    expect_keys({});
    return Policy{NonDisclosure{}};
  }
  if (type == "postponed-disclosure") {
    expect_keys({"s_star"});
    return Policy{PostponedDisclosure{require_number(j, "s_star")}};
  }
  if (type == "interim-deadline") {
    expect_keys({"s0_a"});
    return Policy{InterimDeadline{require_number(j, "s0_a")}};
  }
  if (type == "delayed-disclosure") {
    expect_keys({"start"});
    return Policy{DelayedDisclosure{require_number(j, "start")}};
  }
  if (type == "full-information") {
    expect_keys({});
    return Policy{FullInformation{}};
  }
  throw std::invalid_argument("policy: unknown type \"" + type + "\"");
}

}  // namespace disclosure
