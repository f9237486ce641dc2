#pragma once

#include <string>

#include <json.hpp>

namespace parafusion {

using Json = nlohmann::ordered_json;

/// A named property, whether it holds, and a structured certificate or
/// counterexample.
struct Verdict {
  std::string property;
  bool holds = false;
  Json witness = Json::object();

  Json to_json() const {
    return Json{{"property", property}, {"holds", holds}, {"witness", witness}};
  }
};

inline Verdict pass(std::string property, Json witness = Json::object()) {
  return Verdict{std::move(property), true, std::move(witness)};
}

inline Verdict fail(std::string property, Json witness) {
  return Verdict{std::move(property), false, std::move(witness)};
}

}  // namespace parafusion
