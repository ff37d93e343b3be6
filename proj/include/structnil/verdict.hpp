#pragma once

#include <string>

#include <json.hpp>

namespace structnil {

using json = nlohmann::json;

enum class VerdictStatus { pass, fail, hypothesis_unmet };

std::string to_string(VerdictStatus s);

struct Verdict {
  std::string check;
  VerdictStatus status = VerdictStatus::pass;
  json witness;             // null unless status == fail
  json counters = json::object();
  std::string note;

  bool passed() const { return status == VerdictStatus::pass; }
  json to_json() const;
};

}  // namespace structnil
