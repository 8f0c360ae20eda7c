#pragma once

#include <json.hpp>

#include <cstdint>
#include <string>
#include <utility>

namespace negdep {

// Three-valued outcome. Holds and Fails are exact and carry a certificate or
// witness; Unknown is an honest budget-limited answer and carries the
// evidence gathered.
enum class Status { Holds, Fails, Unknown };

const char* status_name(Status s);

struct Verdict {
  Status status;
  std::string method;     // which procedure produced the outcome
  nlohmann::json detail;  // witness / certificate / evidence, exact rationals

  static Verdict holds(std::string method, nlohmann::json detail = {}) {
    return Verdict{Status::Holds, std::move(method), std::move(detail)};
  }
  static Verdict fails(std::string method, nlohmann::json detail = {}) {
    return Verdict{Status::Fails, std::move(method), std::move(detail)};
  }
  static Verdict unknown(std::string method, nlohmann::json detail = {}) {
    return Verdict{Status::Unknown, std::move(method), std::move(detail)};
  }

  nlohmann::json to_json() const;
};

struct Budget {
  long samples = 10000;  // sampled external fields per falsifier run
  long boxes = 100000;   // branch-and-bound boxes across all pairs
};

}  // namespace negdep
