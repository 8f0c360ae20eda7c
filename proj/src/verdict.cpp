#include "negdep/verdict.hpp"

namespace negdep {

const char* status_name(Status s) {
  switch (s) {
    case Status::Holds: return "holds";
    case Status::Fails: return "fails";
    case Status::Unknown: return "unknown";
  }
  return "unknown";
}

nlohmann::json Verdict::to_json() const {
  nlohmann::json j{{"status", status_name(status)}, {"method", method}};
  if (!detail.is_null()) j["detail"] = detail;
  return j;
}

}  // namespace negdep
