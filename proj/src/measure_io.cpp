#include "negdep/measure_io.hpp"

#include <set>

#include "negdep/errors.hpp"

namespace negdep {

Config config_from_bitstring(const std::string& s, int n) {
  if (static_cast<int>(s.size()) != n) {
    fail(ErrorCode::Parse, "configuration string '" + s + "' must have " +
                               std::to_string(n) + " characters");
  }
  Config c = 0;
  for (int i = 0; i < n; ++i) {
    if (s[i] == '1') {
      c |= Config(1) << i;
    } else if (s[i] != '0') {
      fail(ErrorCode::Parse, "configuration string must be over {0,1}");
    }
  }
  return c;
}

std::string config_to_bitstring(Config c, int n) {
  std::string s(n, '0');
  for (int i = 0; i < n; ++i) {
    if (c >> i & 1) s[i] = '1';
  }
  return s;
}

Measure measure_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("n") || !j["n"].is_number_integer()) {
    fail(ErrorCode::Parse, "measure JSON needs an integer field 'n'");
  }
  const int n = j["n"].get<int>();
  if (n < 1 || n > kMaxCoords) {
    fail(ErrorCode::CapExceeded, "measure 'n' outside 1.." +
                                     std::to_string(kMaxCoords));
  }
  std::vector<Rat> w(std::size_t(1) << n, Rat(0));
  if (!j.contains("weights") || !j["weights"].is_array()) {
    fail(ErrorCode::Parse, "measure JSON needs an array field 'weights'");
  }
  std::set<Config> seen;
  for (const auto& entry : j["weights"]) {
    if (!entry.is_object() || !entry.contains("set") || !entry.contains("w") ||
        !entry["set"].is_string() || !entry["w"].is_string()) {
      fail(ErrorCode::Parse,
           "each weight entry must be {\"set\": \"..\", \"w\": \"p/q\"}");
    }
    const Config c = config_from_bitstring(entry["set"].get<std::string>(), n);
    if (!seen.insert(c).second) {
      fail(ErrorCode::Parse,
           "duplicate configuration '" + entry["set"].get<std::string>() + "'");
    }
    const Rat q = parse_rational(entry["w"].get<std::string>());
    if (q < 0) fail(ErrorCode::InvalidDistribution, "negative weight");
    w[c] = q;
  }
  std::string label;
  if (j.contains("label") && j["label"].is_string()) {
    label = j["label"].get<std::string>();
  }
  return Measure(n, std::move(w), label);
}

nlohmann::json measure_to_json(const Measure& m) {
  nlohmann::json weights = nlohmann::json::array();
  for (Config c = 0; c < m.configs(); ++c) {
    if (m.weight(c) == 0) continue;
    weights.push_back({{"set", config_to_bitstring(c, m.coords())},
                       {"w", format_rational(m.weight(c))}});
  }
  nlohmann::json j{{"n", m.coords()}, {"weights", std::move(weights)}};
  if (!m.label().empty()) j["label"] = m.label();
  return j;
}

Measure measure_from_json_text(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded()) fail(ErrorCode::Parse, "invalid JSON");
  return measure_from_json(j);
}

}  // namespace negdep
