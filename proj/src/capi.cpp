// C boundary of the library: opaque handles, status codes, and a
// thread-local error slot. Every entry point catches all exceptions; nothing
// propagates across the ABI.

#include "negdep.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <map>
#include <string>
#include <vector>

#include "negdep/errors.hpp"
#include "negdep/inference.hpp"
#include "negdep/measure.hpp"
#include "negdep/measure_io.hpp"
#include "negdep/report.hpp"
#include "negdep/verdict.hpp"

struct ndp_measure {
  negdep::BuiltMeasure built;
};

namespace {

thread_local std::string t_error_message;
thread_local std::string t_error_code;

void clear_error() {
  t_error_message.clear();
  t_error_code.clear();
}

ndp_status map_code(negdep::ErrorCode code) {
  using EC = negdep::ErrorCode;
  switch (code) {
    case EC::Parse:
      return NDP_ERR_PARSE;
    case EC::Io:
      return NDP_ERR_IO;
    case EC::CapExceeded:
      return NDP_ERR_CAP;
    case EC::UnknownTarget:
      return NDP_ERR_UNKNOWN_TARGET;
    case EC::Inconsistent:
    case EC::NoVerdict:
      return NDP_ERR_INTERNAL;
    default:
      return NDP_ERR_DOMAIN;
  }
}

ndp_status set_error(ndp_status status, const char* code_token,
                     const std::string& message) {
  t_error_message = message;
  t_error_code = code_token;
  return status;
}

ndp_status set_error(const negdep::Error& e) {
  return set_error(map_code(e.code()), negdep::error_code_name(e.code()),
                   e.what());
}

ndp_status null_arg(const char* name) {
  return set_error(NDP_ERR_DOMAIN, "null-argument",
                   std::string("null pointer argument: ") + name);
}

// Runs `fn` with the standard exception fence around the ABI.
template <typename Fn>
ndp_status guarded(Fn&& fn) {
  clear_error();
  try {
    return fn();
  } catch (const negdep::Error& e) {
    return set_error(e);
  } catch (const std::exception& e) {
    return set_error(NDP_ERR_INTERNAL, "internal", e.what());
  } catch (...) {
    return set_error(NDP_ERR_INTERNAL, "internal", "unknown exception");
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) return nullptr;
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

ndp_status emit_string(const std::string& s, char** out) {
  *out = dup_string(s);
  if (*out == nullptr)
    return set_error(NDP_ERR_INTERNAL, "internal", "out of memory");
  return NDP_OK;
}

negdep::RunOptions make_options(const ndp_options* options) {
  negdep::RunOptions run;
  if (options != nullptr) {
    run.seed = options->seed;
    if (options->budget_samples >= 0)
      run.budget.samples = options->budget_samples;
    if (options->budget_boxes >= 0) run.budget.boxes = options->budget_boxes;
  }
  return run;
}

// "key=value,key=value". Keys and values for reproduce/search arguments are
// plain integers, so a flat split is enough.
std::map<std::string, std::string> parse_args_csv(const char* args_csv) {
  std::map<std::string, std::string> out;
  if (args_csv == nullptr) return out;
  std::string text(args_csv);
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    std::string token = text.substr(pos, comma - pos);
    pos = comma + 1;
    if (token.empty()) continue;
    std::size_t eq = token.find('=');
    if (eq == std::string::npos || eq == 0)
      negdep::fail(negdep::ErrorCode::Parse,
                   "argument token must be key=value; got \"" + token + "\"");
    out[token.substr(0, eq)] = token.substr(eq + 1);
  }
  return out;
}

std::vector<negdep::PropKey> parse_props_csv(const char* props_csv) {
  if (props_csv == nullptr)
    negdep::fail(negdep::ErrorCode::Parse, "property list is required");
  std::vector<negdep::PropKey> out;
  std::string text(props_csv);
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    std::string token = text.substr(pos, comma - pos);
    pos = comma + 1;
    // trim spaces
    std::size_t b = token.find_first_not_of(" \t");
    std::size_t e = token.find_last_not_of(" \t");
    token = (b == std::string::npos) ? "" : token.substr(b, e - b + 1);
    if (!token.empty()) {
      auto key = negdep::parse_prop_token(token);
      if (!key)
        negdep::fail(negdep::ErrorCode::Parse,
                     "unknown property token \"" + token + "\"");
      out.push_back(*key);
    }
    if (comma == text.size()) break;
  }
  if (out.empty())
    negdep::fail(negdep::ErrorCode::Parse, "property list is empty");
  return out;
}

ndp_status emit_report(const negdep::Report& report, char** out_report,
                       int* out_exit) {
  if (out_exit != nullptr) *out_exit = report.exit_code;
  return emit_string(report.text(), out_report);
}

std::string join_csv(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& item : items) {
    if (!out.empty()) out += ",";
    out += item;
  }
  return out;
}

}  // namespace

extern "C" {

const char* ndp_status_name(ndp_status status) {
  switch (status) {
    case NDP_OK:
      return "ok";
    case NDP_ERR_PARSE:
      return "parse";
    case NDP_ERR_DOMAIN:
      return "domain";
    case NDP_ERR_CAP:
      return "cap";
    case NDP_ERR_IO:
      return "io";
    case NDP_ERR_UNKNOWN_TARGET:
      return "unknown-target";
    case NDP_ERR_INTERNAL:
      return "internal";
  }
  return "invalid-status";
}

const char* ndp_last_error(void) { return t_error_message.c_str(); }

const char* ndp_last_error_code(void) { return t_error_code.c_str(); }

const char* ndp_version(void) { return "1.0.0"; }

void ndp_string_free(char* s) { std::free(s); }

void ndp_options_init(ndp_options* options) {
  if (options == nullptr) return;
  options->seed = 0;
  options->budget_samples = -1;
  options->budget_boxes = -1;
}

ndp_status ndp_measure_from_json(const char* json_text, const char* source,
                                 ndp_measure** out) {
  if (out == nullptr) return null_arg("out");
  *out = nullptr;
  if (json_text == nullptr) return null_arg("json_text");
  return guarded([&]() {
    negdep::Measure parsed = negdep::measure_from_json_text(json_text);
    std::string label =
        (source != nullptr && source[0] != '\0') ? source : "json";
    *out = new ndp_measure{
        negdep::BuiltMeasure{std::move(parsed), std::move(label), {}}};
    return NDP_OK;
  });
}

ndp_status ndp_measure_from_family(const char* spec, ndp_measure** out) {
  if (out == nullptr) return null_arg("out");
  *out = nullptr;
  if (spec == nullptr) return null_arg("spec");
  return guarded([&]() {
    *out = new ndp_measure{negdep::build_family(spec)};
    return NDP_OK;
  });
}

int ndp_measure_coords(const ndp_measure* m) {
  if (m == nullptr) return -1;
  return m->built.measure.coords();
}

ndp_status ndp_measure_to_json(const ndp_measure* m, char** out_json) {
  if (out_json == nullptr) return null_arg("out_json");
  *out_json = nullptr;
  if (m == nullptr) return null_arg("m");
  return guarded([&]() {
    return emit_string(negdep::measure_to_json(m->built.measure).dump(2) +
                           "\n",
                       out_json);
  });
}

void ndp_measure_free(ndp_measure* m) { delete m; }

ndp_status ndp_check(const ndp_measure* m, const char* props_csv,
                     const ndp_options* options, char** out_report,
                     int* out_exit) {
  if (out_report == nullptr) return null_arg("out_report");
  *out_report = nullptr;
  if (m == nullptr) return null_arg("m");
  return guarded([&]() {
    std::vector<negdep::PropKey> props = parse_props_csv(props_csv);
    negdep::Report report =
        negdep::run_check(m->built, props, make_options(options));
    return emit_report(report, out_report, out_exit);
  });
}

ndp_status ndp_reproduce(const char* target, const char* args_csv,
                         char** out_report, int* out_exit) {
  if (out_report == nullptr) return null_arg("out_report");
  *out_report = nullptr;
  if (target == nullptr) return null_arg("target");
  return guarded([&]() {
    negdep::Report report =
        negdep::run_reproduce(target, parse_args_csv(args_csv));
    return emit_report(report, out_report, out_exit);
  });
}

ndp_status ndp_search(const char* target, const char* args_csv,
                      const ndp_options* options, char** out_report,
                      int* out_exit) {
  if (out_report == nullptr) return null_arg("out_report");
  *out_report = nullptr;
  if (target == nullptr) return null_arg("target");
  return guarded([&]() {
    negdep::Report report = negdep::run_search(target, parse_args_csv(args_csv),
                                               make_options(options));
    return emit_report(report, out_report, out_exit);
  });
}

ndp_status ndp_reproduce_targets(char** out_csv) {
  if (out_csv == nullptr) return null_arg("out_csv");
  *out_csv = nullptr;
  return guarded(
      [&]() { return emit_string(join_csv(negdep::reproduce_targets()), out_csv); });
}

ndp_status ndp_search_targets(char** out_csv) {
  if (out_csv == nullptr) return null_arg("out_csv");
  *out_csv = nullptr;
  return guarded(
      [&]() { return emit_string(join_csv(negdep::search_targets()), out_csv); });
}

}  // extern "C"
