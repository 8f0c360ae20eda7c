// Batch command-line interface. Talks to the library exclusively through the
// C boundary in negdep.h; all domain logic lives behind that wall.
//
// Exit codes: 0 = all expectations met; 2 = a pinned verdict mismatched;
// 3 = input error; 4 = budget exhausted where a definite verdict was
// required.

#include <CLI11.hpp>

#include <cctype>
#include <cerrno>
#include <cstdint>
#include <cstdlib>
#include <deque>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <negdep.h>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInputError = 3;

// Owns a string returned by the library.
struct ApiString {
  char* value = nullptr;
  ~ApiString() { ndp_string_free(value); }
  std::string str() const { return value == nullptr ? "" : value; }
};

// Owns a measure handle.
struct ApiMeasure {
  ndp_measure* value = nullptr;
  ~ApiMeasure() { ndp_measure_free(value); }
};

// Raised for CLI-level input problems; always maps to exit code 3.
struct UsageError {
  std::string message;
};

[[noreturn]] void usage_fail(const std::string& message) {
  throw UsageError{message};
}

// Report a failed library call and exit with the input-error code. Library
// failures surface before any report exists, so they are input errors from
// the batch contract's point of view (the fine-grained code disambiguates).
[[noreturn]] void api_fail(const std::string& where, ndp_status status) {
  std::ostringstream out;
  out << where << ": " << ndp_status_name(status);
  // Append the library's fine-grained code unless it just restates the
  // status (e.g. status "parse", code "Parse").
  auto squeeze = [](const char* s) {
    std::string t;
    for (; *s != '\0'; ++s)
      if (*s != '-') t += static_cast<char>(std::tolower(*s));
    return t;
  };
  const char* code = ndp_last_error_code();
  if (code[0] != '\0' && squeeze(code) != squeeze(ndp_status_name(status)))
    out << " (" << code << ")";
  const char* message = ndp_last_error();
  if (message[0] != '\0') out << ": " << message;
  usage_fail(out.str());
}

void api_check(const std::string& where, ndp_status status) {
  if (status != NDP_OK) api_fail(where, status);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) usage_fail("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) usage_fail("cannot read " + path);
  return buffer.str();
}

void write_output(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
    if (!std::cout) usage_fail("cannot write to standard output");
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) usage_fail("cannot open " + out_path + " for writing");
  out << text;
  out.flush();
  if (!out) usage_fail("cannot write " + out_path);
}

// Seed precedence: --seed flag, then NEGDEP_SEED, then 0.
std::uint64_t resolve_seed(bool flag_given, std::uint64_t flag_value) {
  if (flag_given) return flag_value;
  const char* env = std::getenv("NEGDEP_SEED");
  if (env == nullptr || env[0] == '\0') return 0;
  errno = 0;
  char* end = nullptr;
  unsigned long long parsed = std::strtoull(env, &end, 10);
  if (errno != 0 || end == env || *end != '\0' || env[0] == '-')
    usage_fail(std::string("NEGDEP_SEED must be a nonnegative integer; got \"") +
               env + "\"");
  return static_cast<std::uint64_t>(parsed);
}

// Option values shared by several subcommands.
struct CommonOpts {
  std::string out_path;
  std::string format = "json";
  std::uint64_t seed = 0;
  std::int64_t budget_samples = -1;
  std::int64_t budget_boxes = -1;
};

void check_format(const CommonOpts& common) {
  if (common.format != "json")
    usage_fail("unsupported --format \"" + common.format +
               "\" (only \"json\" is available)");
}

// Integer arguments forwarded to reproduce/search targets, emitted as
// "key=value,..." with only the flags the user actually set. Stored in a
// deque because CLI11 keeps pointers to the bound values.
struct ForwardedArg {
  std::string key;
  CLI::Option* option = nullptr;
  std::int64_t value = 0;
};

ForwardedArg& add_forwarded(std::deque<ForwardedArg>& args, CLI::App* cmd,
                            const std::string& key, const std::string& flag,
                            const std::string& help) {
  args.push_back({});
  args.back().key = key;
  args.back().option = cmd->add_option(flag, args.back().value, help);
  return args.back();
}

std::string collect_args(const std::deque<ForwardedArg>& forwarded) {
  std::string csv;
  for (const auto& arg : forwarded) {
    if (arg.option == nullptr || arg.option->count() == 0) continue;
    if (!csv.empty()) csv += ",";
    csv += arg.key + "=" + std::to_string(arg.value);
  }
  return csv;
}

std::string targets_csv(ndp_status (*fetch)(char**)) {
  ApiString csv;
  if (fetch(&csv.value) != NDP_OK) return "";
  return csv.str();
}

void add_common_output(CLI::App* cmd, CommonOpts& common) {
  cmd->add_option("--out", common.out_path,
                  "Write the JSON output to this file instead of stdout");
  cmd->add_option("--format", common.format, "Output format (only: json)")
      ->capture_default_str();
}

// Returns the --seed option so the caller can tell whether it was given.
CLI::Option* add_common_budget(CLI::App* cmd, CommonOpts& common) {
  cmd->add_option("--budget-samples", common.budget_samples,
                  "Random-field falsification budget (default: library)")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--budget-boxes", common.budget_boxes,
                  "Subdivision box budget (default: library)")
      ->check(CLI::NonNegativeNumber);
  return cmd->add_option("--seed", common.seed,
                         "RNG seed (fallback: NEGDEP_SEED, then 0)");
}

int run(int argc, char** argv) {
  CLI::App app{
      "Exact-arithmetic toolkit for negative dependence, log-concavity, and "
      "stochastic dominance of measures on the Boolean cube"};
  app.set_version_flag("--version", std::string("negdep ") + ndp_version());
  app.require_subcommand(1);

  const std::string reproduce_list = targets_csv(ndp_reproduce_targets);
  const std::string search_list = targets_csv(ndp_search_targets);

  // --- check ---------------------------------------------------------------
  auto* check_cmd = app.add_subcommand(
      "check", "Run property checks on a measure and report a ledger");
  std::string measure_path;
  std::string family_spec;
  std::string props_csv;
  CommonOpts check_common;
  check_cmd->add_option("--measure", measure_path,
                        "Path to a measure JSON file");
  check_cmd->add_option("--family", family_spec,
                        "Family spec, e.g. \"nu:k=6,beta=71/100\"");
  check_cmd
      ->add_option("--props", props_csv,
                   "Comma-separated properties, e.g. \"ulc,ncplus,naplus\" "
                   "or \"lcm(5)\"")
      ->required();
  CLI::Option* check_seed_opt = add_common_budget(check_cmd, check_common);
  add_common_output(check_cmd, check_common);

  // --- reproduce -----------------------------------------------------------
  auto* repro_cmd = app.add_subcommand(
      "reproduce",
      "Run a pinned scripted experiment (targets: " + reproduce_list + ")");
  std::string repro_target;
  CommonOpts repro_common;
  repro_cmd->add_option("target", repro_target, "Experiment name")->required();
  std::deque<ForwardedArg> repro_args;
  add_forwarded(repro_args, repro_cmd, "k", "--k",
                "Family size parameter (prop41, gadget-nmp)");
  add_forwarded(repro_args, repro_cmd, "count", "--count",
                "Instance count (lemma41, urn-cna)");
  add_forwarded(repro_args, repro_cmd, "edges", "--edges",
                "Multigraph edge bound (mason-sweep)");
  add_common_output(repro_cmd, repro_common);

  // --- family --------------------------------------------------------------
  auto* family_cmd = app.add_subcommand(
      "family", "Expand a family spec to the measure JSON format");
  std::string family_arg;
  CommonOpts family_common;
  family_cmd->add_option("spec", family_arg, "Family spec string")->required();
  add_common_output(family_cmd, family_common);

  // --- search --------------------------------------------------------------
  auto* search_cmd = app.add_subcommand(
      "search",
      "Run a randomized falsification harness (targets: " + search_list + ")");
  std::string search_target;
  CommonOpts search_common;
  search_cmd->add_option("target", search_target, "Harness name")->required();
  std::deque<ForwardedArg> search_args;
  add_forwarded(search_args, search_cmd, "m", "--m",
                "Projection order (lcm-gap)");
  add_forwarded(search_args, search_cmd, "count", "--count", "Sample count");
  add_forwarded(search_args, search_cmd, "coords", "--coords",
                "Coordinate count");
  add_forwarded(search_args, search_cmd, "edges", "--edges",
                "Multigraph edge bound (usf-rayleigh)");
  add_forwarded(search_args, search_cmd, "zero-percent", "--zero-percent",
                "Share of zero-weight configurations in random measures");
  add_forwarded(search_args, search_cmd, "per-samples", "--per-samples",
                "Extra per-graph sample budget (usf-rayleigh)");
  add_forwarded(search_args, search_cmd, "per-boxes", "--per-boxes",
                "Extra per-graph box budget (usf-rayleigh)");
  CLI::Option* search_seed_opt = add_common_budget(search_cmd, search_common);
  add_common_output(search_cmd, search_common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
    app.exit(e);
    return kExitInputError;
  }

  try {
    if (check_cmd->parsed()) {
      check_format(check_common);
      const bool has_measure = !measure_path.empty();
      const bool has_family = !family_spec.empty();
      if (has_measure == has_family)
        usage_fail("check needs exactly one of --measure and --family");
      ApiMeasure measure;
      if (has_measure) {
        const std::string text = read_file(measure_path);
        api_check("--measure", ndp_measure_from_json(text.c_str(),
                                                     measure_path.c_str(),
                                                     &measure.value));
      } else {
        api_check("--family",
                  ndp_measure_from_family(family_spec.c_str(), &measure.value));
      }
      ndp_options options;
      ndp_options_init(&options);
      options.seed = resolve_seed(check_seed_opt->count() > 0, check_common.seed);
      options.budget_samples = check_common.budget_samples;
      options.budget_boxes = check_common.budget_boxes;
      ApiString report;
      int exit_code = 0;
      api_check("check", ndp_check(measure.value, props_csv.c_str(), &options,
                                   &report.value, &exit_code));
      write_output(check_common.out_path, report.str());
      return exit_code;
    }

    if (repro_cmd->parsed()) {
      check_format(repro_common);
      const std::string args = collect_args(repro_args);
      ApiString report;
      int exit_code = 0;
      api_check("reproduce",
                ndp_reproduce(repro_target.c_str(),
                              args.empty() ? nullptr : args.c_str(),
                              &report.value, &exit_code));
      write_output(repro_common.out_path, report.str());
      return exit_code;
    }

    if (family_cmd->parsed()) {
      check_format(family_common);
      ApiMeasure measure;
      api_check("family",
                ndp_measure_from_family(family_arg.c_str(), &measure.value));
      ApiString json;
      api_check("family", ndp_measure_to_json(measure.value, &json.value));
      write_output(family_common.out_path, json.str());
      return kExitOk;
    }

    if (search_cmd->parsed()) {
      check_format(search_common);
      ndp_options options;
      ndp_options_init(&options);
      options.seed = resolve_seed(search_seed_opt->count() > 0, search_common.seed);
      options.budget_samples = search_common.budget_samples;
      options.budget_boxes = search_common.budget_boxes;
      const std::string args = collect_args(search_args);
      ApiString report;
      int exit_code = 0;
      api_check("search", ndp_search(search_target.c_str(),
                                     args.empty() ? nullptr : args.c_str(),
                                     &options, &report.value, &exit_code));
      write_output(search_common.out_path, report.str());
      return exit_code;
    }
  } catch (const UsageError& e) {
    std::cerr << "negdep: " << e.message << "\n";
    return kExitInputError;
  }

  std::cerr << "negdep: no subcommand selected\n";
  return kExitInputError;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
