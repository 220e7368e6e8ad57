#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "famc/invariant.hpp"
#include "famc/json_io.hpp"
#include "famc/kernel.hpp"
#include "famc/measure.hpp"

namespace famc {

inline constexpr std::string_view kScenarioSchema = "fam-kernel/1";
inline constexpr std::string_view kReportSchema = "fam-report/1";

struct SuiteRequest {
  std::string name;
  std::size_t count = 0;
};

// One chain plus what to run on it. Parsed from and written back to the
// "fam-kernel/1" JSON schema.
struct Scenario {
  explicit Scenario(GroundSpace g) : ground(g), kernel(g, {}), initial(g) {}

  struct CombinedSpec {
    Rational q1;
    Kernel ca;
    Kernel pfa;
  };

  std::string name;
  std::string description;
  GroundSpace ground;
  std::vector<FilterFunctional> filters;  // in declaration order
  Kernel kernel;
  std::optional<CombinedSpec> combined;  // set when given as q1·ca + q2·pfa
  Measure initial;
  int n_max = 10;
  std::uint64_t seed = 0;
  std::vector<Generator> closure_seeds;  // empty: the generators of `initial`
  std::size_t closure_cap = kDefaultClosureCap;
  std::vector<std::string> checks;
  Json expected = Json::array();
  std::vector<SuiteRequest> suites;

  JsonContext context() const;
  std::vector<Generator> seeds() const;
};

// Check names accepted in "checks".
std::span<const std::string_view> scenario_check_names();

Scenario scenario_from_json(const Json& j);
Json scenario_to_json(const Scenario& s);
// Errors name the file and either line:column (malformed JSON) or the field path.
Scenario load_scenario(const std::filesystem::path& path);

enum class CheckStatus { Pass, Fail, Skip };
std::string_view check_status_name(CheckStatus s);

struct CheckResult {
  std::string name;
  CheckStatus status = CheckStatus::Pass;
  std::string detail;
  Json counterexample;  // set on failures: enough to reproduce them
};

struct Report {
  std::string scenario;
  std::uint64_t seed = 0;
  Json sections = Json::object();  // kernel, trace, h1, h2, invariant, verdicts
  std::vector<CheckResult> checks;
  double elapsed_ms = 0;

  bool passed() const;
};

Json check_to_json(const CheckResult& c);
// Timing is the only field that may differ between identical runs.
Json report_to_json(const Report& r, bool include_timing = true);

Report run_scenario(const Scenario& s);
// Parse failures come back as a report with a failed "parse" check.
Report run_scenario_file(const std::filesystem::path& path, std::optional<std::uint64_t> seed_override = {});

struct CorpusRun {
  std::vector<std::filesystem::path> files;
  std::vector<Report> reports;
  bool passed() const;
};
// Every *.json under `dir`, in file-name order.
CorpusRun run_corpus(const std::filesystem::path& dir, std::optional<std::uint64_t> seed_override = {});
Json corpus_to_json(const CorpusRun& run, bool include_timing = true);
// FAMC_CORPUS_DIR when set, else the corpus directory of the source tree.
std::filesystem::path default_corpus_dir();

}  // namespace famc
