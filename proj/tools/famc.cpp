#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "famc/error.hpp"
#include "famc/scenario.hpp"
#include "famc/suites.hpp"

namespace {

using famc::Json;

int emit(const Json& j, const std::string& out) {
  if (out.empty()) {
    std::cout << j.dump(2) << "\n";
    return 0;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) {
    std::cerr << "famc: cannot write " << out << "\n";
    return 2;
  }
  f << j.dump(2) << "\n";
  return 0;
}

void summarize(const famc::Report& r) {
  std::cerr << (r.passed() ? "PASS " : "FAIL ") << r.scenario << "\n";
  for (const auto& c : r.checks) {
    std::cerr << "  " << famc::check_status_name(c.status) << "  " << c.name;
    if (!c.detail.empty()) std::cerr << ": " << c.detail;
    std::cerr << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"famc: finitely additive Markov chains with exact arithmetic"};
  app.require_subcommand(1);

  std::string file, out, format = "csv", suite, dir;
  std::optional<std::uint64_t> seed;
  std::uint64_t suite_seed = 0;
  std::size_t count = 100;
  int n_max = 0;
  bool serial = false, no_timing = false;

  auto* run = app.add_subcommand("run", "Run one scenario file and print its JSON report");
  run->add_option("file", file, "Scenario file")->required();
  run->add_option("--seed", seed, "Override the scenario seed");
  run->add_option("-o,--out", out, "Write the report here instead of stdout");
  run->add_flag("--no-timing", no_timing, "Omit timing fields");

  auto* su = app.add_subcommand("suite", "Run a randomized property suite");
  su->add_option("name", suite, "Suite name")->required();
  su->add_option("--seed", suite_seed, "Suite seed");
  su->add_option("--count", count, "Number of instances")->check(CLI::PositiveNumber);
  su->add_flag("--serial", serial, "Run instances on one thread");
  su->add_option("-o,--out", out, "Write the report here instead of stdout");
  su->add_flag("--no-timing", no_timing, "Omit timing fields");

  auto* tr = app.add_subcommand("trace", "Print the norm trace of a scenario");
  tr->add_option("file", file, "Scenario file")->required();
  tr->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  tr->add_option("--n", n_max, "Steps (defaults to the scenario's n_max)")->check(CLI::PositiveNumber);

  auto* co = app.add_subcommand("corpus", "Run every scenario in the corpus directory");
  co->add_option("--dir", dir, "Corpus directory (default: $FAMC_CORPUS_DIR or the built-in corpus)");
  co->add_option("--seed", seed, "Override every scenario seed");
  co->add_option("-o,--out", out, "Write the report here instead of stdout");
  co->add_flag("--no-timing", no_timing, "Omit timing fields");

  auto* ls = app.add_subcommand("suites", "List property suites");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      const auto r = famc::run_scenario_file(file, seed);
      summarize(r);
      if (emit(famc::report_to_json(r, !no_timing), out) != 0) return 2;
      return r.passed() ? 0 : 1;
    }
    if (*su) {
      const auto r = famc::run_property_suite(suite, suite_seed, count,
                                              serial ? famc::Execution::Serial : famc::Execution::Parallel);
      std::cerr << (r.ok() ? "PASS " : "FAIL ") << suite << ": " << r.count(famc::CheckStatus::Pass) << " passed, "
                << r.count(famc::CheckStatus::Fail) << " failed, " << r.count(famc::CheckStatus::Skip) << " skipped\n";
      if (emit(famc::suite_report_to_json(r, !no_timing), out) != 0) return 2;
      return r.ok() ? 0 : 1;
    }
    if (*tr) {
      const auto s = famc::load_scenario(file);
      const famc::MarkovOperator a(s.kernel, s.filters);
      const auto t = famc::iterate(a, s.initial, n_max > 0 ? n_max : s.n_max);
      if (format == "csv") {
        std::cout << famc::trace_csv(t);
      } else {
        Json j = famc::trace_to_json(t);
        j["h1"] = famc::h_verdict_to_json(famc::check_H1(a));
        j["h2"] = famc::h_verdict_to_json(famc::check_H2(a));
        std::cout << j.dump(2) << "\n";
      }
      return 0;
    }
    if (*co) {
      const auto c = famc::run_corpus(dir.empty() ? famc::default_corpus_dir() : std::filesystem::path(dir), seed);
      for (const auto& r : c.reports) summarize(r);
      if (emit(famc::corpus_to_json(c, !no_timing), out) != 0) return 2;
      return c.passed() ? 0 : 1;
    }
    if (*ls) {
      for (const auto name : famc::suite_names()) std::cout << name << "\n";
      return 0;
    }
  } catch (const famc::Error& e) {
    std::cerr << "famc: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
