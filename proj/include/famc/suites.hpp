#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "famc/scenario.hpp"

namespace famc {

enum class Execution { Serial, Parallel };

struct InstanceOutcome {
  std::size_t index = 0;
  std::uint64_t seed = 0;  // instance_seed(suite seed, index)
  CheckStatus status = CheckStatus::Pass;
  std::string detail;
  Json counterexample;  // failures only: a scenario reproducing the instance
};

struct SuiteReport {
  std::string suite;
  std::uint64_t seed = 0;
  std::vector<InstanceOutcome> instances;  // by index
  double elapsed_ms = 0;

  std::size_t count(CheckStatus s) const;
  bool ok() const { return count(CheckStatus::Fail) == 0; }
};

std::span<const std::string_view> suite_names();
bool is_suite(std::string_view name);

// Instance i draws everything from instance_seed(seed, i), so the serial and
// parallel paths produce identical reports. Throws DomainError for an
// unknown suite.
SuiteReport run_property_suite(std::string_view name, std::uint64_t seed, std::size_t count,
                               Execution exec = Execution::Parallel);
InstanceOutcome run_suite_instance(std::string_view name, std::uint64_t seed, std::size_t index);

Json suite_report_to_json(const SuiteReport& r, bool include_timing = true);

}  // namespace famc
