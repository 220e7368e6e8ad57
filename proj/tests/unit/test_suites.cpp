#include <doctest.h>

#include "famc/error.hpp"
#include "famc/suites.hpp"

using namespace famc;

TEST_CASE("every suite passes a small run") {
  for (const auto name : suite_names()) {
    const auto rep = run_property_suite(name, 7, 12, Execution::Serial);
    INFO(suite_report_to_json(rep, false).dump());
    CHECK(rep.ok());
    CHECK(rep.instances.size() == 12);
  }
}

TEST_CASE("serial and parallel suite reports agree") {
  for (const auto name : suite_names()) {
    const auto serial = suite_report_to_json(run_property_suite(name, 99, 10, Execution::Serial), false);
    const auto parallel = suite_report_to_json(run_property_suite(name, 99, 10, Execution::Parallel), false);
    INFO(name);
    CHECK(serial == parallel);
  }
}

TEST_CASE("instances depend only on the suite seed and index") {
  const auto rep = run_property_suite("thm_4_3_4_4", 5, 6, Execution::Parallel);
  for (const auto& o : rep.instances) {
    const auto again = run_suite_instance("thm_4_3_4_4", 5, o.index);
    CHECK(again.seed == o.seed);
    CHECK(again.status == o.status);
    CHECK(again.detail == o.detail);
  }
}

TEST_CASE("unknown suite") {
  CHECK_FALSE(is_suite("nope"));
  CHECK_THROWS_AS(run_property_suite("nope", 1, 1), DomainError);
}
