#include "famc/scenario.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "famc/error.hpp"
#include "famc/random.hpp"
#include "famc/suites.hpp"

#ifndef FAMC_DEFAULT_CORPUS_DIR
#define FAMC_DEFAULT_CORPUS_DIR "corpus"
#endif

namespace famc {

namespace {

constexpr std::array<std::string_view, 5> kCheckNames{"trace-consistency", "norm-laws", "invariant-verdicts",
                                                      "range-inclusions", "expected"};

constexpr std::array<std::string_view, 3> kSources{"reference", "derived", "trivial"};

std::string idx(const std::string& base, std::size_t i) { return base + "/" + std::to_string(i); }

std::int64_t json_int(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) throw ParseError(where, "expected an integer");
  return j.get<std::int64_t>();
}

std::vector<Generator> generators_from_json(const Json& j, const JsonContext& ctx, const std::string& where) {
  if (!j.is_array()) throw ParseError(where, "expected an array of generators");
  std::vector<Generator> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(generator_from_json(j[i], ctx, idx(where, i)));
  return out;
}

Json generators_to_json(std::span<const Generator> gs) {
  Json out = Json::array();
  for (const auto& g : gs) out.push_back(generator_to_json(g));
  return out;
}

Json rule_list_json(const Kernel& k) { return kernel_to_json(k)["rules"]; }

}  // namespace

std::span<const std::string_view> scenario_check_names() { return kCheckNames; }

JsonContext Scenario::context() const {
  JsonContext ctx{ground, {}};
  for (const auto& f : filters) ctx.filters.emplace(f.id(), f);
  return ctx;
}

std::vector<Generator> Scenario::seeds() const { return closure_seeds.empty() ? generators_of(initial) : closure_seeds; }

Scenario scenario_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("", "a scenario is a JSON object");
  const std::string schema = json_string(json_field(j, "schema", ""), "/schema");
  if (schema != kScenarioSchema) {
    throw ParseError("/schema", "unsupported schema '" + schema + "', expected '" + std::string(kScenarioSchema) + "'");
  }
  Scenario s(ground_from_json(json_field(j, "ground", ""), "/ground"));
  s.name = json_string(json_field(j, "name", ""), "/name");
  if (j.contains("description")) s.description = json_string(j["description"], "/description");

  JsonContext ctx{s.ground, {}};
  if (j.contains("filters")) {
    const auto& fs = j["filters"];
    if (!fs.is_array()) throw ParseError("/filters", "expected an array");
    for (std::size_t i = 0; i < fs.size(); ++i) {
      auto f = filter_from_json(fs[i], s.ground, idx("/filters", i));
      if (ctx.filters.count(f.id())) throw ParseError(idx("/filters", i), "duplicate filter id '" + f.id() + "'");
      ctx.filters.emplace(f.id(), f);
      s.filters.push_back(std::move(f));
    }
  }

  const bool has_kernel = j.contains("kernel");
  const bool has_combined = j.contains("combined");
  if (has_kernel == has_combined) throw ParseError("", "exactly one of 'kernel' and 'combined' is required");
  if (has_kernel) {
    s.kernel = kernel_from_json(j["kernel"], ctx, "/kernel");
    try {
      validate(s.kernel);
    } catch (const KernelError& e) {
      throw ParseError("/kernel", e.what());
    }
  } else {
    const auto& c = j["combined"];
    Scenario::CombinedSpec spec{rational_from_json(json_field(c, "q1", "/combined"), "/combined/q1"),
                                kernel_from_json(json_field(c, "ca", "/combined"), ctx, "/combined/ca"),
                                kernel_from_json(json_field(c, "pfa", "/combined"), ctx, "/combined/pfa")};
    try {
      s.kernel = make_combined(spec.q1, spec.ca, spec.pfa).kernel();
    } catch (const KernelError& e) {
      throw ParseError("/combined", e.what());
    }
    s.combined = std::move(spec);
  }

  s.initial = measure_from_json(json_field(j, "initial", ""), ctx, "/initial");
  if (!in_S(s.initial, MeasureFamily::Ba)) throw ParseError("/initial", "initial measure must be a probability measure");
  if (j.contains("n_max")) s.n_max = static_cast<int>(json_int(j["n_max"], "/n_max"));
  if (s.n_max < 1) throw ParseError("/n_max", "n_max must be >= 1");
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) throw ParseError("/seed", "expected a non-negative integer");
    s.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("closure")) {
    const auto& c = j["closure"];
    if (c.contains("seeds")) s.closure_seeds = generators_from_json(c["seeds"], ctx, "/closure/seeds");
    if (c.contains("cap")) {
      const auto cap = json_int(c["cap"], "/closure/cap");
      if (cap < 1) throw ParseError("/closure/cap", "cap must be >= 1");
      s.closure_cap = static_cast<std::size_t>(cap);
    }
  }
  if (j.contains("checks")) {
    const auto& cs = j["checks"];
    if (!cs.is_array()) throw ParseError("/checks", "expected an array of check names");
    for (std::size_t i = 0; i < cs.size(); ++i) {
      std::string name = json_string(cs[i], idx("/checks", i));
      if (std::find(kCheckNames.begin(), kCheckNames.end(), name) == kCheckNames.end()) {
        throw ParseError(idx("/checks", i), "unknown check '" + name + "'");
      }
      s.checks.push_back(std::move(name));
    }
  } else {
    s.checks.assign(kCheckNames.begin(), kCheckNames.end());
  }
  if (j.contains("expected")) {
    const auto& ex = j["expected"];
    if (!ex.is_array()) throw ParseError("/expected", "expected an array of assertions");
    for (std::size_t i = 0; i < ex.size(); ++i) {
      json_string(json_field(ex[i], "kind", idx("/expected", i)), idx("/expected", i) + "/kind");
      if (ex[i].contains("source")) {
        const std::string src = json_string(ex[i]["source"], idx("/expected", i) + "/source");
        if (std::find(kSources.begin(), kSources.end(), src) == kSources.end()) {
          throw ParseError(idx("/expected", i) + "/source", "source must be reference, derived or trivial");
        }
      }
    }
    s.expected = ex;
  }
  if (j.contains("suites")) {
    const auto& ss = j["suites"];
    if (!ss.is_array()) throw ParseError("/suites", "expected an array");
    for (std::size_t i = 0; i < ss.size(); ++i) {
      const std::string where = idx("/suites", i);
      SuiteRequest r{json_string(json_field(ss[i], "name", where), where + "/name"), 0};
      if (!is_suite(r.name)) throw ParseError(where + "/name", "unknown suite '" + r.name + "'");
      const auto count = json_int(json_field(ss[i], "count", where), where + "/count");
      if (count < 1) throw ParseError(where + "/count", "count must be >= 1");
      r.count = static_cast<std::size_t>(count);
      s.suites.push_back(std::move(r));
    }
  }
  return s;
}

Json scenario_to_json(const Scenario& s) {
  Json j;
  j["schema"] = std::string(kScenarioSchema);
  j["name"] = s.name;
  if (!s.description.empty()) j["description"] = s.description;
  j["ground"] = ground_to_json(s.ground);
  Json filters = Json::array();
  for (const auto& f : s.filters) filters.push_back(filter_to_json(f));
  j["filters"] = std::move(filters);
  if (s.combined) {
    j["combined"] = Json{{"q1", format_rational(s.combined->q1)},
                         {"ca", Json{{"rules", rule_list_json(s.combined->ca)}}},
                         {"pfa", Json{{"rules", rule_list_json(s.combined->pfa)}}}};
  } else {
    j["kernel"] = Json{{"rules", rule_list_json(s.kernel)}};
  }
  j["initial"] = measure_to_json(s.initial);
  j["n_max"] = s.n_max;
  j["seed"] = s.seed;
  if (!s.closure_seeds.empty() || s.closure_cap != kDefaultClosureCap) {
    Json c;
    if (!s.closure_seeds.empty()) c["seeds"] = generators_to_json(s.closure_seeds);
    c["cap"] = s.closure_cap;
    j["closure"] = std::move(c);
  }
  j["checks"] = s.checks;
  if (!s.expected.empty()) j["expected"] = s.expected;
  if (!s.suites.empty()) {
    Json ss = Json::array();
    for (const auto& r : s.suites) ss.push_back(Json{{"name", r.name}, {"count", r.count}});
    j["suites"] = std::move(ss);
  }
  return j;
}

namespace {

std::string line_col(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return std::to_string(line) + ":" + std::to_string(col);
}

}  // namespace

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string(), "cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path.string() + ":" + line_col(text, e.byte == 0 ? 0 : e.byte - 1), e.what());
  }
  try {
    return scenario_from_json(j);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ":" + (e.where().empty() ? "/" : e.where()), e.what());
  }
}

std::string_view check_status_name(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Skip: return "skip";
  }
  return "?";
}

bool Report::passed() const {
  return std::none_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.status == CheckStatus::Fail; });
}

Json check_to_json(const CheckResult& c) {
  Json j;
  j["name"] = c.name;
  j["status"] = std::string(check_status_name(c.status));
  j["detail"] = c.detail;
  if (c.status == CheckStatus::Fail) j["counterexample"] = c.counterexample;
  return j;
}

Json report_to_json(const Report& r, bool include_timing) {
  Json j;
  j["schema"] = std::string(kReportSchema);
  j["scenario"] = r.scenario;
  j["seed"] = r.seed;
  for (const auto& [k, v] : r.sections.items()) j[k] = v;
  Json checks = Json::array();
  for (const auto& c : r.checks) checks.push_back(check_to_json(c));
  j["checks"] = std::move(checks);
  j["passed"] = r.passed();
  if (include_timing) j["timing"] = Json{{"elapsed_ms", r.elapsed_ms}};
  return j;
}

namespace {

Json error_json(std::string_view kind, const std::exception& e) {
  return Json{{"error", Json{{"kind", std::string(kind)}, {"message", e.what()}}}};
}

// What the run computed, shared by the checks.
struct RunState {
  const Scenario& s;
  const MarkovOperator& a;
  std::optional<NormTrace> trace;
  std::string trace_error;
  HVerdict h1;
  HVerdict h2;
  std::optional<InvariantReport> invariant;
  std::string invariant_error;
  std::vector<Verdict> verdicts;
};

CheckResult make_check(std::string name) { return CheckResult{std::move(name), CheckStatus::Pass, "", nullptr}; }

void fail(CheckResult& c, const RunState& st, std::string detail, Json witness) {
  c.status = CheckStatus::Fail;
  c.detail = std::move(detail);
  c.counterexample = Json{{"check", c.name}, {"scenario", scenario_to_json(st.s)}, {"witness", std::move(witness)}};
}

CheckResult check_trace_consistency(const RunState& st) {
  auto c = make_check("trace-consistency");
  if (!st.trace) {
    c.status = CheckStatus::Skip;
    c.detail = st.trace_error;
    return c;
  }
  const Rational total = norm(st.s.initial);
  for (const auto& r : st.trace->rows) {
    if (r.ca_norm + r.pfa_norm != total) {
      fail(c, st, "ca_norm + pfa_norm != 1 at n = " + std::to_string(r.n), Json{{"n", r.n}});
      return c;
    }
  }
  c.detail = std::to_string(st.trace->rows.size()) + " rows";
  return c;
}

CheckResult check_norm_laws(const RunState& st) {
  auto c = make_check("norm-laws");
  const auto& ck = st.a.combined();
  if (!st.trace || !ck) {
    c.status = CheckStatus::Skip;
    c.detail = !st.trace ? st.trace_error : "kernel is not a combined chain";
    return c;
  }
  const bool h1 = st.h1.status == HVerdict::Status::HoldsOnBasis;
  const bool h2 = st.h2.status == HVerdict::Status::HoldsOnBasis;
  if (!h1 && !h2) {
    c.status = CheckStatus::Skip;
    c.detail = "H1 " + std::string(h_status_name(st.h1.status)) + ", H2 " + std::string(h_status_name(st.h2.status)) +
               "; no norm law applies";
    return c;
  }
  const Rational ca1 = norm(st.s.initial.atomic_part());
  for (const auto& r : st.trace->rows) {
    if (h1 && r.n >= 2 && r.ca_norm != ck->q1()) {
      fail(c, st, "H1: ca_norm(" + std::to_string(r.n) + ") = " + format_rational(r.ca_norm) + " != q1", Json{{"n", r.n}});
      return c;
    }
    const Rational want = pow(ck->q1(), static_cast<unsigned>(r.n - 1)) * ca1;
    if (h2 && (r.ca_norm != want || r.pfa_norm != 1 - want)) {
      fail(c, st, "H2: ca_norm(" + std::to_string(r.n) + ") = " + format_rational(r.ca_norm) + " != " + format_rational(want),
           Json{{"n", r.n}});
      return c;
    }
  }
  c.detail = std::string(h1 ? "ca_norm = q1 from n = 2" : "") + (h1 && h2 ? "; " : "") +
             (h2 ? "ca_norm(n+1) = q1^n * ||mu1_ca||" : "");
  return c;
}

CheckResult check_invariant_verdicts(const RunState& st) {
  auto c = make_check("invariant-verdicts");
  if (!st.invariant) {
    c.status = CheckStatus::Skip;
    c.detail = st.invariant_error;
    return c;
  }
  std::vector<std::string> inconclusive;
  for (const auto& v : st.verdicts) {
    if (v.status == VerdictStatus::Violated) {
      fail(c, st, v.name + ": " + v.detail, verdict_to_json(v));
      return c;
    }
    if (v.status == VerdictStatus::Inconclusive) inconclusive.push_back(v.name);
  }
  c.detail = std::to_string(st.invariant->solutions.size()) + " solution(s)";
  if (!inconclusive.empty()) {
    c.detail += "; inconclusive:";
    for (const auto& n : inconclusive) c.detail += " " + n;
  }
  return c;
}

// Nonnegative test measures over the atoms the scenario mentions and its filters.
std::vector<Measure> scenario_battery(const Scenario& s, std::size_t count) {
  Rng rng(instance_seed(s.seed, 0));
  std::set<Rational> pool;
  for (const auto& [x, w] : s.initial.atoms()) pool.insert(x);
  for (const auto& r : s.kernel.rules()) {
    for (const auto& [x, w] : r.row.constant.atoms()) pool.insert(x);
    for (const auto& x : sample_points(r.piece, 2)) pool.insert(x);
  }
  if (s.ground.is_finite()) pool.insert(s.ground.points().begin(), s.ground.points().end());
  const std::vector<Rational> atoms(pool.begin(), pool.end());
  static const std::array<Rational, 4> masses{Rational(1), ratio(1, 2), ratio(3, 4), ratio(1, 3)};
  std::vector<Measure> out;
  for (std::size_t i = 0; i < count; ++i) {
    const Rational mass = masses[(i / 3) % masses.size()];
    const std::size_t shape = s.filters.empty() ? 0 : i % 3;
    if (shape == 0) {
      out.push_back(random_atomic(rng, s.ground, atoms, mass));
    } else if (shape == 1) {
      out.push_back(random_pfa(rng, s.filters, mass));
    } else {
      Measure m = random_atomic(rng, s.ground, atoms, mass / 2);
      m.add(1, random_pfa(rng, s.filters, mass / 2));
      out.push_back(std::move(m));
    }
  }
  return out;
}

CheckResult check_range_inclusions(const RunState& st) {
  auto c = make_check("range-inclusions");
  const auto battery = scenario_battery(st.s, 10);
  const auto rep = range_inclusions(st.a, battery);
  if (!rep.ok()) {
    fail(c, st, rep.violations.front().inclusion + " violated", range_report_to_json(rep));
    return c;
  }
  if (rep.checked == 0) {
    c.status = CheckStatus::Skip;
    c.detail = rep.notes.empty() ? "nothing checked" : rep.notes.front();
    return c;
  }
  c.detail = std::to_string(rep.checked) + " checked, " + std::to_string(rep.skipped) + " skipped";
  return c;
}

// ---------------------------------------------------------------------------
// Expected-value assertions.

struct Outcome {
  bool ok = true;
  Json actual;
  std::string why;
};

Outcome compare(bool ok, Json actual, std::string why = {}) { return Outcome{ok, std::move(actual), std::move(why)}; }

Outcome expect_trace_rows(const Json& e, const RunState& st, const std::string& where) {
  const auto& rows = json_field(e, "rows", where);
  if (!rows.is_array()) throw ParseError(where + "/rows", "expected an array");
  Json actual = Json::array();
  bool ok = true;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::string at = idx(where + "/rows", i);
    const auto n = json_int(json_field(rows[i], "n", at), at + "/n");
    if (n < 1 || n > static_cast<std::int64_t>(st.trace->rows.size())) throw ParseError(at + "/n", "row outside the trace");
    const auto& r = st.trace->rows[static_cast<std::size_t>(n - 1)];
    if (rows[i].contains("ca_norm")) ok = ok && r.ca_norm == rational_from_json(rows[i]["ca_norm"], at + "/ca_norm");
    if (rows[i].contains("pfa_norm")) ok = ok && r.pfa_norm == rational_from_json(rows[i]["pfa_norm"], at + "/pfa_norm");
    actual.push_back(Json{{"n", r.n}, {"ca_norm", format_rational(r.ca_norm)}, {"pfa_norm", format_rational(r.pfa_norm)}});
  }
  return compare(ok, std::move(actual));
}

Outcome expect_trace_constant(const Json& e, const RunState& st, const std::string& where) {
  const auto from = e.contains("from") ? json_int(e["from"], where + "/from") : 1;
  const Rational value = rational_from_json(json_field(e, "value", where), where + "/value");
  for (const auto& r : st.trace->rows) {
    if (r.n < from) continue;
    if (r.ca_norm != value || r.pfa_norm != norm(st.s.initial) - value) {
      return compare(false, Json{{"n", r.n}, {"ca_norm", format_rational(r.ca_norm)}, {"pfa_norm", format_rational(r.pfa_norm)}});
    }
  }
  return compare(true, Json{{"rows_checked", st.trace->rows.size() - static_cast<std::size_t>(std::max<std::int64_t>(from - 1, 0))}});
}

Outcome expect_trace_geometric(const Json& e, const RunState& st, const std::string& where) {
  const Rational r = rational_from_json(json_field(e, "ratio", where), where + "/ratio");
  const Rational scale = e.contains("scale") ? rational_from_json(e["scale"], where + "/scale") : Rational(1);
  for (const auto& row : st.trace->rows) {
    const Rational want = scale * pow(r, static_cast<unsigned>(row.n - 1));
    if (row.ca_norm != want || row.pfa_norm != 1 - want) {
      return compare(false, Json{{"n", row.n}, {"ca_norm", format_rational(row.ca_norm)}, {"expected", format_rational(want)}});
    }
  }
  return compare(true, Json{{"rows_checked", st.trace->rows.size()}});
}

Outcome expect_singletons(const Json& e, const RunState& st, const std::string& where) {
  const auto n = json_int(json_field(e, "power", where), where + "/power");
  if (n < 1) throw ParseError(where + "/power", "power must be >= 1");
  std::vector<std::pair<Rational, Rational>> pairs;
  if (e.contains("grid")) {
    const auto d = json_int(json_field(e["grid"], "denominator", where + "/grid"), where + "/grid/denominator");
    if (d < 1 || st.s.ground.kind() != GroundKind::UnitRationals) throw ParseError(where + "/grid", "grid needs the unit interval and d >= 1");
    for (std::int64_t i = 0; i <= d; ++i)
      for (std::int64_t k = 0; k <= d; ++k) pairs.emplace_back(ratio(i, d), ratio(k, d));
  } else {
    const auto& ps = json_field(e, "pairs", where);
    if (!ps.is_array()) throw ParseError(where + "/pairs", "expected an array");
    for (std::size_t i = 0; i < ps.size(); ++i) {
      const std::string at = idx(where + "/pairs", i);
      if (!ps[i].is_array() || ps[i].size() != 2) throw ParseError(at, "expected [x, y]");
      pairs.emplace_back(rational_from_json(ps[i][0], at + "/0"), rational_from_json(ps[i][1], at + "/1"));
    }
  }
  std::vector<Rational> want;
  if (e.contains("values")) {
    const auto& vs = e["values"];
    if (!vs.is_array() || vs.size() != pairs.size()) throw ParseError(where + "/values", "one value per pair");
    for (std::size_t i = 0; i < vs.size(); ++i) want.push_back(rational_from_json(vs[i], idx(where + "/values", i)));
  } else {
    want.assign(pairs.size(), rational_from_json(json_field(e, "value", where), where + "/value"));
  }
  const auto got = kernel_power_singletons(st.a.kernel(), static_cast<unsigned>(n), pairs);
  Json mismatches = Json::array();
  for (std::size_t i = 0; i < got.size(); ++i) {
    if (got[i].value != want[i]) {
      mismatches.push_back(Json{{"x", format_rational(got[i].x)}, {"y", format_rational(got[i].y)}, {"value", format_rational(got[i].value)}});
    }
  }
  const bool ok = mismatches.empty();
  return compare(ok, ok ? Json{{"pairs_checked", got.size()}} : Json{{"mismatches", std::move(mismatches)}});
}

Outcome expect_closure_basis(const Json& e, const RunState& st, const JsonContext& ctx, const std::string& where) {
  const auto seeds = e.contains("seeds") ? generators_from_json(e["seeds"], ctx, where + "/seeds") : st.s.seeds();
  const auto want = generators_from_json(json_field(e, "basis", where), ctx, where + "/basis");
  const std::size_t cap = e.contains("cap") ? static_cast<std::size_t>(json_int(e["cap"], where + "/cap")) : st.s.closure_cap;
  const auto c = orbit_closure(st.a, seeds, cap);
  const std::set<Generator> got_set(c.basis.begin(), c.basis.end()), want_set(want.begin(), want.end());
  return compare(got_set == want_set && c.basis.size() == want.size(), generators_to_json(c.basis));
}

Outcome expect_closure_diverges(const Json& e, const RunState& st, const JsonContext& ctx, const std::string& where) {
  const auto seeds = e.contains("seeds") ? generators_from_json(e["seeds"], ctx, where + "/seeds") : st.s.seeds();
  const auto cap = json_int(json_field(e, "cap", where), where + "/cap");
  if (cap < 1) throw ParseError(where + "/cap", "cap must be >= 1");
  try {
    const auto c = orbit_closure(st.a, seeds, static_cast<std::size_t>(cap));
    return compare(false, Json{{"closed_with", c.basis.size()}});
  } catch (const ClosureDiverged& d) {
    return compare(true, Json{{"diverged_at_cap", d.cap()}});
  }
}

Outcome expect_invariant_solutions(const Json& e, const RunState& st, const JsonContext& ctx, const std::string& where) {
  if (!st.invariant) return compare(false, Json{{"error", st.invariant_error}});
  const auto& sols = json_field(e, "solutions", where);
  if (!sols.is_array()) throw ParseError(where + "/solutions", "expected an array");
  bool ok = sols.size() == st.invariant->solutions.size();
  for (std::size_t i = 0; ok && i < sols.size(); ++i) {
    ok = measure_from_json(sols[i], ctx, idx(where + "/solutions", i)) == st.invariant->solutions[i];
  }
  if (e.contains("classification")) {
    const auto& cl = e["classification"];
    ok = ok && cl.is_array() && cl.size() == st.invariant->classification.size();
    for (std::size_t i = 0; ok && i < cl.size(); ++i) {
      ok = json_string(cl[i], idx(where + "/classification", i)) == measure_type_name(st.invariant->classification[i]);
    }
  }
  if (e.contains("nullspace_dim")) {
    ok = ok && static_cast<std::size_t>(json_int(e["nullspace_dim"], where + "/nullspace_dim")) == st.invariant->nullspace_dim;
  }
  Json actual = Json::array();
  for (const auto& s : st.invariant->solutions) actual.push_back(measure_to_json(s));
  return compare(ok, std::move(actual));
}

Outcome expect_h(const Json& e, const HVerdict& v, const JsonContext& ctx, const std::string& where) {
  const std::string status = json_string(json_field(e, "status", where), where + "/status");
  bool ok = status == h_status_name(v.status);
  if (e.contains("image")) ok = ok && v.image && *v.image == measure_from_json(e["image"], ctx, where + "/image");
  return compare(ok, h_verdict_to_json(v));
}

Outcome evaluate_expectation(const Json& e, const RunState& st, const JsonContext& ctx, const std::string& where) {
  const std::string kind = json_string(json_field(e, "kind", where), where + "/kind");
  const bool needs_trace = kind.rfind("trace-", 0) == 0;
  if (needs_trace && !st.trace) return compare(false, Json{{"error", st.trace_error}});

  if (kind == "apply" || kind == "apply-component") {
    const Measure in = measure_from_json(json_field(e, "input", where), ctx, where + "/input");
    const Measure want = measure_from_json(json_field(e, "output", where), ctx, where + "/output");
    Measure got(st.s.ground);
    if (kind == "apply") {
      got = apply(st.a, in);
    } else {
      const std::string part = json_string(json_field(e, "component", where), where + "/component");
      if (part != "ca" && part != "pfa") throw ParseError(where + "/component", "component is 'ca' or 'pfa'");
      got = apply_component(st.a, part == "ca" ? Component::Ca : Component::Pfa, in);
    }
    return compare(got == want, measure_to_json(got));
  }
  if (kind == "eval") {
    const Measure mu = measure_from_json(json_field(e, "measure", where), ctx, where + "/measure");
    const SetExpr set = set_from_json(json_field(e, "set", where), st.s.ground, where + "/set");
    const auto got = eval(mu, set);
    const auto& v = json_field(e, "value", where);
    if (v.is_string() && v.get<std::string>() == "undecided") return compare(!got, got ? Json(format_rational(*got)) : Json("undecided"));
    return compare(got && *got == rational_from_json(v, where + "/value"), got ? Json(format_rational(*got)) : Json("undecided"));
  }
  if (kind == "filter-eval") {
    const auto& f = ctx.filter(json_string(json_field(e, "filter", where), where + "/filter"), where + "/filter");
    const SetExpr set = set_from_json(json_field(e, "set", where), st.s.ground, where + "/set");
    const std::string got(decision_name(filter_eval(f, set)));
    return compare(got == json_string(json_field(e, "value", where), where + "/value"), got);
  }
  if (kind == "yosida-hewitt") {
    const Measure mu = measure_from_json(json_field(e, "measure", where), ctx, where + "/measure");
    const auto yh = yosida_hewitt(mu);
    const bool ok = yh.ca == measure_from_json(json_field(e, "ca", where), ctx, where + "/ca") &&
                    yh.pfa == measure_from_json(json_field(e, "pfa", where), ctx, where + "/pfa");
    return compare(ok, Json{{"ca", measure_to_json(yh.ca)}, {"pfa", measure_to_json(yh.pfa)}});
  }
  if (kind == "invariant-solutions") return expect_invariant_solutions(e, st, ctx, where);
  if (kind == "h1") return expect_h(e, st.h1, ctx, where);
  if (kind == "h2") return expect_h(e, st.h2, ctx, where);
  if (kind == "verdict") {
    const std::string name = json_string(json_field(e, "name", where), where + "/name");
    const std::string status = json_string(json_field(e, "status", where), where + "/status");
    for (const auto& v : st.verdicts) {
      if (v.name == name) return compare(verdict_status_name(v.status) == status, verdict_to_json(v));
    }
    return compare(false, Json{{"error", "no verdict named " + name}});
  }
  if (kind == "trace-rows") return expect_trace_rows(e, st, where);
  if (kind == "trace-ca-norm-constant") return expect_trace_constant(e, st, where);
  if (kind == "trace-ca-norm-geometric") return expect_trace_geometric(e, st, where);
  if (kind == "singletons") return expect_singletons(e, st, where);
  if (kind == "closure-basis") return expect_closure_basis(e, st, ctx, where);
  if (kind == "closure-diverges") return expect_closure_diverges(e, st, ctx, where);
  if (kind == "kernel-kind") {
    const std::string got(kernel_kind_name(st.a.kind()));
    return compare(got == json_string(json_field(e, "value", where), where + "/value"), got);
  }
  if (kind == "combined") {
    const auto& ck = st.a.combined();
    if (!ck) return compare(false, Json(nullptr));
    bool ok = ck->q1() == rational_from_json(json_field(e, "q1", where), where + "/q1");
    if (e.contains("nondegenerate")) ok = ok && e["nondegenerate"].get<bool>() == ck->nondegenerate();
    return compare(ok, Json{{"q1", format_rational(ck->q1())}, {"q2", format_rational(ck->q2())}, {"nondegenerate", ck->nondegenerate()}});
  }
  if (kind == "row-support") {
    const Rational x = rational_from_json(json_field(e, "x", where), where + "/x");
    const auto sup = row_atomic_support(st.a.kernel(), x);
    Json atoms = Json::array();
    for (const auto& [y, w] : sup.atoms) atoms.push_back(Json::array({format_rational(y), format_rational(w)}));
    Measure want(st.s.ground), got(st.s.ground);
    const auto& wa = json_field(e, "atoms", where);
    if (!wa.is_array()) throw ParseError(where + "/atoms", "expected an array");
    for (std::size_t i = 0; i < wa.size(); ++i) {
      const std::string at = idx(where + "/atoms", i);
      if (!wa[i].is_array() || wa[i].size() != 2) throw ParseError(at, "expected [point, weight]");
      want.add_atom(rational_from_json(wa[i][0], at + "/0"), rational_from_json(wa[i][1], at + "/1"));
    }
    for (const auto& [y, w] : sup.atoms) got.add_atom(y, w);
    bool ok = got == want && sup.atoms.size() == wa.size();
    if (e.contains("mass")) ok = ok && sup.mass == rational_from_json(e["mass"], where + "/mass");
    return compare(ok, Json{{"atoms", std::move(atoms)}, {"mass", format_rational(sup.mass)}});
  }
  throw ParseError(where + "/kind", "unknown assertion kind '" + kind + "'");
}

CheckResult check_expected(const RunState& st) {
  auto c = make_check("expected");
  if (st.s.expected.empty()) {
    c.status = CheckStatus::Skip;
    c.detail = "no expected values";
    return c;
  }
  const JsonContext ctx = st.s.context();
  Json failures = Json::array();
  for (std::size_t i = 0; i < st.s.expected.size(); ++i) {
    const Json& e = st.s.expected[i];
    const std::string where = idx("/expected", i);
    Outcome o;
    try {
      o = evaluate_expectation(e, st, ctx, where);
    } catch (const ParseError&) {
      throw;
    } catch (const Error& ex) {
      o = compare(false, Json{{"error", ex.what()}});
    }
    if (!o.ok) failures.push_back(Json{{"index", i}, {"assertion", e}, {"actual", o.actual}});
  }
  if (!failures.empty()) {
    const std::string detail = std::to_string(failures.size()) + " of " + std::to_string(st.s.expected.size()) +
                               " expected values differ (first: " + failures[0]["assertion"]["kind"].get<std::string>() + ")";
    fail(c, st, detail, std::move(failures));
    return c;
  }
  c.detail = std::to_string(st.s.expected.size()) + " expected values match";
  return c;
}

CheckResult check_suite(const Scenario& s, const SuiteRequest& r) {
  auto c = make_check("suite:" + r.name);
  const auto rep = run_property_suite(r.name, s.seed, r.count, Execution::Serial);
  c.detail = std::to_string(rep.count(CheckStatus::Pass)) + "/" + std::to_string(r.count) + " passed, " +
             std::to_string(rep.count(CheckStatus::Skip)) + " skipped";
  if (!rep.ok()) {
    c.status = CheckStatus::Fail;
    for (const auto& o : rep.instances) {
      if (o.status == CheckStatus::Fail) {
        c.counterexample = o.counterexample;
        break;
      }
    }
  }
  return c;
}

Json kernel_section(const MarkovOperator& a) {
  Json j;
  j["kind"] = std::string(kernel_kind_name(a.kind()));
  if (const auto& ck = a.combined()) {
    j["combined"] = Json{{"q1", format_rational(ck->q1())}, {"q2", format_rational(ck->q2())}, {"nondegenerate", ck->nondegenerate()}};
  } else {
    j["combined"] = nullptr;
  }
  j["pfa_rows_only"] = a.pfa_rows_only();
  j["atomic_rows_only"] = a.atomic_rows_only();
  Json basis = Json::array();
  for (const auto& f : a.basis()) basis.push_back(f.id());
  j["filter_basis"] = std::move(basis);
  return j;
}

}  // namespace

Report run_scenario(const Scenario& s) {
  const auto start = std::chrono::steady_clock::now();
  Report report;
  report.scenario = s.name;
  report.seed = s.seed;
  const MarkovOperator a(s.kernel, s.filters);
  RunState st{s, a, std::nullopt, {}, check_H1(a), check_H2(a), std::nullopt, {}, {}};
  report.sections["kernel"] = kernel_section(a);

  try {
    st.trace = iterate(a, s.initial, s.n_max);
    Json t = trace_to_json(*st.trace);
    t["h1"] = h_verdict_to_json(st.h1);
    t["h2"] = h_verdict_to_json(st.h2);
    report.sections["trace"] = std::move(t);
  } catch (const Error& e) {
    st.trace_error = e.what();
    report.sections["trace"] = error_json("undecided", e);
  }
  report.sections["h1"] = h_verdict_to_json(st.h1);
  report.sections["h2"] = h_verdict_to_json(st.h2);

  try {
    const auto seeds = s.seeds();
    st.invariant = solve_invariant(orbit_closure(a, seeds, s.closure_cap));
    st.verdicts = classify_invariants(*st.invariant, a);
    for (auto& v : h_condition_corollaries(a, *st.invariant)) st.verdicts.push_back(std::move(v));
    report.sections["invariant"] = invariant_report_to_json(*st.invariant);
  } catch (const ClosureDiverged& e) {
    st.invariant_error = e.what();
    report.sections["invariant"] = error_json("closure-diverged", e);
  } catch (const UndecidedLimit& e) {
    st.invariant_error = e.what();
    report.sections["invariant"] = error_json("undecided-limit", e);
  } catch (const NoRepresentableSolution& e) {
    st.invariant_error = e.what();
    report.sections["invariant"] = error_json("no-representable-solution", e);
  }
  Json verdicts = Json::array();
  for (const auto& v : st.verdicts) verdicts.push_back(verdict_to_json(v));
  report.sections["verdicts"] = std::move(verdicts);

  for (const auto& name : s.checks) {
    if (name == "trace-consistency") report.checks.push_back(check_trace_consistency(st));
    else if (name == "norm-laws") report.checks.push_back(check_norm_laws(st));
    else if (name == "invariant-verdicts") report.checks.push_back(check_invariant_verdicts(st));
    else if (name == "range-inclusions") report.checks.push_back(check_range_inclusions(st));
    else if (name == "expected") report.checks.push_back(check_expected(st));
  }
  for (const auto& r : s.suites) report.checks.push_back(check_suite(s, r));
  report.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return report;
}

Report run_scenario_file(const std::filesystem::path& path, std::optional<std::uint64_t> seed_override) {
  try {
    Scenario s = load_scenario(path);
    if (seed_override) s.seed = *seed_override;
    return run_scenario(s);
  } catch (const Error& e) {
    Report r;
    r.scenario = path.filename().string();
    r.seed = seed_override.value_or(0);
    CheckResult c{"parse", CheckStatus::Fail, e.what(), Json{{"file", path.filename().string()}, {"error", e.what()}}};
    r.checks.push_back(std::move(c));
    return r;
  }
}

bool CorpusRun::passed() const {
  return std::all_of(reports.begin(), reports.end(), [](const Report& r) { return r.passed(); });
}

CorpusRun run_corpus(const std::filesystem::path& dir, std::optional<std::uint64_t> seed_override) {
  CorpusRun run;
  if (!std::filesystem::is_directory(dir)) throw DomainError("corpus directory not found: " + dir.string());
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") run.files.push_back(entry.path());
  }
  std::sort(run.files.begin(), run.files.end());
  for (const auto& f : run.files) run.reports.push_back(run_scenario_file(f, seed_override));
  return run;
}

Json corpus_to_json(const CorpusRun& run, bool include_timing) {
  Json reports = Json::array();
  for (std::size_t i = 0; i < run.reports.size(); ++i) {
    Json r = report_to_json(run.reports[i], include_timing);
    r["file"] = run.files[i].filename().string();
    reports.push_back(std::move(r));
  }
  return Json{{"schema", std::string(kReportSchema)}, {"reports", std::move(reports)}, {"passed", run.passed()}};
}

std::filesystem::path default_corpus_dir() {
  if (const char* env = std::getenv("FAMC_CORPUS_DIR"); env && *env) return env;
  return FAMC_DEFAULT_CORPUS_DIR;
}

}  // namespace famc
