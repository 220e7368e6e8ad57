#include "famc/suites.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <functional>
#include <set>

#include "famc/error.hpp"
#include "famc/random.hpp"

namespace famc {

namespace {

// What an instance found, plus the chain it ran on for the counterexample.
struct Probe {
  CheckStatus status = CheckStatus::Pass;
  std::string detail;
  Json witness;
  std::optional<Scenario> scenario;

  void fail(std::string why, Json w = nullptr) {
    if (status == CheckStatus::Fail) return;
    status = CheckStatus::Fail;
    detail = std::move(why);
    witness = std::move(w);
  }
  void skip(std::string why) {
    if (status != CheckStatus::Pass) return;
    status = CheckStatus::Skip;
    detail = std::move(why);
  }
  bool failed() const { return status == CheckStatus::Fail; }
};

Scenario chain_scenario(const GroundSpace& g, const std::vector<FilterFunctional>& filters, const Kernel& k,
                        Measure initial, std::vector<std::string> checks) {
  Scenario s(g);
  s.filters = filters;
  s.kernel = k;
  s.initial = std::move(initial);
  s.n_max = 12;
  s.checks = std::move(checks);
  return s;
}

Measure first_dirac(const RandomChain& c) { return Measure::dirac(c.ground, c.atoms.front()); }

Measure random_probability(Rng& rng, const RandomChain& c) {
  const auto shape = static_cast<MeasureShape>(std::uniform_int_distribution<int>(0, 2)(rng));
  return random_measure(rng, c, shape, 1);
}

// Singletons worth testing: the chain's atoms, the filter points and a grid.
std::vector<Rational> singleton_pool(const RandomChain& c, const Measure& extra) {
  std::set<Rational> pts(c.atoms.begin(), c.atoms.end());
  for (const auto& f : c.filters) pts.insert(f.point());
  for (const auto& [x, w] : extra.atoms()) pts.insert(x);
  for (long k = 0; k <= 12; ++k) pts.insert(ratio(k, 12));
  return {pts.begin(), pts.end()};
}

std::vector<Generator> chain_seeds(const RandomChain& c, const Measure& initial) {
  auto seeds = generators_of(initial);
  for (const auto& f : c.filters) seeds.push_back(Generator::filter(f));
  return seeds;
}

const Verdict* find_verdict(const std::vector<Verdict>& vs, std::string_view name) {
  for (const auto& v : vs) {
    if (v.name == name) return &v;
  }
  return nullptr;
}

void every_verdict_holds_or_na(Probe& p, const std::vector<Verdict>& vs) {
  for (const auto& v : vs) {
    if (v.status == VerdictStatus::Violated) p.fail(v.name + " violated: " + v.detail, verdict_to_json(v));
    if (v.status == VerdictStatus::Inconclusive) p.skip(v.name + " inconclusive: " + v.detail);
  }
}

void require_verdict(Probe& p, const std::vector<Verdict>& vs, std::string_view name) {
  const Verdict* v = find_verdict(vs, name);
  if (!v) return p.fail("verdict " + std::string(name) + " missing");
  if (v->status == VerdictStatus::Violated) return p.fail(v->name + " violated: " + v->detail, verdict_to_json(*v));
  if (v->status != VerdictStatus::Holds) p.skip(v->name + " " + std::string(verdict_status_name(v->status)) + ": " + v->detail);
}

// ---------------------------------------------------------------------------

void suite_decomposition(Rng& rng, Probe& p) {
  const bool pure = std::uniform_int_distribution<int>(0, 3)(rng) == 0;
  const RandomChain c = pure ? random_pfa_chain(rng, false) : random_combined_chain(rng, HMode::Free);
  p.scenario = chain_scenario(c.ground, c.filters, c.kernel, first_dirac(c), {"expected"});

  for (int i = 0; i < 5; ++i) {
    const auto shape = static_cast<MeasureShape>(i % 3);
    const Measure mu = random_measure(rng, c, shape, i % 2 ? Rational(1) : ratio(2, 3));
    const auto yh = yosida_hewitt(mu);
    const Json w = measure_to_json(mu);
    if (!(combine(1, yh.ca, 1, yh.pfa) == mu)) return p.fail("ca + pfa does not recombine to the measure", w);
    if (!yh.ca.pfa().empty()) return p.fail("ca part carries filter terms", w);
    if (!yh.pfa.atoms().empty()) return p.fail("pfa part carries atoms", w);
    if (norm(mu) != norm(yh.ca) + norm(yh.pfa)) return p.fail("norm is not additive across the split", w);
    for (const auto& x : singleton_pool(c, mu)) {
      if (eval(yh.pfa, SetExpr::point(c.ground, x)) != Rational(0))
        return p.fail("pfa part charges the singleton " + format_rational(x), w);
    }
  }

  const auto split = decompose_kernel(c.kernel);
  if (!rows_equivalent(kernel_sum(1, split.ca, 1, split.pfa), c.kernel))
    return p.fail("decompose_kernel does not recombine to the kernel");
  for (const auto& r : split.ca.rules()) {
    if (!r.row.constant.pfa().empty()) return p.fail("ca kernel row on " + r.piece.describe() + " has filter terms");
  }
  const auto pool = singleton_pool(c, Measure(c.ground));
  for (const auto& r : split.pfa.rules()) {
    if (!r.row.constant.atoms().empty() || !r.row.shifts.empty())
      return p.fail("pfa kernel row on " + r.piece.describe() + " has atomic terms");
    for (const auto& x : sample_points(r.piece, 8)) {
      for (const auto& y : pool) {
        if (eval(r.row.at(x), SetExpr::point(c.ground, y)) != Rational(0))
          return p.fail("pfa kernel row charges a singleton at x = " + format_rational(x));
      }
    }
  }
  const auto ck = as_combined(c.kernel);
  if (!pure) {
    if (!ck) return p.fail("combined chain not recognized");
    const auto rebuilt = make_combined(ck->q1(), kernel_sum(1 / ck->q1(), ck->ca_part(), 0, ck->ca_part()),
                                       kernel_sum(1 / ck->q2(), ck->pfa_part(), 0, ck->pfa_part()));
    if (!rows_equivalent(rebuilt.kernel(), c.kernel)) return p.fail("make_combined does not rebuild the kernel");
    if (rebuilt.q1() != c.q1) return p.fail("recovered q1 differs");
  }
}

void suite_thm_3_3(Rng& rng, Probe& p) {
  const RandomChain c = random_combined_chain(rng, HMode::Free);
  p.scenario = chain_scenario(c.ground, c.filters, c.kernel, first_dirac(c), {});
  for (int i = 0; i < 5; ++i) {
    const Measure mu = random_measure(rng, c, static_cast<MeasureShape>(i % 3), 1);
    bool singletons_zero = true;
    for (const auto& x : singleton_pool(c, mu)) {
      singletons_zero = singletons_zero && eval(mu, SetExpr::point(c.ground, x)) == Rational(0);
    }
    const bool lhs = is_pfa(mu);
    if (lhs != (singletons_zero && mu.atoms().empty()))
      return p.fail("is_pfa disagrees with the singleton criterion", measure_to_json(mu));
  }
  // Pure pfa rows vanish on finite sets.
  const RandomChain pc = random_pfa_chain(rng, false);
  std::vector<Rational> finite(pc.atoms.begin(), pc.atoms.end());
  const auto fin = SetExpr::points(pc.ground, finite);
  for (const auto& r : pc.kernel.rules()) {
    for (const auto& x : sample_points(r.piece, 8)) {
      if (eval(pc.kernel.row(x), fin) != Rational(0)) {
        p.scenario = chain_scenario(pc.ground, pc.filters, pc.kernel, first_dirac(pc), {});
        return p.fail("pfa row charges a finite set at x = " + format_rational(x));
      }
    }
  }
}

void suite_cor_3_2(Rng& rng, Probe& p) {
  const RandomChain c = random_pfa_chain(rng, std::uniform_int_distribution<int>(0, 1)(rng) == 1);
  p.scenario = chain_scenario(c.ground, c.filters, c.kernel, first_dirac(c), {});
  const unsigned n = std::uniform_int_distribution<unsigned>(1, 4)(rng);
  std::vector<std::pair<Rational, Rational>> pairs;
  const auto pool = singleton_pool(c, Measure(c.ground));
  for (const auto& x : c.atoms) {
    for (const auto& y : pool) pairs.emplace_back(x, y);
  }
  for (const auto& v : kernel_power_singletons(c.kernel, n, pairs)) {
    if (v.value != 0) {
      return p.fail("P^" + std::to_string(n) + "(" + format_rational(v.x) + ",{" + format_rational(v.y) +
                    "}) = " + format_rational(v.value));
    }
  }
}

void suite_thm_3_5(Rng& rng, Probe& p) {
  const RandomChain c = random_pfa_chain(rng, std::uniform_int_distribution<int>(0, 1)(rng) == 1);
  p.scenario = chain_scenario(c.ground, c.filters, c.kernel, first_dirac(c), {"range-inclusions"});
  const MarkovOperator a(c.kernel, c.filters);
  for (const auto& mu : random_battery(rng, c, 10)) {
    const Measure img = apply(a, mu);
    if (!is_pfa(img)) return p.fail("A maps a measure outside pfa", Json{{"input", measure_to_json(mu)}, {"image", measure_to_json(img)}});
  }
}

void suite_cor_3_3(Rng& rng, Probe& p) {
  const RandomChain c = random_combined_chain(rng, HMode::Free);
  p.scenario = chain_scenario(c.ground, c.filters, c.kernel, first_dirac(c), {"range-inclusions"});
  const MarkovOperator a(c.kernel, c.filters);
  const auto battery = random_battery(rng, c, 10);
  const auto rep = range_inclusions(a, battery);
  if (!rep.ok()) return p.fail(rep.violations.front().inclusion + " violated", range_report_to_json(rep));
  if (rep.checked != battery.size()) p.skip(std::to_string(rep.skipped) + " battery elements skipped");
}

void suite_thm_4_2(Rng& rng, Probe& p) {
  const RandomChain c = random_pfa_chain(rng, true);
  const Measure initial = random_probability(rng, c);
  p.scenario = chain_scenario(c.ground, c.filters, c.kernel, initial, {"invariant-verdicts"});
  const MarkovOperator a(c.kernel, c.filters);
  const auto seeds = chain_seeds(c, initial);
  const auto rep = solve_invariant(orbit_closure(a, seeds));
  for (const auto& s : rep.solutions) {
    if (!is_pfa(s)) return p.fail("invariant measure with an atomic part", measure_to_json(s));
  }
  if (!rep.delta_ca_empty) return p.fail("a countably additive invariant measure exists");
  const auto vs = classify_invariants(rep, a);
  require_verdict(p, vs, "pfa-kernel-invariants-are-pfa");
  every_verdict_holds_or_na(p, vs);
}

void suite_thm_4_3_4_4(Rng& rng, Probe& p) {
  const RandomChain c = random_combined_chain(rng, HMode::Free);
  const Measure initial = random_probability(rng, c);
  p.scenario = chain_scenario(c.ground, c.filters, c.kernel, initial, {"invariant-verdicts"});
  const MarkovOperator a(c.kernel, c.filters);
  const auto seeds = chain_seeds(c, initial);
  const auto rep = solve_invariant(orbit_closure(a, seeds));
  if (!rep.enumerated) return p.skip("nullspace of dimension " + std::to_string(rep.nullspace_dim) + " not enumerated");
  for (const auto& s : rep.solutions) {
    if (s.pfa().empty()) return p.fail("invariant measure with zero pfa part", measure_to_json(s));
    if (classify(s) != MeasureType::Mixed) continue;
    const auto yh = yosida_hewitt(s);
    if (apply(a, yh.ca) == yh.ca) return p.fail("ca component of a mixed invariant is invariant", measure_to_json(s));
    if (apply(a, yh.pfa) == yh.pfa) return p.fail("pfa component of a mixed invariant is invariant", measure_to_json(s));
  }
  const auto vs = classify_invariants(rep, a);
  require_verdict(p, vs, "no-ca-invariant");
  every_verdict_holds_or_na(p, vs);
}

void suite_thm_5_1(Rng& rng, Probe& p) {
  const RandomChain c = random_combined_chain(rng, HMode::H1);
  const Measure initial = random_probability(rng, c);
  p.scenario = chain_scenario(c.ground, c.filters, c.kernel, initial, {"norm-laws"});
  const MarkovOperator a(c.kernel, c.filters);
  const auto h1 = check_H1(a);
  if (h1.status != HVerdict::Status::HoldsOnBasis) return p.fail("generated H1 chain fails H1", h_verdict_to_json(h1));
  const auto t = iterate(a, initial, 12);
  for (const auto& r : t.rows) {
    if (r.ca_norm + r.pfa_norm != 1) return p.fail("trace row " + std::to_string(r.n) + " does not sum to 1");
    if (r.n >= 2 && r.ca_norm != c.q1)
      return p.fail("ca_norm(" + std::to_string(r.n) + ") = " + format_rational(r.ca_norm) + ", q1 = " + format_rational(c.q1));
  }
}

void suite_thm_5_2(Rng& rng, Probe& p) {
  const RandomChain c = random_combined_chain(rng, HMode::H2);
  const Measure initial = random_probability(rng, c);
  p.scenario = chain_scenario(c.ground, c.filters, c.kernel, initial, {"norm-laws"});
  const MarkovOperator a(c.kernel, c.filters);
  const auto h2 = check_H2(a);
  if (h2.status != HVerdict::Status::HoldsOnBasis) return p.fail("generated H2 chain fails H2", h_verdict_to_json(h2));
  const Rational ca1 = norm(initial.atomic_part());
  const auto t = iterate(a, initial, 12);
  for (const auto& r : t.rows) {
    const Rational want = pow(c.q1, static_cast<unsigned>(r.n - 1)) * ca1;
    if (r.ca_norm != want || r.pfa_norm != 1 - want)
      return p.fail("ca_norm(" + std::to_string(r.n) + ") = " + format_rational(r.ca_norm) + ", expected " + format_rational(want));
  }
}

void suite_cor_5_1(Rng& rng, Probe& p) {
  const RandomChain c = random_combined_chain(rng, HMode::H1);
  const Measure initial = random_probability(rng, c);
  p.scenario = chain_scenario(c.ground, c.filters, c.kernel, initial, {"invariant-verdicts"});
  const MarkovOperator a(c.kernel, c.filters);
  const auto rep = solve_invariant(orbit_closure(a, chain_seeds(c, initial)));
  if (!rep.enumerated) return p.skip("nullspace not enumerated");
  for (const auto& s : rep.solutions) {
    if (norm(s.atomic_part()) != c.q1 || norm(s.pfa_part()) != 1 - c.q1)
      return p.fail("invariant component masses differ from (q1, q2)", measure_to_json(s));
  }
  require_verdict(p, h_condition_corollaries(a, rep), "h1-invariant-component-masses");
}

void suite_cor_5_2(Rng& rng, Probe& p) {
  const RandomChain c = random_combined_chain(rng, HMode::H2);
  std::vector<Measure> initials{first_dirac(c)};
  while (initials.size() < 6) initials.push_back(random_probability(rng, c));
  p.scenario = chain_scenario(c.ground, c.filters, c.kernel, initials.back(), {"norm-laws"});
  const MarkovOperator a(c.kernel, c.filters);
  if (check_H2(a).status != HVerdict::Status::HoldsOnBasis) return p.fail("generated H2 chain fails H2");
  constexpr int n_max = 12;
  std::vector<NormTrace> traces;
  for (const auto& mu : initials) traces.push_back(iterate(a, mu, n_max));
  for (int n = 1; n <= n_max; ++n) {
    const Rational bound = pow(c.q1, static_cast<unsigned>(n));
    bool attained = false;
    for (std::size_t i = 0; i < initials.size(); ++i) {
      const Rational ca = traces[i].rows[static_cast<std::size_t>(n)].ca_norm;
      const Rational scaled = bound * norm(initials[i].atomic_part());
      if (ca > bound) return p.fail("ca_norm(" + std::to_string(n + 1) + ") exceeds q1^" + std::to_string(n), measure_to_json(initials[i]));
      if (ca != scaled) return p.fail("ca_norm(" + std::to_string(n + 1) + ") is not q1^n times the initial ca mass", measure_to_json(initials[i]));
      attained = attained || ca == bound;
    }
    if (!attained) return p.fail("the uniform bound q1^" + std::to_string(n) + " is not attained by the Dirac initial");
  }
}

void suite_cor_5_3(Rng& rng, Probe& p) {
  const RandomChain c = random_combined_chain(rng, HMode::H2);
  const Measure initial = random_probability(rng, c);
  p.scenario = chain_scenario(c.ground, c.filters, c.kernel, initial, {"invariant-verdicts"});
  const MarkovOperator a(c.kernel, c.filters);
  const auto rep = solve_invariant(orbit_closure(a, chain_seeds(c, initial)));
  if (!rep.enumerated) return p.skip("nullspace not enumerated");
  for (const auto& s : rep.solutions) {
    if (!is_pfa(s)) return p.fail("invariant measure with an atomic part under H2", measure_to_json(s));
  }
  if (!rep.delta_ca_empty || !rep.delta_pfa_nonempty) return p.fail("Δ_ca must be empty and Δ_pfa non-empty");
  require_verdict(p, h_condition_corollaries(a, rep), "h2-invariants-are-pfa");
}

// Dense oracle for finite chains: row vectors times the matrix, matrix
// powers, and extreme stationary vectors as the stationary vectors of the
// closed communicating classes.
using Dense = std::vector<std::vector<Rational>>;

Dense dense_product(const Dense& a, const Dense& b) {
  const std::size_t n = a.size();
  Dense out(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      if (a[i][k] != 0)
        for (std::size_t j = 0; j < n; ++j) out[i][j] += a[i][k] * b[k][j];
  return out;
}

std::vector<std::vector<Rational>> closed_class_stationaries(const Dense& m) {
  const std::size_t n = m.size();
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) {
    reach[i][i] = true;
    for (std::size_t j = 0; j < n; ++j) reach[i][j] = reach[i][j] || m[i][j] != 0;
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) reach[i][j] = reach[i][j] || (reach[i][k] && reach[k][j]);
  std::vector<std::vector<Rational>> out;
  std::vector<bool> seen(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    if (seen[i]) continue;
    std::vector<std::size_t> cls;
    for (std::size_t j = 0; j < n; ++j)
      if (reach[i][j] && reach[j][i]) cls.push_back(j);
    for (auto j : cls) seen[j] = true;
    bool closed = true;
    for (auto j : cls)
      for (std::size_t k = 0; k < n; ++k) closed = closed && (!reach[j][k] || reach[k][j]);
    if (!closed) continue;
    // Solve π (P_C - I) = 0, Σπ = 1 on the class by Gauss-Jordan.
    const std::size_t s = cls.size();
    std::vector<std::vector<Rational>> a(s, std::vector<Rational>(s + 1));
    for (std::size_t r = 0; r + 1 < s; ++r)
      for (std::size_t col = 0; col < s; ++col) a[r][col] = m[cls[col]][cls[r]] - (r == col ? 1 : 0);
    for (std::size_t col = 0; col < s; ++col) a[s - 1][col] = 1;
    a[s - 1][s] = 1;
    for (std::size_t col = 0; col < s; ++col) {
      std::size_t piv = col;
      while (a[piv][col] == 0) ++piv;
      std::swap(a[piv], a[col]);
      for (std::size_t r = 0; r < s; ++r) {
        if (r == col || a[r][col] == 0) continue;
        const Rational f = a[r][col] / a[col][col];
        for (std::size_t k = col; k <= s; ++k) a[r][k] -= f * a[col][k];
      }
    }
    std::vector<Rational> pi(n);
    for (std::size_t r = 0; r < s; ++r) pi[cls[r]] = a[r][s] / a[r][r];
    out.push_back(std::move(pi));
  }
  return out;
}

void suite_matrix_oracle(Rng& rng, Probe& p) {
  const auto mc = random_matrix_chain(rng, 6);
  const auto pts = mc.ground.points();
  const std::size_t n = pts.size();
  p.scenario = chain_scenario(mc.ground, {}, mc.kernel, Measure::dirac(mc.ground, pts[0]), {"expected"});
  const MarkovOperator a(mc.kernel);

  std::vector<Rational> v(n);
  Measure mu(mc.ground);
  {
    long sum = 0;
    std::vector<long> w(n);
    for (auto& x : w) sum += (x = std::uniform_int_distribution<long>(0, 4)(rng));
    if (sum == 0) w[0] = sum = 1;
    for (std::size_t i = 0; i < n; ++i) mu.add_atom(pts[i], v[i] = ratio(w[i], sum));
  }
  const Measure img = apply(a, mu);
  for (std::size_t j = 0; j < n; ++j) {
    Rational want = 0;
    for (std::size_t i = 0; i < n; ++i) want += v[i] * mc.matrix[i][j];
    if (img.atom(pts[j]) != want) return p.fail("apply differs from the row-vector product", measure_to_json(mu));
  }

  Dense power = mc.matrix;
  Kernel kp = mc.kernel;
  for (unsigned k = 1; k <= 5; ++k) {
    if (k > 1) {
      power = dense_product(power, mc.matrix);
      kp = convolve(kp, mc.kernel);
    }
    for (std::size_t i = 0; i < n; ++i) {
      const Measure row = kp.row(pts[i]);
      for (std::size_t j = 0; j < n; ++j) {
        if (row.atom(pts[j]) != power[i][j]) return p.fail("P^" + std::to_string(k) + " differs from the matrix power");
      }
    }
  }

  std::vector<Generator> seeds;
  for (const auto& x : pts) seeds.push_back(Generator::atom(x));
  const auto rep = solve_invariant(orbit_closure(a, seeds));
  const auto oracle = closed_class_stationaries(mc.matrix);
  if (rep.nullspace_dim != oracle.size())
    return p.fail("invariant dimension " + std::to_string(rep.nullspace_dim) + ", oracle has " + std::to_string(oracle.size()) + " closed classes");
  if (!rep.enumerated) return;
  std::set<std::vector<Rational>> got, want(oracle.begin(), oracle.end());
  for (const auto& s : rep.solutions) {
    std::vector<Rational> pi(n);
    for (std::size_t i = 0; i < n; ++i) pi[i] = s.atom(pts[i]);
    got.insert(pi);
  }
  if (got != want) return p.fail("extreme invariant measures differ from the closed-class stationary vectors");
}

void suite_linearity(Rng& rng, Probe& p) {
  const RandomChain c = random_combined_chain(rng, HMode::Free);
  p.scenario = chain_scenario(c.ground, c.filters, c.kernel, first_dirac(c), {});
  const MarkovOperator a(c.kernel, c.filters);
  const auto battery = random_battery(rng, c, 6);
  std::uniform_int_distribution<long> coef(-4, 4);
  for (std::size_t i = 0; i + 1 < battery.size(); ++i) {
    const Measure& mu = battery[i];
    const Measure& nu = battery[i + 1];
    const Rational s = ratio(coef(rng), 3), t = ratio(coef(rng), 5);
    const Json w = Json{{"mu", measure_to_json(mu)}, {"nu", measure_to_json(nu)}};
    if (!(apply(a, combine(s, mu, t, nu)) == combine(s, apply(a, mu), t, apply(a, nu)))) return p.fail("apply is not linear", w);
    const Measure img = apply(a, mu);
    if (!img.is_nonnegative()) return p.fail("apply is not positive", w);
    if (norm(img) != norm(mu)) return p.fail("Markov operator changes the norm", w);
    if (!(combine(1, apply_component(a, Component::Ca, mu), 1, apply_component(a, Component::Pfa, mu)) == img))
      return p.fail("A_ca + A_pfa differs from A", w);
  }
}

using SuiteFn = void (*)(Rng&, Probe&);

struct SuiteEntry {
  std::string_view name;
  SuiteFn fn;
};

constexpr std::array<SuiteEntry, 14> kSuites{{
    {"decomposition", suite_decomposition},
    {"thm_3_3", suite_thm_3_3},
    {"cor_3_2", suite_cor_3_2},
    {"thm_3_5", suite_thm_3_5},
    {"cor_3_3", suite_cor_3_3},
    {"thm_4_2", suite_thm_4_2},
    {"thm_4_3_4_4", suite_thm_4_3_4_4},
    {"thm_5_1", suite_thm_5_1},
    {"thm_5_2", suite_thm_5_2},
    {"cor_5_1", suite_cor_5_1},
    {"cor_5_2", suite_cor_5_2},
    {"cor_5_3", suite_cor_5_3},
    {"matrix_oracle", suite_matrix_oracle},
    {"linearity", suite_linearity},
}};

const std::array<std::string_view, kSuites.size()> kSuiteNames = [] {
  std::array<std::string_view, kSuites.size()> out{};
  for (std::size_t i = 0; i < kSuites.size(); ++i) out[i] = kSuites[i].name;
  return out;
}();

SuiteFn lookup(std::string_view name) {
  for (const auto& s : kSuites) {
    if (s.name == name) return s.fn;
  }
  throw DomainError("unknown property suite '" + std::string(name) + "'");
}

InstanceOutcome run_instance(std::string_view name, SuiteFn fn, std::uint64_t seed, std::size_t index) {
  InstanceOutcome out;
  out.index = index;
  out.seed = instance_seed(seed, index);
  Rng rng(out.seed);
  Probe p;
  try {
    fn(rng, p);
  } catch (const std::exception& e) {
    p.fail(std::string("exception: ") + e.what());
  }
  out.status = p.status;
  out.detail = p.detail;
  if (p.status == CheckStatus::Fail) {
    Json ce;
    ce["suite"] = std::string(name);
    ce["suite_seed"] = seed;
    ce["index"] = index;
    ce["instance_seed"] = out.seed;
    if (p.scenario) {
      p.scenario->name = std::string(name) + "-" + std::to_string(index);
      p.scenario->seed = out.seed;
      ce["scenario"] = scenario_to_json(*p.scenario);
    }
    ce["witness"] = p.witness;
    out.counterexample = std::move(ce);
  }
  return out;
}

}  // namespace

std::size_t SuiteReport::count(CheckStatus s) const {
  return static_cast<std::size_t>(
      std::count_if(instances.begin(), instances.end(), [s](const InstanceOutcome& o) { return o.status == s; }));
}

std::span<const std::string_view> suite_names() { return kSuiteNames; }

bool is_suite(std::string_view name) {
  return std::find(kSuiteNames.begin(), kSuiteNames.end(), name) != kSuiteNames.end();
}

InstanceOutcome run_suite_instance(std::string_view name, std::uint64_t seed, std::size_t index) {
  return run_instance(name, lookup(name), seed, index);
}

SuiteReport run_property_suite(std::string_view name, std::uint64_t seed, std::size_t count, Execution exec) {
  const SuiteFn fn = lookup(name);
  SuiteReport report;
  report.suite = std::string(name);
  report.seed = seed;
  report.instances.resize(count);
  const auto start = std::chrono::steady_clock::now();
  const long n = static_cast<long>(count);
  if (exec == Execution::Parallel) {
#ifdef FAMC_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic, 1)
#endif
    for (long i = 0; i < n; ++i) {
      report.instances[static_cast<std::size_t>(i)] = run_instance(name, fn, seed, static_cast<std::size_t>(i));
    }
  } else {
    for (long i = 0; i < n; ++i) {
      report.instances[static_cast<std::size_t>(i)] = run_instance(name, fn, seed, static_cast<std::size_t>(i));
    }
  }
  report.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return report;
}

Json suite_report_to_json(const SuiteReport& r, bool include_timing) {
  Json failures = Json::array();
  Json skips = Json::array();
  for (const auto& o : r.instances) {
    if (o.status == CheckStatus::Fail) {
      failures.push_back(Json{{"index", o.index}, {"instance_seed", o.seed}, {"detail", o.detail}, {"counterexample", o.counterexample}});
    } else if (o.status == CheckStatus::Skip) {
      skips.push_back(Json{{"index", o.index}, {"instance_seed", o.seed}, {"detail", o.detail}});
    }
  }
  Json j;
  j["suite"] = r.suite;
  j["seed"] = r.seed;
  j["count"] = r.instances.size();
  j["passed"] = r.count(CheckStatus::Pass);
  j["failed"] = r.count(CheckStatus::Fail);
  j["skipped"] = r.count(CheckStatus::Skip);
  j["failures"] = std::move(failures);
  j["skips"] = std::move(skips);
  if (include_timing) j["timing"] = Json{{"elapsed_ms", r.elapsed_ms}};
  return j;
}

}  // namespace famc
