// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 on any failure.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "famc/invariant.hpp"
#include "famc/operator.hpp"
#include "famc/random.hpp"
#include "famc/scenario.hpp"
#include "famc/suites.hpp"

using namespace famc;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

Outcome failed(std::string why) { return {false, std::move(why)}; }

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t) { return std::chrono::duration<double, std::milli>(Clock::now() - t).count(); }

const GroundSpace& unit() {
  static const GroundSpace g = GroundSpace::unit_interval("I");
  return g;
}

const FilterFunctional& eta() {
  static const FilterFunctional f = FilterFunctional::make("eta0plus", unit(), TailFamily::LeftOfPoint, 0);
  return f;
}

// Random probability on a few points k/24 of [0,1] plus an optional eta part.
Measure random_probability(Rng& rng, bool with_eta) {
  std::uniform_int_distribution<int> atoms(1, 5), point(0, 24), weight(1, 6);
  std::vector<std::pair<Rational, long>> parts;
  long total = 0;
  const int k = atoms(rng);
  for (int i = 0; i < k; ++i) {
    const long w = weight(rng);
    parts.emplace_back(ratio(point(rng), 24), w);
    total += w;
  }
  const long e = with_eta ? weight(rng) : 0;
  total += e;
  Measure mu(unit());
  for (const auto& [x, w] : parts) mu.add_atom(x, ratio(w, total));
  if (e) mu.add_filter(eta(), ratio(e, total));
  return mu;
}

Measure half_delta0_half_eta() {
  Measure m(unit());
  m.add_atom(0, ratio(1, 2)).add_filter(eta(), ratio(1, 2));
  return m;
}

Kernel constant_chain() {
  Row row(unit());
  row.constant = half_delta0_half_eta();
  return Kernel(unit(), {{SetExpr::full(unit()), row}});
}

Kernel lazy_chain() {
  Row row(unit());
  row.constant.add_filter(eta(), ratio(1, 2));
  row.add_shift(0, ratio(1, 2));
  return Kernel(unit(), {{SetExpr::full(unit()), row}});
}

Kernel jump_then_filter() {
  Row at_zero(unit());
  at_zero.constant.add_atom(1, 1);
  Row elsewhere(unit());
  elsewhere.constant.add_filter(eta(), 1);
  const IntervalBounds rest{Rational(0), Rational(1), true, false};
  return Kernel(unit(), {{SetExpr::point(unit(), 0), at_zero}, {SetExpr::interval(unit(), rest), elsewhere}});
}

Outcome timed(Clock::time_point start, Outcome o) {
  const double ms = ms_since(start);
  if (o.ok && ms >= 1000) return failed("took " + std::to_string(ms) + " ms");
  o.detail += " (" + std::to_string(static_cast<long>(ms)) + " ms)";
  return o;
}

Outcome criterion_1() {
  const auto start = Clock::now();
  const MarkovOperator a(constant_chain(), {eta()});
  const Measure target = half_delta0_half_eta();
  Rng rng(101);
  for (int i = 0; i < 20; ++i) {
    const Measure mu = random_probability(rng, i % 2 == 1);
    if (!(apply(a, mu) == target)) return failed("A mu != 1/2 d0 + 1/2 eta for " + mu.describe());
    const auto seeds = generators_of(mu);
    const auto rep = solve_invariant(orbit_closure(a, seeds));
    if (rep.solutions.size() != 1 || !(rep.solutions[0] == target)) return failed("invariant is not unique 1/2 d0 + 1/2 eta");
    const auto trace = iterate(a, mu, 50);
    for (const auto& r : trace.rows) {
      if (r.n >= 2 && (r.ca_norm != ratio(1, 2) || r.pfa_norm != ratio(1, 2)))
        return failed("trace row " + std::to_string(r.n) + " is not (1/2, 1/2)");
    }
    if (trace.rows.back().n < 50) return failed("trace stops before n = 50");
  }
  if (check_H1(a).status != HVerdict::Status::HoldsOnBasis) return failed("H1 does not hold on the basis");
  const auto& ck = a.combined();
  if (!ck || ck->q1() != ratio(1, 2) || ck->q2() != ratio(1, 2)) return failed("not combined with q1 = q2 = 1/2");
  return timed(start, {true, "20 initials, unique invariant, H1, flat trace to n = 50"});
}

Outcome criterion_2() {
  const auto start = Clock::now();
  const MarkovOperator a(lazy_chain(), {eta()});
  Rng rng(202);
  for (int i = 0; i < 20; ++i) {
    const Measure mu = random_probability(rng, i % 2 == 1);
    if (!(apply(a, mu) == combine(ratio(1, 2), mu, ratio(1, 2), Measure::of_filter(eta()))))
      return failed("A mu != 1/2 mu + 1/2 eta for " + mu.describe());
  }
  const Measure start_measure = Measure::dirac(unit(), ratio(1, 2));
  const auto seeds = generators_of(start_measure);
  const auto rep = solve_invariant(orbit_closure(a, seeds));
  if (rep.solutions.size() != 1 || !(rep.solutions[0] == Measure::of_filter(eta()))) return failed("invariant is not unique eta");
  if (!is_pfa(rep.solutions[0]) || !rep.delta_ca_empty) return failed("invariant set has a countably additive member");
  if (check_H2(a).status != HVerdict::Status::HoldsOnBasis) return failed("H2 does not hold on the basis");
  const auto trace = iterate(a, start_measure, 41);
  for (const auto& r : trace.rows) {
    if (r.n > 41) continue;
    const Rational want = pow(ratio(1, 2), static_cast<unsigned>(r.n - 1));
    if (r.ca_norm != want || r.pfa_norm != 1 - want) return failed("ca_norm(" + std::to_string(r.n) + ") != (1/2)^(n-1)");
  }
  if (trace.rows.size() < 41) return failed("trace shorter than 41 rows");
  return timed(start, {true, "A mu = 1/2 mu + 1/2 eta, unique invariant eta, H2, ca_norm(n+1) = 2^-n for n <= 40"});
}

Outcome criterion_3() {
  const auto start = Clock::now();
  const Kernel k = jump_then_filter();
  std::vector<std::pair<Rational, Rational>> grid;
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j) grid.emplace_back(ratio(i, 9), ratio(j, 9));
  for (const auto& v : kernel_power_singletons(k, 2, grid)) {
    if (v.value != 0) return failed("P^2(" + format_rational(v.x) + ", {" + format_rational(v.y) + "}) != 0");
  }
  const std::vector<std::pair<Rational, Rational>> one{{Rational(0), Rational(1)}};
  if (kernel_power_singletons(k, 1, one)[0].value != 1) return failed("P(0, {1}) != 1");
  return timed(start, {true, "P^2 vanishes on 100 grid singletons, P(0, {1}) = 1"});
}

Outcome suite_criterion(const char* name, std::size_t count, std::uint64_t seed) {
  const auto rep = run_property_suite(name, seed, count);
  const auto passed = rep.count(CheckStatus::Pass);
  std::string detail = std::string(name) + ": " + std::to_string(passed) + "/" + std::to_string(count) + " passed";
  if (passed != count) {
    for (const auto& o : rep.instances) {
      if (o.status != CheckStatus::Pass) {
        detail += "; instance " + std::to_string(o.index) + " " + std::string(check_status_name(o.status)) + ": " + o.detail;
        break;
      }
    }
    return failed(detail);
  }
  return {true, detail};
}

// Brute-force finite-chain oracle, independent of the library's linear algebra.
using Matrix = std::vector<std::vector<Rational>>;

Matrix product(const Matrix& a, const Matrix& b) {
  const std::size_t n = a.size();
  Matrix out(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      if (a[i][k] != 0)
        for (std::size_t j = 0; j < n; ++j) out[i][j] += a[i][k] * b[k][j];
  return out;
}

// Reduced row echelon form in place; returns the pivot columns.
std::vector<std::size_t> rref(Matrix& m) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  const std::size_t cols = m.empty() ? 0 : m[0].size();
  for (std::size_t c = 0; c < cols && row < m.size(); ++c) {
    std::size_t p = row;
    while (p < m.size() && m[p][c] == 0) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[row]);
    const Rational inv = 1 / m[row][c];
    for (auto& x : m[row]) x *= inv;
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == row || m[r][c] == 0) continue;
      const Rational f = m[r][c];
      for (std::size_t k = 0; k < cols; ++k) m[r][k] -= f * m[row][k];
    }
    pivots.push_back(c);
    ++row;
  }
  return pivots;
}

std::size_t rank_of(Matrix m) { return rref(m).size(); }

// Basis of {pi : pi P = pi}, i.e. the nullspace of P^T - I.
Matrix left_fixed_space(const Matrix& p) {
  const std::size_t n = p.size();
  Matrix m(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m[i][j] = p[j][i] - (i == j ? 1 : 0);
  const auto piv = rref(m);
  Matrix basis;
  for (std::size_t free = 0; free < n; ++free) {
    if (std::find(piv.begin(), piv.end(), free) != piv.end()) continue;
    std::vector<Rational> v(n);
    v[free] = 1;
    for (std::size_t r = 0; r < piv.size(); ++r) v[piv[r]] = -m[r][free];
    basis.push_back(std::move(v));
  }
  return basis;
}

// Stationary distribution of each closed communicating class.
std::set<std::vector<Rational>> extreme_stationaries(const Matrix& p) {
  const std::size_t n = p.size();
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n));
  for (std::size_t i = 0; i < n; ++i) {
    reach[i][i] = true;
    for (std::size_t j = 0; j < n; ++j)
      if (p[i][j] != 0) reach[i][j] = true;
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (reach[i][k] && reach[k][j]) reach[i][j] = true;
  std::set<std::vector<Rational>> out;
  std::vector<bool> seen(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (seen[i]) continue;
    std::vector<std::size_t> cls;
    for (std::size_t j = 0; j < n; ++j)
      if (reach[i][j] && reach[j][i]) cls.push_back(j);
    for (auto j : cls) seen[j] = true;
    bool closed = true;
    for (auto a : cls)
      for (std::size_t b = 0; b < n; ++b)
        if (p[a][b] != 0 && !reach[b][a]) closed = false;
    if (!closed) continue;
    // pi restricted to the class: pi (P_C - I) = 0 with one equation swapped for sum = 1.
    const std::size_t s = cls.size();
    Matrix sys(s, std::vector<Rational>(s + 1));
    for (std::size_t r = 0; r < s; ++r)
      for (std::size_t c = 0; c < s; ++c) sys[r][c] = p[cls[c]][cls[r]] - (r == c ? 1 : 0);
    for (std::size_t c = 0; c <= s; ++c) sys[s - 1][c] = 1;
    rref(sys);
    std::vector<Rational> pi(n);
    for (std::size_t r = 0; r < s; ++r) pi[cls[r]] = sys[r][s];
    out.insert(pi);
  }
  return out;
}

Outcome criterion_7() {
  Rng rng(707);
  std::size_t enumerated = 0;
  for (int inst = 0; inst < 100; ++inst) {
    const auto mc = random_matrix_chain(rng, 6);
    const auto pts = mc.ground.points();
    const std::size_t n = pts.size();
    const std::string tag = "instance " + std::to_string(inst) + ": ";
    if (n > 6) return failed(tag + "more than 6 states");
    const MarkovOperator a(mc.kernel);

    std::uniform_int_distribution<long> w(0, 5);
    std::vector<Rational> v(n);
    Measure mu(mc.ground);
    long total = 0;
    std::vector<long> raw(n);
    for (auto& x : raw) total += (x = w(rng));
    if (total == 0) raw[0] = total = 1;
    for (std::size_t i = 0; i < n; ++i) mu.add_atom(pts[i], v[i] = ratio(raw[i], total));
    const Measure img = apply(a, mu);
    for (std::size_t j = 0; j < n; ++j) {
      Rational want = 0;
      for (std::size_t i = 0; i < n; ++i) want += v[i] * mc.matrix[i][j];
      if (img.atom(pts[j]) != want) return failed(tag + "apply differs from v P");
    }

    Matrix power = mc.matrix;
    Kernel kp = mc.kernel;
    for (unsigned k = 2; k <= 5; ++k) {
      power = product(power, mc.matrix);
      kp = convolve(kp, mc.kernel);
      for (std::size_t i = 0; i < n; ++i) {
        const Measure row = kp.row(pts[i]);
        for (std::size_t j = 0; j < n; ++j)
          if (row.atom(pts[j]) != power[i][j]) return failed(tag + "P^" + std::to_string(k) + " differs");
      }
    }

    std::vector<Generator> seeds;
    for (const auto& x : pts) seeds.push_back(Generator::atom(x));
    const auto rep = solve_invariant(orbit_closure(a, seeds));
    const Matrix oracle_space = left_fixed_space(mc.matrix);
    if (rep.nullspace_dim != oracle_space.size()) return failed(tag + "fixed-space dimension differs");
    Matrix lib_space;
    for (const auto& b : rep.nullspace_basis) {
      std::vector<Rational> row(n);
      for (std::size_t i = 0; i < n; ++i) row[i] = b.atom(pts[i]);
      lib_space.push_back(row);
    }
    Matrix both = lib_space;
    both.insert(both.end(), oracle_space.begin(), oracle_space.end());
    if (rank_of(lib_space) != oracle_space.size() || rank_of(both) != oracle_space.size())
      return failed(tag + "fixed spaces differ");
    if (!rep.enumerated) return failed(tag + "extreme invariants not enumerated");
    ++enumerated;
    std::set<std::vector<Rational>> got;
    for (const auto& s : rep.solutions) {
      std::vector<Rational> pi(n);
      for (std::size_t i = 0; i < n; ++i) pi[i] = s.atom(pts[i]);
      got.insert(pi);
    }
    if (got != extreme_stationaries(mc.matrix)) return failed(tag + "extreme invariants differ from closed-class stationaries");
  }
  return {true, "100 chains: apply, P^2..P^5 and invariant sets match the dense oracle"};
}

Outcome criterion_10() {
  const auto dir = default_corpus_dir();
  const auto a = run_corpus(dir, 2024);
  const auto b = run_corpus(dir, 2024);
  if (a.files.empty()) return failed("empty corpus at " + dir.string());
  const std::string ja = corpus_to_json(a, false).dump();
  const std::string jb = corpus_to_json(b, false).dump();
  if (ja != jb) return failed("corpus reports differ between runs");
  const auto sa = suite_report_to_json(run_property_suite("cor_3_3", 2024, 30, Execution::Serial), false).dump();
  const auto sb = suite_report_to_json(run_property_suite("cor_3_3", 2024, 30, Execution::Parallel), false).dump();
  if (sa != sb) return failed("serial and parallel suite reports differ");
  return {true, std::to_string(a.files.size()) + " corpus files, " + std::to_string(ja.size()) + " identical bytes"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"constant half-atom half-filter chain", criterion_1},
      {"half-stay half-filter chain", criterion_2},
      {"two-step singleton counterexample", criterion_3},
      {"pfa-row kernels map into pfa", [] { return suite_criterion("thm_3_5", 200, 1); }},
      {"component range inclusions", [] { return suite_criterion("cor_3_3", 100, 2); }},
      {"nondegenerate combined invariants", [] { return suite_criterion("thm_4_3_4_4", 50, 3); }},
      {"finite-chain oracle equivalence", criterion_7},
      {"decomposition round trips", [] { return suite_criterion("decomposition", 100, 4); }},
      {"uniform geometric ca decay under H2", [] { return suite_criterion("cor_5_2", 100, 5); }},
      {"determinism", criterion_10},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = failed(std::string("exception: ") + e.what());
    }
    if (!o.ok) ++failures;
    std::printf("%s criterion %zu (%s): %s\n", o.ok ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
