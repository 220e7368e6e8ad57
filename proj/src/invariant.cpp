#include "famc/invariant.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <optional>

#include "famc/error.hpp"

namespace famc {

Measure Generator::as_measure(const GroundSpace& g) const {
  return is_atom() ? Measure::dirac(g, point()) : Measure::of_filter(filter());
}

std::string Generator::describe() const {
  return is_atom() ? "d(" + format_rational(point()) + ")" : filter().id();
}

bool operator<(const Generator& a, const Generator& b) {
  if (a.is_atom() != b.is_atom()) return a.is_atom();
  return a.is_atom() ? a.point() < b.point() : a.filter() < b.filter();
}

std::vector<Generator> generators_of(const Measure& mu) {
  std::vector<Generator> out;
  for (const auto& [x, w] : mu.atoms()) out.push_back(Generator::atom(x));
  for (const auto& [f, c] : mu.pfa()) out.push_back(Generator::filter(f));
  return out;
}

Measure OrbitClosure::to_measure(const std::vector<Rational>& coefficients) const {
  Measure out(ground);
  for (std::size_t i = 0; i < basis.size(); ++i) out.add(coefficients[i], basis[i].as_measure(ground));
  return out;
}

std::vector<Rational> OrbitClosure::coordinates(const Measure& mu) const {
  std::vector<Rational> out(basis.size());
  std::size_t found = 0;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const auto& g = basis[i];
    out[i] = g.is_atom() ? mu.atom(g.point()) : mu.coefficient(g.filter());
    if (out[i] != 0) ++found;
  }
  if (found != mu.atoms().size() + mu.pfa().size()) throw DomainError("measure leaves the closure span");
  return out;
}

OrbitClosure orbit_closure(const MarkovOperator& a, std::span<const Generator> seeds, std::size_t cap) {
  if (cap < 1) throw DomainError("closure cap must be >= 1");
  OrbitClosure closure{a.ground(), {}, {}, cap};
  std::map<Generator, std::size_t> index;
  std::vector<Measure> images;

  auto admit = [&](const Generator& g) {
    if (index.count(g)) return;
    if (closure.basis.size() == cap) throw ClosureDiverged(cap);
    index.emplace(g, closure.basis.size());
    closure.basis.push_back(g);
  };
  for (const auto& s : seeds) admit(s);
  for (std::size_t j = 0; j < closure.basis.size(); ++j) {
    Measure image = apply(a, closure.basis[j].as_measure(a.ground()));
    for (const auto& g : generators_of(image)) admit(g);
    images.push_back(std::move(image));
  }

  const std::size_t n = closure.basis.size();
  closure.action = RationalMatrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    const auto coords = closure.coordinates(images[j]);
    for (std::size_t i = 0; i < n; ++i) closure.action(i, j) = coords[i];
  }
  return closure;
}

namespace {

bool nonnegative(const std::vector<Rational>& v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& x) { return x >= 0; });
}

Rational sum_of(const std::vector<Rational>& v) {
  Rational s = 0;
  for (const auto& x : v) s += x;
  return s;
}

// Unique c with sum(K c) = 1 and (K c)_i = 0 for i in zeros, if any.
std::optional<std::vector<Rational>> solve_active(const std::vector<std::vector<Rational>>& k,
                                                 const std::vector<std::size_t>& zeros) {
  const std::size_t d = k.size();
  RationalMatrix sys(d, d + 1);
  for (std::size_t j = 0; j < d; ++j) {
    sys(0, j) = sum_of(k[j]);
    for (std::size_t r = 0; r + 1 < d; ++r) sys(r + 1, j) = k[j][zeros[r]];
  }
  sys(0, d) = -1;
  const auto ns = nullspace(sys);
  if (ns.size() != 1 || ns[0][d] == 0) return std::nullopt;
  std::vector<Rational> v(k[0].size());
  for (std::size_t j = 0; j < d; ++j) {
    const Rational c = ns[0][j] / ns[0][d];
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += c * k[j][i];
  }
  return v;
}

double choose(std::size_t n, std::size_t r) {
  double out = 1;
  for (std::size_t i = 0; i < r; ++i) out = out * static_cast<double>(n - i) / static_cast<double>(i + 1);
  return out;
}

// Probability vertices of span(k): each is fixed by d-1 vanishing coordinates.
std::optional<std::vector<std::vector<Rational>>> simplex_vertices(const std::vector<std::vector<Rational>>& k) {
  const std::size_t n = k[0].size();
  const std::size_t r = k.size() - 1;
  if (r > n || choose(n, r) > static_cast<double>(kVertexBudget)) return std::nullopt;
  std::vector<std::vector<Rational>> out;
  std::vector<std::size_t> zeros(r);
  for (std::size_t i = 0; i < r; ++i) zeros[i] = i;
  while (true) {
    if (auto v = solve_active(k, zeros); v && nonnegative(*v) && std::find(out.begin(), out.end(), *v) == out.end()) {
      out.push_back(std::move(*v));
    }
    std::size_t i = r;
    while (i > 0 && zeros[i - 1] == n - r + i - 1) --i;
    if (i == 0) break;
    ++zeros[i - 1];
    for (std::size_t j = i; j < r; ++j) zeros[j] = zeros[j - 1] + 1;
  }
  return out;
}

std::size_t leading_index(const std::vector<Rational>& v) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] != 0) return i;
  }
  return v.size();
}

}  // namespace

InvariantReport solve_invariant(const OrbitClosure& closure) {
  const std::size_t n = closure.basis.size();
  InvariantReport report;
  report.basis = closure.basis;
  const auto kernel = nullspace(closure.action - RationalMatrix::identity(n));
  report.nullspace_dim = kernel.size();
  for (const auto& v : kernel) report.nullspace_basis.push_back(closure.to_measure(v));

  std::vector<std::vector<Rational>> vertices;
  if (kernel.empty()) throw NoRepresentableSolution("A - I is injective on the closure span");
  if (auto v = simplex_vertices(kernel)) {
    vertices = std::move(*v);
  } else {
    report.enumerated = false;
  }
  if (report.enumerated && vertices.empty()) {
    throw NoRepresentableSolution("invariant span of dimension " + std::to_string(kernel.size()) +
                                  " meets no probability in the representable cone");
  }

  std::sort(vertices.begin(), vertices.end(), [](const auto& a, const auto& b) {
    const auto ia = leading_index(a);
    const auto ib = leading_index(b);
    if (ia != ib) return ia < ib;
    return b < a;
  });
  for (const auto& v : vertices) {
    report.solutions.push_back(closure.to_measure(v));
    report.classification.push_back(classify(report.solutions.back()));
  }
  report.delta_ba_nonempty = !report.solutions.empty();
  report.delta_ca_empty = std::none_of(report.classification.begin(), report.classification.end(),
                                       [](MeasureType t) { return t == MeasureType::Ca; });
  report.delta_pfa_nonempty = std::any_of(report.classification.begin(), report.classification.end(),
                                          [](MeasureType t) { return t == MeasureType::Pfa; });
  return report;
}

std::string_view verdict_status_name(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::Holds: return "holds";
    case VerdictStatus::Violated: return "violated";
    case VerdictStatus::NotApplicable: return "not-applicable";
    case VerdictStatus::Inconclusive: return "inconclusive";
  }
  return "?";
}

namespace {

Verdict not_applicable(std::string name, std::string why) {
  return Verdict{std::move(name), VerdictStatus::NotApplicable, std::move(why), std::nullopt};
}

// First generator whose coefficient differs between two measures.
std::string first_difference(const Measure& a, const Measure& b) {
  for (const auto& [x, w] : a.atoms()) {
    if (b.atom(x) != w) return "d(" + format_rational(x) + "): " + format_rational(w) + " vs " + format_rational(b.atom(x));
  }
  for (const auto& [x, w] : b.atoms()) {
    if (a.atom(x) != w) return "d(" + format_rational(x) + "): " + format_rational(a.atom(x)) + " vs " + format_rational(w);
  }
  for (const auto& [f, c] : a.pfa()) {
    if (b.coefficient(f) != c) return f.id() + ": " + format_rational(c) + " vs " + format_rational(b.coefficient(f));
  }
  for (const auto& [f, c] : b.pfa()) {
    if (a.coefficient(f) != c) return f.id() + ": " + format_rational(a.coefficient(f)) + " vs " + format_rational(c);
  }
  return "";
}

}  // namespace

std::vector<Verdict> classify_invariants(const InvariantReport& report, const MarkovOperator& a) {
  std::vector<Verdict> out;

  Verdict fixed{"fixed-point", VerdictStatus::Holds, "every solution satisfies A mu = mu", std::nullopt};
  for (const auto& mu : report.solutions) {
    const Measure image = apply(a, mu);
    if (!(image == mu)) {
      fixed = {"fixed-point", VerdictStatus::Violated, "A mu differs at " + first_difference(image, mu), mu};
      break;
    }
  }
  out.push_back(fixed);

  const auto inconclusive = [&](std::string name) {
    return Verdict{std::move(name), VerdictStatus::Inconclusive,
                   "nullspace dimension " + std::to_string(report.nullspace_dim) + " not enumerated", std::nullopt};
  };

  if (!a.pfa_rows_only()) {
    out.push_back(not_applicable("pfa-kernel-invariants-are-pfa", "kernel has countably additive rows"));
  } else if (!report.enumerated) {
    out.push_back(inconclusive("pfa-kernel-invariants-are-pfa"));
  } else {
    Verdict v{"pfa-kernel-invariants-are-pfa", VerdictStatus::Holds, "every invariant is purely finitely additive",
              std::nullopt};
    for (const auto& mu : report.solutions) {
      if (!is_pfa(mu)) {
        v = {v.name, VerdictStatus::Violated, "invariant with an atomic part", mu};
        break;
      }
    }
    out.push_back(v);
  }

  if (!a.nondegenerate_combined()) {
    out.push_back(not_applicable("no-ca-invariant", "chain is not a non-degenerate combined chain"));
    out.push_back(not_applicable("components-not-invariant", "chain is not a non-degenerate combined chain"));
    return out;
  }
  if (!report.enumerated) {
    out.push_back(inconclusive("no-ca-invariant"));
    out.push_back(inconclusive("components-not-invariant"));
    return out;
  }

  Verdict no_ca{"no-ca-invariant", VerdictStatus::Holds, "every invariant has a non-zero pfa part", std::nullopt};
  for (const auto& mu : report.solutions) {
    if (mu.pfa().empty()) {
      no_ca = {no_ca.name, VerdictStatus::Violated, "purely atomic invariant", mu};
      break;
    }
  }
  out.push_back(no_ca);

  Verdict parts{"components-not-invariant", VerdictStatus::Holds, "", std::nullopt};
  std::size_t mixed = 0;
  for (const auto& mu : report.solutions) {
    if (classify(mu) != MeasureType::Mixed) continue;
    ++mixed;
    const auto split = yosida_hewitt(mu);
    const Measure image_ca = apply(a, split.ca);
    const Measure image_pfa = apply(a, split.pfa);
    if (image_ca == split.ca || image_pfa == split.pfa) {
      parts = {parts.name, VerdictStatus::Violated, "a component of a mixed invariant is itself invariant", mu};
      break;
    }
    if (!parts.detail.empty()) parts.detail += "; ";
    parts.detail += "A mu_ca vs mu_ca at " + first_difference(image_ca, split.ca) + ", A mu_pfa vs mu_pfa at " +
                    first_difference(image_pfa, split.pfa);
  }
  if (parts.status == VerdictStatus::Holds && mixed == 0) parts.detail = "no mixed invariant";
  out.push_back(parts);
  return out;
}

std::vector<Verdict> h_condition_corollaries(const MarkovOperator& a, const InvariantReport& report) {
  std::vector<Verdict> out;
  if (!a.nondegenerate_combined()) {
    out.push_back(not_applicable("h1-invariant-component-masses", "needs a non-degenerate combined chain"));
    out.push_back(not_applicable("h2-invariants-are-pfa", "needs a non-degenerate combined chain"));
    return out;
  }
  const Rational q1 = a.combined()->q1();
  const Rational q2 = a.combined()->q2();
  const auto h1 = check_H1(a);
  const auto h2 = check_H2(a);

  if (h1.status != HVerdict::Status::HoldsOnBasis) {
    out.push_back(not_applicable("h1-invariant-component-masses", "H1 " + std::string(h_status_name(h1.status))));
  } else if (!report.enumerated) {
    out.push_back({"h1-invariant-component-masses", VerdictStatus::Inconclusive, "solutions not enumerated", std::nullopt});
  } else {
    Verdict v{"h1-invariant-component-masses", VerdictStatus::Holds,
              "every invariant has ca mass " + format_rational(q1) + " and pfa mass " + format_rational(q2), std::nullopt};
    for (const auto& mu : report.solutions) {
      if (norm(mu.atomic_part()) != q1 || norm(mu.pfa_part()) != q2) {
        v = {v.name, VerdictStatus::Violated, "component masses differ from (q1, q2)", mu};
        break;
      }
    }
    out.push_back(v);
  }

  if (h2.status != HVerdict::Status::HoldsOnBasis) {
    out.push_back(not_applicable("h2-invariants-are-pfa", "H2 " + std::string(h_status_name(h2.status))));
  } else if (!report.enumerated) {
    out.push_back({"h2-invariants-are-pfa", VerdictStatus::Inconclusive, "solutions not enumerated", std::nullopt});
  } else {
    Verdict v{"h2-invariants-are-pfa", VerdictStatus::Holds, "every invariant is purely finitely additive", std::nullopt};
    if (!report.delta_ba_nonempty) v = {v.name, VerdictStatus::Violated, "no invariant probability found", std::nullopt};
    for (const auto& mu : report.solutions) {
      if (!is_pfa(mu)) {
        v = {v.name, VerdictStatus::Violated, "invariant with an atomic part", mu};
        break;
      }
    }
    out.push_back(v);
  }
  return out;
}

}  // namespace famc
