#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "famc/linalg.hpp"
#include "famc/measure.hpp"
#include "famc/operator.hpp"

namespace famc {

// A generator of the representable cone: an atom δ_x or a filter functional.
class Generator {
 public:
  static Generator atom(Rational x) { return Generator(std::move(x)); }
  static Generator filter(FilterFunctional f) { return Generator(std::move(f)); }

  bool is_atom() const noexcept { return std::holds_alternative<Rational>(v_); }
  const Rational& point() const { return std::get<Rational>(v_); }
  const FilterFunctional& filter() const { return std::get<FilterFunctional>(v_); }

  Measure as_measure(const GroundSpace& g) const;
  std::string describe() const;

  // Atoms before filters; atoms by point, filters by id.
  friend bool operator<(const Generator& a, const Generator& b);
  friend bool operator==(const Generator& a, const Generator& b) { return a.v_ == b.v_; }

 private:
  explicit Generator(std::variant<Rational, FilterFunctional> v) : v_(std::move(v)) {}
  std::variant<Rational, FilterFunctional> v_;
};

// Support of a measure as generators, atoms first.
std::vector<Generator> generators_of(const Measure& mu);

inline constexpr std::size_t kDefaultClosureCap = 64;
// Most vertex candidates (choices of d-1 vanishing coordinates) tried.
inline constexpr std::size_t kVertexBudget = 200000;

// Smallest A-invariant generator set containing the seeds, in discovery
// order, with action(i, j) = coefficient of basis[i] in A(basis[j]).
struct OrbitClosure {
  GroundSpace ground;
  std::vector<Generator> basis;
  RationalMatrix action;
  std::size_t cap = kDefaultClosureCap;

  Measure to_measure(const std::vector<Rational>& coefficients) const;
  std::vector<Rational> coordinates(const Measure& mu) const;
};

// Throws ClosureDiverged when more than `cap` generators are reached and
// UndecidedLimit when some image is not representable.
OrbitClosure orbit_closure(const MarkovOperator& a, std::span<const Generator> seeds,
                           std::size_t cap = kDefaultClosureCap);

struct InvariantReport {
  std::vector<Generator> basis;
  std::size_t nullspace_dim = 0;
  // False when the nullspace is too large to enumerate extreme solutions.
  bool enumerated = true;
  std::vector<Measure> solutions;  // extreme invariant probabilities
  std::vector<MeasureType> classification;
  std::vector<Measure> nullspace_basis;  // signed, one per free generator
  bool delta_ba_nonempty = false;
  bool delta_ca_empty = true;
  bool delta_pfa_nonempty = false;
};

// Exact nullspace of M - I intersected with the probability simplex. The
// solutions are the vertices of that set; when the candidate count exceeds
// kVertexBudget only the basis and dimension are reported. Throws
// NoRepresentableSolution when no probability lies in the span.
InvariantReport solve_invariant(const OrbitClosure& closure);

enum class VerdictStatus { Holds, Violated, NotApplicable, Inconclusive };
std::string_view verdict_status_name(VerdictStatus s);

struct Verdict {
  std::string name;
  VerdictStatus status = VerdictStatus::NotApplicable;
  std::string detail;
  std::optional<Measure> witness;
};

// fixed-point, pfa-kernel-invariants-are-pfa, no-ca-invariant,
// components-not-invariant.
std::vector<Verdict> classify_invariants(const InvariantReport& report, const MarkovOperator& a);

// h1-invariant-component-masses and h2-invariants-are-pfa; both need a
// non-degenerate combined chain.
std::vector<Verdict> h_condition_corollaries(const MarkovOperator& a, const InvariantReport& report);

}  // namespace famc
