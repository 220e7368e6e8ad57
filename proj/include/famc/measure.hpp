#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "famc/filter.hpp"
#include "famc/ground.hpp"
#include "famc/rational.hpp"
#include "famc/set_expr.hpp"

namespace famc {

// A finitely additive measure on a discrete ground: a finite-support atomic
// (countably additive) part plus a rational combination of filter
// functionals (purely finitely additive part). Zero entries are never
// stored, so structural equality is equality of measures on the
// representable algebra. Signed coefficients are allowed; operations that
// live on the positive cone reject them.
class Measure {
 public:
  using AtomMap = std::map<Rational, Rational>;
  using PfaMap = std::map<FilterFunctional, Rational>;

  explicit Measure(GroundSpace g) : ground_(std::move(g)) {}

  static Measure dirac(GroundSpace g, const Rational& x, const Rational& weight = 1);
  static Measure of_filter(const FilterFunctional& f, const Rational& coef = 1);

  const GroundSpace& ground() const noexcept { return ground_; }
  const AtomMap& atoms() const noexcept { return atoms_; }
  const PfaMap& pfa() const noexcept { return pfa_; }

  // Accumulating builders; they are the only mutators.
  Measure& add_atom(const Rational& x, const Rational& weight);
  Measure& add_filter(const FilterFunctional& f, const Rational& coef);
  Measure& add(const Rational& scale, const Measure& other);

  Rational atom(const Rational& x) const;
  Rational coefficient(const FilterFunctional& f) const;
  Rational atomic_total() const;
  Rational pfa_total() const;
  Rational total() const { return atomic_total() + pfa_total(); }

  bool is_zero() const noexcept { return atoms_.empty() && pfa_.empty(); }
  bool is_nonnegative() const;

  Measure scaled(const Rational& factor) const;
  Measure atomic_part() const;
  Measure pfa_part() const;

  std::string describe() const;

  friend bool operator==(const Measure& a, const Measure& b) {
    return a.ground_ == b.ground_ && a.atoms_ == b.atoms_ && a.pfa_ == b.pfa_;
  }

 private:
  GroundSpace ground_;
  AtomMap atoms_;
  PfaMap pfa_;
};

// Σ_{x ∈ E} w_x + Σ_j c_j f_j(E); nullopt when some needed f_j(E) is undecided.
std::optional<Rational> eval(const Measure& mu, const SetExpr& e);

struct YosidaHewitt {
  Measure ca;
  Measure pfa;
};
YosidaHewitt yosida_hewitt(const Measure& mu);

// a·mu + b·nu.
Measure combine(const Rational& a, const Measure& mu, const Rational& b, const Measure& nu);

// Total mass ‖mu‖ = mu(X). Throws DomainError for signed measures.
Rational norm(const Measure& mu);

// True iff the atomic part is empty. Throws DomainError for signed measures.
bool is_pfa(const Measure& mu);

// The zero measure is both countably and purely finitely additive.
enum class MeasureType { BothTypes, Ca, Pfa, Mixed };
std::string_view measure_type_name(MeasureType t);
MeasureType classify(const Measure& mu);

enum class MeasureFamily { Ba, Ca, Pfa };
// V_*: nonnegative, of the family, total mass <= 1. S_*: total mass exactly 1.
bool in_V(const Measure& mu, MeasureFamily family);
bool in_S(const Measure& mu, MeasureFamily family);

}  // namespace famc
