#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "famc/ground.hpp"
#include "famc/rational.hpp"
#include "famc/set_expr.hpp"

namespace famc {

// Closed-form descriptors of monotone tail families T_1 ⊇ T_2 ⊇ ...
enum class TailFamily {
  LeftOfPoint,   // T_k = (p, p + 1/k): the point is the left end of every tail
  RightOfPoint,  // T_k = (p - 1/k, p)
  GeqThreshold,  // T_k = {n >= k}, integer grounds
  LeqThreshold,  // T_k = {n <= -k}, integer grounds
};

std::string_view tail_family_name(TailFamily f);
TailFamily parse_tail_family(std::string_view name);

enum class Decision { Zero, One, Undecided };
std::string_view decision_name(Decision d);

// A {0,1}-valued purely finitely additive functional, known only through
// its tail family: it is 1 on sets containing a tail up to finitely many
// points and 0 on sets meeting a tail in finitely many points. The
// identity of a functional is its id.
class FilterFunctional {
 public:
  // Rejects finite grounds and tail families whose tails would be empty or
  // that do not fit the ground kind.
  static FilterFunctional make(std::string id, GroundSpace ground, TailFamily family, Rational point = 0);

  const std::string& id() const noexcept { return id_; }
  const GroundSpace& ground() const noexcept { return ground_; }
  TailFamily family() const noexcept { return family_; }
  const Rational& point() const noexcept { return point_; }

  // T_k for k >= 1.
  SetExpr tail(std::uint64_t k) const;
  std::string describe() const;

  friend bool operator==(const FilterFunctional& a, const FilterFunctional& b) {
    return a.id_ == b.id_ && a.family_ == b.family_ && a.point_ == b.point_ && a.ground_ == b.ground_;
  }
  friend bool operator<(const FilterFunctional& a, const FilterFunctional& b) {
    if (a.id_ != b.id_) return a.id_ < b.id_;
    if (a.family_ != b.family_) return a.family_ < b.family_;
    return a.point_ < b.point_;
  }

 private:
  FilterFunctional(std::string id, GroundSpace ground, TailFamily family, Rational point)
      : id_(std::move(id)), ground_(std::move(ground)), family_(family), point_(std::move(point)) {}
  std::string id_;
  GroundSpace ground_;
  TailFamily family_;
  Rational point_;
};

// Decides f(E) on the representable algebra; Undecided when E neither
// contains nor essentially misses the tails (e.g. evens along n -> inf).
Decision filter_eval(const FilterFunctional& f, const SetExpr& e);

}  // namespace famc
