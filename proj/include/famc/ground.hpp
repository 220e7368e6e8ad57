#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "famc/rational.hpp"

namespace famc {

enum class GroundKind { UnitRationals, Integers, FiniteLabeled };

std::string_view ground_kind_name(GroundKind kind);
GroundKind parse_ground_kind(std::string_view name);

// A discrete ground space. Every subset is measurable; what is representable
// is the decidable subalgebra built in set_expr.hpp. Points are exact
// rationals: [0,1] for UnitRationals, integers for Integers, and an explicit
// sorted list for FiniteLabeled. Cheap to copy.
class GroundSpace {
 public:
  static GroundSpace unit_interval(std::string label = "I");
  static GroundSpace integers(std::string label = "Z");
  static GroundSpace finite(std::string label, std::vector<Rational> points);

  GroundKind kind() const noexcept { return data_->kind; }
  const std::string& label() const noexcept { return data_->label; }
  std::span<const Rational> points() const noexcept { return data_->points; }
  bool is_finite() const noexcept { return data_->kind == GroundKind::FiniteLabeled; }

  bool contains(const Rational& x) const;
  std::string describe() const;

  friend bool operator==(const GroundSpace& a, const GroundSpace& b);

 private:
  struct Data {
    GroundKind kind;
    std::string label;
    std::vector<Rational> points;
  };
  explicit GroundSpace(std::shared_ptr<const Data> data) : data_(std::move(data)) {}
  std::shared_ptr<const Data> data_;
};

// Throws GroundMismatch naming `what` when the grounds differ.
void require_same_ground(const GroundSpace& a, const GroundSpace& b, std::string_view what);
// Throws GroundMismatch when x is not a point of g.
void require_point(const GroundSpace& g, const Rational& x, std::string_view what);

}  // namespace famc
