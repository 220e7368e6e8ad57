#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "famc/ground.hpp"
#include "famc/rational.hpp"

namespace famc {

struct IntervalBounds {
  std::optional<Rational> lo;  // nullopt: unbounded below
  std::optional<Rational> hi;  // nullopt: unbounded above
  bool lo_open = false;
  bool hi_open = false;
};

// A set in the decidable subalgebra of 2^X generated by intervals, finite
// point sets and (on integer grounds) residue classes. Immutable; copies
// share the expression tree.
class SetExpr {
 public:
  enum class Op { Empty, Full, Interval, Points, Residue, Union, Intersection, Complement };

  static SetExpr empty(GroundSpace g);
  static SetExpr full(GroundSpace g);
  static SetExpr interval(GroundSpace g, IntervalBounds bounds);
  static SetExpr open_interval(GroundSpace g, Rational lo, Rational hi);
  static SetExpr closed_interval(GroundSpace g, Rational lo, Rational hi);
  static SetExpr points(GroundSpace g, std::vector<Rational> pts);
  static SetExpr point(GroundSpace g, Rational x);
  // Integer grounds only; residue is reduced into [0, modulus).
  static SetExpr residue(GroundSpace g, std::int64_t modulus, std::int64_t residue);
  // n-ary nodes; all parts must share a ground and `parts` must be non-empty.
  static SetExpr unite(std::vector<SetExpr> parts);
  static SetExpr intersect(std::vector<SetExpr> parts);
  static SetExpr complement(const SetExpr& e);

  const GroundSpace& ground() const noexcept { return ground_; }
  Op op() const noexcept;
  const IntervalBounds& bounds() const;
  std::span<const Rational> point_list() const;
  std::int64_t modulus() const;
  std::int64_t residue_value() const;
  std::vector<SetExpr> args() const;

  // Membership by set semantics. Does not check that x belongs to the
  // ground; use member() for the checked form.
  bool contains(const Rational& x) const;

  // {x + offset : x in *this}. Non-zero offsets only on integer grounds.
  SetExpr translated(std::int64_t offset) const;

  std::string describe() const;

  struct Node;

 private:
  SetExpr(GroundSpace g, std::shared_ptr<const Node> n) : ground_(std::move(g)), node_(std::move(n)) {}
  GroundSpace ground_;
  std::shared_ptr<const Node> node_;
  friend class RegionMap;
};

// Checked membership: throws GroundMismatch when x is not a point of E's ground.
bool member(const Rational& x, const SetExpr& e);

enum class SetOp { Union, Intersection, Complement, Difference };
// Complement ignores `b` (it complements `a`).
SetExpr set_ops(const SetExpr& a, const SetExpr& b, SetOp op);
SetExpr set_union(const SetExpr& a, const SetExpr& b);
SetExpr set_intersection(const SetExpr& a, const SetExpr& b);
SetExpr set_difference(const SetExpr& a, const SetExpr& b);

// One cell of the common refinement of a family of sets. Inside a cell every
// set of the family is either everywhere present or everywhere absent.
struct Region {
  enum class Kind { Point, Open };
  Kind kind = Kind::Point;
  std::optional<Rational> lo;  // Open: exclusive endpoints (nullopt = unbounded); Point: lo = hi
  std::optional<Rational> hi;
  std::int64_t residue = 0;  // integer grounds: residue modulo RegionMap::modulus()
  Rational sample;           // a point of the region
  bool infinite = false;
};

// Common refinement of a family of SetExpr over one ground. Breakpoints are
// the interval endpoints and finite points of the family plus `extra`; on
// integer grounds open cells are further split by residue modulo the lcm of
// all residue moduli. Regions are listed in increasing order and are all
// non-empty.
class RegionMap {
 public:
  RegionMap(const GroundSpace& g, std::span<const SetExpr> family, std::span<const Rational> extra = {});

  std::span<const Region> regions() const noexcept { return regions_; }
  std::int64_t modulus() const noexcept { return modulus_; }
  bool in(std::size_t expr, std::size_t region) const { return membership_[expr][region] != 0; }

 private:
  GroundSpace ground_;
  std::int64_t modulus_ = 1;
  std::vector<Region> regions_;
  std::vector<std::vector<char>> membership_;
};

bool is_empty(const SetExpr& e);
bool is_finite(const SetExpr& e);
bool is_subset(const SetExpr& a, const SetExpr& b);
bool equivalent(const SetExpr& a, const SetExpr& b);
bool disjoint(const SetExpr& a, const SetExpr& b);

// Empty optional when `pieces` are pairwise disjoint and cover the ground;
// otherwise a description of the first overlap or gap with a witness point.
std::optional<std::string> partition_problem(const GroundSpace& g, std::span<const SetExpr> pieces);

// Canonical flat form: a union of maximal intervals, residue-restricted
// intervals and one point set. Extensionally equal to the input.
SetExpr normalize(const SetExpr& e);

// One member point per region of e's own refinement, at most `limit` points.
std::vector<Rational> sample_points(const SetExpr& e, std::size_t limit = 64);

}  // namespace famc
