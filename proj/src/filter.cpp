#include "famc/filter.hpp"

#include <algorithm>

#include "famc/error.hpp"

namespace famc {

std::string_view tail_family_name(TailFamily f) {
  switch (f) {
    case TailFamily::LeftOfPoint: return "left-of-point";
    case TailFamily::RightOfPoint: return "right-of-point";
    case TailFamily::GeqThreshold: return "geq-threshold";
    case TailFamily::LeqThreshold: return "leq-threshold";
  }
  return "?";
}

TailFamily parse_tail_family(std::string_view name) {
  if (name == "left-of-point") return TailFamily::LeftOfPoint;
  if (name == "right-of-point") return TailFamily::RightOfPoint;
  if (name == "geq-threshold") return TailFamily::GeqThreshold;
  if (name == "leq-threshold") return TailFamily::LeqThreshold;
  throw ParseError("", "unknown tail family '" + std::string(name) + "'");
}

std::string_view decision_name(Decision d) {
  switch (d) {
    case Decision::Zero: return "zero";
    case Decision::One: return "one";
    case Decision::Undecided: return "undecided";
  }
  return "?";
}

FilterFunctional FilterFunctional::make(std::string id, GroundSpace ground, TailFamily family, Rational point) {
  if (id.empty()) throw DomainError("filter functional needs an id");
  point.canonicalize();
  const bool point_family = family == TailFamily::LeftOfPoint || family == TailFamily::RightOfPoint;
  switch (ground.kind()) {
    case GroundKind::FiniteLabeled:
      throw DomainError("filter '" + id + "': tail family over a finite ground has finite tails");
    case GroundKind::UnitRationals:
      if (!point_family) throw DomainError("filter '" + id + "': threshold tails need an integer ground");
      if (family == TailFamily::LeftOfPoint && !(point >= 0 && point < 1)) {
        throw DomainError("filter '" + id + "': left-of-point needs 0 <= p < 1");
      }
      if (family == TailFamily::RightOfPoint && !(point > 0 && point <= 1)) {
        throw DomainError("filter '" + id + "': right-of-point needs 0 < p <= 1");
      }
      break;
    case GroundKind::Integers:
      if (point_family) throw DomainError("filter '" + id + "': point tails are finite on integer grounds");
      point = 0;
      break;
  }
  return FilterFunctional(std::move(id), std::move(ground), family, std::move(point));
}

SetExpr FilterFunctional::tail(std::uint64_t k) const {
  if (k == 0) throw DomainError("tail index starts at 1");
  const Rational step(1, static_cast<unsigned long>(k));
  const Rational kk(Integer(static_cast<unsigned long>(k)));
  switch (family_) {
    case TailFamily::LeftOfPoint: return SetExpr::open_interval(ground_, point_, point_ + step);
    case TailFamily::RightOfPoint: return SetExpr::open_interval(ground_, point_ - step, point_);
    case TailFamily::GeqThreshold: return SetExpr::interval(ground_, IntervalBounds{kk, std::nullopt, false, true});
    case TailFamily::LeqThreshold: return SetExpr::interval(ground_, IntervalBounds{std::nullopt, -kk, true, false});
  }
  return SetExpr::empty(ground_);
}

std::string FilterFunctional::describe() const {
  std::string s = id_ + "[" + std::string(tail_family_name(family_));
  if (family_ == TailFamily::LeftOfPoint || family_ == TailFamily::RightOfPoint) s += " " + format_rational(point_);
  return s + "]";
}

Decision filter_eval(const FilterFunctional& f, const SetExpr& e) {
  require_same_ground(f.ground(), e.ground(), "filter_eval");
  const SetExpr fam[] = {e};
  const Rational extra[] = {f.point()};
  RegionMap m(f.ground(), fam, extra);
  const auto regions = m.regions();

  // The germ of E along the filter is the set of cells every sufficiently
  // late tail lies in, up to finitely many points.
  std::size_t in = 0;
  std::size_t total = 0;
  for (std::size_t r = 0; r < regions.size(); ++r) {
    const Region& reg = regions[r];
    if (reg.kind != Region::Kind::Open) continue;
    bool germ = false;
    switch (f.family()) {
      case TailFamily::LeftOfPoint: germ = reg.lo && *reg.lo == f.point(); break;
      case TailFamily::RightOfPoint: germ = reg.hi && *reg.hi == f.point(); break;
      case TailFamily::GeqThreshold: germ = !reg.hi; break;
      case TailFamily::LeqThreshold: germ = !reg.lo; break;
    }
    if (!germ) continue;
    ++total;
    in += m.in(0, r) ? 1 : 0;
  }
  if (total == 0) throw Error("filter '" + f.id() + "' has no germ cell");
  if (in == total) return Decision::One;
  if (in == 0) return Decision::Zero;
  return Decision::Undecided;
}

}  // namespace famc
