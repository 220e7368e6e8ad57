#include "famc/ground.hpp"

#include <algorithm>

#include "famc/error.hpp"

namespace famc {

std::string_view ground_kind_name(GroundKind kind) {
  switch (kind) {
    case GroundKind::UnitRationals: return "unit-interval-rationals";
    case GroundKind::Integers: return "integers";
    case GroundKind::FiniteLabeled: return "finite-labeled-set";
  }
  return "?";
}

GroundKind parse_ground_kind(std::string_view name) {
  if (name == "unit-interval-rationals") return GroundKind::UnitRationals;
  if (name == "integers") return GroundKind::Integers;
  if (name == "finite-labeled-set") return GroundKind::FiniteLabeled;
  throw ParseError("", "unknown ground kind '" + std::string(name) + "'");
}

GroundSpace GroundSpace::unit_interval(std::string label) {
  return GroundSpace(std::make_shared<const Data>(Data{GroundKind::UnitRationals, std::move(label), {}}));
}

GroundSpace GroundSpace::integers(std::string label) {
  return GroundSpace(std::make_shared<const Data>(Data{GroundKind::Integers, std::move(label), {}}));
}

GroundSpace GroundSpace::finite(std::string label, std::vector<Rational> points) {
  if (points.empty()) throw DomainError("finite ground '" + label + "' has no points");
  for (auto& p : points) p.canonicalize();
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  return GroundSpace(
      std::make_shared<const Data>(Data{GroundKind::FiniteLabeled, std::move(label), std::move(points)}));
}

bool GroundSpace::contains(const Rational& x) const {
  switch (data_->kind) {
    case GroundKind::UnitRationals: return x >= 0 && x <= 1;
    case GroundKind::Integers: return is_integer(x);
    case GroundKind::FiniteLabeled:
      return std::binary_search(data_->points.begin(), data_->points.end(), x);
  }
  return false;
}

std::string GroundSpace::describe() const {
  return std::string(ground_kind_name(kind())) + ":" + label();
}

bool operator==(const GroundSpace& a, const GroundSpace& b) {
  if (a.data_ == b.data_) return true;
  return a.data_->kind == b.data_->kind && a.data_->label == b.data_->label &&
         a.data_->points == b.data_->points;
}

void require_same_ground(const GroundSpace& a, const GroundSpace& b, std::string_view what) {
  if (!(a == b)) {
    throw GroundMismatch(std::string(what) + ": ground " + a.describe() + " vs " + b.describe());
  }
}

void require_point(const GroundSpace& g, const Rational& x, std::string_view what) {
  if (!g.contains(x)) {
    throw GroundMismatch(std::string(what) + ": " + format_rational(x) + " is not a point of " +
                         g.describe());
  }
}

}  // namespace famc
