#include "famc/set_expr.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "famc/error.hpp"

namespace famc {

struct SetExpr::Node {
  Op op = Op::Empty;
  IntervalBounds bounds;
  std::vector<Rational> pts;  // sorted, unique
  std::int64_t modulus = 1;
  std::int64_t residue = 0;
  std::vector<std::shared_ptr<const Node>> args;
};

namespace {

using NodePtr = std::shared_ptr<const SetExpr::Node>;

std::int64_t mod_of(const Integer& a, std::int64_t m) {
  return static_cast<std::int64_t>(mpz_fdiv_ui(a.get_mpz_t(), static_cast<unsigned long>(m)));
}

bool node_contains(const SetExpr::Node& n, const Rational& x) {
  switch (n.op) {
    case SetExpr::Op::Empty: return false;
    case SetExpr::Op::Full: return true;
    case SetExpr::Op::Interval: {
      const auto& b = n.bounds;
      if (b.lo && (b.lo_open ? !(x > *b.lo) : !(x >= *b.lo))) return false;
      if (b.hi && (b.hi_open ? !(x < *b.hi) : !(x <= *b.hi))) return false;
      return true;
    }
    case SetExpr::Op::Points: return std::binary_search(n.pts.begin(), n.pts.end(), x);
    case SetExpr::Op::Residue:
      return is_integer(x) && mod_of(x.get_num(), n.modulus) == n.residue;
    case SetExpr::Op::Union:
      return std::any_of(n.args.begin(), n.args.end(), [&](const NodePtr& a) { return node_contains(*a, x); });
    case SetExpr::Op::Intersection:
      return std::all_of(n.args.begin(), n.args.end(), [&](const NodePtr& a) { return node_contains(*a, x); });
    case SetExpr::Op::Complement: return !node_contains(*n.args.front(), x);
  }
  return false;
}

NodePtr node_translated(const NodePtr& n, const Rational& offset) {
  auto out = std::make_shared<SetExpr::Node>(*n);
  switch (n->op) {
    case SetExpr::Op::Interval:
      if (out->bounds.lo) *out->bounds.lo += offset;
      if (out->bounds.hi) *out->bounds.hi += offset;
      break;
    case SetExpr::Op::Points:
      for (auto& p : out->pts) p += offset;
      break;
    case SetExpr::Op::Residue:
      out->residue = mod_of(Integer(out->residue) + offset.get_num(), out->modulus);
      break;
    case SetExpr::Op::Union:
    case SetExpr::Op::Intersection:
    case SetExpr::Op::Complement:
      for (auto& a : out->args) a = node_translated(a, offset);
      break;
    default: break;
  }
  return out;
}

std::string describe_bounds(const IntervalBounds& b) {
  std::string s = b.lo_open || !b.lo ? "(" : "[";
  s += b.lo ? format_rational(*b.lo) : "-inf";
  s += ",";
  s += b.hi ? format_rational(*b.hi) : "inf";
  s += b.hi_open || !b.hi ? ")" : "]";
  return s;
}

std::string node_describe(const SetExpr::Node& n) {
  switch (n.op) {
    case SetExpr::Op::Empty: return "empty";
    case SetExpr::Op::Full: return "full";
    case SetExpr::Op::Interval: return describe_bounds(n.bounds);
    case SetExpr::Op::Points: {
      std::string s = "{";
      for (std::size_t i = 0; i < n.pts.size(); ++i) {
        if (i) s += ",";
        s += format_rational(n.pts[i]);
      }
      return s + "}";
    }
    case SetExpr::Op::Residue:
      return std::to_string(n.modulus) + "Z+" + std::to_string(n.residue);
    case SetExpr::Op::Union:
    case SetExpr::Op::Intersection: {
      std::string s = n.op == SetExpr::Op::Union ? "union(" : "inter(";
      for (std::size_t i = 0; i < n.args.size(); ++i) {
        if (i) s += ",";
        s += node_describe(*n.args[i]);
      }
      return s + ")";
    }
    case SetExpr::Op::Complement: return "not(" + node_describe(*n.args.front()) + ")";
  }
  return "?";
}

void collect_breakpoints(const SetExpr::Node& n, GroundKind kind, std::vector<Rational>& out,
                         std::int64_t& modulus) {
  switch (n.op) {
    case SetExpr::Op::Interval:
      if (kind == GroundKind::Integers) {
        if (n.bounds.lo) {
          Integer lo = n.bounds.lo_open ? Integer(floor_of(*n.bounds.lo) + 1) : ceil_of(*n.bounds.lo);
          out.emplace_back(lo);
        }
        if (n.bounds.hi) {
          Integer hi = n.bounds.hi_open ? Integer(ceil_of(*n.bounds.hi) - 1) : floor_of(*n.bounds.hi);
          out.emplace_back(hi);
        }
      } else {
        if (n.bounds.lo) out.push_back(*n.bounds.lo);
        if (n.bounds.hi) out.push_back(*n.bounds.hi);
      }
      break;
    case SetExpr::Op::Points:
      out.insert(out.end(), n.pts.begin(), n.pts.end());
      break;
    case SetExpr::Op::Residue:
      modulus = std::lcm(modulus, n.modulus);
      if (modulus > (1 << 20)) throw DomainError("residue moduli lcm too large to refine");
      break;
    default:
      for (const auto& a : n.args) collect_breakpoints(*a, kind, out, modulus);
      break;
  }
}

void require_non_empty(const std::vector<SetExpr>& parts, const char* what) {
  if (parts.empty()) throw DomainError(std::string(what) + " of zero sets");
  for (const auto& p : parts) require_same_ground(parts.front().ground(), p.ground(), what);
}

}  // namespace

SetExpr SetExpr::empty(GroundSpace g) {
  return SetExpr(std::move(g), std::make_shared<const Node>(Node{Op::Empty, {}, {}, 1, 0, {}}));
}

SetExpr SetExpr::full(GroundSpace g) {
  return SetExpr(std::move(g), std::make_shared<const Node>(Node{Op::Full, {}, {}, 1, 0, {}}));
}

SetExpr SetExpr::interval(GroundSpace g, IntervalBounds bounds) {
  if (bounds.lo) bounds.lo->canonicalize();
  if (bounds.hi) bounds.hi->canonicalize();
  if (!bounds.lo) bounds.lo_open = true;
  if (!bounds.hi) bounds.hi_open = true;
  return SetExpr(std::move(g), std::make_shared<const Node>(Node{Op::Interval, std::move(bounds), {}, 1, 0, {}}));
}

SetExpr SetExpr::open_interval(GroundSpace g, Rational lo, Rational hi) {
  return interval(std::move(g), IntervalBounds{std::move(lo), std::move(hi), true, true});
}

SetExpr SetExpr::closed_interval(GroundSpace g, Rational lo, Rational hi) {
  return interval(std::move(g), IntervalBounds{std::move(lo), std::move(hi), false, false});
}

SetExpr SetExpr::points(GroundSpace g, std::vector<Rational> pts) {
  for (auto& p : pts) p.canonicalize();
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return SetExpr(std::move(g), std::make_shared<const Node>(Node{Op::Points, {}, std::move(pts), 1, 0, {}}));
}

SetExpr SetExpr::point(GroundSpace g, Rational x) { return points(std::move(g), {std::move(x)}); }

SetExpr SetExpr::residue(GroundSpace g, std::int64_t modulus, std::int64_t residue) {
  if (g.kind() != GroundKind::Integers) {
    throw GroundMismatch("residue classes need an integer ground, got " + g.describe());
  }
  if (modulus < 1) throw DomainError("residue modulus must be >= 1");
  const std::int64_t r = ((residue % modulus) + modulus) % modulus;
  return SetExpr(std::move(g), std::make_shared<const Node>(Node{Op::Residue, {}, {}, modulus, r, {}}));
}

SetExpr SetExpr::unite(std::vector<SetExpr> parts) {
  require_non_empty(parts, "union");
  if (parts.size() == 1) return parts.front();
  Node n{Op::Union, {}, {}, 1, 0, {}};
  for (auto& p : parts) n.args.push_back(p.node_);
  return SetExpr(parts.front().ground_, std::make_shared<const Node>(std::move(n)));
}

SetExpr SetExpr::intersect(std::vector<SetExpr> parts) {
  require_non_empty(parts, "intersection");
  if (parts.size() == 1) return parts.front();
  Node n{Op::Intersection, {}, {}, 1, 0, {}};
  for (auto& p : parts) n.args.push_back(p.node_);
  return SetExpr(parts.front().ground_, std::make_shared<const Node>(std::move(n)));
}

SetExpr SetExpr::complement(const SetExpr& e) {
  Node n{Op::Complement, {}, {}, 1, 0, {e.node_}};
  return SetExpr(e.ground_, std::make_shared<const Node>(std::move(n)));
}

SetExpr::Op SetExpr::op() const noexcept { return node_->op; }

const IntervalBounds& SetExpr::bounds() const {
  if (node_->op != Op::Interval) throw DomainError("bounds() on a non-interval set");
  return node_->bounds;
}

std::span<const Rational> SetExpr::point_list() const { return node_->pts; }
std::int64_t SetExpr::modulus() const { return node_->modulus; }
std::int64_t SetExpr::residue_value() const { return node_->residue; }

std::vector<SetExpr> SetExpr::args() const {
  std::vector<SetExpr> out;
  for (const auto& a : node_->args) out.push_back(SetExpr(ground_, a));
  return out;
}

bool SetExpr::contains(const Rational& x) const { return node_contains(*node_, x); }

SetExpr SetExpr::translated(std::int64_t offset) const {
  if (offset == 0) return *this;
  if (ground_.kind() != GroundKind::Integers) {
    throw DomainError("translation by a non-zero offset needs an integer ground");
  }
  return SetExpr(ground_, node_translated(node_, Rational(Integer(static_cast<long>(offset)))));
}

std::string SetExpr::describe() const { return node_describe(*node_); }

bool member(const Rational& x, const SetExpr& e) {
  require_point(e.ground(), x, "member");
  return e.contains(x);
}

SetExpr set_ops(const SetExpr& a, const SetExpr& b, SetOp op) {
  switch (op) {
    case SetOp::Union: return SetExpr::unite({a, b});
    case SetOp::Intersection: return SetExpr::intersect({a, b});
    case SetOp::Complement: return SetExpr::complement(a);
    case SetOp::Difference: return SetExpr::intersect({a, SetExpr::complement(b)});
  }
  return a;
}

SetExpr set_union(const SetExpr& a, const SetExpr& b) { return set_ops(a, b, SetOp::Union); }
SetExpr set_intersection(const SetExpr& a, const SetExpr& b) { return set_ops(a, b, SetOp::Intersection); }
SetExpr set_difference(const SetExpr& a, const SetExpr& b) { return set_ops(a, b, SetOp::Difference); }

RegionMap::RegionMap(const GroundSpace& g, std::span<const SetExpr> family, std::span<const Rational> extra)
    : ground_(g) {
  for (const auto& e : family) require_same_ground(g, e.ground(), "region map");

  std::vector<Rational> bps;
  for (const auto& e : family) collect_breakpoints(*e.node_, g.kind(), bps, modulus_);

  switch (g.kind()) {
    case GroundKind::FiniteLabeled:
      for (const auto& p : g.points()) regions_.push_back(Region{Region::Kind::Point, p, p, 0, p, false});
      break;

    case GroundKind::UnitRationals: {
      bps.insert(bps.end(), extra.begin(), extra.end());
      bps.emplace_back(0);
      bps.emplace_back(1);
      std::erase_if(bps, [](const Rational& x) { return x < 0 || x > 1; });
      std::sort(bps.begin(), bps.end());
      bps.erase(std::unique(bps.begin(), bps.end()), bps.end());
      for (std::size_t i = 0; i < bps.size(); ++i) {
        regions_.push_back(Region{Region::Kind::Point, bps[i], bps[i], 0, bps[i], false});
        if (i + 1 < bps.size()) {
          Rational mid = (bps[i] + bps[i + 1]) / 2;
          regions_.push_back(Region{Region::Kind::Open, bps[i], bps[i + 1], 0, mid, true});
        }
      }
      break;
    }

    case GroundKind::Integers: {
      for (const auto& x : extra) bps.emplace_back(floor_of(x));
      std::erase_if(bps, [](const Rational& x) { return !is_integer(x); });
      std::sort(bps.begin(), bps.end());
      bps.erase(std::unique(bps.begin(), bps.end()), bps.end());
      const std::int64_t L = modulus_;
      auto first_above = [L](const Integer& b, std::int64_t r) {
        Integer start = b + 1;
        return Integer(start + mod_of(Integer(r) - start, L));
      };
      if (bps.empty()) {
        for (std::int64_t r = 0; r < L; ++r) {
          regions_.push_back(Region{Region::Kind::Open, std::nullopt, std::nullopt, r, Rational(Integer(static_cast<long>(r))), true});
        }
        break;
      }
      {
        const Integer b0 = bps.front().get_num();
        for (std::int64_t r = 0; r < L; ++r) {
          Integer below = b0 - 1 - mod_of(b0 - 1 - r, L);
          regions_.push_back(Region{Region::Kind::Open, std::nullopt, bps.front(), r, Rational(below), true});
        }
      }
      for (std::size_t i = 0; i < bps.size(); ++i) {
        const Integer b = bps[i].get_num();
        regions_.push_back(Region{Region::Kind::Point, bps[i], bps[i], mod_of(b, L), bps[i], false});
        const bool last = i + 1 == bps.size();
        for (std::int64_t r = 0; r < L; ++r) {
          Integer n0 = first_above(b, r);
          if (!last && !(Rational(n0) < bps[i + 1])) continue;
          regions_.push_back(Region{Region::Kind::Open, bps[i],
                                    last ? std::optional<Rational>{} : std::optional<Rational>{bps[i + 1]}, r,
                                    Rational(n0), last});
        }
      }
      break;
    }
  }

  membership_.resize(family.size());
  for (std::size_t e = 0; e < family.size(); ++e) {
    membership_[e].reserve(regions_.size());
    for (const auto& r : regions_) membership_[e].push_back(family[e].contains(r.sample) ? 1 : 0);
  }
}

bool is_empty(const SetExpr& e) {
  const SetExpr fam[] = {e};
  RegionMap m(e.ground(), fam);
  for (std::size_t r = 0; r < m.regions().size(); ++r) {
    if (m.in(0, r)) return false;
  }
  return true;
}

bool is_finite(const SetExpr& e) {
  if (e.ground().is_finite()) return true;
  const SetExpr fam[] = {e};
  RegionMap m(e.ground(), fam);
  for (std::size_t r = 0; r < m.regions().size(); ++r) {
    if (m.in(0, r) && m.regions()[r].infinite) return false;
  }
  return true;
}

bool is_subset(const SetExpr& a, const SetExpr& b) {
  const SetExpr fam[] = {a, b};
  RegionMap m(a.ground(), fam);
  for (std::size_t r = 0; r < m.regions().size(); ++r) {
    if (m.in(0, r) && !m.in(1, r)) return false;
  }
  return true;
}

bool equivalent(const SetExpr& a, const SetExpr& b) { return is_subset(a, b) && is_subset(b, a); }

bool disjoint(const SetExpr& a, const SetExpr& b) {
  const SetExpr fam[] = {a, b};
  RegionMap m(a.ground(), fam);
  for (std::size_t r = 0; r < m.regions().size(); ++r) {
    if (m.in(0, r) && m.in(1, r)) return false;
  }
  return true;
}

std::optional<std::string> partition_problem(const GroundSpace& g, std::span<const SetExpr> pieces) {
  RegionMap m(g, pieces);
  for (std::size_t r = 0; r < m.regions().size(); ++r) {
    std::vector<std::size_t> owners;
    for (std::size_t p = 0; p < pieces.size(); ++p) {
      if (m.in(p, r)) owners.push_back(p);
    }
    const std::string at = format_rational(m.regions()[r].sample);
    if (owners.empty()) return "no piece covers " + at;
    if (owners.size() > 1) {
      return "pieces " + std::to_string(owners[0]) + " and " + std::to_string(owners[1]) + " overlap at " + at;
    }
  }
  return std::nullopt;
}

SetExpr normalize(const SetExpr& e) {
  const GroundSpace& g = e.ground();
  const SetExpr fam[] = {e};
  RegionMap m(g, fam);
  const auto regions = m.regions();
  std::size_t members = 0;
  for (std::size_t r = 0; r < regions.size(); ++r) members += m.in(0, r) ? 1 : 0;
  if (members == 0) return SetExpr::empty(g);
  if (members == regions.size()) return SetExpr::full(g);

  std::vector<SetExpr> parts;
  std::vector<Rational> singles;

  if (g.kind() == GroundKind::FiniteLabeled) {
    for (std::size_t r = 0; r < regions.size(); ++r) {
      if (m.in(0, r)) singles.push_back(regions[r].sample);
    }
  } else if (m.modulus() == 1) {
    // Consecutive regions are adjacent in the ground, so maximal runs of
    // member regions are intervals.
    std::size_t r = 0;
    while (r < regions.size()) {
      if (!m.in(0, r)) {
        ++r;
        continue;
      }
      std::size_t end = r;
      while (end + 1 < regions.size() && m.in(0, end + 1)) ++end;
      const Region& first = regions[r];
      const Region& last = regions[end];
      if (r == end && first.kind == Region::Kind::Point) {
        singles.push_back(first.sample);
      } else {
        IntervalBounds b;
        b.lo = first.lo;
        b.lo_open = first.kind == Region::Kind::Open;
        b.hi = last.hi;
        b.hi_open = last.kind == Region::Kind::Open;
        parts.push_back(SetExpr::interval(g, b));
      }
      r = end + 1;
    }
  } else {
    // Residue-split open cells: group by cell and emit whole cells as plain
    // intervals, partial cells as interval-and-residue intersections.
    std::map<std::pair<std::size_t, std::size_t>, std::vector<std::size_t>> cells;
    std::vector<std::pair<std::size_t, std::size_t>> order;
    std::size_t r = 0;
    while (r < regions.size()) {
      if (regions[r].kind == Region::Kind::Point) {
        if (m.in(0, r)) singles.push_back(regions[r].sample);
        ++r;
        continue;
      }
      std::size_t end = r;
      while (end + 1 < regions.size() && regions[end + 1].kind == Region::Kind::Open &&
             regions[end + 1].lo == regions[r].lo && regions[end + 1].hi == regions[r].hi) {
        ++end;
      }
      std::vector<std::size_t> in_cell;
      for (std::size_t k = r; k <= end; ++k) {
        if (m.in(0, k)) in_cell.push_back(k);
      }
      if (!in_cell.empty()) {
        IntervalBounds b{regions[r].lo, regions[r].hi, true, true};
        SetExpr cell = SetExpr::interval(g, b);
        if (in_cell.size() == end - r + 1) {
          parts.push_back(cell);
        } else {
          std::vector<SetExpr> residues;
          for (std::size_t k : in_cell) residues.push_back(SetExpr::residue(g, m.modulus(), regions[k].residue));
          parts.push_back(SetExpr::intersect({cell, SetExpr::unite(residues)}));
        }
      }
      r = end + 1;
    }
  }
  if (!singles.empty()) parts.push_back(SetExpr::points(g, singles));
  return SetExpr::unite(parts);
}

std::vector<Rational> sample_points(const SetExpr& e, std::size_t limit) {
  const SetExpr fam[] = {e};
  RegionMap m(e.ground(), fam);
  std::vector<Rational> out;
  for (std::size_t r = 0; r < m.regions().size() && out.size() < limit; ++r) {
    if (m.in(0, r)) out.push_back(m.regions()[r].sample);
  }
  return out;
}

}  // namespace famc
