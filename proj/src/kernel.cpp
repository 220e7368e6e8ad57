#include "famc/kernel.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "famc/error.hpp"

namespace famc {

namespace {

Rational offset_rational(std::int64_t s) { return Rational(Integer(static_cast<long>(s))); }

// Refinement of two piece lists: every non-empty pairwise intersection.
template <typename Emit>
void for_each_overlap(const Kernel& a, const Kernel& b, Emit emit) {
  for (const auto& ra : a.rules()) {
    for (const auto& rb : b.rules()) {
      SetExpr both = SetExpr::intersect({ra.piece, rb.piece});
      if (is_empty(both)) continue;
      emit(normalize(both), ra.row, rb.row);
    }
  }
}

Kernel scaled_kernel(const Kernel& k, const Rational& factor) {
  std::vector<KernelRule> rules;
  for (const auto& r : k.rules()) rules.push_back({r.piece, r.row.scaled(factor)});
  return Kernel(k.ground(), std::move(rules));
}

}  // namespace

Rational Row::mass() const {
  Rational m = constant.total();
  for (const auto& [s, c] : shifts) m += c;
  return m;
}

Rational Row::diagonal() const {
  auto it = shifts.find(0);
  return it == shifts.end() ? Rational(0) : it->second;
}

Measure Row::at(const Rational& x) const {
  Measure out = constant;
  for (const auto& [s, c] : shifts) out.add_atom(x + offset_rational(s), c);
  return out;
}

Row& Row::add_shift(std::int64_t offset, const Rational& coef) {
  if (coef == 0) return *this;
  auto [it, fresh] = shifts.try_emplace(offset, canonical(coef));
  if (!fresh) {
    it->second += coef;
    if (it->second == 0) shifts.erase(it);
  }
  return *this;
}

Row& Row::add(const Rational& scale, const Row& other) {
  constant.add(scale, other.constant);
  if (scale != 0) {
    for (const auto& [s, c] : other.shifts) add_shift(s, scale * c);
  }
  return *this;
}

Row Row::scaled(const Rational& factor) const {
  Row out(constant.ground());
  out.add(factor, *this);
  return out;
}

std::string Row::describe() const {
  std::string s = constant.is_zero() ? "" : constant.describe();
  for (const auto& [off, c] : shifts) {
    if (!s.empty()) s += " + ";
    if (c != 1) s += format_rational(c) + "*";
    s += off == 0 ? "d(x)" : "d(x" + std::string(off > 0 ? "+" : "") + std::to_string(off) + ")";
  }
  return s.empty() ? "0" : s;
}

std::string_view kernel_kind_name(KernelKind kind) {
  return kind == KernelKind::Markov ? "markov" : "sub-markov";
}

Kernel::Kernel(GroundSpace g, std::vector<KernelRule> rules) : ground_(std::move(g)), rules_(std::move(rules)) {
  for (const auto& r : rules_) {
    require_same_ground(ground_, r.piece.ground(), "kernel piece");
    require_same_ground(ground_, r.row.constant.ground(), "kernel row");
  }
}

std::size_t Kernel::rule_index(const Rational& x) const {
  require_point(ground_, x, "kernel row");
  for (std::size_t i = 0; i < rules_.size(); ++i) {
    if (rules_[i].piece.contains(x)) return i;
  }
  throw KernelError("no kernel piece contains " + format_rational(x));
}

std::vector<FilterFunctional> Kernel::filters() const {
  std::set<FilterFunctional> seen;
  for (const auto& r : rules_) {
    for (const auto& [f, c] : r.row.constant.pfa()) seen.insert(f);
  }
  return {seen.begin(), seen.end()};
}

std::string Kernel::describe() const {
  std::string s;
  for (const auto& r : rules_) s += r.piece.describe() + " -> " + r.row.describe() + "\n";
  return s;
}

KernelKind validate(const Kernel& k) {
  std::vector<SetExpr> pieces;
  for (const auto& r : k.rules()) pieces.push_back(r.piece);
  if (pieces.empty()) throw KernelError("kernel has no rules");
  if (auto problem = partition_problem(k.ground(), pieces)) {
    throw KernelError("pieces do not partition the ground: " + *problem);
  }
  bool markov = true;
  for (std::size_t i = 0; i < k.rules().size(); ++i) {
    const auto& rule = k.rules()[i];
    const std::string where = "rule " + std::to_string(i) + " on " + rule.piece.describe();
    if (!rule.row.constant.is_nonnegative()) throw KernelError(where + ": negative coefficient");
    for (const auto& [s, c] : rule.row.shifts) {
      if (c < 0) throw KernelError(where + ": negative coefficient");
      if (s != 0 && k.ground().kind() != GroundKind::Integers) {
        throw KernelError(where + ": translation terms need an integer ground");
      }
    }
    const Rational mass = rule.row.mass();
    if (mass > 1) throw KernelError(where + ": row mass " + format_rational(mass) + " exceeds 1");
    if (mass != 1) markov = false;
  }
  return markov ? KernelKind::Markov : KernelKind::SubMarkov;
}

KernelSplit decompose_kernel(const Kernel& k) {
  std::vector<KernelRule> ca;
  std::vector<KernelRule> pfa;
  for (const auto& r : k.rules()) {
    Row ca_row(k.ground());
    ca_row.constant = r.row.constant.atomic_part();
    ca_row.shifts = r.row.shifts;
    Row pfa_row(k.ground());
    pfa_row.constant = r.row.constant.pfa_part();
    ca.push_back({r.piece, std::move(ca_row)});
    pfa.push_back({r.piece, std::move(pfa_row)});
  }
  return {Kernel(k.ground(), std::move(ca)), Kernel(k.ground(), std::move(pfa))};
}

Kernel kernel_sum(const Rational& a, const Kernel& k1, const Rational& b, const Kernel& k2) {
  require_same_ground(k1.ground(), k2.ground(), "kernel sum");
  std::vector<KernelRule> rules;
  for_each_overlap(k1, k2, [&](SetExpr piece, const Row& r1, const Row& r2) {
    Row row = r1.scaled(a);
    row.add(b, r2);
    rules.push_back({std::move(piece), std::move(row)});
  });
  return Kernel(k1.ground(), std::move(rules));
}

bool rows_equivalent(const Kernel& k1, const Kernel& k2) {
  if (!(k1.ground() == k2.ground())) return false;
  bool same = true;
  for_each_overlap(k1, k2, [&](const SetExpr&, const Row& r1, const Row& r2) { same = same && r1 == r2; });
  return same;
}

CombinedKernel make_combined(const Rational& q1, const Kernel& kca, const Kernel& kpfa) {
  require_same_ground(kca.ground(), kpfa.ground(), "make_combined");
  if (q1 < 0 || q1 > 1) throw KernelError("q1 = " + format_rational(q1) + " is outside [0,1]");
  if (validate(kca) != KernelKind::Markov) throw KernelError("ca component rows must have mass 1");
  if (validate(kpfa) != KernelKind::Markov) throw KernelError("pfa component rows must have mass 1");
  for (const auto& r : kca.rules()) {
    if (!r.row.constant.pfa().empty()) {
      throw KernelError("ca component row on " + r.piece.describe() + " has a pfa term");
    }
  }
  for (const auto& r : kpfa.rules()) {
    if (!r.row.constant.atoms().empty() || !r.row.shifts.empty()) {
      throw KernelError("pfa component row on " + r.piece.describe() + " has an atomic term");
    }
  }
  const Rational q2 = 1 - q1;
  Kernel ca = scaled_kernel(kca, q1);
  Kernel pfa = scaled_kernel(kpfa, q2);
  Kernel combined = kernel_sum(q1, kca, q2, kpfa);
  return CombinedKernel(q1, std::move(ca), std::move(pfa), std::move(combined));
}

std::optional<CombinedKernel> as_combined(const Kernel& k) {
  if (validate(k) != KernelKind::Markov) return std::nullopt;
  std::optional<Rational> q1;
  for (const auto& r : k.rules()) {
    if (is_empty(r.piece)) continue;
    Rational ca_mass = r.row.mass() - r.row.constant.pfa_total();
    if (q1 && *q1 != ca_mass) return std::nullopt;
    q1 = ca_mass;
  }
  if (!q1) return std::nullopt;
  auto split = decompose_kernel(k);
  return CombinedKernel(*q1, std::move(split.ca), std::move(split.pfa), k);
}

Measure filter_limit(const Kernel& k, const FilterFunctional& f) {
  require_same_ground(k.ground(), f.ground(), "filter limit");
  const KernelRule* carrier = nullptr;
  const KernelRule* undecided = nullptr;
  for (const auto& r : k.rules()) {
    const Decision d = filter_eval(f, r.piece);
    if (d == Decision::One) {
      carrier = &r;
      break;
    }
    if (d == Decision::Undecided && !undecided) undecided = &r;
  }
  if (!carrier) {
    if (undecided) {
      throw UndecidedLimit(f.id(), undecided->piece.describe(), "piece neither contains nor misses the tails");
    }
    throw KernelError("no piece carries the tails of '" + f.id() + "'; pieces do not partition the ground");
  }
  Measure out = carrier->row.constant;
  for (const auto& [s, c] : carrier->row.shifts) {
    if (s != 0) throw UndecidedLimit(f.id(), carrier->piece.describe(), "translation of a filter is not representable");
    out.add_filter(f, c);
  }
  return out;
}

Measure transport(const Kernel& k, const Measure& mu) {
  require_same_ground(k.ground(), mu.ground(), "transport");
  Measure out(k.ground());
  for (const auto& [x, w] : mu.atoms()) out.add(w, k.row(x));
  for (const auto& [f, c] : mu.pfa()) out.add(c, filter_limit(k, f));
  return out;
}

Kernel convolve(const Kernel& k1, const Kernel& k2) {
  require_same_ground(k1.ground(), k2.ground(), "convolve");
  const GroundSpace& g = k1.ground();
  std::vector<KernelRule> out;
  for (const auto& rule : k1.rules()) {
    const Measure moved = transport(k2, rule.row.constant);
    std::vector<std::pair<std::int64_t, Rational>> terms(rule.row.shifts.begin(), rule.row.shifts.end());
    std::vector<std::size_t> choice(terms.size());

    // x + s must land in one k2 piece per translation term; enumerate the
    // consistent choices and keep non-empty constraint sets.
    std::function<void(std::size_t, const SetExpr&)> pick = [&](std::size_t t, const SetExpr& where) {
      if (t == terms.size()) {
        Row row(g);
        row.constant = moved;
        for (std::size_t i = 0; i < terms.size(); ++i) {
          const auto& [s, c] = terms[i];
          const Row& next = k2.rules()[choice[i]].row;
          row.constant.add(c, next.constant);
          for (const auto& [s2, c2] : next.shifts) row.add_shift(s + s2, c * c2);
        }
        out.push_back({normalize(where), std::move(row)});
        return;
      }
      for (std::size_t j = 0; j < k2.rules().size(); ++j) {
        SetExpr narrowed = SetExpr::intersect({where, k2.rules()[j].piece.translated(-terms[t].first)});
        if (is_empty(narrowed)) continue;
        choice[t] = j;
        pick(t + 1, narrowed);
      }
    };
    if (!is_empty(rule.piece)) pick(0, rule.piece);
  }
  return Kernel(g, std::move(out));
}

Kernel kernel_power(const Kernel& k, unsigned n) {
  if (n == 0) throw DomainError("kernel power needs n >= 1");
  Kernel out = k;
  for (unsigned i = 1; i < n; ++i) out = convolve(out, k);
  return out;
}

std::vector<SingletonValue> kernel_power_singletons(const Kernel& k, unsigned n,
                                                    std::span<const std::pair<Rational, Rational>> pairs) {
  const Kernel p = kernel_power(k, n);
  std::vector<SingletonValue> out;
  out.reserve(pairs.size());
  for (const auto& [x, y] : pairs) {
    require_point(k.ground(), y, "singleton target");
    auto v = eval(p.row(x), SetExpr::point(k.ground(), y));
    if (!v) throw Error("singleton evaluation undecided");
    out.push_back({x, y, *v});
  }
  return out;
}

AtomicSupport row_atomic_support(const Kernel& k, const Rational& x) {
  const Measure row = k.row(x);
  AtomicSupport out;
  out.mass = 0;
  for (const auto& [y, w] : row.atoms()) {
    out.atoms.emplace_back(y, w);
    out.mass += w;
  }
  return out;
}

}  // namespace famc
