#include "famc/measure.hpp"

#include "famc/error.hpp"

namespace famc {

Measure Measure::dirac(GroundSpace g, const Rational& x, const Rational& weight) {
  Measure m(std::move(g));
  m.add_atom(x, weight);
  return m;
}

Measure Measure::of_filter(const FilterFunctional& f, const Rational& coef) {
  Measure m(f.ground());
  m.add_filter(f, coef);
  return m;
}

Measure& Measure::add_atom(const Rational& x, const Rational& weight) {
  require_point(ground_, x, "atom");
  if (weight == 0) return *this;
  auto [it, fresh] = atoms_.try_emplace(canonical(x), canonical(weight));
  if (!fresh) {
    it->second += weight;
    if (it->second == 0) atoms_.erase(it);
  }
  return *this;
}

Measure& Measure::add_filter(const FilterFunctional& f, const Rational& coef) {
  require_same_ground(ground_, f.ground(), "pfa term");
  if (coef == 0) return *this;
  auto [it, fresh] = pfa_.try_emplace(f, canonical(coef));
  if (!fresh) {
    it->second += coef;
    if (it->second == 0) pfa_.erase(it);
  }
  return *this;
}

Measure& Measure::add(const Rational& scale, const Measure& other) {
  require_same_ground(ground_, other.ground_, "measure sum");
  if (scale == 0) return *this;
  for (const auto& [x, w] : other.atoms_) add_atom(x, scale * w);
  for (const auto& [f, c] : other.pfa_) add_filter(f, scale * c);
  return *this;
}

Rational Measure::atom(const Rational& x) const {
  auto it = atoms_.find(x);
  return it == atoms_.end() ? Rational(0) : it->second;
}

Rational Measure::coefficient(const FilterFunctional& f) const {
  auto it = pfa_.find(f);
  return it == pfa_.end() ? Rational(0) : it->second;
}

Rational Measure::atomic_total() const {
  Rational s = 0;
  for (const auto& [x, w] : atoms_) s += w;
  return s;
}

Rational Measure::pfa_total() const {
  Rational s = 0;
  for (const auto& [f, c] : pfa_) s += c;
  return s;
}

bool Measure::is_nonnegative() const {
  for (const auto& [x, w] : atoms_) {
    if (w < 0) return false;
  }
  for (const auto& [f, c] : pfa_) {
    if (c < 0) return false;
  }
  return true;
}

Measure Measure::scaled(const Rational& factor) const {
  Measure out(ground_);
  out.add(factor, *this);
  return out;
}

Measure Measure::atomic_part() const {
  Measure out(ground_);
  out.atoms_ = atoms_;
  return out;
}

Measure Measure::pfa_part() const {
  Measure out(ground_);
  out.pfa_ = pfa_;
  return out;
}

std::string Measure::describe() const {
  if (is_zero()) return "0";
  std::string s;
  auto term = [&s](const Rational& c, const std::string& what) {
    if (!s.empty()) s += " + ";
    if (c != 1) s += format_rational(c) + "*";
    s += what;
  };
  for (const auto& [x, w] : atoms_) term(w, "d(" + format_rational(x) + ")");
  for (const auto& [f, c] : pfa_) term(c, f.id());
  return s;
}

std::optional<Rational> eval(const Measure& mu, const SetExpr& e) {
  require_same_ground(mu.ground(), e.ground(), "eval");
  Rational total = 0;
  for (const auto& [x, w] : mu.atoms()) {
    if (e.contains(x)) total += w;
  }
  for (const auto& [f, c] : mu.pfa()) {
    switch (filter_eval(f, e)) {
      case Decision::One: total += c; break;
      case Decision::Zero: break;
      case Decision::Undecided: return std::nullopt;
    }
  }
  return total;
}

YosidaHewitt yosida_hewitt(const Measure& mu) { return {mu.atomic_part(), mu.pfa_part()}; }

Measure combine(const Rational& a, const Measure& mu, const Rational& b, const Measure& nu) {
  require_same_ground(mu.ground(), nu.ground(), "combine");
  Measure out(mu.ground());
  out.add(a, mu);
  out.add(b, nu);
  return out;
}

Rational norm(const Measure& mu) {
  if (!mu.is_nonnegative()) throw DomainError("norm of a signed measure: " + mu.describe());
  return mu.total();
}

bool is_pfa(const Measure& mu) {
  if (!mu.is_nonnegative()) throw DomainError("is_pfa of a signed measure: " + mu.describe());
  return mu.atoms().empty();
}

std::string_view measure_type_name(MeasureType t) {
  switch (t) {
    case MeasureType::BothTypes: return "both-types";
    case MeasureType::Ca: return "ca";
    case MeasureType::Pfa: return "pfa";
    case MeasureType::Mixed: return "mixed";
  }
  return "?";
}

MeasureType classify(const Measure& mu) {
  const bool atomic = !mu.atoms().empty();
  const bool pure = !mu.pfa().empty();
  if (atomic && pure) return MeasureType::Mixed;
  if (atomic) return MeasureType::Ca;
  if (pure) return MeasureType::Pfa;
  return MeasureType::BothTypes;
}

bool in_V(const Measure& mu, MeasureFamily family) {
  if (!mu.is_nonnegative() || mu.total() > 1) return false;
  switch (family) {
    case MeasureFamily::Ba: return true;
    case MeasureFamily::Ca: return mu.pfa().empty();
    case MeasureFamily::Pfa: return mu.atoms().empty();
  }
  return false;
}

bool in_S(const Measure& mu, MeasureFamily family) { return in_V(mu, family) && mu.total() == 1; }

}  // namespace famc
