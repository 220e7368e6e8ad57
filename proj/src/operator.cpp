#include "famc/operator.hpp"

#include <set>

#include "famc/error.hpp"

namespace famc {

std::string_view component_name(Component c) { return c == Component::Ca ? "ca" : "pfa"; }

MarkovOperator::MarkovOperator(Kernel k, std::vector<FilterFunctional> basis)
    : kernel_(std::move(k)),
      ca_(kernel_.ground(), {}),
      pfa_(kernel_.ground(), {}),
      kind_(validate(kernel_)) {
  auto split = decompose_kernel(kernel_);
  ca_ = std::move(split.ca);
  pfa_ = std::move(split.pfa);
  std::set<FilterFunctional> all(basis.begin(), basis.end());
  for (const auto& f : kernel_.filters()) all.insert(f);
  for (const auto& f : all) require_same_ground(kernel_.ground(), f.ground(), "filter basis");
  basis_.assign(all.begin(), all.end());
  combined_ = as_combined(kernel_);
}

MarkovOperator::MarkovOperator(const CombinedKernel& ck, std::vector<FilterFunctional> basis)
    : MarkovOperator(ck.kernel(), std::move(basis)) {}

bool MarkovOperator::pfa_rows_only() const {
  for (const auto& r : ca_.rules()) {
    if (r.row.mass() != 0) return false;
  }
  return true;
}

bool MarkovOperator::atomic_rows_only() const {
  for (const auto& r : pfa_.rules()) {
    if (r.row.mass() != 0) return false;
  }
  return true;
}

Measure apply(const MarkovOperator& a, const Measure& mu) { return transport(a.kernel(), mu); }

Measure apply_component(const MarkovOperator& a, Component part, const Measure& mu) {
  return transport(a.component(part), mu);
}

NormTrace iterate(const MarkovOperator& a, const Measure& initial, int n_max, int retain) {
  if (n_max < 1) throw DomainError("iterate needs n_max >= 1");
  if (!in_S(initial, MeasureFamily::Ba)) {
    throw DomainError("initial measure must be a probability measure, got " + initial.describe());
  }
  NormTrace trace(initial);
  trace.rows.reserve(static_cast<std::size_t>(n_max) + 1);
  Measure current = initial;
  for (int n = 1; n <= n_max + 1; ++n) {
    if (n > 1) current = apply(a, current);
    trace.rows.push_back({n, norm(current.atomic_part()), norm(current.pfa_part())});
    if (n <= retain) trace.retained.push_back(current);
  }
  return trace;
}

std::string trace_csv(const NormTrace& trace) {
  std::string out = "n,ca_norm,pfa_norm,ca_norm_decimal,pfa_norm_decimal\n";
  for (const auto& r : trace.rows) {
    out += std::to_string(r.n) + "," + format_rational(r.ca_norm) + "," + format_rational(r.pfa_norm) + "," +
           format_decimal(r.ca_norm) + "," + format_decimal(r.pfa_norm) + "\n";
  }
  return out;
}

std::string_view h_status_name(HVerdict::Status s) {
  switch (s) {
    case HVerdict::Status::HoldsOnBasis: return "holds-on-basis";
    case HVerdict::Status::Fails: return "fails";
    case HVerdict::Status::Undecided: return "undecided";
  }
  return "?";
}

namespace {

HVerdict check_ca_images(const MarkovOperator& a, bool want_atomic) {
  HVerdict out;
  std::optional<std::string> undecided;
  for (const auto& f : a.basis()) {
    Measure image(a.ground());
    try {
      image = apply_component(a, Component::Ca, Measure::of_filter(f));
    } catch (const UndecidedLimit& e) {
      if (!undecided) undecided = e.what();
      continue;
    }
    const bool good = want_atomic ? image.pfa().empty() : image.atoms().empty();
    if (!good) {
      out.status = HVerdict::Status::Fails;
      out.witness = f;
      out.image = image;
      return out;
    }
  }
  if (undecided) {
    out.status = HVerdict::Status::Undecided;
    out.note = *undecided;
  }
  return out;
}

}  // namespace

HVerdict check_H1(const MarkovOperator& a) { return check_ca_images(a, true); }
HVerdict check_H2(const MarkovOperator& a) { return check_ca_images(a, false); }

RangeReport range_inclusions(const MarkovOperator& a, std::span<const Measure> suite) {
  RangeReport report;
  for (std::size_t i = 0; i < suite.size(); ++i) {
    const Measure& mu = suite[i];
    if (!in_V(mu, MeasureFamily::Ba)) {
      ++report.skipped;
      report.notes.push_back("element " + std::to_string(i) + " is not in V_ba");
      continue;
    }
    try {
      const Measure ca_ca = apply_component(a, Component::Ca, apply_component(a, Component::Ca, mu.atomic_part()));
      const Measure pfa_pfa = apply_component(a, Component::Pfa, apply_component(a, Component::Pfa, mu));
      const Measure pfa_ca = apply_component(a, Component::Pfa, apply_component(a, Component::Ca, mu));
      if (!ca_ca.pfa().empty()) report.violations.push_back({i, "A_ca A_ca maps ca into ca", mu.atomic_part(), ca_ca});
      if (!is_pfa(pfa_pfa)) report.violations.push_back({i, "A_pfa A_pfa maps ba into pfa", mu, pfa_pfa});
      if (!is_pfa(pfa_ca)) report.violations.push_back({i, "A_pfa A_ca maps ba into pfa", mu, pfa_ca});
      ++report.checked;
    } catch (const UndecidedLimit& e) {
      ++report.skipped;
      report.notes.push_back("element " + std::to_string(i) + ": " + e.what());
    }
  }
  return report;
}

}  // namespace famc
