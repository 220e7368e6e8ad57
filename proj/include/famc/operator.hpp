#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "famc/kernel.hpp"
#include "famc/measure.hpp"

namespace famc {

enum class Component { Ca, Pfa };
std::string_view component_name(Component c);

// The Markov operator Aμ(E) = ∫ P(x,E) μ(dx) of a validated kernel, with its
// split A = A_ca + A_pfa and a registered basis of filter functionals (the
// pfa cone the H-condition checks quantify over).
class MarkovOperator {
 public:
  // The basis is `basis` plus every filter the kernel refers to.
  explicit MarkovOperator(Kernel k, std::vector<FilterFunctional> basis = {});
  explicit MarkovOperator(const CombinedKernel& ck, std::vector<FilterFunctional> basis = {});

  const GroundSpace& ground() const noexcept { return kernel_.ground(); }
  const Kernel& kernel() const noexcept { return kernel_; }
  const Kernel& component(Component c) const noexcept { return c == Component::Ca ? ca_ : pfa_; }
  KernelKind kind() const noexcept { return kind_; }
  std::span<const FilterFunctional> basis() const noexcept { return basis_; }

  // Present when the kernel is Markov with constant ca row mass q1.
  const std::optional<CombinedKernel>& combined() const noexcept { return combined_; }
  bool nondegenerate_combined() const { return combined_ && combined_->nondegenerate(); }
  // Every row is purely pfa (P_ca = 0).
  bool pfa_rows_only() const;
  // Every row is purely atomic (P_pfa = 0).
  bool atomic_rows_only() const;

 private:
  Kernel kernel_;
  Kernel ca_;
  Kernel pfa_;
  KernelKind kind_;
  std::vector<FilterFunctional> basis_;
  std::optional<CombinedKernel> combined_;
};

Measure apply(const MarkovOperator& a, const Measure& mu);
Measure apply_component(const MarkovOperator& a, Component part, const Measure& mu);

struct TraceRow {
  int n = 0;
  Rational ca_norm;
  Rational pfa_norm;
};

// Component norms of μ^n = A μ^{n-1}; the components are those of each
// iterate, never iterated components.
struct NormTrace {
  NormTrace(Measure init) : initial(std::move(init)) {}
  Measure initial;
  std::vector<TraceRow> rows;
  std::vector<Measure> retained;  // μ^1 .. μ^retain
};

// Rows n = 1 .. n_max + 1. The initial measure must be a probability.
NormTrace iterate(const MarkovOperator& a, const Measure& initial, int n_max, int retain = 8);

std::string trace_csv(const NormTrace& trace);

struct HVerdict {
  enum class Status { HoldsOnBasis, Fails, Undecided };
  Status status = Status::HoldsOnBasis;
  std::optional<FilterFunctional> witness;
  std::optional<Measure> image;
  std::string note;
};
std::string_view h_status_name(HVerdict::Status s);

// A_ca maps every basis filter to a countably additive measure.
HVerdict check_H1(const MarkovOperator& a);
// A_ca maps every basis filter to a purely finitely additive measure.
HVerdict check_H2(const MarkovOperator& a);

struct InclusionViolation {
  std::size_t index = 0;
  std::string inclusion;
  Measure input;
  Measure image;
};

struct RangeReport {
  std::size_t checked = 0;
  std::size_t skipped = 0;
  std::vector<std::string> notes;
  std::vector<InclusionViolation> violations;
  bool ok() const noexcept { return violations.empty(); }
};

// For every suite element checks A_ca A_ca μ_ca ∈ ca, A_pfa A_pfa μ ∈ pfa and
// A_pfa A_ca μ ∈ pfa. Elements outside V_ba or with undecided limits are
// skipped with a note.
RangeReport range_inclusions(const MarkovOperator& a, std::span<const Measure> suite);

}  // namespace famc
