#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "famc/filter.hpp"
#include "famc/measure.hpp"
#include "famc/set_expr.hpp"

namespace famc {

// The row P(x, ·) on one piece: a measure constant in x plus translation
// terms c·δ_{x+s}. Offset 0 is the diagonal term c·δ_x; non-zero offsets are
// only meaningful on integer grounds.
struct Row {
  explicit Row(GroundSpace g) : constant(std::move(g)) {}

  Measure constant;
  std::map<std::int64_t, Rational> shifts;

  Rational mass() const;
  Rational diagonal() const;
  // The concrete measure P(x, ·).
  Measure at(const Rational& x) const;
  Row& add(const Rational& scale, const Row& other);
  Row& add_shift(std::int64_t offset, const Rational& coef);
  Row scaled(const Rational& factor) const;
  std::string describe() const;

  friend bool operator==(const Row& a, const Row& b) { return a.constant == b.constant && a.shifts == b.shifts; }
};

struct KernelRule {
  SetExpr piece;
  Row row;
};

enum class KernelKind { Markov, SubMarkov };
std::string_view kernel_kind_name(KernelKind kind);

// A finitely additive transition function given by rules over pieces that
// partition the ground. Construction does not validate; see validate().
class Kernel {
 public:
  Kernel(GroundSpace g, std::vector<KernelRule> rules);

  const GroundSpace& ground() const noexcept { return ground_; }
  std::span<const KernelRule> rules() const noexcept { return rules_; }

  // Index of the rule whose piece contains x. Throws GroundMismatch for
  // points outside the ground and KernelError when no piece contains x.
  std::size_t rule_index(const Rational& x) const;
  Measure row(const Rational& x) const { return rules_[rule_index(x)].row.at(x); }

  // Every filter functional some row refers to, ordered by id.
  std::vector<FilterFunctional> filters() const;
  std::string describe() const;

 private:
  GroundSpace ground_;
  std::vector<KernelRule> rules_;
};

// Checks pieces partition the ground symbolically, coefficients are
// nonnegative, row masses are at most 1 and translations fit the ground.
// Throws KernelError on any violation.
KernelKind validate(const Kernel& k);

struct KernelSplit {
  Kernel ca;
  Kernel pfa;
};

// Row-wise Yosida-Hewitt split: the ca kernel keeps atoms and translation
// terms, the pfa kernel keeps the filter combinations.
KernelSplit decompose_kernel(const Kernel& k);

// a·k1 + b·k2 on the common refinement of their pieces.
Kernel kernel_sum(const Rational& a, const Kernel& k1, const Rational& b, const Kernel& k2);

// Row-wise equality on every non-empty intersection of pieces.
bool rows_equivalent(const Kernel& k1, const Kernel& k2);

// A kernel whose ca rows all have mass q1 and pfa rows mass q2 = 1 - q1.
class CombinedKernel {
 public:
  const Rational& q1() const noexcept { return q1_; }
  const Rational& q2() const noexcept { return q2_; }
  // Sub-Markov components with row masses q1 and q2.
  const Kernel& ca_part() const noexcept { return ca_; }
  const Kernel& pfa_part() const noexcept { return pfa_; }
  const Kernel& kernel() const noexcept { return combined_; }
  bool nondegenerate() const { return q1_ > 0 && q1_ < 1; }

 private:
  CombinedKernel(Rational q1, Kernel ca, Kernel pfa, Kernel combined)
      : q1_(std::move(q1)), q2_(1 - q1_), ca_(std::move(ca)), pfa_(std::move(pfa)), combined_(std::move(combined)) {}
  Rational q1_;
  Rational q2_;
  Kernel ca_;
  Kernel pfa_;
  Kernel combined_;

  friend CombinedKernel make_combined(const Rational&, const Kernel&, const Kernel&);
  friend std::optional<CombinedKernel> as_combined(const Kernel&);
};

// Builds q1·kca + (1 - q1)·kpfa from normalized components: kca rows purely
// atomic with mass 1, kpfa rows purely pfa with mass 1.
CombinedKernel make_combined(const Rational& q1, const Kernel& kca, const Kernel& kpfa);

// Recognizes a validated Markov kernel whose ca row masses are constant.
std::optional<CombinedKernel> as_combined(const Kernel& k);

// ∫ k(y, ·) f(dy): the row of the piece carrying f's tails, with the
// diagonal term integrating to coef·f. Throws UndecidedLimit when no piece
// is decided or a translation term would move the filter.
Measure filter_limit(const Kernel& k, const FilterFunctional& f);

// ∫ k(y, ·) mu(dy) for any representable (possibly signed) mu.
Measure transport(const Kernel& k, const Measure& mu);

// (k1∘k2)(x, E) = ∫ k2(y, E) k1(x, dy).
Kernel convolve(const Kernel& k1, const Kernel& k2);
// k^n for n >= 1.
Kernel kernel_power(const Kernel& k, unsigned n);

struct SingletonValue {
  Rational x;
  Rational y;
  Rational value;
};
std::vector<SingletonValue> kernel_power_singletons(const Kernel& k, unsigned n,
                                                    std::span<const std::pair<Rational, Rational>> pairs);

// The atomic support D(x) of P(x, ·) with weights summing to P_ca(x, X).
struct AtomicSupport {
  std::vector<std::pair<Rational, Rational>> atoms;
  Rational mass;
  bool empty() const noexcept { return atoms.empty(); }
};
AtomicSupport row_atomic_support(const Kernel& k, const Rational& x);

}  // namespace famc
