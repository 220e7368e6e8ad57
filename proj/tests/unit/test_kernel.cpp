#include <doctest.h>

#include <random>

#include "famc/error.hpp"
#include "famc/kernel.hpp"
#include "fixtures.hpp"

using namespace famc;

namespace {

using Matrix = std::vector<std::vector<Rational>>;

// Dense product oracle: (a b)[i][j] = Σ_k a[i][k] b[k][j].
Matrix multiply(const Matrix& a, const Matrix& b) {
  Matrix out(a.size(), std::vector<Rational>(b[0].size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < b.size(); ++k)
      for (std::size_t j = 0; j < b[0].size(); ++j) out[i][j] += a[i][k] * b[k][j];
  return out;
}

Kernel from_matrix(const GroundSpace& g, const Matrix& m) {
  std::vector<KernelRule> rules;
  const auto pts = g.points();
  for (std::size_t i = 0; i < m.size(); ++i) {
    Row row(g);
    for (std::size_t j = 0; j < m[i].size(); ++j) row.constant.add_atom(pts[j], m[i][j]);
    rules.push_back({SetExpr::point(g, pts[i]), row});
  }
  return Kernel(g, rules);
}

}  // namespace

TEST_CASE("validate classifies and rejects") {
  const auto g = fixtures::unit();
  CHECK(validate(fixtures::constant_chain()) == KernelKind::Markov);
  CHECK(validate(fixtures::lazy_chain()) == KernelKind::Markov);
  CHECK(validate(fixtures::jump_then_filter()) == KernelKind::Markov);
  CHECK(validate(fixtures::constant_kernel(g, Measure::dirac(g, 0, ratio(9, 10)))) == KernelKind::SubMarkov);
  CHECK_THROWS_AS(validate(fixtures::constant_kernel(g, Measure::dirac(g, 0, ratio(-1, 2)))), KernelError);
  CHECK_THROWS_AS(validate(fixtures::constant_kernel(g, Measure::dirac(g, 0, ratio(3, 2)))), KernelError);
  Row r(g);
  r.constant.add_atom(0, 1);
  CHECK_THROWS_AS(validate(Kernel(g, {{SetExpr::closed_interval(g, 0, ratio(1, 2)), r}})), KernelError);
  CHECK_THROWS_AS(validate(Kernel(g, {{SetExpr::closed_interval(g, 0, ratio(1, 2)), r},
                                      {SetExpr::closed_interval(g, ratio(1, 2), 1), r}})),
                  KernelError);
  Row shift(g);
  shift.add_shift(1, 1);
  CHECK_THROWS_AS(validate(Kernel(g, {{SetExpr::full(g), shift}})), KernelError);
}

TEST_CASE("decompose and combine") {
  const auto g = fixtures::unit();
  const auto eta = fixtures::eta(g);
  const auto split = decompose_kernel(fixtures::constant_chain());
  CHECK(split.ca.row(ratio(1, 3)) == Measure::dirac(g, 0, ratio(1, 2)));
  CHECK(split.pfa.row(ratio(1, 3)) == Measure::of_filter(eta, ratio(1, 2)));
  CHECK(validate(split.ca) == KernelKind::SubMarkov);

  const auto atomic = fixtures::constant_kernel(g, Measure::dirac(g, 1));
  const auto atomic_split = decompose_kernel(atomic);
  CHECK(rows_equivalent(atomic_split.ca, atomic));
  CHECK(atomic_split.pfa.row(0).is_zero());

  const auto d = fixtures::constant_kernel(g, Measure::dirac(g, 0));
  const auto e = fixtures::constant_kernel(g, Measure::of_filter(eta));
  const auto ck = make_combined(ratio(1, 2), d, e);
  CHECK(rows_equivalent(ck.kernel(), fixtures::constant_chain()));
  CHECK(ck.nondegenerate());
  const auto ck2 = make_combined(ratio(1, 2), fixtures::diagonal_kernel(g), e);
  CHECK(rows_equivalent(ck2.kernel(), fixtures::lazy_chain()));
  const auto deg = make_combined(1, d, e);
  CHECK_FALSE(deg.nondegenerate());
  CHECK(rows_equivalent(deg.kernel(), d));
  CHECK_THROWS_AS(make_combined(ratio(1, 2), e, d), KernelError);

  const auto back = as_combined(fixtures::lazy_chain());
  REQUIRE(back.has_value());
  CHECK(back->q1() == ratio(1, 2));
  CHECK(rows_equivalent(kernel_sum(1, back->ca_part(), 1, back->pfa_part()), fixtures::lazy_chain()));
  CHECK_FALSE(as_combined(fixtures::jump_then_filter()).has_value());
}

TEST_CASE("jump-then-filter singletons") {
  const auto k = fixtures::jump_then_filter();
  CHECK(k.row(0).atom(1) == 1);
  std::vector<std::pair<Rational, Rational>> pairs;
  for (long i = 0; i < 10; ++i)
    for (long j = 0; j < 10; ++j) pairs.emplace_back(ratio(i, 9), ratio(j, 9));
  for (const auto& v : kernel_power_singletons(k, 2, pairs)) CHECK(v.value == 0);
  const auto one = kernel_power_singletons(k, 1, std::vector<std::pair<Rational, Rational>>{{0, 1}});
  CHECK(one.at(0).value == 1);
}

TEST_CASE("powers of pure pfa and identity kernels") {
  const auto g = fixtures::unit();
  const auto pure = fixtures::constant_kernel(g, Measure::of_filter(fixtures::eta(g)));
  std::vector<std::pair<Rational, Rational>> pairs{{0, 0}, {ratio(1, 2), ratio(1, 2)}, {1, 0}};
  for (unsigned n = 1; n <= 4; ++n)
    for (const auto& v : kernel_power_singletons(pure, n, pairs)) CHECK(v.value == 0);
  const auto id = fixtures::diagonal_kernel(g);
  const auto five = kernel_power_singletons(id, 5, std::vector<std::pair<Rational, Rational>>{{ratio(1, 3), ratio(1, 3)}});
  CHECK(five.at(0).value == 1);
}

TEST_CASE("convolution of 3-state atomic kernels matches matrix products") {
  const auto g = GroundSpace::finite("F", {0, 1, 2});
  std::mt19937_64 rng(3);
  for (int t = 0; t < 30; ++t) {
    Matrix a(3, std::vector<Rational>(3)), b(3, std::vector<Rational>(3));
    for (auto* m : {&a, &b}) {
      for (auto& row : *m) {
        long w[3], s = 0;
        for (auto& x : w) s += (x = static_cast<long>(rng() % 4));
        if (s == 0) w[0] = s = 1;
        for (int j = 0; j < 3; ++j) row[static_cast<std::size_t>(j)] = ratio(w[j], s);
      }
    }
    const auto prod = multiply(a, b);
    const auto conv = convolve(from_matrix(g, a), from_matrix(g, b));
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) CHECK(conv.row(g.points()[i]).atom(g.points()[j]) == prod[i][j]);
  }
}

TEST_CASE("row atomic support") {
  const auto g = fixtures::unit();
  const auto s41 = row_atomic_support(fixtures::constant_chain(), ratio(2, 5));
  REQUIRE(s41.atoms.size() == 1);
  CHECK(s41.atoms[0].first == 0);
  CHECK(s41.atoms[0].second == ratio(1, 2));
  CHECK(s41.mass == ratio(1, 2));
  const auto s42 = row_atomic_support(fixtures::lazy_chain(), ratio(1, 3));
  REQUIRE(s42.atoms.size() == 1);
  CHECK(s42.atoms[0].first == ratio(1, 3));
  CHECK(s42.atoms[0].second == ratio(1, 2));
  const auto pure = fixtures::constant_kernel(g, Measure::of_filter(fixtures::eta(g)));
  CHECK(row_atomic_support(pure, ratio(1, 7)).empty());
  CHECK(row_atomic_support(pure, ratio(1, 7)).mass == 0);
}

TEST_CASE("filter limits and undecided integration") {
  const auto g = fixtures::unit();
  const auto eta = fixtures::eta(g);
  CHECK(filter_limit(fixtures::constant_chain(), eta) == fixtures::constant_chain().row(ratio(1, 9)));
  Measure half(g);
  half.add_filter(eta, 1);
  CHECK(filter_limit(fixtures::lazy_chain(), eta) == half);
  // The piece (0,1] carries the tails of η in the jump-then-filter kernel.
  CHECK(filter_limit(fixtures::jump_then_filter(), eta) == Measure::of_filter(eta));

  const auto z = GroundSpace::integers();
  const auto inf = FilterFunctional::make("etainf", z, TailFamily::GeqThreshold);
  Row a(z), b(z);
  a.constant.add_atom(0, 1);
  b.constant.add_atom(1, 1);
  const Kernel parity(z, {{SetExpr::residue(z, 2, 0), a}, {SetExpr::residue(z, 2, 1), b}});
  CHECK_THROWS_AS(filter_limit(parity, inf), UndecidedLimit);
  Row shift(z);
  shift.add_shift(1, 1);
  const Kernel walk(z, {{SetExpr::full(z), shift}});
  CHECK(validate(walk) == KernelKind::Markov);
  CHECK(transport(walk, Measure::dirac(z, 3)) == Measure::dirac(z, 4));
  CHECK_THROWS_AS(filter_limit(walk, inf), UndecidedLimit);
}
