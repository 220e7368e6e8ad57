#include <doctest.h>

#include <random>

#include "famc/error.hpp"
#include "famc/operator.hpp"
#include "fixtures.hpp"

using namespace famc;

namespace {

Measure half_eta_half_delta0(const GroundSpace& g) {
  Measure m(g);
  m.add_atom(0, ratio(1, 2)).add_filter(fixtures::eta(g), ratio(1, 2));
  return m;
}

Measure random_probability(const GroundSpace& g, std::mt19937_64& rng) {
  const auto eta = fixtures::eta(g);
  Measure m(g);
  const long atoms = static_cast<long>(rng() % 4);
  long total = 0;
  std::vector<std::pair<Rational, long>> w;
  for (long i = 0; i < atoms; ++i) {
    const long c = 1 + static_cast<long>(rng() % 5);
    w.emplace_back(ratio(static_cast<long>(rng() % 11), 10), c);
    total += c;
  }
  const long ce = (atoms == 0 || rng() % 2) ? 1 + static_cast<long>(rng() % 5) : 0;
  total += ce;
  for (const auto& [x, c] : w) m.add_atom(x, ratio(c, total));
  if (ce) m.add_filter(eta, ratio(ce, total));
  return m;
}

}  // namespace

TEST_CASE("apply on the two combined examples") {
  const auto g = fixtures::unit();
  const auto eta = fixtures::eta(g);
  const MarkovOperator a41(fixtures::constant_chain());
  const MarkovOperator a42(fixtures::lazy_chain());
  std::mt19937_64 rng(5);
  for (int i = 0; i < 20; ++i) {
    const auto mu = random_probability(g, rng);
    CHECK(apply(a41, mu) == half_eta_half_delta0(g));
    CHECK(apply(a42, mu) == combine(ratio(1, 2), mu, ratio(1, 2), Measure::of_filter(eta)));
    CHECK(combine(1, apply_component(a41, Component::Ca, mu), 1, apply_component(a41, Component::Pfa, mu)) ==
          apply(a41, mu));
    CHECK(norm(apply(a42, mu)) == norm(mu));
  }
  CHECK(apply(a42, Measure::dirac(g, ratio(1, 3))) ==
        combine(ratio(1, 2), Measure::dirac(g, ratio(1, 3)), ratio(1, 2), Measure::of_filter(eta)));
  CHECK(apply_component(a41, Component::Ca, Measure::of_filter(eta)) == Measure::dirac(g, 0, ratio(1, 2)));
}

TEST_CASE("apply on a 3-state chain is the row-vector product") {
  const auto g = GroundSpace::finite("F", {0, 1, 2});
  const Rational m[3][3] = {{ratio(1, 2), ratio(1, 3), ratio(1, 6)}, {0, 1, 0}, {ratio(1, 4), 0, ratio(3, 4)}};
  std::vector<KernelRule> rules;
  for (int i = 0; i < 3; ++i) {
    Row r(g);
    for (int j = 0; j < 3; ++j) r.constant.add_atom(j, m[i][j]);
    rules.push_back({SetExpr::point(g, i), r});
  }
  const MarkovOperator a(Kernel(g, rules));
  const auto img = apply(a, Measure::dirac(g, 0));
  for (int j = 0; j < 3; ++j) CHECK(img.atom(j) == m[0][j]);
  Measure mix(g);
  mix.add_atom(0, ratio(1, 3)).add_atom(2, ratio(2, 3));
  const auto img2 = apply(a, mix);
  for (int j = 0; j < 3; ++j) CHECK(img2.atom(j) == ratio(1, 3) * m[0][j] + ratio(2, 3) * m[2][j]);
}

TEST_CASE("norm traces") {
  const auto g = fixtures::unit();
  const MarkovOperator a41(fixtures::constant_chain());
  const auto t41 = iterate(a41, Measure::dirac(g, 1), 10);
  REQUIRE(t41.rows.size() == 11);
  CHECK(t41.rows[0].ca_norm == 1);
  for (std::size_t i = 1; i < t41.rows.size(); ++i) {
    CHECK(t41.rows[i].ca_norm == ratio(1, 2));
    CHECK(t41.rows[i].pfa_norm == ratio(1, 2));
  }
  const MarkovOperator a42(fixtures::lazy_chain());
  const auto t42 = iterate(a42, Measure::dirac(g, ratio(1, 2)), 10);
  for (const auto& r : t42.rows) {
    CHECK(r.ca_norm == pow(ratio(1, 2), static_cast<unsigned>(r.n - 1)));
    CHECK(r.ca_norm + r.pfa_norm == 1);
  }
  const auto fixed = iterate(a41, half_eta_half_delta0(g), 5);
  for (const auto& r : fixed.rows) CHECK(r.ca_norm == ratio(1, 2));
  CHECK_THROWS_AS(iterate(a41, Measure::dirac(g, 0, ratio(1, 2)), 3), DomainError);
  CHECK_THROWS_AS(iterate(a41, Measure::dirac(g, 0), 0), DomainError);
  const auto csv = trace_csv(iterate(a42, Measure::dirac(g, ratio(1, 2)), 2));
  CHECK(csv ==
        "n,ca_norm,pfa_norm,ca_norm_decimal,pfa_norm_decimal\n"
        "1,1,0,1.000000000000,0.000000000000\n"
        "2,1/2,1/2,0.500000000000,0.500000000000\n"
        "3,1/4,3/4,0.250000000000,0.750000000000\n");
}

TEST_CASE("H conditions") {
  const auto g = fixtures::unit();
  const auto eta = fixtures::eta(g);
  const MarkovOperator a41(fixtures::constant_chain());
  const MarkovOperator a42(fixtures::lazy_chain());
  CHECK(check_H1(a41).status == HVerdict::Status::HoldsOnBasis);
  const auto h2_41 = check_H2(a41);
  CHECK(h2_41.status == HVerdict::Status::Fails);
  CHECK(h2_41.image == Measure::dirac(g, 0, ratio(1, 2)));
  const auto h1_42 = check_H1(a42);
  CHECK(h1_42.status == HVerdict::Status::Fails);
  CHECK(h1_42.witness == eta);
  CHECK(h1_42.image == Measure::of_filter(eta, ratio(1, 2)));
  CHECK(check_H2(a42).status == HVerdict::Status::HoldsOnBasis);

  const MarkovOperator pure(fixtures::constant_kernel(g, Measure::of_filter(eta)));
  CHECK(check_H1(pure).status == HVerdict::Status::HoldsOnBasis);

  // A_ca η = ¼δ₀ + ¼η: constant ¼δ₀ plus diagonal ¼δ_x in the ca part.
  Row neither(g);
  neither.constant.add_atom(0, ratio(1, 4)).add_filter(eta, ratio(1, 2));
  neither.add_shift(0, ratio(1, 4));
  const MarkovOperator an(Kernel(g, {{SetExpr::full(g), neither}}));
  Measure expect(g);
  expect.add_atom(0, ratio(1, 4)).add_filter(eta, ratio(1, 4));
  CHECK(apply_component(an, Component::Ca, Measure::of_filter(eta)) == expect);
  CHECK(check_H1(an).status == HVerdict::Status::Fails);
  CHECK(check_H2(an).status == HVerdict::Status::Fails);
}

TEST_CASE("range inclusions and linearity") {
  const auto g = fixtures::unit();
  const auto eta = fixtures::eta(g);
  std::mt19937_64 rng(9);
  std::vector<Measure> suite;
  for (int i = 0; i < 10; ++i) suite.push_back(random_probability(g, rng).scaled(ratio(1 + i % 3, 3)));
  for (const auto& k : {fixtures::constant_chain(), fixtures::lazy_chain(), fixtures::jump_then_filter(),
                        fixtures::constant_kernel(g, Measure::dirac(g, 1))}) {
    const MarkovOperator a(k);
    const auto rep = range_inclusions(a, suite);
    CHECK(rep.ok());
    CHECK(rep.checked == suite.size());
    for (std::size_t i = 0; i + 1 < suite.size(); ++i) {
      const Rational s = ratio(static_cast<long>(i) + 1, 4);
      CHECK(apply(a, combine(s, suite[i], -2, suite[i + 1])) ==
            combine(s, apply(a, suite[i]), -2, apply(a, suite[i + 1])));
      CHECK(apply(a, suite[i]).is_nonnegative());
    }
  }
  const MarkovOperator pure(fixtures::constant_kernel(g, Measure::of_filter(eta)));
  for (const auto& mu : suite) CHECK(is_pfa(apply(pure, mu)));
}
