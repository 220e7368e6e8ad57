#include <doctest.h>

#include <random>

#include "famc/error.hpp"
#include "famc/measure.hpp"
#include "fixtures.hpp"

using namespace famc;

namespace {

Measure ex41_invariant(const GroundSpace& g) {
  Measure m(g);
  m.add_atom(0, ratio(1, 2)).add_filter(fixtures::eta(g), ratio(1, 2));
  return m;
}

}  // namespace

TEST_CASE("rational parsing and formatting") {
  CHECK(parse_rational("2/4") == ratio(1, 2));
  CHECK(format_rational(parse_rational("2/4")) == "1/2");
  CHECK(format_rational(parse_rational("-3")) == "-3");
  CHECK(format_rational(parse_rational("6/3")) == "2");
  CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
  CHECK_THROWS_AS(parse_rational("0.5"), ParseError);
  CHECK_THROWS_AS(parse_rational(""), ParseError);
  CHECK_THROWS_AS(parse_rational("1/-2"), ParseError);
  CHECK(format_decimal(ratio(1, 3)) == "0.333333333333");
  CHECK(format_decimal(ratio(2, 3)) == "0.666666666667");
  CHECK(format_decimal(ratio(-2, 3)) == "-0.666666666667");
  CHECK(format_decimal(Rational(1)) == "1.000000000000");
  CHECK(format_decimal(ratio(1, 1024), 3) == "0.001");
}

TEST_CASE("eval on the example invariant") {
  const auto g = fixtures::unit();
  const auto mu = ex41_invariant(g);
  CHECK(eval(mu, SetExpr::point(g, 0)) == ratio(1, 2));
  for (long d : {2L, 10L, 1000L}) CHECK(eval(mu, SetExpr::open_interval(g, 0, ratio(1, d))) == ratio(1, 2));
  CHECK(eval(Measure::dirac(g, ratio(1, 3)), SetExpr::full(g)) == 1);
  CHECK(eval(mu, SetExpr::full(g)) == 1);

  const auto z = GroundSpace::integers();
  const auto inf = FilterFunctional::make("etainf", z, TailFamily::GeqThreshold);
  CHECK_FALSE(eval(Measure::of_filter(inf), SetExpr::residue(z, 2, 0)).has_value());
  CHECK(eval(Measure::dirac(z, 4), SetExpr::residue(z, 2, 0)) == 1);
  CHECK_THROWS_AS(eval(mu, SetExpr::full(z)), GroundMismatch);
}

TEST_CASE("yosida_hewitt, combine, norm, is_pfa") {
  const auto g = fixtures::unit();
  const auto eta = fixtures::eta(g);
  Measure m(g);
  m.add_atom(0, ratio(3, 4)).add_filter(eta, ratio(1, 4));
  const auto [ca, pfa] = yosida_hewitt(m);
  CHECK(ca == Measure::dirac(g, 0, ratio(3, 4)));
  CHECK(pfa == Measure::of_filter(eta, ratio(1, 4)));
  const auto split_eta = yosida_hewitt(Measure::of_filter(eta));
  CHECK(split_eta.ca.is_zero());
  CHECK(split_eta.pfa == Measure::of_filter(eta));
  const Measure zero(g);
  CHECK(yosida_hewitt(zero).ca.is_zero());
  CHECK(yosida_hewitt(zero).pfa.is_zero());
  CHECK(classify(zero) == MeasureType::BothTypes);
  CHECK(measure_type_name(classify(zero)) == "both-types");

  CHECK(combine(1, Measure::dirac(g, 0), 1, Measure::dirac(g, 1)).total() == 2);
  CHECK(combine(ratio(1, 2), Measure::dirac(g, 0), ratio(1, 2), Measure::of_filter(eta)) == ex41_invariant(g));
  CHECK(combine(1, m, -1, m).is_zero());

  CHECK(norm(ex41_invariant(g)) == 1);
  CHECK(norm(zero) == 0);
  CHECK(norm(Measure::dirac(g, ratio(1, 5), ratio(1, 3))) == ratio(1, 3));
  CHECK_THROWS_AS(norm(combine(1, Measure::dirac(g, 0), -1, Measure::of_filter(eta))), DomainError);

  CHECK(is_pfa(Measure::of_filter(eta)));
  CHECK_FALSE(is_pfa(Measure::dirac(g, 0)));
  CHECK_FALSE(is_pfa(ex41_invariant(g)));
  CHECK_THROWS_AS(is_pfa(combine(1, Measure::dirac(g, 0), -2, Measure::dirac(g, 1))), DomainError);
  CHECK_THROWS_AS(Measure::dirac(g, 2), GroundMismatch);
}

TEST_CASE("membership predicates") {
  const auto g = fixtures::unit();
  const auto eta = fixtures::eta(g);
  CHECK(in_S(ex41_invariant(g), MeasureFamily::Ba));
  CHECK_FALSE(in_S(ex41_invariant(g), MeasureFamily::Ca));
  CHECK(in_S(Measure::of_filter(eta), MeasureFamily::Pfa));
  CHECK(in_V(Measure::dirac(g, 0, ratio(1, 2)), MeasureFamily::Ca));
  CHECK_FALSE(in_V(Measure::dirac(g, 0, 2), MeasureFamily::Ca));
  CHECK_FALSE(in_V(combine(1, Measure::dirac(g, 0), -1, Measure::dirac(g, 1)), MeasureFamily::Ba));
}

TEST_CASE("measure properties on random measures") {
  const auto g = fixtures::unit();
  const std::vector<FilterFunctional> filters{fixtures::eta(g), FilterFunctional::make("eta1minus", g, TailFamily::RightOfPoint, 1),
                                              FilterFunctional::make("etahalf", g, TailFamily::LeftOfPoint, ratio(1, 2))};
  std::mt19937_64 rng(11);
  auto pick = [&](long n) { return static_cast<long>(rng() % static_cast<unsigned long>(n)); };
  for (int i = 0; i < 200; ++i) {
    Measure mu(g);
    for (int a = 0; a < pick(4); ++a) mu.add_atom(ratio(pick(7), 6), ratio(1 + pick(5), 7));
    for (int f = 0; f < pick(3); ++f) mu.add_filter(filters[static_cast<std::size_t>(pick(3))], ratio(1 + pick(5), 9));
    const auto yh = yosida_hewitt(mu);
    CHECK(combine(1, yh.ca, 1, yh.pfa) == mu);
    CHECK(norm(mu) == norm(yh.ca) + norm(yh.pfa));
    CHECK(is_pfa(yh.pfa));
    for (long k = 0; k <= 12; ++k) CHECK(eval(yh.pfa, SetExpr::point(g, ratio(k, 12))) == 0);
    CHECK(is_pfa(mu) == (mu.atoms().empty()));

    Rational a = ratio(pick(6), 6), b = ratio(pick(6), 6);
    if (b < a) std::swap(a, b);
    const auto e1 = SetExpr::interval(g, {a, b, pick(2) == 0, pick(2) == 0});
    const auto e2 = set_difference(SetExpr::open_interval(g, ratio(1, 3), 1), e1);
    const auto v1 = eval(mu, e1), v2 = eval(mu, e2), vu = eval(mu, set_union(e1, e2));
    REQUIRE(v1.has_value());
    REQUIRE(v2.has_value());
    REQUIRE(vu.has_value());
    CHECK(*vu == *v1 + *v2);
    CHECK(*v1 >= 0);
    CHECK(*v1 <= norm(mu));
  }
}
