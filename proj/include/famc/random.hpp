#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "famc/filter.hpp"
#include "famc/kernel.hpp"
#include "famc/measure.hpp"

namespace famc {

using Rng = std::mt19937_64;

// Seed of instance i of a run seeded with `seed`; independent of the order
// instances are executed in.
std::uint64_t instance_seed(std::uint64_t seed, std::uint64_t i);

// Random combined chains on the unit rationals, following the generator the
// suites are specified against: 3-8 atoms, 1-2 filters, q1 from a fixed menu.
struct RandomChain {
  GroundSpace ground;
  std::vector<Rational> atoms;
  std::vector<FilterFunctional> filters;
  Rational q1;
  Kernel kernel;
};

// Where the ca part may put a diagonal term. H1: never on pieces carrying
// filter tails (so A_ca maps filters to atoms). H2: only a diagonal there
// (so A_ca maps filters to filters). Free: anywhere.
enum class HMode { H1, H2, Free };

Rational random_q1(Rng& rng);
std::vector<Rational> random_atoms(Rng& rng, std::size_t min_count, std::size_t max_count);
std::vector<FilterFunctional> random_filters(Rng& rng, const GroundSpace& g, std::size_t max_count);
// Interval pieces with random cuts, some atoms carved out as singleton pieces.
std::vector<SetExpr> random_partition(Rng& rng, const GroundSpace& g, const std::vector<Rational>& atoms);

// `mass` split into a random nonnegative combination over the atoms.
Measure random_atomic(Rng& rng, const GroundSpace& g, const std::vector<Rational>& atoms, const Rational& mass);
Measure random_pfa(Rng& rng, const std::vector<FilterFunctional>& filters, const Rational& mass);

RandomChain random_combined_chain(Rng& rng, HMode mode);
// Rows purely pfa; Markov when `markov`, otherwise row masses in (0,1].
RandomChain random_pfa_chain(Rng& rng, bool markov);

enum class MeasureShape { Atomic, Pfa, Mixed };
// A nonnegative measure of total mass `mass` over the chain's atoms and filters.
Measure random_measure(Rng& rng, const RandomChain& chain, MeasureShape shape, const Rational& mass);
// Ten or so elements of V_ba covering all three shapes.
std::vector<Measure> random_battery(Rng& rng, const RandomChain& chain, std::size_t count);

// A random stochastic matrix on {0, ..., n-1} and its kernel.
struct RandomMatrixChain {
  GroundSpace ground;
  std::vector<std::vector<Rational>> matrix;
  Kernel kernel;
};
RandomMatrixChain random_matrix_chain(Rng& rng, std::size_t max_states);

}  // namespace famc
