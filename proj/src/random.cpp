#include "famc/random.hpp"

#include <algorithm>
#include <array>
#include <string>

namespace famc {

namespace {

std::size_t below(Rng& rng, std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }

bool coin(Rng& rng, unsigned num = 1, unsigned den = 2) { return below(rng, den) < num; }

// Integer weights in [0, 4] with a positive sum, rescaled to `mass`.
std::vector<Rational> split_mass(Rng& rng, std::size_t parts, const Rational& mass) {
  std::vector<long> w(parts);
  long sum = 0;
  for (auto& x : w) sum += (x = static_cast<long>(below(rng, 5)));
  if (sum == 0) {
    w[below(rng, parts)] = 1;
    sum = 1;
  }
  std::vector<Rational> out;
  for (long x : w) out.push_back(mass * ratio(x, sum));
  return out;
}

}  // namespace

std::uint64_t instance_seed(std::uint64_t seed, std::uint64_t i) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i >> 32)};
  std::array<std::uint32_t, 2> out{};
  seq.generate(out.begin(), out.end());
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

Rational random_q1(Rng& rng) {
  static const std::array<Rational, 5> menu{ratio(1, 4), ratio(1, 3), ratio(1, 2), ratio(2, 3), ratio(3, 4)};
  return menu[below(rng, menu.size())];
}

std::vector<Rational> random_atoms(Rng& rng, std::size_t min_count, std::size_t max_count) {
  const std::size_t n = min_count + below(rng, max_count - min_count + 1);
  std::vector<long> grid(25);
  for (long k = 0; k <= 24; ++k) grid[static_cast<std::size_t>(k)] = k;
  std::shuffle(grid.begin(), grid.end(), rng);
  std::vector<Rational> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(ratio(grid[i], 24));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<FilterFunctional> random_filters(Rng& rng, const GroundSpace& g, std::size_t max_count) {
  struct Candidate {
    TailFamily family;
    Rational point;
  };
  std::vector<Candidate> pool{{TailFamily::LeftOfPoint, 0}, {TailFamily::RightOfPoint, 1}};
  for (const auto& p : {ratio(1, 4), ratio(1, 3), ratio(1, 2), ratio(2, 3), ratio(3, 4)}) {
    pool.push_back({TailFamily::LeftOfPoint, p});
    pool.push_back({TailFamily::RightOfPoint, p});
  }
  std::shuffle(pool.begin(), pool.end(), rng);
  // η₀₊ is the first filter half of the time.
  if (coin(rng)) {
    auto it = std::find_if(pool.begin(), pool.end(),
                           [](const Candidate& c) { return c.family == TailFamily::LeftOfPoint && c.point == 0; });
    std::iter_swap(pool.begin(), it);
  }
  const std::size_t n = 1 + below(rng, max_count);
  std::vector<FilterFunctional> out;
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(FilterFunctional::make("f" + std::to_string(i + 1), g, pool[i].family, pool[i].point));
  }
  return out;
}

std::vector<SetExpr> random_partition(Rng& rng, const GroundSpace& g, const std::vector<Rational>& atoms) {
  std::vector<long> grid;
  for (long k = 1; k < 12; ++k) grid.push_back(k);
  std::shuffle(grid.begin(), grid.end(), rng);
  std::vector<Rational> cuts;
  const std::size_t m = below(rng, 4);
  for (std::size_t i = 0; i < m; ++i) cuts.push_back(ratio(grid[i], 12));
  std::sort(cuts.begin(), cuts.end());

  struct Segment {
    SetExpr set;
    std::vector<Rational> carved;
  };
  std::vector<Segment> segments;
  Rational lo = 0;
  bool lo_open = false;
  for (const auto& c : cuts) {
    const bool cut_goes_left = coin(rng);
    segments.push_back({SetExpr::interval(g, {lo, c, lo_open, !cut_goes_left}), {}});
    lo = c;
    lo_open = cut_goes_left;
  }
  segments.push_back({SetExpr::interval(g, {lo, Rational(1), lo_open, false}), {}});

  std::vector<SetExpr> pieces;
  for (const auto& x : atoms) {
    if (!coin(rng, 1, 3)) continue;
    for (auto& s : segments) {
      if (s.set.contains(x)) {
        s.carved.push_back(x);
        pieces.push_back(SetExpr::point(g, x));
        break;
      }
    }
  }
  for (auto& s : segments) {
    pieces.push_back(s.carved.empty() ? s.set : set_difference(s.set, SetExpr::points(g, s.carved)));
  }
  return pieces;
}

Measure random_atomic(Rng& rng, const GroundSpace& g, const std::vector<Rational>& atoms, const Rational& mass) {
  Measure m(g);
  if (mass == 0 || atoms.empty()) return m;
  const auto w = split_mass(rng, atoms.size(), mass);
  for (std::size_t i = 0; i < atoms.size(); ++i) m.add_atom(atoms[i], w[i]);
  return m;
}

Measure random_pfa(Rng& rng, const std::vector<FilterFunctional>& filters, const Rational& mass) {
  Measure m(filters.front().ground());
  if (mass == 0) return m;
  const auto w = split_mass(rng, filters.size(), mass);
  for (std::size_t i = 0; i < filters.size(); ++i) m.add_filter(filters[i], w[i]);
  return m;
}

namespace {

RandomChain chain_skeleton(Rng& rng) {
  auto g = GroundSpace::unit_interval();
  auto atoms = random_atoms(rng, 3, 8);
  auto filters = random_filters(rng, g, 2);
  return RandomChain{g, std::move(atoms), std::move(filters), 0, Kernel(g, {})};
}

bool carries_tails(const SetExpr& piece, const std::vector<FilterFunctional>& filters) {
  return std::any_of(filters.begin(), filters.end(),
                     [&](const FilterFunctional& f) { return filter_eval(f, piece) == Decision::One; });
}

}  // namespace

RandomChain random_combined_chain(Rng& rng, HMode mode) {
  RandomChain chain = chain_skeleton(rng);
  chain.q1 = random_q1(rng);
  const Rational q2 = 1 - chain.q1;
  std::vector<KernelRule> rules;
  for (auto& piece : random_partition(rng, chain.ground, chain.atoms)) {
    const bool carries = carries_tails(piece, chain.filters);
    Rational diagonal;
    if (carries && mode == HMode::H1) {
      diagonal = 0;
    } else if (carries && mode == HMode::H2) {
      diagonal = chain.q1;
    } else {
      switch (below(rng, 3)) {
        case 0: diagonal = 0; break;
        case 1: diagonal = chain.q1; break;
        default: diagonal = chain.q1 * ratio(static_cast<long>(1 + below(rng, 3)), 4); break;
      }
    }
    Row row(chain.ground);
    row.add_shift(0, diagonal);
    row.constant = random_atomic(rng, chain.ground, chain.atoms, chain.q1 - diagonal);
    row.constant.add(1, random_pfa(rng, chain.filters, q2));
    rules.push_back({std::move(piece), std::move(row)});
  }
  chain.kernel = Kernel(chain.ground, std::move(rules));
  return chain;
}

RandomChain random_pfa_chain(Rng& rng, bool markov) {
  RandomChain chain = chain_skeleton(rng);
  std::vector<KernelRule> rules;
  for (auto& piece : random_partition(rng, chain.ground, chain.atoms)) {
    const Rational mass = markov ? Rational(1) : ratio(static_cast<long>(1 + below(rng, 4)), 4);
    Row row(chain.ground);
    row.constant = random_pfa(rng, chain.filters, mass);
    rules.push_back({std::move(piece), std::move(row)});
  }
  chain.kernel = Kernel(chain.ground, std::move(rules));
  return chain;
}

Measure random_measure(Rng& rng, const RandomChain& chain, MeasureShape shape, const Rational& mass) {
  std::vector<Rational> pool = chain.atoms;
  pool.push_back(ratio(static_cast<long>(below(rng, 49)), 48));
  std::sort(pool.begin(), pool.end());
  pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
  switch (shape) {
    case MeasureShape::Atomic: return random_atomic(rng, chain.ground, pool, mass);
    case MeasureShape::Pfa: return random_pfa(rng, chain.filters, mass);
    case MeasureShape::Mixed: break;
  }
  const Rational share = ratio(static_cast<long>(1 + below(rng, 3)), 4);
  Measure m = random_atomic(rng, chain.ground, pool, mass * share);
  m.add(1, random_pfa(rng, chain.filters, mass * (1 - share)));
  return m;
}

std::vector<Measure> random_battery(Rng& rng, const RandomChain& chain, std::size_t count) {
  static const std::array<Rational, 4> masses{Rational(1), ratio(1, 2), ratio(3, 4), ratio(1, 3)};
  std::vector<Measure> out;
  for (std::size_t i = 0; i < count; ++i) {
    const auto shape = static_cast<MeasureShape>(i % 3);
    out.push_back(random_measure(rng, chain, shape, masses[(i / 3) % masses.size()]));
  }
  return out;
}

RandomMatrixChain random_matrix_chain(Rng& rng, std::size_t max_states) {
  const std::size_t n = 2 + below(rng, max_states - 1);
  std::vector<Rational> pts;
  for (std::size_t i = 0; i < n; ++i) pts.push_back(Rational(static_cast<long>(i)));
  auto g = GroundSpace::finite("F", pts);
  std::vector<std::vector<Rational>> matrix(n, std::vector<Rational>(n));
  std::vector<KernelRule> rules;
  for (std::size_t i = 0; i < n; ++i) {
    if (coin(rng, 1, 6)) {
      matrix[i][i] = 1;
    } else {
      std::vector<long> w(n);
      long sum = 0;
      for (auto& x : w) sum += (x = coin(rng) ? 0 : static_cast<long>(1 + below(rng, 3)));
      if (sum == 0) {
        w[below(rng, n)] = 1;
        sum = 1;
      }
      for (std::size_t j = 0; j < n; ++j) matrix[i][j] = ratio(w[j], sum);
    }
    Row row(g);
    for (std::size_t j = 0; j < n; ++j) row.constant.add_atom(pts[j], matrix[i][j]);
    rules.push_back({SetExpr::point(g, pts[i]), std::move(row)});
  }
  return RandomMatrixChain{g, std::move(matrix), Kernel(g, std::move(rules))};
}

}  // namespace famc
