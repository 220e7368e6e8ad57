#include "famc/linalg.hpp"

#include <utility>

namespace famc {

namespace {

// Reduced row echelon form in place; returns the pivot column of each
// pivot row.
std::vector<std::size_t> rref(RationalMatrix& a) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < a.cols() && row < a.rows(); ++col) {
    std::size_t p = row;
    while (p < a.rows() && a(p, col) == 0) ++p;
    if (p == a.rows()) continue;
    if (p != row) {
      for (std::size_t c = 0; c < a.cols(); ++c) std::swap(a(p, c), a(row, c));
    }
    const Rational inv = 1 / a(row, col);
    for (std::size_t c = col; c < a.cols(); ++c) a(row, c) *= inv;
    for (std::size_t r = 0; r < a.rows(); ++r) {
      if (r == row || a(r, col) == 0) continue;
      const Rational factor = a(r, col);
      for (std::size_t c = col; c < a.cols(); ++c) a(r, c) -= factor * a(row, c);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

}  // namespace

RationalMatrix RationalMatrix::identity(std::size_t n) {
  RationalMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

RationalMatrix RationalMatrix::operator-(const RationalMatrix& other) const {
  RationalMatrix out = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] -= other.data_[i];
  return out;
}

std::vector<Rational> RationalMatrix::operator*(const std::vector<Rational>& v) const {
  std::vector<Rational> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) out[r] += (*this)(r, c) * v[c];
  }
  return out;
}

std::vector<std::vector<Rational>> nullspace(const RationalMatrix& m) {
  RationalMatrix a = m;
  const auto pivots = rref(a);
  std::vector<bool> is_pivot(a.cols(), false);
  for (auto c : pivots) is_pivot[c] = true;
  std::vector<std::vector<Rational>> basis;
  for (std::size_t free = 0; free < a.cols(); ++free) {
    if (is_pivot[free]) continue;
    std::vector<Rational> v(a.cols());
    v[free] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -a(i, free);
    basis.push_back(std::move(v));
  }
  return basis;
}

std::size_t rank(const RationalMatrix& m) {
  RationalMatrix a = m;
  return rref(a).size();
}

}  // namespace famc
