#pragma once

#include <cstddef>
#include <vector>

#include "famc/rational.hpp"

namespace famc {

// Dense rational matrix, row-major.
class RationalMatrix {
 public:
  RationalMatrix() = default;
  RationalMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static RationalMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  RationalMatrix operator-(const RationalMatrix& other) const;
  std::vector<Rational> operator*(const std::vector<Rational>& v) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

// Basis of {v : m v = 0} by exact Gauss-Jordan elimination. One vector per
// free column, in increasing column order, with a 1 at its free column.
std::vector<std::vector<Rational>> nullspace(const RationalMatrix& m);

std::size_t rank(const RationalMatrix& m);

}  // namespace famc
