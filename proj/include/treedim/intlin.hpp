#pragma once

#include <cstddef>
#include <vector>

#include "treedim/bigint.hpp"

namespace treedim {

class IntMatrix {
public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), e_(rows * cols, 0) {}

  static IntMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  BigInt &at(std::size_t i, std::size_t j) { return e_[i * cols_ + j]; }
  const BigInt &at(std::size_t i, std::size_t j) const {
    return e_[i * cols_ + j];
  }

  bool operator==(const IntMatrix &) const = default;

private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<BigInt> e_;
};

IntMatrix operator*(const IntMatrix &a, const IntMatrix &b);

// Exponent matrix of the images of the conjugated commutator generators in
// the top quotient of the branching subgroup: (m-1) x m, first row
// (1, 0, ..., 0, -1), row i >= 2 with -1 in column i-1 and +1 in column i.
IntMatrix build_matrix_A(std::uint32_t m);

// S = U * M * V with U, V unimodular and S diagonal, each diagonal entry
// nonnegative and dividing the next. Pivoting picks the smallest nonzero
// absolute value. Unimodularity of U and V is asserted for sizes <= 6.
struct SmithResult {
  IntMatrix S, U, V;
};
SmithResult smith_normal_form(const IntMatrix &M);

// Whether some integer row vector x satisfies x * M = v (mod q); decided
// through the Smith normal form, never by Gaussian elimination mod q.
bool row_space_contains_mod(const IntMatrix &M, const std::vector<BigInt> &v,
                            const BigInt &q);

BigInt determinant(const IntMatrix &M); // Bareiss, exact

} // namespace treedim
