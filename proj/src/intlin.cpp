#include "treedim/intlin.hpp"

#include <string>

#include "treedim/error.hpp"

namespace treedim {

using boost::multiprecision::abs;
using boost::multiprecision::gcd;

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    m.at(i, i) = 1;
  return m;
}

IntMatrix operator*(const IntMatrix &a, const IntMatrix &b) {
  if (a.cols() != b.rows())
    fail(errc::dimension_mismatch, "matrix product shape mismatch");
  IntMatrix r(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (a.at(i, k) == 0)
        continue;
      for (std::size_t j = 0; j < b.cols(); ++j)
        r.at(i, j) += a.at(i, k) * b.at(k, j);
    }
  return r;
}

IntMatrix build_matrix_A(std::uint32_t m) {
  if (m < 2)
    fail(errc::invalid_argument, "alphabet size must be at least 2");
  IntMatrix A(m - 1, m);
  A.at(0, 0) = 1;
  A.at(0, m - 1) = -1;
  for (std::size_t i = 1; i < static_cast<std::size_t>(m) - 1; ++i) {
    A.at(i, i - 1) = -1;
    A.at(i, i) = 1;
  }
  return A;
}

namespace {

struct SnfWork {
  IntMatrix S, U, V;

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b)
      return;
    for (std::size_t j = 0; j < S.cols(); ++j)
      std::swap(S.at(a, j), S.at(b, j));
    for (std::size_t j = 0; j < U.cols(); ++j)
      std::swap(U.at(a, j), U.at(b, j));
  }
  void swap_cols(std::size_t a, std::size_t b) {
    if (a == b)
      return;
    for (std::size_t i = 0; i < S.rows(); ++i)
      std::swap(S.at(i, a), S.at(i, b));
    for (std::size_t i = 0; i < V.rows(); ++i)
      std::swap(V.at(i, a), V.at(i, b));
  }
  void add_row(std::size_t dst, std::size_t src, const BigInt &c) { // row dst += c*src
    for (std::size_t j = 0; j < S.cols(); ++j)
      S.at(dst, j) += c * S.at(src, j);
    for (std::size_t j = 0; j < U.cols(); ++j)
      U.at(dst, j) += c * U.at(src, j);
  }
  void add_col(std::size_t dst, std::size_t src, const BigInt &c) { // col dst += c*src
    for (std::size_t i = 0; i < S.rows(); ++i)
      S.at(i, dst) += c * S.at(i, src);
    for (std::size_t i = 0; i < V.rows(); ++i)
      V.at(i, dst) += c * V.at(i, src);
  }
  void negate_row(std::size_t r) {
    for (std::size_t j = 0; j < S.cols(); ++j)
      S.at(r, j) = -S.at(r, j);
    for (std::size_t j = 0; j < U.cols(); ++j)
      U.at(r, j) = -U.at(r, j);
  }
};

} // namespace

SmithResult smith_normal_form(const IntMatrix &M) {
  SnfWork w{M, IntMatrix::identity(M.rows()), IntMatrix::identity(M.cols())};
  const std::size_t n = std::min(M.rows(), M.cols());

  for (std::size_t t = 0; t < n; ++t) {
    for (;;) {
      // smallest nonzero |entry| in the trailing submatrix
      std::size_t pi = t, pj = t;
      BigInt best = 0;
      for (std::size_t i = t; i < w.S.rows(); ++i)
        for (std::size_t j = t; j < w.S.cols(); ++j) {
          const BigInt a = abs(w.S.at(i, j));
          if (a != 0 && (best == 0 || a < best)) {
            best = a;
            pi = i;
            pj = j;
          }
        }
      if (best == 0)
        goto done; // trailing submatrix is zero
      w.swap_rows(t, pi);
      w.swap_cols(t, pj);
      if (w.S.at(t, t) < 0)
        w.negate_row(t);

      bool clean = true;
      for (std::size_t i = t + 1; i < w.S.rows(); ++i)
        if (w.S.at(i, t) != 0) {
          w.add_row(i, t, -(w.S.at(i, t) / w.S.at(t, t)));
          clean = clean && w.S.at(i, t) == 0;
        }
      for (std::size_t j = t + 1; j < w.S.cols(); ++j)
        if (w.S.at(t, j) != 0) {
          w.add_col(j, t, -(w.S.at(t, j) / w.S.at(t, t)));
          clean = clean && w.S.at(t, j) == 0;
        }
      if (!clean)
        continue; // remainders left; re-pick a smaller pivot

      // divisibility fix-up: pivot must divide the rest of the submatrix
      bool divides = true;
      for (std::size_t i = t + 1; i < w.S.rows() && divides; ++i)
        for (std::size_t j = t + 1; j < w.S.cols() && divides; ++j)
          if (w.S.at(i, j) % w.S.at(t, t) != 0) {
            w.add_row(t, i, 1);
            divides = false;
          }
      if (divides)
        break;
    }
  }
done:

  if (w.S.rows() <= 6 && w.S.cols() <= 6) {
    if (abs(determinant(w.U)) != 1 || abs(determinant(w.V)) != 1)
      fail(errc::invalid_argument, "transform matrices are not unimodular");
  }
  return SmithResult{std::move(w.S), std::move(w.U), std::move(w.V)};
}

bool row_space_contains_mod(const IntMatrix &M, const std::vector<BigInt> &v,
                            const BigInt &q) {
  if (v.size() != M.cols())
    fail(errc::dimension_mismatch, "vector length " + std::to_string(v.size()) +
                                       " does not match " +
                                       std::to_string(M.cols()) + " columns");
  if (q < 2)
    fail(errc::bad_modulus, "modulus must be at least 2");

  // x M = v (mod q)  <=>  y S = v V (mod q) with y = x U^-1 free over Z,
  // so each coordinate needs gcd(d_j, q) | (v V)_j.
  SmithResult snf = smith_normal_form(M);
  for (std::size_t j = 0; j < M.cols(); ++j) {
    BigInt wj = 0;
    for (std::size_t i = 0; i < M.cols(); ++i)
      wj += v[i] * snf.V.at(i, j);
    const BigInt d = j < M.rows() ? snf.S.at(j, j) : BigInt(0);
    const BigInt g = gcd(d, q); // gcd(0, q) == q
    if (wj % g != 0)
      return false;
  }
  return true;
}

BigInt determinant(const IntMatrix &M) {
  if (M.rows() != M.cols())
    fail(errc::dimension_mismatch, "determinant of a non-square matrix");
  const std::size_t n = M.rows();
  if (n == 0)
    return 1;
  IntMatrix a = M;
  BigInt sign = 1, prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a.at(k, k) == 0) {
      std::size_t swap_row = k + 1;
      while (swap_row < n && a.at(swap_row, k) == 0)
        ++swap_row;
      if (swap_row == n)
        return 0;
      for (std::size_t j = 0; j < n; ++j)
        std::swap(a.at(k, j), a.at(swap_row, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j)
        a.at(i, j) = (a.at(i, j) * a.at(k, k) - a.at(i, k) * a.at(k, j)) / prev;
    prev = a.at(k, k);
  }
  return sign * a.at(n - 1, n - 1);
}

} // namespace treedim
