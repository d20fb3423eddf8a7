#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "treedim/bigint.hpp"

namespace treedim {

// Exact value of the form sum_p e_p * log_m(p) over primes p with rational
// coefficients e_p. Constructed from group orders (whose prime factors are
// found by trial division) so that logarithmic indices subtract exactly.
class LogIndex {
public:
  static LogIndex zero(std::uint32_t base);
  static LogIndex one(std::uint32_t base);       // log_m m = 1
  static LogIndex log2(std::uint32_t base);      // log_m 2
  static LogIndex of_order(const BigInt &order, std::uint32_t base);
  static LogIndex of_rational(const BigRat &value, std::uint32_t base);

  std::uint32_t base() const { return base_; }
  const std::map<std::uint64_t, BigRat> &coeffs() const { return coeffs_; }
  bool is_zero() const { return coeffs_.empty(); }

  LogIndex &operator+=(const LogIndex &other);
  LogIndex &operator-=(const LogIndex &other);
  LogIndex operator-() const;
  LogIndex &operator*=(const BigRat &c);

  bool operator==(const LogIndex &) const = default;

  double to_double() const;
  // "a*logM(p)" terms joined with +/-; "0" when empty. Exact and comma-free.
  std::string str() const;

private:
  explicit LogIndex(std::uint32_t base) : base_(base) {}
  void add_term(std::uint64_t p, const BigRat &c);

  std::uint32_t base_ = 2;
  std::map<std::uint64_t, BigRat> coeffs_;
};

LogIndex operator+(LogIndex a, const LogIndex &b);
LogIndex operator-(LogIndex a, const LogIndex &b);
LogIndex operator*(const BigRat &c, LogIndex a);

// Prime factorization by trial division; primes of `hint` are tried first
// (orders of subgroups of the m-adic tree group are m-smooth).
// FactorizationIncomplete if a cofactor above the trial bound survives.
std::map<std::uint64_t, std::uint64_t> factor_integer(BigInt n,
                                                      std::uint64_t hint = 0);

} // namespace treedim
