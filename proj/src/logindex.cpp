#include "treedim/logindex.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "treedim/error.hpp"

namespace treedim {

namespace {

std::vector<std::uint64_t> small_prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; d += (d == 2 ? 1 : 2)) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

void divide_out(BigInt &n, std::uint64_t p,
                std::map<std::uint64_t, std::uint64_t> &fac) {
  while (n % p == 0) {
    n /= p;
    ++fac[p];
  }
}

} // namespace

std::map<std::uint64_t, std::uint64_t> factor_integer(BigInt n,
                                                      std::uint64_t hint) {
  if (n <= 0) fail(errc::invalid_argument, "cannot factor a non-positive integer");
  std::map<std::uint64_t, std::uint64_t> fac;
  if (hint > 1)
    for (std::uint64_t p : small_prime_factors(hint)) divide_out(n, p, fac);
  constexpr std::uint64_t kBound = 1'000'000;
  divide_out(n, 2, fac);
  for (std::uint64_t d = 3; d <= kBound && n > 1; d += 2) {
    if (BigInt(d) * d > n) break;
    divide_out(n, d, fac);
  }
  if (n > 1) {
    // after removing all factors <= kBound a cofactor below kBound^2 is prime
    if (n >= BigInt(kBound) * kBound)
      fail(errc::factorization_incomplete,
           "cofactor " + n.str() + " exceeds the trial division range");
    ++fac[n.convert_to<std::uint64_t>()];
  }
  return fac;
}

LogIndex LogIndex::zero(std::uint32_t base) { return LogIndex(base); }

LogIndex LogIndex::of_order(const BigInt &order, std::uint32_t base) {
  LogIndex out(base);
  for (const auto &[p, e] : factor_integer(order, base))
    out.add_term(p, BigRat(e));
  return out;
}

LogIndex LogIndex::one(std::uint32_t base) {
  return of_order(BigInt(base), base);
}

LogIndex LogIndex::log2(std::uint32_t base) {
  LogIndex out(base);
  out.add_term(2, BigRat(1));
  return out;
}

LogIndex LogIndex::of_rational(const BigRat &value, std::uint32_t base) {
  LogIndex out = one(base);
  out *= value;
  return out;
}

void LogIndex::add_term(std::uint64_t p, const BigRat &c) {
  auto it = coeffs_.find(p);
  if (it == coeffs_.end()) {
    if (c != 0) coeffs_.emplace(p, c);
    return;
  }
  it->second += c;
  if (it->second == 0) coeffs_.erase(it);
}

LogIndex &LogIndex::operator+=(const LogIndex &other) {
  if (base_ != other.base_)
    fail(errc::degree_mismatch, "logarithm bases differ");
  for (const auto &[p, c] : other.coeffs_) add_term(p, c);
  return *this;
}

LogIndex &LogIndex::operator-=(const LogIndex &other) {
  if (base_ != other.base_)
    fail(errc::degree_mismatch, "logarithm bases differ");
  for (const auto &[p, c] : other.coeffs_) add_term(p, -c);
  return *this;
}

LogIndex LogIndex::operator-() const {
  LogIndex out(base_);
  for (const auto &[p, c] : coeffs_) out.coeffs_.emplace(p, -c);
  return out;
}

LogIndex &LogIndex::operator*=(const BigRat &c) {
  if (c == 0) {
    coeffs_.clear();
    return *this;
  }
  for (auto &[p, coeff] : coeffs_) coeff *= c;
  return *this;
}

LogIndex operator+(LogIndex a, const LogIndex &b) { return a += b; }
LogIndex operator-(LogIndex a, const LogIndex &b) { return a -= b; }
LogIndex operator*(const BigRat &c, LogIndex a) { return a *= c; }

double LogIndex::to_double() const {
  const double lnm = std::log(static_cast<double>(base_));
  double total = 0.0;
  for (const auto &[p, c] : coeffs_)
    total += c.convert_to<double>() * std::log(static_cast<double>(p)) / lnm;
  return total;
}

std::string LogIndex::str() const {
  if (coeffs_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto &[p, c] : coeffs_) {
    const bool neg = c < 0;
    const BigRat mag = neg ? BigRat(-c) : c;
    if (first)
      os << (neg ? "-" : "");
    else
      os << (neg ? " - " : " + ");
    first = false;
    if (mag != 1) os << mag.str() << "*";
    os << "log" << base_ << "(" << p << ")";
  }
  return os.str();
}

} // namespace treedim
