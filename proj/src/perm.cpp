#include "treedim/perm.hpp"

#include <numeric>

#include "treedim/error.hpp"

namespace treedim {

Perm::Perm(std::size_t degree) : img_(degree) {
  std::iota(img_.begin(), img_.end(), 0u);
}

Perm::Perm(std::vector<std::uint32_t> images) : img_(std::move(images)) {
  std::vector<bool> seen(img_.size(), false);
  for (std::uint32_t p : img_) {
    if (p >= img_.size() || seen[p])
      fail(errc::not_a_permutation, "image table is not a bijection");
    seen[p] = true;
  }
}

bool Perm::is_identity() const {
  for (std::uint32_t p = 0; p < img_.size(); ++p)
    if (img_[p] != p)
      return false;
  return true;
}

Perm Perm::inverse() const {
  Perm r;
  r.img_.resize(img_.size());
  for (std::uint32_t p = 0; p < img_.size(); ++p)
    r.img_[img_[p]] = p;
  return r;
}

std::vector<std::uint32_t> Perm::cycle_lengths() const {
  std::vector<std::uint32_t> lens;
  std::vector<bool> seen(img_.size(), false);
  for (std::uint32_t p = 0; p < img_.size(); ++p) {
    if (seen[p])
      continue;
    std::uint32_t len = 0, q = p;
    while (!seen[q]) {
      seen[q] = true;
      q = img_[q];
      ++len;
    }
    lens.push_back(len);
  }
  return lens;
}

BigInt Perm::order() const {
  BigInt ord = 1;
  for (std::uint32_t len : cycle_lengths())
    ord = boost::multiprecision::lcm(ord, BigInt(len));
  return ord;
}

std::string Perm::str() const {
  std::string s;
  std::vector<bool> seen(img_.size(), false);
  for (std::uint32_t p = 0; p < img_.size(); ++p) {
    if (seen[p] || img_[p] == p)
      continue;
    s += '(';
    std::uint32_t q = p;
    while (!seen[q]) {
      seen[q] = true;
      s += std::to_string(q);
      q = img_[q];
      if (!seen[q])
        s += ' ';
    }
    s += ')';
  }
  return s.empty() ? "()" : s;
}

Perm operator*(const Perm &a, const Perm &b) {
  Perm r;
  compose_into(r, a, b);
  return r;
}

void compose_into(Perm &out, const Perm &a, const Perm &b) {
  if (a.degree() != b.degree())
    fail(errc::degree_mismatch, "composing permutations of degrees " +
                                    std::to_string(a.degree()) + " and " +
                                    std::to_string(b.degree()));
  // out may alias a or b, so build into a scratch table first.
  std::vector<std::uint32_t> img(a.degree());
  const auto &ia = a.images(), &ib = b.images();
  for (std::uint32_t p = 0; p < img.size(); ++p)
    img[p] = ib[ia[p]];
  out.img_ = std::move(img);
}

Perm perm_power(const Perm &g, const BigInt &e) {
  BigInt k = e;
  Perm base = g;
  if (k < 0) {
    base = g.inverse();
    k = -k;
  }
  Perm acc = Perm::identity(g.degree());
  while (k > 0) {
    if ((k & 1) != 0)
      acc = acc * base;
    base = base * base;
    k >>= 1;
  }
  return acc;
}

} // namespace treedim
