#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "treedim/bigint.hpp"

namespace treedim {

// Permutation of {0,...,degree-1} as an image table, acting on the right:
// the image of p is img[p]. Composition is in action order, so (a * b)
// applies a first, then b.
class Perm {
public:
  Perm() = default;
  explicit Perm(std::size_t degree);               // identity
  explicit Perm(std::vector<std::uint32_t> images); // validated

  static Perm identity(std::size_t degree) { return Perm(degree); }

  std::size_t degree() const { return img_.size(); }
  std::uint32_t operator[](std::uint32_t p) const { return img_[p]; }
  const std::vector<std::uint32_t> &images() const { return img_; }

  bool is_identity() const;
  Perm inverse() const;
  BigInt order() const; // lcm of cycle lengths
  std::vector<std::uint32_t> cycle_lengths() const;

  bool operator==(const Perm &) const = default;

  std::string str() const; // cycle notation, 0-based points

private:
  friend void compose_into(Perm &out, const Perm &a, const Perm &b);

  std::vector<std::uint32_t> img_;
};

Perm operator*(const Perm &a, const Perm &b);

// out = a * b without reallocating out when degrees already match.
void compose_into(Perm &out, const Perm &a, const Perm &b);

Perm perm_power(const Perm &g, const BigInt &e);

} // namespace treedim
