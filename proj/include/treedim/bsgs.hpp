#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "treedim/bigint.hpp"
#include "treedim/perm.hpp"

namespace treedim {

// Deterministic Schreier-Sims stabilizer chain. Base points are chosen
// greedily as the smallest point moved by the residue that created the
// level; transversals are materialized in both directions so sifting is one
// composition per level. Everything is deterministic for fixed input order.
class StabilizerChain {
public:
  explicit StabilizerChain(std::size_t degree);

  std::size_t degree() const { return degree_; }
  void add_generator(const Perm &g); // no-op for the identity

  bool contains(const Perm &g) const;
  BigInt order() const;
  std::vector<std::uint32_t> base() const;
  std::vector<Perm> strong_generators() const;

  // Chain for the direct product of `blocks` disjoint copies of `factor`,
  // the copy for block c acting on points [c*d, (c+1)*d). Assembled by
  // embedding the factor chain per block; no Schreier-Sims work happens.
  static StabilizerChain block_product(const StabilizerChain &factor,
                                       std::uint32_t blocks);

private:
  struct Level {
    std::uint32_t beta = 0;
    std::vector<Perm> gens, gen_invs;
    std::vector<std::uint32_t> orbit;   // BFS order, orbit[0] == beta
    std::vector<std::int32_t> orbit_pos; // degree-sized, -1 if absent
    std::vector<Perm> reps, inv_reps;   // aligned with orbit
    // closure/enqueue watermarks: the (points x gens) rectangle below these
    // marks has been expanded / queued already
    std::size_t exp_points = 0, exp_gens = 0;
    std::size_t q_points = 0, q_gens = 0;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pending;
  };

  void push_level(std::uint32_t beta);
  void extend_orbit(std::size_t li);
  void enqueue_pairs(std::size_t li);
  // Sift through levels [from, end); returns residue and stop level.
  std::pair<Perm, std::size_t> sift_from(Perm h, std::size_t from) const;
  void complete();

  std::size_t degree_;
  std::vector<Level> levels_;
  bool frozen_ = false; // block products are complete and immutable
};

// Immutable permutation group handle backed by a stabilizer chain.
class PermGroup {
public:
  // EmptyDegree unless at least one generator fixes the degree.
  static PermGroup from_generators(const std::vector<Perm> &gens);
  static PermGroup from_generators(std::size_t degree,
                                   const std::vector<Perm> &gens);
  static PermGroup trivial(std::size_t degree);

  std::size_t degree() const { return degree_; }
  const std::vector<Perm> &generators() const { return gens_; }
  const BigInt &order() const { return order_; }
  bool is_trivial() const { return order_ == 1; }

  bool contains(const Perm &g) const;
  std::vector<std::uint32_t> base() const;
  std::vector<Perm> strong_generators() const;

  std::vector<std::uint32_t> orbit(std::uint32_t point) const;
  bool is_transitive() const;

  // |this : sub|; NotASubgroup / NonDividingOrder on violation.
  BigInt index_of(const PermGroup &sub) const;

  // Smallest normal subgroup containing the seeds; seeds must lie in the
  // group (ElementNotInGroup).
  PermGroup normal_closure(const std::vector<Perm> &seeds) const;
  PermGroup derived_subgroup() const;

  // Direct product of `blocks` copies of `factor` on disjoint point blocks.
  static PermGroup block_product(const PermGroup &factor, std::uint32_t blocks);

private:
  PermGroup(std::size_t degree, std::vector<Perm> gens,
            std::shared_ptr<const StabilizerChain> chain);

  std::size_t degree_;
  std::vector<Perm> gens_;
  std::shared_ptr<const StabilizerChain> chain_;
  BigInt order_;
};

BigInt element_order(const Perm &g);

// Least t >= 1 with g^t in N, for g in G and N normal in G; found by testing
// divisors of element_order(g) in increasing order. Errors: ElementNotInGroup
// if g (or a seed of N) is outside G, NotNormal if conjugation by G's
// generators leaves N.
BigInt order_mod_subgroup(const Perm &g, const PermGroup &N, const PermGroup &G);

} // namespace treedim
