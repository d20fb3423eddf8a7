#include "doctest.h"

#include <random>
#include <vector>

#include "oracles.hpp"
#include "treedim/bsgs.hpp"
#include "treedim/dimension.hpp"
#include "treedim/error.hpp"
#include "treedim/tree.hpp"

using namespace treedim;

namespace {

Perm rotation(std::uint32_t m) {
  std::vector<std::uint32_t> img(m);
  for (std::uint32_t x = 0; x < m; ++x)
    img[x] = (x + 1) % m;
  return Perm{std::move(img)};
}

Perm transposition(std::size_t degree, std::uint32_t i, std::uint32_t j) {
  std::vector<std::uint32_t> img(degree);
  for (std::uint32_t x = 0; x < degree; ++x)
    img[x] = x;
  img[i] = j;
  img[j] = i;
  return Perm{std::move(img)};
}

PermGroup sym4() {
  return PermGroup::from_generators(
      {transposition(4, 0, 1), rotation(4)});
}

std::vector<Perm> bsv_level_gens(std::uint32_t m, std::uint32_t n) {
  const AutomatonPtr aut = AutomatonSpec::bsv(m);
  return {Element::parse(aut, "a").level_perm(n),
          Element::parse(aut, "b").level_perm(n)};
}

} // namespace

TEST_CASE("cyclic and symmetric baseline orders") {
  for (std::uint32_t m : {2u, 3u, 5u, 7u}) {
    const PermGroup c = PermGroup::from_generators({rotation(m)});
    CHECK(c.order() == m);
    CHECK(c.is_transitive());
  }
  const PermGroup s4 = sym4();
  CHECK(s4.order() == 24);
  CHECK(s4.contains(transposition(4, 1, 3)));
  CHECK(s4.base().size() >= 2);
}

TEST_CASE("cyclic groups of odd prime degree contain no transposition") {
  for (std::uint32_t m : {3u, 5u, 7u})
    CHECK_FALSE(
        PermGroup::from_generators({rotation(m)}).contains(
            transposition(m, 0, 1)));
}

TEST_CASE("membership agrees with products of generators") {
  std::mt19937 rng(20240816);
  const PermGroup g = PermGroup::from_generators(
      {rotation(6), transposition(6, 0, 1) * transposition(6, 2, 3)});
  std::uniform_int_distribution<std::size_t> pick(0, 1);
  for (int trial = 0; trial < 80; ++trial) {
    Perm w = Perm::identity(6);
    for (int i = 0; i < 7; ++i)
      w = w * g.generators()[pick(rng)];
    CHECK(g.contains(w));
  }
  CHECK(g.contains(Perm::identity(6)));
}

TEST_CASE("bsgs orders equal brute-force closure sizes for ten small groups") {
  // Level actions of the two-generator branching group plus full level
  // groups; all of them fit in a 5000-element enumeration.
  for (auto [m, n] : {std::pair<std::uint32_t, std::uint32_t>{2, 1},
                      {2, 2},
                      {2, 3},
                      {3, 1},
                      {3, 2}}) {
    const std::vector<Perm> gens = bsv_level_gens(m, n);
    const std::uint64_t slow = oracle::closure_size(gens);
    REQUIRE(slow != 0);
    CHECK(PermGroup::from_generators(gens).order() == slow);
  }
  for (auto [m, n] : {std::pair<std::uint32_t, std::uint32_t>{2, 1},
                      {2, 2},
                      {2, 3},
                      {3, 1},
                      {3, 2}}) {
    const PermGroup g = gamma_level_group(m, n);
    const std::uint64_t slow = oracle::closure_size(g.generators());
    REQUIRE(slow != 0);
    CHECK(g.order() == slow);
  }
}

TEST_CASE("derived subgroup of the symmetric group is alternating") {
  const PermGroup d = sym4().derived_subgroup();
  CHECK(d.order() == 12);
  CHECK_FALSE(d.contains(transposition(4, 0, 1)));
  CHECK(d.derived_subgroup().order() == 4); // Klein four group
}

TEST_CASE("normal closure grows a seed to the full conjugacy span") {
  const PermGroup s4 = sym4();
  const PermGroup v4 =
      s4.normal_closure({transposition(4, 0, 1) * transposition(4, 2, 3)});
  CHECK(v4.order() == 4);
  const PermGroup a4 =
      s4.normal_closure({Perm{std::vector<std::uint32_t>{1, 2, 0, 3}}});
  CHECK(a4.order() == 12);
}

TEST_CASE("subgroup index and element orders") {
  const PermGroup s4 = sym4();
  const PermGroup a4 = s4.derived_subgroup();
  CHECK(s4.index_of(a4) == 2);
  CHECK(element_order(rotation(6)) == 6);
  CHECK(element_order(Perm::identity(5)) == 1);
}

TEST_CASE("order modulo a normal subgroup") {
  // At the first level both generators act as the full rotation, so ab is
  // its square; the derived image is trivial.
  const std::vector<Perm> gens = bsv_level_gens(4, 1);
  const PermGroup h1 = PermGroup::from_generators(gens);
  const PermGroup derived = h1.derived_subgroup();
  CHECK(derived.is_trivial());
  CHECK(order_mod_subgroup(gens[0] * gens[1], derived, h1) == 2);

  const PermGroup s4 = sym4();
  CHECK(order_mod_subgroup(transposition(4, 0, 1), s4.derived_subgroup(),
                           s4) == 2);
  CHECK_THROWS_AS(
      order_mod_subgroup(transposition(4, 0, 1), s4, s4.derived_subgroup()),
      Error);
}

TEST_CASE("block product multiplies embedded copies without interaction") {
  const PermGroup s3 = PermGroup::from_generators(
      {transposition(3, 0, 1), rotation(3)});
  const PermGroup prod = PermGroup::block_product(s3, 2);
  CHECK(prod.degree() == 6);
  CHECK(prod.order() == 36);
  CHECK(prod.contains(embed_at_child(transposition(3, 0, 2), 1, 2)));
  CHECK(prod.contains(embed_at_child(rotation(3), 2, 2)));
  CHECK(prod.contains(embed_at_child(rotation(3), 1, 2) *
                      embed_at_child(transposition(3, 1, 2), 2, 2)));
  CHECK_FALSE(prod.contains(transposition(6, 0, 3)));
  CHECK_FALSE(prod.contains(block_lift(rotation(2), 3)));
  CHECK(prod.order() == oracle::closure_size(prod.generators()));
}

TEST_CASE("block product chains are frozen") {
  StabilizerChain factor(3);
  factor.add_generator(transposition(3, 0, 1));
  factor.add_generator(rotation(3));
  CHECK(factor.order() == 6);
  StabilizerChain chain = StabilizerChain::block_product(factor, 2);
  CHECK(chain.order() == 36);
  CHECK(chain.contains(embed_at_child(rotation(3), 2, 2)));
  CHECK_FALSE(chain.contains(transposition(6, 2, 3)));
  CHECK_THROWS_AS(chain.add_generator(transposition(6, 0, 3)), Error);
}
