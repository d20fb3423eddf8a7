#include "treedim/bsgs.hpp"

#include <algorithm>
#include <deque>
#include <map>

#include "treedim/error.hpp"

namespace treedim {

// ---------------------------------------------------------------------------
// StabilizerChain

StabilizerChain::StabilizerChain(std::size_t degree) : degree_(degree) {
  if (degree == 0)
    fail(errc::empty_degree, "permutation degree must be positive");
}

void StabilizerChain::push_level(std::uint32_t beta) {
  Level lv;
  lv.beta = beta;
  lv.orbit.push_back(beta);
  lv.orbit_pos.assign(degree_, -1);
  lv.orbit_pos[beta] = 0;
  lv.reps.push_back(Perm::identity(degree_));
  lv.inv_reps.push_back(Perm::identity(degree_));
  levels_.push_back(std::move(lv));
}

void StabilizerChain::extend_orbit(std::size_t li) {
  Level &lv = levels_[li];
  // New generators over already-expanded points; points added here fall into
  // the frontier pass below, which applies every generator.
  for (std::size_t gi = lv.exp_gens; gi < lv.gens.size(); ++gi) {
    for (std::size_t pi = 0; pi < lv.exp_points; ++pi) {
      std::uint32_t q = lv.gens[gi][lv.orbit[pi]];
      if (lv.orbit_pos[q] < 0) {
        lv.orbit_pos[q] = static_cast<std::int32_t>(lv.orbit.size());
        lv.orbit.push_back(q);
        lv.reps.push_back(lv.reps[pi] * lv.gens[gi]);
        lv.inv_reps.push_back(lv.gen_invs[gi] * lv.inv_reps[pi]);
      }
    }
  }
  lv.exp_gens = lv.gens.size();
  while (lv.exp_points < lv.orbit.size()) {
    std::size_t pi = lv.exp_points++;
    for (std::size_t gi = 0; gi < lv.gens.size(); ++gi) {
      std::uint32_t q = lv.gens[gi][lv.orbit[pi]];
      if (lv.orbit_pos[q] < 0) {
        lv.orbit_pos[q] = static_cast<std::int32_t>(lv.orbit.size());
        lv.orbit.push_back(q);
        lv.reps.push_back(lv.reps[pi] * lv.gens[gi]);
        lv.inv_reps.push_back(lv.gen_invs[gi] * lv.inv_reps[pi]);
      }
    }
  }
}

void StabilizerChain::enqueue_pairs(std::size_t li) {
  Level &lv = levels_[li];
  if (lv.q_gens < lv.gens.size()) {
    for (std::size_t gi = lv.q_gens; gi < lv.gens.size(); ++gi)
      for (std::size_t pi = 0; pi < lv.q_points; ++pi)
        lv.pending.emplace_back(static_cast<std::uint32_t>(pi),
                                static_cast<std::uint32_t>(gi));
    lv.q_gens = lv.gens.size();
  }
  if (lv.q_points < lv.orbit.size()) {
    for (std::size_t pi = lv.q_points; pi < lv.orbit.size(); ++pi)
      for (std::size_t gi = 0; gi < lv.q_gens; ++gi)
        lv.pending.emplace_back(static_cast<std::uint32_t>(pi),
                                static_cast<std::uint32_t>(gi));
    lv.q_points = lv.orbit.size();
  }
}

std::pair<Perm, std::size_t> StabilizerChain::sift_from(Perm h,
                                                        std::size_t from) const {
  for (std::size_t i = from; i < levels_.size(); ++i) {
    const Level &lv = levels_[i];
    std::uint32_t pt = h[lv.beta];
    std::int32_t idx = lv.orbit_pos[pt];
    if (idx < 0)
      return {std::move(h), i};
    if (pt != lv.beta)
      compose_into(h, h, lv.inv_reps[static_cast<std::size_t>(idx)]);
  }
  return {std::move(h), levels_.size()};
}

void StabilizerChain::add_generator(const Perm &g) {
  if (frozen_)
    fail(errc::invalid_argument,
         "cannot extend a chain assembled as a block product");
  if (g.degree() != degree_)
    fail(errc::degree_mismatch, "generator degree " +
                                    std::to_string(g.degree()) +
                                    " does not match chain degree " +
                                    std::to_string(degree_));
  if (g.is_identity())
    return;
  if (contains(g))
    return;
  if (levels_.empty()) {
    std::uint32_t beta = 0;
    while (g[beta] == beta)
      ++beta;
    push_level(beta);
  }
  levels_[0].gens.push_back(g);
  levels_[0].gen_invs.push_back(g.inverse());
  complete();
}

void StabilizerChain::complete() {
  // Sims verification: repeatedly take the deepest level with unprocessed
  // Schreier pairs; everything below it is verified, so sifting there is a
  // valid membership test. A residue that fails to sift is installed as a
  // strong generator on levels (i, stop] and processing resumes deeper.
  Perm w, h;
  while (true) {
    std::size_t active = levels_.size();
    for (std::size_t j = levels_.size(); j-- > 0;) {
      extend_orbit(j);
      enqueue_pairs(j);
      if (!levels_[j].pending.empty()) {
        active = j;
        break;
      }
    }
    if (active == levels_.size())
      return;

    while (!levels_[active].pending.empty()) {
      auto [pi, gi] = levels_[active].pending.back();
      Level &lv = levels_[active];
      std::uint32_t q = lv.gens[gi][lv.orbit[pi]];
      std::size_t qi = static_cast<std::size_t>(lv.orbit_pos[q]);
      compose_into(w, lv.reps[pi], lv.gens[gi]);
      if (w == lv.reps[qi]) { // Schreier generator is trivial
        lv.pending.pop_back();
        continue;
      }
      compose_into(h, w, lv.inv_reps[qi]);
      auto [res, stop] = sift_from(std::move(h), active + 1);
      h = std::move(res);
      if (h.is_identity()) {
        lv.pending.pop_back();
        continue;
      }
      // New strong generator; the pair stays pending and is re-sifted once
      // the deeper levels are verified again.
      if (stop == levels_.size()) {
        std::uint32_t beta = 0;
        while (h[beta] == beta)
          ++beta;
        push_level(beta);
      }
      Perm h_inv = h.inverse();
      for (std::size_t j = active + 1; j <= stop; ++j) {
        levels_[j].gens.push_back(h);
        levels_[j].gen_invs.push_back(h_inv);
      }
      break; // resume at the deepest modified level
    }
  }
}

bool StabilizerChain::contains(const Perm &g) const {
  if (g.degree() != degree_)
    fail(errc::degree_mismatch, "membership test across degrees");
  auto [res, stop] = sift_from(g, 0);
  (void)stop;
  return res.is_identity();
}

BigInt StabilizerChain::order() const {
  BigInt ord = 1;
  for (const Level &lv : levels_)
    ord *= static_cast<std::uint64_t>(lv.orbit.size());
  return ord;
}

std::vector<std::uint32_t> StabilizerChain::base() const {
  std::vector<std::uint32_t> b;
  b.reserve(levels_.size());
  for (const Level &lv : levels_)
    b.push_back(lv.beta);
  return b;
}

std::vector<Perm> StabilizerChain::strong_generators() const {
  std::vector<Perm> out;
  for (const Level &lv : levels_)
    for (const Perm &g : lv.gens)
      if (std::find(out.begin(), out.end(), g) == out.end())
        out.push_back(g);
  return out;
}

namespace {

// Same block layout as embed_at_child: block c occupies [c*d, (c+1)*d).
Perm embed_block(const Perm &g, std::uint32_t block, std::uint32_t blocks) {
  const std::size_t d = g.degree();
  std::vector<std::uint32_t> img(d * blocks);
  for (std::size_t p = 0; p < img.size(); ++p)
    img[p] = static_cast<std::uint32_t>(p);
  const std::size_t off = static_cast<std::size_t>(block) * d;
  for (std::size_t x = 0; x < d; ++x)
    img[off + x] = static_cast<std::uint32_t>(off + g[static_cast<std::uint32_t>(x)]);
  return Perm(std::move(img));
}

} // namespace

StabilizerChain StabilizerChain::block_product(const StabilizerChain &factor,
                                               std::uint32_t blocks) {
  if (blocks == 0)
    fail(errc::invalid_argument, "block product needs at least one block");
  StabilizerChain out(factor.degree_ * blocks);
  out.frozen_ = true;
  const std::uint32_t d = static_cast<std::uint32_t>(factor.degree_);
  for (std::uint32_t c = 0; c < blocks; ++c) {
    const std::uint32_t off = c * d;
    for (const Level &src : factor.levels_) {
      Level lv;
      lv.beta = src.beta + off;
      lv.gens.reserve(src.gens.size());
      for (const Perm &g : src.gens)
        lv.gens.push_back(embed_block(g, c, blocks));
      // gen_invs stay empty: a frozen chain never extends its orbits
      lv.orbit.reserve(src.orbit.size());
      for (std::uint32_t p : src.orbit)
        lv.orbit.push_back(p + off);
      lv.orbit_pos.assign(out.degree_, -1);
      for (std::size_t i = 0; i < lv.orbit.size(); ++i)
        lv.orbit_pos[lv.orbit[i]] = static_cast<std::int32_t>(i);
      lv.reps.reserve(src.reps.size());
      for (const Perm &g : src.reps)
        lv.reps.push_back(embed_block(g, c, blocks));
      lv.inv_reps.reserve(src.inv_reps.size());
      for (const Perm &g : src.inv_reps)
        lv.inv_reps.push_back(embed_block(g, c, blocks));
      lv.exp_points = lv.orbit.size();
      lv.exp_gens = lv.gens.size();
      lv.q_points = lv.orbit.size();
      lv.q_gens = lv.gens.size();
      out.levels_.push_back(std::move(lv));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// PermGroup

PermGroup::PermGroup(std::size_t degree, std::vector<Perm> gens,
                     std::shared_ptr<const StabilizerChain> chain)
    : degree_(degree), gens_(std::move(gens)), chain_(std::move(chain)),
      order_(chain_->order()) {}

PermGroup PermGroup::from_generators(const std::vector<Perm> &gens) {
  if (gens.empty())
    fail(errc::empty_degree,
         "no generators given and no degree to infer; use the explicit-degree "
         "overload for trivial groups");
  return from_generators(gens.front().degree(), gens);
}

PermGroup PermGroup::from_generators(std::size_t degree,
                                     const std::vector<Perm> &gens) {
  auto chain = std::make_shared<StabilizerChain>(degree);
  for (const Perm &g : gens)
    chain->add_generator(g);
  return PermGroup(degree, gens, std::move(chain));
}

PermGroup PermGroup::trivial(std::size_t degree) {
  return from_generators(degree, {});
}

bool PermGroup::contains(const Perm &g) const { return chain_->contains(g); }

std::vector<std::uint32_t> PermGroup::base() const { return chain_->base(); }

std::vector<Perm> PermGroup::strong_generators() const {
  return chain_->strong_generators();
}

std::vector<std::uint32_t> PermGroup::orbit(std::uint32_t point) const {
  if (point >= degree_)
    fail(errc::point_out_of_range, "point " + std::to_string(point) +
                                       " outside degree " +
                                       std::to_string(degree_));
  std::vector<std::uint32_t> orb{point};
  std::vector<bool> seen(degree_, false);
  seen[point] = true;
  for (std::size_t i = 0; i < orb.size(); ++i)
    for (const Perm &g : gens_) {
      std::uint32_t q = g[orb[i]];
      if (!seen[q]) {
        seen[q] = true;
        orb.push_back(q);
      }
    }
  return orb;
}

bool PermGroup::is_transitive() const { return orbit(0).size() == degree_; }

BigInt PermGroup::index_of(const PermGroup &sub) const {
  if (sub.degree() != degree_)
    fail(errc::degree_mismatch, "index across different degrees");
  for (const Perm &g : sub.generators())
    if (!contains(g))
      fail(errc::not_a_subgroup, "generator outside the ambient group");
  if (order_ % sub.order() != 0)
    fail(errc::non_dividing_order, "subgroup order does not divide group order");
  return order_ / sub.order();
}

PermGroup PermGroup::normal_closure(const std::vector<Perm> &seeds) const {
  auto chain = std::make_shared<StabilizerChain>(degree_);
  std::vector<Perm> closure_gens;
  std::deque<Perm> agenda;
  for (const Perm &s : seeds) {
    if (!contains(s))
      fail(errc::element_not_in_group, "closure seed outside the group");
    agenda.push_back(s);
  }
  while (!agenda.empty()) {
    Perm t = std::move(agenda.front());
    agenda.pop_front();
    if (t.is_identity() || chain->contains(t))
      continue;
    chain->add_generator(t);
    closure_gens.push_back(t);
    for (const Perm &g : gens_)
      agenda.push_back(g.inverse() * t * g);
  }
  return PermGroup(degree_, std::move(closure_gens), std::move(chain));
}

PermGroup PermGroup::block_product(const PermGroup &factor,
                                   std::uint32_t blocks) {
  auto chain = std::make_shared<StabilizerChain>(
      StabilizerChain::block_product(*factor.chain_, blocks));
  std::vector<Perm> gens;
  gens.reserve(factor.gens_.size() * blocks);
  for (std::uint32_t c = 0; c < blocks; ++c)
    for (const Perm &g : factor.gens_)
      gens.push_back(embed_block(g, c, blocks));
  return PermGroup(factor.degree_ * blocks, std::move(gens), std::move(chain));
}

PermGroup PermGroup::derived_subgroup() const {
  std::vector<Perm> seeds;
  for (std::size_t i = 0; i < gens_.size(); ++i)
    for (std::size_t j = i + 1; j < gens_.size(); ++j) {
      Perm c = gens_[i].inverse() * gens_[j].inverse() * gens_[i] * gens_[j];
      if (!c.is_identity())
        seeds.push_back(std::move(c));
    }
  PermGroup der = normal_closure(seeds);
  // The quotient by the result must be abelian: commutators of all
  // generator pairs sift into it.
  for (std::size_t i = 0; i < gens_.size(); ++i)
    for (std::size_t j = 0; j < gens_.size(); ++j) {
      Perm c = gens_[i].inverse() * gens_[j].inverse() * gens_[i] * gens_[j];
      if (!der.contains(c))
        fail(errc::not_normal, "derived subgroup closure is not abelianizing");
    }
  return der;
}

// ---------------------------------------------------------------------------

BigInt element_order(const Perm &g) { return g.order(); }

namespace {

// Ascending divisors of n from the factorization of the cycle lengths; every
// prime involved is at most the degree, so trial division is exact.
std::vector<BigInt> ascending_divisors(const Perm &g) {
  std::map<std::uint64_t, unsigned> factors;
  for (std::uint32_t len : g.cycle_lengths()) {
    std::uint64_t rest = len;
    for (std::uint64_t p = 2; p * p <= rest; ++p)
      while (rest % p == 0) {
        unsigned e = 1;
        std::uint64_t q = p;
        while (rest % (q * p) == 0) {
          q *= p;
          ++e;
        }
        auto it = factors.find(p);
        if (it == factors.end() || it->second < e)
          factors[p] = e;
        rest /= q;
      }
    if (rest > 1) {
      auto it = factors.find(rest);
      if (it == factors.end() || it->second < 1)
        factors[rest] = std::max(factors[rest], 1u);
    }
  }
  std::vector<BigInt> divs{1};
  for (auto [p, e] : factors) {
    std::size_t sz = divs.size();
    BigInt q = 1;
    for (unsigned i = 1; i <= e; ++i) {
      q *= p;
      for (std::size_t k = 0; k < sz; ++k)
        divs.push_back(divs[k] * q);
    }
  }
  std::sort(divs.begin(), divs.end());
  return divs;
}

} // namespace

BigInt order_mod_subgroup(const Perm &g, const PermGroup &N, const PermGroup &G) {
  if (!G.contains(g))
    fail(errc::element_not_in_group, "element outside the ambient group");
  for (const Perm &n : N.generators()) {
    if (!G.contains(n))
      fail(errc::element_not_in_group, "subgroup generator outside the group");
    for (const Perm &h : G.generators())
      if (!N.contains(h.inverse() * n * h))
        fail(errc::not_normal, "subgroup is not normal in the group");
  }
  for (const BigInt &t : ascending_divisors(g))
    if (N.contains(perm_power(g, t)))
      return t;
  fail(errc::non_dividing_order,
       "no divisor of the element order lands in the subgroup");
}

} // namespace treedim
