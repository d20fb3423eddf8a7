// Acceptance gate for the whole tool chain. Each numbered check prints one
// [PASS]/[FAIL] line; the process exits nonzero if any check fails. The
// checks recompute everything from scratch so a regression anywhere in the
// pipeline (tree action, stabilizer chains, lattice arithmetic, series
// evaluation) surfaces here even if a unit test was weakened.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "treedim/bsv.hpp"
#include "treedim/dimension.hpp"
#include "treedim/intlin.hpp"
#include "treedim/logindex.hpp"
#include "treedim/tree.hpp"

#include "oracles.hpp"

using namespace treedim;

namespace {

int failures = 0;

void report(int number, const std::string &label,
            const std::function<bool()> &body) {
  bool ok = false;
  std::string note;
  try {
    ok = body();
  } catch (const std::exception &e) {
    note = std::string("  (") + e.what() + ")";
  }
  std::printf("[%s] %2d. %s%s\n", ok ? "PASS" : "FAIL", number, label.c_str(),
              note.c_str());
  std::fflush(stdout);
  if (!ok)
    ++failures;
}

// Closed form as an exact rational when log_m 2 is rational (m a power of
// two), plus the truncated series staying inside its own tail bound.
bool closed_form_and_series(const BSVContext &ctx, std::uint32_t N,
                            const BigRat &exact_value,
                            std::optional<double> extra_gate) {
  const auto [p, q] = ctx.hausdorff_closed_form();
  BigRat log2_exact;
  if (ctx.m() == 2)
    log2_exact = BigRat(1);
  else if (ctx.m() == 4)
    log2_exact = BigRat(1, 2);
  else if (q != 0)
    return false; // irrational log coefficient cannot give an exact value
  if (p + q * log2_exact != exact_value)
    return false;

  const std::vector<BigInt> orders = ctx.derived_order_sequence(N + 1);
  if (orders.size() < N + 1)
    return false;
  const TheoremB tb =
      theorem_b_value(orders, ctx.m(), N, bsv_series_bound(ctx.m()));
  const double closed = ctx.hausdorff_closed_form_value();
  const double diff = std::abs(tb.estimate - closed);
  if (diff > tb.tail)
    return false;
  return !extra_gate || diff <= *extra_gate;
}

// Every record genuinely ran and passed; definition skips (statements that
// do not apply to this alphabet size) are tolerated, budget skips are not.
bool all_claims_pass(const Report &r) {
  if (r.empty())
    return false;
  bool any_ran = false;
  for (const CheckRecord &rec : r) {
    if (rec.skipped) {
      if (rec.note.rfind("skipped by definition", 0) != 0)
        return false;
      continue;
    }
    any_ran = true;
    if (!rec.pass)
      return false;
  }
  return any_ran;
}

LogIndex parity_series_term(std::uint32_t m, std::uint32_t n) {
  const std::int64_t tau = m % 2 == 0 ? 1 : 0;
  const std::int64_t e = n % 2;
  const std::int64_t mm = static_cast<std::int64_t>(m);
  return BigRat((mm - 1) * (2 * e - 1) * tau) * LogIndex::log2(m) -
         BigRat((mm - 1) * e) * LogIndex::one(m);
}

Element random_word(const AutomatonPtr &aut, std::mt19937 &rng,
                    std::size_t max_len = 8) {
  std::uniform_int_distribution<std::size_t> len(0, max_len);
  std::uniform_int_distribution<std::int32_t> state(
      0, static_cast<std::int32_t>(aut->state_count()) - 1);
  std::uniform_int_distribution<int> coin(0, 1);
  Element g = Element::identity(aut);
  const std::size_t n = len(rng);
  for (std::size_t i = 0; i < n; ++i)
    g = g * Element::generator(aut, state(rng), coin(rng) == 1);
  return g;
}

Vertex random_vertex(std::uint32_t m, std::size_t length, std::mt19937 &rng) {
  std::uniform_int_distribution<std::uint32_t> letter(1, m);
  std::vector<std::uint32_t> v(length);
  for (auto &x : v)
    x = letter(rng);
  return Vertex(std::move(v));
}

// The three shapes of lattice-membership queries exercised against the
// exhaustive reference: a pure last-coordinate drop, the half-modulus
// last-coordinate drop, and the alternating-sign pattern.
std::vector<std::vector<BigInt>> query_vectors(std::uint32_t m,
                                               const BigInt &q) {
  std::vector<std::vector<BigInt>> out;
  for (std::int64_t j = 1; j < m; ++j)
    for (std::int64_t k = 0; k <= 2; ++k) {
      std::vector<BigInt> v(m, BigInt(0));
      v[m - 1] = -BigInt(j) * pow(BigInt(m), static_cast<unsigned>(k));
      out.push_back(std::move(v));
    }
  if (q % 2 == 0) {
    std::vector<BigInt> v(m, BigInt(0));
    v[m - 1] = -q / 2;
    out.push_back(std::move(v));
  }
  for (std::int64_t eps = 1; eps <= 2; ++eps)
    for (BigInt delta = 0; delta < q; ++delta) {
      std::vector<BigInt> v(m);
      for (std::uint32_t i = 0; i < m; ++i)
        v[i] = (i % 2 == 0) ? BigInt(eps) : BigInt(-eps);
      v[m - 1] = delta - eps;
      out.push_back(std::move(v));
    }
  return out;
}

// (m, level range) pairs shared by the exact-index and structure checks.
const std::vector<std::pair<std::uint32_t, std::uint32_t>> kIndexRange = {
    {2, 6}, {3, 4}, {4, 3}};

} // namespace

int main() {
  const BSVContext ctx2(2), ctx3(3), ctx4(4), ctx5(5), ctx6(6);
  const auto &ctx = [&](std::uint32_t m) -> const BSVContext & {
    switch (m) {
    case 2:
      return ctx2;
    case 3:
      return ctx3;
    case 4:
      return ctx4;
    case 5:
      return ctx5;
    default:
      return ctx6;
    }
  };

  report(1, "binary tree: closed form 1/3, series at N=8 inside tail", [&] {
    return closed_form_and_series(ctx2, 8, BigRat(1, 3),
                                  2.0 * std::pow(2.0, -8.0));
  });

  report(2, "ternary tree: closed form 3/4, series at N=5 inside tail", [&] {
    return closed_form_and_series(ctx3, 5, BigRat(3, 4), std::nullopt);
  });

  report(3, "quaternary tree: closed form 1/2, series at N=4 inside tail",
         [&] {
           return closed_form_and_series(ctx4, 4, BigRat(1, 2), std::nullopt);
         });

  report(4, "six-letter tree: closed form 0.580819(0), series at N=3 inside "
            "tail",
         [&] {
           const double closed = ctx6.hausdorff_closed_form_value();
           if (std::abs(closed - 0.580819) > 1e-6)
             return false;
           const std::vector<BigInt> orders = ctx6.derived_order_sequence(4);
           if (orders.size() < 4)
             return false;
           const TheoremB tb = theorem_b_value(orders, 6, 3,
                                               bsv_series_bound(6));
           return std::abs(tb.estimate - closed) <= tb.tail;
         });

  report(5, "branching-kernel index matches the predicted power exactly",
         [&] {
           for (const auto &[m, n_max] : kIndexRange) {
             const BSVContext &c = ctx(m);
             for (std::uint32_t n = 2; n <= n_max; ++n) {
               const BigInt got =
                   c.derived_quotient(n).index_of(c.l2_quotient(n));
               if (got != c.predicted_prop35_index(n))
                 return false;
             }
           }
           return true;
         });

  report(6, "second-level quotient is elementary abelian of the right rank",
         [&] {
           for (const auto &[m, n_max] : kIndexRange) {
             const BSVContext &c = ctx(m);
             for (std::uint32_t n = 2; n <= n_max; ++n) {
               const Report r = c.verify_lemma32(n);
               bool any_skip = false;
               for (const CheckRecord &rec : r)
                 any_skip = any_skip || rec.skipped;
               if (any_skip || !report_ok(r) || r.empty())
                 return false;
               // The cyclic order must also match the prediction one level
               // down, independently of the report's own bookkeeping.
               if (c.ab_order_mod_derived(n - 1) != c.predicted_ab_order(n - 1))
                 return false;
             }
           }
           return true;
         });

  report(7, "all membership statements hold at the published parameter "
            "ranges",
         [&] {
           const std::vector<std::pair<std::uint32_t, std::uint32_t>> plan = {
               {2, 3}, {3, 1}, {4, 1}, {5, 0}, {6, 0}};
           for (const auto &[m, k_max] : plan)
             if (!all_claims_pass(ctx(m).verify_prop34(k_max)))
               return false;
           return true;
         });

  report(8, "index-difference sequence equals the parity formula exactly",
         [&] {
           for (const auto &[m, n_max] : kIndexRange) {
             const std::vector<BigInt> orders =
                 ctx(m).derived_order_sequence(n_max + 1);
             if (orders.size() < n_max + 1)
               return false;
             const std::vector<LogIndex> s = s_sequence(orders, m);
             for (std::uint32_t n = 2; n <= n_max; ++n)
               if (s.at(n - 1) != parity_series_term(m, n))
                 return false;
           }
           return true;
         });

  report(9, "stabilizer-chain orders equal brute-force closure sizes for 10 "
            "groups",
         [&] {
           int groups = 0;
           const std::vector<std::pair<std::uint32_t, std::uint32_t>> levels =
               {{2, 1}, {2, 2}, {2, 3}, {3, 1}, {3, 2}};
           for (const auto &[m, n] : levels) {
             const PermGroup &g = ctx(m).level_quotient(n);
             const std::uint64_t slow = oracle::closure_size(g.generators());
             if (slow == 0 || g.order() != slow)
               return false;
             ++groups;
           }
           for (const auto &[m, n] : levels) {
             const PermGroup g = gamma_level_group(m, n);
             const std::uint64_t slow = oracle::closure_size(g.generators());
             if (slow == 0 || g.order() != slow)
               return false;
             ++groups;
           }
           return groups == 10;
         });

  report(10, "lattice membership agrees with exhaustive enumeration", [&] {
    for (std::uint32_t m = 2; m <= 4; ++m) {
      const IntMatrix a = build_matrix_A(m);
      for (const BigInt &q : {BigInt(2), BigInt(3), BigInt(4), BigInt(8)})
        for (const auto &v : query_vectors(m, q))
          if (row_space_contains_mod(a, v, q) !=
              oracle::row_space_contains_mod_slow(a, v, q))
            return false;
    }
    return true;
  });

  report(11, "tree-action invariants hold over random words", [&] {
    for (std::uint32_t m : {2u, 3u, 4u}) {
      const AutomatonPtr aut = AutomatonSpec::bsv(m);
      std::mt19937 rng(4242 + m);
      std::uniform_int_distribution<std::uint32_t> letter(1, m);
      const std::uint32_t depth = m == 2 ? 3 : 2;
      std::uint64_t d = 1;
      for (std::uint32_t i = 0; i < depth; ++i)
        d *= m;
      for (int trial = 0; trial < 110; ++trial) {
        const Element g = random_word(aut, rng);
        const Element h = random_word(aut, rng);
        const Vertex v = random_vertex(m, 4, rng);
        if (h.apply(g.apply(v)) != (g * h).apply(v))
          return false;
        const std::uint32_t x = letter(rng);
        if ((g * h).section(x).level_perm(3) !=
            (g.section(x) * h.section(g.apply_letter(x))).level_perm(3))
          return false;
        if (g.inverse().apply(g.apply(v)) != v)
          return false;
        if (g.inverse().level_perm(3) != g.level_perm(3).inverse())
          return false;
        Perm diagonal = Perm::identity(d * m);
        for (std::uint32_t c = 1; c <= m; ++c)
          diagonal =
              diagonal * embed_at_child(g.section(c).level_perm(depth), c, m);
        if (g.level_perm(depth + 1) !=
            diagonal * block_lift(g.root_label(), static_cast<std::size_t>(d)))
          return false;
      }
    }
    return true;
  });

  if (failures == 0) {
    std::printf("all acceptance checks passed\n");
    return 0;
  }
  std::printf("%d acceptance check(s) failed\n", failures);
  return 1;
}
