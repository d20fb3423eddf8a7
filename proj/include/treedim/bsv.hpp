#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "treedim/bigint.hpp"
#include "treedim/bsgs.hpp"
#include "treedim/logindex.hpp"
#include "treedim/tree.hpp"

namespace treedim {

// Level bookkeeping: n = 2*k + e with e in {0,1}.
struct LevelParams {
  explicit LevelParams(std::uint32_t n_) : n(n_), k(n_ / 2), e(n_ % 2) {}
  std::uint32_t n, k, e;
};

// One verification outcome: a membership, an order or an index computed at a
// finite level, compared against its predicted value.
struct CheckRecord {
  std::string check; // prop34 | lemma32 | prop35 | structure | matrixA
  std::uint32_t m = 2;
  std::optional<std::uint32_t> n; // tree level
  std::optional<std::uint32_t> k; // statement parameter
  std::optional<std::int64_t> j;  // coordinate / exponent parameter
  std::string expected;
  std::string actual;
  bool pass = false;
  bool skipped = false;
  std::string note;
};

using Report = std::vector<CheckRecord>;

bool report_ok(const Report &r);          // no non-skipped failures
bool report_all_skipped(const Report &r); // nonempty and everything skipped
void sort_report(Report &r);              // by (check, n, k, j)

// Observed quantities at one level; ab_order and lambda_order are taken
// modulo the derived image.
struct LevelData {
  std::uint32_t n;
  BigInt order_H;
  BigInt order_Hder;
  BigInt order_L2; // 1 below level 2
  BigInt ab_order;
  BigInt lambda_order;
  LogIndex s_n; // needs the derived order at level n+1
};

// The two-generator self-similar group H = <a, b> over the m-letter
// alphabet with psi(a) = (1,...,1,a) sigma and psi(b) = (1,...,1,b^-1) sigma,
// together with its finite level quotients H_n, their derived images and
// the embedded product of derived images one level down (the second-level
// branching kernel). All quotients are cached per level.
class BSVContext {
public:
  explicit BSVContext(std::uint32_t m,
                      std::uint64_t point_budget = kDefaultPointBudget);

  std::uint32_t m() const { return m_; }
  std::uint32_t tau() const { return m_ % 2 == 0 ? 1 : 0; }
  std::uint64_t point_budget() const { return budget_; }
  const AutomatonPtr &spec() const { return spec_; }

  const Element &a() const { return a_; }
  const Element &b() const { return b_; }
  const Element &ab() const { return ab_; }
  const Element &lambda() const { return lambda_; } // a b^-1
  Element c(std::uint32_t i) const; // [lambda, a]^(a^i), 0 <= i <= m-2

  const PermGroup &level_quotient(std::uint32_t n) const;
  const PermGroup &derived_quotient(std::uint32_t n) const;
  const PermGroup &l2_quotient(std::uint32_t n) const; // n >= 2

  // Order of ab modulo the level-n derived image, computed from the chain.
  BigInt ab_order_mod_derived(std::uint32_t n) const;

  // m^(k_n + e_n) / 2^(e_n * tau); 1 at n = 0.
  BigInt predicted_ab_order(std::uint32_t n) const;
  // m^((m-1) k_n) / 2^((m-1) e_{n-1} tau) for n >= 2.
  BigInt predicted_prop35_index(std::uint32_t n) const;
  // (m-1)((2 e_n - 1) tau log_m 2 - e_n) as an exact LogIndex.
  LogIndex predicted_s(std::uint32_t n) const;

  std::uint32_t default_k_max() const;

  // Derived-image orders at levels 1..n_max; truncates early (instead of
  // throwing) once a level would exceed the point budget.
  std::vector<BigInt> derived_order_sequence(std::uint32_t n_max) const;

  LevelData level_data(std::uint32_t n) const; // needs level n+1 for s_n

  // Exact (p, q) meaning p + q*log_m(2), and its floating value.
  std::pair<BigRat, BigRat> hausdorff_closed_form() const;
  double hausdorff_closed_form_value() const;

  Report verify_prop34(std::uint32_t k_max) const;
  Report verify_lemma32(std::uint32_t n) const; // one level, n >= 2
  Report verify_prop35(std::uint32_t n_max) const;
  Report verify_structure(std::uint32_t n) const; // one level, n >= 1
  Report verify_matrix_A() const;

private:
  // x lies in the preimage of the derived subgroup at level n; level 0 is
  // the whole group.
  bool in_derived_preimage(const Element &x, std::uint32_t n) const;
  CheckRecord membership_record(const Element &x, const std::string &xname,
                                std::uint32_t level, bool want_member,
                                const std::string &stmt, std::uint32_t k,
                                std::optional<std::int64_t> j) const;

  std::uint32_t m_;
  std::uint64_t budget_;
  AutomatonPtr spec_;
  Element a_, b_, ab_, lambda_;
  mutable std::map<std::uint32_t, PermGroup> level_cache_, derived_cache_,
      l2_cache_;
};

} // namespace treedim
