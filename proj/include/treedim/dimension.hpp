#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "treedim/bigint.hpp"
#include "treedim/bsgs.hpp"
#include "treedim/logindex.hpp"
#include "treedim/tree.hpp"

namespace treedim {

// Logarithmic index of the full m-adic level-n quotient: (m^n - 1)/(m - 1).
LogIndex gamma_index_log(std::uint32_t m, std::uint32_t n);

// The level-n quotient of the full m-adic group: generated by one cyclic
// rotation rooted at every vertex of depth < n. Order is asserted to be
// m^((m^n - 1)/(m - 1)).
PermGroup gamma_level_group(std::uint32_t m, std::uint32_t n,
                            std::uint64_t point_budget = kDefaultPointBudget);

// |G : St_G(n)| for n = 1..N, G generated by all automaton states. Stops
// early once a level would exceed the point budget; throws
// PointBudgetExceeded only if even level 1 does not fit. NotMAdic when
// require_madic is set and some output is not a rotation power.
std::vector<BigInt> index_sequence(const AutomatonPtr &spec, std::uint32_t N,
                                   std::uint64_t point_budget = kDefaultPointBudget,
                                   bool require_madic = true);

// s_n = m*log_m(orders[n-1]/orders[n-2]) - log_m(orders[n]/orders[n-1]) for
// n = 1..orders.size()-1, with an implicit leading order of 1.
// NonDividingOrder if some consecutive ratio is not an integer.
std::vector<LogIndex> s_sequence(const std::vector<BigInt> &orders,
                                 std::uint32_t m);

struct TheoremB {
  double estimate; // log_m(orders[0]) - sum_{n<=N} s_n m^-n
  double tail;     // bound_constant * m^-N / (1 - 1/m)
  double bound_constant;
};

// Series evaluation truncated at N (requires orders for levels 1..N+1).
// bound_constant defaults to the largest observed |s_n|; pass the analytic
// constant when one is known.
TheoremB theorem_b_value(const std::vector<BigInt> &orders, std::uint32_t m,
                         std::uint32_t N,
                         std::optional<double> bound_constant = {});

// The analytic series-coefficient bound (m-1)(1 + log_m 2) for the built-in
// two-generator group's derived-subgroup ladder.
double bsv_series_bound(std::uint32_t m);

// log_m(orders[n-1]) / gamma_index_log(m, n) for each n.
std::vector<double> ratio_sequence(const std::vector<BigInt> &orders,
                                   std::uint32_t m);

// Smallest p >= 1 with s[i] == s[i+p] wherever both exist, requiring at
// least two full periods of evidence; nullopt otherwise.
std::optional<std::uint32_t> detect_period(const std::vector<LogIndex> &s);

struct LevelRecord {
  std::uint32_t n = 0;
  BigInt index;
  LogIndex log_index = LogIndex::zero(2);
  std::optional<LogIndex> s_n; // absent on the deepest computed level
  double ratio = 0;
  double partial_dim = 0; // estimate through the last available s term
  double tail = 0;
  bool operator==(const LevelRecord &) const = default;
};

struct ClosedForm {
  BigRat rational;   // p in p + q*log_m 2
  BigRat log2_coeff; // q
  double value = 0;
  bool operator==(const ClosedForm &) const = default;
};

struct DimensionReport {
  std::uint32_t m = 2;
  std::string group;
  std::vector<LevelRecord> levels;
  std::optional<ClosedForm> closed_form;
  std::optional<std::uint32_t> skipped_from; // first level cut by the budget
  bool operator==(const DimensionReport &) const = default;
};

// Assemble per-level records from an order ladder. All floats are passed
// through the 12-significant-digit format once so exports are reproducible.
DimensionReport build_report(const std::vector<BigInt> &orders,
                             std::uint32_t m, std::string group_id,
                             std::optional<ClosedForm> closed_form = {},
                             std::optional<std::uint32_t> skipped_from = {},
                             std::optional<double> bound_constant = {});

std::string export_report_json(const DimensionReport &report);
std::string export_report_csv(const DimensionReport &report);
DimensionReport parse_report_json(const std::string &text);

// Fixed 12-significant-digit float formatting used by every export.
std::string format_float(double v);
// The same value re-parsed, so stored doubles round-trip bytewise.
double normalize_float(double v);

// Exact-string round trip used by report parsing.
LogIndex parse_log_index(const std::string &text, std::uint32_t base);

} // namespace treedim
