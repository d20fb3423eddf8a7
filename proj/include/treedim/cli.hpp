#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "treedim/bsv.hpp"
#include "treedim/tree.hpp"

namespace treedim {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailure = 1;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitBudgetExhausted = 3;

// Shared settings for the dim / verify / order subcommands. Fields a
// subcommand does not use are ignored by it.
struct RunConfig {
  std::uint32_t m = 2;
  std::string group = "bsv"; // "bsv" or "file:PATH"
  std::uint32_t max_level = 4;
  std::optional<std::uint32_t> k_max; // verify: cap for prop34 statements
  std::string which = "all";
  std::uint64_t point_budget = kDefaultPointBudget;
  std::string format = "json"; // csv is dim-only
  std::string out_path;        // empty: stdout
  std::string element;         // order: word over the state names
  std::uint32_t level = 1;     // order: tree level
};

// Flag value wins over the TREEDIM_POINT_BUDGET env var, which wins over
// the built-in default.
std::uint64_t resolve_point_budget(std::optional<std::uint64_t> flag_value);

// Deterministic serialization of a verification report, ordered by
// (check, n, k, j).
std::string report_to_json(const Report &report);

int run_dim(const RunConfig &config, std::ostream &out, std::ostream &err);
int run_verify(const RunConfig &config, std::ostream &out, std::ostream &err);
int run_order(const RunConfig &config, std::ostream &out, std::ostream &err);

// Full argv front end. Returns the process exit code: 0 ok, 1 check
// failure, 2 config error, 3 point budget too small for any level.
int run_cli(int argc, const char *const *argv, std::ostream &out,
            std::ostream &err);

} // namespace treedim
