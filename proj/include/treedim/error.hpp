#pragma once

#include <stdexcept>
#include <string>

namespace treedim {

enum class errc {
  // automaton validation
  non_bijective_output,
  unknown_transition_target,
  duplicate_state_name,
  reserved_name_misuse,
  // tree operations
  letter_out_of_range,
  point_budget_exceeded,
  degree_mismatch,
  not_block_diagonal,
  // permutation groups
  empty_degree,
  not_a_permutation,
  element_not_in_group,
  not_normal,
  not_a_subgroup,
  non_dividing_order,
  point_out_of_range,
  // integer linear algebra
  dimension_mismatch,
  bad_modulus,
  // dimension pipeline
  not_madic,
  factorization_incomplete,
  unsupported_format,
  // input handling
  invalid_argument,
  parse_error,
};

const char *errc_name(errc code);

class Error : public std::runtime_error {
public:
  Error(errc code, const std::string &what)
      : std::runtime_error(what), code_(code) {}

  errc code() const noexcept { return code_; }

private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string &msg) {
  throw Error(code, std::string(errc_name(code)) + ": " + msg);
}

} // namespace treedim
