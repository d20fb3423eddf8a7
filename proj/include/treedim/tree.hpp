#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "treedim/perm.hpp"

namespace treedim {

// Largest m^n (number of level-n vertices) any operation may materialize.
inline constexpr std::uint64_t kDefaultPointBudget = 5000;

// Alphabet size of the regular rooted tree; letters are 1..m.
struct Degree {
  explicit Degree(std::uint32_t m);
  std::uint32_t m;
};

// A vertex is a word over {1,...,m}; the empty word is the root.
struct Vertex {
  Vertex() = default;
  explicit Vertex(std::vector<std::uint32_t> letters)
      : letters(std::move(letters)) {}

  static Vertex parse(const std::string &digits); // "31" -> [3,1], m <= 9

  std::size_t length() const { return letters.size(); }
  std::string str() const;
  bool operator==(const Vertex &) const = default;

  std::vector<std::uint32_t> letters; // 1-based
};

// Reference to a state of an automaton, possibly inverted. state < 0 denotes
// the reserved identity state "e"; it never appears inside Element words.
struct SignedState {
  std::int32_t state = -1;
  bool inverted = false;
  auto operator<=>(const SignedState &) const = default;
};

// A finite invertible Mealy automaton over {1,...,m}: each state carries an
// output permutation of the alphabet and one successor state per letter.
// Inverse states are derived, not declared: g^-1 has output pi_g^-1 and its
// transition at x is the inverse of g's transition at (x)pi_g^-1.
class AutomatonSpec {
public:
  struct State {
    std::string name;
    Perm output;                         // degree m, 0-based
    std::vector<SignedState> transition; // one per letter
  };

  // Input form as read from a file, before validation. Outputs are 1-based
  // images, transitions are state names with an optional "^-1" suffix.
  struct Raw {
    std::uint32_t alphabet_size = 0;
    struct RawState {
      std::string name;
      std::vector<std::uint32_t> output;
      std::vector<std::string> transitions;
    };
    std::vector<RawState> states;
  };

  static std::shared_ptr<const AutomatonSpec> validate(const Raw &raw);
  static std::shared_ptr<const AutomatonSpec> parse_json(const std::string &text);
  static std::shared_ptr<const AutomatonSpec> load_file(const std::string &path);

  // psi(a) = (1,...,1,a) sigma, psi(b) = (1,...,1,b^-1) sigma with
  // sigma = (1 2 ... m).
  static std::shared_ptr<const AutomatonSpec> bsv(std::uint32_t m);

  std::uint32_t m() const { return m_; }
  std::size_t state_count() const { return states_.size(); }
  const State &state(std::size_t i) const { return states_[i]; }
  std::int32_t state_index(const std::string &name) const; // -1 if absent
  const std::string &state_name(std::int32_t i) const;     // "e" for i < 0

  // All output permutations are powers of (1 2 ... m).
  bool is_madic() const;

  std::string to_json() const;

private:
  std::uint32_t m_ = 0;
  std::vector<State> states_;
};

using AutomatonPtr = std::shared_ptr<const AutomatonSpec>;

// A tree automorphism given as a free-reduced word of signed states of one
// automaton. Acts on vertices on the right: (vu)g = (v)g . (u)g|_v.
class Element {
public:
  static Element identity(AutomatonPtr aut);
  static Element generator(AutomatonPtr aut, std::int32_t state,
                           bool inverted = false);
  static Element from_word(AutomatonPtr aut, std::vector<SignedState> word);
  // Whitespace-separated state names, each optionally suffixed "^-1".
  static Element parse(AutomatonPtr aut, const std::string &text);

  const AutomatonSpec &automaton() const { return *aut_; }
  AutomatonPtr automaton_ptr() const { return aut_; }
  std::uint32_t m() const { return aut_->m(); }
  const std::vector<SignedState> &word() const { return word_; }
  bool word_is_empty() const { return word_.empty(); }
  std::string str() const;

  Perm root_label() const;
  std::uint32_t apply_letter(std::uint32_t x) const; // 1-based
  Element section(std::uint32_t letter) const;       // 1-based
  Element section(const Vertex &v) const;
  Vertex apply(const Vertex &v) const;

  // Action on level-n vertices, indexed by sum (x_i - 1) m^(n-i)
  // (leftmost letter most significant).
  Perm level_perm(std::uint32_t n,
                  std::uint64_t point_budget = kDefaultPointBudget) const;

  Element inverse() const;
  Element pow(std::int64_t e) const;

  bool operator==(const Element &) const; // word equality, not group equality

private:
  Element(AutomatonPtr aut, std::vector<SignedState> word);

  AutomatonPtr aut_;
  std::vector<SignedState> word_; // free-reduced, no identity states
};

Element operator*(const Element &a, const Element &b);
Element conjugate(const Element &g, const Element &h);  // h^-1 g h
Element commutator(const Element &g, const Element &h); // g^-1 h^-1 g h

// m^n if it stays within budget, else throws point_budget_exceeded.
std::uint64_t checked_points(std::uint32_t m, std::uint32_t n,
                             std::uint64_t point_budget);

// True when m^n <= point_budget; never throws.
bool level_fits(std::uint32_t m, std::uint32_t n, std::uint64_t point_budget);

// Permutation of m*d points acting as q on the subtree below child i
// (1-based) and fixing everything else; d = q.degree().
Perm embed_at_child(const Perm &q, std::uint32_t child, std::uint32_t m);

// Block permutation of m*d points moving block x to block (x)label.
Perm block_lift(const Perm &label, std::size_t block_size);

// Restriction of a block-diagonal permutation of m*d points to the block of
// child i; throws not_block_diagonal if the block is not preserved.
Perm perm_section_at_child(const Perm &q, std::uint32_t child, std::uint32_t m);

} // namespace treedim
