#include "treedim/tree.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

#include "treedim/error.hpp"

namespace treedim {

namespace {

constexpr std::int32_t kIdentityState = -1;

bool is_reserved(const std::string &name) { return name == "e"; }

} // namespace

Degree::Degree(std::uint32_t m_) : m(m_) {
  if (m < 2)
    fail(errc::invalid_argument, "alphabet size must be at least 2");
}

Vertex Vertex::parse(const std::string &digits) {
  std::vector<std::uint32_t> letters;
  letters.reserve(digits.size());
  for (char c : digits) {
    if (c < '1' || c > '9')
      fail(errc::letter_out_of_range,
           std::string("vertex letter '") + c + "' is not in 1..9");
    letters.push_back(static_cast<std::uint32_t>(c - '0'));
  }
  return Vertex(std::move(letters));
}

std::string Vertex::str() const {
  std::string s;
  for (std::uint32_t x : letters) {
    if (x > 9)
      return "<" + std::to_string(letters.size()) + "-letter vertex>";
    s += static_cast<char>('0' + x);
  }
  return s;
}

std::uint64_t checked_points(std::uint32_t m, std::uint32_t n,
                             std::uint64_t point_budget) {
  std::uint64_t points = 1;
  for (std::uint32_t i = 0; i < n; ++i) {
    points *= m;
    if (points > point_budget)
      fail(errc::point_budget_exceeded,
           "level " + std::to_string(n) + " of the " + std::to_string(m) +
               "-adic tree needs " + std::to_string(points) +
               "+ points, budget is " + std::to_string(point_budget));
  }
  return points;
}

bool level_fits(std::uint32_t m, std::uint32_t n, std::uint64_t point_budget) {
  std::uint64_t points = 1;
  for (std::uint32_t i = 0; i < n; ++i) {
    if (points > point_budget / m)
      return false;
    points *= m;
  }
  return points <= point_budget;
}

// ---------------------------------------------------------------------------
// AutomatonSpec

std::shared_ptr<const AutomatonSpec> AutomatonSpec::validate(const Raw &raw) {
  Degree deg(raw.alphabet_size);
  const std::uint32_t m = deg.m;

  auto spec = std::make_shared<AutomatonSpec>();
  spec->m_ = m;

  std::map<std::string, std::int32_t> index;
  for (const auto &rs : raw.states) {
    if (rs.name.empty())
      fail(errc::invalid_argument, "state with empty name");
    if (index.count(rs.name))
      fail(errc::duplicate_state_name, "state '" + rs.name + "' declared twice");
    if (is_reserved(rs.name)) {
      // "e" may only be redeclared as the identity automaton state.
      bool id_output = true;
      for (std::uint32_t x = 0; x < rs.output.size(); ++x)
        id_output = id_output && rs.output[x] == x + 1;
      bool id_transitions = true;
      for (const auto &t : rs.transitions)
        id_transitions = id_transitions && (t == "e");
      if (rs.output.size() != m || !id_output || rs.transitions.size() != m ||
          !id_transitions)
        fail(errc::reserved_name_misuse,
             "state 'e' is reserved for the identity");
      continue; // the implicit identity already covers it
    }
    index[rs.name] = static_cast<std::int32_t>(spec->states_.size());
    spec->states_.push_back(State{rs.name, Perm(), {}});
  }

  std::size_t si = 0;
  for (const auto &rs : raw.states) {
    if (is_reserved(rs.name))
      continue;
    State &st = spec->states_[si++];

    if (rs.output.size() != m)
      fail(errc::non_bijective_output,
           "state '" + rs.name + "': output has " +
               std::to_string(rs.output.size()) + " entries, expected " +
               std::to_string(m));
    std::vector<std::uint32_t> img(m);
    for (std::uint32_t x = 0; x < m; ++x) {
      if (rs.output[x] < 1 || rs.output[x] > m)
        fail(errc::non_bijective_output, "state '" + rs.name +
                                             "': output letter " +
                                             std::to_string(rs.output[x]) +
                                             " out of range 1.." +
                                             std::to_string(m));
      img[x] = rs.output[x] - 1;
    }
    try {
      st.output = Perm(std::move(img));
    } catch (const Error &) {
      fail(errc::non_bijective_output,
           "state '" + rs.name + "': output is not a permutation");
    }

    if (rs.transitions.size() != m)
      fail(errc::unknown_transition_target,
           "state '" + rs.name + "': " + std::to_string(rs.transitions.size()) +
               " transitions, expected " + std::to_string(m));
    st.transition.reserve(m);
    for (const std::string &t : rs.transitions) {
      std::string name = t;
      bool inverted = false;
      if (name.size() > 3 && name.substr(name.size() - 3) == "^-1") {
        inverted = true;
        name = name.substr(0, name.size() - 3);
      }
      if (is_reserved(name)) {
        st.transition.push_back({kIdentityState, false});
        continue;
      }
      auto it = index.find(name);
      if (it == index.end())
        fail(errc::unknown_transition_target,
             "state '" + rs.name + "': transition target '" + t +
                 "' is not a declared state");
      st.transition.push_back({it->second, inverted});
    }
  }
  return spec;
}

std::shared_ptr<const AutomatonSpec>
AutomatonSpec::parse_json(const std::string &text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception &e) {
    fail(errc::parse_error, std::string("automaton JSON: ") + e.what());
  }
  Raw raw;
  try {
    raw.alphabet_size = doc.at("alphabet_size").get<std::uint32_t>();
    for (const auto &s : doc.at("states")) {
      Raw::RawState rs;
      rs.name = s.at("name").get<std::string>();
      rs.output = s.at("output").get<std::vector<std::uint32_t>>();
      rs.transitions = s.at("transitions").get<std::vector<std::string>>();
      raw.states.push_back(std::move(rs));
    }
  } catch (const nlohmann::json::exception &e) {
    fail(errc::parse_error, std::string("automaton JSON shape: ") + e.what());
  }
  return validate(raw);
}

std::shared_ptr<const AutomatonSpec>
AutomatonSpec::load_file(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    fail(errc::invalid_argument, "cannot open automaton file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_json(buf.str());
}

std::shared_ptr<const AutomatonSpec> AutomatonSpec::bsv(std::uint32_t m) {
  Degree deg(m);
  Raw raw;
  raw.alphabet_size = m;
  std::vector<std::uint32_t> sigma(m); // (1 2 ... m), 1-based images
  for (std::uint32_t x = 0; x < m; ++x)
    sigma[x] = (x + 1) % m + 1;
  Raw::RawState a{"a", sigma, std::vector<std::string>(m, "e")};
  a.transitions[m - 1] = "a";
  Raw::RawState b{"b", sigma, std::vector<std::string>(m, "e")};
  b.transitions[m - 1] = "b^-1";
  raw.states = {a, b};
  return validate(raw);
}

std::int32_t AutomatonSpec::state_index(const std::string &name) const {
  for (std::size_t i = 0; i < states_.size(); ++i)
    if (states_[i].name == name)
      return static_cast<std::int32_t>(i);
  return -1;
}

const std::string &AutomatonSpec::state_name(std::int32_t i) const {
  static const std::string e = "e";
  return i < 0 ? e : states_[static_cast<std::size_t>(i)].name;
}

bool AutomatonSpec::is_madic() const {
  std::vector<std::uint32_t> sigma(m_);
  for (std::uint32_t x = 0; x < m_; ++x)
    sigma[x] = (x + 1) % m_;
  Perm s{std::vector<std::uint32_t>(sigma)};
  std::vector<Perm> powers;
  Perm cur = Perm::identity(m_);
  for (std::uint32_t i = 0; i < m_; ++i) {
    powers.push_back(cur);
    cur = cur * s;
  }
  for (const State &st : states_) {
    bool found = false;
    for (const Perm &p : powers)
      found = found || p == st.output;
    if (!found)
      return false;
  }
  return true;
}

std::string AutomatonSpec::to_json() const {
  nlohmann::ordered_json doc;
  doc["alphabet_size"] = m_;
  doc["states"] = nlohmann::ordered_json::array();
  for (const State &st : states_) {
    nlohmann::ordered_json s;
    s["name"] = st.name;
    std::vector<std::uint32_t> out(m_);
    for (std::uint32_t x = 0; x < m_; ++x)
      out[x] = st.output[x] + 1;
    s["output"] = out;
    std::vector<std::string> tr;
    for (const SignedState &t : st.transition)
      tr.push_back(state_name(t.state) + (t.inverted ? "^-1" : ""));
    s["transitions"] = tr;
    doc["states"].push_back(std::move(s));
  }
  return doc.dump(2);
}

// ---------------------------------------------------------------------------
// Element

Element::Element(AutomatonPtr aut, std::vector<SignedState> word)
    : aut_(std::move(aut)), word_(std::move(word)) {}

namespace {

void push_reduced(std::vector<SignedState> &word, const SignedState &s) {
  if (s.state == kIdentityState)
    return;
  if (!word.empty() && word.back().state == s.state &&
      word.back().inverted != s.inverted) {
    word.pop_back();
    return;
  }
  word.push_back(s);
}

} // namespace

Element Element::identity(AutomatonPtr aut) { return Element(std::move(aut), {}); }

Element Element::generator(AutomatonPtr aut, std::int32_t state, bool inverted) {
  if (state < 0 || static_cast<std::size_t>(state) >= aut->state_count())
    fail(errc::invalid_argument, "generator index out of range");
  return Element(std::move(aut), {SignedState{state, inverted}});
}

Element Element::from_word(AutomatonPtr aut, std::vector<SignedState> word) {
  std::vector<SignedState> reduced;
  reduced.reserve(word.size());
  for (const SignedState &s : word) {
    if (s.state != kIdentityState &&
        static_cast<std::size_t>(s.state) >= aut->state_count())
      fail(errc::invalid_argument, "word references a nonexistent state");
    push_reduced(reduced, s);
  }
  return Element(std::move(aut), std::move(reduced));
}

Element Element::parse(AutomatonPtr aut, const std::string &text) {
  std::vector<SignedState> word;
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) {
    bool inverted = false;
    if (tok.size() > 3 && tok.substr(tok.size() - 3) == "^-1") {
      inverted = true;
      tok = tok.substr(0, tok.size() - 3);
    }
    if (tok == "e")
      continue;
    std::int32_t idx = aut->state_index(tok);
    if (idx < 0)
      fail(errc::parse_error, "unknown state '" + tok + "' in element word");
    push_reduced(word, SignedState{idx, inverted});
  }
  return Element(std::move(aut), std::move(word));
}

std::string Element::str() const {
  if (word_.empty())
    return "e";
  std::string s;
  for (const SignedState &f : word_) {
    if (!s.empty())
      s += ' ';
    s += aut_->state_name(f.state);
    if (f.inverted)
      s += "^-1";
  }
  return s;
}

Perm Element::root_label() const {
  Perm out = Perm::identity(m());
  for (const SignedState &f : word_) {
    const Perm &lab = aut_->state(static_cast<std::size_t>(f.state)).output;
    out = f.inverted ? out * lab.inverse() : out * lab;
  }
  return out;
}

std::uint32_t Element::apply_letter(std::uint32_t x) const {
  if (x < 1 || x > m())
    fail(errc::letter_out_of_range,
         "letter " + std::to_string(x) + " out of 1.." + std::to_string(m()));
  std::uint32_t p = x - 1;
  for (const SignedState &f : word_) {
    const Perm &lab = aut_->state(static_cast<std::size_t>(f.state)).output;
    p = f.inverted ? lab.inverse()[p] : lab[p];
  }
  return p + 1;
}

Element Element::section(std::uint32_t letter) const {
  if (letter < 1 || letter > m())
    fail(errc::letter_out_of_range, "letter " + std::to_string(letter) +
                                        " out of 1.." + std::to_string(m()));
  std::vector<SignedState> word;
  std::uint32_t p = letter - 1; // current point, 0-based
  for (const SignedState &f : word_) {
    const auto &st = aut_->state(static_cast<std::size_t>(f.state));
    if (!f.inverted) {
      push_reduced(word, st.transition[p]);
      p = st.output[p];
    } else {
      // g^-1 |_x = (g|_y)^-1 with y = (x) pi_g^-1.
      std::uint32_t y = st.output.inverse()[p];
      SignedState t = st.transition[y];
      t.inverted = !t.inverted;
      push_reduced(word, t);
      p = y;
    }
  }
  return Element(aut_, std::move(word));
}

Element Element::section(const Vertex &v) const {
  Element g = *this;
  for (std::uint32_t x : v.letters)
    g = g.section(x);
  return g;
}

Vertex Element::apply(const Vertex &v) const {
  Element g = *this;
  std::vector<std::uint32_t> out;
  out.reserve(v.length());
  for (std::uint32_t x : v.letters) {
    out.push_back(g.apply_letter(x));
    g = g.section(x);
  }
  return Vertex(std::move(out));
}

namespace {

// Recursive wreath evaluation with per-level memoization on reduced words;
// sections of bounded words repeat heavily across the tree.
Perm level_perm_rec(const Element &g, std::uint32_t n,
                    std::vector<std::map<std::vector<SignedState>, Perm>> &memo) {
  if (n == 0)
    return Perm::identity(1);
  auto &cache = memo[n - 1];
  auto it = cache.find(g.word());
  if (it != cache.end())
    return it->second;

  const std::uint32_t m = g.m();
  std::uint64_t d = 1;
  for (std::uint32_t i = 1; i < n; ++i)
    d *= m;
  Perm label = g.root_label();
  std::vector<std::uint32_t> img(d * m);
  for (std::uint32_t x = 0; x < m; ++x) {
    Perm block = level_perm_rec(g.section(x + 1), n - 1, memo);
    std::uint64_t src = static_cast<std::uint64_t>(x) * d;
    std::uint64_t dst = static_cast<std::uint64_t>(label[x]) * d;
    for (std::uint64_t r = 0; r < d; ++r)
      img[src + r] = static_cast<std::uint32_t>(dst + block[static_cast<std::uint32_t>(r)]);
  }
  Perm res{std::move(img)};
  cache.emplace(g.word(), res);
  return res;
}

} // namespace

Perm Element::level_perm(std::uint32_t n, std::uint64_t point_budget) const {
  // Level 0 is the trivial action on the root alone.
  checked_points(m(), n, point_budget);
  std::vector<std::map<std::vector<SignedState>, Perm>> memo(n);
  return level_perm_rec(*this, n, memo);
}

Element Element::inverse() const {
  std::vector<SignedState> word(word_.rbegin(), word_.rend());
  for (SignedState &s : word)
    s.inverted = !s.inverted;
  return Element(aut_, std::move(word));
}

Element Element::pow(std::int64_t e) const {
  Element base = e < 0 ? inverse() : *this;
  std::uint64_t k = static_cast<std::uint64_t>(e < 0 ? -e : e);
  Element acc = Element::identity(aut_);
  for (std::uint64_t i = 0; i < k; ++i)
    acc = acc * base;
  return acc;
}

bool Element::operator==(const Element &other) const {
  return aut_ == other.aut_ && word_ == other.word_;
}

Element operator*(const Element &a, const Element &b) {
  if (a.automaton_ptr() != b.automaton_ptr())
    fail(errc::invalid_argument, "elements of different automata");
  std::vector<SignedState> word = a.word();
  for (const SignedState &s : b.word())
    push_reduced(word, s);
  return Element::from_word(a.automaton_ptr(), std::move(word));
}

Element conjugate(const Element &g, const Element &h) {
  return h.inverse() * g * h;
}

Element commutator(const Element &g, const Element &h) {
  return g.inverse() * h.inverse() * g * h;
}

// ---------------------------------------------------------------------------
// Block permutation helpers

Perm embed_at_child(const Perm &q, std::uint32_t child, std::uint32_t m) {
  if (m < 2)
    fail(errc::invalid_argument, "alphabet size must be at least 2");
  if (child < 1 || child > m)
    fail(errc::letter_out_of_range, "child " + std::to_string(child) +
                                        " out of 1.." + std::to_string(m));
  const std::size_t d = q.degree();
  if (d == 0)
    fail(errc::empty_degree, "cannot embed a permutation of degree 0");
  std::vector<std::uint32_t> img(d * m);
  for (std::uint32_t p = 0; p < img.size(); ++p)
    img[p] = p;
  const std::size_t base = static_cast<std::size_t>(child - 1) * d;
  for (std::uint32_t r = 0; r < d; ++r)
    img[base + r] = static_cast<std::uint32_t>(base + q[r]);
  return Perm{std::move(img)};
}

Perm block_lift(const Perm &label, std::size_t block_size) {
  if (block_size == 0)
    fail(errc::empty_degree, "block size must be positive");
  std::vector<std::uint32_t> img(label.degree() * block_size);
  for (std::uint32_t x = 0; x < label.degree(); ++x) {
    std::size_t src = static_cast<std::size_t>(x) * block_size;
    std::size_t dst = static_cast<std::size_t>(label[x]) * block_size;
    for (std::size_t r = 0; r < block_size; ++r)
      img[src + r] = static_cast<std::uint32_t>(dst + r);
  }
  return Perm{std::move(img)};
}

Perm perm_section_at_child(const Perm &q, std::uint32_t child, std::uint32_t m) {
  if (child < 1 || child > m)
    fail(errc::letter_out_of_range, "child " + std::to_string(child) +
                                        " out of 1.." + std::to_string(m));
  if (q.degree() % m != 0)
    fail(errc::degree_mismatch, "degree " + std::to_string(q.degree()) +
                                    " is not divisible by " + std::to_string(m));
  const std::size_t d = q.degree() / m;
  const std::size_t base = static_cast<std::size_t>(child - 1) * d;
  std::vector<std::uint32_t> img(d);
  for (std::size_t r = 0; r < d; ++r) {
    std::uint32_t to = q[static_cast<std::uint32_t>(base + r)];
    if (to < base || to >= base + d)
      fail(errc::not_block_diagonal,
           "permutation does not preserve the block of child " +
               std::to_string(child));
    img[r] = static_cast<std::uint32_t>(to - base);
  }
  return Perm{std::move(img)};
}

// ---------------------------------------------------------------------------

const char *errc_name(errc code) {
  switch (code) {
  case errc::non_bijective_output: return "NonBijectiveOutput";
  case errc::unknown_transition_target: return "UnknownTransitionTarget";
  case errc::duplicate_state_name: return "DuplicateStateName";
  case errc::reserved_name_misuse: return "ReservedNameMisuse";
  case errc::letter_out_of_range: return "LetterOutOfRange";
  case errc::point_budget_exceeded: return "PointBudgetExceeded";
  case errc::degree_mismatch: return "DegreeMismatch";
  case errc::not_block_diagonal: return "NotBlockDiagonal";
  case errc::empty_degree: return "EmptyDegree";
  case errc::not_a_permutation: return "NotAPermutation";
  case errc::element_not_in_group: return "ElementNotInGroup";
  case errc::not_normal: return "NotNormal";
  case errc::not_a_subgroup: return "NotASubgroup";
  case errc::non_dividing_order: return "NonDividingOrder";
  case errc::point_out_of_range: return "PointOutOfRange";
  case errc::dimension_mismatch: return "DimensionMismatch";
  case errc::bad_modulus: return "BadModulus";
  case errc::not_madic: return "NotMAdic";
  case errc::factorization_incomplete: return "FactorizationIncomplete";
  case errc::unsupported_format: return "UnsupportedFormat";
  case errc::invalid_argument: return "InvalidArgument";
  case errc::parse_error: return "ParseError";
  }
  return "UnknownError";
}

} // namespace treedim
