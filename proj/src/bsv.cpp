#include "treedim/bsv.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <tuple>

#include "treedim/error.hpp"
#include "treedim/intlin.hpp"

namespace treedim {

namespace {

CheckRecord budget_skip(std::string check, std::uint32_t m, std::uint32_t n,
                        std::optional<std::uint32_t> k = {},
                        std::optional<std::int64_t> j = {}) {
  CheckRecord rec;
  rec.check = std::move(check);
  rec.m = m;
  rec.n = n;
  rec.k = k;
  rec.j = j;
  rec.expected = "-";
  rec.actual = "-";
  rec.pass = true;
  rec.skipped = true;
  rec.note = "point budget: level " + std::to_string(n) + " needs " +
             std::to_string(m) + "^" + std::to_string(n) + " points";
  return rec;
}

CheckRecord definition_skip(std::uint32_t m, std::uint32_t k,
                            const std::string &why) {
  CheckRecord rec;
  rec.check = "prop34";
  rec.m = m;
  rec.k = k;
  rec.expected = "-";
  rec.actual = "-";
  rec.pass = true;
  rec.skipped = true;
  rec.note = "skipped by definition: " + why;
  return rec;
}

Perm perm_commutator(const Perm &x, const Perm &y) {
  return x.inverse() * y.inverse() * x * y;
}

} // namespace

bool report_ok(const Report &r) {
  for (const CheckRecord &rec : r)
    if (!rec.skipped && !rec.pass)
      return false;
  return true;
}

bool report_all_skipped(const Report &r) {
  if (r.empty())
    return false;
  for (const CheckRecord &rec : r)
    if (!rec.skipped)
      return false;
  return true;
}

void sort_report(Report &r) {
  auto key = [](const CheckRecord &rec) {
    return std::make_tuple(rec.check,
                           rec.n ? static_cast<std::int64_t>(*rec.n) : -1,
                           rec.k ? static_cast<std::int64_t>(*rec.k) : -1,
                           rec.j ? *rec.j : -1);
  };
  std::stable_sort(r.begin(), r.end(),
                   [&](const CheckRecord &x, const CheckRecord &y) {
                     return key(x) < key(y);
                   });
}

// ---------------------------------------------------------------------------
// BSVContext

BSVContext::BSVContext(std::uint32_t m, std::uint64_t point_budget)
    : m_(m), budget_(point_budget), spec_(AutomatonSpec::bsv(m)),
      a_(Element::generator(spec_, spec_->state_index("a"))),
      b_(Element::generator(spec_, spec_->state_index("b"))),
      ab_(a_ * b_), lambda_(a_ * b_.inverse()) {}

Element BSVContext::c(std::uint32_t i) const {
  if (i + 1 >= m_)
    fail(errc::invalid_argument,
         "conjugate index " + std::to_string(i) + " outside 0.." +
             std::to_string(m_ - 2));
  return conjugate(commutator(lambda_, a_), a_.pow(i));
}

const PermGroup &BSVContext::level_quotient(std::uint32_t n) const {
  auto it = level_cache_.find(n);
  if (it != level_cache_.end())
    return it->second;
  PermGroup g = PermGroup::from_generators(
      checked_points(m_, n, budget_),
      {a_.level_perm(n, budget_), b_.level_perm(n, budget_)});
  return level_cache_.emplace(n, std::move(g)).first->second;
}

const PermGroup &BSVContext::derived_quotient(std::uint32_t n) const {
  auto it = derived_cache_.find(n);
  if (it != derived_cache_.end())
    return it->second;
  PermGroup d = level_quotient(n).derived_subgroup();
  return derived_cache_.emplace(n, std::move(d)).first->second;
}

const PermGroup &BSVContext::l2_quotient(std::uint32_t n) const {
  if (n < 2)
    fail(errc::invalid_argument,
         "the branching image lives at level 2 and deeper");
  auto it = l2_cache_.find(n);
  if (it != l2_cache_.end())
    return it->second;
  checked_points(m_, n, budget_);
  PermGroup prod = PermGroup::block_product(derived_quotient(n - 1), m_);
  const PermGroup &amb = derived_quotient(n);
  for (const Perm &g : prod.generators())
    if (!amb.contains(g))
      fail(errc::not_a_subgroup,
           "branching image escapes the derived image at level " +
               std::to_string(n));
  return l2_cache_.emplace(n, std::move(prod)).first->second;
}

BigInt BSVContext::ab_order_mod_derived(std::uint32_t n) const {
  if (n == 0)
    return 1;
  return order_mod_subgroup(ab_.level_perm(n, budget_), derived_quotient(n),
                            level_quotient(n));
}

BigInt BSVContext::predicted_ab_order(std::uint32_t n) const {
  if (n == 0)
    return 1;
  LevelParams lp(n);
  BigInt v = pow(BigInt(m_), lp.k + lp.e);
  if (tau() == 1 && lp.e == 1)
    v /= 2;
  return v;
}

BigInt BSVContext::predicted_prop35_index(std::uint32_t n) const {
  if (n < 2)
    fail(errc::invalid_argument, "index prediction needs n >= 2");
  LevelParams lp(n);
  BigInt v = pow(BigInt(m_), (m_ - 1) * lp.k);
  if (tau() == 1 && lp.e == 0) // e_{n-1} = 1 - e_n
    v /= pow(BigInt(2), m_ - 1);
  return v;
}

LogIndex BSVContext::predicted_s(std::uint32_t n) const {
  LevelParams lp(n);
  const std::int64_t mm1 = static_cast<std::int64_t>(m_) - 1;
  const std::int64_t two_e = 2 * static_cast<std::int64_t>(lp.e) - 1;
  LogIndex s = BigRat(mm1 * two_e * tau()) * LogIndex::log2(m_);
  s -= LogIndex::of_rational(BigRat(mm1 * lp.e), m_);
  return s;
}

std::uint32_t BSVContext::default_k_max() const {
  if (m_ == 2)
    return 3;
  if (m_ == 3 || m_ == 4)
    return 1;
  std::uint32_t max_level = 0;
  std::uint64_t pts = 1;
  while (pts <= budget_ / m_) {
    pts *= m_;
    ++max_level;
  }
  const std::uint32_t need = m_ % 2 == 0 ? 3 : 2; // deepest level at k = 0
  return max_level > need ? (max_level - need) / 2 : 0;
}

std::vector<BigInt> BSVContext::derived_order_sequence(
    std::uint32_t n_max) const {
  std::vector<BigInt> out;
  for (std::uint32_t n = 1; n <= n_max; ++n) {
    if (!level_fits(m_, n, budget_))
      break;
    out.push_back(derived_quotient(n).order());
  }
  return out;
}

LevelData BSVContext::level_data(std::uint32_t n) const {
  if (n == 0)
    fail(errc::invalid_argument, "level data starts at n = 1");
  checked_points(m_, n + 1, budget_); // s_n looks one level deeper
  const PermGroup &H = level_quotient(n);
  const PermGroup &D = derived_quotient(n);
  const BigInt o_prev = derived_quotient(n - 1).order();
  const BigInt o_here = D.order();
  const BigInt o_next = derived_quotient(n + 1).order();
  if (o_here % o_prev != 0 || o_next % o_here != 0)
    fail(errc::non_dividing_order, "derived orders do not form a chain");
  LogIndex s = BigRat(m_) * LogIndex::of_order(o_here / o_prev, m_) -
               LogIndex::of_order(o_next / o_here, m_);
  return LevelData{
      n,
      H.order(),
      o_here,
      n >= 2 ? l2_quotient(n).order() : BigInt(1),
      ab_order_mod_derived(n),
      order_mod_subgroup(lambda_.level_perm(n, budget_), D, H),
      std::move(s)};
}

std::pair<BigRat, BigRat> BSVContext::hausdorff_closed_form() const {
  BigRat p(BigInt(m_), BigInt(m_ + 1));
  BigRat q = tau() == 1
                 ? BigRat(BigInt(-static_cast<std::int64_t>(m_ - 1)),
                          BigInt(m_ + 1))
                 : BigRat(0);
  return {std::move(p), std::move(q)};
}

double BSVContext::hausdorff_closed_form_value() const {
  auto [p, q] = hausdorff_closed_form();
  return p.convert_to<double>() +
         q.convert_to<double>() * std::log(2.0) /
             std::log(static_cast<double>(m_));
}

bool BSVContext::in_derived_preimage(const Element &x, std::uint32_t n) const {
  if (n == 0)
    return true;
  return derived_quotient(n).contains(x.level_perm(n, budget_));
}

CheckRecord BSVContext::membership_record(
    const Element &x, const std::string &xname, std::uint32_t level,
    bool want_member, const std::string &stmt, std::uint32_t k,
    std::optional<std::int64_t> j) const {
  CheckRecord rec;
  rec.check = "prop34";
  rec.m = m_;
  rec.n = level;
  rec.k = k;
  rec.j = j;
  rec.expected = want_member ? "member" : "nonmember";
  const bool got = in_derived_preimage(x, level);
  rec.actual = got ? "member" : "nonmember";
  rec.pass = got == want_member;
  rec.note = stmt + ": " + xname +
             (want_member ? " lies in" : " stays outside") +
             " the derived preimage at level " + std::to_string(level);
  return rec;
}

Report BSVContext::verify_prop34(std::uint32_t k_max) const {
  Report r;
  auto pair_check = [&](const Element &x, const std::string &xname,
                        std::uint32_t in_level, const std::string &stmt,
                        std::uint32_t k, std::optional<std::int64_t> j) {
    if (level_fits(m_, in_level, budget_))
      r.push_back(membership_record(x, xname, in_level, true, stmt, k, j));
    else
      r.push_back(budget_skip("prop34", m_, in_level, k, j));
    if (level_fits(m_, in_level + 1, budget_))
      r.push_back(membership_record(x, xname, in_level + 1, false, stmt, k, j));
    else
      r.push_back(budget_skip("prop34", m_, in_level + 1, k, j));
  };

  for (std::uint32_t k = 0; k <= k_max; ++k) {
    BigInt mk = pow(BigInt(m_), k);
    if (m_ % 2 == 1) {
      for (std::uint32_t j = 1; j <= m_ - 1; ++j) {
        const std::int64_t exp =
            static_cast<std::int64_t>(j) * mk.convert_to<std::int64_t>();
        const std::string base = "(ab)^" + std::to_string(exp);
        pair_check(ab_.pow(exp), base, 2 * k, "P1", k, j);
        pair_check(lambda_.pow(exp), "lambda^" + std::to_string(exp),
                   2 * k + 1, "P2", k, j);
      }
      r.push_back(definition_skip(
          m_, k, "Q1/Q2 concern even alphabet sizes"));
      r.push_back(definition_skip(
          m_, k, "R1/R2 concern even alphabet sizes of at least 4"));
    } else {
      r.push_back(definition_skip(m_, k, "P1/P2 concern odd alphabet sizes"));
      const std::int64_t half =
          (mk * m_ / 2).convert_to<std::int64_t>(); // m^(k+1)/2
      pair_check(ab_.pow(half), "(ab)^" + std::to_string(half), 2 * k + 1,
                 "Q1", k, std::nullopt);
      pair_check(lambda_.pow(half), "lambda^" + std::to_string(half),
                 2 * k + 2, "Q2", k, std::nullopt);
      if (m_ >= 4) {
        for (std::uint32_t j = 1; j <= m_ - 1; ++j) {
          if (j == m_ / 2)
            continue;
          const std::int64_t exp =
              static_cast<std::int64_t>(j) * mk.convert_to<std::int64_t>();
          pair_check(ab_.pow(exp), "(ab)^" + std::to_string(exp), 2 * k, "R1",
                     k, j);
          pair_check(lambda_.pow(exp), "lambda^" + std::to_string(exp),
                     2 * k + 1, "R2", k, j);
        }
      } else {
        r.push_back(definition_skip(m_, k, "R1/R2 have an empty j range"));
      }
    }
  }
  sort_report(r);
  return r;
}

Report BSVContext::verify_lemma32(std::uint32_t n) const {
  if (n < 2)
    fail(errc::invalid_argument, "second-level structure needs n >= 2");
  Report r;
  if (!level_fits(m_, n, budget_)) {
    r.push_back(budget_skip("lemma32", m_, n));
    return r;
  }
  const BigInt ell = ab_order_mod_derived(n - 1);
  {
    CheckRecord rec;
    rec.check = "lemma32";
    rec.m = m_;
    rec.n = n;
    rec.expected = predicted_ab_order(n - 1).str();
    rec.actual = ell.str();
    rec.pass = rec.expected == rec.actual;
    rec.note = "cyclic order: order of ab modulo the derived image one "
               "level down";
    r.push_back(std::move(rec));
  }
  {
    CheckRecord rec;
    rec.check = "lemma32";
    rec.m = m_;
    rec.n = n;
    rec.k = 0;
    rec.expected = BigInt(pow(ell, m_ - 1)).str();
    rec.actual = derived_quotient(n).index_of(l2_quotient(n)).str();
    rec.pass = rec.expected == rec.actual;
    rec.note = "index of the branching image in the derived image is the "
               "cyclic order to the (m-1)-th power";
    r.push_back(std::move(rec));
  }
  for (std::uint32_t i = 0; i + 1 < m_; ++i) {
    CheckRecord rec;
    rec.check = "lemma32";
    rec.m = m_;
    rec.n = n;
    rec.k = 1;
    rec.j = i;
    rec.expected = ell.str();
    rec.actual = order_mod_subgroup(c(i).level_perm(n, budget_),
                                    l2_quotient(n), derived_quotient(n))
                     .str();
    rec.pass = rec.expected == rec.actual;
    rec.note = "generator " + std::to_string(i) +
               " has the cyclic order modulo the branching image";
    r.push_back(std::move(rec));
  }
  for (std::uint32_t i = 0; i + 1 < m_; ++i) {
    Perm pi = c(i).level_perm(n, budget_);
    for (std::uint32_t j = i + 1; j + 1 < m_; ++j) {
      Perm pj = c(j).level_perm(n, budget_);
      CheckRecord rec;
      rec.check = "lemma32";
      rec.m = m_;
      rec.n = n;
      rec.k = 2 + i;
      rec.j = j;
      rec.expected = "commute";
      rec.actual = l2_quotient(n).contains(perm_commutator(pi, pj))
                       ? "commute"
                       : "do not commute";
      rec.pass = rec.expected == rec.actual;
      rec.note = "generators " + std::to_string(i) + " and " +
                 std::to_string(j) + " commute modulo the branching image";
      r.push_back(std::move(rec));
    }
  }
  sort_report(r);
  return r;
}

Report BSVContext::verify_prop35(std::uint32_t n_max) const {
  Report r;
  for (std::uint32_t n = 2; n <= n_max; ++n) {
    if (!level_fits(m_, n, budget_)) {
      r.push_back(budget_skip("prop35", m_, n));
      continue;
    }
    CheckRecord rec;
    rec.check = "prop35";
    rec.m = m_;
    rec.n = n;
    rec.expected = predicted_prop35_index(n).str();
    rec.actual = derived_quotient(n).index_of(l2_quotient(n)).str();
    rec.pass = rec.expected == rec.actual;
    rec.note = "index of the branching image in the derived image";
    r.push_back(std::move(rec));
  }
  sort_report(r);
  return r;
}

Report BSVContext::verify_structure(std::uint32_t n) const {
  if (n == 0)
    fail(errc::invalid_argument, "structure checks start at level 1");
  Report r;
  if (!level_fits(m_, n, budget_)) {
    r.push_back(budget_skip("structure", m_, n));
    return r;
  }
  {
    CheckRecord rec;
    rec.check = "structure";
    rec.m = m_;
    rec.n = n;
    rec.k = 1;
    rec.expected = "transitive";
    rec.actual = level_quotient(n).is_transitive() ? "transitive"
                                                   : "intransitive";
    rec.pass = rec.expected == rec.actual;
    rec.note = "the level action has a single orbit";
    r.push_back(std::move(rec));
  }
  {
    // product of the m first-level sections of each derived-image generator
    // falls into the derived image one level down
    const std::vector<Perm> &gens = derived_quotient(n).generators();
    if (gens.empty()) {
      CheckRecord rec;
      rec.check = "structure";
      rec.m = m_;
      rec.n = n;
      rec.k = 2;
      rec.expected = "member";
      rec.actual = "member";
      rec.pass = true;
      rec.note = "vacuous: the derived image has no generators";
      r.push_back(std::move(rec));
    }
    for (std::size_t gi = 0; gi < gens.size(); ++gi) {
      Perm prod = Perm::identity(checked_points(m_, n - 1, budget_));
      for (std::uint32_t child = 1; child <= m_; ++child)
        prod = prod * perm_section_at_child(gens[gi], child, m_);
      CheckRecord rec;
      rec.check = "structure";
      rec.m = m_;
      rec.n = n;
      rec.k = 2;
      rec.j = static_cast<std::int64_t>(gi);
      rec.expected = "member";
      rec.actual = derived_quotient(n - 1).contains(prod) ? "member"
                                                          : "nonmember";
      rec.pass = rec.expected == rec.actual;
      rec.note = "section product of derived generator " + std::to_string(gi) +
                 " lies in the derived image one level down";
      r.push_back(std::move(rec));
    }
  }
  {
    const std::vector<Perm> &gens = derived_quotient(n - 1).generators();
    if (gens.empty()) {
      CheckRecord rec;
      rec.check = "structure";
      rec.m = m_;
      rec.n = n;
      rec.k = 3;
      rec.expected = "member";
      rec.actual = "member";
      rec.pass = true;
      rec.note = "vacuous: no derived generators one level down to embed";
      r.push_back(std::move(rec));
    }
    for (std::size_t gi = 0; gi < gens.size(); ++gi)
      for (std::uint32_t child = 1; child <= m_; ++child) {
        CheckRecord rec;
        rec.check = "structure";
        rec.m = m_;
        rec.n = n;
        rec.k = 3;
        rec.j = static_cast<std::int64_t>(gi) * m_ + (child - 1);
        rec.expected = "member";
        rec.actual = derived_quotient(n).contains(
                         embed_at_child(gens[gi], child, m_))
                         ? "member"
                         : "nonmember";
        rec.pass = rec.expected == rec.actual;
        rec.note = "derived generator " + std::to_string(gi) +
                   " embedded below child " + std::to_string(child) +
                   " lies in the derived image";
        r.push_back(std::move(rec));
      }
  }
  {
    // sections of the level-1 stabilizer generators at any child generate
    // the whole group one level down
    std::vector<Element> stab;
    stab.push_back(a_.pow(m_));
    for (std::uint32_t i = 0; i < m_; ++i) {
      std::int64_t back = -static_cast<std::int64_t>((i + 1) % m_);
      stab.push_back(a_.pow(i) * b_ * a_.pow(back));
    }
    const BigInt want = level_quotient(n - 1).order();
    for (std::uint32_t child = 1; child <= m_; ++child) {
      std::vector<Perm> gens;
      gens.reserve(stab.size());
      for (const Element &s : stab)
        gens.push_back(s.section(child).level_perm(n - 1, budget_));
      PermGroup proj = PermGroup::from_generators(
          checked_points(m_, n - 1, budget_), gens);
      CheckRecord rec;
      rec.check = "structure";
      rec.m = m_;
      rec.n = n;
      rec.k = 4;
      rec.j = child;
      rec.expected = want.str();
      rec.actual = proj.order().str();
      rec.pass = rec.expected == rec.actual;
      rec.note = "level-1 stabilizer sections at child " +
                 std::to_string(child) +
                 " generate the whole quotient one level down";
      r.push_back(std::move(rec));
    }
  }
  sort_report(r);
  return r;
}

Report BSVContext::verify_matrix_A() const {
  constexpr std::uint32_t kLevel = 3;
  Report r;
  if (!level_fits(m_, kLevel, budget_)) {
    r.push_back(budget_skip("matrixA", m_, kLevel));
    return r;
  }
  const BigInt ell = ab_order_mod_derived(kLevel);
  const IntMatrix A = build_matrix_A(m_);
  for (std::uint32_t i = 0; i + 1 < m_; ++i) {
    const Element ci = c(i);
    if (!ci.root_label().is_identity())
      fail(errc::not_block_diagonal,
           "commutator conjugate moves the first level");
    for (std::uint32_t child = 1; child <= m_; ++child) {
      const Element sec = ci.section(child);
      // residues t with section * (ab)^-t in the derived preimage; the
      // exponent pattern is only determined modulo the order of ab there
      std::vector<BigInt> hits;
      for (BigInt t = 0; t < ell; ++t)
        if (in_derived_preimage(sec * ab_.pow(-t.convert_to<std::int64_t>()),
                                kLevel))
          hits.push_back(t);
      BigInt row_val = A.at(i, child - 1);
      BigInt want = ((row_val % ell) + ell) % ell;
      std::ostringstream actual;
      if (hits.size() == 1)
        actual << hits.front().str() << " (mod " << ell.str() << ")";
      else {
        actual << "ambiguous {";
        for (std::size_t h = 0; h < hits.size(); ++h)
          actual << (h ? "," : "") << hits[h].str();
        actual << "} (mod " << ell.str() << ")";
      }
      CheckRecord rec;
      rec.check = "matrixA";
      rec.m = m_;
      rec.n = kLevel;
      rec.k = i;
      rec.j = child;
      rec.expected = want.str() + " (mod " + ell.str() + ")";
      rec.actual = actual.str();
      rec.pass = hits.size() == 1 && hits.front() == want;
      rec.note = "exponent of ab in coordinate " + std::to_string(child) +
                 " of conjugate " + std::to_string(i) +
                 " matches the integer matrix row " + std::to_string(i + 1);
      r.push_back(std::move(rec));
    }
  }
  sort_report(r);
  return r;
}

} // namespace treedim
