#include "treedim/dimension.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numeric>

#include "json.hpp"

#include "treedim/error.hpp"

namespace treedim {

using ordered_json = nlohmann::ordered_json;

LogIndex gamma_index_log(std::uint32_t m, std::uint32_t n) {
  if (n == 0)
    fail(errc::invalid_argument, "level must be at least 1");
  BigInt count = (pow(BigInt(m), n) - 1) / (m - 1);
  return LogIndex::of_rational(BigRat(count), m);
}

PermGroup gamma_level_group(std::uint32_t m, std::uint32_t n,
                            std::uint64_t point_budget) {
  const std::uint64_t pts = checked_points(m, n, point_budget);
  std::vector<Perm> gens;
  std::uint64_t stride = pts; // m^(n - depth)
  for (std::uint32_t depth = 0; depth < n; ++depth) {
    const std::uint64_t sub = stride / m;
    const std::uint64_t vertices = pts / stride;
    for (std::uint64_t v = 0; v < vertices; ++v) {
      std::vector<std::uint32_t> img(pts);
      std::iota(img.begin(), img.end(), 0u);
      const std::uint64_t base = v * stride;
      for (std::uint64_t x = 0; x < m; ++x) {
        const std::uint64_t to = ((x + 1) % m) * sub;
        for (std::uint64_t r = 0; r < sub; ++r)
          img[base + x * sub + r] = static_cast<std::uint32_t>(base + to + r);
      }
      gens.emplace_back(std::move(img));
    }
    stride = sub;
  }
  PermGroup g = PermGroup::from_generators(pts, gens);
  const BigInt log_order = (pow(BigInt(m), n) - 1) / (m - 1);
  if (g.order() != pow(BigInt(m), log_order.convert_to<unsigned>()))
    fail(errc::invalid_argument,
         "internal: full level group has unexpected order");
  return g;
}

std::vector<BigInt> index_sequence(const AutomatonPtr &spec, std::uint32_t N,
                                   std::uint64_t point_budget,
                                   bool require_madic) {
  if (require_madic && !spec->is_madic())
    fail(errc::not_madic,
         "some state output is not a power of the full rotation");
  std::vector<Element> gens;
  gens.reserve(spec->state_count());
  for (std::size_t i = 0; i < spec->state_count(); ++i)
    gens.push_back(Element::generator(spec, static_cast<std::int32_t>(i)));
  std::vector<BigInt> out;
  for (std::uint32_t n = 1; n <= N; ++n) {
    if (!level_fits(spec->m(), n, point_budget)) {
      if (n == 1)
        checked_points(spec->m(), 1, point_budget); // throws
      break;
    }
    std::vector<Perm> lgens;
    lgens.reserve(gens.size());
    for (const Element &g : gens)
      lgens.push_back(g.level_perm(n, point_budget));
    out.push_back(
        PermGroup::from_generators(checked_points(spec->m(), n, point_budget),
                                   lgens)
            .order());
  }
  return out;
}

std::vector<LogIndex> s_sequence(const std::vector<BigInt> &orders,
                                 std::uint32_t m) {
  std::vector<LogIndex> out;
  for (std::size_t n = 1; n + 1 <= orders.size(); ++n) {
    const BigInt &prev = n >= 2 ? orders[n - 2] : BigInt(1);
    const BigInt &here = orders[n - 1];
    const BigInt &next = orders[n];
    if (here % prev != 0 || next % here != 0)
      fail(errc::non_dividing_order,
           "level order at n = " + std::to_string(n) +
               " does not divide its neighbor");
    out.push_back(BigRat(m) * LogIndex::of_order(here / prev, m) -
                  LogIndex::of_order(next / here, m));
  }
  return out;
}

double bsv_series_bound(std::uint32_t m) {
  return (m - 1) * (1.0 + std::log(2.0) / std::log(static_cast<double>(m)));
}

TheoremB theorem_b_value(const std::vector<BigInt> &orders, std::uint32_t m,
                         std::uint32_t N,
                         std::optional<double> bound_constant) {
  if (orders.size() < static_cast<std::size_t>(N) + 1)
    fail(errc::invalid_argument,
         "series truncation at N = " + std::to_string(N) + " needs " +
             std::to_string(N + 1) + " level orders");
  const std::vector<LogIndex> s = s_sequence(orders, m);
  double estimate = LogIndex::of_order(orders.front(), m).to_double();
  double observed = 0.0;
  for (std::uint32_t n = 1; n <= N; ++n) {
    const double sn = s[n - 1].to_double();
    estimate -= sn * std::pow(static_cast<double>(m), -static_cast<double>(n));
    observed = std::max(observed, std::fabs(sn));
  }
  const double bound = bound_constant.value_or(observed);
  const double tail = bound *
                      std::pow(static_cast<double>(m), -static_cast<double>(N)) /
                      (1.0 - 1.0 / m);
  return TheoremB{estimate, tail, bound};
}

std::vector<double> ratio_sequence(const std::vector<BigInt> &orders,
                                   std::uint32_t m) {
  std::vector<double> out;
  out.reserve(orders.size());
  for (std::size_t i = 0; i < orders.size(); ++i) {
    const std::uint32_t n = static_cast<std::uint32_t>(i) + 1;
    out.push_back(LogIndex::of_order(orders[i], m).to_double() /
                  gamma_index_log(m, n).to_double());
  }
  return out;
}

std::optional<std::uint32_t> detect_period(const std::vector<LogIndex> &s) {
  for (std::uint32_t p = 1; 2 * static_cast<std::size_t>(p) <= s.size(); ++p) {
    bool ok = true;
    for (std::size_t i = 0; i + p < s.size() && ok; ++i)
      ok = s[i] == s[i + p];
    if (ok)
      return p;
  }
  return std::nullopt;
}

std::string format_float(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

double normalize_float(double v) {
  return std::strtod(format_float(v).c_str(), nullptr);
}

DimensionReport build_report(const std::vector<BigInt> &orders,
                             std::uint32_t m, std::string group_id,
                             std::optional<ClosedForm> closed_form,
                             std::optional<std::uint32_t> skipped_from,
                             std::optional<double> bound_constant) {
  DimensionReport rep;
  rep.m = m;
  rep.group = std::move(group_id);
  if (closed_form) {
    closed_form->value = normalize_float(closed_form->value);
    rep.closed_form = std::move(closed_form);
  }
  rep.skipped_from = skipped_from;
  const std::vector<LogIndex> s = s_sequence(orders, m);
  for (std::size_t i = 0; i < orders.size(); ++i) {
    const std::uint32_t n = static_cast<std::uint32_t>(i) + 1;
    LevelRecord rec;
    rec.n = n;
    rec.index = orders[i];
    rec.log_index = LogIndex::of_order(orders[i], m);
    if (i < s.size())
      rec.s_n = s[i];
    rec.ratio = normalize_float(rec.log_index.to_double() /
                                gamma_index_log(m, n).to_double());
    const std::uint32_t n_eff =
        std::min<std::uint32_t>(n, static_cast<std::uint32_t>(s.size()));
    const TheoremB tb = theorem_b_value(orders, m, n_eff, bound_constant);
    rec.partial_dim = normalize_float(tb.estimate);
    rec.tail = normalize_float(tb.tail);
    rep.levels.push_back(std::move(rec));
  }
  return rep;
}

std::string export_report_json(const DimensionReport &report) {
  ordered_json doc;
  doc["m"] = report.m;
  doc["group"] = report.group;
  ordered_json levels = ordered_json::array();
  for (const LevelRecord &rec : report.levels) {
    ordered_json row;
    row["n"] = rec.n;
    row["index"] = rec.index.str();
    row["log_index"] = rec.log_index.str();
    if (rec.s_n)
      row["s_n"] = rec.s_n->str();
    row["ratio"] = rec.ratio;
    row["partial_dim"] = rec.partial_dim;
    row["tail"] = rec.tail;
    levels.push_back(std::move(row));
  }
  doc["levels"] = std::move(levels);
  if (report.closed_form) {
    ordered_json cf;
    cf["rational"] = report.closed_form->rational.str();
    cf["log2_coeff"] = report.closed_form->log2_coeff.str();
    cf["float"] = report.closed_form->value;
    doc["closed_form"] = std::move(cf);
  }
  if (report.skipped_from)
    doc["skipped_from"] = *report.skipped_from;
  return doc.dump(2) + "\n";
}

std::string export_report_csv(const DimensionReport &report) {
  std::string out = "n,index,log_index,s_n,ratio,partial_dim,tail\n";
  for (const LevelRecord &rec : report.levels) {
    out += std::to_string(rec.n);
    out += ',';
    out += rec.index.str();
    out += ',';
    out += rec.log_index.str();
    out += ',';
    if (rec.s_n)
      out += rec.s_n->str();
    out += ',';
    out += format_float(rec.ratio);
    out += ',';
    out += format_float(rec.partial_dim);
    out += ',';
    out += format_float(rec.tail);
    out += '\n';
  }
  if (report.skipped_from)
    out += "# levels from " + std::to_string(*report.skipped_from) +
           " on skipped: point budget\n";
  return out;
}

namespace {

LogIndex parse_log_index_terms(const std::string &text, std::uint32_t base) {
  LogIndex out = LogIndex::zero(base);
  if (text == "0")
    return out;
  const std::string tag = "log" + std::to_string(base) + "(";
  std::size_t pos = 0;
  bool negative = false;
  if (!text.empty() && text[0] == '-') {
    negative = true;
    pos = 1;
  }
  while (pos < text.size()) {
    std::size_t plus = text.find(" + ", pos);
    std::size_t minus = text.find(" - ", pos);
    std::size_t end = std::min(plus == std::string::npos ? text.size() : plus,
                               minus == std::string::npos ? text.size()
                                                          : minus);
    const std::string term = text.substr(pos, end - pos);
    BigRat coef(1);
    std::size_t log_at = 0;
    const std::size_t star = term.find('*');
    if (star != std::string::npos) {
      coef = BigRat(term.substr(0, star));
      log_at = star + 1;
    }
    if (term.compare(log_at, tag.size(), tag) != 0 || term.back() != ')')
      fail(errc::parse_error, "malformed logarithm term: " + term);
    const std::string prime_str = term.substr(
        log_at + tag.size(), term.size() - 1 - log_at - tag.size());
    const BigInt prime(prime_str);
    if (negative)
      coef = -coef;
    out += coef * LogIndex::of_order(prime, base);
    if (end == text.size())
      break;
    negative = text[end + 1] == '-';
    pos = end + 3;
  }
  return out;
}

} // namespace

LogIndex parse_log_index(const std::string &text, std::uint32_t base) {
  try {
    return parse_log_index_terms(text, base);
  } catch (const Error &) {
    throw;
  } catch (const std::exception &) {
    fail(errc::parse_error, "malformed logarithm expression: " + text);
  }
}

DimensionReport parse_report_json(const std::string &text) {
  try {
    const ordered_json doc = ordered_json::parse(text);
    DimensionReport rep;
    rep.m = doc.at("m").get<std::uint32_t>();
    rep.group = doc.at("group").get<std::string>();
    for (const auto &row : doc.at("levels")) {
      LevelRecord rec;
      rec.n = row.at("n").get<std::uint32_t>();
      rec.index = BigInt(row.at("index").get<std::string>());
      rec.log_index =
          parse_log_index(row.at("log_index").get<std::string>(), rep.m);
      if (row.contains("s_n"))
        rec.s_n = parse_log_index(row.at("s_n").get<std::string>(), rep.m);
      rec.ratio = row.at("ratio").get<double>();
      rec.partial_dim = row.at("partial_dim").get<double>();
      rec.tail = row.at("tail").get<double>();
      rep.levels.push_back(std::move(rec));
    }
    if (doc.contains("closed_form")) {
      const auto &cf = doc.at("closed_form");
      ClosedForm parsed;
      parsed.rational = BigRat(cf.at("rational").get<std::string>());
      parsed.log2_coeff = BigRat(cf.at("log2_coeff").get<std::string>());
      parsed.value = cf.at("float").get<double>();
      rep.closed_form = std::move(parsed);
    }
    if (doc.contains("skipped_from"))
      rep.skipped_from = doc.at("skipped_from").get<std::uint32_t>();
    return rep;
  } catch (const Error &) {
    throw;
  } catch (const std::exception &e) {
    fail(errc::parse_error, std::string("report parse failed: ") + e.what());
  }
}

} // namespace treedim
