#include "treedim/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "treedim/dimension.hpp"
#include "treedim/error.hpp"

namespace treedim {

namespace {

using ordered_json = nlohmann::ordered_json;

struct GroupSource {
  bool builtin_bsv;
  std::string path;
};

GroupSource parse_group(const std::string &group) {
  if (group == "bsv")
    return {true, ""};
  const std::string prefix = "file:";
  if (group.rfind(prefix, 0) == 0 && group.size() > prefix.size())
    return {false, group.substr(prefix.size())};
  fail(errc::invalid_argument,
       "unknown group '" + group + "' (expected 'bsv' or 'file:PATH')");
}

void check_common(const RunConfig &config) {
  if (config.m < 2)
    fail(errc::invalid_argument, "alphabet size m must be at least 2");
  if (config.max_level < 1)
    fail(errc::invalid_argument, "max level must be at least 1");
  if (config.format != "json" && config.format != "csv")
    fail(errc::unsupported_format, "unknown format '" + config.format + "'");
  checked_points(config.m, 1, config.point_budget);
}

void write_output(const std::string &doc, const RunConfig &config,
                  std::ostream &out) {
  if (config.out_path.empty()) {
    out << doc;
    return;
  }
  std::ofstream file(config.out_path, std::ios::binary);
  if (!file)
    fail(errc::invalid_argument,
         "cannot open output file " + config.out_path);
  file << doc;
  file.flush();
  if (!file.good())
    fail(errc::invalid_argument,
         "cannot write output file " + config.out_path);
}

int exit_code_for(const Error &e) {
  switch (e.code()) {
  case errc::point_budget_exceeded:
    return kExitBudgetExhausted;
  case errc::invalid_argument:
  case errc::parse_error:
  case errc::not_madic:
  case errc::unsupported_format:
  case errc::non_bijective_output:
  case errc::unknown_transition_target:
  case errc::duplicate_state_name:
  case errc::reserved_name_misuse:
    return kExitConfigError;
  default:
    return kExitCheckFailure;
  }
}

template <typename Body>
int guarded(Body &&body, std::ostream &err) {
  try {
    return body();
  } catch (const Error &e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
}

int dim_body(const RunConfig &config, std::ostream &out) {
  check_common(config);
  const GroupSource source = parse_group(config.group);

  std::vector<BigInt> orders;
  std::optional<ClosedForm> closed_form;
  std::optional<double> bound_constant;
  if (source.builtin_bsv) {
    BSVContext ctx(config.m, config.point_budget);
    orders = ctx.derived_order_sequence(config.max_level);
    const auto [rational, log2_coeff] = ctx.hausdorff_closed_form();
    closed_form =
        ClosedForm{rational, log2_coeff, ctx.hausdorff_closed_form_value()};
    bound_constant = bsv_series_bound(config.m);
  } else {
    const AutomatonPtr spec = AutomatonSpec::load_file(source.path);
    if (spec->m() != config.m)
      fail(errc::invalid_argument,
           "automaton file " + source.path + " has alphabet size " +
               std::to_string(spec->m()) + ", --m says " +
               std::to_string(config.m));
    orders = index_sequence(spec, config.max_level, config.point_budget);
  }
  if (orders.empty())
    checked_points(config.m, 1, config.point_budget); // throws

  std::optional<std::uint32_t> skipped_from;
  if (orders.size() < config.max_level)
    skipped_from = static_cast<std::uint32_t>(orders.size()) + 1;

  const DimensionReport report = build_report(
      orders, config.m, config.group, closed_form, skipped_from,
      bound_constant);
  write_output(config.format == "json" ? export_report_json(report)
                                       : export_report_csv(report),
               config, out);

  if (report.closed_form) {
    const LevelRecord &last = report.levels.back();
    if (std::fabs(last.partial_dim - report.closed_form->value) > last.tail)
      return kExitCheckFailure;
  }
  return kExitOk;
}

int verify_body(const RunConfig &config, std::ostream &out) {
  check_common(config);
  if (config.format != "json")
    fail(errc::unsupported_format,
         "verification reports are emitted as json only");
  if (!parse_group(config.group).builtin_bsv)
    fail(errc::invalid_argument,
         "verify runs against the builtin bsv group only");
  static const std::vector<std::string> kSuites = {
      "prop34", "lemma32", "prop35", "structure", "matrixA", "all"};
  if (std::find(kSuites.begin(), kSuites.end(), config.which) == kSuites.end())
    fail(errc::invalid_argument, "unknown suite '" + config.which + "'");

  BSVContext ctx(config.m, config.point_budget);
  const std::uint32_t k_max = config.k_max.value_or(ctx.default_k_max());
  const bool all = config.which == "all";

  Report report;
  auto append = [&report](Report part) {
    report.insert(report.end(), std::make_move_iterator(part.begin()),
                  std::make_move_iterator(part.end()));
  };
  if (all || config.which == "matrixA")
    append(ctx.verify_matrix_A());
  if (all || config.which == "lemma32")
    for (std::uint32_t n = 2; n <= config.max_level; ++n)
      append(ctx.verify_lemma32(n));
  if (all || config.which == "prop34")
    append(ctx.verify_prop34(k_max));
  if (all || config.which == "prop35")
    append(ctx.verify_prop35(config.max_level));
  if (all || config.which == "structure")
    for (std::uint32_t n = 1; n <= config.max_level; ++n)
      append(ctx.verify_structure(n));
  sort_report(report);

  write_output(report_to_json(report), config, out);

  const bool budget_skipped =
      std::any_of(report.begin(), report.end(), [](const CheckRecord &rec) {
        return rec.skipped && rec.note.rfind("point budget", 0) == 0;
      });
  if (report_all_skipped(report) && budget_skipped)
    return kExitBudgetExhausted;
  return report_ok(report) ? kExitOk : kExitCheckFailure;
}

int order_body(const RunConfig &config, std::ostream &out) {
  check_common(config);
  if (config.format != "json")
    fail(errc::unsupported_format, "order output is json only");
  if (config.level < 1)
    fail(errc::invalid_argument, "level must be at least 1");

  const GroupSource source = parse_group(config.group);
  const AutomatonPtr spec = source.builtin_bsv
                                ? AutomatonSpec::bsv(config.m)
                                : AutomatonSpec::load_file(source.path);
  if (spec->m() != config.m)
    fail(errc::invalid_argument,
         "automaton file " + source.path + " has alphabet size " +
             std::to_string(spec->m()) + ", --m says " +
             std::to_string(config.m));
  const Element element = Element::parse(spec, config.element);

  const std::uint64_t points =
      checked_points(config.m, config.level, config.point_budget);
  std::vector<Perm> gens;
  for (std::size_t i = 0; i < spec->state_count(); ++i)
    gens.push_back(Element::generator(spec, static_cast<std::int32_t>(i))
                       .level_perm(config.level, config.point_budget));
  const PermGroup level_group = PermGroup::from_generators(points, gens);
  const PermGroup derived = level_group.derived_subgroup();
  const Perm image = element.level_perm(config.level, config.point_budget);

  ordered_json doc;
  doc["m"] = config.m;
  doc["level"] = config.level;
  doc["element"] = element.str();
  doc["order"] = element_order(image).str();
  doc["order_mod_derived"] =
      order_mod_subgroup(image, derived, level_group).str();
  write_output(doc.dump(2) + "\n", config, out);
  return kExitOk;
}

} // namespace

std::uint64_t resolve_point_budget(std::optional<std::uint64_t> flag_value) {
  if (flag_value)
    return *flag_value;
  if (const char *env = std::getenv("TREEDIM_POINT_BUDGET")) {
    char *end = nullptr;
    const unsigned long long parsed = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0' || parsed == 0)
      fail(errc::invalid_argument,
           std::string("TREEDIM_POINT_BUDGET is not a positive integer: ") +
               env);
    return parsed;
  }
  return kDefaultPointBudget;
}

std::string report_to_json(const Report &report) {
  ordered_json rows = ordered_json::array();
  for (const CheckRecord &rec : report) {
    ordered_json row;
    row["check"] = rec.check;
    row["m"] = rec.m;
    if (rec.n)
      row["n"] = *rec.n;
    if (rec.k)
      row["k"] = *rec.k;
    if (rec.j)
      row["j"] = *rec.j;
    row["expected"] = rec.expected;
    row["actual"] = rec.actual;
    row["pass"] = rec.pass;
    row["skipped"] = rec.skipped;
    if (!rec.note.empty())
      row["note"] = rec.note;
    rows.push_back(std::move(row));
  }
  return rows.dump(2) + "\n";
}

int run_dim(const RunConfig &config, std::ostream &out, std::ostream &err) {
  return guarded([&] { return dim_body(config, out); }, err);
}

int run_verify(const RunConfig &config, std::ostream &out, std::ostream &err) {
  return guarded([&] { return verify_body(config, out); }, err);
}

int run_order(const RunConfig &config, std::ostream &out, std::ostream &err) {
  return guarded([&] { return order_body(config, out); }, err);
}

int run_cli(int argc, const char *const *argv, std::ostream &out,
            std::ostream &err) {
  CLI::App app{"level quotients, verification suites and Hausdorff "
               "dimension reports for self-similar groups on the m-adic "
               "tree"};
  app.require_subcommand(1);

  RunConfig config;
  std::uint64_t budget_flag = 0;
  std::uint32_t k_max_flag = 0;
  std::vector<CLI::Option *> budget_opts; // one per subcommand
  CLI::Option *k_max_opt = nullptr;

  auto add_shared = [&](CLI::App *cmd) {
    cmd->add_option("--m", config.m, "alphabet size")->required();
    cmd->add_option("--group", config.group,
                    "builtin 'bsv' or 'file:PATH' automaton");
    budget_opts.push_back(
        cmd->add_option("--point-budget", budget_flag,
                        "largest permutation degree to enumerate"));
    cmd->add_option("--format", config.format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--out", config.out_path,
                    "output file path (default stdout)");
  };

  CLI::App *dim = app.add_subcommand("dim", "level index growth and "
                                            "dimension estimate");
  add_shared(dim);
  dim->add_option("--max-level", config.max_level, "deepest tree level");

  CLI::App *verify =
      app.add_subcommand("verify", "run verification suites against bsv");
  add_shared(verify);
  verify->add_option("--max-level", config.max_level, "deepest tree level");
  k_max_opt = verify->add_option("--kmax", k_max_flag,
                                 "largest statement parameter k");
  verify
      ->add_option("--which", config.which,
                   "prop34|lemma32|prop35|structure|matrixA|all")
      ->check(CLI::IsMember(
          {"prop34", "lemma32", "prop35", "structure", "matrixA", "all"}));

  CLI::App *order =
      app.add_subcommand("order", "order of one element at one level");
  add_shared(order);
  order
      ->add_option("--element", config.element,
                   "word over the state names, e.g. \"a b^-1\"")
      ->required();
  order->add_option("--level", config.level, "tree level");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfigError;
  }

  return guarded(
      [&]() -> int {
        const bool budget_given =
            std::any_of(budget_opts.begin(), budget_opts.end(),
                        [](const CLI::Option *o) { return o->count() > 0; });
        config.point_budget = resolve_point_budget(
            budget_given ? std::optional(budget_flag) : std::nullopt);
        if (k_max_opt->count() > 0)
          config.k_max = k_max_flag;
        if (dim->parsed())
          return run_dim(config, out, err);
        if (verify->parsed())
          return run_verify(config, out, err);
        return run_order(config, out, err);
      },
      err);
}

} // namespace treedim
