// Python bindings over the command bodies. Each wrapper runs the same code
// path as the command-line tool and converts the exit convention into
// exceptions: configuration problems raise ValueError, a point budget too
// small for any level raises PointBudgetExceeded, and check outcomes travel
// inside the returned report.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

#include "treedim/bsv.hpp"
#include "treedim/cli.hpp"
#include "treedim/error.hpp"

namespace py = pybind11;

namespace {

using treedim::RunConfig;

struct BudgetExhausted : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::pair<bool, std::string>
checked(int (*body)(const RunConfig &, std::ostream &, std::ostream &),
        const RunConfig &cfg) {
  std::ostringstream out, err;
  const int code = body(cfg, out, err);
  if (code == treedim::kExitConfigError)
    throw std::invalid_argument(err.str());
  if (code == treedim::kExitBudgetExhausted)
    throw BudgetExhausted(err.str());
  return {code == treedim::kExitOk, out.str()};
}

} // namespace

PYBIND11_MODULE(_core, mod) {
  mod.doc() = "orders, indices, and dimension series for automaton groups "
              "acting on rooted trees";

  py::register_exception<BudgetExhausted>(mod, "PointBudgetExceeded");

  mod.def(
      "dimension_json",
      [](std::uint32_t m, const std::string &group, std::uint32_t max_level,
         std::optional<std::uint64_t> point_budget, const std::string &format) {
        RunConfig cfg;
        cfg.m = m;
        cfg.group = group;
        cfg.max_level = max_level;
        cfg.format = format;
        if (point_budget)
          cfg.point_budget = *point_budget;
        return checked(&treedim::run_dim, cfg);
      },
      py::arg("m"), py::arg("group") = "bsv", py::arg("max_level") = 4,
      py::arg("point_budget") = py::none(), py::arg("format") = "json",
      "Level indices and truncated dimension series; returns (ok, text) "
      "where ok is false when the series estimate ends outside its own tail "
      "bound of the closed form.");

  mod.def(
      "verify_json",
      [](std::uint32_t m, const std::string &which, std::uint32_t max_level,
         std::optional<std::uint32_t> k_max,
         std::optional<std::uint64_t> point_budget) {
        RunConfig cfg;
        cfg.m = m;
        cfg.which = which;
        cfg.max_level = max_level;
        cfg.k_max = k_max;
        if (point_budget)
          cfg.point_budget = *point_budget;
        return checked(&treedim::run_verify, cfg);
      },
      py::arg("m"), py::arg("which") = "all", py::arg("max_level") = 4,
      py::arg("k_max") = py::none(), py::arg("point_budget") = py::none(),
      "Structure and membership check records as a JSON array; returns "
      "(ok, text) where ok is false when some record ran and failed.");

  mod.def(
      "order_json",
      [](std::uint32_t m, const std::string &element, std::uint32_t level,
         std::optional<std::uint64_t> point_budget) {
        RunConfig cfg;
        cfg.m = m;
        cfg.element = element;
        cfg.level = level;
        if (point_budget)
          cfg.point_budget = *point_budget;
        return checked(&treedim::run_order, cfg);
      },
      py::arg("m"), py::arg("element"), py::arg("level") = 1,
      py::arg("point_budget") = py::none(),
      "Order of a word at one tree level, plain and modulo the derived "
      "subgroup of the level image.");

  mod.def(
      "closed_form",
      [](std::uint32_t m) {
        const treedim::BSVContext ctx(m);
        const auto [p, q] = ctx.hausdorff_closed_form();
        return py::make_tuple(p.str(), q.str(),
                              ctx.hausdorff_closed_form_value());
      },
      py::arg("m"),
      "Exact dimension of the built-in group's closure as (rational, "
      "coefficient of log_m 2, float value).");
}
