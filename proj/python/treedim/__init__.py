"""Orders, indices, and dimension series for automaton groups on rooted trees.

Thin convenience layer over the compiled ``_core`` module: parses its JSON
payloads, converts arbitrary-precision orders to Python ints, and re-exports
its exceptions.
"""

import json as _json
import os as _os
import sys as _sys
from fractions import Fraction as _Fraction

__all__ = [
    "PointBudgetExceeded",
    "closed_form",
    "dimension_report",
    "element_order",
    "verify",
]


def _load_core():
    try:
        from . import _core  # installed wheels place the module in-package
        return _core
    except ImportError:
        # In-tree runs point at the build directory instead.
        core_dir = _os.environ.get("TREEDIM_CORE_DIR")
        if not core_dir:
            raise
        _sys.path.insert(0, core_dir)
        import _core
        return _core


_core = _load_core()

PointBudgetExceeded = _core.PointBudgetExceeded


def closed_form(m):
    """Exact closure dimension of the built-in group over an m-letter alphabet.

    Returns a dict with the rational part, the coefficient of log_m(2)
    (both as :class:`fractions.Fraction`), and the combined float value.
    """
    rational, log2_coeff, value = _core.closed_form(m)
    return {
        "rational": _Fraction(rational),
        "log2_coeff": _Fraction(log2_coeff),
        "value": value,
    }


def dimension_report(m, group="bsv", max_level=4, point_budget=None):
    """Level indices and the truncated dimension series as a dict.

    ``group`` is either ``"bsv"`` for the built-in two-generator group or
    ``"file:PATH"`` for an automaton description on disk. When the report
    carries a closed form, ``closed_form_within_tail`` records whether the
    final series estimate lies inside its own tail bound of it.
    """
    ok, text = _core.dimension_json(m, group, max_level, point_budget, "json")
    doc = _json.loads(text)
    if "closed_form" in doc:
        doc["closed_form_within_tail"] = ok
    return doc


def verify(m, which="all", max_level=4, k_max=None, point_budget=None):
    """Run structure and membership checks; returns ``{"ok", "records"}``.

    ``ok`` is true when every record that ran passed; skipped records (a
    statement that does not apply to this alphabet size, or a level beyond
    the point budget) carry an explanatory note.
    """
    ok, text = _core.verify_json(m, which, max_level, k_max, point_budget)
    return {"ok": ok, "records": _json.loads(text)}


def element_order(m, element, level=1, point_budget=None):
    """Order of a word at one tree level, plain and modulo derived.

    ``element`` is a word over the automaton state names such as
    ``"a b^-1"``; orders come back as Python ints.
    """
    _, text = _core.order_json(m, element, level, point_budget)
    doc = _json.loads(text)
    doc["order"] = int(doc["order"])
    doc["order_mod_derived"] = int(doc["order_mod_derived"])
    return doc
