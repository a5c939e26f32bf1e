"""Per-coefficient error tables comparing a computed result with an oracle."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .errors import PreconditionError
from .precision import PrecisionContext, extended, upper_float


@dataclass
class ErrorReport:
    """Actual errors and named bound columns, one row per coefficient index.

    Rows whose oracle coefficient is exactly zero are flagged in
    ``excluded``; their relative error and relative bounds are NaN.
    """

    label: str
    k: tuple
    computed: tuple
    oracle: tuple
    abs_err: tuple
    rel_err: tuple
    excluded: tuple
    bounds: dict = field(default_factory=dict)
    rel_bounds: dict = field(default_factory=dict)
    metadata: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.k)

    def included(self):
        """Indices (positions) of rows that carry a relative error."""
        return [i for i, ex in enumerate(self.excluded) if not ex]

    def dominated(self, name: str, relative: bool = True) -> bool:
        """True if bound column ``name`` is >= the actual error on every included row."""
        bound = (self.rel_bounds if relative else self.bounds)[name]
        actual = self.rel_err if relative else self.abs_err
        rows = self.included() if relative else range(len(self.k))
        return all(actual[i] <= bound[i] for i in rows)

    def to_csv(self, columns: Mapping[str, str] | None = None) -> str:
        """Render as CSV text.

        ``columns`` maps output header -> attribute path such as ``"rel_err"``
        or ``"rel_bounds.thm31"``; the default is every column.
        """
        if columns is None:
            columns = {"k": "k", "coeff": "computed", "oracle_coeff": "oracle",
                       "abs_err": "abs_err", "rel_err": "rel_err", "excluded": "excluded"}
            for name in self.bounds:
                columns[name] = f"bounds.{name}"
                columns[f"{name}_rel"] = f"rel_bounds.{name}"
        cols = {h: self._column(path) for h, path in columns.items()}
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(list(cols))
        for i in range(len(self.k)):
            writer.writerow([format_value(col[i]) for col in cols.values()])
        return buf.getvalue()

    def _column(self, path: str):
        head, _, name = path.partition(".")
        value = getattr(self, head)
        return value[name] if name else value


def format_value(x) -> str:
    """Shortest round-trip text: repr for floats, full digits for mpf."""
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, int):
        return str(x)
    if isinstance(x, float):
        return repr(x)
    mpf_val = getattr(x, "_mpf_", None)
    if mpf_val is not None:
        from mpmath import libmp
        return libmp.to_str(mpf_val, libmp.repr_dps(x.context.prec))
    return str(x)


def error_report(computed: Sequence, oracle: Sequence, bounds: Mapping[str, Sequence] | None = None,
                 label: str = "", ctx: PrecisionContext | None = None,
                 k: Sequence[int] | None = None) -> ErrorReport:
    """Compare ``computed`` against ``oracle`` coefficientwise.

    Differences are formed in extended precision (``ctx``), so the measured
    error of a binary64 result is exact up to oracle noise.  Each absolute
    bound is also divided by |oracle| and rounded upward to give a relative
    bound, so relative comparisons stay certified.
    """
    if len(computed) != len(oracle):
        raise PreconditionError(f"order mismatch: {len(computed)} computed vs {len(oracle)} oracle")
    x = ctx or extended()
    bounds = dict(bounds or {})
    for name, vec in bounds.items():
        if len(vec) != len(oracle):
            raise PreconditionError(f"bound column {name!r} has wrong length")
    ks = tuple(k) if k is not None else tuple(range(len(oracle)))
    abs_err, rel_err, excluded = [], [], []
    rel_bounds = {name: [] for name in bounds}
    for i, (c, o) in enumerate(zip(computed, oracle)):
        cx, ox = x.convert(c), x.convert(o)
        err = abs(cx - ox)
        abs_err.append(float(err))
        if ox == 0:
            excluded.append(True)
            rel_err.append(math.nan)
            for name in bounds:
                rel_bounds[name].append(math.nan)
            continue
        excluded.append(False)
        rel_err.append(float(err / abs(ox)))
        for name, vec in bounds.items():
            bv = vec[i]
            if isinstance(bv, float) and math.isinf(bv):
                rel_bounds[name].append(math.inf)
            else:
                rel_bounds[name].append(upper_float(x.convert(bv) / abs(ox)))
    return ErrorReport(
        label=label, k=ks,
        computed=tuple(computed), oracle=tuple(oracle),
        abs_err=tuple(abs_err), rel_err=tuple(rel_err), excluded=tuple(excluded),
        bounds={n: tuple(v) for n, v in bounds.items()},
        rel_bounds={n: tuple(v) for n, v in rel_bounds.items()},
    )
