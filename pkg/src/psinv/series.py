"""Truncated formal power series and the inversion recurrence.

Coefficients are stored lowest degree first.  Arithmetic happens in the
:class:`~psinv.precision.PrecisionContext` passed to each operation; inputs
are rounded into that context on entry, so a binary64 series can be handed
to an extended-precision operation and is then used exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .errors import NotNormalizedError, PreconditionError
from .precision import BINARY64, PrecisionContext


@dataclass(frozen=True)
class PowerSeries:
    """Coefficients b_0, ..., b_n of a series truncated at order n."""

    coeffs: tuple

    def __post_init__(self):
        if len(self.coeffs) == 0:
            raise PreconditionError("a power series needs at least one coefficient")
        for c in self.coeffs:
            if not _finite(c):
                raise PreconditionError(f"non-finite coefficient {c!r}")

    @classmethod
    def from_values(cls, values: Sequence, ctx: PrecisionContext = BINARY64) -> "PowerSeries":
        return cls(tuple(ctx.convert(v) for v in values))

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @property
    def invertible(self) -> bool:
        return self.coeffs[0] == 1

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, k):
        return self.coeffs[k]

    def truncate(self, n: int) -> "PowerSeries":
        if n > self.order:
            raise PreconditionError(f"cannot truncate order {self.order} series to {n}")
        return PowerSeries(self.coeffs[: n + 1])

    def to_context(self, ctx: PrecisionContext) -> "PowerSeries":
        return PowerSeries.from_values(self.coeffs, ctx)


def _finite(x) -> bool:
    if isinstance(x, int):
        return True
    if hasattr(x, "_mpf_"):
        return x.context.isfinite(x)
    return math.isfinite(x)


def _check_order(n: int, *series: PowerSeries):
    if n < 0:
        raise PreconditionError("truncation order must be nonnegative")
    for s in series:
        if n > s.order:
            raise PreconditionError(f"order {n} exceeds series order {s.order}")


def invert(p: PowerSeries, n: int, ctx: PrecisionContext = BINARY64) -> PowerSeries:
    """Invert ``p`` (with ``p[0] == 1``) up to order ``n``.

    Uses c_k = -b_k - c_1 b_{k-1} - ... - c_{k-1} b_1, the subtractions
    applied strictly left to right.  The rounding analysis behind
    :func:`psinv.bounds.theorem31_bound` assumes exactly this order.
    """
    _check_order(n, p)
    if p.coeffs[0] != 1:
        raise NotNormalizedError(f"series not normalized: b_0 = {p.coeffs[0]!r} != 1")
    b = [ctx.convert(x) for x in p.coeffs[: n + 1]]
    c = [ctx.one]
    for k in range(1, n + 1):
        s = -b[k]
        for j in range(1, k):
            s = s - c[j] * b[k - j]
        c.append(s)
    return PowerSeries(tuple(c))


def cauchy_product(p: PowerSeries, q: PowerSeries, n: int,
                   ctx: PrecisionContext = BINARY64) -> PowerSeries:
    """Coefficients 0..n of p*q, each sum taken in ascending j."""
    _check_order(n, p, q)
    a = [ctx.convert(x) for x in p.coeffs[: n + 1]]
    b = [ctx.convert(x) for x in q.coeffs[: n + 1]]
    out = []
    for k in range(n + 1):
        s = a[0] * b[k]
        for j in range(1, k + 1):
            s = s + a[j] * b[k - j]
        out.append(s)
    return PowerSeries(tuple(out))


def abs_series(p: PowerSeries) -> PowerSeries:
    return PowerSeries(tuple(abs(c) for c in p.coeffs))


def scale_variable(p: PowerSeries, s, ctx: PrecisionContext = BINARY64) -> PowerSeries:
    """Substitute x <- s*x: coefficient k becomes p_k * s**k.

    Powers of ``s`` are built by repeated multiplication in ``ctx``.
    """
    s = ctx.convert(s)
    if s == 0:
        raise PreconditionError("scale factor must be nonzero")
    out = []
    power = ctx.one
    for k, c in enumerate(p.coeffs):
        if k > 0:
            power = power * s
        out.append(ctx.convert(c) * power)
    return PowerSeries(tuple(out))


def growth_rate_estimate(q: PowerSeries, window: int):
    """Geometric mean of |c_{k+1}/c_k| over the last ``window`` ratios.

    This estimates the reciprocal of the radius of convergence of ``q``.
    Returns ``None`` (inconclusive) if a coefficient in the window is zero.
    """
    if window < 2:
        raise PreconditionError("window must be at least 2")
    if q.order < window:
        raise PreconditionError(f"series order {q.order} shorter than window {window}")
    tail = q.coeffs[q.order - window:]
    if any(c == 0 for c in tail):
        return None
    # product of consecutive ratios telescopes to |c_n / c_{n-window}|
    ratio = abs(tail[-1]) / abs(tail[0])
    if hasattr(ratio, "_mpf_"):
        return float(ratio.context.exp(ratio.context.log(ratio) / window))
    return math.exp(math.log(ratio) / window)
