"""Monic polynomials: construction from roots, binomial powers, Chebyshev
polynomials, derivative and Horner evaluation.

``coeffs[k]`` is always the coefficient of x**k.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

from .errors import PreconditionError
from .precision import BINARY64, PrecisionContext, _mp_context

GUARD_BITS = 64


@dataclass(frozen=True)
class Polynomial:
    coeffs: tuple

    def __post_init__(self):
        if len(self.coeffs) == 0:
            raise PreconditionError("a polynomial needs at least one coefficient")

    @classmethod
    def from_values(cls, values: Sequence, ctx: PrecisionContext = BINARY64) -> "Polynomial":
        return cls(tuple(ctx.convert(v) for v in values))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def monic(self) -> bool:
        return self.coeffs[-1] == 1

    def to_context(self, ctx: PrecisionContext) -> "Polynomial":
        return Polynomial.from_values(self.coeffs, ctx)

    def __getitem__(self, k):
        return self.coeffs[k]


@dataclass(frozen=True)
class RootSet:
    """Roots a_1..a_n of a polynomial, tagged ``analytic`` or ``computed``."""

    roots: tuple
    exactness: str = "analytic"

    def __post_init__(self):
        if self.exactness not in ("analytic", "computed"):
            raise PreconditionError(f"unknown exactness tag {self.exactness!r}")

    def __len__(self):
        return len(self.roots)

    def __iter__(self):
        return iter(self.roots)

    def to_context(self, ctx: PrecisionContext) -> "RootSet":
        return RootSet(tuple(ctx.convert_complex(a) for a in self.roots), self.exactness)


def _is_real(z) -> bool:
    return getattr(z, "imag", 0) == 0


def from_roots(roots: RootSet | Iterable, ctx: PrecisionContext = BINARY64,
               real: bool = True) -> Polynomial:
    """Expand prod (x - a_i), multiplying the factors in the given order.

    With ``real=True`` complex roots must come in conjugate pairs and the
    result has real coefficients.
    """
    roots = list(roots.roots if isinstance(roots, RootSet) else roots)
    if all(_is_real(a) for a in roots):
        vals = [ctx.convert(getattr(a, "real", a)) for a in roots]
    else:
        vals = [ctx.convert_complex(a) for a in roots]
        if real:
            remaining = list(vals)
            while remaining:
                a = remaining.pop()
                if a.imag == 0:
                    continue
                conj = a.conjugate()
                if conj not in remaining:
                    raise PreconditionError(
                        f"root {a} has no conjugate partner; real coefficients impossible")
                remaining.remove(conj)
    c = [ctx.one]
    for a in vals:
        nxt = [-(a * c[0])]
        for k in range(1, len(c)):
            nxt.append(c[k - 1] - a * c[k])
        nxt.append(c[-1])
        c = nxt
    if real and not all(_is_real(a) for a in vals):
        c = [x.real for x in c]
    return Polynomial(tuple(c))


def binomial_power(a, n: int, ctx: PrecisionContext = BINARY64) -> Polynomial:
    """Coefficients of (x - a)**n, each rounded once into ``ctx``.

    Binomials come from the exact integer Pascal recurrence.  Rational ``a``
    (int, float, Fraction) is raised to powers exactly; any other value
    (decimal string, mpf) is evaluated with guard bits before rounding.
    """
    if n < 0:
        raise PreconditionError("degree must be nonnegative")
    row = [1]
    for _ in range(n):
        row = [1] + [row[i] + row[i + 1] for i in range(len(row) - 1)] + [1]
    if isinstance(a, (Rational, float)):
        neg = -Fraction(a)
        raw = [row[k] * neg ** (n - k) for k in range(n + 1)]
    else:
        mp = _mp_context(ctx.prec + GUARD_BITS)
        neg = -mp.mpf(a)
        raw = [row[k] * neg ** (n - k) for k in range(n + 1)]
    try:
        out = tuple(ctx.convert(v) for v in raw)
    except OverflowError:
        out = (math.inf,)
    if not ctx.is_extended and not all(math.isfinite(v) for v in out):
        raise PreconditionError(f"(x - {a})^{n} overflows binary64")
    return Polynomial(out)


def chebyshev(n: int) -> Polynomial:
    """T_n with exact integer coefficients from T_{k+1} = 2x T_k - T_{k-1}."""
    if n < 0:
        raise PreconditionError("degree must be nonnegative")
    prev, cur = [1], [0, 1]
    if n == 0:
        return Polynomial((1,))
    for _ in range(n - 1):
        nxt = [0] + [2 * c for c in cur]
        for i, c in enumerate(prev):
            nxt[i] -= c
        prev, cur = cur, nxt
    return Polynomial(tuple(cur))


def chebyshev_roots(n: int, ctx: PrecisionContext = BINARY64) -> RootSet:
    """Roots cos((2j-1) pi / (2n)), j = 1..n, in that order."""
    if n < 1:
        raise PreconditionError("Chebyshev roots need n >= 1")
    mp = _mp_context(ctx.prec + GUARD_BITS)
    # the middle root of odd n is exactly 0
    roots = tuple(ctx.zero if 2 * j - 1 == n else ctx.convert(mp.cos((2 * j - 1) * mp.pi / (2 * n)))
                  for j in range(1, n + 1))
    return RootSet(roots, "analytic")


def evaluate(p: Polynomial, z, ctx: PrecisionContext = BINARY64):
    """Horner evaluation, highest degree first, in ``ctx``."""
    z = ctx.convert_complex(z) if not _is_real(z) else ctx.convert(getattr(z, "real", z))
    coeffs = [ctx.convert(c) if _is_real(c) else ctx.convert_complex(c) for c in p.coeffs]
    acc = coeffs[-1]
    for c in reversed(coeffs[:-1]):
        acc = acc * z + c
    return acc


def abs_evaluate(p: Polynomial, r, ctx: PrecisionContext = BINARY64):
    """|p|(r): Horner on the absolute values of the coefficients."""
    r = ctx.convert(r)
    acc = ctx.convert(abs(p.coeffs[-1]))
    for c in reversed(p.coeffs[:-1]):
        acc = acc * r + ctx.convert(abs(c))
    return acc


def derivative(p: Polynomial) -> Polynomial:
    if p.degree == 0:
        return Polynomial((p.coeffs[0] * 0,))
    return Polynomial(tuple(k * p.coeffs[k] for k in range(1, p.degree + 1)))
