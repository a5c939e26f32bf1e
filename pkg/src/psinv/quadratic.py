"""Series inversion of the quadratics x^2 + b x + 1 and x^2 + b x - 1.

For the +1 case the coefficients are the Fibonacci-type polynomials
c_k = F_k(b) with c_{k+1} = -b c_k - c_{k-1}; the -1 case has
c_{k+1} = b c_k + c_{k-1} and no cancellation at all.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import PreconditionError
from .precision import BINARY64, PrecisionContext, extended, gamma_fraction, upper_float
from .series import PowerSeries

PLUS = 1
MINUS = -1


@dataclass(frozen=True)
class QuadraticCase:
    """1/(x^2 + b x + sign), expanded to order n."""

    b: float
    sign: int
    n: int

    def __post_init__(self):
        if self.sign not in (PLUS, MINUS):
            raise PreconditionError("sign must be +1 or -1")
        if self.n < 0:
            raise PreconditionError("order must be nonnegative")


def invert_quadratic(case: QuadraticCase, ctx: PrecisionContext = BINARY64) -> PowerSeries:
    b = ctx.convert(case.b)
    if case.sign == PLUS:
        c = [ctx.one, -b]
        for _ in range(2, case.n + 1):
            c.append(-b * c[-1] - c[-2])
    else:
        c = [-ctx.one, -b]
        for _ in range(2, case.n + 1):
            c.append(b * c[-1] + c[-2])
    return PowerSeries(tuple(c[: case.n + 1]))


def _check_plus(case: QuadraticCase):
    if case.sign != PLUS:
        raise PreconditionError("operation defined for the x^2 + b x + 1 case only")


def closed_form_coeff(case: QuadraticCase, k: int, ctx: PrecisionContext | None = None):
    """c_k = (beta^-(k+1) - alpha^-(k+1)) / (alpha - beta) in complex arithmetic.

    alpha, beta are the roots of x^2 + b x + 1; the expression is the
    partial-fraction expansion of 1/((x - alpha)(x - beta)) and is symmetric
    in the two roots.  Always evaluated in extended precision; the real part
    is returned.
    """
    _check_plus(case)
    ctx = ctx or extended()
    if not ctx.is_extended:
        raise PreconditionError("closed form is an oracle; pass an extended context")
    mp = ctx.mp
    b = ctx.convert(case.b)
    if abs(b) == 2:
        raise PreconditionError("repeated roots excluded: b = +-2")
    disc = mp.sqrt(mp.mpc(b * b - 4))
    alpha = (-b - disc) / 2
    beta = (-b + disc) / 2
    val = (beta ** -(k + 1) - alpha ** -(k + 1)) / (alpha - beta)
    return mp.re(val)


def abs_fibonacci(b, k: int, ctx: PrecisionContext | None = None):
    """|F_k|(|b|) via G_{k+1} = |b| G_k + G_{k-1}, G_0 = 1, G_1 = |b|."""
    ctx = ctx or extended()
    ab = abs(ctx.convert(b))
    g_prev, g = ctx.one, ab
    if k == 0:
        return g_prev
    for _ in range(k - 1):
        g_prev, g = g, ab * g + g_prev
    return g


def quadratic_rel_bound(case: QuadraticCase, k: int, ctx: PrecisionContext = BINARY64):
    """(|F_k|(|b|) / |F_k(b)|) * gamma_{2k} for the +1 case.

    gamma uses the unit roundoff of ``ctx``; the ratio is computed in
    extended precision and the product rounded upward.  Returns ``inf`` when
    F_k(b) = 0 (the relative bound is infinite).
    """
    _check_plus(case)
    x = extended(max(100, ctx.digits or 100))
    b = ctx.convert(case.b)
    fk = invert_quadratic(QuadraticCase(b, PLUS, k), x).coeffs[k]
    if fk == 0:
        return math.inf
    ratio = abs_fibonacci(b, k, x) / abs(fk)
    g = x.convert(gamma_fraction(2 * k, ctx.prec))
    val = ratio * g * (1 + x.u * (4 * k + 8))
    return val if ctx.is_extended else upper_float(val)


def normalize_quadratic(a, b, c, ctx: PrecisionContext = BINARY64):
    """Reduce a y^2 + b y + c to x^2 + b' x + sign with x = s y.

    Returns ``(b_prime, sign, s)`` with s = sqrt(|a/c|), b' = b s / a and
    sign = sign(a c).  The roundings incurred here are not covered by the
    error bounds of the inversion.
    """
    a, b, c = ctx.convert(a), ctx.convert(b), ctx.convert(c)
    if a == 0 or c == 0:
        raise PreconditionError("normalization needs a*c != 0")
    sqrt = ctx.mp.sqrt if ctx.is_extended else math.sqrt
    s = sqrt(abs(a / c))
    sign = PLUS if (a > 0) == (c > 0) else MINUS
    return b * s / a, sign, s
