"""Deflation of a monic polynomial by a known root, p(x)/(x - a).

The quotient x^{n-1} + c_{n-2} x^{n-2} + ... + c_0 satisfies

    -a c_0 = b_0,  -a c_k + c_{k-1} = b_k,  -a + c_{n-2} = b_{n-1}

and can be solved top-down (``forward``: c_0 first, dividing by a) or
bottom-up (``backward``: c_{n-2} first, multiplying by a).  Both routines
return the computed quotient together with an a-priori absolute error bound
for every coefficient.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import PreconditionError
from .polynomial import Polynomial
from .precision import (BINARY64, PrecisionContext, ceil_mpf, extended,
                        gamma_fraction, upper_float)

FORWARD = "forward"
BACKWARD = "backward"


@dataclass(frozen=True)
class DeflationResult:
    """Monic quotient plus per-coefficient bounds on |c_hat_k - c_k|.

    ``bound[k]`` refers to ``quotient.coeffs[k]`` for k = 0..n-2; the leading
    coefficient is exactly 1 and carries no bound.
    """

    quotient: Polynomial
    bound: tuple
    order: str


def _prepare(p: Polynomial, ctx: PrecisionContext):
    if p.degree < 1:
        raise PreconditionError("deflation needs degree >= 1")
    b = [ctx.convert(x) for x in p.coeffs]
    if b[-1] != 1:
        raise PreconditionError("deflation needs a monic polynomial")
    return b


def _bound_context(ctx: PrecisionContext) -> PrecisionContext:
    return ctx if ctx.is_extended else extended()


def forward_bound(p: Polynomial, a, ctx: PrecisionContext = BINARY64) -> tuple:
    """Bounds on the forward recurrence c_k = (c_{k-1} - b_k)/a.

    The b_j term (j >= 1) of c_k = -sum_j b_j / a^{k+1-j} passes through
    2(k+1-j) roundings; the b_0 term through 2k+1.  The bound is

        sum_{j=1..k} gamma_{2(k+1-j)} |b_j/a^{k+1-j}| + gamma_{2k+1} |b_0/a^{k+1}|

    evaluated with the unit roundoff of ``ctx``, in extended precision, and
    rounded upward.
    """
    bx = _bound_context(ctx)
    b = [bx.convert(x) for x in _prepare(p, ctx)]
    a = bx.convert(ctx.convert(a))
    if a == 0:
        raise PreconditionError("forward deflation divides by the root; a = 0")
    absa = abs(a)
    n = p.degree
    out = []
    for k in range(n - 1):
        s = bx.convert(0)
        for j in range(1, k + 1):
            g = ceil_mpf(bx, gamma_fraction(2 * (k + 1 - j), ctx.prec))
            s += g * abs(b[j]) / absa ** (k + 1 - j)
        g0 = ceil_mpf(bx, gamma_fraction(2 * k + 1, ctx.prec))
        s += g0 * abs(b[0]) / absa ** (k + 1)
        out.append(s)
    return _finish(out, ctx)


def backward_bound(p: Polynomial, a, ctx: PrecisionContext = BINARY64) -> tuple:
    """Bounds on the backward recurrence c_{k-1} = b_k + a c_k.

    Uses the term sequence |b_{k+1}| g_1 + |a b_{k+2}| g_3 + ... with b_j
    weighted by gamma_{2(j-k)-1}, and |a|^{n-k-1} gamma_{2n-2k+1} for the
    leading coefficient.  The leading term's subscript exceeds the actual
    rounding count (2n-2k-3), so the bound is safe as printed.
    """
    bx = _bound_context(ctx)
    b = [bx.convert(x) for x in _prepare(p, ctx)]
    absa = abs(bx.convert(ctx.convert(a)))
    n = p.degree
    out = []
    for k in range(n - 1):
        s = bx.convert(0)
        for j in range(k + 1, n):
            g = ceil_mpf(bx, gamma_fraction(2 * (j - k) - 1, ctx.prec))
            s += g * abs(b[j]) * absa ** (j - k - 1)
        s += ceil_mpf(bx, gamma_fraction(2 * n - 2 * k + 1, ctx.prec)) * absa ** (n - k - 1)
        out.append(s)
    return _finish(out, ctx)


def _finish(values, ctx):
    if ctx.is_extended:
        return tuple(values)
    return tuple(upper_float(v) for v in values)


def _forward_coeffs(b, a, ctx):
    n = len(b) - 1
    if n == 1:
        return [ctx.one]
    c = [-b[0] / a]
    for k in range(1, n - 1):
        c.append((c[k - 1] - b[k]) / a)
    return c + [ctx.one]


def deflate_forward(p: Polynomial, a, ctx: PrecisionContext = BINARY64,
                    bounds: bool = True) -> DeflationResult:
    """Solve for c_0, c_1, ..., c_{n-2} in that order.

    ``a`` is used as given; the routine never checks that p(a) = 0.
    """
    b = _prepare(p, ctx)
    a = ctx.convert(a)
    if a == 0:
        raise PreconditionError("forward deflation divides by the root; a = 0")
    coeffs = _forward_coeffs(b, a, ctx)
    bound = forward_bound(p, a, ctx) if bounds else ()
    return DeflationResult(Polynomial(tuple(coeffs)), bound, FORWARD)


def deflate_backward(p: Polynomial, a, ctx: PrecisionContext = BINARY64,
                     bounds: bool = True) -> DeflationResult:
    """Solve for c_{n-2}, ..., c_0 via c_{k-1} = b_k + a c_k."""
    b = _prepare(p, ctx)
    a = ctx.convert(a)
    c = _backward_coeffs(b, a, ctx)
    bound = backward_bound(p, a, ctx) if bounds else ()
    return DeflationResult(Polynomial(tuple(c)), bound, BACKWARD)


def _backward_coeffs(b, a, ctx):
    n = len(b) - 1
    c = [None] * (n - 1) + [ctx.one]
    if n >= 2:
        c[n - 2] = b[n - 1] + a
        for k in range(n - 2, 0, -1):
            c[k - 1] = b[k] + a * c[k]
    return c


def deflation_oracle(p: Polynomial, a, ctx: PrecisionContext | None = None,
                     order: str = FORWARD) -> Polynomial:
    """The deflation recurrence run in extended precision on the same inputs.

    ``p`` and ``a`` are taken exactly as given (binary64 inputs convert
    without error), so the result is the exact output of the recurrence up
    to ~10^-100 relative noise.  When p(a) != 0 the two orders have
    different exact answers (they differ by p(a)/a^{k+1}), hence ``order``.
    """
    ctx = ctx or extended()
    if not ctx.is_extended:
        raise PreconditionError("the deflation oracle needs an extended context")
    b = _prepare(p, ctx)
    a = ctx.convert(a)
    if order == BACKWARD:
        return Polynomial(tuple(_backward_coeffs(b, a, ctx)))
    if order != FORWARD:
        raise PreconditionError(f"unknown deflation order {order!r}")
    if a == 0:
        raise PreconditionError("forward deflation divides by the root; a = 0")
    return Polynomial(tuple(_forward_coeffs(b, a, ctx)))
