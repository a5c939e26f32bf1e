"""A-priori error bounds for power-series inversion.

Notation: T_n is the unit lower-triangular Toeplitz matrix of the b_k,
C_n = (1, c_1, ..., c_n) solves T_n C_n = e_1, and E_n is the strictly lower
triangular Toeplitz matrix with entries gamma_{i-j+1} |b_{i-j}| bounding the
backward perturbation of the left-to-right recurrence.  All matrices here are
lower-triangular Toeplitz, so every product is a truncated convolution of
first columns and nothing larger than O(n) coefficients is ever stored.

Bound arithmetic is carried out in extended precision on nonnegative numbers
with every addition and multiplication rounded toward +inf, and the final
values are rounded up to binary64.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
from mpmath import libmp

from .errors import ConvergenceError, PreconditionError, VacuousBoundError
from .precision import (BINARY64, _mp_context, default_oracle_digits, extended,
                        gamma_fraction, upper_float)
from .report import ErrorReport, error_report
from .series import PowerSeries, invert

_CEIL = libmp.round_ceiling


class _Up:
    """Upward-rounded arithmetic on raw mpf tuples of nonnegative numbers."""

    def __init__(self, prec: int):
        self.prec = prec
        self.zero = libmp.fzero

    def add(self, a, b):
        return libmp.mpf_add(a, b, self.prec, _CEIL)

    def mul(self, a, b):
        return libmp.mpf_mul(a, b, self.prec, _CEIL)

    def frac(self, x: Fraction):
        return libmp.from_rational(x.numerator, x.denominator, self.prec, _CEIL)

    def conv(self, f, g, n):
        """First n+1 coefficients of the convolution of nonnegative f and g."""
        out = []
        for k in range(n + 1):
            s = self.zero
            for j in range(k + 1):
                if f[j] != self.zero and g[k - j] != self.zero:
                    s = self.add(s, self.mul(f[j], g[k - j]))
            out.append(s)
        return out


# Relative slack for the extended-precision oracle coefficients |c_k| fed into
# the bounds; dwarfs their rounding error (~1e-95 relative) at 100 digits.
_ORACLE_SLACK = Fraction(1, 2 ** 200)


class BoundWorkspace:
    """Inputs shared by the series bounds: b, the exact inverse, E_n's column.

    Parameters
    ----------
    p : PowerSeries
        Series with p[0] == 1.
    n : int
        Truncation order.
    prec : int
        Mantissa bits of the analyzed arithmetic (53 for binary64).
    digits : int
        Oracle precision in decimal digits (>= 100).
    """

    def __init__(self, p: PowerSeries, n: int, prec: int = 53, digits: int | None = None):
        self.n = n
        self.x = extended(digits or default_oracle_digits())
        self.up = _Up(self.x.prec)
        self.u = Fraction(1, 2 ** prec)
        self.b = [self.x.convert(v) for v in p.coeffs[: n + 1]]
        self.c = invert(PowerSeries(tuple(self.b)), n, self.x).coeffs
        slack = self.up.frac(1 + _ORACLE_SLACK)
        self.abs_b = [abs(v)._mpf_ for v in self.b]
        self.abs_c = [self.up.mul(abs(v)._mpf_, slack) for v in self.c]
        # first column of E_n: gamma_{k+1} |b_k| for k >= 1, zero diagonal
        self.e = [self.up.zero] + [
            self.up.mul(self.up.frac(gamma_fraction(k + 1, prec)), self.abs_b[k])
            for k in range(1, n + 1)]

    def mpf(self, raw):
        return self.x.mp.make_mpf(raw)

    def oracle(self) -> PowerSeries:
        return PowerSeries(tuple(self.c))


def _as_mpf(raw, up):
    return _mp_context(up.prec).make_mpf(raw)


def _to_output(values, up):
    return tuple(upper_float(_as_mpf(v, up)) for v in values)


def theorem31_bound(p: PowerSeries, n: int, prec: int = 53, digits: int | None = None,
                    workspace: BoundWorkspace | None = None) -> tuple:
    """Componentwise bound on |C_hat - C| for the left-to-right recurrence.

    Returns B = (I - |T^-1| E)^-1 |T^-1| E |C| as binary64 numbers rounded
    upward.  B[0] = 0 since c_0 = 1 is exact.
    """
    ws = workspace or BoundWorkspace(p, n, prec, digits)
    up = ws.up
    # |T^-1| E is Toeplitz with first column m = |c| * e
    m = up.conv(ws.abs_c, ws.e, n)
    rhs = up.conv(ws.abs_c, up.conv(ws.e, ws.abs_c, n), n)
    B = []
    for i in range(n + 1):
        s = rhs[i]
        for j in range(i):
            if m[i - j] != up.zero and B[j] != up.zero:
                s = up.add(s, up.mul(m[i - j], B[j]))
        if libmp.mpf_sign(s) < 0:
            raise AssertionError("negative entry in Neumann-series solve")
        B.append(s)
    return _to_output(B, up)


def _nonneg_inverse(s, n, up):
    """Coefficients of 1/(1 - s) for a nonnegative series s with s_0 = 0."""
    r = [libmp.fone]
    for k in range(1, n + 1):
        acc = up.zero
        for j in range(1, k + 1):
            if s[j] != up.zero:
                acc = up.add(acc, up.mul(s[j], r[k - j]))
        r.append(acc)
    return r


def _perturbation_ratio(ws: BoundWorkspace, u: Fraction, scale: int, square: str):
    up = ws.up
    n = ws.n
    d = [up.zero] + [up.mul(up.mul(up.frac(u), ws.abs_b[j]), libmp.from_int(scale))
                     for j in range(1, n + 1)]
    if square == "abs_of_square":
        sq = _square(ws)
    else:
        sq = up.conv(ws.abs_c, ws.abs_c, n)
    num = up.conv(sq, d, n)
    den = _nonneg_inverse(up.conv(ws.abs_c, d, n), n, up)
    return up.conv(num, den, n)


def _square(ws: BoundWorkspace):
    """|q^2| with the square formed in extended precision, inflated by the slack."""
    up = ws.up
    n = ws.n
    c = ws.c
    slack = up.frac(1 + _ORACLE_SLACK * (n + 2))
    out = []
    for k in range(n + 1):
        s = c[0] * c[k]
        for j in range(1, k + 1):
            s += c[j] * c[k - j]
        out.append(up.mul(abs(s)._mpf_, slack))
    return out


def _as_fraction(u) -> Fraction:
    if isinstance(u, Fraction):
        return u
    if isinstance(u, (int, float)):
        return Fraction(u)
    mpf_val = getattr(u, "_mpf_", None)
    if mpf_val is not None:
        man, exp = libmp.to_man_exp(mpf_val)
        return Fraction(man) * Fraction(2) ** exp
    return Fraction(u)


def condition_bound(p: PowerSeries, n: int, u=2.0 ** -53, digits: int | None = None,
                    workspace: BoundWorkspace | None = None) -> tuple:
    """Coefficients of |q^2| |dp| / (1 - |q| |dp|) with |dp| = sum_{j>=1} u |p_j| x^j.

    ``|q^2|`` is the coefficientwise absolute value of the square of the
    exact inverse q = 1/p; the first-order term |q^2||dp| is attained by a
    suitable choice of signs in the perturbation.  Division by 1 - |q||dp| is
    multiplication by its (positive) inverse series.
    """
    ws = workspace or BoundWorkspace(p, n, 53, digits)
    vals = _perturbation_ratio(ws, _as_fraction(u), 1, "abs_of_square")
    return _to_output(vals, ws.up)


def first_order_condition(p: PowerSeries, n: int, u=2.0 ** -53, digits: int | None = None,
                          workspace: BoundWorkspace | None = None) -> tuple:
    """The first-order term (|q^2| |dp|)_k of :func:`condition_bound`."""
    ws = workspace or BoundWorkspace(p, n, 53, digits)
    up = ws.up
    uf = up.frac(_as_fraction(u))
    d = [up.zero] + [up.mul(uf, ws.abs_b[j]) for j in range(1, n + 1)]
    return tuple(_as_mpf(v, up) for v in up.conv(_square(ws), d, n))


def stability_bound(p: PowerSeries, n: int, u=2.0 ** -53, digits: int | None = None,
                    workspace: BoundWorkspace | None = None) -> tuple:
    """The condition bound with |dp| scaled by 2(n+1).

    2(n+1)|q^2||dp| / (1 - 2(n+1)|q||dp|), valid for (n+1)u < 1/2.  Equal
    to ``condition_bound(p, n, 2*(n+1)*u)``.
    """
    uf = _as_fraction(u)
    if (n + 1) * uf >= Fraction(1, 2):
        raise PreconditionError("stability bound needs (n+1)u < 1/2")
    ws = workspace or BoundWorkspace(p, n, 53, digits)
    vals = _perturbation_ratio(ws, uf, 2 * (n + 1), "abs_of_square")
    return _to_output(vals, ws.up)


def infnorm_bound(p: PowerSeries, n: int, prec: int = 53, digits: int | None = None,
                  workspace: BoundWorkspace | None = None) -> float:
    """Norm-wise bound || |T^-1| E |C| ||_inf / (1 - || |T^-1| E ||_inf).

    Raises :class:`VacuousBoundError` when the denominator is not positive.
    """
    ws = workspace or BoundWorkspace(p, n, prec, digits)
    up = ws.up
    m = up.conv(ws.abs_c, ws.e, n)
    rhs = up.conv(ws.abs_c, up.conv(ws.e, ws.abs_c, n), n)
    mp = ws.x.mp
    # the last row of a lower-triangular Toeplitz matrix carries the full column sum
    norm_m = mp.fsum(mp.make_mpf(v) for v in m)
    norm_rhs = max((mp.make_mpf(v) for v in rhs), default=mp.zero)
    denom = 1 - norm_m
    if denom <= 0:
        raise VacuousBoundError(f"norm bound vacuous: || |T^-1| E ||_inf = {float(norm_m):.3g} >= 1")
    return upper_float(norm_rhs / denom * (1 + ws.x.u * 8))


def least_singular_value(p: PowerSeries, n: int, tol: float = 1e-12, maxiter: int = 20000,
                         digits: int | None = None) -> float:
    """Smallest singular value of T_n by power iteration on T_n^-T T_n^-1.

    T_n^-1 is applied as a convolution with the inverse coefficients; its
    transpose uses persymmetry (T^T = J T J with J the reversal).  Raises
    :class:`ConvergenceError` carrying the last estimate if successive
    estimates never agree to ``tol`` relatively.
    """
    x = extended(digits or default_oracle_digits())
    c = np.array([float(v) for v in
                  invert(PowerSeries.from_values(p.coeffs[: n + 1], x), n, x).coeffs])

    def apply(v):
        return np.convolve(c, v)[: n + 1]

    def apply_t(v):
        return apply(v[::-1])[::-1]

    v = np.ones(n + 1) / math.sqrt(n + 1)
    sigma = None
    for _ in range(maxiter):
        w = apply(v)
        s_new = float(np.linalg.norm(w))
        z = apply_t(w)
        nz = np.linalg.norm(z)
        if nz == 0:
            break
        v = z / nz
        if sigma is not None and abs(s_new - sigma) <= tol * s_new:
            return 1.0 / s_new
        sigma = s_new
    raise ConvergenceError("estimate unconverged", None if sigma is None else 1.0 / sigma)


def series_report(p: PowerSeries, n: int, which=("thm31", "cond", "stab"), label: str = "",
                  digits: int | None = None, exclude_odd: bool = False) -> ErrorReport:
    """Invert ``p`` in binary64 and tabulate errors against the extended oracle."""
    p64 = PowerSeries.from_values(p.coeffs[: n + 1], BINARY64)
    computed = invert(p64, n, BINARY64).coeffs
    ws = BoundWorkspace(p64, n, 53, digits)
    funcs = {
        "thm31": lambda: theorem31_bound(p64, n, workspace=ws),
        "cond": lambda: condition_bound(p64, n, workspace=ws),
        "stab": lambda: stability_bound(p64, n, workspace=ws),
    }
    bounds = {}
    for name in which:
        if name == "infnorm":
            continue
        if name not in funcs:
            raise PreconditionError(f"unknown bound {name!r}")
        bounds[name] = funcs[name]()
    rep = error_report(computed, ws.c, bounds, label=label, ctx=ws.x)
    if exclude_odd:
        rep.excluded = tuple(ex or (k % 2 == 1) for k, ex in zip(rep.k, rep.excluded))
    if "infnorm" in which:
        try:
            rep.metadata["infnorm"] = infnorm_bound(p64, n, workspace=ws)
        except VacuousBoundError as exc:
            rep.metadata["infnorm"] = str(exc)
    return rep
