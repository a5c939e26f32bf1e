"""Pseudozero sets, root condition numbers and the partial-fraction view of 1/p.

For a monic p with distinct nonzero roots a_j,

    q = 1/p = sum_j Res(q, a_j) / (z - a_j),   Res(q, a_j) = 1 / prod_{i != j} (a_j - a_i)

so q_k = -sum_j Res(q, a_j) / a_j^{k+1}.  Everything in this module except the
grid evaluation runs in extended precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import CoincidentRootsError, NearMultipleRootError, PreconditionError
from .polynomial import Polynomial, RootSet, abs_evaluate, derivative, evaluate
from .precision import BINARY64, PrecisionContext, extended


@dataclass(frozen=True)
class RootAnalysis:
    """Roots with their residues Res(q, a_j) and (if known) condition numbers."""

    roots: tuple
    residues: tuple
    kappa: tuple | None = None
    ctx: PrecisionContext = field(default_factory=extended)


def _ext(ctx):
    ctx = ctx or extended()
    if not ctx.is_extended:
        raise PreconditionError("this operation runs in extended precision")
    return ctx


def pseudozero_indicator(p: Polynomial, z, ctx: PrecisionContext = BINARY64):
    """|p(z)| / |p|(|z|); z lies in the eps-pseudozero set iff this is <= eps."""
    if all(c == 0 for c in p.coeffs):
        raise PreconditionError("indicator undefined for the zero polynomial")
    den = abs_evaluate(p, abs(z), ctx)
    if den == 0:
        # only at z = 0 with p_0 = 0, where p(0) = 0 as well
        return ctx.zero
    return abs(evaluate(p, z, ctx)) / den


def root_condition(p: Polynomial, a, ctx: PrecisionContext | None = None, tol=None):
    """kappa(a, p) = |p|(|a|) / |p'(a)| for a simple root a."""
    ctx = _ext(ctx)
    a = ctx.convert_complex(a)
    dp = derivative(p)
    slope = abs(evaluate(dp, a, ctx))
    scale = abs_evaluate(dp, abs(a), ctx)
    tol = ctx.u * 16 * max(p.degree, 1) if tol is None else tol
    if slope == 0 or slope <= tol * scale:
        raise NearMultipleRootError(f"|p'(a)| = {float(slope):.3g} too small at a = {a}")
    return abs_evaluate(p, abs(a), ctx) / slope


def residues(roots: RootSet | Sequence, p: Polynomial | None = None,
             ctx: PrecisionContext | None = None) -> RootAnalysis:
    """Residues of q = 1/prod(z - a_i) at each root; condition numbers when ``p`` is given."""
    ctx = _ext(ctx)
    rs = roots.roots if isinstance(roots, RootSet) else tuple(roots)
    a = tuple(ctx.convert_complex(r) for r in rs)
    res = []
    for j, aj in enumerate(a):
        prod = ctx.mp.mpc(1)
        for i, ai in enumerate(a):
            if i == j:
                continue
            d = aj - ai
            if d == 0:
                raise CoincidentRootsError(f"roots {j} and {i} coincide")
            prod *= d
        res.append(1 / prod)
    kappa = tuple(root_condition(p, aj, ctx) for aj in a) if p is not None else None
    return RootAnalysis(a, tuple(res), kappa, ctx)


def _nonzero(analysis: RootAnalysis):
    if any(a == 0 for a in analysis.roots):
        raise PreconditionError("zero root: p_0 = 0 is excluded")


def inverse_coeff_from_roots(analysis: RootAnalysis, k: int):
    """q_k = -sum_j Res(q, a_j) / a_j^{k+1} (complex; take .real for real p)."""
    _nonzero(analysis)
    mp = analysis.ctx.mp
    return -mp.fsum(r / a ** (k + 1) for r, a in zip(analysis.residues, analysis.roots))


def root_error_bound(p: Polynomial, a_hat, eps, ctx: PrecisionContext | None = None):
    """(eps |p|(|a_hat|))^(1/n): distance from a_hat in Z_eps(p) to the nearest root."""
    ctx = _ext(ctx)
    if eps < 0:
        raise PreconditionError("eps must be nonnegative")
    val = ctx.convert(eps) * abs_evaluate(p, abs(ctx.convert_complex(a_hat)), ctx)
    if val == 0:
        return ctx.zero
    return val ** (ctx.one / p.degree)


def kappa_coefficient_bound(analysis: RootAnalysis, p: Polynomial, k: int, eps):
    """Asymptotic bound on |(q - q_hat)_k| for e(p_hat) <= eps.

    eps * sum_j |Res_j / a_j^{k+1}| ((k+1) kappa_j / |a_j|
                                     + sum_{i != j} (kappa_i + kappa_j) / |a_j - a_i|)
    """
    _nonzero(analysis)
    ctx = analysis.ctx
    mp = ctx.mp
    kappa = analysis.kappa
    if kappa is None:
        kappa = tuple(root_condition(p, a, ctx) for a in analysis.roots)
    total = mp.zero
    for j, (aj, rj) in enumerate(zip(analysis.roots, analysis.residues)):
        inner = (k + 1) * kappa[j] / abs(aj)
        for i, ai in enumerate(analysis.roots):
            if i == j:
                continue
            gap = abs(aj - ai)
            if gap == 0:
                raise CoincidentRootsError(f"roots {j} and {i} coincide")
            inner += (kappa[i] + kappa[j]) / gap
        total += abs(rj / aj ** (k + 1)) * inner
    return ctx.convert(eps) * total


def first_order_coeff_error(analysis: RootAnalysis, deltas: Sequence, k: int):
    """First-order (q - q_hat)_k for root perturbations a_hat_j = a_j + deltas[j]."""
    _nonzero(analysis)
    ctx = analysis.ctx
    mp = ctx.mp
    da = [ctx.convert_complex(d) for d in deltas]
    if len(da) != len(analysis.roots):
        raise PreconditionError("one perturbation per root required")
    total = mp.mpc(0)
    for j, (aj, rj) in enumerate(zip(analysis.roots, analysis.residues)):
        inner = (k + 1) * da[j] / aj
        for i, ai in enumerate(analysis.roots):
            if i == j:
                continue
            if aj == ai:
                raise CoincidentRootsError(f"roots {j} and {i} coincide")
            inner += (da[j] - da[i]) / (aj - ai)
        total += rj / aj ** (k + 1) * inner
    return -total


@dataclass(frozen=True)
class PseudozeroGrid:
    """Indicator values on a rectangle, row-major: ``values[i_im, i_re]``."""

    re_min: float
    re_max: float
    im_min: float
    im_max: float
    resolution: int
    values: np.ndarray
    eps_levels: tuple = (1e-16, 1e-12, 1e-8)

    @property
    def re_axis(self) -> np.ndarray:
        return np.linspace(self.re_min, self.re_max, self.resolution)

    @property
    def im_axis(self) -> np.ndarray:
        return np.linspace(self.im_min, self.im_max, self.resolution)

    def member(self, eps) -> np.ndarray:
        """Boolean mask of grid points in Z_eps."""
        return self.values <= eps

    def contours(self, levels=None) -> dict:
        """Level-set polylines {eps: [array of (re, im) points, ...]}."""
        import contourpy
        gen = contourpy.contour_generator(self.re_axis, self.im_axis, self.values)
        return {eps: gen.lines(eps) for eps in (levels or self.eps_levels)}


def _two_sum(a, b):
    s = a + b
    bp = s - a
    return s, (a - (s - bp)) + (b - bp)


def _split(x):
    hi = float(x)
    return hi, float(x - hi)


def _abs_horner(coeffs, r):
    acc = np.full_like(r, abs(float(coeffs[-1])))
    for c in reversed(coeffs[:-1]):
        acc = acc * r + abs(float(c))
    return acc


def _product_modulus(roots, zr, zi):
    """prod |z - a_i| with each root held as an unevaluated double-double."""
    out = np.ones_like(zr)
    for a in roots:
        re_hi, re_lo = _split(getattr(a, "real", a))
        im_hi, im_lo = _split(getattr(a, "imag", 0))
        s, e = _two_sum(zr, -re_hi)
        dr = s + (e - re_lo)
        s, e = _two_sum(zi, -im_hi)
        di = s + (e - im_lo)
        out = out * np.hypot(dr, di)
    return out


def pseudozero_grid(p: Polynomial, rect: Sequence[float], resolution: int,
                    ctx: PrecisionContext = BINARY64, roots: RootSet | None = None,
                    eps_levels: Sequence[float] = (1e-16, 1e-12, 1e-8)) -> PseudozeroGrid:
    """Evaluate |p(z)|/|p|(|z|) on a resolution x resolution grid over ``rect``.

    ``rect`` is (re_min, re_max, im_min, im_max).  With ``roots`` (monic p =
    prod (z - a_i)), |p(z)| comes from the product of distances to the roots,
    each difference accurate to a few ulps, which resolves indicator levels
    near 1e-16.  Otherwise p(z) is evaluated by Horner, vectorized in
    binary64 or point by point in an extended ``ctx``.
    """
    re_min, re_max, im_min, im_max = (float(v) for v in rect)
    if resolution < 2:
        raise PreconditionError("resolution must be at least 2 per axis")
    if not (re_max > re_min and im_max > im_min):
        raise PreconditionError("degenerate rectangle")
    re_axis = np.linspace(re_min, re_max, resolution)
    im_axis = np.linspace(im_min, im_max, resolution)
    zr, zi = np.meshgrid(re_axis, im_axis)
    modulus = np.hypot(zr, zi)
    if roots is not None:
        if not p.monic or len(roots) != p.degree:
            raise PreconditionError("product form needs a monic p and all of its roots")
        vals = _product_modulus(roots.roots, zr, zi) / _abs_horner(p.coeffs, modulus)
    elif ctx.is_extended:
        vals = np.empty_like(zr)
        for i in range(resolution):
            for j in range(resolution):
                z = complex(zr[i, j], zi[i, j])
                vals[i, j] = float(pseudozero_indicator(p, z, ctx))
    else:
        z = zr + 1j * zi
        coeffs = [complex(c) for c in p.coeffs]
        acc = np.full_like(z, coeffs[-1])
        for c in reversed(coeffs[:-1]):
            acc = acc * z + c
        vals = np.abs(acc) / _abs_horner(p.coeffs, modulus)
    return PseudozeroGrid(re_min, re_max, im_min, im_max, resolution, vals, tuple(eps_levels))
