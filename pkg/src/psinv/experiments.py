"""Reproduction of the deflation, pseudozero and inversion experiments.

Each driver computes in binary64, measures against an extended-precision
oracle run on the same binary64 inputs, and returns :class:`ErrorReport`
tables.  :func:`write_experiment` serializes them as CSV plus a JSON
metadata file.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .bounds import series_report
from .deflation import deflate_forward, deflation_oracle
from .errors import PreconditionError
from .polynomial import Polynomial, RootSet, binomial_power, chebyshev, chebyshev_roots, from_roots
from .precision import BINARY64, default_oracle_digits, extended, upper_float
from .pseudozero import kappa_coefficient_bound, pseudozero_grid, residues
from .report import ErrorReport, error_report
from .series import PowerSeries, invert

FIG3_SERIES = ("exp", "cos", "randn", "log")
FIG2_CASES = ("well", "ill")
RANDN_GENERATOR = "numpy.random.Generator(PCG64(seed)).standard_normal"

# Gates frozen from oracle runs at 100 digits (see tests/test_acceptance.py).
THRESHOLDS = {
    "fig1a_growth_ratio_err95_over_err10_min": 1e8,
    "fig1a_product_rel_err_max": 1e-12,
    "fig1b_near_one_rel_err_max": 1e-10,
    "fig1b_near_zero_rel_err_min": 1e-2,
    "fig2_ill_bound_over_actual_min_peak": 1e4,
    "fig3_median_bound1_over_actual_max": 1e4,
}

RECONSTRUCTIONS = {
    "fig1b_degree": "Chebyshev degree 100 inferred from root labels j=53 and j=3",
    "fig2_rect": "plot rectangles chosen to cover all roots",
    "fig2_eps": "eps levels 1e-16, 1e-12, 1e-8; the kappa bound uses eps = 2^-53",
    "fig3_exp": "exp(x) stands in for the unnamed benign panel",
}


def _digits(digits):
    d = digits or default_oracle_digits()
    if d < 100:
        raise PreconditionError("oracle needs at least 100 digits")
    return d


def exp_series(n: int) -> PowerSeries:
    return PowerSeries.from_values([Fraction(1, math.factorial(k)) for k in range(n + 1)])


def cos_series(n: int) -> PowerSeries:
    return PowerSeries.from_values(
        [0 if k % 2 else Fraction((-1) ** (k // 2), math.factorial(k)) for k in range(n + 1)])


def log_series(n: int) -> PowerSeries:
    """1 + log(1 + z)."""
    return PowerSeries.from_values([1] + [Fraction((-1) ** (k + 1), k) for k in range(1, n + 1)])


def randn_series(n: int, seed: int) -> PowerSeries:
    gen = np.random.Generator(np.random.PCG64(seed))
    return PowerSeries.from_values([1.0] + [float(v) for v in gen.standard_normal(n)])


def fig3_series(which: str, n: int = 100, seed: int = 0) -> PowerSeries:
    if which == "exp":
        return exp_series(n)
    if which == "cos":
        return cos_series(n)
    if which == "log":
        return log_series(n)
    if which == "randn":
        return randn_series(n, seed)
    raise PreconditionError(f"unknown series tag {which!r}; expected one of {FIG3_SERIES}")


def fig1a(digits: int | None = None) -> tuple[ErrorReport, ErrorReport]:
    """(x - sqrt2)^99 by deflating (x - sqrt2)^100, and by multiplying 99 factors."""
    x = extended(_digits(digits))
    sqrt2 = x.mp.sqrt(2)
    a = float(sqrt2)
    p = binomial_power(sqrt2, 100, BINARY64)
    res = deflate_forward(p, a, BINARY64)
    orc = deflation_oracle(p, a, x)
    rep_a = error_report(res.quotient.coeffs[:-1], orc.coeffs[:-1], {"bound": res.bound},
                         label="fig1a_deflation", ctx=x)
    prod = from_roots([a] * 99, BINARY64)
    prod_orc = from_roots([a] * 99, x)
    rep_b = error_report(prod.coeffs[:-1], prod_orc.coeffs[:-1], label="fig1a_product", ctx=x)
    for rep in (rep_a, rep_b):
        rep.metadata.update(root=repr(a), degree=99)
    return rep_a, rep_b


def chebyshev_monic(n: int) -> Polynomial:
    """T_n / 2^(n-1) in binary64; the scaling is by a power of two and exact."""
    t = chebyshev(n)
    lead = t.coeffs[-1]
    return Polynomial(tuple(BINARY64.convert(Fraction(c, lead)) for c in t.coeffs))


def fig1b(digits: int | None = None, degree: int = 100) -> tuple[ErrorReport, ErrorReport]:
    """Forward deflation of T_100 by its root near 0 (j=53) and near 1 (j=3)."""
    x = extended(_digits(digits))
    p = chebyshev_monic(degree)
    roots = chebyshev_roots(degree, BINARY64)
    reports = []
    for j, tag in ((53, "near_zero"), (3, "near_one")):
        a = roots.roots[j - 1]
        res = deflate_forward(p, a, BINARY64)
        orc = deflation_oracle(p, a, x)
        rep = error_report(res.quotient.coeffs[:-1], orc.coeffs[:-1], {"bound": res.bound},
                           label=f"fig1b_{tag}", ctx=x)
        rep.metadata.update(root_index=j, root=repr(a), degree=degree)
        reports.append(rep)
    return reports[0], reports[1]


def fig2_roots(which: str, ctx=None) -> RootSet:
    x = ctx or extended()
    mp = x.mp
    if which == "well":
        return RootSet(tuple(mp.mpf(2) ** (mp.mpf(i) / 2) for i in range(-3, 10)))
    if which == "ill":
        return RootSet(tuple(i * mp.sqrt(2) for i in range(1, 14)))
    raise PreconditionError(f"unknown fig2 case {which!r}; expected one of {FIG2_CASES}")


FIG2_RECT = {"well": (-2.0, 26.0, -8.0, 8.0), "ill": (-1.0, 21.0, -8.0, 8.0)}


def fig2(which: str, n: int = 200, resolution: int = 400, digits: int | None = None):
    """Pseudozero grid and inversion error report for one degree-13 polynomial.

    The series inverted is p/p_0 (constant term 1).  The bound column is the
    kappa-based asymptotic bound with eps = 2^-53, scaled by |p_0| to the
    normalized inverse, so relative errors compare directly.
    """
    x = extended(_digits(digits))
    roots = fig2_roots(which, x)
    p = from_roots(roots, x)
    analysis = residues(roots, p, x)
    p0 = p.coeffs[0]
    normalized = [c / p0 for c in p.coeffs] + [x.zero] * max(0, n - p.degree)
    oracle = invert(PowerSeries(tuple(normalized)), n, x)
    p64 = PowerSeries.from_values(normalized[: n + 1], BINARY64)
    computed = invert(p64, n, BINARY64)
    u = x.convert(Fraction(1, 2 ** 53))
    bound = [upper_float(kappa_coefficient_bound(analysis, p, k, u) * abs(p0)) for k in range(n + 1)]
    rep = error_report(computed.coeffs, oracle.coeffs, {"kappa": bound}, label=f"fig2_{which}", ctx=x)
    rep.metadata.update(degree=p.degree, kappa=[float(k) for k in analysis.kappa])
    grid = pseudozero_grid(p.to_context(BINARY64), FIG2_RECT[which], resolution, roots=roots)
    return grid, rep


def fig3(which: str, seed: int = 0, n: int = 100, digits: int | None = None) -> ErrorReport:
    """Binary64 inversion to order n with bound 1 (componentwise rounding) and bound 2 (conditioning)."""
    p = fig3_series(which, n, seed)
    rep = series_report(p, n, ("thm31", "cond"), label=f"fig3_{which}",
                        digits=_digits(digits), exclude_odd=(which == "cos"))
    rep.metadata["series"] = which
    if which == "randn":
        rep.metadata.update(seed=seed, generator=RANDN_GENERATOR)
    return rep


FIG3_COLUMNS = {"k": "k", "c_k_oracle": "oracle", "rel_err_binary64": "rel_err",
                "thm31_rel": "rel_bounds.thm31", "cond_rel": "rel_bounds.cond",
                "excluded": "excluded"}
DEFLATION_COLUMNS = {"k": "k", "coeff": "computed", "oracle_coeff": "oracle",
                     "abs_err": "abs_err", "rel_err": "rel_err", "bound": "bounds.bound",
                     "excluded": "excluded"}
PRODUCT_COLUMNS = {"k": "k", "coeff": "computed", "oracle_coeff": "oracle",
                   "abs_err": "abs_err", "rel_err": "rel_err", "excluded": "excluded"}
FIG2_COLUMNS = {"k": "k", "c_k_oracle": "oracle", "rel_err_binary64": "rel_err",
                "kappa_rel": "rel_bounds.kappa", "excluded": "excluded"}


def grid_csv(grid) -> str:
    lines = ["re,im,indicator"]
    re_axis, im_axis = grid.re_axis, grid.im_axis
    for i, im in enumerate(im_axis):
        for j, re in enumerate(re_axis):
            lines.append(f"{float(re)!r},{float(im)!r},{float(grid.values[i, j])!r}")
    return "\n".join(lines) + "\n"


def contour_csv(grid) -> str:
    lines = ["eps,segment,re,im"]
    for eps, segments in grid.contours().items():
        for s, seg in enumerate(segments):
            for re, im in seg:
                lines.append(f"{eps!r},{s},{float(re)!r},{float(im)!r}")
    return "\n".join(lines) + "\n"


def write_experiment(name: str, out_dir, variant: str | None = None, seed: int = 0,
                     digits: int | None = None, resolution: int = 400) -> list[Path]:
    """Run one experiment and write its CSV tables and ``<name>_metadata.json``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    d = _digits(digits)
    files: dict[str, str] = {}
    meta = {"experiment": name, "version": __version__,
            "oracle": extended(d).describe(), "working": BINARY64.describe(),
            "thresholds": THRESHOLDS}
    if name == "fig1a":
        rep_a, rep_b = fig1a(d)
        files["fig1a_deflation.csv"] = rep_a.to_csv(DEFLATION_COLUMNS)
        files["fig1a_product.csv"] = rep_b.to_csv(PRODUCT_COLUMNS)
        meta["reports"] = [rep_a.metadata, rep_b.metadata]
    elif name == "fig1b":
        near0, near1 = fig1b(d)
        files["fig1b_near_zero.csv"] = near0.to_csv(DEFLATION_COLUMNS)
        files["fig1b_near_one.csv"] = near1.to_csv(DEFLATION_COLUMNS)
        meta["reports"] = [near0.metadata, near1.metadata]
        meta["reconstruction"] = {"fig1b_degree": RECONSTRUCTIONS["fig1b_degree"]}
    elif name == "fig2":
        cases = [variant] if variant else list(FIG2_CASES)
        meta["reports"] = []
        for case in cases:
            grid, rep = fig2(case, resolution=resolution, digits=d)
            files[f"fig2_{case}_errors.csv"] = rep.to_csv(FIG2_COLUMNS)
            files[f"fig2_{case}_grid.csv"] = grid_csv(grid)
            files[f"fig2_{case}_contours.csv"] = contour_csv(grid)
            meta["reports"].append(dict(rep.metadata, case=case, rect=list(FIG2_RECT[case]),
                                        resolution=resolution, eps_levels=list(grid.eps_levels),
                                        grid_min=float(grid.values.min()),
                                        grid_members={repr(e): int(grid.member(e).sum())
                                                      for e in grid.eps_levels}))
        meta["reconstruction"] = {k: RECONSTRUCTIONS[k] for k in ("fig2_rect", "fig2_eps")}
    elif name == "fig3":
        cases = [variant] if variant else list(FIG3_SERIES)
        meta["reports"] = []
        for case in cases:
            rep = fig3(case, seed=seed, digits=d)
            files[f"fig3_{case}.csv"] = rep.to_csv(FIG3_COLUMNS)
            meta["reports"].append(rep.metadata)
        meta["seed"] = seed
        meta["reconstruction"] = {"fig3_exp": RECONSTRUCTIONS["fig3_exp"]}
    else:
        raise PreconditionError(f"unknown experiment {name!r}")
    written = []
    for fname, text in files.items():
        path = out / fname
        path.write_text(text)
        written.append(path)
    meta_path = out / f"{name}_metadata.json"
    meta_path.write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
    written.append(meta_path)
    return written
