import math

import pytest
from hypothesis import given, settings, strategies as st

from psinv.errors import PreconditionError
from psinv.precision import extended, gamma_fraction
from psinv.quadratic import (MINUS, PLUS, QuadraticCase, abs_fibonacci, closed_form_coeff,
                             invert_quadratic, normalize_quadratic, quadratic_rel_bound)
from psinv.series import PowerSeries, invert


def test_plus_b1():
    c = invert_quadratic(QuadraticCase(1.0, PLUS, 3)).coeffs
    assert c[3] == -1 + 2 * 1
    b = 0.7
    c = invert_quadratic(QuadraticCase(b, PLUS, 3)).coeffs
    assert c[2] == pytest.approx(b * b - 1)
    assert c[3] == pytest.approx(-b ** 3 + 2 * b)


def test_minus_b1():
    assert invert_quadratic(QuadraticCase(1.0, MINUS, 3)).coeffs == (-1.0, -1.0, -2.0, -3.0)


def test_plus_matches_series_invert():
    for b in (0.3, 1.9, 2.5):
        p = PowerSeries((1.0, b, 1.0) + (0.0,) * 37)
        assert invert_quadratic(QuadraticCase(b, PLUS, 39)).coeffs == invert(p, 39).coeffs


def test_case_validation():
    with pytest.raises(PreconditionError):
        QuadraticCase(1.0, 0, 3)


def test_closed_form_b3():
    assert float(closed_form_coeff(QuadraticCase(3.0, PLUS, 1), 1)) == pytest.approx(-3.0)


def test_closed_form_matches_recurrence(x100):
    case = QuadraticCase(0.5, PLUS, 10)
    rec = invert_quadratic(case, x100).coeffs[10]
    assert abs(closed_form_coeff(case, 10, x100) - rec) <= 1e-90 * abs(rec)


def test_closed_form_repeated_roots():
    with pytest.raises(PreconditionError):
        closed_form_coeff(QuadraticCase(2.0, PLUS, 3), 3)


def test_unit_circle_growth(x100):
    c = invert_quadratic(QuadraticCase(1.9, PLUS, 200), x100).coeffs
    assert all(abs(v) <= k + 1 for k, v in enumerate(c))


def test_bound_k1():
    case = QuadraticCase(0.3, PLUS, 1)
    g2 = gamma_fraction(2, 53)
    assert quadratic_rel_bound(case, 1) >= float(g2)
    assert quadratic_rel_bound(case, 1) <= float(g2) * (1 + 1e-14)


def test_bound_b0_even():
    case = QuadraticCase(0.0, PLUS, 10)
    assert quadratic_rel_bound(case, 10) == pytest.approx(float(gamma_fraction(20, 53)), rel=1e-14)
    assert quadratic_rel_bound(case, 9) == math.inf


def _fib_int_coeffs(k):
    """Integer coefficients (in b) of F_k from F_{k+1} = -b F_k - F_{k-1}."""
    prev, cur = [1], [0, -1]
    if k == 0:
        return prev
    for _ in range(k - 1):
        nxt = [0] + [-c for c in cur]
        for i, c in enumerate(prev):
            nxt[i] -= c
        prev, cur = cur, nxt
    return cur


@pytest.mark.parametrize("k", range(13))
def test_sign_pattern_and_abs(k, x100):
    coeffs = _fib_int_coeffs(k)
    nz = [(d, c) for d, c in enumerate(coeffs) if c]
    assert all(d % 2 == k % 2 for d, _ in nz)
    signs = [c > 0 for _, c in sorted(nz, reverse=True)]
    assert signs[0] == (k % 2 == 0)
    assert all(s != t for s, t in zip(signs, signs[1:]))
    b = x100.convert(1.3)
    ref = sum(abs(c) * b ** d for d, c in enumerate(coeffs))
    assert abs(abs_fibonacci(1.3, k, x100) - ref) <= 1e-95 * ref


@settings(max_examples=25, deadline=None)
@given(st.floats(0.05, 4.0))
def test_minus_case_accuracy(b):
    x = extended(100)
    case = QuadraticCase(b, MINUS, 60)
    c = invert_quadratic(case).coeffs
    o = invert_quadratic(case, x).coeffs
    for k in range(61):
        rel = abs(x.convert(c[k]) - o[k]) / abs(o[k])
        assert rel <= x.convert(gamma_fraction(2 * k, 53))


@pytest.mark.parametrize("b", [0.3, 1.0, 1.9, 2.5])
def test_dominance(b, x100):
    case = QuadraticCase(b, PLUS, 300)
    c = invert_quadratic(case).coeffs
    o = invert_quadratic(case, x100).coeffs
    for k in range(301):
        if o[k] == 0:
            continue
        rel = abs(x100.convert(c[k]) - o[k]) / abs(o[k])
        assert rel <= quadratic_rel_bound(case, k)


def test_normalize():
    bp, sign, s = normalize_quadratic(4.0, 2.0, 1.0)
    assert sign == PLUS and s == 2.0 and bp == 1.0
    bp, sign, s = normalize_quadratic(1.0, 3.0, -4.0)
    assert sign == MINUS and s == 0.5 and bp == 1.5
    with pytest.raises(PreconditionError):
        normalize_quadratic(1.0, 1.0, 0.0)
