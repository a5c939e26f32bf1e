import math

import pytest

from psinv.deflation import (BACKWARD, FORWARD, deflate_backward, deflate_forward, deflation_oracle)
from psinv.errors import PreconditionError
from psinv.experiments import chebyshev_monic
from psinv.polynomial import Polynomial, binomial_power, chebyshev_roots, from_roots
from psinv.precision import BINARY64


def random_case(rng):
    n = int(rng.integers(1, 51))
    coeffs = tuple(float(v) for v in rng.standard_normal(n)) + (1.0,)
    a = float(rng.choice([-1.0, 1.0]) * 10 ** rng.uniform(-1, 1))
    return Polynomial(coeffs), a


def errors(res, orc, x):
    return [abs(x.convert(c) - o) for c, o in zip(res.quotient.coeffs[:-1], orc.coeffs[:-1])]


def test_forward_exact():
    res = deflate_forward(Polynomial((2.0, -3.0, 1.0)), 1.0)
    assert res.quotient.coeffs == (-2.0, 1.0)
    assert res.quotient.monic
    assert deflate_forward(Polynomial((4.0, -4.0, 1.0)), 2.0).quotient.coeffs == (-2.0, 1.0)


def test_degree_one(x100):
    p = Polynomial((-2.0, 1.0))
    assert deflate_forward(p, 2.0).quotient.coeffs == (1.0,)
    assert deflate_backward(p, 2.0).quotient.coeffs == (1.0,)
    assert deflation_oracle(p, 2.0, x100).coeffs == (1,)


def test_forward_zero_root():
    with pytest.raises(PreconditionError):
        deflate_forward(Polynomial((0.0, 1.0, 1.0)), 0.0)


def test_backward_exact():
    assert deflate_backward(Polynomial((2.0, -3.0, 1.0)), 2.0).quotient.coeffs == (-1.0, 1.0)


def test_backward_zero_root_is_shift():
    p = Polynomial((0.0, 0.3, -1.7, 2.2, 1.0))
    assert deflate_backward(p, 0.0).quotient.coeffs == (0.3, -1.7, 2.2, 1.0)


def test_requires_monic():
    with pytest.raises(PreconditionError):
        deflate_forward(Polynomial((2.0, 1.0, 2.0)), 1.0)


def test_oracle_exact(x100):
    q = deflation_oracle(Polynomial((2.0, -3.0, 1.0)), 1.0, x100)
    assert q.coeffs == (-2, 1)
    with pytest.raises(PreconditionError):
        deflation_oracle(Polynomial((2.0, -3.0, 1.0)), 0.0, x100)


def test_oracle_remultiplied(x100):
    mp = x100.mp
    a = mp.sqrt(3)
    p = from_roots([a, mp.mpf(2), -mp.pi, mp.mpf(1) / 7], x100)
    q = deflation_oracle(p, a, x100)
    back = from_roots([a], x100)
    prod = [mp.zero] * (len(q.coeffs) + 1)
    for i, c in enumerate(q.coeffs):
        for j, d in enumerate(back.coeffs):
            prod[i + j] += c * d
    for u, v in zip(prod, p.coeffs):
        assert abs(u - v) <= 1e-90 * max(1, abs(v))


def test_bounds_nonnegative_finite(rng):
    for _ in range(10):
        p, a = random_case(rng)
        for run in (deflate_forward, deflate_backward):
            b = run(p, a).bound
            assert all(v >= 0 and math.isfinite(v) for v in b)
            assert len(b) == p.degree - 1


def test_dominance_random(rng, x100):
    for _ in range(50):
        p, a = random_case(rng)
        for run, order in ((deflate_forward, FORWARD), (deflate_backward, BACKWARD)):
            res = run(p, a)
            orc = deflation_oracle(p, a, x100, order=order)
            assert all(e <= b for e, b in zip(errors(res, orc, x100), res.bound))


def test_forward_backward_agree_on_exact_root(rng, x100):
    # dyadic roots make p(a) = 0 exactly, so both orders share one exact quotient
    roots = [float(r) for r in (0.5, -1.25, 2.0, 3.75, -0.375, 1.5)]
    p = from_roots(roots, BINARY64)
    assert p.coeffs == from_roots(roots, x100).coeffs
    f = deflate_forward(p, 2.0)
    b = deflate_backward(p, 2.0)
    for cf, cb, bf, bb in zip(f.quotient.coeffs, b.quotient.coeffs, f.bound, b.bound):
        assert abs(cf - cb) <= bf + bb


def test_fig1a_growth(x100):
    sqrt2 = x100.mp.sqrt(2)
    a = float(sqrt2)
    p = binomial_power(sqrt2, 100)
    res = deflate_forward(p, a)
    orc = deflation_oracle(p, a, x100)
    rel = [float(e / abs(o)) for e, o in zip(errors(res, orc, x100), orc.coeffs[:-1])]
    assert max(rel[:31]) <= 1e-12
    assert rel[95] / rel[10] >= 1e8


def test_chebyshev_cross_orders(x100):
    p = chebyshev_monic(100)
    roots = chebyshev_roots(100).roots
    near_one, near_zero = roots[2], roots[52]
    b = deflate_backward(p, near_one)
    orc = deflation_oracle(p, near_one, x100, order=BACKWARD)
    rel_b = [float(e / abs(o)) for e, o in zip(errors(b, orc, x100), orc.coeffs[:-1])]
    f = deflate_forward(p, near_zero)
    orc = deflation_oracle(p, near_zero, x100)
    rel_f = [float(e / abs(o)) for e, o in zip(errors(f, orc, x100), orc.coeffs[:-1])]
    assert max(rel_f) > 1.0
    assert max(rel_b) < max(rel_f)


def test_backward_unit_root_low_powers(x100):
    # (x - 1)^20 deflated backward: error concentrates in the low powers
    p = binomial_power(1, 20)
    res = deflate_backward(p, 1.0)
    orc = deflation_oracle(p, 1.0, x100, order=BACKWARD)
    exact = binomial_power(1, 19, x100)
    assert orc.coeffs == exact.coeffs
    assert res.quotient.coeffs == tuple(float(c) for c in exact.coeffs)
    # with a root perturbed by one ulp the low coefficients absorb the error
    a = math.nextafter(1.0, 2.0)
    res = deflate_backward(p, a)
    rel = [abs(float(c) - float(e)) / abs(float(e)) for c, e in zip(res.quotient.coeffs, exact.coeffs)]
    assert max(rel[:10]) > max(rel[10:])
