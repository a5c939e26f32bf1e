"""Working-precision contexts, unit roundoff and the gamma_n coefficients.

Two arithmetics are supported: IEEE binary64 (Python floats) and an
extended binary arithmetic backed by :mod:`mpmath` with at least
``ceil(digits * log2(10))`` bits of mantissa.  Every extended context owns a
private :class:`mpmath.ctx_mp.MPContext`, so contexts of different precision
never interfere through mpmath's global state.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational

from mpmath import libmp
from mpmath.ctx_mp import MPContext

from .errors import GammaUndefinedError, PreconditionError

MIN_EXTENDED_DIGITS = 100
DEFAULT_ORACLE_DIGITS_ENV = "PSINV_ORACLE_DIGITS"


@lru_cache(maxsize=None)
def _mp_context(prec: int) -> MPContext:
    ctx = MPContext()
    ctx.prec = prec
    return ctx


def digits_to_bits(digits: int) -> int:
    return math.ceil(digits * math.log2(10))


@dataclass(frozen=True)
class PrecisionContext:
    """Immutable description of a working precision.

    Parameters
    ----------
    mode : {"binary64", "extended"}
    digits : int, optional
        Minimum number of decimal digits for extended mode (>= 100).
    """

    mode: str = "binary64"
    digits: int | None = None

    def __post_init__(self):
        if self.mode == "binary64":
            if self.digits is not None:
                raise PreconditionError("binary64 mode takes no digit count")
        elif self.mode == "extended":
            if self.digits is None or self.digits < MIN_EXTENDED_DIGITS:
                raise PreconditionError(
                    f"extended precision needs at least {MIN_EXTENDED_DIGITS} digits, "
                    f"got {self.digits}")
        else:
            raise PreconditionError(f"unknown precision mode {self.mode!r}")

    @classmethod
    def binary64(cls) -> "PrecisionContext":
        return cls("binary64")

    @classmethod
    def extended(cls, digits: int = MIN_EXTENDED_DIGITS) -> "PrecisionContext":
        return cls("extended", int(digits))

    @property
    def is_extended(self) -> bool:
        return self.mode == "extended"

    @property
    def prec(self) -> int:
        """Mantissa length in bits."""
        if self.mode == "binary64":
            return 53
        return digits_to_bits(self.digits)

    @property
    def mp(self) -> MPContext:
        """The mpmath context holding this precision (extended mode only)."""
        if not self.is_extended:
            raise PreconditionError("binary64 context has no mpmath backend")
        return _mp_context(self.prec)

    @property
    def u(self):
        """Unit roundoff, 2**-prec, as a value of this context."""
        if self.is_extended:
            return self.mp.ldexp(self.mp.one, -self.prec)
        return 2.0 ** -53

    @property
    def zero(self):
        return self.mp.zero if self.is_extended else 0.0

    @property
    def one(self):
        return self.mp.one if self.is_extended else 1.0

    def convert(self, x):
        """Round a real scalar (int, float, str, Fraction, mpf) into this context."""
        if self.is_extended:
            if isinstance(x, Rational) and not isinstance(x, int):
                v = libmp.from_rational(int(x.numerator), int(x.denominator),
                                        self.prec, libmp.round_nearest)
                return self.mp.make_mpf(v)
            return self.mp.mpf(x)
        if isinstance(x, str):
            return float(x)
        return float(x)

    def convert_complex(self, z):
        """Round a complex scalar into this context (mpc or complex)."""
        if isinstance(z, str):
            z = complex(z) if not self.is_extended else self.mp.mpc(z)
        re, im = _re_im(z)
        if self.is_extended:
            return self.mp.mpc(self.convert(re), self.convert(im))
        return complex(self.convert(re), self.convert(im))

    def describe(self) -> dict:
        return {"mode": self.mode, "digits": self.digits, "bits": self.prec}


BINARY64 = PrecisionContext.binary64()


def extended(digits: int = MIN_EXTENDED_DIGITS) -> PrecisionContext:
    return PrecisionContext.extended(digits)


def default_oracle_digits() -> int:
    """Oracle digit count, overridable by the PSINV_ORACLE_DIGITS variable."""
    value = os.environ.get(DEFAULT_ORACLE_DIGITS_ENV)
    if not value:
        return MIN_EXTENDED_DIGITS
    return int(value)


def _re_im(z):
    re = getattr(z, "real", z)
    im = getattr(z, "imag", 0)
    return re, im


def unit_roundoff(ctx: PrecisionContext):
    return ctx.u


def gamma_fraction(n: int, prec: int) -> Fraction:
    """Exact value of n*u/(1-n*u) for u = 2**-prec."""
    if n < 0:
        raise PreconditionError("gamma index must be nonnegative")
    denom = (1 << prec) - n
    if denom <= 0:
        raise GammaUndefinedError(f"gamma undefined: n*u >= 1 for n={n}, u=2^-{prec}")
    return Fraction(n, denom)


def gamma(n: int, ctx: PrecisionContext = BINARY64):
    """gamma_n = n*u/(1 - n*u) for the unit roundoff of ``ctx``.

    The result is never smaller than the exact rational value: binary64
    contexts return the smallest float above it, extended contexts round the
    exact rational toward +inf at the context precision.
    """
    g = gamma_fraction(n, ctx.prec)
    if ctx.is_extended:
        return ceil_mpf(ctx, g)
    return upper_float(g)


def ceil_mpf(ctx: PrecisionContext, x: Fraction):
    """Round an exact rational upward into an extended context."""
    v = libmp.from_rational(int(x.numerator), int(x.denominator), ctx.prec,
                            libmp.round_ceiling)
    return ctx.mp.make_mpf(v)


def upper_float(x) -> float:
    """Smallest binary64 number >= x (x an int, Fraction, float or mpf)."""
    if isinstance(x, float):
        return x
    if isinstance(x, Rational):
        f = float(x)
        if Fraction(f) < x:
            f = math.nextafter(f, math.inf)
        return f
    mpf_val = getattr(x, "_mpf_", None)
    if mpf_val is None:
        raise TypeError(f"cannot round {type(x).__name__} upward")
    f = libmp.to_float(mpf_val, rnd=libmp.round_ceiling)
    return f
