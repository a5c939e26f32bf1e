"""JSON formats for series, polynomials and root sets.

Series and polynomials: ``{"order": n, "coeffs": [b0, ..., bn]}`` where each
coefficient is a decimal string (lossless for extended precision) or a JSON
number.  Root sets: a list of ``{"re": "...", "im": "..."}`` decimal strings.
"""

from __future__ import annotations

import json
from pathlib import Path

from .errors import PsinvError
from .polynomial import Polynomial, RootSet
from .precision import BINARY64, PrecisionContext
from .report import format_value
from .series import PowerSeries


class InputFormatError(PsinvError):
    """A file exists but its contents do not follow the expected format."""


def _scalar(v):
    if isinstance(v, bool) or not isinstance(v, (int, float, str)):
        raise InputFormatError(f"coefficient {v!r} is neither a number nor a decimal string")
    if isinstance(v, str):
        try:
            float(v)
        except ValueError:
            raise InputFormatError(f"coefficient {v!r} is not a decimal string") from None
    return v


def parse_coeffs(doc) -> list:
    """Validate a parsed ``{"order", "coeffs"}`` document; return the raw coefficients."""
    if not isinstance(doc, dict) or "coeffs" not in doc:
        raise InputFormatError('expected an object with a "coeffs" list')
    coeffs = doc["coeffs"]
    if not isinstance(coeffs, list) or not coeffs:
        raise InputFormatError('"coeffs" must be a nonempty list')
    order = doc.get("order", len(coeffs) - 1)
    if not isinstance(order, int) or order != len(coeffs) - 1:
        raise InputFormatError(f'"order" {order!r} does not match {len(coeffs)} coefficients')
    return [_scalar(v) for v in coeffs]


def _read_json(path):
    text = Path(path).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputFormatError(f"{path}: invalid JSON ({exc})") from None


def load_series(path, ctx: PrecisionContext = BINARY64) -> PowerSeries:
    return PowerSeries.from_values(parse_coeffs(_read_json(path)), ctx)


def load_polynomial(path, ctx: PrecisionContext = BINARY64) -> Polynomial:
    return Polynomial.from_values(parse_coeffs(_read_json(path)), ctx)


def coeffs_document(coeffs) -> dict:
    """Binary64 values as JSON numbers (shortest round trip), others as decimal strings."""
    out = [c if isinstance(c, (int, float)) and not isinstance(c, bool) else format_value(c)
           for c in coeffs]
    return {"order": len(out) - 1, "coeffs": out}


def dump_series(obj: PowerSeries | Polynomial, path=None) -> str:
    text = json.dumps(coeffs_document(obj.coeffs)) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text


def rootset_document(roots: RootSet) -> list:
    out = []
    for z in roots.roots:
        re, im = getattr(z, "real", z), getattr(z, "imag", 0)
        out.append({"re": format_value(re), "im": format_value(im)})
    return out


def load_rootset(path, ctx: PrecisionContext = BINARY64) -> RootSet:
    doc = _read_json(path)
    if not isinstance(doc, list) or not doc:
        raise InputFormatError("a root set is a nonempty list of {re, im} objects")
    roots = []
    for item in doc:
        if not isinstance(item, dict) or "re" not in item:
            raise InputFormatError(f"root entry {item!r} lacks a real part")
        re = ctx.convert(_scalar(item["re"]))
        im = ctx.convert(_scalar(item.get("im", "0")))
        if im == 0:
            roots.append(re)
        else:
            roots.append(ctx.mp.mpc(re, im) if ctx.is_extended else complex(re, im))
    return RootSet(tuple(roots))
