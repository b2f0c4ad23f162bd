"""Scalars: exact rationals (``Fraction``) or floats with a declared tolerance.

Every number entering the package goes through :func:`to_scalar`.  Integers
and ``"p/q"`` strings become :class:`fractions.Fraction`; Python floats and
decimal strings such as ``"0.7071"`` stay floats.  Arithmetic between the two
kinds silently degrades to float, which is exactly the "float mode" of the
package: once a float enters, comparisons switch to tolerance ``EPS_GEOM``.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Iterable, Union

Scalar = Union[Fraction, float]

EPS_GEOM = 1e-9

_RATIONAL_RE = re.compile(r"^\s*[+-]?\d+\s*(/\s*[+-]?\d+\s*)?$")


class ScalarParseError(ValueError):
    pass


def to_scalar(value) -> Scalar:
    """Coerce ``value`` into a package scalar.

    >>> to_scalar("3/4")
    Fraction(3, 4)
    >>> to_scalar(2)
    Fraction(2, 1)
    >>> to_scalar("0.5")
    0.5
    """
    if isinstance(value, bool):
        raise ScalarParseError(f"booleans are not scalars: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ScalarParseError(f"non-finite scalar: {value!r}")
        return value
    if isinstance(value, str):
        text = value.strip()
        if _RATIONAL_RE.match(text):
            try:
                return Fraction(text.replace(" ", ""))
            except ZeroDivisionError as exc:
                raise ScalarParseError(f"zero denominator in {value!r}") from exc
        try:
            out = float(text)
        except ValueError as exc:
            raise ScalarParseError(f"cannot parse scalar {value!r}") from exc
        if not math.isfinite(out):
            raise ScalarParseError(f"non-finite scalar: {value!r}")
        return out
    # numpy scalars and similar
    if hasattr(value, "item"):
        return to_scalar(value.item())
    raise ScalarParseError(f"unsupported scalar type {type(value).__name__}")


def is_exact(*values) -> bool:
    """True when every value (recursing into sequences) is rational."""
    for v in values:
        if isinstance(v, (list, tuple)):
            if not is_exact(*v):
                return False
        elif not isinstance(v, (Fraction, int)) or isinstance(v, bool):
            return False
    return True


def format_scalar(x: Scalar) -> str:
    """Serialise a scalar: ``"p/q"`` for rationals, a decimal literal for floats."""
    if isinstance(x, (Fraction, int)):
        x = Fraction(x)
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return repr(float(x))


def le(a: Scalar, b: Scalar) -> bool:
    if is_exact(a, b):
        return a <= b
    return a <= b + EPS_GEOM


def lt(a: Scalar, b: Scalar) -> bool:
    if is_exact(a, b):
        return a < b
    return a < b - EPS_GEOM


def eq(a: Scalar, b: Scalar) -> bool:
    if is_exact(a, b):
        return a == b
    return abs(a - b) <= EPS_GEOM


def is_zero(a: Scalar) -> bool:
    if is_exact(a):
        return a == 0
    return abs(a) <= EPS_GEOM


def floor_s(x: Scalar) -> int:
    """Floor; in float mode values within tolerance of an integer snap to it."""
    if is_exact(x):
        return math.floor(x)
    return math.floor(x + EPS_GEOM)


def ceil_s(x: Scalar) -> int:
    if is_exact(x):
        return math.ceil(x)
    return math.ceil(x - EPS_GEOM)


def mode_of(values: Iterable) -> str:
    return "exact" if is_exact(*list(values)) else "float"
