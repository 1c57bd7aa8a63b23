"""Scalars: exact ``Fraction`` or binary64 ``float``.

A computation runs in one mode. Rational mode never uses tolerances; float
mode treats ``|x| <= eps`` as zero.
"""

from __future__ import annotations

import enum
import math
from fractions import Fraction
from numbers import Rational

DEFAULT_EPS = 1e-9


class Mode(str, enum.Enum):
    RATIONAL = "rational"
    FLOAT = "float"


def mode_of(values) -> Mode:
    for v in values:
        if isinstance(v, float):
            return Mode.FLOAT
    return Mode.RATIONAL


def to_mode(x, mode: Mode):
    if mode is Mode.FLOAT:
        return float(x)
    if isinstance(x, float):
        # exact binary value of the float
        return Fraction(x)
    return Fraction(x)


def coerce_all(values):
    """Convert ``values`` to a single mode, float if any entry is a float."""
    values = list(values)
    mode = mode_of(values)
    return [to_mode(v, mode) for v in values], mode


def parse_scalar(obj, mode: Mode | None = None):
    """Parse a JSON scalar: ``"p/q"`` strings are rational, numbers are floats.

    ``mode`` forces the result into one mode; JSON integers are exact either way
    before conversion.
    """
    if isinstance(obj, bool):
        raise ValueError(f"not a scalar: {obj!r}")
    if isinstance(obj, str):
        try:
            value = Fraction(obj.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"bad rational literal {obj!r}") from exc
    elif isinstance(obj, int):
        value = Fraction(obj)
    elif isinstance(obj, float):
        if not math.isfinite(obj):
            raise ValueError(f"non-finite scalar {obj!r}")
        value = obj
    else:
        raise ValueError(f"not a scalar: {obj!r}")
    if mode is Mode.RATIONAL and isinstance(value, float):
        # decimal reading, so 0.1 -> 1/10 rather than its binary expansion
        return Fraction(repr(value))
    if mode is not None:
        return to_mode(value, mode)
    return value


def format_scalar(x):
    """JSON form: rationals as ``"p/q"`` strings, floats as numbers."""
    if isinstance(x, float):
        return x
    if isinstance(x, Rational):
        return str(Fraction(x))
    return float(x)


def is_zero(x, eps: float = DEFAULT_EPS) -> bool:
    if isinstance(x, float):
        return abs(x) <= eps
    return x == 0


def sign(x, eps: float = DEFAULT_EPS) -> int:
    if is_zero(x, eps):
        return 0
    return 1 if x > 0 else -1


def close(x, y, eps: float = DEFAULT_EPS) -> bool:
    """Equality: exact for rationals, ``eps``-relative-or-absolute for floats."""
    if isinstance(x, float) or isinstance(y, float):
        return math.isclose(float(x), float(y), rel_tol=eps, abs_tol=eps)
    return x == y


def _isqrt_exact(n: int):
    r = math.isqrt(n)
    return r if r * r == n else None


def sqrt_scalar(x):
    """Square root, exact when ``x`` is the square of a rational."""
    if x < 0:
        raise ValueError(f"square root of negative scalar {x}")
    if isinstance(x, float):
        return math.sqrt(x)
    x = Fraction(x)
    num = _isqrt_exact(x.numerator)
    den = _isqrt_exact(x.denominator)
    if num is not None and den is not None:
        return Fraction(num, den)
    return math.sqrt(x)
