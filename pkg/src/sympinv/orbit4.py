"""Orbits of Sp(4) acting on 4x4 skew forms.

Entries of a 4x4 form are named ``(a, b, c, d, e, f)`` by position::

    [[ 0,  a,  b,  c],
     [-a,  0,  d,  e],
     [-b, -d,  0,  f],
     [-c, -e, -f,  0]]

An orbit is fixed by the Pfaffian ``p = af - be + cd`` and sum ``q = a + f``, except
that for ``p > 0`` the two matrices ``+-sqrt(p) J`` are singleton orbits of their own.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import (
    ConstraintViolationError,
    DegenerateFormError,
    DifferentOrbitError,
    DimensionError,
    GeometryDomainError,
    InternalConsistencyError,
    ScalarMultipleError,
)
from .matrix import SkewMatrix, pfaffian, sum_function
from .scalar import DEFAULT_EPS, Mode, close, coerce_all, format_scalar, is_zero, sqrt_scalar, to_mode
from .symplectic import (
    SymplecticBasis,
    SymplecticMatrix,
    act,
    equivalence_from_bases,
    forms_equal,
)


class Family(str, enum.Enum):
    J_PLUS = "JPlus"
    J_MINUS = "JMinus"
    A_PLUS = "APlus"
    A_MINUS = "AMinus"


@dataclass(frozen=True)
class OrbitLabel:
    family: Family
    p: object
    q: object = None

    def __post_init__(self):
        if self.family in (Family.J_PLUS, Family.J_MINUS, Family.A_PLUS) and not self.p > 0:
            raise ValueError(f"{self.family.value} requires p > 0, got {self.p}")
        if self.family is Family.A_MINUS and not self.p < 0:
            raise ValueError(f"AMinus requires p < 0, got {self.p}")

    def matches(self, other: "OrbitLabel", eps: float = DEFAULT_EPS) -> bool:
        if self.family is not other.family or not close(self.p, other.p, eps):
            return False
        if self.q is None or other.q is None:
            return self.q is None and other.q is None
        return close(self.q, other.q, eps)

    def to_json(self) -> dict:
        out = {"family": self.family.value, "p": format_scalar(self.p)}
        if self.q is not None:
            out["q"] = format_scalar(self.q)
        return out

    @classmethod
    def from_json(cls, data) -> "OrbitLabel":
        from .scalar import parse_scalar

        q = data.get("q")
        return cls(Family(data["family"]), parse_scalar(data["p"]), None if q is None else parse_scalar(q))


def _require_4x4(a: SkewMatrix):
    if a.n != 2:
        raise DimensionError(f"orbit classification is implemented for 4x4 forms only, got n={a.n}")


def _scalar_multiple_of_j(a: SkewMatrix, eps: float):
    """Return ``c`` when ``a == c J``, else ``None``."""
    av, b, c, d, e, f = a.abcdef()
    if all(is_zero(x, eps) for x in (b, c, d, e)) and close(av, f, eps):
        return av
    return None


def classify(a: SkewMatrix, eps: float = DEFAULT_EPS) -> OrbitLabel:
    _require_4x4(a)
    p = pfaffian(a)
    if is_zero(p, eps):
        raise DegenerateFormError("Pfaffian is zero; the form is degenerate")
    c = _scalar_multiple_of_j(a, eps)
    if c is not None:
        return OrbitLabel(Family.J_PLUS if c > 0 else Family.J_MINUS, c * c)
    q = sum_function(a)
    return OrbitLabel(Family.A_PLUS if p > 0 else Family.A_MINUS, p, q)


def same_orbit(a: SkewMatrix, b: SkewMatrix, eps: float = DEFAULT_EPS) -> bool:
    return classify(a, eps).matches(classify(b, eps), eps)


def orbit_difference(la: OrbitLabel, lb: OrbitLabel, eps: float = DEFAULT_EPS):
    """Human-readable reason two labels differ, or ``None``."""
    if la.family is not lb.family:
        return f"orbit family {la.family.value} ≠ {lb.family.value}"
    if not close(la.p, lb.p, eps):
        return f"Pfaffian {la.p} ≠ {lb.p}"
    if la.q is not None and not close(la.q, lb.q, eps):
        return f"sum function {la.q} ≠ {lb.q}"
    return None


# -- the explicit reduction matrices -----------------------------------------


def pair_swap_matrix() -> SymplecticMatrix:
    """Exchanges the two coordinate pairs; used when ``b = c = 0`` and ``d != 0``."""
    return SymplecticMatrix(((0, 0, 1, 0), (0, 0, 0, 1), (1, 0, 0, 0), (0, 1, 0, 0)))


def case4_matrix(a, e) -> SymplecticMatrix:
    """For ``b = c = d = 0``, ``e != 0``: moves ``a`` into the (1,3) slot."""
    return SymplecticMatrix(
        (
            (0, e / a, 0, 0),
            (-a / e, 0, 0, a / e),
            (0, 0, 0, 1),
            (0, 1, -1, 0),
        )
    )


def case5_matrix(t_squared) -> SymplecticMatrix:
    """For ``diag(a J0, (p/a) J0)`` with ``p > 0``, ``t = a / sqrt(p)`` and ``t^2 != 1``.

    The matrix depends on ``t`` only through ``t^2 = a^2 / p``, which is rational
    for rational input, so no square root is ever taken.
    """
    t2 = t_squared
    u = 1 / (1 - t2)
    return SymplecticMatrix(
        (
            (1, 0, 0, 1),
            (0, u, t2 * u, 0),
            (0, u, u, 0),
            (t2, 1, 1, 1),
        )
    )


def negative_case5_matrix(t_squared) -> SymplecticMatrix:
    """For ``diag(a J0, (p/a) J0)`` with ``p < 0`` and ``t^2 = a^2 / -p``."""
    t2 = t_squared
    s = t2 + 1
    return SymplecticMatrix(
        (
            (1, 0, 0, s),
            (0, 1 / s, -t2 / (s * s), 0),
            (0, 1, 1 / s, 0),
            (-t2 / s, 1, 1 / s, 1),
        )
    )


def quarter_turn_matrix() -> SymplecticMatrix:
    """Rotates the second pair: ``e3 -> e4``, ``e4 -> -e3``; moves the (1,4) entry to (1,3)."""
    return SymplecticMatrix(((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 0, -1), (0, 0, 1, 0)))


def case1_basis(a: SkewMatrix, eps: float = DEFAULT_EPS) -> SymplecticBasis:
    """Explicit symplectic basis for a form with ``b != 0``."""
    av, b, c, d, e, f = a.abcdef()
    p = av * f - b * e + c * d
    zero, one = to_mode(0, a.mode), to_mode(1, a.mode)
    vectors = (
        (one, zero, zero, zero),
        (zero, zero, 1 / b, zero),
        (-d / b, one, -av / b, zero),
        (-f / p, zero, c / p, -b / p),
    )
    return SymplecticBasis(a, vectors, eps)


def case2_basis(a: SkewMatrix, eps: float = DEFAULT_EPS) -> SymplecticBasis:
    """Explicit symplectic basis for a form with ``b == 0``, ``c != 0``."""
    av, b, c, d, e, f = a.abcdef()
    p = av * f + c * d
    zero, one = to_mode(0, a.mode), to_mode(1, a.mode)
    vectors = (
        (one, zero, zero, zero),
        (zero, zero, zero, 1 / c),
        (-e / c, one, zero, -av / c),
        (-f / p, zero, c / p, -b / p),
    )
    return SymplecticBasis(a, vectors, eps)


@dataclass(frozen=True)
class _Reduction:
    q: SymplecticMatrix  # act(q, source) == reduced
    reduced: SkewMatrix
    basis_case: int  # 1: b != 0, 2: b == 0 and c != 0


def _reduce(a: SkewMatrix, eps: float) -> _Reduction:
    _require_4x4(a)
    p = pfaffian(a)
    if is_zero(p, eps):
        raise DegenerateFormError("Pfaffian is zero; the form is degenerate")
    if _scalar_multiple_of_j(a, eps) is not None:
        raise ScalarMultipleError("A is a scalar multiple of J; its orbit is a single point")
    av, b, c, d, e, f = a.abcdef()
    ident = SymplecticMatrix.identity(2, a.mode)
    if not is_zero(b, eps):
        return _Reduction(ident, a, 1)
    if not is_zero(c, eps):
        return _Reduction(ident, a, 2)
    if not is_zero(d, eps):
        q = pair_swap_matrix().to_mode(a.mode)
        return _Reduction(q, act(q, a), 2)
    if not is_zero(e, eps):
        q = case4_matrix(av, e)
        return _Reduction(q, act(q, a), 1)
    t2 = av * av / abs(p)
    q = case5_matrix(t2) if p > 0 else negative_case5_matrix(t2)
    return _Reduction(q.to_mode(a.mode), act(q.to_mode(a.mode), a), 1)


def reduce_to_case1(a: SkewMatrix, eps: float = DEFAULT_EPS):
    """Return ``(Q, A')`` with ``A' = act(Q, A)`` and a nonzero (1,3)-entry.

    Cases follow the first nonzero of ``b, c, d, e``; when all four vanish the
    explicit matrices for the diagonal case are used. Every step is rational.
    """
    red = _reduce(a, eps)
    q, reduced = red.q, red.reduced
    if red.basis_case == 2:
        turn = quarter_turn_matrix().to_mode(q.mode)
        q = q @ turn
        reduced = act(turn, reduced)
    if is_zero(reduced.abcdef()[1], eps):  # pragma: no cover - guarded by the case analysis
        raise InternalConsistencyError("reduction did not produce a nonzero (1,3)-entry")
    return q, reduced


def _basis_for(red: _Reduction, eps: float) -> SymplecticBasis:
    return case1_basis(red.reduced, eps) if red.basis_case == 1 else case2_basis(red.reduced, eps)


@dataclass(frozen=True)
class WitnessCertificate:
    """``witness`` carries ``target`` onto ``source``: ``act(witness, target) == source``."""

    source: SkewMatrix
    target: SkewMatrix
    witness: SymplecticMatrix
    verified: bool
    mode: Mode

    def to_json(self) -> dict:
        return {
            "source": self.source.to_json(),
            "target": self.target.to_json(),
            "witness": [[format_scalar(v) for v in r] for r in self.witness.rows],
            "verified": self.verified,
            "mode": self.mode.value,
        }

    @classmethod
    def from_json(cls, data, eps: float = DEFAULT_EPS) -> "WitnessCertificate":
        from .scalar import parse_scalar

        mode = Mode(data["mode"])
        source = SkewMatrix.from_json(data["source"])
        target = SkewMatrix.from_json(data["target"])
        rows = tuple(tuple(parse_scalar(v) for v in r) for r in data["witness"])
        p = SymplecticMatrix(rows, eps)
        verified = forms_equal(act(p, target), source, eps)
        return cls(source, target, p, verified, mode)


def witness(a: SkewMatrix, b: SkewMatrix, eps: float = DEFAULT_EPS) -> WitnessCertificate:
    """Find ``P`` in Sp(4) with ``act(P, B) == A`` for ``A``, ``B`` in one orbit.

    Both forms are reduced to a standard position, given explicit symplectic bases
    with identical basis-values, and the change-of-basis map between them is
    composed with the reductions. The result is checked before returning.
    """
    la, lb = classify(a, eps), classify(b, eps)
    reason = orbit_difference(la, lb, eps)
    if reason is not None:
        raise DifferentOrbitError(f"forms lie in different orbits: {reason}")
    mode = Mode.FLOAT if Mode.FLOAT in (a.mode, b.mode) else Mode.RATIONAL
    src, tgt = a.to_mode(mode), b.to_mode(mode)
    if la.family in (Family.J_PLUS, Family.J_MINUS):
        p = SymplecticMatrix.identity(2, mode)
    else:
        ra, rb = _reduce(src, eps), _reduce(tgt, eps)
        basis_a = _basis_for(ra, eps)
        basis_b = _basis_for(rb, eps)
        # act(r, B') = A'  with  A' = act(qa, A),  B' = act(qb, B)
        r = equivalence_from_bases(basis_a, basis_b, eps)
        p = rb.q @ r @ ra.q.inverse()
    if not forms_equal(act(p, tgt), src, eps):
        raise InternalConsistencyError("constructed witness failed verification")
    return WitnessCertificate(a, b, p, True, mode)


# -- orbit geometry ----------------------------------------------------------


class Shape(str, enum.Enum):
    SPHERE_TIMES_PLANE = "SphereTimesPlane"
    PUNCTURED_PLANE_TIMES_PLANE = "PuncturedPlaneTimesPlane"
    BOUNDARY = "Boundary"


@dataclass(frozen=True)
class OrbitGeometry:
    p: object
    q: object
    delta: object
    shape: Shape


def orbit_geometry(p, q, eps: float = DEFAULT_EPS) -> OrbitGeometry:
    """Discriminant ``q^2/4 - p`` and the topological type it selects."""
    (p, q), _ = coerce_all((p, q))
    if is_zero(p, eps):
        raise DegenerateFormError("p must be nonzero")
    delta = q * q / 4 - p
    if is_zero(delta, eps):
        shape = Shape.BOUNDARY
    elif delta > 0:
        shape = Shape.SPHERE_TIMES_PLANE
    else:
        shape = Shape.PUNCTURED_PLANE_TIMES_PLANE
    return OrbitGeometry(p, q, delta, shape)


def orbit_map_positive_delta(x, y, z, w, delta, eps: float = DEFAULT_EPS):
    """Map the closed disk times the plane onto ``{be - cd <= delta}``, ``delta > 0``."""
    x, y, z, w, delta = (float(v) for v in (x, y, z, w, delta))
    if not delta > 0:
        raise GeometryDomainError(f"delta must be positive, got {delta}")
    if x * x + y * y > 1 + eps:
        raise GeometryDomainError(f"(x, y) = ({x}, {y}) lies outside the closed unit disk")
    r = math.sqrt(z * z + w * w + delta)
    return (x * r + z, w + y * r, w - y * r, x * r - z)


def orbit_map_negative_delta(x, y, z, w, delta, eps: float = DEFAULT_EPS):
    """Map the plane times the punctured disk onto ``{be - cd <= delta}``, ``delta < 0``."""
    x, y, z, w, delta = (float(v) for v in (x, y, z, w, delta))
    if not delta < 0:
        raise GeometryDomainError(f"delta must be negative, got {delta}")
    rho = z * z + w * w
    if rho == 0:
        raise GeometryDomainError("(z, w) must not be the origin")
    if rho > 1 + eps:
        raise GeometryDomainError(f"(z, w) = ({z}, {w}) lies outside the closed unit disk")
    s = math.sqrt(x * x + y * y - delta) / rho
    return (x + z * s, w * s + y, w * s - y, x - z * s)


def lift_to_orbit(b, c, d, e, p, q, sheet: str = "upper", eps: float = DEFAULT_EPS) -> SkewMatrix:
    """The form with off-pair entries ``(b, c, d, e)``, Pfaffian ``p`` and sum ``q``.

    ``sheet="upper"`` picks ``a >= f``, ``"lower"`` picks ``a <= f``.
    """
    if sheet not in ("upper", "lower"):
        raise ValueError(f"sheet must be 'upper' or 'lower', got {sheet!r}")
    (b, c, d, e, p, q), _ = coerce_all((b, c, d, e, p, q))
    delta = q * q / 4 - p
    radicand = delta - (b * e - c * d)
    if radicand < 0:
        if is_zero(radicand, eps):
            radicand = 0 * radicand
        else:
            raise ConstraintViolationError(f"be - cd exceeds delta = {delta} by {-radicand}")
    r = sqrt_scalar(radicand)
    if isinstance(r, float):
        b, c, d, e, q = (float(v) for v in (b, c, d, e, q))
    half = q / 2
    a, f = (half + r, half - r) if sheet == "upper" else (half - r, half + r)
    return SkewMatrix.from_abcdef(a, b, c, d, e, f)
