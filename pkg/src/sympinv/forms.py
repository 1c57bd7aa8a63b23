"""Split symplectic forms ``sum_i f_i(x_i, y_i) dx_i ^ dy_i`` and their invariants.

At every point such a form is the block-diagonal matrix ``diag(f_1 J0, ..., f_n J0)``,
so congruence invariants reduce to symmetric functions of the values ``f_i``. The
global quantities below (extremes of the pointwise min and max of the ``f_i``) are
invariant under symplectomorphisms of the standard form; inf/sup over all of
space are approximated on a finite grid.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from fractions import Fraction

from . import expr as ex
from . import poly
from .errors import FormError, InternalConsistencyError, VanishingCoefficientError
from .matrix import SkewMatrix, invariants
from .scalar import DEFAULT_EPS


@dataclass(frozen=True)
class SplitForm:
    coefficients: tuple  # f_1..f_n as parsed expressions

    def __post_init__(self):
        object.__setattr__(self, "coefficients", tuple(self.coefficients))
        if not self.coefficients:
            raise FormError("a form needs at least one coefficient")
        for k, f in enumerate(self.coefficients, start=1):
            allowed = {f"x{k}", f"y{k}", "t"}
            stray = ex.free_variables(f) - allowed
            if stray:
                raise FormError(
                    f"f{k} may depend only on x{k}, y{k} and t; found {sorted(stray)}"
                )

    @property
    def n(self) -> int:
        return len(self.coefficients)

    @classmethod
    def from_strings(cls, *sources: str) -> "SplitForm":
        return cls(tuple(ex.parse(s) for s in sources))

    def values(self, point, t=0.0) -> tuple:
        """``(f_1, ..., f_n)`` at ``point = (x1, y1, x2, y2, ...)``."""
        if len(point) != 2 * self.n:
            raise ValueError(f"point must have {2 * self.n} coordinates, got {len(point)}")
        return tuple(self.pair_value(k, point[2 * k], point[2 * k + 1], t) for k in range(self.n))

    def pair_value(self, k: int, x, y, t=0.0) -> float:
        """``f_{k+1}(x, y)`` for 0-based pair index ``k``."""
        bindings = {f"x{k + 1}": x, f"y{k + 1}": y, "t": t}
        return ex.evaluate(self.coefficients[k], bindings)

    def relabeled(self, perm) -> "SplitForm":
        """Move coefficient ``k`` to slot ``perm[k]`` (0-based), renaming its variables."""
        if sorted(perm) != list(range(self.n)):
            raise ValueError(f"not a permutation of {self.n} pairs: {perm}")
        slots = [None] * self.n
        for k, dst in enumerate(perm):
            mapping = {f"x{k + 1}": f"x{dst + 1}", f"y{k + 1}": f"y{dst + 1}"}
            slots[dst] = ex.rename(self.coefficients[k], mapping)
        return SplitForm(tuple(slots))

    def to_source(self) -> str:
        return "".join(f"f{k} = {ex.to_source(f)}\n" for k, f in enumerate(self.coefficients, start=1))


_LINE = re.compile(r"^\s*f([1-9][0-9]*)\s*=(.*)$")


def parse_form(text: str) -> SplitForm:
    """Parse ``f<k> = <expression>`` lines; ``#`` starts a comment."""
    found = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        m = _LINE.match(line)
        if m is None:
            raise FormError(f"line {lineno}: expected 'f<k> = <expression>'")
        k = int(m.group(1))
        if k in found:
            raise FormError(f"line {lineno}: f{k} defined twice")
        try:
            found[k] = ex.parse(m.group(2))
        except ex.ExprSyntaxError as exc:
            raise ex.ExprSyntaxError(f"line {lineno}: {exc}", exc.offset, exc.expected) from exc
    if not found:
        raise FormError("no coefficients defined")
    n = max(found)
    missing = sorted(set(range(1, n + 1)) - set(found))
    if missing:
        raise FormError(f"coefficients {['f%d' % k for k in missing]} are missing")
    return SplitForm(tuple(found[k] for k in range(1, n + 1)))


# -- pointwise ---------------------------------------------------------------


@dataclass(frozen=True)
class PointMatrix:
    matrix: SkewMatrix
    degenerate: bool


def matrix_at(form: SplitForm, point, t=0.0, eps: float = DEFAULT_EPS) -> PointMatrix:
    values = form.values(point, t)
    degenerate = any(abs(v) <= eps for v in values)
    return PointMatrix(SkewMatrix.pairs(*(float(v) for v in values)), degenerate)


def pointwise_multiset(form: SplitForm, point, t=0.0, tol: float = 1e-9) -> tuple:
    """Sorted ``(f_1, ..., f_n)`` at a point, cross-checked against polynomial roots.

    The second route forms the monic ``Pf(sJ + Omega)`` from the exact congruence
    invariants of the pointwise matrix and negates its roots.
    """
    direct = sorted(form.values(point, t))
    exact = SkewMatrix.pairs(*(Fraction(v) for v in direct))
    coeffs = list(invariants(exact)) + [Fraction(1)]
    recovered = sorted(-float(r) for r in poly.real_roots(coeffs))
    for d, r in zip(direct, recovered):
        if abs(d - r) > tol * max(1.0, abs(d)):
            raise InternalConsistencyError(f"root recovery mismatch: {direct} vs {recovered}")
    return tuple(direct)


# -- global invariants -------------------------------------------------------


@dataclass(frozen=True)
class SampleDomain:
    bounds: tuple  # ((lo, hi), ...) one per coordinate
    resolution: tuple  # grid points per coordinate, ends included
    t: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "bounds", tuple((float(lo), float(hi)) for lo, hi in self.bounds))
        object.__setattr__(self, "resolution", tuple(int(r) for r in self.resolution))
        if len(self.bounds) != len(self.resolution) or len(self.bounds) % 2:
            raise ValueError("need one (lo, hi) and one resolution per coordinate, even count")
        for lo, hi in self.bounds:
            if not lo < hi:
                raise ValueError(f"empty interval [{lo}, {hi}]")
        if any(r < 2 for r in self.resolution):
            raise ValueError("resolution must be at least 2 per axis")

    @classmethod
    def box(cls, n: int, lo, hi, resolution: int, t=0.0) -> "SampleDomain":
        return cls(((lo, hi),) * (2 * n), (resolution,) * (2 * n), t)

    def axis(self, k: int) -> list:
        lo, hi = self.bounds[k]
        r = self.resolution[k]
        return [lo + (hi - lo) * i / (r - 1) for i in range(r)]

    def with_t(self, t) -> "SampleDomain":
        return SampleDomain(self.bounds, self.resolution, t)


@dataclass(frozen=True)
class Extremum:
    value: float
    point: tuple


@dataclass(frozen=True)
class GlobalInvariants:
    """Grid-approximate inf/sup of ``m(x) = min_i f_i`` and ``M(x) = max_i f_i``."""

    inf_m: Extremum
    sup_m: Extremum
    inf_M: Extremum
    sup_M: Extremum
    nowhere_vanishing_witnessed: bool
    approximation: str = "grid"

    def values(self) -> dict:
        return {
            "inf_m": self.inf_m.value,
            "sup_m": self.sup_m.value,
            "inf_M": self.inf_M.value,
            "sup_M": self.sup_M.value,
        }

    def to_json(self) -> dict:
        out = {}
        for name in ("inf_m", "sup_m", "inf_M", "sup_M"):
            ext = getattr(self, name)
            out[name] = {"value": ext.value, "point": list(ext.point)}
        out["nowhere_vanishing_witnessed"] = self.nowhere_vanishing_witnessed
        out["approximation"] = self.approximation
        return out


def _pair_tables(form: SplitForm, domain: SampleDomain, eps: float):
    """Per pair: list of ``(value, (x, y))`` over that pair's 2-D grid."""
    if len(domain.bounds) != 2 * form.n:
        raise ValueError(f"domain has {len(domain.bounds)} axes, form needs {2 * form.n}")
    tables = []
    sign_change = False
    for k in range(form.n):
        table = []
        for x, y in itertools.product(domain.axis(2 * k), domain.axis(2 * k + 1)):
            v = form.pair_value(k, x, y, domain.t)
            if abs(v) <= eps or math.isnan(v):
                # any grid point with this pair at (x, y) is a witness
                point = [domain.axis(i)[0] for i in range(2 * form.n)]
                point[2 * k], point[2 * k + 1] = x, y
                raise VanishingCoefficientError(k + 1, point, v)
            table.append((v, (x, y)))
        signs = {v > 0 for v, _ in table}
        sign_change = sign_change or len(signs) > 1
        tables.append(table)
    return tables, not sign_change


def global_invariants(form: SplitForm, domain: SampleDomain, eps: float = DEFAULT_EPS) -> GlobalInvariants:
    """Extremes of ``m`` and ``M`` over the full product grid.

    Each ``f_i`` depends on its own pair only, so over a product grid
    ``inf m = min_i min f_i``, ``sup m = min_i max f_i``, ``inf M = max_i min f_i`` and
    ``sup M = max_i max f_i``; this evaluates ``n * r^2`` points instead of ``r^(2n)``.
    A sign change of some ``f_i`` on the grid (it must vanish in between) clears
    ``nowhere_vanishing_witnessed``.
    """
    tables, witnessed = _pair_tables(form, domain, eps)
    lows = [min(table, key=lambda item: item[0]) for table in tables]
    highs = [max(table, key=lambda item: item[0]) for table in tables]

    def point_from(choices):
        return tuple(c for _, xy in choices for c in xy)

    # sup m: every pair at its max; inf M: every pair at its min
    sup_m = Extremum(min(v for v, _ in highs), point_from(highs))
    inf_big = Extremum(max(v for v, _ in lows), point_from(lows))
    k_low = min(range(form.n), key=lambda k: lows[k][0])
    inf_m_choice = [highs[k] for k in range(form.n)]
    inf_m_choice[k_low] = lows[k_low]
    inf_m = Extremum(lows[k_low][0], point_from(inf_m_choice))
    k_high = max(range(form.n), key=lambda k: highs[k][0])
    sup_big = Extremum(highs[k_high][0], point_from(highs))
    return GlobalInvariants(inf_m, sup_m, inf_big, sup_big, witnessed)


def global_invariants_bruteforce(form: SplitForm, domain: SampleDomain, eps: float = DEFAULT_EPS) -> dict:
    """Reference sweep over every grid point; exponential in ``n``, for checking only."""
    axes = [domain.axis(k) for k in range(2 * form.n)]
    lo_m = hi_m = lo_big = hi_big = None
    for point in itertools.product(*axes):
        vals = form.values(point, domain.t)
        for k, v in enumerate(vals, start=1):
            if abs(v) <= eps:
                raise VanishingCoefficientError(k, point, v)
        m, big = min(vals), max(vals)
        lo_m = m if lo_m is None else min(lo_m, m)
        hi_m = m if hi_m is None else max(hi_m, m)
        lo_big = big if lo_big is None else min(lo_big, big)
        hi_big = big if hi_big is None else max(hi_big, big)
    return {"inf_m": lo_m, "sup_m": hi_m, "inf_M": lo_big, "sup_M": hi_big}


@dataclass(frozen=True)
class GapReport:
    """Differences between the global invariants of two forms.

    A nonzero gap proves the forms are not related by any symplectomorphism of the
    standard form; no gap is inconclusive.
    """

    first: GlobalInvariants
    second: GlobalInvariants
    gaps: dict  # name -> first - second, only entries beyond tolerance

    @property
    def gap_found(self) -> bool:
        return bool(self.gaps)

    def to_json(self) -> dict:
        return {
            "first": self.first.to_json(),
            "second": self.second.to_json(),
            "gaps": dict(self.gaps),
            "gap_found": self.gap_found,
            "conclusion": "not symplectomorphic" if self.gap_found else "inconclusive",
        }


def multiset_match(
    form1: SplitForm,
    form2: SplitForm,
    domain1: SampleDomain,
    domain2: SampleDomain | None = None,
    tol: float = 1e-9,
    eps: float = DEFAULT_EPS,
) -> GapReport:
    """Compare the four global invariants of two forms (``domain2`` defaults to ``domain1``)."""
    if form1.n != form2.n:
        raise FormError(f"forms have different dimensions: n={form1.n} vs n={form2.n}")
    inv1 = global_invariants(form1, domain1, eps)
    inv2 = global_invariants(form2, domain2 or domain1, eps)
    v1, v2 = inv1.values(), inv2.values()
    gaps = {
        name: v1[name] - v2[name]
        for name in v1
        if abs(v1[name] - v2[name]) > tol * max(1.0, abs(v1[name]), abs(v2[name]))
    }
    return GapReport(inv1, inv2, gaps)
