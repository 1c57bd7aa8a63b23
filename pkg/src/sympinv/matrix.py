"""Skew-symmetric matrices, Pfaffians and the congruence invariants s_k.

``SkewMatrix`` stores only the strict upper triangle, so skew-symmetry holds by
construction. Entries are all ``Fraction`` or all ``float``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from . import linalg, poly
from .errors import DimensionError, InternalConsistencyError
from .scalar import DEFAULT_EPS, Mode, coerce_all, format_scalar, is_zero, parse_scalar, to_mode

MAX_ORACLE_N = 6


def _upper_index(i: int, j: int, size: int) -> int:
    # row-major position of (i, j), i < j, in the strict upper triangle
    return i * size - i * (i + 1) // 2 + (j - i - 1)


@dataclass(frozen=True)
class SkewMatrix:
    n: int
    upper: tuple

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise DimensionError(f"half-dimension must be a positive integer, got {self.n!r}")
        expected = self.n * (2 * self.n - 1)
        if len(self.upper) != expected:
            raise DimensionError(
                f"n={self.n} needs {expected} upper-triangle entries, got {len(self.upper)}"
            )
        values, _ = coerce_all(self.upper)
        object.__setattr__(self, "upper", tuple(values))

    @property
    def size(self) -> int:
        return 2 * self.n

    @property
    def mode(self) -> Mode:
        return Mode.FLOAT if isinstance(self.upper[0], float) else Mode.RATIONAL

    @classmethod
    def from_rows(cls, rows, eps: float = DEFAULT_EPS) -> "SkewMatrix":
        rows = [list(r) for r in rows]
        size = len(rows)
        if size == 0 or size % 2 or any(len(r) != size for r in rows):
            raise DimensionError(f"expected a square even-dimensional matrix, got {size} rows")
        for i in range(size):
            for j in range(i, size):
                if not is_zero(rows[i][j] + rows[j][i], eps):
                    raise ValueError(f"matrix is not skew-symmetric at ({i}, {j})")
        upper = [rows[i][j] for i in range(size) for j in range(i + 1, size)]
        return cls(size // 2, tuple(upper))

    @classmethod
    def from_abcdef(cls, a, b, c, d, e, f) -> "SkewMatrix":
        """The 4x4 matrix with first row (0, a, b, c), second (., 0, d, e), third (., ., 0, f)."""
        return cls(2, (a, b, c, d, e, f))

    @classmethod
    def block_diag(cls, *blocks: "SkewMatrix") -> "SkewMatrix":
        size = sum(b.size for b in blocks)
        rows = [[0] * size for _ in range(size)]
        offset = 0
        for b in blocks:
            for i, row in enumerate(b.rows):
                for j, v in enumerate(row):
                    rows[offset + i][offset + j] = v
            offset += b.size
        return cls.from_rows(rows)

    @classmethod
    def pairs(cls, *coefficients) -> "SkewMatrix":
        """Block-diagonal ``diag(c1*J0, c2*J0, ...)``."""
        n = len(coefficients)
        upper = [0] * (n * (2 * n - 1))
        for k, c in enumerate(coefficients):
            upper[_upper_index(2 * k, 2 * k + 1, 2 * n)] = c
        return cls(n, tuple(upper))

    @cached_property
    def rows(self) -> tuple:
        size = self.size
        zero = to_mode(0, self.mode)
        rows = [[zero] * size for _ in range(size)]
        it = iter(self.upper)
        for i in range(size):
            for j in range(i + 1, size):
                v = next(it)
                rows[i][j] = v
                rows[j][i] = -v
        return tuple(tuple(r) for r in rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def abcdef(self) -> tuple:
        if self.n != 2:
            raise DimensionError("abcdef() is defined for 4x4 matrices only")
        return self.upper

    def to_mode(self, mode: Mode) -> "SkewMatrix":
        if mode is self.mode:
            return self
        return SkewMatrix(self.n, tuple(to_mode(v, mode) for v in self.upper))

    def scaled(self, c) -> "SkewMatrix":
        return SkewMatrix(self.n, tuple(c * v for v in self.upper))

    def __add__(self, other: "SkewMatrix") -> "SkewMatrix":
        if not isinstance(other, SkewMatrix):
            return NotImplemented
        if other.n != self.n:
            raise DimensionError(f"cannot add n={self.n} and n={other.n}")
        return SkewMatrix(self.n, tuple(x + y for x, y in zip(self.upper, other.upper)))

    def __neg__(self) -> "SkewMatrix":
        return self.scaled(-1)

    def without_pairs(self, removed) -> "SkewMatrix":
        """Delete rows/columns ``2i, 2i+1`` (0-based pair index ``i``) for each removed pair."""
        removed = set(removed)
        keep = [k for i in range(self.n) if i not in removed for k in (2 * i, 2 * i + 1)]
        if not keep:
            raise DimensionError("cannot remove every pair")
        return SkewMatrix.from_rows([[self.rows[i][j] for j in keep] for i in keep])

    def to_json(self) -> dict:
        return {"n": self.n, "upper": [format_scalar(v) for v in self.upper]}

    @classmethod
    def from_json(cls, data, mode: Mode | None = None) -> "SkewMatrix":
        """Parse ``{"n": k, "upper": [...]}`` or ``{"n": k, "standard": true}``."""
        if not isinstance(data, dict) or "n" in data and not isinstance(data["n"], int):
            raise ValueError("matrix JSON must be an object with integer 'n'")
        if "n" not in data:
            raise ValueError("matrix JSON is missing 'n'")
        n = data["n"]
        if data.get("standard"):
            j = standard_j(n)
            return j.to_mode(mode) if mode is not None else j
        if "upper" not in data or not isinstance(data["upper"], list):
            raise ValueError("matrix JSON needs an 'upper' list or 'standard': true")
        values = [parse_scalar(v, mode) for v in data["upper"]]
        return cls(n, tuple(values))


def standard_j(n: int) -> SkewMatrix:
    """The standard form: ``n`` copies of ``J0 = [[0, 1], [-1, 0]]`` on the diagonal."""
    return SkewMatrix.pairs(*([1] * n))


def congruence(m, a: SkewMatrix) -> SkewMatrix:
    """``m^T a m`` for any square ``m`` (need not be symplectic)."""
    mode = Mode.FLOAT if a.mode is Mode.FLOAT or linalg.matrix_mode(m) is Mode.FLOAT else Mode.RATIONAL
    m = linalg.as_matrix(m, mode)
    a = a.to_mode(mode)
    if len(m) != a.size:
        raise DimensionError(f"cannot act with {len(m)}x{len(m)} on {a.size}x{a.size}")
    prod = linalg.matmul(linalg.transpose(m), linalg.matmul(a.rows, m))
    size = a.size
    return SkewMatrix(a.n, tuple(prod[i][j] for i in range(size) for j in range(i + 1, size)))


# -- Pfaffians ---------------------------------------------------------------


def _perfect_matchings(items):
    if not items:
        yield ()
        return
    first, rest = items[0], items[1:]
    for k, partner in enumerate(rest):
        for m in _perfect_matchings(rest[:k] + rest[k + 1:]):
            yield ((first, partner),) + m


def _permutation_sign(perm) -> int:
    inversions = sum(1 for i in range(len(perm)) for j in range(i + 1, len(perm)) if perm[i] > perm[j])
    return -1 if inversions % 2 else 1


def pfaffian_oracle(a: SkewMatrix):
    """Sum over perfect matchings ``{(i1, j1), ...}`` of ``sgn * prod a[i, j]``.

    Each matching is the canonical permutation representative with ``i_k < j_k`` and
    ``i_1 < i_2 < ...``; its sign is computed from the inversion count. Exponential
    cost, so limited to ``n <= 6``.
    """
    if a.n > MAX_ORACLE_N:
        raise DimensionError(f"pfaffian_oracle supports n <= {MAX_ORACLE_N}, got n={a.n}")
    rows = a.rows
    total = to_mode(0, a.mode)
    for matching in _perfect_matchings(tuple(range(a.size))):
        perm = [k for pair in matching for k in pair]
        term = _permutation_sign(perm)
        for i, j in matching:
            term *= rows[i][j]
            if not term:
                break
        total += term
    return total


def pfaffian(a: SkewMatrix):
    """Pfaffian by skew congruence elimination, O(n^3).

    Each step moves a nonzero entry of row ``k`` into the ``(k, k+1)`` pivot by a
    simultaneous row/column swap (flipping the sign), then clears the rest of rows
    ``k`` and ``k+1`` with determinant-one congruences. Float mode pivots on the
    largest entry.
    """
    m = [list(r) for r in a.rows]
    size = a.size
    floating = a.mode is Mode.FLOAT
    result = to_mode(1, a.mode)
    for k in range(0, size - 1, 2):
        if floating:
            piv = max(range(k + 1, size), key=lambda j: abs(m[k][j]))
            if m[k][piv] == 0:
                return 0.0
        else:
            piv = next((j for j in range(k + 1, size) if m[k][j] != 0), None)
            if piv is None:
                return Fraction(0)
        if piv != k + 1:
            _swap(m, k + 1, piv)
            result = -result
        p = m[k][k + 1]
        result *= p
        for i in range(k + 2, size):
            # col_i -= (m[k][i]/p) col_{k+1}, col_i += (m[k+1][i]/p) col_k, mirrored on rows
            alpha = m[k][i] / p
            beta = m[k + 1][i] / p
            if not alpha and not beta:
                continue
            for r in range(k + 2, size):
                m[r][i] -= alpha * m[r][k + 1] - beta * m[r][k]
            for c in range(k + 2, size):
                m[i][c] = -m[c][i]
            m[k][i] = m[i][k] = m[k + 1][i] = m[i][k + 1] = 0 * p
    return result


def _swap(m, i, j):
    m[i], m[j] = m[j], m[i]
    for row in m:
        row[i], row[j] = row[j], row[i]


def sum_function(a: SkewMatrix):
    """Sum of the pair entries ``a[2i-1, 2i]`` (1-based)."""
    return sum((a.rows[2 * i][2 * i + 1] for i in range(a.n)), to_mode(0, a.mode))


def s_k_direct(a: SkewMatrix, k: int):
    """Sum of Pfaffians of ``a`` with ``k`` coordinate pairs deleted, over all choices."""
    if not 0 <= k <= a.n - 1:
        raise IndexError(f"k must lie in [0, {a.n - 1}], got {k}")
    total = to_mode(0, a.mode)
    for removed in itertools.combinations(range(a.n), k):
        sub = a.without_pairs(removed) if removed else a
        total += pfaffian_oracle(sub)
    return total


@dataclass(frozen=True)
class InvariantVector:
    """``[s_0, ..., s_{n-1}]``: low coefficients of the monic ``Pf(tJ + A)``."""

    n: int
    values: tuple

    def __iter__(self):
        return iter(self.values)

    def __len__(self):
        return len(self.values)

    def __getitem__(self, k):
        return self.values[k]

    @property
    def pfaffian(self):
        return self.values[0]

    @property
    def sum(self):
        return self.values[-1]

    def to_json(self) -> list:
        return [format_scalar(v) for v in self.values]


def sigma_k(a: SkewMatrix, eps: float = DEFAULT_EPS) -> InvariantVector:
    """Coefficients of ``Pf(tJ + A)`` from its values at ``t = 0, 1, ..., n``."""
    mode = a.mode
    j = standard_j(a.n).to_mode(mode)
    nodes = [to_mode(t, mode) for t in range(a.n + 1)]
    values = [pfaffian(j.scaled(t) + a) for t in nodes]
    coeffs = poly.interpolate(nodes, values)
    lead = coeffs[-1]
    if mode is Mode.RATIONAL:
        if lead != 1:
            raise InternalConsistencyError(f"Pf(tJ + A) leading coefficient is {lead}, expected 1")
    elif abs(lead - 1) > 1e-6:
        raise InternalConsistencyError(f"Pf(tJ + A) leading coefficient is {lead}, expected 1")
    return InvariantVector(a.n, tuple(coeffs[:-1]))


def invariants(a: SkewMatrix, eps: float = DEFAULT_EPS) -> InvariantVector:
    return sigma_k(a, eps)
