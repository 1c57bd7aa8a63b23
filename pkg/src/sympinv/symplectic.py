"""The group Sp(2n), its action on skew forms, and symplectic bases."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .errors import (
    BasisError,
    BasisValuesMismatchError,
    DegenerateFormError,
    DimensionError,
    InternalConsistencyError,
    NotSymplecticError,
    SingularBasisError,
)
from .matrix import SkewMatrix, congruence, standard_j
from .scalar import DEFAULT_EPS, Mode, format_scalar, is_zero, parse_scalar, to_mode


def _j_rows(n: int, mode: Mode = Mode.RATIONAL):
    return standard_j(n).to_mode(mode).rows


def is_symplectic(p, eps: float = DEFAULT_EPS) -> bool:
    """``P^T J P == J``: exactly for rationals, within ``eps * max(1, |P|^2)`` for floats."""
    p = linalg.as_matrix(p)
    size = len(p)
    if size == 0 or any(len(r) != size for r in p):
        raise DimensionError("expected a square matrix")
    if size % 2:
        raise DimensionError(f"symplectic matrices have even dimension, got {size}")
    mode = linalg.matrix_mode(p)
    j = _j_rows(size // 2, mode)
    lhs = linalg.matmul(linalg.transpose(p), linalg.matmul(j, p))
    if mode is Mode.RATIONAL:
        return lhs == j
    scale = max(1.0, float(linalg.max_abs(p)) ** 2)
    return linalg.matrices_close(lhs, j, eps * scale)


@dataclass(frozen=True)
class SymplecticMatrix:
    """A validated element of Sp(2n)."""

    rows: tuple
    eps: float = field(default=DEFAULT_EPS, compare=False, repr=False)

    def __post_init__(self):
        rows = linalg.as_matrix(self.rows)
        object.__setattr__(self, "rows", rows)
        if not is_symplectic(rows, self.eps):
            raise NotSymplecticError("P^T J P != J")

    @property
    def n(self) -> int:
        return len(self.rows) // 2

    @property
    def mode(self) -> Mode:
        return linalg.matrix_mode(self.rows)

    @classmethod
    def identity(cls, n: int, mode: Mode = Mode.RATIONAL) -> "SymplecticMatrix":
        return cls(linalg.identity(2 * n, mode))

    def __matmul__(self, other: "SymplecticMatrix") -> "SymplecticMatrix":
        if not isinstance(other, SymplecticMatrix):
            return NotImplemented
        rows = linalg.matmul(*_same_mode(self.rows, other.rows))
        return SymplecticMatrix(rows, max(self.eps, other.eps))

    def inverse(self) -> "SymplecticMatrix":
        # P^{-1} = -J P^T J
        j = _j_rows(self.n, self.mode)
        inv = linalg.matmul(j, linalg.matmul(linalg.transpose(self.rows), j))
        return SymplecticMatrix(tuple(tuple(-v for v in r) for r in inv), self.eps)

    def to_mode(self, mode: Mode) -> "SymplecticMatrix":
        if mode is self.mode:
            return self
        return SymplecticMatrix(linalg.as_matrix(self.rows, mode), self.eps)

    def to_json(self) -> dict:
        return {"rows": [[format_scalar(v) for v in r] for r in self.rows]}


def _same_mode(*matrices):
    modes = {linalg.matrix_mode(m) for m in matrices}
    mode = Mode.FLOAT if Mode.FLOAT in modes else Mode.RATIONAL
    return [linalg.as_matrix(m, mode) for m in matrices]


def parse_square_matrix(data, mode: Mode | None = None) -> tuple:
    """Read ``{"rows": [[...], ...]}``."""
    if not isinstance(data, dict) or not isinstance(data.get("rows"), list):
        raise ValueError("square matrix JSON must be an object with a 'rows' list")
    rows = data["rows"]
    if not rows or any(not isinstance(r, list) or len(r) != len(rows) for r in rows):
        raise ValueError("'rows' must form a non-empty square matrix")
    parsed = [[parse_scalar(v, mode) for v in r] for r in rows]
    return linalg.as_matrix(parsed)


def act(p: SymplecticMatrix, a: SkewMatrix) -> SkewMatrix:
    """The group action ``(P, A) -> P^T A P``."""
    if p.n != a.n:
        raise DimensionError(f"cannot act with Sp({2 * p.n}) on a {a.size}x{a.size} form")
    return congruence(p.rows, a)


def transpose_in_group(p: SymplecticMatrix) -> SymplecticMatrix:
    try:
        return SymplecticMatrix(linalg.transpose(p.rows), p.eps)
    except NotSymplecticError as exc:  # pragma: no cover - would be a bug
        raise InternalConsistencyError("transpose of a symplectic matrix failed validation") from exc


# -- random generation -------------------------------------------------------

_COEFFS = (Fraction(1), Fraction(-1), Fraction(2), Fraction(-2), Fraction(1, 2), Fraction(-1, 2))


def _transvection(n, rng):
    # I + c v v^T J is symplectic for every v, c since v^T J v = 0
    size = 2 * n
    while True:
        v = [Fraction(rng.choice((-1, 0, 0, 1))) for _ in range(size)]
        if any(v):
            break
    c = rng.choice(_COEFFS)
    vj = linalg.matvec(linalg.transpose(_j_rows(n)), v)  # row vector v^T J
    return tuple(
        tuple((1 if i == j else 0) + c * v[i] * vj[j] for j in range(size)) for i in range(size)
    )


def _paired_block(n, rng):
    # diag(M, M^{-T}) on the (x_i) and (y_i) coordinates
    while True:
        m = tuple(tuple(Fraction(rng.randint(-2, 2)) for _ in range(n)) for _ in range(n))
        if linalg.det(m) != 0:
            break
    mit = linalg.transpose(linalg.inverse(m))
    size = 2 * n
    rows = [[Fraction(0)] * size for _ in range(size)]
    for i in range(n):
        for j in range(n):
            rows[2 * i][2 * j] = m[i][j]
            rows[2 * i + 1][2 * j + 1] = mit[i][j]
    return tuple(tuple(r) for r in rows)


def _pair_permutation(n, rng):
    perm = list(range(n))
    rng.shuffle(perm)
    size = 2 * n
    rows = [[Fraction(0)] * size for _ in range(size)]
    for dst, src in enumerate(perm):
        rows[2 * src][2 * dst] = Fraction(1)
        rows[2 * src + 1][2 * dst + 1] = Fraction(1)
    return tuple(tuple(r) for r in rows)


_GENERATORS = (_transvection, _paired_block, _pair_permutation)


def random_symplectic(n: int, seed: int, complexity: int = 8) -> SymplecticMatrix:
    """Product of ``complexity`` random exact generators of Sp(2n).

    Generators are symplectic transvections, ``diag(M, M^{-T})`` factors with small
    integer ``M`` and pair permutations. Deterministic in ``seed``; not Haar-distributed.
    """
    if n < 1:
        raise DimensionError(f"n must be positive, got {n}")
    if complexity < 1:
        raise ValueError(f"complexity must be >= 1, got {complexity}")
    rng = random.Random(seed)
    result = None
    for _ in range(complexity):
        gen = rng.choice(_GENERATORS)
        factor = gen(n, rng)
        result = factor if result is None else linalg.matmul(result, factor)
    return SymplecticMatrix(result)


# -- symplectic bases --------------------------------------------------------


def _pair(u, a_rows, v):
    return linalg.bilinear(u, a_rows, v)


@dataclass(frozen=True)
class SymplecticBasis:
    """Vectors ``v_1..v_2n`` with ``v_{2i-1}^T A v_{2i} = 1`` and all other pairings zero."""

    form: SkewMatrix
    vectors: tuple
    eps: float = field(default=DEFAULT_EPS, compare=False, repr=False)

    def __post_init__(self):
        mode = self.form.mode
        if any(isinstance(x, float) for v in self.vectors for x in v):
            mode = Mode.FLOAT
        form = self.form.to_mode(mode)
        vectors = tuple(tuple(to_mode(x, mode) for x in v) for v in self.vectors)
        object.__setattr__(self, "form", form)
        object.__setattr__(self, "vectors", vectors)
        size = form.size
        if len(vectors) != size or any(len(v) != size for v in vectors):
            raise DimensionError(f"need {size} vectors of length {size}")
        a = form.rows
        scale = max(1.0, float(max(abs(x) for v in vectors for x in v)) ** 2 * float(max(1, linalg.max_abs(a))))
        for i in range(size):
            for j in range(i + 1, size):
                want = 1 if (i % 2 == 0 and j == i + 1) else 0
                got = _pair(vectors[i], a, vectors[j])
                ok = got == want if mode is Mode.RATIONAL else abs(got - want) <= self.eps * scale
                if not ok:
                    raise BasisError(f"v{i + 1}^T A v{j + 1} = {got}, expected {want}")
        if is_zero(linalg.det(vectors), 0.0 if mode is Mode.RATIONAL else self.eps):
            raise SingularBasisError("basis vectors are linearly dependent")

    @property
    def n(self) -> int:
        return self.form.n


def symplectic_gram_schmidt(a: SkewMatrix, eps: float = DEFAULT_EPS) -> SymplecticBasis:
    """Symplectic basis for ``a`` by modified Gram-Schmidt over the standard basis.

    The lowest-index remaining vector is paired with the lowest-index remaining
    vector it pairs nontrivially with; the partner is rescaled and the rest of the
    space is projected onto the A-orthogonal complement of the pair.
    """
    mode = a.mode
    rows = a.rows
    size = a.size
    one, zero = to_mode(1, mode), to_mode(0, mode)
    remaining = [tuple(one if i == k else zero for i in range(size)) for k in range(size)]
    basis = []
    while remaining:
        u = remaining[0]
        partner = None
        for idx in range(1, len(remaining)):
            w = _pair(u, rows, remaining[idx])
            if not is_zero(w, eps):
                partner = idx
                break
        if partner is None:
            raise DegenerateFormError("form is degenerate: no pairing partner found")
        v1 = u
        v2 = tuple(x / w for x in remaining[partner])
        rest = [v for k, v in enumerate(remaining) if k not in (0, partner)]
        projected = []
        for x in rest:
            c1 = _pair(x, rows, v2)
            c2 = _pair(x, rows, v1)
            projected.append(tuple(xi - c1 * p + c2 * q for xi, p, q in zip(x, v1, v2)))
        basis += [v1, v2]
        remaining = projected
    return SymplecticBasis(a, tuple(basis), eps)


def basis_values(basis: SymplecticBasis) -> tuple:
    """``(v_i^T J v_j)`` for ``i < j`` in lexicographic order; length ``n(2n-1)``."""
    j = _j_rows(basis.n, basis.form.mode)
    v = basis.vectors
    return tuple(linalg.bilinear(v[i], j, v[k]) for i in range(len(v)) for k in range(i + 1, len(v)))


def equivalence_from_bases(
    basis_a: SymplecticBasis, basis_b: SymplecticBasis, eps: float = DEFAULT_EPS
) -> SymplecticMatrix:
    """``P`` with ``P v_i = w_i``; then ``P`` is symplectic and ``act(P, B) == A``.

    ``basis_a`` is a symplectic basis for ``A`` and ``basis_b`` one for ``B``; their
    basis-values must agree entrywise.
    """
    if basis_a.n != basis_b.n:
        raise DimensionError("bases have different dimensions")
    va, vb = basis_values(basis_a), basis_values(basis_b)
    for k, (x, y) in enumerate(zip(va, vb), start=1):
        same = x == y if not (isinstance(x, float) or isinstance(y, float)) else abs(x - y) <= eps
        if not same:
            raise BasisValuesMismatchError(k, x, y)
    v_cols, w_cols = _same_mode(linalg.transpose(basis_a.vectors), linalg.transpose(basis_b.vectors))
    try:
        v_inv = linalg.inverse(v_cols, eps)
    except ZeroDivisionError as exc:
        raise SingularBasisError("first basis is linearly dependent") from exc
    if is_zero(linalg.det(w_cols), 0.0 if linalg.matrix_mode(w_cols) is Mode.RATIONAL else eps):
        raise SingularBasisError("second basis is linearly dependent")
    p_rows = linalg.matmul(w_cols, v_inv)
    try:
        p = SymplecticMatrix(p_rows, eps)
    except NotSymplecticError as exc:
        raise InternalConsistencyError("equal basis-values produced a non-symplectic map") from exc
    if not linalg.matrices_close(act(p, basis_b.form).rows, basis_a.form.rows, eps):
        raise InternalConsistencyError("act(P, B) != A after equivalence construction")
    return p


def forms_equal(a: SkewMatrix, b: SkewMatrix, eps: float = DEFAULT_EPS) -> bool:
    return a.n == b.n and linalg.matrices_close(a.rows, b.rows, eps)

