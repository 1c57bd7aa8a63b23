"""Small dense linear algebra on nested tuples of scalars.

Dimensions here are tiny (at most 12x12), so plain Python beats object-dtype
numpy arrays and keeps ``Fraction`` arithmetic exact.
"""

from __future__ import annotations

from fractions import Fraction

from .scalar import DEFAULT_EPS, Mode, is_zero, mode_of, to_mode

Matrix = tuple  # tuple[tuple[scalar, ...], ...]


def as_matrix(rows, mode: Mode | None = None) -> Matrix:
    rows = [list(r) for r in rows]
    if mode is None:
        mode = mode_of(v for r in rows for v in r)
    return tuple(tuple(to_mode(v, mode) for v in r) for r in rows)


def matrix_mode(m: Matrix) -> Mode:
    return mode_of(v for r in m for v in r)


def shape(m: Matrix):
    return len(m), (len(m[0]) if m else 0)


def identity(size: int, mode: Mode = Mode.RATIONAL) -> Matrix:
    one, zero = to_mode(1, mode), to_mode(0, mode)
    return tuple(tuple(one if i == j else zero for j in range(size)) for i in range(size))


def transpose(m: Matrix) -> Matrix:
    return tuple(zip(*m))


def matmul(a: Matrix, b: Matrix) -> Matrix:
    if len(a[0]) != len(b):
        raise ValueError(f"cannot multiply {shape(a)} by {shape(b)}")
    bt = transpose(b)
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


def matvec(a: Matrix, v) -> tuple:
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def bilinear(u, m: Matrix, v):
    """``u^T m v``."""
    return sum(ui * mv for ui, mv in zip(u, matvec(m, v)))


def det(m: Matrix):
    """Determinant by Gaussian elimination (partial pivoting in float mode)."""
    size = len(m)
    work = [list(r) for r in m]
    floating = matrix_mode(m) is Mode.FLOAT
    result = to_mode(1, Mode.FLOAT if floating else Mode.RATIONAL)
    for k in range(size):
        if floating:
            piv = max(range(k, size), key=lambda i: abs(work[i][k]))
            if work[piv][k] == 0:
                return 0.0
        else:
            piv = next((i for i in range(k, size) if work[i][k] != 0), None)
            if piv is None:
                return Fraction(0)
        if piv != k:
            work[k], work[piv] = work[piv], work[k]
            result = -result
        p = work[k][k]
        result *= p
        for i in range(k + 1, size):
            factor = work[i][k] / p
            if factor:
                row_i, row_k = work[i], work[k]
                for j in range(k, size):
                    row_i[j] -= factor * row_k[j]
    return result


def inverse(m: Matrix, eps: float = DEFAULT_EPS) -> Matrix:
    """Gauss-Jordan inverse; raises ``ZeroDivisionError`` when singular."""
    size = len(m)
    mode = matrix_mode(m)
    floating = mode is Mode.FLOAT
    eye = identity(size, mode)
    work = [list(r) + list(e) for r, e in zip(m, eye)]
    for k in range(size):
        if floating:
            piv = max(range(k, size), key=lambda i: abs(work[i][k]))
        else:
            piv = next((i for i in range(k, size) if work[i][k] != 0), k)
        if is_zero(work[piv][k], eps if floating else 0.0):
            raise ZeroDivisionError("matrix is singular")
        work[k], work[piv] = work[piv], work[k]
        p = work[k][k]
        work[k] = [x / p for x in work[k]]
        for i in range(size):
            if i != k and work[i][k]:
                factor = work[i][k]
                work[i] = [x - factor * y for x, y in zip(work[i], work[k])]
    return tuple(tuple(r[size:]) for r in work)


def max_abs(m: Matrix):
    return max((abs(v) for r in m for v in r), default=0)


def matrices_close(a: Matrix, b: Matrix, eps: float = DEFAULT_EPS) -> bool:
    """Exact equality for rationals; for floats ``|a-b| <= eps * max(1, scale)``."""
    if shape(a) != shape(b):
        return False
    if matrix_mode(a) is Mode.RATIONAL and matrix_mode(b) is Mode.RATIONAL:
        return a == b
    scale = max(1.0, float(max_abs(a)), float(max_abs(b)))
    tol = eps * scale
    return all(abs(float(x) - float(y)) <= tol for ra, rb in zip(a, b) for x, y in zip(ra, rb))
