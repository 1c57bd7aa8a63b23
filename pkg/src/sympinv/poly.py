"""Dense univariate polynomials as coefficient lists, lowest degree first."""

from __future__ import annotations

import math
from fractions import Fraction


def trim(p):
    p = list(p)
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def evaluate(p, x):
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def mul(p, q):
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    return out


def derivative(p):
    return [i * c for i, c in enumerate(p)][1:] or [0]


def divmod_poly(num, den):
    num = trim(num)
    den = trim(den)
    if den == [0]:
        raise ZeroDivisionError("polynomial division by zero")
    quot = [0] * max(len(num) - len(den) + 1, 1)
    rem = list(num)
    lead = den[-1]
    while len(rem) >= len(den) and rem != [0]:
        shift = len(rem) - len(den)
        factor = rem[-1] / lead
        quot[shift] = factor
        for i, c in enumerate(den):
            rem[i + shift] -= factor * c
        rem.pop()
        rem = trim(rem) if rem else [0]
    return trim(quot), trim(rem)


def monic(p):
    p = trim(p)
    return [c / p[-1] for c in p]


def gcd(p, q):
    """Monic gcd over an exact field (use ``Fraction`` coefficients)."""
    a, b = trim(p), trim(q)
    while b != [0]:
        _, r = divmod_poly(a, b)
        a, b = b, r
    return monic(a)


def interpolate(nodes, values):
    """Coefficients of the unique polynomial of degree < len(nodes) through the points.

    Lagrange form expanded exactly; with ``Fraction`` inputs the result is exact.
    """
    size = len(nodes)
    coeffs = [0] * size
    for i, (xi, yi) in enumerate(zip(nodes, values)):
        basis = [1]
        denom = 1
        for j, xj in enumerate(nodes):
            if j != i:
                basis = mul(basis, [-xj, 1])
                denom *= xi - xj
        scale = yi / denom
        for k, c in enumerate(basis):
            coeffs[k] += scale * c
    return coeffs


def squarefree_decomposition(p):
    """Yun's algorithm: ``p = lc * prod(a_i ** i)``; returns ``[(a_i, i), ...]``.

    Needs exact coefficients.
    """
    p = monic([Fraction(c) for c in p])
    if len(p) == 1:
        return []
    dp = derivative(p)
    a = gcd(p, dp)
    b, _ = divmod_poly(p, a)
    c, _ = divmod_poly(dp, a)
    d = [x - y for x, y in _pad(c, derivative(b))]
    out = []
    i = 1
    while len(trim(b)) > 1:
        a = gcd(b, d)
        if len(a) > 1:
            out.append((a, i))
        b, _ = divmod_poly(b, a)
        c, _ = divmod_poly(d, a)
        d = [x - y for x, y in _pad(c, derivative(b))]
        i += 1
    return out


def _pad(p, q):
    size = max(len(p), len(q))
    return zip(list(p) + [0] * (size - len(p)), list(q) + [0] * (size - len(q)))


def sturm_chain(p):
    """``p, p', -rem(p, p'), ...`` for exact ``p``."""
    chain = [trim(p), trim(derivative(p))]
    while len(chain[-1]) > 1 or chain[-1][0] != 0:
        _, r = divmod_poly(chain[-2], chain[-1])
        r = trim([-c for c in r])
        if r == [0]:
            break
        chain.append(r)
    return chain


# Root isolation works on the dyadic grid ``m / 2**_BITS`` with polynomials scaled
# to integer coefficients, so every sign test is exact integer arithmetic.
_BITS = 62


def _integer_poly(p):
    scale = math.lcm(*(Fraction(c).denominator for c in p))
    return [int(Fraction(c) * scale) for c in p]


def _sign_at(ip, m):
    """Sign of ``ip(m / 2**_BITS)``."""
    deg = len(ip) - 1
    acc = ip[deg]
    for i in range(deg - 1, -1, -1):
        acc = acc * m + (ip[i] << (_BITS * (deg - i)))
    return (acc > 0) - (acc < 0)


def _variations(chain, m):
    signs = [s for s in (_sign_at(q, m) for q in chain) if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _refine(ip, lo, hi):
    """The unique simple root in ``(lo, hi]`` by exact bisection on grid indices."""
    top = _sign_at(ip, hi)
    if top == 0:
        return hi
    while hi - lo > 1:
        mid = (lo + hi) // 2
        s = _sign_at(ip, mid)
        if s == 0:
            return mid
        if s == top:
            hi = mid
        else:
            lo = mid
    return hi


def _simple_real_roots(p):
    """Real roots of an exact squarefree polynomial whose roots are all real.

    Degree two uses the closed form on the exact discriminant; higher degrees
    isolate each root with a Sturm chain and bisect exactly on a dyadic grid, so
    roots closer together than float resolution are still separated.
    """
    p = monic([Fraction(c) for c in p])
    deg = len(p) - 1
    if deg == 1:
        return [float(-p[0])]
    if deg == 2:
        c, b = p[0], p[1]
        disc = b * b - 4 * c
        if disc < 0:
            raise ValueError("complex roots")
        b = float(b)
        # stable form avoids cancellation
        q = -0.5 * (b + math.copysign(math.sqrt(disc), b))
        r2 = float(c) / q if q else -b - q
        return sorted([q, r2])
    ip = _integer_poly(p)
    chain = [_integer_poly(q) for q in sturm_chain(p)]
    bound = math.ceil(1 + max(abs(x) for x in p[:-1])) << _BITS
    roots = []
    stack = [(-bound, bound)]
    while stack:
        lo, hi = stack.pop()
        count = _variations(chain, lo) - _variations(chain, hi)
        if count == 1:
            roots.append(_refine(ip, lo, hi))
        elif count > 1 and hi - lo <= 1:  # closer than the grid spacing
            roots += [hi] * count
        elif count > 1:
            mid = (lo + hi) // 2
            stack += [(lo, mid), (mid, hi)]
    if len(roots) != deg:
        raise ValueError("complex roots")
    return sorted(float(Fraction(m, 1 << _BITS)) for m in roots)


def real_roots(p):
    """All roots, with multiplicity, of a polynomial known to split over the reals.

    Exact coefficients are required so repeated roots can be separated first;
    each squarefree factor then has well-separated simple roots.
    """
    roots = []
    for factor, mult in squarefree_decomposition(p):
        for r in _simple_real_roots(factor):
            roots.extend([r] * mult)
    return sorted(roots)
