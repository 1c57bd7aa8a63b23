from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sympinv import poly


def from_roots(roots):
    p = [Fraction(1)]
    for r in roots:
        p = poly.mul(p, [-Fraction(r), 1])
    return p


def test_interpolate_recovers_polynomial():
    p = [Fraction(3), Fraction(-1, 2), Fraction(0), Fraction(2)]
    xs = list(range(4))
    assert poly.interpolate(xs, [poly.evaluate(p, x) for x in xs]) == p


def test_gcd_and_division():
    a = from_roots([1, 2, 3])
    b = from_roots([2, 3, 5])
    assert poly.gcd(a, b) == from_roots([2, 3])
    q, r = poly.divmod_poly(a, from_roots([1]))
    assert q == from_roots([2, 3])
    assert poly.trim(r) == [0]


def test_squarefree_decomposition():
    p = from_roots([1, 2, 2, 3, 3, 3])
    parts = {mult: factor for factor, mult in poly.squarefree_decomposition(p)}
    assert parts == {1: from_roots([1]), 2: from_roots([2]), 3: from_roots([3])}


def test_sturm_chain_counts_roots():
    chain = [poly._integer_poly(q) for q in poly.sturm_chain(from_roots([-2, 0, 1, 4]))]
    assert len(chain) >= 2
    assert poly._variations(chain, -10 << poly._BITS) - poly._variations(chain, 10 << poly._BITS) == 4


def test_complex_roots_rejected():
    with pytest.raises(ValueError):
        poly.real_roots([1, 0, 1])
    with pytest.raises(ValueError):
        poly.real_roots(poly.mul([1, 0, 1], [-1, 1]))


def test_nearly_equal_roots_separate():
    close = Fraction(4.999999999999999)
    assert poly.real_roots(from_roots([0, close, 5])) == [0.0, float(close), 5.0]


roots = st.lists(st.fractions(min_value=-50, max_value=50, max_denominator=20), min_size=1, max_size=6)


@settings(max_examples=150, deadline=None)
@given(roots)
def test_real_roots_with_multiplicity(rs):
    found = poly.real_roots(from_roots(rs))
    assert found == pytest.approx(sorted(float(r) for r in rs), abs=1e-12)
