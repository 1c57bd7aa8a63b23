import random
from fractions import Fraction

import pytest
from hypothesis import strategies as st

from sympinv.matrix import SkewMatrix, pfaffian


def small_fraction(rng, zero_prob=0.2, span=6):
    if rng.random() < zero_prob:
        return Fraction(0)
    return Fraction(rng.randint(-span, span), rng.randint(1, 4))


def random_skew(rng, n, zero_prob=0.2):
    return SkewMatrix(n, tuple(small_fraction(rng, zero_prob) for _ in range(n * (2 * n - 1))))


def random_nondegenerate_4x4(rng):
    """Random 4x4 form, biased so every reduction case (b, c, d, e zero patterns) occurs."""
    while True:
        a, b, c, d, e, f = (small_fraction(rng, 0.1) for _ in range(6))
        pattern = rng.randrange(6)
        if pattern >= 1:
            b = Fraction(0)
        if pattern >= 2:
            c = Fraction(0)
        if pattern >= 3:
            d = Fraction(0)
        if pattern >= 4:
            e = Fraction(0)
        m = SkewMatrix.from_abcdef(a, b, c, d, e, f)
        if pfaffian(m) != 0:
            return m


fractions = st.fractions(min_value=-20, max_value=20, max_denominator=12)


@st.composite
def skew_matrices(draw, min_n=1, max_n=4):
    n = draw(st.integers(min_n, max_n))
    upper = draw(st.lists(fractions, min_size=n * (2 * n - 1), max_size=n * (2 * n - 1)))
    return SkewMatrix(n, tuple(upper))


@pytest.fixture
def rng():
    return random.Random(20261016)


ACCEPTANCE_RESULTS = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_RESULTS):
        terminalreporter.write_line(ACCEPTANCE_RESULTS[number])
