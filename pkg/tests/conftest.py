"""Shared hypothesis strategies and helpers for the test suite."""

from fractions import Fraction

from hypothesis import strategies as st

import ergolab as E


def rationals(bound=5, max_den=8):
    return st.fractions(min_value=-bound, max_value=bound, max_denominator=max_den)


def vectors(n, bound=5, max_den=8):
    return st.lists(rationals(bound, max_den), min_size=n, max_size=n).map(E.RieszVector)


@st.composite
def sized_vectors(draw, max_n=8, bound=5, max_den=8):
    n = draw(st.integers(min_value=1, max_value=max_n))
    return draw(vectors(n, bound, max_den))


@st.composite
def vector_pairs(draw, max_n=8, bound=5, max_den=8):
    n = draw(st.integers(min_value=1, max_value=max_n))
    return draw(vectors(n, bound, max_den)), draw(vectors(n, bound, max_den))


def components(n):
    return st.lists(st.integers(0, 1), min_size=n, max_size=n).map(E.Component)


@st.composite
def systems(draw, max_n=8, max_blocks=4):
    n = draw(st.integers(min_value=1, max_value=max_n))
    blocks = draw(st.integers(min_value=1, max_value=min(max_blocks, n)))
    seed = draw(st.integers(min_value=0, max_value=10**6))
    return E.random_system(n, blocks, seed)


@st.composite
def systems_with_vectors(draw, max_n=8, bound=5, max_den=8):
    system = draw(systems(max_n=max_n))
    f = draw(vectors(system.n, bound, max_den))
    return system, f


def block_crossing_system():
    """A deliberately broken bundle: the atom map swaps mass across blocks."""
    return E.CepsSystem.from_parts(
        [Fraction(1, 4)] * 4, [[0, 1], [2, 3]], [2, 1, 0, 3]
    )
