"""Hermite-form lattices in F^2 and in quadratic algebras."""

import pytest
from hypothesis import given, settings, strategies as st

from gl4transfer.finitefield import gf
from gl4transfer.lattices import (Lattice, apply_element, conductor_of_lattice,
                                  contains, hermite_normalize, index,
                                  relative_position, scale, standard,
                                  sublattices_between, unit_conductor_orbit)
from gl4transfer.localfield import NumInvariant, algebra, element_from_invariant
from gl4transfer.series import Series


def S(K, *terms):
    """Series from ``(digit, exponent)`` pairs."""
    return Series.from_dict(K, {e: a for a, e in terms})


def test_hermite_normalize():
    K = gf(3)
    one, zero, pi = S(K, (1, 0)), Series.zero(K), S(K, (1, 1))
    O = standard(K)
    assert hermite_normalize(K, ((one, zero), (zero, one))) == O
    assert hermite_normalize(K, ((zero, one), (one, zero))) == O
    L = hermite_normalize(K, ((pi, one), (zero, one)))
    M = hermite_normalize(K, ((one, zero), (zero, pi)))
    # different lattices in the same GL_2(O) orbit
    assert L != M
    assert relative_position(O, L) == relative_position(O, M) == (0, 1)
    assert hermite_normalize(K, ((one, zero), (zero, pi))) == M


def test_relative_position_and_index():
    K = gf(2)
    O = standard(K)
    assert relative_position(O, O) == (0, 0)
    assert relative_position(O, scale(O, 1)) == (1, 1)
    assert index(O, scale(O, 1)) == 2
    assert index(O, O) == 0
    with pytest.raises(ValueError):
        index(scale(O, 1), O)


def test_relative_position_of_split_element():
    w = element_from_invariant(NumInvariant.parse("split:4:-2"), 3)
    O = standard(w.alg.K)
    assert relative_position(O, apply_element(w, O)) == (1, 3)


def test_ramified_uniformizer_has_index_one():
    alg = algebra("ramified", 3)
    O = standard(alg.K)
    assert index(O, apply_element(alg.zeta(), O)) == 1


@pytest.mark.parametrize("q", [2, 3])
def test_sublattices_between(q):
    K = gf(q)
    O = standard(K)
    assert len(sublattices_between(O, scale(O, 1), 1)) == q + 1
    assert sublattices_between(O, O, 0) == [O]
    cyclic = Lattice(K, 0, 2, Series.zero(K))
    assert len(sublattices_between(O, cyclic, 1)) == 1


def test_apply_scalars():
    K = gf(3)
    O = standard(K)
    alg = algebra("inert", 3)
    assert apply_element(alg.pi(), O) == scale(O, 1)
    unit = alg.elem(S(K, (2, 0), (1, 1)), Series.zero(K))
    assert apply_element(unit, O) == O


def test_conductor_examples():
    alg = algebra("inert", 3)
    K = alg.K
    assert conductor_of_lattice(alg, standard(K)) == 0
    R2 = Lattice(K, 0, 2, Series.zero(K))  # O_F + pi^2 O_L on the basis (1, zeta)
    assert conductor_of_lattice(alg, R2) == 2
    u = alg.elem(S(K, (1, 0)), S(K, (1, 0)))
    assert conductor_of_lattice(alg, apply_element(u, R2)) == 2


@pytest.mark.parametrize("kind,q,c,expected", [
    ("inert", 2, 1, 3), ("split", 3, 2, 6), ("inert", 3, 2, 12),
    ("ramified", 3, 1, 3), ("ramified", 3, 3, 27), ("split", 2, 3, 4),
])
def test_orbit_sizes(kind, q, c, expected):
    alg = algebra(kind, q)
    orbit = unit_conductor_orbit(alg, c)
    assert len(orbit) == expected == alg.i_index() * q ** (c - 1)
    assert all(conductor_of_lattice(alg, L) == c for L in orbit)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2), st.integers(0, 2), st.lists(st.integers(0, 1), max_size=2))
def test_sublattice_enumeration_is_complete(a, extra, digits):
    K = gf(2)
    b = a + extra
    O = standard(K)
    M1 = Lattice(K, a, b, Series(K, 0, digits[:a]) if a else Series.zero(K))
    total = M1.det_valuation()
    counts = [len(sublattices_between(O, M1, k)) for k in range(total + 1)]
    assert counts == counts[::-1]
    for k in range(total + 1):
        for L in sublattices_between(O, M1, k):
            assert contains(O, L) and contains(L, M1) and index(O, L) == k
