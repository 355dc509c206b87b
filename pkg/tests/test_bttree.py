"""Bruhat-Tits tree over GF(q^2)((pi)) and multiplicities of
conjugate-linear maps."""

import pytest
from hypothesis import given, settings, strategies as st

from gl4transfer.bttree import (ConjLinearMap, ShapeDescriptor, ball_census, ball_count,
                                canonical_class, classify_shape, compute_T,
                                conj_linear_from_invariant, distance_law_check,
                                max_multiplicity, n_multiplicity, neighbors,
                                predicted_shape, quotient_canonicalize,
                                standard_vertex, tree_realizable, tree_size)
from gl4transfer.errors import NotRealizableError
from gl4transfer.finitefield import gf2_over
from gl4transfer.lattices import Lattice
from gl4transfer.localfield import NumInvariant, valid_invariants
from gl4transfer.series import Series

P = NumInvariant.parse


def scalar_map(q, k):
    K = gf2_over(q)[0]
    pik, zero = Series.mono(K, 1, k), Series.zero(K)
    return ConjLinearMap(q, ((pik, zero), (zero, pik)))


def test_multiplicity_of_a_scalar():
    z = scalar_map(2, 1)
    assert n_multiplicity(z, standard_vertex(2)) == 1
    # pi * sigma keeps n = 1 exactly on the sigma-stable lattices: q + 1 of
    # the q^2 + 1 neighbours
    values = [n_multiplicity(z, L) for L in neighbors(standard_vertex(2))]
    assert sorted(values) == [0, 0, 1, 1, 1]


@pytest.mark.parametrize("q", [2, 3])
def test_neighbors(q):
    O = standard_vertex(q)
    nb = neighbors(O)
    assert len(nb) == q * q + 1
    assert len(set(nb)) == q * q + 1
    for N in nb:
        assert neighbors(N).count(O) == 1


def test_quotient_canonicalize():
    K = gf2_over(2)[0]
    O = standard_vertex(2)
    zero = Series.zero(K)
    assert quotient_canonicalize(O) == O
    assert quotient_canonicalize(Lattice(K, 1, -1, zero)) == O
    assert quotient_canonicalize(canonical_class(K, 2, 0, zero)) == O
    assert quotient_canonicalize(canonical_class(K, 1, 0, zero)) == canonical_class(K, 1, 0, zero)


def test_realizability():
    assert tree_realizable(P("inert:4:0"))
    assert not tree_realizable(P("ram:3:-1"))
    assert not tree_realizable(P("split:4:-2"))
    assert not tree_realizable(P("ram:2:0"), 2)
    with pytest.raises(NotRealizableError):
        conj_linear_from_invariant(P("ram:3:-1"), 3)
    with pytest.raises(NotRealizableError):
        conj_linear_from_invariant(P("split:4:-2"), 3)


@pytest.mark.parametrize("text,expected", [("inert:8:0", 2), ("split:8:-4", 1), ("ram:2:0", 0), ("inert:4:0", 1)])
def test_max_multiplicity(text, expected):
    inv = P(text)
    assert max_multiplicity(inv) == expected
    assert compute_T(conj_linear_from_invariant(inv, 3)).m == expected


@pytest.mark.parametrize("text,shape", [
    ("inert:2:0", "edge(0)"), ("ram:4:2", "edge_ball(1)"), ("split:4:0", "apartment(0)"),
    ("inert:0:0", "vertex_ball(0)"), ("inert:4:4", "vertex_ball(2)"), ("split:0:2", "apartment_ball(1)"),
])
def test_shapes(text, shape):
    inv = P(text)
    win = compute_T(conj_linear_from_invariant(inv, 3))
    assert str(classify_shape(win)) == shape == str(predicted_shape(inv))
    assert distance_law_check(win)


def test_scaling_law():
    z = conj_linear_from_invariant(P("inert:4:2"), 2)
    win = compute_T(z)
    zz = z.scaled(1)
    for L in win.vertices()[:20]:
        assert n_multiplicity(zz, L) == win.n[L] + 1


def test_vertices_next_to_T_drop_by_one():
    win = compute_T(conj_linear_from_invariant(P("ram:4:0"), 3))
    for L in win.layer(1):
        assert win.n[L] == win.m - 1


@pytest.mark.parametrize("shape,m,q,expected", [
    (ShapeDescriptor("edge", 0), 1, 2, 10),
    (ShapeDescriptor("apartment", 0), 0, 3, 2),
    (ShapeDescriptor("apartment", 0), 1, 2, 8),
    (ShapeDescriptor("vertex", 0), 1, 3, 11),
    (ShapeDescriptor("edge", 1), 0, 3, 8),
])
def test_ball_count(shape, m, q, expected):
    assert ball_count(shape, m, q) == expected


def test_tree_sizes():
    assert tree_size(ShapeDescriptor("vertex", 2), 3) == 17
    assert tree_size(ShapeDescriptor("edge", 2), 3) == 26
    assert tree_size(ShapeDescriptor("apartment", 1), 2) == 4
    with pytest.raises(ValueError):
        ball_count(ShapeDescriptor("edge", 0), -1, 2)


@pytest.mark.parametrize("text,q", [("inert:0:2", 2), ("split:0:2", 3), ("ram:2:0", 3)])
def test_ball_census_matches_formula(text, q):
    win = compute_T(conj_linear_from_invariant(P(text), q))
    shape = classify_shape(win)
    for m in range(3):
        assert ball_census(win.T, m, win.quotient) == ball_count(shape, m, q)


realizable = [i for i in valid_invariants(range(-2, 7), 4) if tree_realizable(i, 3)]


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(realizable), st.sampled_from([3, 5]))
def test_tree_properties(inv, q):
    win = compute_T(conj_linear_from_invariant(inv, q))
    assert win.m == max_multiplicity(inv)
    assert distance_law_check(win)
    assert classify_shape(win) == predicted_shape(inv)
    # adjacent vertices differ by at most one
    for L, nbrs in win.adj.items():
        for N in nbrs:
            if N in win.n:
                assert abs(win.n[L] - win.n[N]) <= 1
