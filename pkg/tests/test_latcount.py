"""Closed-form sublattice counts against enumeration."""

import pytest
from hypothesis import given, settings, strategies as st

from gl4transfer import latcount as lc
from gl4transfer.finitefield import gf
from gl4transfer.latcount import CountCase
from gl4transfer.lattices import standard


def test_phi_prim_examples():
    for q in (2, 3, 5):
        assert lc.phi_prim(1, 2, 1, q) == q + 1
        assert lc.phi_prim(3, 4, 0, q) == 1
    assert lc.phi_prim(1, 2, 2, 2) == 2


def test_phi_examples():
    for q in (2, 3):
        assert lc.phi(1, 1, 1, q) == 1 + q
        assert lc.phi(2, 5, 0, q) == 1
    assert lc.phi(2, 3, 2, 2) == 7


def test_psi_examples():
    for q in (2, 3):
        assert lc.psi(1, 2, 0, q) == 1 + q
        assert lc.psi(1, 2, 1, q) == 1 + 2 * q
    assert lc.psi(2, 2, 3, 3) == 4


def test_xi_examples():
    assert lc.xi(3, 4, 0, 5) == 1
    assert lc.xi_prime(1, 2, 1, 3) == 4
    assert lc.xi(2, 3, 2, 2) == 13  # 1 + 2q + 2q^2 at q = 2, confirmed by enumeration
    assert lc.pair_count(CountCase.SAME, 0, 3, 2, 3) == 1
    assert lc.pair_count(CountCase.WIDER, 1, 1, 1, 2) == 3
    assert lc.pair_count(CountCase.NARROWER, 0, 2, 1, 3) == 4


def test_out_of_range():
    assert lc.phi(1, 2, 7, 3) == 0
    assert lc.psi(1, 1, 2, 3) == 0
    with pytest.raises(ValueError):
        lc.phi(1, 2, 7, 3, strict=True)
    with pytest.raises(ValueError):
        lc.xi_prime(0, 2, 1, 3)
    with pytest.raises(ValueError):
        lc.pair_count(CountCase.NARROWER, 1, 2, 1, 3)


# Values read off the enumerator at q = 3 and frozen here.
FROZEN_Q3 = {
    (1, 2): dict(phi=[1, 4, 4, 1], psi=[4, 7, 4],
                 SAME=[1, 7, 7, 1], WIDER=[1, 4, 4, 1]),
    (2, 2): dict(phi=[1, 4, 13, 4, 1], psi=[4, 16, 16, 4],
                 SAME=[1, 7, 25, 7, 1], WIDER=[1, 7, 16, 7, 1]),
    (1, 3): dict(phi=[1, 4, 4, 4, 1], psi=[4, 7, 7, 4],
                 SAME=[1, 7, 7, 7, 1], WIDER=[1, 4, 4, 4, 1], NARROWER=[1, 7, 16, 7, 1]),
}


@pytest.mark.parametrize("ab", sorted(FROZEN_Q3))
def test_frozen_counts(ab):
    a, b = ab
    want = FROZEN_Q3[ab]
    n = a + b
    assert [lc.phi(a, b, k, 3) for k in range(n + 1)] == want["phi"]
    assert [lc.psi(a, b, k, 3) for k in range(n)] == want["psi"]
    for case in CountCase:
        if case.name in want:
            assert [lc.pair_count(case, a, b, k, 3) for k in range(n + 1)] == want[case.name]


def test_brute_pair_count_degenerate():
    K = gf(2)
    M0, M0b, M1, M1b = lc.pair_instances(2, 0, 0)[CountCase.SAME]
    assert lc.brute_pair_count(M0, M0b, M1, M1b, 0) == 1
    assert lc.brute_pair_count(M0, M0b, M1, M1b, 1) == 0
    with pytest.raises(ValueError):
        lc.brute_pair_count(standard(K), standard(K), M1, M1b, 0)


def test_case_instances_exist():
    assert set(lc.pair_instances(2, 0, 3)) == {CountCase.SAME, CountCase.NARROWER}
    assert set(lc.pair_instances(2, 1, 1)) == {CountCase.SAME, CountCase.WIDER}
    assert set(lc.pair_instances(3, 1, 3)) == set(CountCase)


ab_pairs = st.tuples(st.integers(0, 3), st.integers(0, 3)).map(sorted)


@settings(max_examples=25, deadline=None)
@given(ab_pairs, st.sampled_from([2, 3]))
def test_closed_forms_match_enumeration(ab, q):
    a, b = ab
    K = gf(q)
    M0, M1 = standard(K), lc.diagonal_lattice(K, a, b)
    for k in range(a + b + 1):
        assert lc.phi(a, b, k, q) == lc.brute_phi(M0, M1, k)
        assert lc.phi_prim(a, b, k, q) == lc.brute_phi_prim(M0, M1, k)
        assert lc.psi(a, b, k, q) == lc.brute_psi(M0, M1, k)
        for case, inst in lc.pair_instances(q, a, b).items():
            assert lc.pair_count(case, a, b, k, q) == lc.brute_pair_count(*inst, k)


@given(ab_pairs, st.integers(0, 8), st.sampled_from([2, 3, 4, 5, 7]))
def test_symmetry_under_duality(ab, k, q):
    a, b = ab
    if k <= a + b:
        assert lc.phi(a, b, k, q) == lc.phi(a, b, a + b - k, q)
        assert lc.xi(a, b, k, q) == lc.xi(a, b, a + b - k, q)
    if k < a + b:
        assert lc.psi(a, b, k, q) == lc.psi(a, b, a + b - 1 - k, q)


@given(ab_pairs, st.sampled_from([2, 3, 4, 5]))
def test_primitive_decomposition(ab, q):
    # every sublattice is pi^j times a primitive one
    a, b = ab
    for k in range(a + b + 1):
        total = sum(lc.phi_prim(a - j, b - j, k - 2 * j, q)
                    for j in range(0, min(a, k // 2) + 1))
        assert total == lc.phi(a, b, k, q)
