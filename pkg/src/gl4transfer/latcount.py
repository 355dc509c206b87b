"""Closed-form sublattice counts and their brute-force oracles.

For lattices ``M0 >= M1`` of relative position ``(a, b)`` the functions
below count intermediate lattices (``phi``), those with cyclic quotient
(``phi_prim``), intermediate index-1 pairs (``psi``) and pairs fitting
between two index-1 pairs (``pair_count``).  Every closed form has an
enumerating twin in this module built on
:func:`gl4transfer.lattices.sublattices_between`.

Out-of-range ``k`` evaluates to ``0`` (germ sums run over fixed ranges
and rely on vanishing tails); pass ``strict=True`` to get a
``ValueError`` instead.
"""

from __future__ import annotations

from enum import IntEnum
from functools import lru_cache

from .finitefield import gf
from .lattices import (Lattice, contains, relative_position, scale,
                       standard, sublattices_between)
from .series import Series

__all__ = [
    "CountCase", "phi_prim", "phi", "psi", "xi", "xi_prime", "pair_count",
    "brute_phi", "brute_phi_prim", "brute_psi", "brute_pair_count",
    "case_of", "diagonal_lattice", "pair_instances",
]


class CountCase(IntEnum):
    """Relative position of ``(M0b : M1b)`` against ``(M0 : M1) = (a, b)``:
    ``SAME`` is ``(a, b)``, ``WIDER`` is ``(a-1, b+1)``, ``NARROWER`` is
    ``(a+1, b-1)`` (the last one needs ``a + 2 <= b``)."""

    SAME = 1
    WIDER = 2
    NARROWER = 3


def _out_of_range(strict, msg):
    if strict:
        raise ValueError(msg)
    return 0


def _s2(m: int, q: int) -> int:
    """``1 + 2q + 2q^2 + ... + 2q^m``."""
    return 1 + 2 * sum(q ** i for i in range(1, m + 1))


def phi_prim(a: int, b: int, k: int, q: int, strict: bool = False) -> int:
    if not 0 <= a <= b or k < 0:
        return _out_of_range(strict, f"phi_prim({a},{b},{k}) out of range")
    if k == 0:
        return 1
    if k <= a:
        return q ** (k - 1) + q ** k
    if k <= b:
        return q ** a
    return 0


def phi(a: int, b: int, k: int, q: int, strict: bool = False) -> int:
    if not (0 <= a <= b and 0 <= k <= a + b):
        return _out_of_range(strict, f"phi({a},{b},{k}) out of range")
    return sum(q ** i for i in range(min(k, a, a + b - k) + 1))


def psi(a: int, b: int, k: int, q: int, strict: bool = False) -> int:
    if not (0 <= a <= b and 0 <= k <= a + b - 1):
        return _out_of_range(strict, f"psi({a},{b},{k}) out of range")
    if k < a:
        return _s2(k, q) + q ** (k + 1)
    if k < b:
        return _s2(a, q)
    return _s2(a + b - k - 1, q) + q ** (a + b - k)


def xi(a: int, b: int, k: int, q: int, strict: bool = False) -> int:
    if not (0 <= a <= b and 0 <= k <= a + b):
        return _out_of_range(strict, f"xi({a},{b},{k}) out of range")
    return _s2(min(k, a, a + b - k), q)


def xi_prime(a: int, b: int, k: int, q: int, strict: bool = False) -> int:
    if a < 1:
        raise ValueError("xi_prime is only defined for a >= 1")
    if not (a <= b and 0 <= k <= a + b):
        return _out_of_range(strict, f"xi_prime({a},{b},{k}) out of range")
    if k in (0, a + b):
        return 1
    if k < a or b < k:
        return _s2(min(k, a + b - k), q)
    return _s2(a - 1, q) + q ** a


def pair_count(case: CountCase, a: int, b: int, k: int, q: int,
               strict: bool = False) -> int:
    """Number of pairs ``(L, Lb)`` fitting between ``(M0, M0b)`` and
    ``(M1, M1b)`` with ``[M0 : L] = k``."""
    case = CountCase(case)
    if case is CountCase.SAME:
        return xi(a, b, k, q, strict)
    if case is CountCase.WIDER:
        if a < 1:
            raise ValueError("the WIDER case needs a >= 1")
        return xi_prime(a, b, k, q, strict)
    if a + 2 > b:
        raise ValueError("the NARROWER case needs a + 2 <= b")
    return xi_prime(a + 1, b - 1, k, q, strict)


def case_of(M0, M0b, M1, M1b) -> CountCase:
    """Which of the three cases the pair of pairs belongs to."""
    a, b = relative_position(M0, M1)
    rel = relative_position(M0b, M1b)
    if rel == (a, b):
        return CountCase.SAME
    if rel == (a - 1, b + 1):
        return CountCase.WIDER
    if rel == (a + 1, b - 1):
        return CountCase.NARROWER
    raise ValueError(f"inconsistent relative positions {(a, b)} and {rel}")


# ---------------------------------------------------------------------------
# brute force

def diagonal_lattice(K, a: int, b: int) -> Lattice:
    """``diag(pi^a, pi^b) O^2``."""
    return Lattice(K, a, b, Series.zero(K))


def brute_phi(M0, M1, k) -> int:
    return len(sublattices_between(M0, M1, k))


def brute_phi_prim(M0, M1, k) -> int:
    piM0 = scale(M0, 1)
    return sum(1 for L in sublattices_between(M0, M1, k) if not contains(piM0, L))


def brute_psi(M0, M1, k) -> int:
    total = 0
    for L in sublattices_between(M0, M1, k):
        if L != M1:
            total += len(sublattices_between(L, M1, 1))
    return total


def brute_pair_count(M0, M0b, M1, M1b, k: int) -> int:
    """Count pairs ``(L, Lb)`` with ``M0 >= L >= M1``, ``M0b >= Lb >= M1b``,
    ``Lb`` of index 1 in ``L`` and ``[M0 : L] = k``."""
    for big, small in ((M0, M0b), (M1, M1b)):
        if not contains(big, small) or \
                small.det_valuation() - big.det_valuation() != 1:
            raise ValueError("flat lattices must have index 1")
    if not (contains(M0, M1) and contains(M0b, M1b)):
        raise ValueError("pairs must be nested")
    total_index = M1.det_valuation() - M0.det_valuation()
    if k < 0 or k > total_index:
        return 0
    count = 0
    for L in sublattices_between(M0, M1, k):
        for Lb in sublattices_between(L, M1b, 1):
            if contains(M0b, Lb):
                count += 1
    return count


@lru_cache(maxsize=None)
def pair_instances(q: int, a: int, b: int):
    """One representative ``(M0, M0b, M1, M1b)`` per case for
    ``M0 = O^2`` and ``M1 = diag(pi^a, pi^b) O^2``, as a dict keyed by
    :class:`CountCase`."""
    K = gf(q)
    M0 = standard(K)
    M1 = diagonal_lattice(K, a, b)
    found = {}
    for M0b in sublattices_between(M0, scale(M0, 1), 1):
        for M1b in sublattices_between(M1, scale(M1, 1), 1):
            if not contains(M0b, M1b):
                continue
            case = case_of(M0, M0b, M1, M1b)
            found.setdefault(case, (M0, M0b, M1, M1b))
    return found
