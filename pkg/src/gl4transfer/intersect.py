"""Intersection numbers for the division algebras of Hasse invariant 1/4
and 3/4.

Closed forms sit next to geometric recipes that only use the tree data of
:mod:`gl4transfer.bttree`:

* invariant 1/4: ``Int_0 = artinian + sum(p_L)`` with the vertex terms
  ``p_L = -m * ((q^2 - 1) - m (q^2 + 1) + sum of neighbour m)``,
  where ``m = max(0, n(z, L))``.  The constants are the degree ``q^2 - 1``
  of the conormal bundle on a component and its self-intersection
  ``-(q^2 + 1)``;
* invariant 3/4: the shifted datum with ``r - 2`` in place of ``r`` is fed
  through the 1/4 recipe and the ball of lattices with ``n >= 0`` is
  counted.  The artinian contributions are assembled a second time from
  the local lengths of :func:`artinian_length`, and both assemblies must
  agree.

Every length in :func:`artinian_length` is computed as the colength of an
explicit ideal in a two-variable power series ring, not quoted.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .bttree import (ball_count, compute_T, conj_linear_from_invariant,
                     max_multiplicity, predicted_shape)
from .errors import InternalInvariantError, NoMatchingError
from .finitefield import prime_power_decomposition
from .localfield import NumInvariant, matching_exists
from .orbital import reference_table

__all__ = [
    "QUARTER", "THREE_QUARTERS", "IntResult", "int_closed",
    "int_geometric_quarter", "int_geometric_threequarter", "shifted_ball_count",
    "artinian_length", "ARTINIAN_TAGS", "LengthRecord", "colength",
    "scaled_lengths",
]

QUARTER = Fraction(1, 4)
THREE_QUARTERS = Fraction(3, 4)


def _lam(lam) -> Fraction:
    lam = Fraction(lam)
    if lam not in (QUARTER, THREE_QUARTERS):
        raise ValueError(f"Hasse invariant must be 1/4 or 3/4, got {lam}")
    return lam


def _field_const(kind: str, r: int) -> int:
    return {"inert": r, "ramified": r // 2, "split": 0}[kind]


def _delta(kind: str) -> int:
    return 2 if kind == "inert" else 1


# ---------------------------------------------------------------------------
# closed forms

def shifted_ball_count(inv: NumInvariant, q: int) -> int:
    """Number of lattice classes with ``n >= 0`` for the shifted datum
    ``(kind, r - 2, d)``, modulo translations for split ``L``."""
    tilde = NumInvariant(inv.kind, inv.r - 2, inv.d2)
    m = max_multiplicity(tilde)
    if m < 0:
        return 0
    return ball_count(predicted_shape(tilde), m, q)


def int_closed(lam, inv: NumInvariant, q: int) -> int:
    """``Int(g)`` for a matching ``g``.

    1/4: ``r``, ``r/2`` or ``0`` for inert, ramified or split ``L``.
    3/4: ``delta * q * N`` plus the same constant, with ``delta = 2`` for
    inert ``L``.  ``N`` is also derived from the parahoric central value
    as ``2 * Orb_Par / delta``; the two must agree.
    """
    lam = _lam(lam)
    inv.validate()
    if not matching_exists(lam, inv):
        raise NoMatchingError(f"no element of invariant {lam} matches {inv}")
    if inv.r <= 0:
        return 0
    base = _field_const(inv.kind, inv.r)
    if lam == QUARTER:
        return base
    N = shifted_ball_count(inv, q)
    delta = _delta(inv.kind)
    par = reference_table(inv, q).orb_par_central
    if 2 * par != delta * N:
        raise InternalInvariantError(
            f"ball count {N} disagrees with 2*Orb_Par = {2 * par} at {inv}")
    return delta * q * N + base


# ---------------------------------------------------------------------------
# geometric recipes

@dataclass
class IntResult:
    """An intersection number with its ledger.

    ``value = doubling * int0``; ``pure`` is the sum of the vertex terms
    and ``artinian`` the total length of embedded points.
    """

    lam: Fraction
    inv: NumInvariant
    q: int
    value: int
    int0: int
    pure: int = 0
    artinian: int = 0
    doubling: int = 1
    details: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        out = {
            "lambda": str(self.lam), "inv": str(self.inv), "q": self.q,
            "value": self.value, "int0": self.int0, "pure": self.pure,
            "artinian": self.artinian, "doubling": self.doubling,
        }
        out.update({k: self.details[k] for k in sorted(self.details)})
        return out


def _quarter_artinian(inv: NumInvariant) -> int:
    """Length of the embedded point for invariant 1/4: one point of length
    one when ``L`` is a field and ``r`` is ``2 mod 4`` (``r >= 2``)."""
    if inv.is_field and inv.r >= 2 and inv.r % 4 == 2:
        return artinian_length("quarter", 2).length
    return 0


def int_geometric_quarter(inv: NumInvariant, q: int, window=None) -> IntResult:
    """``Int(g)`` for invariant 1/4 from the multiplicities on the tree of
    the conjugate-linear map attached to ``inv``."""
    inv.validate()
    doubling = _delta(inv.kind)
    if window is None:
        window = compute_T(conj_linear_from_invariant(inv, q))
    qq = q * q
    pure, off_T = 0, []
    Tset = set(window.T)
    for L, n in window.n.items():
        m = max(0, n)
        if m < 1:
            continue
        nbr = sum(max(0, window.n[N]) for N in window.adj[L])
        p = -m * ((qq - 1) - m * (qq + 1) + nbr)
        if L not in Tset and p != 0:
            off_T.append(str(L))
        pure += p
    art = _quarter_artinian(inv)
    int0 = pure + art
    return IntResult(QUARTER, inv, q, doubling * int0, int0, pure, art,
                     doubling, {"nonzero_off_T": len(off_T), "m": window.m})


def _threequarter_ledger(inv: NumInvariant, q: int, window) -> dict:
    """Artinian lengths for invariant 3/4, assembled point by point.

    ``window`` belongs to the shifted datum.  The superspecial part sits
    over ``T``: length-one points when ``r - 2`` is ``0 mod 4``, one point
    per edge of ``T`` (length ``2 + 2q`` for fields, ``q`` for split)
    when it is ``2 mod 4``.  Each vertex with ``0 <= n < m`` meets its
    unique higher neighbour in a boundary point of length ``q``.
    """
    rt = inv.r - 2
    m = window.m
    T = window.T
    Tset = set(T)
    edges = sum(1 for L in T for N in window.adj[L] if N in Tset) // 2
    if m < 0:
        superspecial = 0
    elif rt % 4 == 0:
        count = q * len(T) + (1 if inv.is_field else 0)
        superspecial = count * artinian_length("row2", q).length
    else:
        tag = "row4" if inv.is_field else "row3"
        superspecial = edges * artinian_length(tag, q).length
    boundary_pts = 0
    for L, n in window.n.items():
        if 0 <= n < m:
            boundary_pts += sum(1 for N in window.adj[L] if window.n[N] > n)
    boundary = boundary_pts * artinian_length("row5", q).length
    tilde_art = _quarter_artinian(NumInvariant(inv.kind, rt, inv.d2)) if rt >= 0 else 0
    return {"superspecial": superspecial, "boundary_points": boundary_pts,
            "boundary": boundary, "tilde_artinian": tilde_art,
            "T_size": len(T), "T_edges": edges}


def int_geometric_threequarter(inv: NumInvariant, q: int) -> IntResult:
    """``Int(g)`` for invariant 3/4, assembled twice from tree data."""
    inv.validate()
    if not matching_exists(THREE_QUARTERS, inv):
        raise NoMatchingError(f"no element of invariant 3/4 matches {inv}")
    doubling = _delta(inv.kind)
    if inv.r <= 0:
        return IntResult(THREE_QUARTERS, inv, q, 0, 0, doubling=doubling,
                         details={"empty": True})
    tilde = NumInvariant(inv.kind, inv.r - 2, inv.d2)
    window = compute_T(conj_linear_from_invariant(tilde, q))
    # Int_0 of the shifted element; it degenerates for r - 2 <= 0
    int0_tilde = int_geometric_quarter(tilde, q, window).int0 if tilde.r > 0 else 0
    N = sum(1 for n in window.n.values() if n >= 0)
    field_const = 1 if inv.is_field else 0
    direct = int0_tilde + q * N + field_const
    ledger = _threequarter_ledger(inv, q, window)
    art_total = ledger["superspecial"] + ledger["boundary"]
    via_ledger = int0_tilde + art_total - ledger["tilde_artinian"]
    if direct != via_ledger:
        raise InternalInvariantError(
            f"3/4 assemblies disagree at {inv}: {direct} vs {via_ledger}")
    details = dict(ledger)
    details.update({"int0_tilde": int0_tilde, "N": N, "via_ledger": via_ledger})
    return IntResult(THREE_QUARTERS, inv, q, doubling * direct, direct,
                     direct - art_total, art_total, doubling, details)


# ---------------------------------------------------------------------------
# local lengths

@dataclass(frozen=True)
class LengthRecord:
    tag: str
    ring: str
    ideal: str
    pure: str
    length: int


# ring "node": k[[u, v]] with pi = u*v;  ring "smooth": k[[pi, t]].
# Polynomials are dicts {(i, j): coeff} in the two variables.
def _mono(i, j, c=1):
    return {(i, j): c}


def _add(*polys):
    out = {}
    for p in polys:
        for k, c in p.items():
            out[k] = out.get(k, 0) + c
    return {k: c for k, c in out.items() if c}


def _neg(p):
    return {k: -c for k, c in p.items()}


def _ideal_table(q: int) -> dict:
    """Generators of the ideal and of its pure part for each tag."""
    u, v = _mono(1, 0), _mono(0, 1)
    pi = _mono(1, 1)
    return {
        "quarter": ("smooth", [_mono(1, 0), _mono(0, 1)], None, "(pi, t)"),
        "row1": ("smooth", [_mono(1, 0), _mono(0, 1)], None, "(pi, t)"),
        "row2": ("node", [u, v], None, "(u, v)"),
        "row3": ("node", [u, _mono(0, q)], None, "(u, v^q)"),
        "row4": ("node", [_add(pi, _neg(_mono(q + 1, 0))),
                          _add(pi, _neg(_mono(0, q + 1)))], None,
                 "(pi - u^(q+1), pi - v^(q+1))"),
        "row5": ("node", [pi, _mono(0, q + 1)], [v], "(pi, v^(q+1))"),
    }


ARTINIAN_TAGS = ("quarter", "row1", "row2", "row3", "row4", "row5")


def _pi_power(ring: str, j: int):
    return _mono(j, 0) if ring == "smooth" else _mono(j, j)


def _mul(p, r):
    out = {}
    for (i1, j1), c1 in p.items():
        for (i2, j2), c2 in r.items():
            k = (i1 + i2, j1 + j2)
            out[k] = out.get(k, 0) + c1 * c2
    return {k: c for k, c in out.items() if c}


def _truncated_rank(gens, N: int, p: int) -> int:
    """Dimension of ``(I + m^N) / m^N`` over ``GF(p)``."""
    from sympy import GF
    from sympy.polys.matrices import DomainMatrix

    monos = [(i, d - i) for d in range(N) for i in range(d + 1)]
    col = {m: k for k, m in enumerate(monos)}
    K = GF(p)
    rows = []
    for g in gens:
        low = min(i + j for i, j in g)
        for d in range(N - low):
            for i in range(d + 1):
                row = [K(0)] * len(monos)
                nz = False
                for (a, b), c in g.items():
                    key = (a + i, b + d - i)
                    if key in col and c % p:
                        row[col[key]] = K(c)
                        nz = True
                if nz:
                    rows.append(row)
    if not rows:
        return 0
    return DomainMatrix(rows, (len(rows), len(monos)), K).rank()


def colength(ring: str, ideal, pure, p: int, N: int | None = None) -> int:
    """``len(J / I)`` where ``J`` is ``pure`` (the unit ideal when
    ``None``), computed by truncation at ``m^N`` for two consecutive
    values of ``N`` that must agree."""
    if pure is None:
        pure = [_mono(0, 0)]
    deg = max(i + j for g in ideal for (i, j) in g)
    if N is None:
        N = 2 * deg + 6
    vals = []
    for M in (N, N + 2):
        vals.append(_truncated_rank(pure, M, p) - _truncated_rank(ideal, M, p))
    if vals[0] != vals[1]:
        raise InternalInvariantError(f"colength not stable: {vals}")
    return vals[0]


@lru_cache(maxsize=None)
def artinian_length(tag: str, q: int, scaling: int = 0) -> LengthRecord:
    """Length of the embedded component of type ``tag``.

    ``scaling = j`` replaces the ideal ``I`` and its pure part ``J`` by
    ``pi^j I`` and ``pi^j J``; the embedded length must not change.
    """
    table = _ideal_table(q)
    if tag not in table:
        raise ValueError(f"unknown length tag {tag!r}; expected one of {ARTINIAN_TAGS}")
    ring, gens, pure, desc = table[tag]
    p, _ = prime_power_decomposition(q)
    if scaling:
        s = _pi_power(ring, scaling)
        gens = [_mul(s, g) for g in gens]
        pure = [_mul(s, g) for g in (pure or [_mono(0, 0)])]
    length = colength(ring, gens, pure, p)
    pure_desc = "(v)" if tag == "row5" else "(1)"
    if scaling:
        desc = f"pi^{scaling} {desc}"
        pure_desc = f"pi^{scaling} {pure_desc}"
    return LengthRecord(tag, ring, desc, pure_desc, length)


def scaled_lengths(tag: str, q: int, scalings=(0, 1, 2, 3)) -> list:
    """Lengths of ``tag`` under ``I -> pi^j I`` for each ``j``."""
    return [artinian_length(tag, q, j).length for j in scalings]
