"""Orbital integrals of the parahoric, Iwahori and normalised test functions.

All integrals are :class:`~gl4transfer.laurent.LaurentPoly` values in
``u = q^s``.  There are two independent routes:

* :func:`orbital_closed` assembles the integral from closed forms:
  hyperbolic formulas for split ``L`` and the germ expansion
  ``sign * (principal + i(L) * unipotent)`` for fields, where the
  unipotent germ is read off from a split element with the same
  ``(r, d)``;
* :func:`orbital_brute` enumerates the lattice quadruples (Iwahori) or
  pairs (parahoric) attached to a concrete element ``w``.

``X`` always denotes ``-q^(-2s) = -u^(-2)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .errors import CertificateError, InternalInvariantError, InvalidInvariantError
from .laurent import LaurentPoly, from_X_series, sign_prefactor
from .latcount import phi, xi, xi_prime
from .lattices import (apply_element, contains, scale, sublattices_between,
                       unit_conductor_orbit)
from .localfield import NumInvariant, QuadElem, i_index, is_regular

__all__ = [
    "FNS", "orb_gl2_plus", "orb_hyperbolic", "principal_germ",
    "unipotent_germ", "orbital_closed", "orbital_brute", "brute_counts",
    "functional_equation_check", "reference_table", "ReferenceValues",
    "germ_pair", "GermPair", "brute_germs", "BruteCounts",
]

FNS = ("par", "iw", "d")


def _check_fn(fn: str, allowed=FNS) -> str:
    fn = fn.lower()
    if fn not in allowed:
        raise ValueError(f"test function must be one of {allowed}, got {fn!r}")
    return fn


def _geometric_X(n: int) -> list:
    """Terms of ``1 + X + ... + X^(n-1)``."""
    return [(1, i) for i in range(n)]


def orb_gl2_plus(v_alpha: int, q: int) -> LaurentPoly:
    """``u^v (X^v - 1)/(X - 1)`` for ``v > 0``, else ``0``."""
    if v_alpha <= 0:
        return LaurentPoly()
    return from_X_series(_geometric_X(v_alpha)).shift(v_alpha)


def orb_hyperbolic(fn: str, v_alpha: int, v_beta: int, v_diff: int,
                   q: int) -> LaurentPoly:
    """Closed form for a split element with eigenvalue valuations
    ``v_alpha``, ``v_beta`` and ``v(alpha - beta) = v_diff``."""
    fn = _check_fn(fn, ("par", "iw"))
    if v_alpha <= 0 or v_beta <= 0:
        return LaurentPoly()
    terms = {}
    for i in range(v_alpha):
        for j in range(v_beta):
            terms[i + j] = terms.get(i + j, 0) + 1
    par = from_X_series((c, m) for m, c in terms.items())
    par = par.shift(v_alpha + v_beta).scale(Fraction(q) ** (v_diff - 1))
    if fn == "par":
        return par
    return par * from_X_series([(1, 1), (1, 0)]).scale(2 * q)


def _principal_terms(fn: str, kind: str, r: int, d2: int, q: int) -> list:
    """Principal germ as ``(coefficient, X-exponent)`` terms."""
    if r <= 0:
        return []
    h2 = r + d2  # 2 * (r/2 + d)
    if fn == "iw":
        if kind == "inert":
            return []
        if d2 >= 0:
            a, b = r // 2 - 1, r // 2
            count = lambda k: xi(a, b, k, q)  # noqa: E731
        elif kind == "ramified":
            a = b = (r - 1) // 2
            count = lambda k: xi(a, b, k, q)  # noqa: E731
        else:
            if h2 // 2 < 1:
                return []  # w is not topologically nilpotent
            a, b = h2 // 2, (r - d2) // 2 - 1
            count = lambda k: xi_prime(a, b, k, q)  # noqa: E731
        mult = 2 if kind == "split" else 1
        return [(mult * count(k), -k - 1) for k in range(r)]
    # parahoric
    if d2 >= 0:
        a = b = r // 2 - 1
    else:
        if h2 <= 0:
            return []
        a, b = (r + d2) // 2 - 1, (r - d2) // 2 - 1
    if a < 0:
        return []
    return [(phi(a, b, k, q), -k - 2) for k in range(r - 1)]


def principal_germ(fn: str, kind: str, r: int, d2: int, q: int) -> LaurentPoly:
    """Principal germ (Iwahori or parahoric) of the invariant ``(kind, r, d)``."""
    fn = _check_fn(fn, ("par", "iw"))
    NumInvariant(kind, r, d2).validate()
    return from_X_series(_principal_terms(fn, kind, r, d2, q))


def unipotent_germ(fn: str, r: int, d2: int, q: int) -> LaurentPoly:
    """Unipotent germ of ``(r, d)``, computed from the split algebra:
    ``(sign^-1 * Orb_split - P_split) / (q - 1)``."""
    fn = _check_fn(fn, ("par", "iw"))
    inv = NumInvariant("split", r, d2).validate()
    va, vb, vdiff = inv.split_valuations()
    orb = orb_hyperbolic(fn, va, vb, vdiff, q)
    p_split = principal_germ(fn, "split", r, d2, q)
    unsigned = orb * sign_prefactor(-r)
    return (unsigned - p_split).divide_exact(q - 1)


@dataclass(frozen=True)
class GermPair:
    principal: LaurentPoly
    unipotent: LaurentPoly
    i_L: int

    def assemble(self, r: int) -> LaurentPoly:
        return sign_prefactor(r) * (self.principal + self.unipotent.scale(self.i_L))


def germ_pair(fn: str, inv: NumInvariant, q: int) -> GermPair:
    """Principal and unipotent germ of ``inv`` together with ``i(L)``.

    For a ramified invariant ``d = -1/2`` the unipotent germ comes from
    the split invariant with the same ``(r, 2d)``.
    """
    inv.validate()
    fn = _check_fn(fn, ("par", "iw"))
    return GermPair(principal_germ(fn, inv.kind, inv.r, inv.d2, q),
                    unipotent_germ(fn, inv.r, inv.d2, q),
                    i_index(inv.kind, q))


def orbital_closed(fn: str, inv: NumInvariant, q: int) -> LaurentPoly:
    """Closed-form orbital integral of ``fn`` in ``{"par", "iw", "d"}``."""
    fn = _check_fn(fn)
    inv.validate()
    if fn == "d":
        return orbital_closed("iw", inv, q).shift(-1)
    return _orbital_closed_cached(fn, inv, q)


@lru_cache(maxsize=None)
def _orbital_closed_cached(fn: str, inv: NumInvariant, q: int) -> LaurentPoly:
    if inv.r <= 0:
        return LaurentPoly()
    if inv.kind == "split":
        va, vb, vdiff = inv.split_valuations()
        result = orb_hyperbolic(fn, va, vb, vdiff, q)
    else:
        result = germ_pair(fn, inv, q).assemble(inv.r)
    if not result.is_integral():
        raise InternalInvariantError(
            f"non-integral orbital integral for {fn} at {inv}: {result}")
    return result


# ---------------------------------------------------------------------------
# brute force

@dataclass
class BruteCounts:
    """Lattice-count data of one enumeration: ``total`` and ``principal``
    map ``[Lambda_0 : Lambda_1]`` to a count; ``by_conductor`` records
    the total count contributed by each conductor of ``Lambda_0``."""

    r: int
    total: dict = field(default_factory=dict)
    principal: dict = field(default_factory=dict)
    by_conductor: dict = field(default_factory=dict)

    def add(self, idx: int, conductor: int, principal: bool):
        self.total[idx] = self.total.get(idx, 0) + 1
        if principal:
            self.principal[idx] = self.principal.get(idx, 0) + 1
        self.by_conductor[conductor] = self.by_conductor.get(conductor, 0) + 1

    def poly(self, which: str = "total") -> LaurentPoly:
        counts = getattr(self, which)
        return from_X_series((c, -k) for k, c in counts.items())


def _default_cmax(w: QuadElem) -> int:
    # any lattice stable under w is stable under O_F[w] = O_F + y O_F zeta,
    # whose conductor is v(y); two empty levels beyond it certify the bound
    return max(int(w.y.valuation()) + 2, 1)


def brute_counts(fn: str, w: QuadElem, c_max: int | None = None) -> BruteCounts:
    """Enumerate the lattice configurations of ``w`` for ``fn``.

    ``Lambda_0`` runs over the lattices of conductor ``0 .. c_max`` with
    ``O_L Lambda_0 = O_L``; levels ``c_max`` and ``c_max - 1`` must be
    empty, which certifies that no larger conductor contributes.
    """
    fn = _check_fn(fn, ("par", "iw"))
    if not is_regular(w):
        raise InvalidInvariantError("w must be regular (w, 1 - w units, w not in F)")
    alg = w.alg
    r = int(w.norm().valuation())
    if c_max is None:
        c_max = _default_cmax(w)
    out = BruteCounts(r)
    for c in range(c_max + 1):
        before = sum(out.total.values())
        for L0 in unit_conductor_orbit(alg, c):
            wL0 = apply_element(w, L0)
            if not contains(L0, wL0):
                continue
            piL0 = scale(L0, 1)
            if fn == "par":
                if not contains(piL0, wL0):
                    continue
                total = wL0.det_valuation() - piL0.det_valuation()
                for k in range(total + 1):
                    for _ in sublattices_between(piL0, wL0, k):
                        out.add(k + 2, c, c == 0)
                continue
            for L0b in sublattices_between(L0, piL0, 1):
                if not contains(L0b, wL0):
                    continue
                wL0b = apply_element(w, L0b)
                if not contains(piL0, wL0b):
                    continue
                flat_principal = c == 0 and _conductor_zero(alg, L0b)
                total = wL0.det_valuation() - L0b.det_valuation()
                for k in range(total + 1):
                    for L1 in sublattices_between(L0b, wL0, k):
                        for L1b in sublattices_between(L1, wL0b, 1):
                            if contains(piL0, L1b):
                                out.add(k + 1, c, flat_principal)
        level = sum(out.total.values()) - before
        if c >= c_max - 1 and level:
            raise CertificateError(
                f"conductor {c} still contributes {level} terms; raise c_max")
    return out


def _conductor_zero(alg, L) -> bool:
    """True if the multiplier order of ``L`` is ``O_L``."""
    from .lattices import multiplier_conductor
    return multiplier_conductor(alg, L) == 0


def orbital_brute(fn: str, w: QuadElem, q: int | None = None,
                  c_max: int | None = None) -> LaurentPoly:
    """Orbital integral of ``fn`` at ``w`` by direct lattice enumeration."""
    fn = _check_fn(fn)
    if fn == "d":
        return orbital_brute("iw", w, q, c_max).shift(-1)
    counts = brute_counts(fn, w, c_max)
    return sign_prefactor(counts.r) * counts.poly()


def brute_germs(fn: str, w: QuadElem, c_max: int | None = None) -> GermPair:
    """Germ decomposition read off the enumeration: configurations whose
    ``Lambda_0`` and flag lattice both have multiplier ring ``O_L`` give
    the principal germ, the rest divided by ``i(L)`` the unipotent one."""
    fn = _check_fn(fn, ("par", "iw"))
    counts = brute_counts(fn, w, c_max)
    i_L = i_index(w.alg.kind, w.alg.q)
    principal = counts.poly("principal")
    return GermPair(principal, (counts.poly() - principal).divide_exact(i_L), i_L)


# ---------------------------------------------------------------------------
# functional equations and reference values

def functional_equation_check(fn: str, inv: NumInvariant, p: LaurentPoly,
                              q: int | None = None) -> bool:
    """Check ``reflect(p) = eps * u^shift * p`` for the sign and shift of
    ``fn``: ``d``: ``(-1)^(r+1)``, ``u^0``; ``iw``: ``(-1)^(r+1)``,
    ``u^-2``; ``par``: ``(-1)^r``, ``u^-4``."""
    fn = _check_fn(fn)
    r = inv.r
    odd = r % 2 == 1
    if fn == "par":
        eps, shift = (-1 if odd else 1), -4
    else:
        eps, shift = (1 if odd else -1), (-2 if fn == "iw" else 0)
    return p.reflect() == p.shift(shift).scale(eps)


@dataclass(frozen=True)
class ReferenceValues:
    orb_par_central: int
    orb_iw_central: int
    d_iw_coeff: int
    d_orb_coeff: int


def _sum_q(exps, q):
    return sum(q ** e for e in exps)


def reference_table(inv: NumInvariant, q: int) -> ReferenceValues:
    """Tabulated central values and derivative coefficients.

    The split parahoric value is ``q^(v(alpha - beta) - 1)`` when the
    eigenvalue valuations are odd and ``0`` when they are even.
    """
    inv.validate()
    r, d2, kind = inv.r, inv.d2, inv.kind
    h = (r + d2) // 2 if (r + d2) % 2 == 0 else None  # r/2 + d when integral
    # parahoric central value
    if r % 2 or r <= 0 or h is None or h <= 0:
        par = 0
    elif kind == "split":
        va, _, vdiff = inv.split_valuations()
        par = q ** (vdiff - 1) if va % 2 else 0
    else:
        d = d2 // 2
        half = r // 2
        if r % 4 == 0:
            base = _sum_q(range(0, half - 1, 2), q)  # 1 + q^2 + ... + q^(r/2-2)
            par = base if kind == "ramified" else 2 * base
        else:
            base = _sum_q(range(0, half - 2, 2), q)  # 1 + ... + q^(r/2-3)
            if kind == "ramified":
                par = base + _sum_q(range(half - 1, half + d), q)
            else:
                par = 2 * base + 2 * _sum_q(range(half - 1, half + d - 1), q) \
                    + q ** (half + d - 1)
    iw = 1 if (kind == "ramified" and r % 2 == 1 and r >= 1) else 0
    if r % 2:
        d_iw, d_d = iw, 0
    elif r <= 0:
        d_iw = d_d = 0
    else:
        extra = {"inert": 2 * r, "ramified": r, "split": 0}[kind]
        d_iw = d_d = 4 * q * par + extra
    return ReferenceValues(par, iw, d_iw, d_d)
