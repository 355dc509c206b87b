"""Arithmetic in ``F = GF(q)((pi))`` and its quadratic etale algebras.

Every quadratic algebra is presented as ``L = F[zeta]/(zeta^2 - t*zeta + n)``
with ``O_L = O_F + O_F*zeta``:

* inert:    ``zeta`` generates ``GF(q^2)`` over ``GF(q)``, ``t, n`` in ``GF(q)``;
* ramified: ``zeta`` is a square root of ``pi`` (``t = 0``, ``n = -pi``);
  only for odd ``q``;
* split:    ``zeta = (1, 0)`` is an idempotent of ``F x F`` (``t = 1``,
  ``n = 0``); the pair ``(a, b)`` is ``b + (a - b)*zeta``.

An element ``x + y*zeta`` is a :class:`QuadElem`.  Numerical invariants
``(kind, r, d)`` store ``d`` as the integer ``d2 = 2d``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import InvalidInvariantError, NotRealizableError, PrecisionError
from .finitefield import gf, gf2_over
from .series import INF, Series

__all__ = [
    "KINDS", "NumInvariant", "QuadAlgebra", "QuadElem", "algebra",
    "numerical_invariant", "element_from_invariant", "block_invariant",
    "epsilon_sign", "matching_exists", "i_index", "default_precision",
    "valid_invariants", "is_regular",
]

KINDS = ("split", "inert", "ramified")
_SHORT = {"split": "split", "inert": "inert", "ramified": "ram"}
_FROM_SHORT = {"split": "split", "inert": "inert", "ram": "ramified",
               "ramified": "ramified"}


def default_precision(r: int, d2: int) -> int:
    """Working precision used for computations around ``(kind, r, d2)``."""
    return 4 * (abs(r) + abs(d2) + 8)


@dataclass(frozen=True, order=True)
class NumInvariant:
    kind: str
    r: int
    d2: int

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidInvariantError(f"unknown kind {self.kind!r}")

    @property
    def d(self) -> Fraction:
        return Fraction(self.d2, 2)

    def is_valid(self) -> bool:
        r, d2 = self.r, self.d2
        if d2 >= 0:
            return r % 2 == 0 and d2 % 2 == 0
        if self.kind == "ramified":
            return d2 == -1 and r % 2 == 1
        if self.kind == "split":
            return (r - d2) % 2 == 0
        return False

    def validate(self) -> "NumInvariant":
        if not self.is_valid():
            raise InvalidInvariantError(f"invalid numerical invariant {self}")
        return self

    @property
    def is_field(self) -> bool:
        return self.kind != "split"

    def split_valuations(self) -> tuple[int, int, int]:
        """``(v(alpha), v(beta), v(alpha - beta))`` of a split element with
        the same ``(r, d)``: the two component valuations and the valuation
        of their difference."""
        r, d2 = self.r, self.d2
        if d2 < 0:
            va, vb = (r + d2) // 2, (r - d2) // 2
            return va, vb, va
        return r // 2, r // 2, (r + d2) // 2

    def __str__(self):
        return f"{_SHORT[self.kind]}:{self.r}:{self.d2}"

    @classmethod
    def parse(cls, text: str) -> "NumInvariant":
        m = re.fullmatch(r"\s*([a-z]+):(-?\d+):(-?\d+)\s*", text)
        if not m or m.group(1) not in _FROM_SHORT:
            raise InvalidInvariantError(f"cannot parse invariant {text!r}")
        return cls(_FROM_SHORT[m.group(1)], int(m.group(2)), int(m.group(3)))


def valid_invariants(r_range, d2_max: int, kinds=KINDS):
    """All valid invariants with ``r`` in ``r_range`` and ``|d2| <= d2_max``,
    in a fixed order (kind, then r, then d2)."""
    out = []
    for kind in kinds:
        for r in r_range:
            for d2 in range(-d2_max, d2_max + 1):
                inv = NumInvariant(kind, r, d2)
                if inv.is_valid():
                    out.append(inv)
    return out


class QuadAlgebra:
    """The algebra ``F[zeta]/(zeta^2 - t*zeta + n)`` of a given kind."""

    def __init__(self, kind: str, q: int):
        if kind not in KINDS:
            raise ValueError(f"unknown kind {kind!r}")
        K = gf(q)
        self.kind, self.q, self.K = kind, q, K
        if kind == "split":
            t, n = Series.const(K, 1), Series.zero(K)
        elif kind == "inert":
            _, t0, n0 = gf2_over(q)
            t, n = Series.const(K, t0), Series.const(K, n0)
        else:
            if q % 2 == 0:
                raise NotRealizableError("ramified algebras need odd q")
            t, n = Series.zero(K), Series.mono(K, K.neg[1], 1)
        self.t, self.n = t, n

    def elem(self, x: Series, y: Series) -> "QuadElem":
        return QuadElem(self, x, y)

    def from_F(self, x: Series) -> "QuadElem":
        return QuadElem(self, x, Series.zero(self.K))

    def one(self):
        return self.from_F(Series.const(self.K, 1))

    def zeta(self):
        return QuadElem(self, Series.zero(self.K), Series.const(self.K, 1))

    def pi(self, k: int = 1):
        return self.from_F(Series.mono(self.K, 1, k))

    def split_pair(self, a: Series, b: Series) -> "QuadElem":
        """The element ``(a, b)`` of ``F x F``."""
        if self.kind != "split":
            raise ValueError("split_pair needs the split algebra")
        return QuadElem(self, b, a - b)

    def i_index(self) -> int:
        return i_index(self.kind, self.q)

    def __repr__(self):
        return f"QuadAlgebra({self.kind}, q={self.q})"


@lru_cache(maxsize=None)
def algebra(kind: str, q: int) -> QuadAlgebra:
    return QuadAlgebra(kind, q)


class QuadElem:
    __slots__ = ("alg", "x", "y")

    def __init__(self, alg: QuadAlgebra, x: Series, y: Series):
        self.alg, self.x, self.y = alg, x, y

    def __add__(self, o):
        return QuadElem(self.alg, self.x + o.x, self.y + o.y)

    def __sub__(self, o):
        return QuadElem(self.alg, self.x - o.x, self.y - o.y)

    def __neg__(self):
        return QuadElem(self.alg, -self.x, -self.y)

    def __mul__(self, o):
        if isinstance(o, Series):
            return QuadElem(self.alg, self.x * o, self.y * o)
        t, n = self.alg.t, self.alg.n
        yy = self.y * o.y
        x = self.x * o.x - n * yy
        y = self.x * o.y + o.x * self.y + t * yy
        return QuadElem(self.alg, x, y)

    def conjugate(self):
        return QuadElem(self.alg, self.x + self.alg.t * self.y, -self.y)

    def norm(self) -> Series:
        x, y, t, n = self.x, self.y, self.alg.t, self.alg.n
        return x * x + t * x * y + n * y * y

    def trace(self) -> Series:
        return self.x + self.x + self.alg.t * self.y

    def inverse(self, prec: int):
        nm = self.norm()
        return self.conjugate() * nm.inverse(prec)

    def valuation(self):
        """Largest ``k`` with ``self`` in ``pi^k O_L``."""
        return min(self.x.valuation(), self.y.valuation())

    def norm_valuation(self):
        return self.norm().valuation()

    def components(self):
        """The pair ``(a, b)`` for an element of the split algebra."""
        if self.alg.kind != "split":
            raise ValueError("components only exist for the split algebra")
        return self.x + self.y, self.x

    def matrix(self):
        """Regular representation on the basis ``(1, zeta)``; rows of
        a 2x2 matrix whose columns are the images of ``1`` and ``zeta``."""
        t, n = self.alg.t, self.alg.n
        return ((self.x, -(n * self.y)), (self.y, self.x + t * self.y))

    def is_zero(self) -> bool:
        return self.x.is_zero() and self.y.is_zero()

    def __eq__(self, o):
        return isinstance(o, QuadElem) and self.alg is o.alg and \
            self.x == o.x and self.y == o.y

    def __hash__(self):
        return hash((self.alg.kind, self.x, self.y))

    def __repr__(self):
        return f"QuadElem[{self.alg.kind}]({self.x!r}, {self.y!r})"


def is_regular(w: QuadElem) -> bool:
    """``w`` and ``1 - w`` are units of ``L`` and ``w`` is not in ``F``."""
    if w.y.is_zero():
        return False
    one = w.alg.one()
    return w.norm_valuation() != INF and (one - w).norm_valuation() != INF


def numerical_invariant(w: QuadElem) -> NumInvariant:
    """The triple ``(kind, r, d)`` of ``w``.

    ``r = v(N w)``.  If ``s = pi^k w = x + y*zeta`` is integral, the order
    ``O_F[s]`` has conductor ``v(y) + k``, so ``d = v(y) - r/2`` for every
    admissible ``k``.
    """
    if w.y.is_zero():
        raise InvalidInvariantError("w lies in F and has no quadratic invariant")
    r = w.norm().valuation()
    if r == INF:
        raise InvalidInvariantError("w is a zero divisor")
    vy = w.y.valuation()
    return NumInvariant(w.alg.kind, int(r), int(2 * vy - r))


def element_from_invariant(inv: NumInvariant, q: int) -> QuadElem:
    """A canonical ``w`` with ``numerical_invariant(w) == inv``.

    Templates (``h = r/2``):

    * ``d >= 0``: ``pi^h (a + pi^d zeta)`` with ``a = 0`` for inert ``d = 0``
      and ``a = 1`` otherwise; split: ``(c pi^h, c pi^h (1 + pi^d))`` for
      ``d > 0`` and ``(c pi^h, 2 c pi^h)`` for ``d = 0``, where ``2`` is the
      field element encoded by that integer (``1 + 1`` for odd ``q``);
    * ramified ``d = -1/2``: ``pi^((r-1)/2) zeta``;
    * split ``d < 0``: ``(c pi^(h+d), c pi^(h-d))``.

    The split scalar ``c`` is ``1 + pi`` when a component would otherwise
    be ``1`` (then ``1 - w`` is a zero divisor), else ``1``.  The split
    case ``d = 0`` needs two distinct nonzero residues, so it does not
    exist for ``q = 2``.
    """
    inv.validate()
    alg = algebra(inv.kind, q)
    K = alg.K
    r, d2 = inv.r, inv.d2
    one = Series.const(K, 1)
    pi = lambda k: Series.mono(K, 1, k)  # noqa: E731
    if inv.kind == "split":
        va, vb, vdiff = inv.split_valuations()
        if d2 == 0 and q == 2:
            raise NotRealizableError("split invariant with d = 0 needs q > 2")
        c = one + pi(1) if 0 in (va, vb) else one
        if d2 > 0:
            a = c * pi(va)
            b = c * pi(vb) * (one + pi(d2 // 2))
        elif d2 == 0:
            # a residue other than 0 and 1: the digit 2 is 1 + 1 in odd
            # characteristic and a generator of GF(q) over GF(2) otherwise
            a, b = c * pi(va), c * pi(vb) * Series.const(K, 2)
        else:
            a, b = c * pi(va), c * pi(vb)
        w = alg.split_pair(a, b)
    elif d2 >= 0:
        h, d = r // 2, d2 // 2
        a = Series.zero(K) if (inv.kind == "inert" and d == 0) else one
        w = alg.elem(a * pi(h), pi(h + d))
    else:
        w = alg.elem(Series.zero(K), pi((r - 1) // 2))
    got = numerical_invariant(w)
    if got != inv or not is_regular(w):  # pragma: no cover - template bug
        raise NotRealizableError(f"template for {inv} produced {got}")
    return w


def block_invariant(v, w, x, y, prec: int = 64):
    """Characteristic polynomial of ``v^-1 w y^-1 x`` for 2x2 blocks.

    Blocks are row tuples of :class:`Series`.  Returns ``(c0, c1)`` with
    the polynomial ``T^2 + c1 T + c0``.
    """
    def mul(A, B):
        return tuple(tuple(A[i][0] * B[0][j] + A[i][1] * B[1][j]
                           for j in range(2)) for i in range(2))

    def inv(A):
        det = A[0][0] * A[1][1] - A[0][1] * A[1][0]
        if det.lower_bound() >= prec:
            raise PrecisionError("block not invertible at working precision")
        di = det.inverse(prec)
        return ((A[1][1] * di, -(A[0][1] * di)), (-(A[1][0] * di), A[0][0] * di))

    M = mul(mul(inv(v), w), mul(inv(y), x))
    tr = M[0][0] + M[1][1]
    det = M[0][0] * M[1][1] - M[0][1] * M[1][0]
    return det, -tr


def epsilon_sign(n: int, lam: Fraction, r: int) -> int:
    """Sign of the functional equation: ``(-1)^r`` times ``+1`` if
    ``n * lam`` is an integer and ``-1`` otherwise."""
    eta = -1 if r % 2 else 1
    return eta * (1 if Fraction(lam) * n == int(Fraction(lam) * n) else -1)


def matching_exists(lam: Fraction, inv: NumInvariant) -> bool:
    """Whether an element of the degree-4 division algebra of invariant
    ``lam`` matches ``inv``.

    Odd ``r`` never matches; field kinds with even ``r`` always do.  For
    split ``L`` the two component valuations (see
    :meth:`NumInvariant.split_valuations`) share a parity;
    ``lam = 1/4`` needs it even and ``lam = 3/4`` needs it odd.
    """
    inv.validate()
    lam = Fraction(lam)
    if lam not in (Fraction(1, 4), Fraction(3, 4)):
        raise ValueError(f"unsupported Hasse invariant {lam}")
    if inv.r % 2:
        return False
    if inv.is_field:
        return True
    parity = inv.split_valuations()[0] % 2
    return parity == 0 if lam == Fraction(1, 4) else parity == 1


def i_index(kind: str, q: int) -> int:
    """Index of ``(O_F + pi O_L)^x`` in ``O_L^x``."""
    return {"inert": q + 1, "ramified": q, "split": q - 1}[kind]
