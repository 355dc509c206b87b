"""Truncated Laurent series over a finite field.

A :class:`Series` stores ``sum(c[i] * pi**(val + i))`` together with an
absolute precision ``prec``: the value is known modulo ``pi**prec``.  A
precision of ``None`` marks an exact finite Laurent polynomial, which is
the common case (all canonical elements and lattice bases are
polynomials); truncation only enters through inverses of non-monomial
units.  Any question whose answer depends on unknown digits raises
:class:`~gl4transfer.errors.PrecisionError`.
"""

from __future__ import annotations

import math

from .errors import PrecisionError
from .finitefield import FiniteField

__all__ = ["Series", "INF"]

INF = math.inf


def _min_prec(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


class Series:
    __slots__ = ("K", "val", "c", "prec")

    def __init__(self, K: FiniteField, val: int, coeffs, prec=None):
        # normalise: strip leading and trailing zeros, drop digits >= prec
        coeffs = list(coeffs)
        if prec is not None and val + len(coeffs) > prec:
            coeffs = coeffs[:max(0, prec - val)]
        lo = 0
        while lo < len(coeffs) and coeffs[lo] == 0:
            lo += 1
        hi = len(coeffs)
        while hi > lo and coeffs[hi - 1] == 0:
            hi -= 1
        self.K = K
        self.c = tuple(coeffs[lo:hi])
        self.val = val + lo if self.c else None
        self.prec = prec

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls, K, prec=None):
        return cls(K, 0, (), prec)

    @classmethod
    def const(cls, K, a: int):
        return cls(K, 0, (a,))

    @classmethod
    def mono(cls, K, a: int, e: int):
        """The exact monomial ``a * pi**e``."""
        return cls(K, e, (a,))

    @classmethod
    def from_dict(cls, K, terms: dict, prec=None):
        if not terms:
            return cls(K, 0, (), prec)
        lo, hi = min(terms), max(terms)
        return cls(K, lo, [terms.get(e, 0) for e in range(lo, hi + 1)], prec)

    @classmethod
    def from_ints(cls, K, val: int, ints, prec=None):
        """Series whose digits are the images of the integers ``ints``."""
        return cls(K, val, [K.from_int(n) for n in ints], prec)

    # -- inspection ---------------------------------------------------
    def is_exact(self) -> bool:
        return self.prec is None

    def is_zero(self) -> bool:
        """True only if the series is provably zero."""
        return not self.c and self.prec is None

    def lower_bound(self):
        """A lower bound for the valuation (``INF`` for exact zero)."""
        if self.c:
            return self.val
        return INF if self.prec is None else self.prec

    def valuation(self):
        if self.c:
            return self.val
        if self.prec is None:
            return INF
        raise PrecisionError(f"valuation undetermined below precision {self.prec}")

    def coeff(self, e: int) -> int:
        if self.prec is not None and e >= self.prec:
            raise PrecisionError(f"digit {e} beyond precision {self.prec}")
        if not self.c or e < self.val or e >= self.val + len(self.c):
            return 0
        return self.c[e - self.val]

    def lead(self) -> int:
        self.valuation()
        return self.c[0]

    def degree(self):
        """Largest exponent with a nonzero stored digit (exact series only)."""
        return self.val + len(self.c) - 1 if self.c else None

    # -- arithmetic ---------------------------------------------------
    def __neg__(self):
        neg = self.K.neg
        return Series(self.K, self.val or 0, [neg[a] for a in self.c], self.prec)

    def _combine(self, other, op):
        if not isinstance(other, Series):
            return NotImplemented
        prec = _min_prec(self.prec, other.prec)
        if not other.c:
            return Series(self.K, self.val or 0, self.c, prec)
        if not self.c:
            if op is self.K.add:
                return Series(self.K, other.val, other.c, prec)
            return Series(self.K, other.val, [self.K.neg[a] for a in other.c], prec)
        lo = min(self.val, other.val)
        hi = max(self.val + len(self.c), other.val + len(other.c))
        if prec is not None:
            hi = min(hi, prec)
        if hi <= lo:
            return Series(self.K, 0, (), prec)
        out = [0] * (hi - lo)
        for i, a in enumerate(self.c):
            k = self.val - lo + i
            if k < len(out):
                out[k] = a
        for i, b in enumerate(other.c):
            k = other.val - lo + i
            if k < len(out):
                out[k] = op[out[k]][b]
        return Series(self.K, lo, out, prec)

    def __add__(self, other):
        return self._combine(other, self.K.add)

    def __sub__(self, other):
        return self._combine(other, self.K.sub)

    def __mul__(self, other):
        if not isinstance(other, Series):
            return NotImplemented
        K = self.K
        prec = None
        if self.prec is not None or other.prec is not None:
            cands = []
            if self.prec is not None:
                cands.append(self.prec + other.lower_bound())
            if other.prec is not None:
                cands.append(other.prec + self.lower_bound())
            prec = min(cands)
            if prec == INF:
                prec = None
            elif prec == -INF:  # pragma: no cover - both factors unknown zeros
                raise PrecisionError("product of two undetermined zeros")
        if not self.c or not other.c:
            return Series(K, 0, (), prec)
        n = len(self.c) + len(other.c) - 1
        if prec is not None:
            n = min(n, prec - self.val - other.val)
        if n <= 0:
            return Series(K, 0, (), prec)
        out = [0] * n
        add, mul = K.add, K.mul
        oc = other.c
        for i, a in enumerate(self.c):
            if i >= n:
                break
            row = mul[a]
            for j in range(min(len(oc), n - i)):
                b = oc[j]
                if b:
                    out[i + j] = add[out[i + j]][row[b]]
        return Series(K, self.val + other.val, out, prec)

    def scale(self, a: int):
        """Multiply by the field element ``a``."""
        if a == 0:
            return Series(self.K, 0, (), self.prec)
        row = self.K.mul[a]
        return Series(self.K, self.val or 0, [row[x] for x in self.c], self.prec)

    def shift(self, k: int):
        """Multiply by ``pi**k``."""
        prec = None if self.prec is None else self.prec + k
        return Series(self.K, (self.val or 0) + k, self.c, prec)

    def truncate(self, n: int):
        """Exact polynomial of the digits below ``pi**n``."""
        if self.prec is not None and self.prec < n:
            raise PrecisionError(f"need precision {n}, have {self.prec}")
        if not self.c:
            return Series(self.K, 0, ())
        return Series(self.K, self.val, self.c[:max(0, n - self.val)])

    def with_prec(self, prec):
        """Forget digits at and beyond ``prec``."""
        return Series(self.K, self.val or 0, self.c, _min_prec(self.prec, prec))

    def inverse(self, prec: int):
        """Inverse known modulo ``pi**prec`` (exact for monomials)."""
        v = self.valuation()
        K = self.K
        if len(self.c) == 1 and self.prec is None:
            return Series(K, -v, (K.inv[self.c[0]],))
        # need digits of self up to relative order n = prec + v
        n = prec + v
        if n <= 0:
            return Series(K, 0, (), prec)
        if self.prec is not None and self.prec - v < n:
            raise PrecisionError("inverse needs more digits than stored")
        c = self.c
        inv0 = K.inv[c[0]]
        out = [0] * n
        mul, sub = K.mul, K.sub
        for k in range(n):
            acc = 1 if k == 0 else 0
            for j in range(1, min(k, len(c) - 1) + 1):
                acc = sub[acc][mul[c[j]][out[k - j]]]
            out[k] = mul[acc][inv0]
        return Series(K, -v, out, prec)

    def frobenius(self):
        """Apply the field automorphism ``K.frob`` digitwise."""
        frob = self.K.frob
        return Series(self.K, self.val or 0, [frob[a] for a in self.c], self.prec)

    def map_field(self, K2, table=None):
        """Reinterpret digits in another field (identity or given table)."""
        if table is None:
            return Series(K2, self.val or 0, self.c, self.prec)
        return Series(K2, self.val or 0, [table[a] for a in self.c], self.prec)

    # -- comparison and display ---------------------------------------
    def key(self):
        return (self.val, self.c, self.prec)

    def __eq__(self, other):
        if not isinstance(other, Series):
            return NotImplemented
        return self.K is other.K and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def equals_mod(self, other, n: int) -> bool:
        """True if the two series agree modulo ``pi**n``."""
        d = self - other
        return d.lower_bound() >= n

    def __repr__(self):
        if not self.c:
            body = "0"
        else:
            body = " + ".join(f"{a}*pi^{self.val + i}"
                              for i, a in enumerate(self.c) if a)
        if self.prec is not None:
            body += f" + O(pi^{self.prec})"
        return body
