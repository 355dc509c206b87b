"""Table-driven finite fields.

Elements are small non-negative integers.  A field of order p^n is built
as a tower of prime field and extensions given by an irreducible
polynomial; an element of an extension of degree m over a base field of
order Q is encoded as ``sum(c_i * Q**i)``.  All operations are table
lookups, which keeps the inner loops of the lattice enumerators cheap.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product

__all__ = ["FiniteField", "gf", "gf2_over", "prime_power_decomposition"]


def prime_power_decomposition(q: int) -> tuple[int, int]:
    """Return ``(p, n)`` with ``q == p**n`` or raise ``ValueError``."""
    if q < 2:
        raise ValueError(f"q must be a prime power >= 2, got {q}")
    p = next(d for d in range(2, q + 1) if q % d == 0)
    n, m = 0, q
    while m % p == 0:
        m //= p
        n += 1
    if m != 1:
        raise ValueError(f"q must be a prime power, got {q}")
    return p, n


class FiniteField:
    """A finite field with precomputed addition and multiplication tables.

    ``base`` is the field this one was built over (``None`` for a prime
    field); ``embed_order`` is the order of that base, so that base
    elements are exactly the integers ``0 .. embed_order - 1``.
    """

    __slots__ = ("order", "char", "add", "sub", "mul", "neg", "inv",
                 "base", "frob", "_elements")

    def __init__(self, order, char, add, mul, base=None):
        self.order = order
        self.char = char
        self.add = add
        self.mul = mul
        self.base = base
        self.neg = [next(b for b in range(order) if add[a][b] == 0)
                    for a in range(order)]
        self.sub = [[add[a][self.neg[b]] for b in range(order)]
                    for a in range(order)]
        inv = [0] * order
        for a in range(1, order):
            inv[a] = next(b for b in range(1, order) if mul[a][b] == 1)
        self.inv = inv
        self.frob = None
        if base is not None:
            self.frob = [self.power(a, base.order) for a in range(order)]
        self._elements = tuple(range(order))

    # -- construction -------------------------------------------------
    @classmethod
    def prime(cls, p: int) -> "FiniteField":
        add = [[(a + b) % p for b in range(p)] for a in range(p)]
        mul = [[(a * b) % p for b in range(p)] for a in range(p)]
        return cls(p, p, add, mul)

    @classmethod
    def extension(cls, base: "FiniteField", modulus) -> "FiniteField":
        """Extension ``base[t]/(modulus)`` for a monic irreducible modulus.

        ``modulus`` lists the coefficients ``m_0 .. m_{m-1}`` of
        ``t^m + m_{m-1} t^{m-1} + ... + m_0``.
        """
        deg = len(modulus)
        bq = base.order
        order = bq ** deg

        def digits(a):
            out = []
            for _ in range(deg):
                out.append(a % bq)
                a //= bq
            return out

        def encode(ds):
            a = 0
            for c in reversed(ds):
                a = a * bq + c
            return a

        dig = [digits(a) for a in range(order)]
        add = [[encode([base.add[x][y] for x, y in zip(dig[a], dig[b])])
                for b in range(order)] for a in range(order)]

        def polymul(x, y):
            prod = [0] * (2 * deg - 1)
            for i, xi in enumerate(x):
                if xi == 0:
                    continue
                for j, yj in enumerate(y):
                    prod[i + j] = base.add[prod[i + j]][base.mul[xi][yj]]
            for top in range(2 * deg - 2, deg - 1, -1):
                c = prod[top]
                if c == 0:
                    continue
                prod[top] = 0
                for i, mi in enumerate(modulus):
                    k = top - deg + i
                    prod[k] = base.sub[prod[k]][base.mul[c][mi]]
            return prod[:deg]

        mul = [[encode(polymul(dig[a], dig[b])) for b in range(order)]
               for a in range(order)]
        return cls(order, base.char, add, mul, base=base)

    # -- helpers ------------------------------------------------------
    def elements(self):
        return self._elements

    def power(self, a: int, e: int) -> int:
        result = 1
        for _ in range(e):
            result = self.mul[result][a]
        return result

    def from_int(self, n: int) -> int:
        """Image of the integer ``n`` under ``Z -> field``."""
        return n % self.char

    def is_square(self, a: int) -> bool:
        return any(self.mul[b][b] == a for b in self._elements)

    def __repr__(self):
        return f"GF({self.order})"


def _irreducible(base: FiniteField, deg: int):
    """First monic irreducible polynomial of degree ``deg`` over ``base``."""
    elems = base.elements()

    def has_factor(mod):
        # trial division by monic polynomials of degree 1 .. deg // 2
        for fd in range(1, deg // 2 + 1):
            for low in product(elems, repeat=fd):
                rem = list(mod) + [1]
                div = list(low) + [1]
                for top in range(deg, fd - 1, -1):
                    c = rem[top]
                    if c == 0:
                        continue
                    for i in range(fd + 1):
                        k = top - fd + i
                        rem[k] = base.sub[rem[k]][base.mul[c][div[i]]]
                if not any(rem[:fd]):
                    return True
        return False

    for mod in product(elems, repeat=deg):
        if mod[0] != 0 and not has_factor(mod):
            return list(mod)
    raise ValueError("no irreducible polynomial found")


@lru_cache(maxsize=None)
def gf(q: int) -> FiniteField:
    """The field with ``q`` elements."""
    p, n = prime_power_decomposition(q)
    field = FiniteField.prime(p)
    if n == 1:
        return field
    return FiniteField.extension(field, _irreducible(field, n))


@lru_cache(maxsize=None)
def gf2_over(q: int) -> tuple[FiniteField, int, int]:
    """The quadratic extension of ``gf(q)`` as ``(field, t, n)``.

    The extension is ``gf(q)[theta]/(theta^2 - t*theta + n)`` and the
    generator ``theta`` is encoded as the integer ``q``.  Elements of
    ``gf(q)`` keep their encoding, and ``frob`` is the Galois conjugation.
    """
    base = gf(q)
    m0, m1 = _irreducible(base, 2)
    # theta^2 + m1 theta + m0 = theta^2 - t theta + n
    t = base.neg[m1]
    n = m0
    return FiniteField.extension(base, [m0, m1]), t, n
