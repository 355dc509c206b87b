"""Exact Laurent polynomials in the symbol ``u = q**s``.

Every orbital integral in the package is a finite sum of powers of
``q**s`` with rational coefficients, so this small class is the common
currency between modules.  The substitution ``X = -q**(-2s)`` used by
the lattice counts becomes ``X**m -> (-1)**m * u**(-2m)``.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational

__all__ = ["LaurentPoly", "from_X_series", "sign_prefactor", "u"]


def _frac(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, Rational)):
        return Fraction(c)
    raise TypeError(f"exact rational coefficient expected, got {type(c).__name__}")


class LaurentPoly:
    """An immutable finitely supported map ``exponent -> Fraction``.

    Zero coefficients are never stored, so two polynomials are equal
    exactly when their coefficient maps are equal.
    """

    __slots__ = ("_c",)

    def __init__(self, coeffs=None):
        cleaned = {}
        if coeffs:
            items = coeffs.items() if isinstance(coeffs, dict) else coeffs
            for k, c in items:
                if not isinstance(k, int):
                    raise TypeError("exponents must be integers")
                c = _frac(c)
                if c:
                    cleaned[k] = cleaned.get(k, Fraction(0)) + c
                    if not cleaned[k]:
                        del cleaned[k]
        self._c = cleaned

    # -- constructors -------------------------------------------------
    @classmethod
    def monomial(cls, k: int, c=1) -> "LaurentPoly":
        return cls({k: c})

    @classmethod
    def constant(cls, c) -> "LaurentPoly":
        return cls({0: c})

    # -- access -------------------------------------------------------
    @property
    def coeffs(self) -> dict:
        return dict(self._c)

    def __getitem__(self, k: int) -> Fraction:
        return self._c.get(k, Fraction(0))

    def exponents(self):
        return sorted(self._c)

    def is_zero(self) -> bool:
        return not self._c

    def __bool__(self):
        return bool(self._c)

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self._c.values())

    # -- ring operations ----------------------------------------------
    def _coerce(self, other):
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return LaurentPoly.constant(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = dict(self._c)
        for k, c in other._c.items():
            out[k] = out.get(k, Fraction(0)) + c
        return LaurentPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({k: -c for k, c in self._c.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        out: dict = {}
        for i, a in self._c.items():
            for j, b in other._c.items():
                out[i + j] = out.get(i + j, Fraction(0)) + a * b
        return LaurentPoly(out)

    __rmul__ = __mul__

    def scale(self, c) -> "LaurentPoly":
        c = _frac(c)
        return LaurentPoly({k: c * v for k, v in self._c.items()})

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by ``u**k``."""
        return LaurentPoly({e + k: c for e, c in self._c.items()})

    def __pow__(self, n: int):
        if n < 0:
            if len(self._c) != 1:
                raise ValueError("only monomials have Laurent inverses")
            (k, c), = self._c.items()
            return LaurentPoly({-k * (-n): Fraction(1) / c ** (-n)})
        result = LaurentPoly.constant(1)
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        return hash(tuple(sorted(self._c.items())))

    # -- evaluations --------------------------------------------------
    def central_value(self) -> Fraction:
        """Value at ``s = 0``, i.e. at ``u = 1``."""
        return sum(self._c.values(), Fraction(0))

    def central_derivative_coeff(self) -> Fraction:
        """Coefficient of ``log q`` in the derivative at ``s = 0``."""
        return sum((k * c for k, c in self._c.items()), Fraction(0))

    def reflect(self) -> "LaurentPoly":
        """Substitute ``u -> 1/u`` (that is, ``s -> -s``)."""
        return LaurentPoly({-k: c for k, c in self._c.items()})

    def divide_exact(self, c) -> "LaurentPoly":
        return self.scale(Fraction(1) / _frac(c))

    # -- serialisation ------------------------------------------------
    def serialize(self) -> list:
        """Sorted ``(exponent, numerator, denominator)`` triples."""
        return [(k, c.numerator, c.denominator) for k, c in sorted(self._c.items())]

    @classmethod
    def deserialize(cls, triples) -> "LaurentPoly":
        return cls({k: Fraction(n, d) for k, n, d in triples})

    def __str__(self):
        if not self._c:
            return "0"
        parts = []
        for k in sorted(self._c):
            c = self._c[k]
            coeff = str(c)
            if k == 0:
                term = coeff
            else:
                mono = "u" if k == 1 else f"u^{k}"
                if c == 1:
                    term = mono
                elif c == -1:
                    term = "-" + mono
                else:
                    term = f"{coeff} {mono}"
            parts.append(term)
        out = parts[0]
        for t in parts[1:]:
            out += " - " + t[1:] if t.startswith("-") else " + " + t
        return out

    def __repr__(self):
        return f"LaurentPoly({str(self)!r})"


u = LaurentPoly.monomial(1)


def from_X_series(terms) -> LaurentPoly:
    """Image of ``sum(c * X**m)`` under ``X -> -u**(-2)``.

    ``terms`` is an iterable of ``(coefficient, X-exponent)`` pairs.
    """
    out: dict = {}
    for c, m in terms:
        c = _frac(c)
        if m % 2:
            c = -c
        out[-2 * m] = out.get(-2 * m, Fraction(0)) + c
    return LaurentPoly(out)


def sign_prefactor(r: int) -> LaurentPoly:
    """The factor ``(-q**s)**(-r) = (-1)**r * u**(-r)``."""
    return LaurentPoly.monomial(-r, -1 if r % 2 else 1)
