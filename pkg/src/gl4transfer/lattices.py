"""Rank-2 lattices over the valuation ring of ``K((pi))``.

A lattice is stored in column Hermite form: it is spanned by the columns
``(pi^a, 0)`` and ``(c, pi^b)`` with ``c`` an exact Laurent polynomial
whose exponents are all ``< a``.  This form is unique, so lattices
compare and hash by ``(a, b, c)``.  Both the ``O_F``-lattices inside a
quadratic algebra (coordinates with respect to ``(1, zeta)``) and the
``O_E``-lattices on the tree side use this class; only the digit field
``K`` differs.

The vector ``(x, y)`` lies in the lattice iff ``v(y) >= b`` and
``v(x - c*y/pi^b) >= a``.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product

from .errors import InvalidInvariantError, PrecisionError
from .localfield import QuadAlgebra, QuadElem
from .series import INF, Series

__all__ = [
    "Lattice", "hermite_normalize", "hermite_from_columns", "standard",
    "relative_position", "index", "sublattices_between", "apply_element",
    "apply_matrix", "lattice_sum", "add_vector", "contains", "is_in_E",
    "conductor_of_lattice", "unit_conductor_orbit", "scale",
]


def _geq(s: Series, n) -> bool:
    """Decide ``v(s) >= n``; raise if the stored digits do not decide it."""
    if s.c and s.val < n:
        return False
    if s.prec is None or s.prec >= n:
        return True
    raise PrecisionError(f"cannot decide v >= {n} at precision {s.prec}")


class Lattice:
    __slots__ = ("K", "a", "b", "c", "_key")

    def __init__(self, K, a: int, b: int, c: Series):
        if not c.is_exact():
            c = c.truncate(a)
        elif c.c and c.degree() >= a:
            c = c.truncate(a)
        self.K, self.a, self.b, self.c = K, a, b, c
        self._key = (a, b, c.val, c.c)

    # -- basic data ---------------------------------------------------
    def columns(self):
        K = self.K
        return ((Series.mono(K, 1, self.a), Series.zero(K)),
                (self.c, Series.mono(K, 1, self.b)))

    def matrix(self):
        """Basis as rows of a 2x2 matrix (columns are the basis vectors)."""
        (x1, y1), (x2, y2) = self.columns()
        return ((x1, x2), (y1, y2))

    def inverse_matrix(self):
        """Exact inverse of :meth:`matrix`."""
        K = self.K
        a, b = self.a, self.b
        return ((Series.mono(K, 1, -a), -(self.c.shift(-a - b))),
                (Series.zero(K), Series.mono(K, 1, -b)))

    def det_valuation(self) -> int:
        return self.a + self.b

    def contains_vector(self, x: Series, y: Series) -> bool:
        if not _geq(y, self.b):
            return False
        return _geq(x - self.c * y.shift(-self.b), self.a)

    def key(self):
        return self._key

    def __eq__(self, other):
        return isinstance(other, Lattice) and self._key == other._key \
            and self.K is other.K

    def __hash__(self):
        return hash(self._key)

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def sort_key(self):
        digits = tuple(self.c.coeff(e) for e in range(min(0, self.c.val or 0), self.a))
        return (self.a, digits, self.b)

    def __str__(self):
        if self.c.c:
            cs = f"{list(self.c.c)}@{self.c.val}"
        else:
            cs = "0"
        return f"[[π^{self.a}, {cs}],[0, π^{self.b}]]"

    __repr__ = __str__


def standard(K) -> Lattice:
    """The lattice ``O^2``."""
    return Lattice(K, 0, 0, Series.zero(K))


def hermite_from_columns(K, col1, col2) -> Lattice:
    """Hermite form of the lattice spanned by two column vectors."""
    (x1, y1), (x2, y2) = col1, col2
    det = x1 * y2 - x2 * y1
    vdet = det.valuation()
    if vdet == INF:
        raise PrecisionError("columns are linearly dependent")
    v1, v2 = y1.lower_bound(), y2.lower_bound()
    if v1 == INF and v2 == INF:  # pragma: no cover - excluded by det
        raise PrecisionError("degenerate lattice")
    if v1 <= v2:
        xp, yp = x1, y1
    else:
        xp, yp = x2, y2
    b = yp.valuation()
    a = vdet - b
    unit = yp.shift(-b)
    vx = xp.lower_bound()
    if vx >= a:
        c = Series.zero(K)
    else:
        c = (xp * unit.inverse(a - vx)).truncate(a)
    return Lattice(K, a, b, c)


def hermite_normalize(K, matrix) -> Lattice:
    """Canonical form of the lattice spanned by the columns of ``matrix``
    (given as a pair of rows)."""
    (m00, m01), (m10, m11) = matrix
    return hermite_from_columns(K, (m00, m10), (m01, m11))


def _matvec(M, x, y):
    return (M[0][0] * x + M[0][1] * y, M[1][0] * x + M[1][1] * y)


def apply_matrix(M, L: Lattice) -> Lattice:
    """The lattice ``M * L`` for an invertible 2x2 matrix ``M`` (rows)."""
    c1, c2 = L.columns()
    return hermite_from_columns(L.K, _matvec(M, *c1), _matvec(M, *c2))


def apply_element(x, L: Lattice) -> Lattice:
    """``x * L`` for a :class:`QuadElem` (via its regular representation)
    or a 2x2 matrix."""
    if isinstance(x, QuadElem):
        if x.norm().lower_bound() == INF:
            raise ValueError("element is not invertible")
        return apply_matrix(x.matrix(), L)
    return apply_matrix(x, L)


def scale(L: Lattice, k: int) -> Lattice:
    """``pi^k * L``."""
    return Lattice(L.K, L.a + k, L.b + k, L.c.shift(k))


def contains(M0: Lattice, M1: Lattice) -> bool:
    """True if ``M1`` is a sublattice of ``M0``."""
    if M1.b < M0.b:
        return False
    (x1, y1), (x2, y2) = M1.columns()
    return M0.contains_vector(x1, y1) and M0.contains_vector(x2, y2)


def add_vector(L: Lattice, x: Series, y: Series) -> Lattice:
    """The lattice ``L + O*(x, y)``."""
    K = L.K
    if y.lower_bound() >= L.b:
        # (x, y) minus a multiple of the pivot (c, pi^b) lies on the x-axis
        rest = x - L.c * y.shift(-L.b)
        a = rest.val if (rest.c and rest.val < L.a) else L.a
        return Lattice(K, a, L.b, L.c)
    # (x, y) becomes the pivot; (c, pi^b) - (pi^b / y)(x, y) = (red, 0)
    b = y.valuation()
    vx = x.lower_bound()
    need = L.a - L.b - vx  # absolute precision of 1/y that decides red mod pi^a
    red = L.c.truncate(L.a)
    if vx != INF and need > -b:
        red = (red - (x * y.inverse(need)).shift(L.b)).truncate(L.a)
    a = red.val if red.c else L.a
    unit = y.shift(-b)
    if vx >= a:
        c = Series.zero(K)
    else:
        c = (x * unit.inverse(a - vx)).truncate(a)
    return Lattice(K, a, b, c)


def lattice_sum(L1: Lattice, L2: Lattice) -> Lattice:
    """The sum ``L1 + L2``."""
    (x1, y1), (x2, y2) = L2.columns()
    return add_vector(add_vector(L1, x1, y1), x2, y2)


def relative_position(M0: Lattice, M1: Lattice) -> tuple[int, int]:
    """Elementary divisor valuations ``(e1, e2)``, ``e1 <= e2``, of ``M1``
    relative to ``M0``."""
    Binv = M0.inverse_matrix()
    B1 = M1.matrix()
    X = [[Binv[i][0] * B1[0][j] + Binv[i][1] * B1[1][j] for j in range(2)]
         for i in range(2)]
    e1 = min(e.valuation() for row in X for e in row)
    total = M1.det_valuation() - M0.det_valuation()
    return int(e1), int(total - e1)


def index(M0: Lattice, M1: Lattice) -> int:
    """Length of ``M0/M1``; requires ``M1`` inside ``M0``."""
    if not contains(M0, M1):
        raise ValueError("index needs M1 to be a sublattice of M0")
    return M1.det_valuation() - M0.det_valuation()


def _polys(K, lo: int, hi: int):
    """All polynomials with digits at exponents ``lo .. hi-1``."""
    n = max(0, hi - lo)
    for digits in product(K.elements(), repeat=n):
        yield Series(K, lo, digits)


def sublattices_between(M0: Lattice, M1: Lattice, k: int) -> list:
    """All lattices ``L`` with ``M0 >= L >= M1`` and ``[M0 : L] = k``.

    Candidates are the Hermite forms ``[[pi^i, h], [0, pi^j]]`` with
    ``i + j = k`` relative to the basis of ``M0`` that contain
    ``pi^e M0`` (``e`` the larger elementary divisor of ``M1``); each is
    kept if it contains ``M1``.  Order: ``(i, digits of h)``.
    """
    if not contains(M0, M1):
        raise ValueError("sublattices_between needs M1 inside M0")
    total = M1.det_valuation() - M0.det_valuation()
    if k < 0 or k > total:
        raise ValueError(f"k={k} outside 0..{total}")
    K = M0.K
    e = relative_position(M0, M1)[1]
    out = []
    for i in range(0, k + 1):
        j = k - i
        if i > e or j > e:
            continue
        for h in _polys(K, max(0, i - e + j), i):
            # M0 basis times [[pi^i, h], [0, pi^j]]
            c = M0.c.shift(j) + h.shift(M0.a)
            cand = Lattice(K, M0.a + i, M0.b + j, c)
            if contains(cand, M1):
                out.append(cand)
    return out


# ---------------------------------------------------------------------------
# lattices inside a quadratic algebra

def _zeta_matrix(alg: QuadAlgebra):
    return alg.zeta().matrix()


def is_in_E(alg: QuadAlgebra, L: Lattice) -> bool:
    """True if ``L`` lies in ``O_L`` and ``O_L * L = O_L``."""
    O = standard(alg.K)
    if not contains(O, L):
        return False
    Z = _zeta_matrix(alg)
    span = L
    for x, y in L.columns():
        span = add_vector(span, *_matvec(Z, x, y))
    return span == O


def conductor_of_lattice(alg: QuadAlgebra, L: Lattice) -> int:
    """Conductor ``c`` of the multiplier order ``O_F + pi^c O_L`` of ``L``."""
    if not is_in_E(alg, L):
        raise ValueError("lattice is not in O_L with O_L * L = O_L")
    return multiplier_conductor(alg, L)


def multiplier_conductor(alg: QuadAlgebra, L: Lattice) -> int:
    """Smallest ``c >= 0`` with ``pi^c zeta L`` inside ``L``."""
    Binv, B, Z = L.inverse_matrix(), L.matrix(), _zeta_matrix(alg)
    ZB = [[Z[i][0] * B[0][j] + Z[i][1] * B[1][j] for j in range(2)]
          for i in range(2)]
    m = min((Binv[i][0] * ZB[0][j] + Binv[i][1] * ZB[1][j]).valuation()
            for i in range(2) for j in range(2))
    return max(0, -int(m))


@lru_cache(maxsize=None)
def _orbit_cached(kind: str, q: int, c: int):
    from .localfield import algebra
    alg = algebra(kind, q)
    K = alg.K
    if c == 0:
        return (standard(K),)
    pic = Series.mono(K, 1, c)
    reps = []
    one = Series.const(K, 1)
    for x in _polys(K, 0, c):
        reps.append(alg.elem(x, one))
    for y in _polys(K, 1, c):
        reps.append(alg.elem(one, y))
    seen = set()
    out = []
    for u in reps:
        if u.norm().lower_bound() != 0:
            continue
        uz = u * alg.zeta()
        L = hermite_from_columns(K, (u.x, u.y), (uz.x * pic, uz.y * pic))
        if L not in seen:
            seen.add(L)
            out.append(L)
    out.sort()
    return tuple(out)


def unit_conductor_orbit(alg: QuadAlgebra, c: int) -> list:
    """All ``L`` inside ``O_L`` with ``O_L L = O_L`` and conductor ``c``.

    They form the orbit of ``R_c = O_F + pi^c O_L`` under ``O_L^x``; the
    representatives ``x + zeta`` and ``1 + y zeta`` (``v(y) >= 1``), with
    ``x, y`` taken modulo ``pi^c``, run over ``O_L^x / R_c^x``.
    """
    if c < 0:
        raise InvalidInvariantError("conductor must be non-negative")
    return list(_orbit_cached(alg.kind, alg.q, c))
