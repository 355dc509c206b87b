"""The Bruhat-Tits tree of ``PGL_2`` over the unramified quadratic field
``E = GF(q^2)((pi))`` and the multiplicity function of a conjugate-linear
map.

A conjugate-linear endomorphism of ``W = E^2`` is ``z(v) = A * sigma(v)``
with ``sigma`` the Galois conjugation of ``E/F`` applied entrywise.  Its
multiplicity at a lattice ``Lambda`` with basis matrix ``B`` is

    ``n(z, Lambda) = min v(B^-1 A sigma(B))``,

the largest ``k`` with ``z Lambda`` inside ``pi^k Lambda``.  The set
``T(z)`` where ``n`` is maximal and the decay of ``n`` away from it
drive all intersection counts in :mod:`gl4transfer.intersect`.

Vertices are homothety classes, represented by the primitive Hermite
form ``(a, b, c)`` (columns ``(pi^a, 0)`` and ``(c, pi^b)`` with
``min(a, b, v(c)) = 0``).  For split ``L`` the map ``A`` is diagonal and
``T(z)`` is infinite; such trees are handled modulo the translation
``diag(pi, pi^-1)``, which fixes ``n`` and acts with two vertex orbits
on the apartment.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .errors import (CertificateError, InternalInvariantError,
                     NotRealizableError, PrecisionError)
from .finitefield import gf2_over
from .lattices import Lattice
from .localfield import NumInvariant, element_from_invariant
from .series import INF, Series

__all__ = [
    "ConjLinearMap", "ShapeDescriptor", "TreeWindow", "tree_realizable",
    "conj_linear_from_invariant", "n_multiplicity", "neighbors",
    "canonical_class", "quotient_canonicalize", "standard_vertex",
    "max_multiplicity", "compute_T", "classify_shape", "predicted_shape",
    "distance_law_check", "ball_count", "ball_census", "tree_size",
]


# ---------------------------------------------------------------------------
# vertices

def canonical_class(K, a: int, b: int, c: Series) -> Lattice:
    """Primitive representative of the homothety class of ``(a, b, c)``."""
    if c.c and c.degree() >= a:
        c = c.truncate(a)
    k = min(a, b, c.val if c.c else a)
    if k:
        a, b, c = a - k, b - k, c.shift(-k)
    return Lattice(K, a, b, c)


def quotient_canonicalize(L: Lattice) -> Lattice:
    """Translate by a power of ``diag(pi, pi^-1)`` so that ``a - b`` lies
    in ``{0, 1}``, then take the primitive representative."""
    k = -((L.a - L.b) // 2)
    if k == 0:
        return L
    return canonical_class(L.K, L.a + k, L.b - k, L.c.shift(k))


def standard_vertex(q: int) -> Lattice:
    K = gf2_over(q)[0]
    return Lattice(K, 0, 0, Series.zero(K))


def neighbors(L: Lattice, quotient: bool = False) -> list:
    """The ``q^2 + 1`` index-one sublattice classes of ``L``.

    Order: the line through the first basis vector, then the lines
    through ``v2 + lam * v1`` for ``lam`` in the digit field.  In quotient
    mode the classes are translated to canonical form; repeated entries
    are kept, so the list length is always ``q^2 + 1``.
    """
    K, a, b, c = L.K, L.a, L.b, L.c
    out = [canonical_class(K, a, b + 1, c.shift(1))]
    for lam in range(K.order):
        c2 = c + Series.mono(K, lam, a) if lam else c
        out.append(canonical_class(K, a + 1, b, c2))
    if quotient:
        out = [quotient_canonicalize(v) for v in out]
    return out


# ---------------------------------------------------------------------------
# conjugate-linear maps

@dataclass(frozen=True)
class ConjLinearMap:
    """``v -> A sigma(v)`` with ``A`` given by rows of :class:`Series`
    over ``GF(q^2)``.  ``quotient`` marks diagonal maps of split type."""

    q: int
    A: tuple
    inv: NumInvariant | None = None
    quotient: bool = False

    @property
    def K(self):
        return gf2_over(self.q)[0]

    def square(self):
        """The ``E``-linear map ``z^2``, i.e. ``A sigma(A)``."""
        A = self.A
        S = tuple(tuple(x.frobenius() for x in row) for row in A)
        return tuple(tuple(A[i][0] * S[0][j] + A[i][1] * S[1][j]
                           for j in range(2)) for i in range(2))

    def scaled(self, k: int) -> "ConjLinearMap":
        """``pi^k z``."""
        A = tuple(tuple(x.shift(k) for x in row) for row in self.A)
        return ConjLinearMap(self.q, A, None, self.quotient)


def tree_realizable(inv: NumInvariant, q: int | None = None) -> bool:
    """Whether some conjugate-linear ``z`` has ``z^2`` of invariant ``inv``:
    ramified needs ``r`` even, split needs both component valuations even
    (and ``d = 0`` needs ``q > 2``).  Ramified ``L`` needs odd ``q``."""
    if not inv.is_valid():
        return False
    if inv.kind == "ramified":
        return inv.r % 2 == 0 and (q is None or q % 2 == 1)
    if inv.kind == "split":
        va, vb, _ = inv.split_valuations()
        if va % 2 or vb % 2:
            return False
        if inv.d2 == 0 and q == 2:
            return False
    return True


def _norm_unit(u, const, residue, K, t0: int, n0: int, prec: int,
               trunc):
    """Solve ``a^2 + t a b + n b^2 = u`` for a unit ``u`` by Newton's
    method in ``a`` with ``b`` a fixed residue constant."""
    add, mul = K.add, K.mul
    target = residue(u)
    for x in K.elements():
        for y in K.elements():
            val = add[add[mul[x][x]][mul[t0][mul[x][y]]]][mul[n0][mul[y][y]]]
            deriv = add[add[x][x]][mul[t0][y]]
            if val == target and deriv:
                break
        else:
            continue
        break
    else:  # pragma: no cover - the norm of a finite field is onto
        raise NotRealizableError("no residue solution of the norm equation")
    a, b = const(x), const(y)
    tt, nn = const(t0), const(n0)
    steps = max(1, prec).bit_length() + 1
    for _ in range(steps):
        f = a * a + tt * a * b + nn * b * b - u
        d = a + a + tt * b
        a = trunc(a - f * d.inverse(prec))
    check = a * a + tt * a * b + nn * b * b - u
    return a, b, check


def conj_linear_from_invariant(inv: NumInvariant, q: int,
                               prec: int | None = None) -> ConjLinearMap:
    """A conjugate-linear ``z`` whose square has numerical invariant ``inv``.

    ``z^2`` is the canonical element ``w`` of ``inv`` acting on
    ``E (x) L``; ``z`` is multiplication by ``t`` followed by ``sigma``
    where ``t`` has norm ``w`` down to ``L``.  The result is validated by
    recomputing ``z^2``.
    """
    inv.validate()
    if not tree_realizable(inv, q):
        raise NotRealizableError(f"{inv} does not occur as the square of a "
                                 "conjugate-linear map")
    if prec is None:
        prec = 2 * (abs(inv.r) + abs(inv.d2)) + 40
    w = element_from_invariant(inv, q)
    alg = w.alg
    K = alg.K
    KE, tE, nE = gf2_over(q)

    def E(s):
        return s.map_field(KE)

    def Etheta(s):
        return s.map_field(KE).scale(q)

    if inv.kind == "split":
        diag = []
        for comp in w.components():
            v = comp.valuation()
            unit = comp.shift(-v)
            a, b, chk = _norm_unit(
                unit, lambda k: Series.const(K, k), lambda s: s.coeff(0),
                K, tE, nE, prec, lambda s: s.with_prec(prec))
            if chk.lower_bound() < prec - 1:
                raise NotRealizableError("norm equation failed to converge")
            h = v // 2
            diag.append(E(a).shift(h) + Etheta(b).shift(h))
        zero = Series.zero(KE)
        A = ((diag[0], zero), (zero, diag[1]))
        z = ConjLinearMap(q, A, inv, quotient=True)
        target = ((E(w.components()[0]), zero), (zero, E(w.components()[1])))
    else:
        zeta = alg.zeta()
        if inv.kind == "inert":
            one = alg.one()
            diff = zeta - zeta.conjugate()
            beta = (w - one) * diff.inverse(prec)
            alpha = w - zeta * beta
        else:
            h = inv.r // 2
            unit = alg.elem(w.x.shift(-h), w.y.shift(-h))
            from_K = lambda k: alg.from_F(Series.const(K, k))  # noqa: E731
            trunc = lambda e: alg.elem(e.x.with_prec(prec), e.y.with_prec(prec))  # noqa: E731
            a, b, chk = _norm_unit(unit, from_K, lambda e: e.x.coeff(0),
                                   K, tE, nE, prec, trunc)
            if min(chk.x.lower_bound(), chk.y.lower_bound()) < prec - 2:
                raise NotRealizableError("norm equation failed to converge")
            root = alg.pi(h // 2) if h % 2 == 0 else alg.pi((h - 1) // 2) * zeta
            alpha, beta = root * a, root * b
        t0 = E(alpha.x) + Etheta(beta.x)
        t1 = E(alpha.y) + Etheta(beta.y)
        tL, nL = E(alg.t), E(alg.n)
        A = ((t0, -(nL * t1)), (t1, t0 + tL * t1))
        z = ConjLinearMap(q, A, inv, quotient=False)
        target = tuple(tuple(E(x) for x in row) for row in w.matrix())
    sq = z.square()
    check_prec = prec - 2 * abs(inv.r) - 4
    for i in range(2):
        for j in range(2):
            if not sq[i][j].equals_mod(target[i][j], check_prec):
                raise InternalInvariantError(
                    f"z^2 does not reproduce the element of {inv}")
    return z


# ---------------------------------------------------------------------------
# multiplicity

def n_multiplicity(z: ConjLinearMap, L: Lattice) -> int:
    """``min v(B^-1 A sigma(B))`` for the Hermite basis ``B`` of ``L``."""
    (A11, A12), (A21, A22) = z.A
    a, b, c = L.a, L.b, L.c
    sc = c.frobenius()
    vals = []
    if c.c:
        e11 = A11 - (c * A21).shift(-b)
        t = A21 * sc + A22.shift(b)
        e22 = t.shift(-b)
        e12 = (A11 * sc + A12.shift(b)).shift(-a) - (c * t).shift(-a - b)
    else:
        e11, e22 = A11, A22
        e12 = A12.shift(b - a)
    e21 = A21.shift(a - b)
    for e in (e11, e12, e21, e22):
        vals.append(e.valuation())
    n = min(vals)
    if n == INF:  # pragma: no cover - A is invertible
        raise PrecisionError("multiplicity undetermined")
    return int(n)


def max_multiplicity(inv: NumInvariant) -> int:
    """``floor(r/4)`` for ``d >= 0`` and ``floor(r/4 + d/2)`` for ``d < 0``."""
    if inv.d2 >= 0:
        return inv.r // 4
    return (inv.r + inv.d2) // 4


# ---------------------------------------------------------------------------
# T(z) and its neighbourhood

@dataclass
class TreeWindow:
    """Multiplicities on the ball of radius ``radius`` around ``T(z)``.

    ``n`` and ``dist`` are keyed by vertex; ``adj`` holds the neighbour
    list of every vertex at distance ``< radius``.
    """

    z: ConjLinearMap
    m: int
    T: list
    radius: int
    n: dict = field(default_factory=dict)
    dist: dict = field(default_factory=dict)
    adj: dict = field(default_factory=dict)

    @property
    def quotient(self) -> bool:
        return self.z.quotient

    def vertices(self):
        return sorted(self.n, key=lambda L: L.sort_key())

    def layer(self, k: int) -> list:
        return [L for L, d in self.dist.items() if d == k]


def compute_T(z: ConjLinearMap, radius: int | None = None) -> TreeWindow:
    """Find ``T(z)`` by hill climbing and explore the ball around it.

    The default radius is ``max(m, 0) + 1``, enough to see every vertex
    with ``n >= 0`` plus one boundary layer.  Every vertex must satisfy
    ``n = m - dist`` (checked by :func:`distance_law_check`); the outer
    layer doubles as the decay certificate.
    """
    quo = z.quotient
    memo = {}

    def nval(L):
        v = memo.get(L)
        if v is None:
            v = memo[L] = n_multiplicity(z, L)
        return v

    cur = standard_vertex(z.q)
    if quo:
        cur = quotient_canonicalize(cur)
    bound = 10 ** 6
    while True:
        here = nval(cur)
        up = [N for N in neighbors(cur, quo) if nval(N) > here]
        if not up:
            break
        cur = up[0]
        bound -= 1
        if bound <= 0:  # pragma: no cover - n is bounded above
            raise CertificateError("hill climbing did not terminate")
    m = nval(cur)
    T, seen, queue = [], {cur}, deque([cur])
    while queue:
        L = queue.popleft()
        T.append(L)
        for N in neighbors(L, quo):
            if N not in seen and nval(N) == m:
                seen.add(N)
                queue.append(N)
    if radius is None:
        radius = max(m, 0) + 1
    win = TreeWindow(z, m, sorted(T, key=lambda L: L.sort_key()), radius)
    frontier = list(win.T)
    for L in frontier:
        win.dist[L] = 0
        win.n[L] = m
    for k in range(radius):
        nxt = []
        for L in frontier:
            nbrs = neighbors(L, quo)
            win.adj[L] = nbrs
            for N in nbrs:
                if N not in win.dist:
                    win.dist[N] = k + 1
                    win.n[N] = nval(N)
                    nxt.append(N)
        frontier = nxt
    return win


def distance_law_check(win: TreeWindow) -> bool:
    """``n = m - d(Lambda, T)`` on every vertex of the window."""
    return all(win.n[L] == win.m - d for L, d in win.dist.items())


# ---------------------------------------------------------------------------
# shapes

SHAPE_KINDS = ("vertex_ball", "edge", "edge_ball", "apartment",
               "apartment_ball")


@dataclass(frozen=True)
class ShapeDescriptor:
    """Shape of ``T(z)``: a ``(q+1)``-regular ball of ``radius`` around a
    vertex, an edge or an apartment.  Radius-zero balls around an edge or
    an apartment are reported as ``edge`` and ``apartment``."""

    center: str  # "vertex", "edge" or "apartment"
    radius: int

    @property
    def kind(self) -> str:
        if self.center == "vertex":
            return "vertex_ball"
        return self.center if self.radius == 0 else self.center + "_ball"

    def __str__(self):
        return f"{self.kind}({self.radius})"


def predicted_shape(inv: NumInvariant) -> ShapeDescriptor:
    """Shape of ``T(z)`` from the invariant of ``z^2``."""
    d = inv.d2 // 2
    if inv.kind == "split":
        va, vb, _ = inv.split_valuations()
        if va != vb:
            return ShapeDescriptor("apartment", 0)
        return ShapeDescriptor("apartment", d)
    if inv.r % 4 == 2:
        return ShapeDescriptor("edge", 0)
    if inv.kind == "inert":
        return ShapeDescriptor("vertex", d)
    return ShapeDescriptor("edge", d)


def tree_size(shape: ShapeDescriptor, q: int) -> int:
    """Number of vertices of the shape (per translation period for
    apartments)."""
    d = shape.radius
    geo = sum(q ** i for i in range(d))  # 1 + q + ... + q^(d-1)
    if shape.center == "vertex":
        return 1 + (q + 1) * geo
    if shape.center == "edge":
        return 2 * (geo + q ** d)
    return 2 * q ** d


def _t_adjacency(win: TreeWindow):
    Tset = set(win.T)
    return {L: [N for N in win.adj[L] if N in Tset] for L in win.T}


def classify_shape(win: TreeWindow) -> ShapeDescriptor:
    """Read the shape off ``T(z)`` by repeatedly stripping leaves."""
    q = win.z.q
    adj = _t_adjacency(win)
    for L, nb in adj.items():
        if len(nb) not in (0, 1, 2, q + 1):
            raise InternalInvariantError(f"valency {len(nb)} in T(z)")
    alive = set(adj)
    rounds = 0
    while True:
        deg = {L: sum(1 for N in adj[L] if N in alive) for L in alive}
        if len(alive) == 1 and not win.quotient:
            shape = ShapeDescriptor("vertex", rounds)
            break
        if len(alive) == 2 and not win.quotient and all(v == 1 for v in deg.values()):
            shape = ShapeDescriptor("edge", rounds)
            break
        leaves = {L for L, v in deg.items() if v <= 1}
        if not leaves:
            if win.quotient and all(v == 2 for v in deg.values()) and len(alive) == 2:
                shape = ShapeDescriptor("apartment", rounds)
                break
            raise InternalInvariantError("T(z) has an unexpected cycle")
        alive -= leaves
        rounds += 1
        if not alive:
            raise InternalInvariantError("T(z) is not a ball around a centre")
    if tree_size(shape, q) != len(win.T):
        raise InternalInvariantError(
            f"T(z) has {len(win.T)} vertices, a {shape} has {tree_size(shape, q)}")
    return shape


# ---------------------------------------------------------------------------
# balls

def ball_count(shape: ShapeDescriptor, m: int, q: int,
               quotient: bool | None = None) -> int:
    """``#B(T, m)``; for apartment centres the count modulo translations."""
    if m < 0:
        raise ValueError("radius must be non-negative")
    if quotient is None:
        quotient = shape.center == "apartment"
    size = tree_size(shape, q)
    if quotient:
        return size * q ** (2 * m)
    s = sum(q ** (2 * i) for i in range(m))  # S(m-1)
    return size + ((q * q - 1) * size + 2) * s


def ball_census(T, m: int, quotient: bool) -> int:
    """Count the vertices within distance ``m`` of ``T`` by search."""
    seen = set(T)
    frontier = list(T)
    for _ in range(m):
        nxt = []
        for L in frontier:
            for N in neighbors(L, quotient):
                if N not in seen:
                    seen.add(N)
                    nxt.append(N)
        frontier = nxt
    return len(seen)
