"""Action of a nonsplit (or split) torus on the tree through a fixed embedding.

Inert kind: the units of the unramified quadratic extension modulo scalars,
embedded by x + y*sqrt(d) -> [[x, d y], [y, x]].  The level-j coset space is
the projective line over Z/p^j, enumerated by canonical representatives and
decomposed as torsion x cyclic p-part for pushforward to group rings.

Split kind: diagonal matrices diag(t, 1); the fixed set is the standard
apartment, supported for inspection only.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import TransitivityViolation
from .tree import DirectedEdge, Vertex, _normal_form_residues, distance, origin
from .util import is_nonresidue, pmap


@dataclass(frozen=True)
class QuadraticTorus:
    p: int
    kind: str               # "inert" | "split"
    d: int | None = None    # non-residue for the inert kind

    def __post_init__(self):
        if self.kind not in ("inert", "split"):
            raise ValueError("kind must be 'inert' or 'split'")
        if self.kind == "inert":
            if self.p == 2:
                raise ValueError("inert tori at p = 2 are not supported")
            if self.d is None or not is_nonresidue(self.d, self.p):
                raise ValueError(f"{self.d} is not a quadratic non-residue mod {self.p}")
        elif self.d is not None:
            raise ValueError("split tori carry no non-residue")


@dataclass(frozen=True)
class TorusElement:
    """Class of x + y*sqrt(d) (inert) or of t in Q_p^* (split), mod scalars.

    Inert representatives are stored projectively mod p^k: y is normalized
    to 1 when it is a unit, otherwise x is normalized to 1.
    """

    torus: QuadraticTorus
    k: int
    x: int = 0          # inert coordinates
    y: int = 0
    vexp: int = 0       # split: valuation and unit part of t
    unit: int = 1

    def __post_init__(self):
        p, mod = self.torus.p, self.torus.p**self.k
        if self.torus.kind == "inert":
            x, y = self.x % mod, self.y % mod
            if x % p == 0 and y % p == 0:
                raise ValueError("representative is zero mod scalars to precision")
            if y % p != 0:
                inv = pow(y, -1, mod)
                x, y = x * inv % mod, 1
            else:
                inv = pow(x, -1, mod)
                x, y = 1, y * inv % mod
            object.__setattr__(self, "x", x)
            object.__setattr__(self, "y", y)
        else:
            if self.unit % p == 0:
                raise ValueError("split unit part must be a unit")
            object.__setattr__(self, "unit", self.unit % mod)

    def matrix(self):
        """Embedding matrix as integer residues mod p^k."""
        t = self.torus
        if t.kind == "inert":
            return (self.x, t.d * self.y, self.y, self.x)
        if self.vexp >= 0:
            return (self.unit * t.p**self.vexp, 0, 0, 1)
        return (self.unit, 0, 0, t.p ** (-self.vexp))

    def __mul__(self, other: "TorusElement") -> "TorusElement":
        if self.torus != other.torus:
            raise ValueError("elements of different tori")
        k = min(self.k, other.k)
        if self.torus.kind == "inert":
            d, mod = self.torus.d, self.torus.p**k
            x = (self.x * other.x + d * self.y * other.y) % mod
            y = (self.x * other.y + self.y * other.x) % mod
            return TorusElement(self.torus, k, x=x, y=y)
        return TorusElement(
            self.torus, k, vexp=self.vexp + other.vexp, unit=self.unit * other.unit
        )


def identity_element(torus: QuadraticTorus, k: int) -> TorusElement:
    if torus.kind == "inert":
        return TorusElement(torus, k, x=1, y=0)
    return TorusElement(torus, k, vexp=0, unit=1)


def split_norm_exponent(t: TorusElement) -> int:
    """The integer by which a split element translates the fixed apartment."""
    if t.torus.kind != "split":
        raise ValueError("norm exponent is a split-kind notion")
    return t.vexp


@dataclass(frozen=True)
class Geodesic:
    """The standard apartment: classes of diag(p^m, 1) for m in Z."""

    p: int

    def vertex(self, m: int) -> Vertex:
        if m >= 0:
            return Vertex(self.p, m, 0, 0)
        return Vertex(self.p, 0, -m, 0)

    def window(self, w: int) -> list:
        return [self.vertex(m) for m in range(-w, w + 1)]

    def distance_to(self, v: Vertex) -> int:
        w = v.a + v.b + 1
        return min(distance(v, self.vertex(m)) for m in range(-w, w + 1))


def fixed_point(torus: QuadraticTorus):
    """Fixed vertex (inert) or fixed geodesic (split) of the torus action."""
    if torus.kind == "inert":
        return origin(torus.p)
    return Geodesic(torus.p)


def act(t: TorusElement, w):
    """Image of a vertex or directed edge under the embedded torus element."""
    if isinstance(w, DirectedEdge):
        return DirectedEdge(act(t, w.source), act(t, w.target))
    p, k = t.torus.p, t.k
    e00, e01, e10, e11 = t.matrix()
    g00, g01, g10, g11 = w.basis_matrix()
    m00 = e00 * g00 + e01 * g10
    m01 = e00 * g01 + e01 * g11
    m10 = e10 * g00 + e11 * g10
    m11 = e10 * g01 + e11 * g11
    return _normal_form_residues(p, m00, m01, m10, m11, k)


def filtration_order(torus: QuadraticTorus, j: int) -> int:
    """Index of the j-th standard compact subgroup in the maximal one."""
    if torus.kind != "inert":
        raise ValueError("filtration orders are finite only for the inert kind")
    if j < 0:
        raise ValueError("level must be nonnegative")
    if j == 0:
        return 1
    return (torus.p + 1) * torus.p ** (j - 1)


def base_sequence(torus: QuadraticTorus, n: int):
    """Consecutive vertices v_0..v_n with stabilizers the standard filtration,
    and the edges e_j = (v_{j-1} -> v_j)."""
    p = torus.p
    if torus.kind == "inert":
        verts = [Vertex(p, j, 0, 0) for j in range(n + 1)]
    else:
        # distance-j branch off the apartment at its basepoint
        verts = [origin(p)] + [Vertex(p, j, 0, 1) for j in range(1, n + 1)]
    edges = [DirectedEdge(verts[j - 1], verts[j]) for j in range(1, n + 1)]
    return verts, edges


# ---------------------------------------------------------------------------
# coset labels: canonical points of P^1(Z/p^j)


def _canonical_pair(p: int, j: int, x: int, y: int):
    mod = p**j
    if j == 0:
        return (1, 0)
    x, y = x % mod, y % mod
    if x % p == 0 and y % p == 0:
        raise ValueError("pair is not primitive")
    if y % p != 0:
        return (x * pow(y, -1, mod) % mod, 1)
    return (1, y * pow(x, -1, mod) % mod)


def coset_labels(torus: QuadraticTorus, j: int) -> list:
    """Canonical representatives of the level-j coset space, as pairs (x, y)."""
    p = torus.p
    if j == 0:
        return [(1, 0)]
    mod = p**j
    labels = [(x, 1) for x in range(mod)]
    labels += [(1, y) for y in range(0, mod, p)]
    return labels


def _label_mul(torus: QuadraticTorus, j: int, a, b):
    p, d = torus.p, torus.d
    mod = p**j
    x = (a[0] * b[0] + d * a[1] * b[1]) % mod
    y = (a[0] * b[1] + a[1] * b[0]) % mod
    return _canonical_pair(p, j, x, y)


def _label_pow(torus, j, a, e):
    acc = _canonical_pair(torus.p, j, 1, 0)
    base = a
    while e > 0:
        if e & 1:
            acc = _label_mul(torus, j, acc, base)
        base = _label_mul(torus, j, base, base)
        e >>= 1
    return acc


def reduce_label(torus: QuadraticTorus, j_from: int, j_to: int, label):
    return _canonical_pair(torus.p, j_to, label[0], label[1])


def _element_order(torus, j, a, bound):
    acc = a
    e = 1
    ident = _canonical_pair(torus.p, j, 1, 0)
    while acc != ident:
        acc = _label_mul(torus, j, acc, a)
        e += 1
        if e > bound:
            raise AssertionError("order exceeds group size")
    return e


@dataclass(frozen=True)
class CosetDecomposition:
    """Splitting of the level-j coset group as torsion x cyclic p-part."""

    torus: QuadraticTorus
    j: int
    torsion_order: int
    free_order: int
    torsion_generator: tuple
    free_generator: tuple
    torsion_log: dict
    free_log: dict

    def split(self, label) -> tuple:
        """(torsion index, free digit) for a canonical label."""
        torus, j = self.torus, self.j
        if self.free_order == 1 and self.torsion_order == 1:
            return (0, 0)
        t_part = _label_pow(torus, j, label, self._alpha_torsion)
        f_part = _label_pow(torus, j, label, self._alpha_free)
        return (self.torsion_log[t_part], self.free_log[f_part])

    @property
    def _alpha_torsion(self):
        # projection exponent: 1 mod torsion order, 0 mod free order
        return _crt_exponent(self.torsion_order, self.free_order)

    @property
    def _alpha_free(self):
        return _crt_exponent(self.free_order, self.torsion_order)


def _crt_exponent(keep: int, kill: int) -> int:
    """Exponent congruent to 1 mod keep and 0 mod kill (coprime orders)."""
    if keep == 1:
        return kill  # any multiple of kill; the power collapses to identity
    return kill * pow(kill, -1, keep)


def coset_decomposition(torus: QuadraticTorus, j: int) -> CosetDecomposition:
    p = torus.p
    if j == 0:
        lbl = (1, 0)
        return CosetDecomposition(torus, 0, 1, 1, lbl, lbl, {lbl: 0}, {lbl: 0})
    torsion_order = p + 1
    free_order = p ** (j - 1)
    ident = _canonical_pair(p, j, 1, 0)
    alpha_t = _crt_exponent(torsion_order, free_order)
    alpha_f = _crt_exponent(free_order, torsion_order)
    # torsion generator: first label whose torsion projection has full order
    tgen = None
    for lbl in coset_labels(torus, j):
        cand = _label_pow(torus, j, lbl, alpha_t)
        if _element_order(torus, j, cand, torsion_order + 1) == torsion_order:
            tgen = cand
            break
    assert tgen is not None, "torsion part of the coset group must be cyclic"
    # free generator: projection of 1 + p*sqrt(d)
    fgen = _label_pow(torus, j, _canonical_pair(p, j, 1, p), alpha_f)
    if free_order > 1:
        assert _element_order(torus, j, fgen, free_order) == free_order
    else:
        fgen = ident
    tlog, acc = {}, ident
    for i in range(torsion_order):
        tlog[acc] = i
        acc = _label_mul(torus, j, acc, tgen)
    flog, acc = {}, ident
    for i in range(free_order):
        flog[acc] = i
        acc = _label_mul(torus, j, acc, fgen)
    return CosetDecomposition(torus, j, torsion_order, free_order, tgen, fgen, tlog, flog)


@dataclass(frozen=True)
class OrbitTable:
    """Bijection between level-j cosets and the orbit of the base vertex/edge.

    free_exponent is the p-exponent of the free quotient the labels map onto
    (max(j-1, 0) for the local model).
    """

    torus: QuadraticTorus
    level: int
    mode: str               # "vertex" | "edge"
    labels: tuple           # canonical (x, y) pairs
    images: dict            # label -> Vertex | DirectedEdge
    lookup: dict            # image -> label
    parents: dict           # label -> label at level-1 (empty at level 0)
    split_parts: dict       # label -> (torsion index, free digit)
    free_exponent: int

    def rows(self):
        for lbl in self.labels:
            yield lbl, self.images[lbl]


def _lift_label(torus: QuadraticTorus, label, k: int) -> TorusElement:
    return TorusElement(torus, k, x=label[0], y=label[1])


def orbit_table(torus: QuadraticTorus, j: int, mode: str = "vertex",
                base=None) -> OrbitTable:
    """Enumerate the level-j cosets, act on the j-th base point, and record
    the bijection with its orbit plus the projection to level j-1."""
    if torus.kind != "inert":
        raise ValueError("orbit tables are finite only for the inert kind")
    if mode not in ("vertex", "edge"):
        raise ValueError("mode must be 'vertex' or 'edge'")
    if mode == "edge" and j == 0:
        raise ValueError("edge orbits start at level 1")
    if base is None:
        verts, edges = base_sequence(torus, max(j, 1))
        base = verts[j] if mode == "vertex" else edges[j - 1]
    k = j + 2
    labels = tuple(coset_labels(torus, j))
    acted = pmap(lambda lbl: act(_lift_label(torus, lbl, k), base), labels)
    images, lookup = {}, {}
    for lbl, w in zip(labels, acted):
        if w in lookup:
            raise TransitivityViolation(
                f"cosets {lookup[w]} and {lbl} agree on the base point at level {j}"
            )
        images[lbl] = w
        lookup[w] = lbl
    parents = {}
    if j >= 1:
        for lbl in labels:
            parents[lbl] = reduce_label(torus, j, j - 1, lbl)
    dec = coset_decomposition(torus, j)
    split_parts = {lbl: dec.split(lbl) for lbl in labels}
    return OrbitTable(torus, j, mode, labels, images, lookup, parents,
                      split_parts, max(j - 1, 0))
