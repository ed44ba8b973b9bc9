"""The Bruhat-Tits tree of PGL2(Q_p) as homothety classes of rank-2 lattices.

A vertex is the scalar-normalized column Hermite form [[p^a, u], [0, p^b]]
with 0 <= u < p^a and min(a, b, val(u)) = 0; two vertices are equal iff their
fields are equal.  Edges are ordered pairs of adjacent vertices.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import PrecisionExhausted
from .util import val_p


@dataclass(frozen=True)
class Vertex:
    p: int
    a: int
    b: int
    u: int

    def __post_init__(self):
        if self.a < 0 or self.b < 0:
            raise ValueError("exponents must be nonnegative")
        if not (0 <= self.u < self.p**self.a):
            raise ValueError("u must lie in [0, p^a)")
        vu = val_p(self.u, self.p)
        floor = min(self.a, self.b) if vu is None else min(self.a, self.b, vu)
        if floor != 0:
            raise ValueError("matrix is not scalar-normalized")

    def basis_matrix(self):
        """Exact integer column basis [[p^a, u], [0, p^b]]."""
        return (self.p**self.a, self.u, 0, self.p**self.b)

    def to_json(self):
        return {"a": self.a, "b": self.b, "u": str(self.u)}

    @staticmethod
    def from_json(p: int, obj) -> "Vertex":
        return Vertex(p, int(obj["a"]), int(obj["b"]), int(obj["u"]))


def origin(p: int) -> Vertex:
    """The class of Z_p + Z_p."""
    return Vertex(p, 0, 0, 0)


@dataclass(frozen=True)
class DirectedEdge:
    source: Vertex
    target: Vertex

    def __post_init__(self):
        if distance(self.source, self.target) != 1:
            raise ValueError("edge endpoints must be adjacent")

    @property
    def p(self) -> int:
        return self.source.p

    def reversal(self) -> "DirectedEdge":
        return DirectedEdge(self.target, self.source)

    def to_json(self):
        return {"source": self.source.to_json(), "target": self.target.to_json()}

    @staticmethod
    def from_json(p: int, obj) -> "DirectedEdge":
        return DirectedEdge(Vertex.from_json(p, obj["source"]), Vertex.from_json(p, obj["target"]))


def _reduce_triangular(p, x, up, y, prec):
    """Normalize an upper-triangular residue matrix [[x, up], [0, y]] known
    mod p^prec into Vertex data, or raise when the digits run out."""
    mod = p**prec
    x %= mod
    y %= mod
    up %= mod
    if x == 0 or y == 0:
        raise PrecisionExhausted("diagonal entry is zero to working precision")
    va, vb = val_p(x, p), val_p(y, p)
    if va >= prec or vb >= prec:
        raise PrecisionExhausted("diagonal valuation exceeds working precision")
    vu = val_p(up, p) if up else None
    c = min(va, vb) if vu is None else min(va, vb, vu)
    a, b = va - c, vb - c
    if a + b >= prec - c:
        raise PrecisionExhausted("result exponents exceed working precision")
    # scale the second column by the unit part of y, then reduce u mod p^a
    unit_y = (y // p**vb) % mod
    u = (up // p**c) * pow(unit_y, -1, mod) % p**a if a > 0 else 0
    return Vertex(p, a, b, u)


def _normal_form_residues(p, m00, m01, m10, m11, prec):
    """Column-reduce a residue matrix known mod p^prec to a Vertex."""
    mod = p**prec
    m00, m01, m10, m11 = m00 % mod, m01 % mod, m10 % mod, m11 % mod
    v0 = val_p(m10, p) if m10 else prec
    v1 = val_p(m11, p) if m11 else prec
    if min(v0, v1) >= prec:
        # bottom row vanishes to precision: already triangular
        return _reduce_triangular(p, m00, m01, m11, prec)
    if v1 > v0:
        m00, m01 = m01, m00
        m10, m11 = m11, m10
        v0, v1 = v1, v0
    # pivot on m11: clear m10 with the exact quotient m10/m11
    q = (m10 // p**v1) * pow(m11 // p**v1, -1, mod) % mod
    m00 = (m00 - q * m01) % mod
    # now the matrix is [[m00, m01], [0, m11]] up to the column swap that
    # puts the zero in the bottom-left corner
    return _reduce_triangular(p, m00, m01, m11, prec)


def normal_form(m) -> Vertex:
    """Vertex for the column span of a 2x2 PrecisionInt matrix."""
    (m00, m01), (m10, m11) = m
    p, k = m00.p, m00.k
    if any((e.p, e.k) != (p, k) for e in (m01, m10, m11)):
        raise ValueError("matrix entries must share (p, k)")
    return _normal_form_residues(p, m00.residue, m01.residue, m10.residue, m11.residue, k)


def normal_form_exact(p: int, m00: int, m01: int, m10: int, m11: int) -> Vertex:
    """Vertex for the column span of an exact integer matrix with nonzero det."""
    det = m00 * m11 - m01 * m10
    if det == 0:
        raise ValueError("matrix is singular")
    prec = val_p(det, p) + 1
    return _normal_form_residues(p, m00, m01, m10, m11, prec)


def neighbors(v: Vertex) -> list:
    """The p+1 classes of index-p sublattices of a representative of v."""
    p = v.p
    pa, u, _, pb = v.basis_matrix()
    out = []
    for c in range(p):
        # g_v * [[p, c], [0, 1]]
        out.append(normal_form_exact(p, pa * p, c * pa + u, 0, pb))
    # g_v * [[1, 0], [0, p]]
    out.append(normal_form_exact(p, pa, p * u, 0, pb * p))
    assert len(set(out)) == p + 1
    return out


def distance(v: Vertex, w: Vertex) -> int:
    """Tree distance |b - a| of the elementary divisor exponents of the
    relative matrix; exact for normal-form vertices."""
    if v.p != w.p:
        raise ValueError("vertices on different trees")
    p = v.p
    # adj(g_v) * g_w, an exact upper-triangular integer matrix
    top = p**v.b * p**w.a
    off = p**v.b * w.u - v.u * p**w.b
    bot = p**v.a * p**w.b
    voff = val_p(off, p)
    vals = [val_p(top, p), val_p(bot, p)] + ([] if voff is None else [voff])
    c = min(vals)
    return (v.a + v.b + w.a + w.b) - 2 * c


@dataclass(frozen=True)
class Ball:
    """Distance-closed ball with its breadth-first tree structure."""

    center: Vertex
    radius: int
    spheres: tuple          # spheres[j] = tuple of vertices at distance j
    parent: dict = field(hash=False)

    @property
    def p(self) -> int:
        return self.center.p

    def vertices(self):
        for s in self.spheres:
            yield from s

    def vertex_set(self) -> frozenset:
        return frozenset(self.vertices())

    def depth(self, v: Vertex) -> int:
        for j, s in enumerate(self.spheres):
            if v in s:
                return j
        raise KeyError(v)

    def directed_edges(self):
        """All oriented adjacent pairs inside the ball (tree edges, both ways)."""
        for child, par in self.parent.items():
            yield DirectedEdge(par, child)
            yield DirectedEdge(child, par)

    def children(self, v: Vertex) -> list:
        return [c for c, par in self.parent.items() if par == v]


def ball(v: Vertex, radius: int) -> Ball:
    spheres = [(v,)]
    parent = {}
    frontier = [v]
    for _ in range(radius):
        nxt = []
        for x in frontier:
            par = parent.get(x)
            for w in neighbors(x):
                if w != par:
                    parent[w] = x
                    nxt.append(w)
        spheres.append(tuple(nxt))
        frontier = nxt
    return Ball(v, radius, tuple(spheres), parent)


def sphere(v: Vertex, r: int) -> list:
    """All vertices at distance exactly r, by non-backtracking expansion."""
    if r < 0:
        raise ValueError("radius must be nonnegative")
    if r == 0:
        return [v]
    return list(ball(v, r).spheres[r])


def geodesic_path(v: Vertex, w: Vertex) -> list:
    """The unique path v = x_0, ..., x_d = w of adjacent vertices."""
    path = [v]
    d = distance(v, w)
    x = v
    while d > 0:
        for y in neighbors(x):
            if distance(y, w) == d - 1:
                path.append(y)
                x = y
                d -= 1
                break
        else:
            raise AssertionError("no descending neighbor; tree structure broken")
    return path


def to_dot(center: Vertex, radius: int) -> str:
    """DOT text for the ball around a vertex, for quick visual inspection."""
    b = ball(center, radius)
    lines = ["graph bruhat_tits {"]

    def name(x):
        return f'"{x.a},{x.b},{x.u}"'

    lines.append(f"  {name(center)} [shape=doublecircle];")
    for child, par in b.parent.items():
        lines.append(f"  {name(par)} -- {name(child)};")
    lines.append("}")
    return "\n".join(lines) + "\n"
