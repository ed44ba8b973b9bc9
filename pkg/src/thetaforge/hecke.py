"""Functions on vertices and directed edges of a ball, the two Hecke-type
operators (adjacency sum and non-backtracking transfer), the passage from a
vertex eigenfunction to an edge eigenfunction, seeded eigen-extensions, and
the congruence-to-a-constant invariant.

Forms carry h components evaluated on one stored ball; values are residues
mod p^k wrapped as PrecisionInt.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import EmptyDomain, MissingEigenvalue
from .padic import PrecisionInt, hensel_unit_root
from .tree import Ball, DirectedEdge, Vertex, ball, origin


@dataclass(frozen=True)
class EigenData:
    """Adjacency eigenvalue a_p and/or transfer eigenvalue alpha_p.

    When both are present they must satisfy alpha^2 - a*alpha + p = 0 mod p^k.
    """

    ap: PrecisionInt | None = None
    alpha: PrecisionInt | None = None

    def __post_init__(self):
        if self.ap is not None and self.alpha is not None:
            a, al = self.ap, self.alpha
            q = PrecisionInt(al.p, al.k, al.p)
            if not (al * al - a * al + q).is_zero():
                raise ValueError("alpha is not a root of x^2 - a x + p")

    @staticmethod
    def ordinary(p: int, k: int, ap: int) -> "EigenData":
        a = PrecisionInt(p, k, ap)
        return EigenData(ap=a, alpha=hensel_unit_root(a, p, k))

    @staticmethod
    def supersingular(p: int, k: int) -> "EigenData":
        return EigenData(ap=PrecisionInt(p, k, 0), alpha=None)


@dataclass(frozen=True)
class VertexForm:
    p: int
    k: int
    h: int
    domain: Ball
    tables: tuple           # one dict Vertex -> PrecisionInt per component

    def value(self, i: int, v: Vertex) -> PrecisionInt:
        return self.tables[i][v]

    def vertices(self):
        return self.tables[0].keys()


@dataclass(frozen=True)
class EdgeForm:
    p: int
    k: int
    h: int
    domain: Ball
    tables: tuple           # one dict DirectedEdge -> PrecisionInt per component

    def value(self, i: int, e: DirectedEdge) -> PrecisionInt:
        return self.tables[i][e]

    def edges(self):
        return self.tables[0].keys()


def _shrunk_ball(b: Ball) -> Ball:
    if b.radius == 0:
        raise EmptyDomain("cannot shrink a radius-0 ball")
    inner = set()
    for s in b.spheres[: b.radius]:
        inner.update(s)
    parent = {v: w for v, w in b.parent.items() if v in inner}
    return Ball(b.center, b.radius - 1, b.spheres[: b.radius], parent)


def hecke_T(f: VertexForm) -> VertexForm:
    """(T f)(v) = sum of f over the p+1 neighbors of v, on the shrunken ball."""
    if f.domain.radius < 1:
        raise EmptyDomain("adjacency sum needs radius >= 1")
    inner = _shrunk_ball(f.domain)
    from .tree import neighbors

    tables = []
    for table in f.tables:
        out = {}
        for v in inner.vertices():
            acc = PrecisionInt(f.p, f.k, 0)
            for w in neighbors(v):
                acc = acc + table[w]
            out[v] = acc
        tables.append(out)
    return VertexForm(f.p, f.k, f.h, inner, tuple(tables))


def interior_edges(b: Ball):
    """Directed edges whose target is at depth <= radius - 1, so that every
    non-backtracking continuation stays inside the ball."""
    depth = {}
    for j, s in enumerate(b.spheres):
        for v in s:
            depth[v] = j
    for e in b.directed_edges():
        if depth[e.target] <= b.radius - 1:
            yield e


def hecke_U(f: EdgeForm) -> EdgeForm:
    """(U f)(e) = sum of f over the p continuations of e (reversal excluded).

    Defined on the edges whose p continuations all carry values, so repeated
    application keeps shrinking the edge set inward.
    """
    if f.domain.radius < 1:
        raise EmptyDomain("transfer sum needs radius >= 1")
    from .tree import neighbors

    known = set(f.tables[0])
    tables = [dict() for _ in range(f.h)]
    for e in f.tables[0]:
        conts = [
            DirectedEdge(e.target, w)
            for w in neighbors(e.target)
            if w != e.source
        ]
        assert len(conts) == f.p
        if not all(c in known for c in conts):
            continue
        for i in range(f.h):
            acc = PrecisionInt(f.p, f.k, 0)
            for c in conts:
                acc = acc + f.tables[i][c]
            tables[i][e] = acc
    if not tables[0]:
        raise EmptyDomain("no edge has all its continuations in the domain")
    return EdgeForm(f.p, f.k, f.h, f.domain, tuple(tables))


def source_form(f0: VertexForm) -> EdgeForm:
    """Edge form e -> f0(source(e))."""
    tables = []
    for table in f0.tables:
        out = {e: table[e.source] for e in f0.domain.directed_edges()}
        tables.append(out)
    return EdgeForm(f0.p, f0.k, f0.h, f0.domain, tuple(tables))


def target_form(f0: VertexForm) -> EdgeForm:
    """Edge form e -> f0(target(e))."""
    tables = []
    for table in f0.tables:
        out = {e: table[e.target] for e in f0.domain.directed_edges()}
        tables.append(out)
    return EdgeForm(f0.p, f0.k, f0.h, f0.domain, tuple(tables))


def stabilize(f0: VertexForm, eigen: EigenData) -> EdgeForm:
    """phi(e) = f0(source(e)) - alpha * f0(target(e)).

    When f0 satisfies the adjacency eigen-equation at interior vertices, the
    result satisfies U phi = alpha phi on interior edges.
    """
    if eigen.alpha is None:
        raise MissingEigenvalue("stabilization needs the transfer eigenvalue")
    alpha = eigen.alpha
    tables = []
    for table in f0.tables:
        out = {}
        for e in f0.domain.directed_edges():
            out[e] = table[e.source] - alpha * table[e.target]
        tables.append(out)
    return EdgeForm(f0.p, f0.k, f0.h, f0.domain, tuple(tables))


def local_eigen_extend(p: int, k: int, ap: int, radius: int, seed: int,
                       h: int = 1) -> VertexForm:
    """Seeded vertex form on the radius-R ball with (T f)(v) = ap f(v) at
    every interior vertex.

    Built outward sphere by sphere: the p (or p+1) children sums at each
    vertex are constrained, so all but the last child value are drawn from
    the seed and the last is corrected.
    """
    if radius < 1:
        raise ValueError("radius must be >= 1")
    b = ball(origin(p), radius)
    mod = p**k
    a = ap % mod
    tables = []
    for i in range(h):
        rng = random.Random(seed * 1000003 + i)
        vals = {b.center: rng.randrange(mod)}
        # sphere 1: p+1 children of the center
        children = list(b.spheres[1])
        need = a * vals[b.center] % mod
        for w in children[:-1]:
            vals[w] = rng.randrange(mod)
            need = (need - vals[w]) % mod
        vals[children[-1]] = need
        for j in range(1, radius):
            for v in b.spheres[j]:
                kids = [w for w in b.spheres[j + 1] if b.parent[w] == v]
                need = (a * vals[v] - vals[b.parent[v]]) % mod
                for w in kids[:-1]:
                    vals[w] = rng.randrange(mod)
                    need = (need - vals[w]) % mod
                vals[kids[-1]] = need
        tables.append({v: PrecisionInt(p, k, c) for v, c in vals.items()})
    return VertexForm(p, k, h, b, tuple(tables))


def scale_form(f, factor: int):
    """Multiply every value of a vertex or edge form by an integer."""
    tables = tuple(
        {w: val * factor for w, val in table.items()} for table in f.tables
    )
    if isinstance(f, VertexForm):
        return VertexForm(f.p, f.k, f.h, f.domain, tables)
    return EdgeForm(f.p, f.k, f.h, f.domain, tables)


def nu_invariant(f) -> int:
    """Largest c <= k such that all values (all components pooled) agree
    modulo p^c: the minimum pairwise valuation of differences."""
    values = []
    for table in f.tables:
        values.extend(table.values())
    if not values:
        raise EmptyDomain("form has no values")
    base = values[0]
    return min((v - base).valuation() for v in values)
