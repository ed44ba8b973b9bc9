"""Towers of coefficient tables satisfying the exact distribution relations,
their group-ring theta elements, ordinary normalization, plus/minus
extraction for zero adjacency eigenvalue, and the product L-element.

A system stores, per level, a table over opaque coset labels together with
the fiber map to the previous level and the projection of each label to the
free quotient (Z/p^m(level))^delta.  The distribution checker needs only
fibers; the theta pushforward needs only the free projections.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from . import groupring
from .errors import (
    CompatibilityViolation,
    DistributionViolation,
    NotOrdinary,
    NotSupersingular,
    PrecisionExhausted,
    UnsupportedDelta,
)
from .groupring import GroupRingElement, QuotientClass, divide_omega_tilde, star
from .hecke import EigenData, VertexForm
from .torus import (
    QuadraticTorus,
    TorusElement,
    act,
    base_sequence,
    orbit_table,
)


@dataclass(frozen=True)
class CompatibleSystem:
    p: int
    k: int
    delta: int
    mode: str                   # "vertex" | "edge"
    eigen: EigenData
    n_max: int
    torsion: int
    level_exp: tuple            # m(j) per level j
    levels: tuple               # levels[j]: dict label -> residue (None below start)
    fibers: tuple               # fibers[j]: dict label_j -> label_{j-1}
    free: tuple                 # free[j]: dict label -> digit tuple

    @property
    def start_level(self) -> int:
        return 0 if self.mode == "vertex" else 1

    def table(self, j: int) -> dict:
        t = self.levels[j]
        if t is None:
            raise ValueError(f"level {j} is not populated")
        return t

    def labels(self, j: int):
        return self.table(j).keys()

    def with_coefficient(self, j: int, label: str, residue: int) -> "CompatibleSystem":
        levels = list(self.levels)
        new = dict(levels[j])
        new[label] = residue % self.p**self.k
        levels[j] = new
        return CompatibleSystem(
            self.p, self.k, self.delta, self.mode, self.eigen, self.n_max,
            self.torsion, self.level_exp, tuple(levels), self.fibers, self.free,
        )

    def scaled(self, factor: int) -> "CompatibleSystem":
        mod = self.p**self.k
        levels = tuple(
            None if t is None else {lbl: c * factor % mod for lbl, c in t.items()}
            for t in self.levels
        )
        return CompatibleSystem(
            self.p, self.k, self.delta, self.mode, self.eigen, self.n_max,
            self.torsion, self.level_exp, levels, self.fibers, self.free,
        )


@dataclass(frozen=True)
class DistributionReport:
    ok: bool
    relations_checked: int
    first_violation: tuple | None   # (upper layer, label, lhs, rhs)

    def to_json(self):
        out = {"ok": self.ok, "relations_checked": self.relations_checked}
        if self.first_violation is not None:
            layer, label, lhs, rhs = self.first_violation
            out["violation"] = {"layer": layer, "label": label,
                                "lhs": str(lhs), "rhs": str(rhs)}
        return out


@dataclass(frozen=True)
class ThetaElement:
    level: int
    value: GroupRingElement
    normalization: int          # exponent r of the alpha^(-r) factor applied


@dataclass(frozen=True)
class SignedThetaClass:
    level: int                  # system level the table came from
    layer: int                  # algebra layer of the group ring
    eps: int
    cls: QuotientClass          # representative already carries the sign


@dataclass(frozen=True)
class PMPair:
    plus: SignedThetaClass | None
    minus: SignedThetaClass | None


@dataclass(frozen=True)
class PadicLFunction:
    kind: str                   # "ordinary" | "plus" | "minus"
    level: int
    value: GroupRingElement
    ideal_tag: str | None
    factor_value: GroupRingElement


# ---------------------------------------------------------------------------
# construction from a form on the tree


def from_tree(form, torus: QuadraticTorus, eigen: EigenData, n_max: int,
              shift: TorusElement | None = None, validate: bool = True) -> CompatibleSystem:
    """Read a compatible system off the orbit tables: c_j(h) = form(h * w_j).

    The form must be a local eigen-extension (vertex mode) or a stabilized
    eigen edge form (edge mode) defined on a ball of radius >= n_max.
    """
    if torus.kind != "inert":
        raise ValueError("genuine systems are built for the inert kind")
    mode = "vertex" if isinstance(form, VertexForm) else "edge"
    if form.h != 1:
        raise ValueError("genuine systems use a single component")
    if form.domain.radius < n_max:
        raise PrecisionExhausted(
            f"form ball radius {form.domain.radius} < depth {n_max}"
        )
    p, k = form.p, form.k
    verts, edges = base_sequence(torus, n_max)
    start = 0 if mode == "vertex" else 1
    levels: list = [None] * (n_max + 1)
    fibers: list = [None] * (n_max + 1)
    free: list = [None] * (n_max + 1)
    level_exp = tuple(max(j - 1, 0) for j in range(n_max + 1))
    for j in range(start, n_max + 1):
        base = verts[j] if mode == "vertex" else edges[j - 1]
        if shift is not None:
            base = act(shift, base)
        tab = orbit_table(torus, j, mode, base=base)
        table = {}
        fib = {}
        fr = {}
        for lbl, w in tab.rows():
            key = f"{lbl[0]}:{lbl[1]}"
            table[key] = form.tables[0][w].residue
            tau, digit = tab.split_parts[lbl]
            fr[key] = (digit,)
            if j > start:
                par = tab.parents[lbl]
                fib[key] = f"{par[0]}:{par[1]}"
        levels[j] = table
        free[j] = fr
        if j > start:
            fibers[j] = fib
    sys = CompatibleSystem(
        p, k, 1, mode, eigen, n_max, torus.p + 1, level_exp,
        tuple(levels), tuple(fibers), tuple(free),
    )
    if validate:
        report = check_distribution(sys)
        if not report.ok:
            raise DistributionViolation(f"distribution relations fail: {report.to_json()}")
    return sys


# ---------------------------------------------------------------------------
# synthetic systems


def _synth_labels(p, delta, torsion, m, level):
    """Deterministic label list for Z/torsion x (Z/p^m)^delta."""
    if level == 0:
        return [(0, (0,) * delta)]
    out = []
    size = p**m
    total = size**delta
    for tau in range(torsion):
        for idx in range(total):
            digits = []
            rest = idx
            for _ in range(delta):
                digits.append(rest % size)
                rest //= size
            out.append((tau, tuple(reversed(digits))))
    return out


def _label_key(lbl):
    tau, digits = lbl
    return f"{tau}|{','.join(str(d) for d in digits)}"


def synth_system(p: int, k: int, mode: str, eigen: EigenData, n_max: int,
                 delta: int = 1, torsion: int | None = None,
                 level_map: str = "local", seed: int = 0) -> CompatibleSystem:
    """Seeded tower satisfying the distribution relations by construction.

    Coefficients at each new level are drawn from the seed, then one member
    of every fiber is corrected so the fiber sum matches the required
    combination of the two lower levels.

    level_map "local" uses free exponents m(j) = max(j-1, 0) (mirroring the
    inert orbit structure); "full" uses m(j) = j.
    """
    if mode not in ("vertex", "edge"):
        raise ValueError("mode must be 'vertex' or 'edge'")
    if torsion is None:
        torsion = p + 1
    if torsion % p == 0:
        raise ValueError("torsion order must be coprime to p")
    if level_map == "local":
        level_exp = tuple(max(j - 1, 0) for j in range(n_max + 1))
    elif level_map == "full":
        level_exp = tuple(range(n_max + 1))
    else:
        raise ValueError("level_map must be 'local' or 'full'")
    mod = p**k
    start = 0 if mode == "vertex" else 1
    if mode == "vertex" and eigen.ap is None:
        raise ValueError("vertex systems need the adjacency eigenvalue")
    if mode == "edge" and eigen.alpha is None:
        raise ValueError("edge systems need the transfer eigenvalue")
    rng = random.Random(seed)
    all_labels = [
        _synth_labels(p, delta, torsion if j >= 1 else 1, level_exp[j], j)
        for j in range(n_max + 1)
    ]
    levels: list = [None] * (n_max + 1)
    fibers: list = [None] * (n_max + 1)
    free: list = [None] * (n_max + 1)
    for j in range(start, n_max + 1):
        free[j] = {_label_key(l): l[1] for l in all_labels[j]}
        if j > start:
            size = p ** level_exp[j - 1]
            fib = {}
            for tau, digits in all_labels[j]:
                parent = (tau, tuple(d % size for d in digits)) if j - 1 >= 1 else (0, (0,) * delta)
                fib[_label_key((tau, digits))] = _label_key(parent)
            fibers[j] = fib
    # first populated level is free
    first = all_labels[start]
    levels[start] = {_label_key(l): rng.randrange(mod) for l in first}
    for j in range(start, n_max):
        upper = all_labels[j + 1]
        by_parent: dict = {}
        for lbl in upper:
            by_parent.setdefault(fibers[j + 1][_label_key(lbl)], []).append(_label_key(lbl))
        table = {}
        for parent_key, members in sorted(by_parent.items()):
            if mode == "edge":
                target = eigen.alpha.residue * levels[j][parent_key] % mod
            else:
                target = eigen.ap.residue * levels[j][parent_key] % mod
                if j >= 1:
                    grand = fibers[j][parent_key]
                    target = (target - levels[j - 1][grand]) % mod
            acc = 0
            for key in members[:-1]:
                table[key] = rng.randrange(mod)
                acc = (acc + table[key]) % mod
            table[members[-1]] = (target - acc) % mod
        levels[j + 1] = table
    return CompatibleSystem(
        p, k, delta, mode, eigen, n_max, torsion, level_exp,
        tuple(levels), tuple(fibers), tuple(free),
    )


# ---------------------------------------------------------------------------
# the exact distribution checker


def check_distribution(sys: CompatibleSystem) -> DistributionReport:
    """Recompute both sides of every applicable projection relation."""
    mod = sys.p**sys.k
    start = sys.start_level
    checked = 0
    for j in range(start, sys.n_max):
        upper = j + 1
        sums: dict = {key: 0 for key in sys.labels(j)}
        for key, c in sys.table(upper).items():
            sums[sys.fibers[upper][key]] = (sums[sys.fibers[upper][key]] + c) % mod
        for key in sorted(sys.labels(j)):
            lhs = sums[key]
            if sys.mode == "edge":
                rhs = sys.eigen.alpha.residue * sys.table(j)[key] % mod
            else:
                rhs = sys.eigen.ap.residue * sys.table(j)[key] % mod
                if j >= 1:
                    rhs = (rhs - sys.table(j - 1)[sys.fibers[j][key]]) % mod
            checked += 1
            if lhs != rhs:
                return DistributionReport(False, checked, (upper, key, lhs, rhs))
    return DistributionReport(True, checked, None)


# ---------------------------------------------------------------------------
# theta elements


def theta_level(sys: CompatibleSystem, n: int) -> ThetaElement:
    """Pushforward of the level-n table to the free quotient group ring."""
    if n > sys.n_max or n < sys.start_level:
        raise ValueError(f"level {n} outside populated range")
    layer = sys.level_exp[n]
    elt = groupring.zero(sys.p, sys.k, layer, sys.delta)
    coeffs = list(elt.coeffs)
    for key, c in sys.table(n).items():
        coeffs[elt.index(sys.free[n][key])] += c
    value = GroupRingElement(sys.p, sys.k, layer, sys.delta, tuple(coeffs))
    return ThetaElement(n, value, 0)


def theta_ordinary(sys: CompatibleSystem, n: int) -> ThetaElement:
    """alpha^(-n) times the raw theta, with exact tower compatibility checked."""
    if sys.mode != "edge":
        raise NotOrdinary("ordinary normalization applies to edge systems")
    alpha = sys.eigen.alpha
    if alpha is None or not alpha.is_unit():
        raise NotOrdinary("transfer eigenvalue is not a unit")
    inv = alpha.inverse()
    thetas = {}
    for j in range(sys.start_level, n + 1):
        raw = theta_level(sys, j).value
        scale = pow(inv.residue, j, sys.p**sys.k)
        thetas[j] = ThetaElement(j, raw * scale, j)
    for j in range(sys.start_level + 1, n + 1):
        upper, lower = thetas[j].value, thetas[j - 1].value
        if sys.level_exp[j] == sys.level_exp[j - 1]:
            projected = upper
        else:
            projected = groupring.project(upper)
        if projected != lower:
            raise CompatibilityViolation(f"projection of layer {j} misses layer {j - 1}")
    return thetas[n]


def _pm_extract_at(sys: CompatibleSystem, level: int) -> SignedThetaClass:
    layer = sys.level_exp[level]
    eps = 1 if layer % 2 == 0 else -1
    raw = theta_level(sys, level).value
    annihilator = groupring.reduce_poly(
        groupring.omega_pm_poly(sys.p, layer, eps), sys.p, sys.k, layer
    )
    if not (annihilator * raw).is_zero():
        raise NotSupersingular(
            f"omega annihilation fails at level {level} (layer {layer})"
        )
    cls = divide_omega_tilde(raw, eps)
    half = layer // 2 if eps > 0 else (layer + 1) // 2
    sign = -1 if half % 2 else 1
    signed = QuotientClass(cls.rep * sign, cls.ideal_tag, cls.ideal_poly)
    return SignedThetaClass(level, layer, eps, signed)


def pm_extract(sys: CompatibleSystem, n: int) -> PMPair:
    """Signed plus/minus classes from the latest levels of each parity."""
    if sys.mode != "vertex":
        raise NotSupersingular("plus/minus extraction applies to vertex systems")
    if sys.eigen.ap is None or sys.eigen.ap.residue != 0:
        raise NotSupersingular("adjacency eigenvalue must be zero")
    if sys.delta != 1:
        raise UnsupportedDelta("plus/minus extraction is defined for delta = 1")
    plus = minus = None
    for level in range(n, sys.start_level - 1, -1):
        parity = sys.level_exp[level] % 2
        if parity == 0 and plus is None:
            plus = _pm_extract_at(sys, level)
        elif parity == 1 and minus is None:
            minus = _pm_extract_at(sys, level)
        if plus is not None and minus is not None:
            break
    return PMPair(plus, minus)


def pm_project_class(cls: SignedThetaClass, target_layer: int) -> QuotientClass:
    """Reduce a signed class to a lower layer of the same parity, where it is
    a class modulo the smaller omega ideal."""
    if (cls.layer - target_layer) % 2 != 0 or target_layer > cls.layer:
        raise ValueError("target layer must be lower and of equal parity")
    rep = groupring.project_to(cls.cls.rep, target_layer)
    poly = groupring.omega_pm_poly(rep.p, target_layer, cls.eps)
    return QuotientClass(rep, cls.cls.ideal_tag, poly)


def lp(sys: CompatibleSystem, n: int, kind: str = "ordinary") -> PadicLFunction:
    """The product of the (normalized or signed) theta with its involution."""
    if kind == "ordinary":
        theta = theta_ordinary(sys, n)
        value = theta.value * star(theta.value)
        return PadicLFunction("ordinary", n, value, None, theta.value)
    if kind in ("plus", "minus"):
        pair = pm_extract(sys, n)
        cls = pair.plus if kind == "plus" else pair.minus
        if cls is None:
            raise NotSupersingular(f"no level of the required parity up to {n}")
        rep = cls.cls.rep
        value = rep * star(rep)
        return PadicLFunction(kind, cls.level, value, cls.cls.ideal_tag, rep)
    raise ValueError("kind must be 'ordinary', 'plus' or 'minus'")
