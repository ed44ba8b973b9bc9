"""Finite group rings (Z/p^k)[(Z/p^n)^delta] with dual group-ring and
polynomial views, layer projections, the norm-sum lift, the inversion
involution, mu/lambda invariants, and exact division by the parity-split
cyclotomic products that organize the plus/minus decomposition.

The polynomial view identifies the generator of each cyclic factor with
T_i + 1, so the layer-n ring in one variable is (Z/p^k)[T]/((T+1)^(p^n)-1).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import linalg
from .errors import NotDivisible, UnsupportedDelta
from .padic import IntPolynomial, T_POLY, cyclotomic_sigma
from .util import capped_val


@dataclass(frozen=True)
class GroupRingElement:
    """Dense coefficient table over (Z/p^n)^delta with entries mod p^k."""

    p: int
    k: int
    n: int
    delta: int
    coeffs: tuple

    def __post_init__(self):
        size = self.group_size
        mod = self.p**self.k
        cs = tuple(int(c) % mod for c in self.coeffs)
        if len(cs) != size:
            raise ValueError(f"expected {size} coefficients, got {len(cs)}")
        object.__setattr__(self, "coeffs", cs)

    @property
    def order(self) -> int:
        return self.p**self.n

    @property
    def group_size(self) -> int:
        return self.order**self.delta

    def index(self, tup) -> int:
        q = self.order
        idx = 0
        for t in tup:
            idx = idx * q + (t % q)
        return idx

    def tuple_of(self, idx: int) -> tuple:
        q = self.order
        out = []
        for _ in range(self.delta):
            out.append(idx % q)
            idx //= q
        return tuple(reversed(out))

    def coefficient(self, tup) -> int:
        return self.coeffs[self.index(tup)]

    def _check(self, other):
        if (self.p, self.k, self.n, self.delta) != (other.p, other.k, other.n, other.delta):
            raise ValueError("elements live in different group rings")

    def __add__(self, other):
        self._check(other)
        return GroupRingElement(
            self.p, self.k, self.n, self.delta,
            tuple(a + b for a, b in zip(self.coeffs, other.coeffs)),
        )

    def __sub__(self, other):
        self._check(other)
        return GroupRingElement(
            self.p, self.k, self.n, self.delta,
            tuple(a - b for a, b in zip(self.coeffs, other.coeffs)),
        )

    def __neg__(self):
        return self * (-1)

    def __mul__(self, other):
        if isinstance(other, int):
            return GroupRingElement(
                self.p, self.k, self.n, self.delta,
                tuple(c * other for c in self.coeffs),
            )
        self._check(other)
        return _convolve(self, other)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def augmentation(self) -> int:
        return sum(self.coeffs) % self.p**self.k

    def to_json(self):
        out = {}
        for idx, c in enumerate(self.coeffs):
            if c:
                tup = self.tuple_of(idx)
                out["(" + ",".join(str(t) for t in tup) + ")"] = str(c)
        return {"p": self.p, "k": self.k, "n": self.n, "delta": self.delta, "coeffs": out}

    @staticmethod
    def from_json(obj) -> "GroupRingElement":
        p, k, n, delta = int(obj["p"]), int(obj["k"]), int(obj["n"]), int(obj["delta"])
        size = (p**n) ** delta
        coeffs = [0] * size
        elt = GroupRingElement(p, k, n, delta, tuple(coeffs))
        for key, val in obj["coeffs"].items():
            tup = tuple(int(s) for s in key.strip("()").split(",") if s != "")
            coeffs[elt.index(tup)] = int(val)
        return GroupRingElement(p, k, n, delta, tuple(coeffs))


def zero(p: int, k: int, n: int, delta: int = 1) -> GroupRingElement:
    return GroupRingElement(p, k, n, delta, (0,) * (p**n) ** delta)


def one(p: int, k: int, n: int, delta: int = 1) -> GroupRingElement:
    return delta_element(p, k, n, (0,) * delta)


def delta_element(p: int, k: int, n: int, tup) -> GroupRingElement:
    z = zero(p, k, n, len(tup))
    coeffs = list(z.coeffs)
    coeffs[z.index(tuple(tup))] = 1
    return GroupRingElement(p, k, n, len(tup), tuple(coeffs))


def _convolve(x: GroupRingElement, y: GroupRingElement) -> GroupRingElement:
    mod = x.p**x.k
    q = x.order
    if x.delta == 1:
        a = np.array(x.coeffs, dtype=object if mod >= 2**31 else np.int64)
        b = np.array(y.coeffs, dtype=a.dtype)
        if q == 1:
            return GroupRingElement(x.p, x.k, x.n, 1, (int(a[0]) * int(b[0]),))
        full = np.convolve(a, b)
        out = full[:q].copy()
        out[: q - 1] += full[q:]
        return GroupRingElement(x.p, x.k, x.n, 1, tuple(int(v) % mod for v in out))
    out = [0] * x.group_size
    for i, ci in enumerate(x.coeffs):
        if ci == 0:
            continue
        ti = x.tuple_of(i)
        for j, cj in enumerate(y.coeffs):
            if cj == 0:
                continue
            tj = y.tuple_of(j)
            tup = tuple((ai + aj) % q for ai, aj in zip(ti, tj))
            out[x.index(tup)] = (out[x.index(tup)] + ci * cj) % mod
    return GroupRingElement(x.p, x.k, x.n, x.delta, tuple(out))


def star(x: GroupRingElement) -> GroupRingElement:
    """Involution induced by group inversion."""
    q = x.order
    out = [0] * x.group_size
    for idx, c in enumerate(x.coeffs):
        tup = x.tuple_of(idx)
        out[x.index(tuple((-t) % q for t in tup))] = c
    return GroupRingElement(x.p, x.k, x.n, x.delta, tuple(out))


def project(x: GroupRingElement) -> GroupRingElement:
    """Layer n -> n-1: sum coefficients over the fibers of digit truncation."""
    if x.n == 0:
        raise ValueError("layer 0 has no lower layer")
    target = zero(x.p, x.k, x.n - 1, x.delta)
    q = target.order
    out = [0] * target.group_size
    for idx, c in enumerate(x.coeffs):
        if c:
            tup = x.tuple_of(idx)
            out[target.index(tuple(t % q for t in tup))] += c
    return GroupRingElement(x.p, x.k, x.n - 1, x.delta, tuple(out))


def project_to(x: GroupRingElement, n: int) -> GroupRingElement:
    while x.n > n:
        x = project(x)
    if x.n != n:
        raise ValueError("cannot project upward")
    return x


def xi(x: GroupRingElement) -> GroupRingElement:
    """Layer n -> n+1: coefficient at a point is the coefficient at its
    truncation (equivalently, any lift times the kernel norm sum)."""
    target = zero(x.p, x.k, x.n + 1, x.delta)
    q = x.order
    out = []
    for idx in range(target.group_size):
        tup = target.tuple_of(idx)
        out.append(x.coefficient(tuple(t % q for t in tup)))
    return GroupRingElement(x.p, x.k, x.n + 1, x.delta, tuple(out))


def mu_invariant(x: GroupRingElement) -> int:
    """Minimal coefficient valuation, capped at k for the zero element."""
    return min((capped_val(c, x.p, x.k) for c in x.coeffs), default=x.k)


def lambda_invariant(x: GroupRingElement) -> int:
    """Index of the first polynomial-view coefficient of minimal valuation."""
    if x.delta != 1:
        raise UnsupportedDelta("lambda invariant is defined for delta = 1")
    poly = poly_view(x)
    mu = min(capped_val(c, x.p, x.k) for c in poly)
    for i, c in enumerate(poly):
        if capped_val(c, x.p, x.k) == mu:
            return i
    return 0


# ---------------------------------------------------------------------------
# polynomial view (delta = 1): generator <-> T + 1


@lru_cache(maxsize=None)
def _binomial_rows(n: int):
    """Pascal rows up to (Y+1)^(n-1), as tuples."""
    rows = [(1,)]
    for _ in range(n - 1):
        prev = rows[-1]
        rows.append(tuple(
            (prev[j] if j < len(prev) else 0) + (prev[j - 1] if j >= 1 else 0)
            for j in range(len(prev) + 1)
        ))
    return rows


def poly_view(x: GroupRingElement) -> tuple:
    """Coefficients of the image under generator -> T+1, degree < p^n."""
    if x.delta != 1:
        raise UnsupportedDelta("polynomial view is defined for delta = 1")
    size = x.group_size
    mod = x.p**x.k
    rows = _binomial_rows(size)
    out = [0] * size
    for i, c in enumerate(x.coeffs):
        if c:
            row = rows[i]
            for j, b in enumerate(row):
                out[j] = (out[j] + c * b) % mod
    return tuple(out)


def from_poly_view(p: int, k: int, n: int, poly) -> GroupRingElement:
    """Inverse of poly_view: T -> generator - 1 (coefficients mod p^k)."""
    size = p**n
    mod = p**k
    out = [0] * size
    coeffs = list(poly)
    if len(coeffs) > size:
        raise ValueError("degree exceeds the layer ring dimension")
    rows = _binomial_rows(size)
    for j, c in enumerate(coeffs):
        if c % mod == 0:
            continue
        # (gamma - 1)^j = sum_i C(j, i) (-1)^(j-i) gamma^i
        row = rows[j]
        sign = -1 if (j % 2) else 1
        s = sign
        for i, b in enumerate(row):
            out[i] = (out[i] + c * b * s) % mod
            s = -s
    return GroupRingElement(p, k, n, 1, tuple(out))


@lru_cache(maxsize=256)
def reduce_poly(poly: IntPolynomial, p: int, k: int, n: int) -> GroupRingElement:
    """Image of an exact integer polynomial in the layer-n ring (delta = 1).

    High powers of T fold automatically by substituting T -> generator - 1
    degree by degree inside the group ring, where (T+1)^(p^n) = 1.
    """
    acc = zero(p, k, n, 1)
    if poly.degree < 0:
        return acc
    gamma_minus_1 = delta_element(p, k, n, (1,)) - one(p, k, n, 1)
    power = one(p, k, n, 1)
    for j, c in enumerate(poly.coefficients):
        if c % p**k:
            acc = acc + power * int(c)
        if j < poly.degree:
            power = power * gamma_minus_1
    return acc


# ---------------------------------------------------------------------------
# parity-split cyclotomic products


@dataclass(frozen=True)
class OmegaElement:
    """One of the cyclotomic-product operations, stored per variable."""

    tag: str
    p: int
    n: int
    delta: int
    polys: tuple            # one IntPolynomial per variable


def omega_poly(p: int, n: int) -> IntPolynomial:
    """T * prod_{1<=j<=n} Sigma_{p^j}(T+1) = (T+1)^(p^n) - 1."""
    acc = T_POLY
    for j in range(1, n + 1):
        acc = acc * cyclotomic_sigma(p, j)
    return acc


def omega_tilde_poly(p: int, n: int, sign: int) -> IntPolynomial:
    """Product of Sigma_{p^j}(T+1) over j <= n of the given parity
    (+1: even j, -1: odd j)."""
    acc = IntPolynomial((1,))
    start = 2 if sign > 0 else 1
    for j in range(start, n + 1, 2):
        acc = acc * cyclotomic_sigma(p, j)
    return acc


def omega_pm_poly(p: int, n: int, sign: int) -> IntPolynomial:
    return T_POLY * omega_tilde_poly(p, n, sign)


def omega_family(p: int, n: int, delta: int = 1):
    """The full family Omega_n, Omega~_n^{+/-}, Omega_n^{+/-}.

    The parity-split members are single-variable objects; requesting them
    with delta > 1 raises UnsupportedDelta.
    """
    omega = OmegaElement("omega", p, n, delta, tuple(omega_poly(p, n) for _ in range(delta)))
    if delta != 1:
        return {"omega": omega}
    return {
        "omega": omega,
        "omega_tilde_plus": OmegaElement("omega_tilde_plus", p, n, 1, (omega_tilde_poly(p, n, +1),)),
        "omega_tilde_minus": OmegaElement("omega_tilde_minus", p, n, 1, (omega_tilde_poly(p, n, -1),)),
        "omega_plus": OmegaElement("omega_plus", p, n, 1, (omega_pm_poly(p, n, +1),)),
        "omega_minus": OmegaElement("omega_minus", p, n, 1, (omega_pm_poly(p, n, -1),)),
    }


def omega_family_checked(p: int, n: int, delta: int):
    if delta != 1:
        raise UnsupportedDelta("the parity-split family is defined for delta = 1")
    return omega_family(p, n, 1)


# ---------------------------------------------------------------------------
# exact division by omega-tilde in a layer ring (delta = 1)


def _circulant_columns(g: GroupRingElement):
    """Columns of the multiplication-by-g matrix on the layer ring."""
    size = g.group_size
    cols = []
    base = list(g.coeffs)
    for shift in range(size):
        cols.append([base[(i - shift) % size] for i in range(size)])
    # matrix rows from columns
    return [[cols[c][r] for c in range(size)] for r in range(size)]


def multiplication_matrix(g: GroupRingElement):
    if g.delta != 1:
        raise UnsupportedDelta("multiplication matrices are built for delta = 1")
    return _circulant_columns(g)


@dataclass(frozen=True)
class QuotientClass:
    """An element of the layer ring modulo the ideal generated by a tagged
    polynomial (the p-power cyclotomic product of one parity)."""

    rep: GroupRingElement
    ideal_tag: str
    ideal_poly: IntPolynomial

    @property
    def layer(self) -> int:
        return self.rep.n

    def ideal_generator(self) -> GroupRingElement:
        return reduce_poly(self.ideal_poly, self.rep.p, self.rep.k, self.rep.n)

    def same_class(self, other: "QuotientClass") -> bool:
        if self.ideal_tag != other.ideal_tag or self.layer != other.layer:
            return False
        return self.contains(other.rep)

    def contains(self, elt: GroupRingElement) -> bool:
        diff = self.rep - elt
        gen = self.ideal_generator()
        m = multiplication_matrix(gen)
        return linalg.solve(m, list(diff.coeffs), self.rep.p, self.rep.k) is not None


def divide_omega_tilde(lam: GroupRingElement, eps: int) -> QuotientClass:
    """Solve Omega~_n^{-eps} * Theta = lam in the layer-n ring; the result is
    a class modulo Omega_n^eps (kernel of the multiplication map).

    Requires Omega_n^eps * lam = 0; raises NotDivisible when no solution
    exists at working precision.
    """
    if lam.delta != 1:
        raise UnsupportedDelta("division is defined for delta = 1")
    p, k, n = lam.p, lam.k, lam.n
    annihilator = reduce_poly(omega_pm_poly(p, n, eps), p, k, n)
    if not (annihilator * lam).is_zero():
        raise NotDivisible("input is not annihilated by the matching omega")
    divisor = reduce_poly(omega_tilde_poly(p, n, -eps), p, k, n)
    m = multiplication_matrix(divisor)
    sol = linalg.solve(m, list(lam.coeffs), p, k)
    if sol is None:
        raise NotDivisible("no preimage under multiplication at this precision")
    theta = GroupRingElement(p, k, n, 1, tuple(sol))
    tag = "omega_plus" if eps > 0 else "omega_minus"
    return QuotientClass(theta, tag, omega_pm_poly(p, n, eps))
