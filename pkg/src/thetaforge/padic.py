"""Bounded-precision p-adic scalars, 2x2 elementary divisors, Hensel roots,
and cyclotomic polynomial constructors.

All arithmetic is exact modulo p^k.  The valuation of a residue that is zero
to working precision is reported as k, never as infinity, so that valuations
stay totally ordered.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import NotOrdinary, PrecisionExhausted
from .util import capped_val


@dataclass(frozen=True)
class PrecisionInt:
    """Residue in [0, p^k) with valuation semantics of the ring Z_p / p^k."""

    p: int
    k: int
    residue: int

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("precision exponent must be >= 1")
        object.__setattr__(self, "residue", self.residue % self.p**self.k)

    @property
    def modulus(self) -> int:
        return self.p**self.k

    def _check(self, other: "PrecisionInt"):
        if self.p != other.p or self.k != other.k:
            raise ValueError("mixed (p, k) arithmetic is not defined")

    def __add__(self, other):
        self._check(other)
        return PrecisionInt(self.p, self.k, self.residue + other.residue)

    def __sub__(self, other):
        self._check(other)
        return PrecisionInt(self.p, self.k, self.residue - other.residue)

    def __mul__(self, other):
        if isinstance(other, int):
            return PrecisionInt(self.p, self.k, self.residue * other)
        self._check(other)
        return PrecisionInt(self.p, self.k, self.residue * other.residue)

    __rmul__ = __mul__

    def __neg__(self):
        return PrecisionInt(self.p, self.k, -self.residue)

    def __pow__(self, e: int):
        return PrecisionInt(self.p, self.k, pow(self.residue, e, self.modulus))

    def valuation(self) -> int:
        """Largest c <= k with p^c | residue; k means zero to precision."""
        return capped_val(self.residue, self.p, self.k)

    def is_unit(self) -> bool:
        return self.residue % self.p != 0

    def is_zero(self) -> bool:
        return self.residue == 0

    def inverse(self) -> "PrecisionInt":
        if not self.is_unit():
            raise ValueError("inverse requires valuation 0")
        return PrecisionInt(self.p, self.k, pow(self.residue, -1, self.modulus))

    def at_precision(self, k2: int) -> "PrecisionInt":
        if k2 > self.k:
            raise PrecisionExhausted(f"cannot refine precision {self.k} to {k2}")
        return PrecisionInt(self.p, k2, self.residue)

    def to_json(self):
        return {"p": self.p, "k": self.k, "residue": str(self.residue)}

    @staticmethod
    def from_json(obj) -> "PrecisionInt":
        return PrecisionInt(int(obj["p"]), int(obj["k"]), int(obj["residue"]))


@dataclass(frozen=True)
class IntPolynomial:
    """Exact integer polynomial, constant term first, trailing zeros stripped.

    The zero polynomial has degree -1 (a sentinel, not a valuation).
    """

    coefficients: tuple

    def __post_init__(self):
        coeffs = tuple(int(c) for c in self.coefficients)
        while coeffs and coeffs[-1] == 0:
            coeffs = coeffs[:-1]
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __add__(self, other):
        a, b = self.coefficients, other.coefficients
        n = max(len(a), len(b))
        return IntPolynomial(
            tuple((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n))
        )

    def __sub__(self, other):
        return self + IntPolynomial(tuple(-c for c in other.coefficients))

    def __mul__(self, other):
        if isinstance(other, int):
            return IntPolynomial(tuple(c * other for c in self.coefficients))
        a, b = self.coefficients, other.coefficients
        if not a or not b:
            return IntPolynomial(())
        out = [0] * (len(a) + len(b) - 1)
        for i, ci in enumerate(a):
            if ci == 0:
                continue
            for j, cj in enumerate(b):
                out[i + j] += ci * cj
        return IntPolynomial(tuple(out))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        result = IntPolynomial((1,))
        base = self
        while e > 0:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __call__(self, x: int) -> int:
        acc = 0
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc

    def coefficient(self, i: int) -> int:
        return self.coefficients[i] if 0 <= i < len(self.coefficients) else 0

    def is_zero(self) -> bool:
        return not self.coefficients

    def to_json(self):
        return [str(c) for c in self.coefficients]

    @staticmethod
    def from_json(obj) -> "IntPolynomial":
        return IntPolynomial(tuple(int(c) for c in obj))


ONE_POLY = IntPolynomial((1,))
T_POLY = IntPolynomial((0, 1))


@lru_cache(maxsize=None)
def cyclotomic_sigma(p: int, j: int) -> IntPolynomial:
    """The p^j-th cyclotomic polynomial evaluated at T+1, as a polynomial in T.

    Degree p^(j-1)(p-1); for j = 1 this is sum_{b<p} (T+1)^b.
    """
    if j < 1:
        raise ValueError("level must be >= 1")
    block = (T_POLY + ONE_POLY) ** (p ** (j - 1))  # (T+1)^(p^(j-1))
    acc = IntPolynomial((1,))
    total = IntPolynomial((1,))
    for _ in range(p - 1):
        acc = acc * block
        total = total + acc
    return total


def hensel_unit_root(a: PrecisionInt, q: int, k: int) -> PrecisionInt:
    """Unit root of x^2 - a x + q over Z/p^k, with q divisible by p.

    The returned root is congruent to a mod p; ordinarity (a a unit) is
    required for the two roots to separate mod p.
    """
    p = a.p
    if a.valuation() > 0:
        raise NotOrdinary(f"eigenvalue {a.residue} is divisible by {p}")
    if q % p != 0:
        raise ValueError("q must be divisible by p")
    mod = p**k
    av = a.residue % mod
    x = av % p
    # Newton iteration; f'(x) = 2x - a = a (mod p) is a unit, including p = 2.
    for _ in range(max(2, k.bit_length() + 2)):
        fx = (x * x - av * x + q) % mod
        if fx == 0:
            break
        dfx = (2 * x - av) % mod
        x = (x - fx * pow(dfx, -1, mod)) % mod
    root = PrecisionInt(p, k, x)
    assert (root * root - PrecisionInt(p, k, av) * root + PrecisionInt(p, k, q)).is_zero()
    assert root.residue % p == av % p
    return root


def _min_val_entry(entries, p, k):
    best = None
    best_pos = None
    for pos, e in enumerate(entries):
        v = capped_val(e, p, k)
        if best is None or v < best:
            best, best_pos = v, pos
    return best, best_pos


def smith_exponents_2x2(m) -> tuple:
    """Elementary divisor exponents (a, b), a <= b, of a 2x2 PrecisionInt matrix.

    Row/column reduction pivoting on the entry of minimal valuation; the
    determinant must have valuation < k.
    """
    (m00, m01), (m10, m11) = m
    p, k = m00.p, m00.k
    if any((e.p, e.k) != (p, k) for e in (m01, m10, m11)):
        raise ValueError("matrix entries must share (p, k)")
    mod = p**k
    ents = [m00.residue % mod, m01.residue % mod, m10.residue % mod, m11.residue % mod]
    a, pos = _min_val_entry(ents, p, k)
    if a >= k:
        raise PrecisionExhausted("every entry is zero to working precision")
    # Move the pivot to position (0,0).
    if pos in (2, 3):
        ents = ents[2:] + ents[:2]
        pos -= 2
    if pos == 1:
        ents = [ents[1], ents[0], ents[3], ents[2]]
    e00, e01, e10, e11 = ents
    unit = e00 // p**a
    inv = pow(unit, -1, mod)
    # Clear the first row and column with exact quotients.
    q10 = (e10 // p**a) * inv % mod
    e11 = (e11 - q10 * e01) % mod
    b = capped_val(e11, p, k)
    if b >= k:
        raise PrecisionExhausted("second elementary divisor is zero to working precision")
    return (a, b) if a <= b else (b, a)


def euler_phi_p_power(p: int, m: int) -> int:
    return 1 if m == 0 else p ** (m - 1) * (p - 1)


@lru_cache(maxsize=None)
def _reduction_rows(p: int, m: int, top: int):
    """Coefficient rows expressing X^t (phi <= t < top) mod the p^m-th
    cyclotomic polynomial in the basis 1, X, ..., X^(phi-1)."""
    phi = euler_phi_p_power(p, m)
    rows = {}
    for t in range(phi, top):
        row = [0] * phi
        if t == phi:
            # X^phi = -sum_{b<p-1} X^(b p^(m-1))
            for b in range(p - 1):
                row[b * p ** (m - 1)] -= 1
        else:
            prev = rows[t - 1]
            carry = prev[phi - 1]
            shifted = [0] + list(prev[:-1])
            if carry:
                base = rows[phi]
                shifted = [s + carry * bb for s, bb in zip(shifted, base)]
            row = shifted
        rows[t] = row
    return {t: tuple(r) for t, r in rows.items()}


@dataclass(frozen=True)
class CyclotomicValue:
    """Element of (Z/p^k)[zeta] with zeta a primitive p^m-th root of unity.

    Stored as a residue mod the p^m-th cyclotomic polynomial; valuations are
    reported in units of 1/e with e = p^(m-1)(p-1), computed from the
    expansion in powers of pi = zeta - 1.  For m = 0 the ring degenerates to
    Z/p^k and e = 1.
    """

    p: int
    k: int
    m: int
    coefficients: tuple

    def __post_init__(self):
        phi = euler_phi_p_power(self.p, self.m)
        coeffs = tuple(int(c) % self.p**self.k for c in self.coefficients)
        if len(coeffs) != phi:
            raise ValueError(f"expected {phi} coefficients, got {len(coeffs)}")
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def ramification(self) -> int:
        return euler_phi_p_power(self.p, self.m)

    @staticmethod
    def from_int(p: int, k: int, m: int, c: int) -> "CyclotomicValue":
        phi = euler_phi_p_power(p, m)
        return CyclotomicValue(p, k, m, (c,) + (0,) * (phi - 1))

    @staticmethod
    def zeta_power(p: int, k: int, m: int, e: int) -> "CyclotomicValue":
        """The root-of-unity zeta^e as a ring element."""
        phi = euler_phi_p_power(p, m)
        if m == 0:
            return CyclotomicValue(p, k, 0, (1,))
        e %= p**m
        raw = [0] * (p**m)
        raw[e] = 1
        return CyclotomicValue(p, k, m, _reduce_cyclotomic(raw, p, k, m, phi))

    def _check(self, other):
        if (self.p, self.k, self.m) != (other.p, other.k, other.m):
            raise ValueError("mixed cyclotomic rings")

    def __add__(self, other):
        self._check(other)
        return CyclotomicValue(
            self.p, self.k, self.m,
            tuple(a + b for a, b in zip(self.coefficients, other.coefficients)),
        )

    def __sub__(self, other):
        self._check(other)
        return CyclotomicValue(
            self.p, self.k, self.m,
            tuple(a - b for a, b in zip(self.coefficients, other.coefficients)),
        )

    def __mul__(self, other):
        if isinstance(other, int):
            return CyclotomicValue(
                self.p, self.k, self.m, tuple(c * other for c in self.coefficients)
            )
        self._check(other)
        a, b = self.coefficients, other.coefficients
        raw = [0] * (2 * len(a) - 1)
        for i, ci in enumerate(a):
            if ci == 0:
                continue
            for j, cj in enumerate(b):
                raw[i + j] += ci * cj
        phi = len(a)
        return CyclotomicValue(self.p, self.k, self.m, _reduce_cyclotomic(raw, self.p, self.k, self.m, phi))

    __rmul__ = __mul__

    def __neg__(self):
        return self * (-1)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coefficients)

    def valuation_units(self) -> int:
        """Valuation in units of 1/e, capped at e*k ("zero to precision").

        Computed as min_i (e*val(a_i) + i) over the pi-adic expansion
        sum a_i pi^i obtained by rewriting the element in powers of zeta - 1;
        the terms have pairwise distinct valuations so the minimum is exact.
        """
        e = self.ramification
        cap = e * self.k
        if self.m == 0:
            return min(cap, e * capped_val(self.coefficients[0], self.p, self.k))
        # f(X) mod Phi -> f(Y+1): binomial re-expansion, degree < e needs no
        # further reduction.
        n = len(self.coefficients)
        g = [0] * n
        row = [1] + [0] * (n - 1)  # coefficients of (Y+1)^i, updated in place
        for i, ci in enumerate(self.coefficients):
            if i > 0:
                prev = row
                row = [0] * n
                for j in range(i + 1):
                    row[j] = (prev[j] if j < n else 0) + (prev[j - 1] if j >= 1 else 0)
            if ci:
                for j in range(i + 1):
                    g[j] += ci * row[j]
        best = cap
        for i, gi in enumerate(g):
            v = capped_val(gi, self.p, self.k)
            if v < self.k:
                best = min(best, e * v + i)
        return best

    def to_json(self):
        return {
            "p": self.p, "k": self.k, "m": self.m,
            "coefficients": [str(c) for c in self.coefficients],
        }

    @staticmethod
    def from_json(obj) -> "CyclotomicValue":
        return CyclotomicValue(
            int(obj["p"]), int(obj["k"]), int(obj["m"]),
            tuple(int(c) for c in obj["coefficients"]),
        )


def _reduce_cyclotomic(raw, p, k, m, phi):
    mod = p**k
    if len(raw) <= phi:
        return tuple(c % mod for c in raw) + (0,) * (phi - len(raw))
    rows = _reduction_rows(p, m, len(raw))
    out = [c % mod for c in raw[:phi]]
    for t in range(phi, len(raw)):
        c = raw[t] % mod
        if c:
            row = rows[t]
            for j in range(phi):
                if row[j]:
                    out[j] = (out[j] + c * row[j]) % mod
    return tuple(c % mod for c in out)


def product_of_sigmas(p: int, n: int) -> IntPolynomial:
    """T * prod_{j<=n} Sigma_{p^j}(T+1); equals (T+1)^(p^n) - 1 exactly."""
    acc = T_POLY
    for j in range(1, n + 1):
        acc = acc * cyclotomic_sigma(p, j)
    return acc
