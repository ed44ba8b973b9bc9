"""Finite-order characters of the layer groups, exact specialization of
group-ring elements into cyclotomic rings, the involution identity, discrete
period sums, the product identity for the L-element, and the family
nontriviality scanner.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ConductorTooLarge, NotOrdinary
from .groupring import GroupRingElement, mu_invariant, star
from .measures import CompatibleSystem, lp
from .padic import CyclotomicValue, IntPolynomial
from .util import capped_val


@dataclass(frozen=True)
class FiniteOrderCharacter:
    """Character with values in the p^m-th roots of unity, given by the
    exponents of its values on the delta standard generators."""

    p: int
    m: int
    delta: int
    exponents: tuple

    def __post_init__(self):
        mod = self.p**self.m
        exps = tuple(int(e) % mod for e in self.exponents)
        if len(exps) != self.delta:
            raise ValueError("need one exponent per variable")
        object.__setattr__(self, "exponents", exps)

    def is_trivial(self) -> bool:
        return all(e == 0 for e in self.exponents)

    def is_primitive(self) -> bool:
        """Conductor exactly p^m: some exponent is a unit mod p."""
        if self.m == 0:
            return True
        return any(e % self.p != 0 for e in self.exponents)

    def inverse(self) -> "FiniteOrderCharacter":
        return FiniteOrderCharacter(
            self.p, self.m, self.delta, tuple(-e for e in self.exponents)
        )

    def value_exponent(self, tup) -> int:
        """Exponent of zeta_{p^m} at the group element with these digits."""
        return sum(e * t for e, t in zip(self.exponents, tup)) % self.p**self.m

    def to_json(self):
        return {"m": self.m, "exponents": list(self.exponents)}

    @staticmethod
    def from_json(p: int, delta: int, obj) -> "FiniteOrderCharacter":
        return FiniteOrderCharacter(p, int(obj["m"]), delta, tuple(obj["exponents"]))


def specialize(lam: GroupRingElement, rho: FiniteOrderCharacter) -> CyclotomicValue:
    """Sum of c(sigma) * rho(sigma), exactly in (Z/p^k)[zeta_{p^m}].

    A ring homomorphism: specialize(lam * mu) = specialize(lam) * specialize(mu).
    """
    if rho.p != lam.p or rho.delta != lam.delta:
        raise ValueError("character and element live over different groups")
    if rho.m > lam.n:
        raise ConductorTooLarge(f"conductor exponent {rho.m} exceeds layer {lam.n}")
    p, k, m = lam.p, lam.k, rho.m
    size = p**m
    # accumulate on raw zeta powers, then reduce once
    raw = [0] * size
    for idx, c in enumerate(lam.coeffs):
        if c:
            tup = lam.tuple_of(idx)
            raw[rho.value_exponent(tup)] += c
    from .padic import _reduce_cyclotomic, euler_phi_p_power

    phi = euler_phi_p_power(p, m)
    return CyclotomicValue(p, k, m, _reduce_cyclotomic(raw, p, k, m, phi))


@dataclass(frozen=True)
class StarIdentityReport:
    ok: bool
    lhs: CyclotomicValue
    rhs: CyclotomicValue

    def to_json(self):
        return {"ok": self.ok, "lhs": self.lhs.to_json(), "rhs": self.rhs.to_json()}


def star_identity_check(lam: GroupRingElement, rho: FiniteOrderCharacter) -> StarIdentityReport:
    """Specializing the involution equals specializing at the inverse character."""
    lhs = specialize(star(lam), rho)
    rhs = specialize(lam, rho.inverse())
    return StarIdentityReport(lhs == rhs, lhs, rhs)


def period_sum(sys: CompatibleSystem, rho: FiniteOrderCharacter, m: int) -> CyclotomicValue:
    """alpha^(-m) sum over level-m labels of rho(free image) * coefficient.

    Coincides with specializing the ordinary theta element at rho.
    """
    if sys.mode != "edge":
        raise NotOrdinary("period sums are defined for ordinary edge systems")
    alpha = sys.eigen.alpha
    if alpha is None or not alpha.is_unit():
        raise NotOrdinary("transfer eigenvalue is not a unit")
    if rho.m > sys.level_exp[m]:
        raise ConductorTooLarge(
            f"conductor exponent {rho.m} exceeds free exponent {sys.level_exp[m]}"
        )
    p, k = sys.p, sys.k
    mod = p**k
    acc = CyclotomicValue.from_int(p, k, rho.m, 0)
    free_mod = p**rho.m
    for key, c in sorted(sys.table(m).items()):
        if c:
            digits = sys.free[m][key]
            e = sum(ei * (d % free_mod) for ei, d in zip(rho.exponents, digits))
            acc = acc + CyclotomicValue.zeta_power(p, k, rho.m, e) * c
    scale = pow(alpha.inverse().residue, m, mod)
    return acc * scale


@dataclass(frozen=True)
class InterpolationReport:
    ok: bool
    lhs: CyclotomicValue
    rhs: CyclotomicValue
    lhs_valuation: int
    factor_valuations: tuple

    def to_json(self):
        return {
            "ok": self.ok,
            "lhs": self.lhs.to_json(),
            "rhs": self.rhs.to_json(),
            "lhs_valuation": self.lhs_valuation,
            "factor_valuations": list(self.factor_valuations),
        }


def interpolation_shape(sys: CompatibleSystem, rho: FiniteOrderCharacter,
                        m: int) -> InterpolationReport:
    """specialize(L, rho) = (period sum at rho) * (period sum at rho^(-1)),
    with the cyclotomic valuation of each side reported."""
    lelt = lp(sys, m, "ordinary")
    lhs = specialize(lelt.value, rho)
    ps1 = period_sum(sys, rho, m)
    ps2 = period_sum(sys, rho.inverse(), m)
    rhs = ps1 * ps2
    return InterpolationReport(
        lhs == rhs, lhs, rhs, lhs.valuation_units(),
        (ps1.valuation_units(), ps2.valuation_units()),
    )


# ---------------------------------------------------------------------------
# family nontriviality scanner


@dataclass(frozen=True)
class HowardFamily:
    labels: tuple
    elements: tuple             # GroupRingElements sharing (p, k, delta)

    def __post_init__(self):
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("family labels must be distinct")
        if len(self.labels) != len(self.elements):
            raise ValueError("one label per element")
        sig = {(e.p, e.k, e.delta) for e in self.elements}
        if len(sig) > 1:
            raise ValueError("family members must share (p, k, delta)")


@dataclass(frozen=True)
class HowardReport:
    prime: str
    k0: int
    verdicts: tuple             # (label, nontrivial: bool, witness valuation)
    passed: bool
    nontrivial_labels: tuple

    def to_json(self):
        return {
            "prime": self.prime,
            "k0": self.k0,
            "passed": self.passed,
            "nontrivial": list(self.nontrivial_labels),
            "verdicts": [
                {"label": l, "nontrivial": nt, "valuation": v}
                for l, nt, v in self.verdicts
            ],
        }


def _poly_remainder_mod(poly, witness: IntPolynomial, p: int, k0: int):
    """Remainder of a coefficient list modulo a witness polynomial whose
    leading coefficient is a unit, over Z/p^k0."""
    mod = p**k0
    lead = witness.coefficients[-1] % mod
    if lead % p == 0:
        raise ValueError("witness polynomial needs a unit leading coefficient")
    inv = pow(lead, -1, mod)
    rem = [c % mod for c in poly]
    d = witness.degree
    for i in range(len(rem) - 1, d - 1, -1):
        c = rem[i]
        if c:
            q = c * inv % mod
            for j, w in enumerate(witness.coefficients):
                rem[i - d + j] = (rem[i - d + j] - q * w) % mod
    return rem[:d]


def howard_check(family: HowardFamily, prime_spec, k0: int) -> HowardReport:
    """Scan a family for a member with nontrivial image modulo the chosen
    height-one prime and p^k0.

    prime_spec: "augmentation" (image = total coefficient sum), "maximal"
    (nontrivial iff the mu-invariant is < k0), or an IntPolynomial witness
    with unit leading coefficient (delta = 1 only).
    """
    verdicts = []
    hits = []
    for label, elt in zip(family.labels, family.elements):
        if prime_spec == "augmentation":
            val = capped_val(elt.augmentation(), elt.p, min(k0, elt.k))
            nontrivial = val < min(k0, elt.k)
        elif prime_spec == "maximal":
            val = mu_invariant(elt)
            nontrivial = val < k0
        elif isinstance(prime_spec, IntPolynomial):
            if elt.delta != 1:
                raise ValueError("witness primes are supported for delta = 1")
            from .groupring import poly_view

            rem = _poly_remainder_mod(poly_view(elt), prime_spec, elt.p, min(k0, elt.k))
            nonzero = [c for c in rem if c]
            val = min(
                (capped_val(c, elt.p, min(k0, elt.k)) for c in nonzero),
                default=min(k0, elt.k),
            )
            nontrivial = bool(nonzero)
        else:
            raise ValueError("unknown prime specification")
        verdicts.append((label, nontrivial, val))
        if nontrivial:
            hits.append(label)
    name = prime_spec if isinstance(prime_spec, str) else "witness"
    return HowardReport(name, k0, tuple(verdicts), bool(hits), tuple(hits))
