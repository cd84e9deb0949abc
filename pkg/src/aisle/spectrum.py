"""Primes, Zariski-closed sets, finite unions of them, supports and sp-filtrations.

Closed sets are handled through ideals up to radical: V(I) ⊆ V(J) iff J ⊆ rad(I).
"""

from dataclasses import dataclass, field

from gmpy2 import mpq

from .errors import InvalidInput, RingMismatch
from .groebner import (
    Ideal,
    groebner_basis,
    ideal_member,
    ideal_product,
    is_unit_ideal,
    radical_member,
)
from .homalg.modules import annihilator

# ---------------------------------------------------------------------------
# primes


ASSERTED = "asserted"


@dataclass(frozen=True)
class PrimeIdeal:
    ideal: Ideal
    verified: str = ASSERTED  # "asserted" or "verified:<method>"
    name: str = None

    def __post_init__(self):
        if is_unit_ideal(self.ideal):
            raise InvalidInput(f"prime ideal {self.ideal} is the unit ideal")

    @property
    def ring(self):
        return self.ideal.ring

    @property
    def is_verified(self):
        return self.verified.startswith("verified")

    def __str__(self):
        return self.name or str(self.ideal)

    def to_dict(self):
        return {"ideal": str(self.ideal), "status": self.verified, "name": self.name}


def make_prime(ideal, verify=True, name=None):
    status = ASSERTED
    if verify:
        v = verify_prime(ideal)
        if v != "unknown":
            status = v
    return PrimeIdeal(ideal, status, name)


def _int_divisors(n, limit=10**6):
    n = abs(n)
    if n == 0 or n > limit:
        return None
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            out.append(n // d)
        d += 1
    return sorted(set(out))


def _has_root(coeffs, p):
    """coeffs: dense list, lowest degree first, in the field. None means unknown."""
    if not coeffs[0]:
        return True
    if p:
        if p > 100_000:
            return None
        for a in range(p):
            v = 0
            for c in reversed(coeffs):
                v = (v * a + c) % p
            if v == 0:
                return True
        return False
    den = 1
    for c in coeffs:
        den = den * mpq(c).denominator // _gcd(den, mpq(c).denominator)
    ints = [int(mpq(c) * den) for c in coeffs]
    lead_div = _int_divisors(ints[-1])
    const_div = _int_divisors(ints[0])
    if lead_div is None or const_div is None:
        return None
    for a in const_div:
        for b in lead_div:
            for s in (1, -1):
                r = mpq(s * a, b)
                v = mpq(0)
                for c in reversed(ints):
                    v = v * r + c
                if v == 0:
                    return True
    return False


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return abs(a)


def verify_prime(ideal):
    """``verified:<method>`` when a supported sufficient condition for primality
    holds, ``unknown`` otherwise."""
    ring = ideal.ring
    if is_unit_ideal(ideal):
        raise InvalidInput("the unit ideal is not prime")
    if ring.is_quotient:
        return "unknown"
    basis = groebner_basis(ideal).basis
    if not basis:
        return "verified:domain"
    if all(b.degree() == 1 for b in basis):
        # quotient by linear forms is again a polynomial ring
        if all(len(b.terms) == 1 for b in basis):
            return "verified:variable-subset"
        return "verified:linear"
    if len(basis) == 1:
        f = basis[0]
        used = f.variables_used()
        if len(used) == 1:
            v = used[0]
            deg = f.degree()
            dense = [ring.field(0)] * (deg + 1)
            for e, c in f.terms.items():
                dense[e[v]] = c
            if deg <= 3:
                root = _has_root(dense, ring.p)
                if root is False:
                    return "verified:irreducible-univariate"
    return "unknown"


# ---------------------------------------------------------------------------
# closed sets


class ClosedSet:
    """V(defining)."""

    def __init__(self, defining):
        self.defining = defining

    @property
    def ring(self):
        return self.defining.ring

    def is_empty(self):
        return is_unit_ideal(self.defining)

    def is_subset(self, other):
        """V(I) ⊆ V(J) iff J ⊆ rad(I)."""
        _same(self, other)
        return all(radical_member(g, self.defining) for g in other.defining.nonzero_gens)

    def equals(self, other):
        return self.is_subset(other) and other.is_subset(self)

    def __str__(self):
        return "V" + str(self.defining)

    def __repr__(self):
        return f"ClosedSet({self})"

    def to_dict(self):
        return {"V": [str(g) for g in self.defining.gens]}


def _same(a, b):
    if a.ring != b.ring:
        raise RingMismatch("closed sets in different rings")


def closed(ring, gens):
    return ClosedSet(Ideal(ring, gens))


def whole_spectrum(ring):
    return ClosedSet(Ideal(ring, [ring.zero()]))


class SpcSet:
    """Finite union of closed sets, kept normalized (no empty or redundant components)."""

    def __init__(self, ring, components=(), normalize=True):
        self.ring = ring
        comps = []
        for c in components:
            if c.ring != ring:
                raise RingMismatch("component in another ring")
            comps.append(c)
        self.components = tuple(self._normalize(comps) if normalize else comps)

    @staticmethod
    def _normalize(comps):
        comps = [c for c in comps if not c.is_empty()]
        keep = []
        for i, c in enumerate(comps):
            redundant = False
            for j, d in enumerate(comps):
                if i == j:
                    continue
                if c.is_subset(d):
                    # strictly smaller, or equal and a copy appears earlier
                    if j < i or not d.is_subset(c):
                        redundant = True
                        break
            if not redundant:
                keep.append(c)
        return keep

    @classmethod
    def empty(cls, ring):
        return cls(ring, ())

    @classmethod
    def spectrum(cls, ring):
        return cls(ring, [whole_spectrum(ring)])

    def is_empty(self):
        return not self.components

    def is_spectrum(self):
        return closed_in_spc(whole_spectrum(self.ring), self)

    def ideals(self):
        return [c.defining for c in self.components]

    def __str__(self):
        if not self.components:
            return "V(1)"
        return " + ".join(str(c) for c in self.components)

    def __repr__(self):
        return f"SpcSet({self})"

    def to_dict(self):
        return [c.to_dict() for c in self.components]


def spc_union(a, b):
    if a.ring != b.ring:
        raise RingMismatch("sets in different rings")
    return SpcSet(a.ring, a.components + b.components)


def closed_in_spc(c, a):
    """V(I) ⊆ V(J_1) ∪ ... ∪ V(J_k), decided as J_1···J_k ⊆ rad(I)."""
    if c.ring != a.ring:
        raise RingMismatch("sets in different rings")
    if not a.components:
        return c.is_empty()
    prod = a.components[0].defining
    for comp in a.components[1:]:
        prod = ideal_product(prod, comp.defining)
    return all(radical_member(g, c.defining) for g in prod.nonzero_gens)


def spc_contains(a, b):
    """b ⊆ a."""
    return all(closed_in_spc(c, a) for c in b.components)


def spc_equal(a, b):
    return spc_contains(a, b) and spc_contains(b, a)


def prime_in_spc(p, a):
    return closed_in_spc(ClosedSet(p.ideal), a)


# ---------------------------------------------------------------------------
# supports


def support(module):
    return ClosedSet(annihilator(module))


def prime_in_support(p, module):
    """Ann(M) ⊆ p."""
    if p.ring != module.ring:
        raise RingMismatch("prime and module in different rings")
    if module.is_zero():
        return False
    ann = annihilator(module)
    return all(ideal_member(g, p.ideal).member for g in ann.nonzero_gens)


@dataclass(frozen=True)
class StalkInjectiveRef:
    """E(R/p)[-n], the injective hull of R/p placed in degree n (symbolic)."""

    prime: PrimeIdeal
    shift: int

    def __str__(self):
        return f"E(R/{self.prime})[{-self.shift}]"


def stalk_hom_nonzero(X, e):
    """Hom(X, E(R/p)[-n]) != 0 iff p ∈ Supp H^n(X)."""
    if X.ring != e.prime.ring:
        raise RingMismatch("complex and prime in different rings")
    return prime_in_support(e.prime, X.cohomology(e.shift))


# ---------------------------------------------------------------------------
# sp-filtrations


class FiltrationError(InvalidInput):
    kind = "non-decreasing-filtration"

    def __init__(self, message, pair):
        self.pair = pair
        super().__init__(message)

    def to_dict(self):
        d = super().to_dict()
        d["pair"] = list(self.pair)
        return d


@dataclass
class SpFiltration:
    ring: object
    lo: int
    hi: int
    steps: dict
    below_lo: SpcSet
    above_hi: SpcSet
    notes: list = field(default_factory=list)

    def value(self, n):
        if n < self.lo:
            return self.below_lo
        if n > self.hi:
            return self.above_hi
        return self.steps[n]

    def shifted(self, k):
        """ψ(m) = φ(m - k)."""
        return SpFiltration(self.ring, self.lo + k, self.hi + k,
                            {n + k: s for n, s in self.steps.items()}, self.below_lo, self.above_hi)

    def all_component_ideals(self):
        out = []
        for s in [self.below_lo] + [self.steps[n] for n in range(self.lo, self.hi + 1)] + [self.above_hi]:
            out.extend(s.ideals())
        return out

    def max_generator_count(self):
        return max((len(I.nonzero_gens) for I in self.all_component_ideals()), default=0)

    def to_dict(self):
        return {
            "lo": self.lo,
            "hi": self.hi,
            "below": str(self.below_lo),
            "steps": {str(n): str(self.steps[n]) for n in range(self.lo, self.hi + 1)},
            "above": str(self.above_hi),
        }

    def __str__(self):
        parts = [f"below: {self.below_lo}"]
        parts += [f"{n}: {self.steps[n]}" for n in range(self.lo, self.hi + 1)]
        parts.append(f"above: {self.above_hi}")
        return "{ " + "; ".join(parts) + " }"


def make_filtration(lo, hi, steps, below_lo, above_hi, ring=None):
    """Validate that n -> φ(n) is decreasing, including the two tails."""
    if lo > hi:
        raise InvalidInput(f"empty filtration window {lo}..{hi}")
    missing = [n for n in range(lo, hi + 1) if n not in steps]
    if missing:
        raise InvalidInput(f"filtration step {missing[0]} is missing")
    ring = ring or below_lo.ring
    seq = [("below", below_lo)] + [(n, steps[n]) for n in range(lo, hi + 1)] + [("above", above_hi)]
    for s in [below_lo, above_hi] + list(steps.values()):
        if s.ring != ring:
            raise RingMismatch("filtration steps in different rings")
    for (i, a), (j, b) in zip(seq, seq[1:]):
        if not spc_contains(a, b):
            raise FiltrationError(f"filtration is not decreasing: φ({j}) = {b} is not contained in φ({i}) = {a}",
                                  (i, j))
    return SpFiltration(ring, lo, hi, {n: steps[n] for n in range(lo, hi + 1)}, below_lo, above_hi)


def standard_filtration(ring, n=0):
    """φ(m) = Spec(R) for m <= n and ∅ for m > n: the standard t-structure (D^{≤n}, D^{>n})."""
    spec = SpcSet.spectrum(ring)
    return SpFiltration(ring, n, n, {n: spec}, spec, SpcSet.empty(ring))
