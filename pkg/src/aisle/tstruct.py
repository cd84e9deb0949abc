"""Membership in the t-structure of an sp-filtration, compact generators,
synthesis of filtrations from coaisle evidence and the standard truncation.

For a filtration φ the aisle is {X : Supp H^n(X) ⊆ φ(n) for all n} and the
coaisle is the right orthogonal of {K(I)[-n] : V(I) ⊆ φ(n)}.
"""

from dataclasses import dataclass, field

from .errors import InconsistentEvidence, InvalidInput, InvariantViolation, RingMismatch
from .groebner import Ideal, ideal_contains
from .homalg import INF, depth_via_koszul, hom_complex, inf_rhom, koszul_complex, soft_truncations
from .spectrum import (
    ClosedSet,
    SpcSet,
    SpFiltration,
    StalkInjectiveRef,
    closed_in_spc,
    make_filtration,
    prime_in_spc,
    spc_equal,
    standard_filtration,
    stalk_hom_nonzero,
    support,
)


@dataclass(frozen=True)
class GeneratorSpec:
    """K(I)[-n]."""

    ideal: Ideal
    shift: int

    def to_dict(self):
        return {"ideal": [str(g) for g in self.ideal.gens], "shift": self.shift}

    def __str__(self):
        return f"K{self.ideal}[{-self.shift}]"


@dataclass
class MembershipReport:
    verdict: bool
    side: str
    witnesses: list = field(default_factory=list)
    windows: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    def to_dict(self):
        return {
            "verdict": self.verdict,
            "side": self.side,
            "witnesses": self.witnesses,
            "windows": self.windows,
            "notes": self.notes,
        }

    def __bool__(self):
        return self.verdict


def _check_ring(phi, X):
    if phi.ring != X.ring:
        raise RingMismatch("filtration and complex live in different rings")


def _ideal_str(I):
    return "(" + ", ".join(str(g) for g in I.gens) + ")"


# ---------------------------------------------------------------------------
# aisle


def aisle_member(phi, X):
    _check_ring(phi, X)
    witnesses = []
    vacuous = []
    for n in X.degrees():
        H = X.cohomology(n)
        if H.is_zero():
            vacuous.append(n)
            continue
        supp = support(H)
        if not closed_in_spc(supp, phi.value(n)):
            witnesses.append({
                "degree": n,
                "kind": "support",
                "support": str(supp),
                "step": str(phi.value(n)),
            })
    windows = {"checked": [X.lo, X.hi], "vacuous": vacuous}
    return MembershipReport(not witnesses, "aisle", witnesses, windows)


# ---------------------------------------------------------------------------
# generators and coaisle


def compact_generators(phi, window):
    a, b = window
    if a > b:
        raise InvalidInput(f"empty window {a}..{b}")
    out = []
    for n in range(a, b + 1):
        for I in phi.value(n).ideals():
            out.append(GeneratorSpec(I, n))
    return out


def coaisle_window(phi, X):
    return (X.lo - 1, X.hi + phi.max_generator_count())


def coaisle_member(phi, X):
    """Hom(K(I)[-n], X) = H^n Hom(K(I), X) vanishes for every generator in the
    window [lo(X) - 1, hi(X) + max c]; outside it every such group is zero."""
    _check_ring(phi, X)
    window = coaisle_window(phi, X)
    gens = compact_generators(phi, window)
    homs = {}
    witnesses = []
    for g in gens:
        H = homs.get(g.ideal)
        if H is None:
            H = homs[g.ideal] = hom_complex(koszul_complex(g.ideal), X)
        if not H.cohomology(g.shift).is_zero():
            witnesses.append({"degree": g.shift, "kind": "hom", "generator": g.to_dict()})
    windows = {"generators": list(window), "tested": len(gens)}
    return MembershipReport(not witnesses, "coaisle", witnesses, windows)


def coaisle_member_gamma(phi, X):
    """RΓ_{φ(n)}(X) ∈ D^{>n} for all n, with inf RΓ over a step taken as the
    minimum of inf RHom(R/I, X) over its components (cross-checked with the
    Koszul depth)."""
    _check_ring(phi, X)
    lo = X.lo - 1
    hi = max(X.hi + phi.max_generator_count(), phi.hi) + 1
    depth = {}
    witnesses = []
    for n in range(lo, hi + 1):
        for I in phi.value(n).ideals():
            if I not in depth:
                e = inf_rhom(I, X)
                k = depth_via_koszul(I, X)
                if e.value != k.value:
                    raise InvariantViolation(
                        f"Ext and Koszul depth disagree for {_ideal_str(I)}: {e.value} vs {k.value}"
                    )
                depth[I] = e.value
            v = depth[I]
            if not v > n:
                witnesses.append({
                    "degree": n,
                    "kind": "depth",
                    "ideal": _ideal_str(I),
                    "inf_rhom": "inf" if v == INF else v,
                })
    windows = {"scanned": [lo, hi]}
    return MembershipReport(not witnesses, "coaisle-gamma", witnesses, windows)


def aisle_failure_by_primes(phi, X, primes):
    """Declared (p, n) with p ∉ φ(n) and Hom(X, E(R/p)[-n]) != 0."""
    _check_ring(phi, X)
    out = []
    for n in X.degrees():
        step = phi.value(n)
        for p in primes:
            if not prime_in_spc(p, step) and stalk_hom_nonzero(X, StalkInjectiveRef(p, n)):
                out.append((p, n))
    return out


# ---------------------------------------------------------------------------
# synthesis


@dataclass
class CoaisleEvidence:
    """Declared primes, containment edges (i, j) meaning p_i ⊆ p_j, and
    assertions (prime index, shift, in_coaisle)."""

    primes: list
    edges: list = field(default_factory=list)
    assertions: list = field(default_factory=list)

    def __post_init__(self):
        names = [str(p) for p in self.primes]
        if not self.primes:
            raise InvalidInput("evidence needs at least one declared prime")
        ring = self.primes[0].ring
        if any(p.ring != ring for p in self.primes):
            raise RingMismatch("evidence primes in different rings")
        k = len(self.primes)
        for i, j in self.edges:
            if not (0 <= i < k and 0 <= j < k):
                raise InvalidInput(f"edge ({i}, {j}) refers to an undeclared prime")
            if not ideal_contains(self.primes[j].ideal, self.primes[i].ideal):
                raise InvalidInput(f"declared containment {names[i]} ⊆ {names[j]} does not hold")
        for a in self.assertions:
            if not 0 <= a[0] < k:
                raise InvalidInput(f"assertion refers to undeclared prime index {a[0]}")

    @property
    def ring(self):
        return self.primes[0].ring

    def containment(self):
        """below[j] = indices i with p_i ⊆ p_j (reflexive), by ideal containment."""
        k = len(self.primes)
        below = {j: set() for j in range(k)}
        for j in range(k):
            for i in range(k):
                if i == j or ideal_contains(self.primes[j].ideal, self.primes[i].ideal):
                    below[j].add(i)
        return below


@dataclass
class SynthesisResult:
    filtration: SpFiltration
    closure: dict  # shift -> sorted prime indices in the coaisle
    window: tuple
    caveat: str = "filtration relative to the declared primes only"

    def to_dict(self):
        return {
            "filtration": self.filtration.to_dict(),
            "closure": {str(n): v for n, v in self.closure.items()},
            "window": list(self.window),
            "caveat": self.caveat,
        }


def _closure(evidence, window):
    """In-coaisle set at each shift: positives closed under generalization and cosuspension."""
    below = evidence.containment()
    pos = [(i, n) for i, n, v in evidence.assertions if v]
    a, b = window
    closed = {}
    origin = {}
    for n in range(a, b + 1):
        s = set()
        for i, m in sorted(pos, key=lambda t: (t[1], t[0])):
            if m <= n:
                for q in sorted(below[i]):
                    if q not in s:
                        s.add(q)
                        origin[(q, n)] = (i, m)
        closed[n] = s
    return closed, origin


def synthesize_filtration(evidence, window):
    a, b = window
    if a > b:
        raise InvalidInput(f"empty window {a}..{b}")
    ring = evidence.ring
    shifts = [n for _, n, _ in evidence.assertions]
    a = min([a] + shifts)
    b = max([b] + shifts)
    closed, origin = _closure(evidence, (a, b))
    names = [str(p) for p in evidence.primes]
    for i, n, v in evidence.assertions:
        if not v and n in closed and i in closed[n]:
            src, m = origin[(i, n)]
            chain = [f"E(R/{names[src]})[{-m}] in coaisle (asserted)"]
            if src != i:
                chain.append(f"{names[i]} ⊆ {names[src]}: generalization to E(R/{names[i]})[{-m}]")
            if m != n:
                chain.append(f"cosuspension from shift {m} to {n}")
            chain.append(f"contradicts asserted E(R/{names[i]})[{-n}] not in coaisle")
            raise InconsistentEvidence("coaisle evidence is inconsistent", chain)
    k = len(evidence.primes)
    all_primes = SpcSet(ring, [ClosedSet(p.ideal) for p in evidence.primes])
    steps = {}
    for n in range(a, b + 1):
        U = [j for j in range(k) if j not in closed[n]]
        steps[n] = SpcSet(ring, [ClosedSet(evidence.primes[j].ideal) for j in U])
    try:
        phi = make_filtration(a, b, steps, all_primes, steps[b], ring)
    except InvalidInput as exc:
        raise InvariantViolation(f"synthesized filtration is not decreasing: {exc}") from None
    phi.notes.append("relative to the declared primes")
    return SynthesisResult(phi, {n: sorted(closed[n]) for n in range(a, b + 1)}, (a, b))


def induced_evidence(phi, primes, window):
    """Evidence read off a filtration: E(R/p)[-n] is in the coaisle iff p ∉ φ(n)."""
    a, b = window
    assertions = []
    for n in range(a, b + 1):
        for i, p in enumerate(primes):
            assertions.append((i, n, not prime_in_spc(p, phi.value(n))))
    return CoaisleEvidence(list(primes), [], assertions)


def filtrations_equal(phi, psi, window):
    a, b = window
    return all(spc_equal(phi.value(n), psi.value(n)) for n in range(a - 1, b + 2))


# ---------------------------------------------------------------------------
# boundedness


@dataclass
class BoundedReport:
    m: object  # int or None
    greatest: object  # greatest m with φ(m) = Spec(R), or None (None also if unbounded)
    union_is_spectrum: bool
    intersection_empty: bool

    @property
    def nondegenerate(self):
        return self.union_is_spectrum and self.intersection_empty

    def to_dict(self):
        return {
            "m": self.m,
            "greatest_m": self.greatest,
            "union_is_spectrum": self.union_is_spectrum,
            "intersection_empty": self.intersection_empty,
            "nondegenerate": self.nondegenerate,
        }


def bounded_below_check(phi):
    """Some m with φ(m) = Spec(R) (up to nilpotents), read off the constant tails."""
    union_spec = phi.below_lo.is_spectrum()
    inter_empty = phi.above_hi.is_empty()
    full = [n for n in range(phi.lo, phi.hi + 1) if phi.steps[n].is_spectrum()]
    if full:
        m = phi.lo
        greatest = full[-1]
        if greatest == phi.hi and phi.above_hi.is_spectrum():
            greatest = None
    elif union_spec:
        m = phi.lo - 1
        greatest = phi.lo - 1
    else:
        m = None
        greatest = None
    return BoundedReport(m, greatest, union_spec, inter_empty)


# ---------------------------------------------------------------------------
# standard truncation


@dataclass
class Triangle:
    left: object
    left_map: object
    middle: object
    right: object
    right_map: object


def standard_truncation(X, n):
    """τ^{≤n}X -> X -> τ^{>n}X, with both memberships asserted."""
    le, le_map, gt, gt_map = soft_truncations(X, n)
    phi = standard_filtration(X.ring, n)
    if not aisle_member(phi, le).verdict:
        raise InvariantViolation(f"τ^(≤{n}) is not in the standard aisle")
    if not coaisle_member(phi, gt).verdict:
        raise InvariantViolation(f"τ^(>{n}) is not in the standard coaisle")
    return Triangle(le, le_map, X, gt, gt_map)
