import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from aisle.cli import randgen
from aisle.cli.dsl import parse_session
from aisle.cli.suites import fixed_filtrations
from aisle.errors import InconsistentEvidence, InvalidInput, RingMismatch
from aisle.groebner import Ideal, ideal_contains
from aisle.homalg import hom_complex, koszul_complex, shift
from aisle.spectrum import make_prime, prime_in_spc, spc_contains, standard_filtration
from aisle.tstruct import (
    CoaisleEvidence,
    aisle_member,
    bounded_below_check,
    coaisle_member,
    coaisle_member_gamma,
    compact_generators,
    filtrations_equal,
    induced_evidence,
    standard_truncation,
    synthesize_filtration,
)


def session(body, ring="ring R = Q[x];"):
    return parse_session(ring + body)


def brute_coaisle(phi, X, reach=6):
    """Hom(K(I)[-n], X) = 0 for every component V(I) of φ(n), n over a wide range."""
    for n in range(X.lo - reach, X.hi + reach + 1):
        for I in phi.value(n).ideals():
            if not hom_complex(koszul_complex(I), X).cohomology(n).is_zero():
                return False
    return True


# ---------------------------------------------------------------------------
# aisle


def test_aisle_examples():
    s = session("""
        filtration phi = { below: V(0); 0: V(x); above: V(1); };
        complex A = stalk(R/(x), 0);
        complex B = stalk(R, 0);
        complex Z = stalk(0, 0);
    """)
    phi = s.get("phi")
    assert aisle_member(phi, s.get("A")).verdict
    r = aisle_member(phi, s.get("B"))
    assert not r.verdict and r.witnesses[0]["degree"] == 0
    assert r.witnesses[0]["support"] == "V(0)"
    assert aisle_member(phi, s.get("Z")).verdict


def test_aisle_ring_mismatch():
    s = session("filtration phi = { 0: V(x); };")
    t = session("complex X = stalk(S, 0);", ring="ring S = Q[x, y];")
    with pytest.raises(RingMismatch):
        aisle_member(s.get("phi"), t.get("X"))


# ---------------------------------------------------------------------------
# generators and coaisle


def test_compact_generators(Rx):
    std = standard_filtration(Rx, 0)
    (g,) = compact_generators(std, (0, 0))
    assert g.shift == 0 and not g.ideal.nonzero_gens
    s = session("filtration phi = { 0: V(x) + V(y); };", ring="ring R = Q[x, y];")
    gens = compact_generators(s.get("phi"), (0, 0))
    assert [(str(g.ideal), g.shift) for g in gens] == [("(x)", 0), ("(y)", 0)]
    s = session("filtration e = { below: V(1); 0: V(1); };")
    assert compact_generators(s.get("e"), (0, 0)) == []
    with pytest.raises(InvalidInput):
        compact_generators(s.get("e"), (1, 0))


def test_generators_extend_into_tails(Rx):
    std = standard_filtration(Rx, 0)
    assert [g.shift for g in compact_generators(std, (-2, 3))] == [-2, -1, 0]


def test_coaisle_standard():
    s = session("""
        complex A = stalk(R/(x), 1);
        complex B = stalk(R/(x), 0);
    """)
    std = standard_filtration(s.ring, 0)
    assert coaisle_member(std, s.get("A")).verdict
    r = coaisle_member(std, s.get("B"))
    assert not r.verdict
    assert r.witnesses[0]["degree"] == 0 and r.witnesses[0]["generator"]["ideal"] == ["0"]


def test_coaisle_window_bookkeeping():
    s = session("""
        filtration phi = { below: V(0); 0: V(x); above: V(1); };
        complex X = stalk(R, 0);
    """)
    phi, X = s.get("phi"), s.get("X")
    r = coaisle_member(phi, X)
    assert r.windows["generators"] == [-1, 1]
    assert r.windows["tested"] == 2  # K(0)[1] and K(x)[0]
    assert r.verdict == brute_coaisle(phi, X) is True


def test_coaisle_gamma_examples():
    s = session("""
        filtration phi = { below: V(0); 0: V(x); above: V(1); };
        complex A = stalk(R/(x), 1);
        complex B = stalk(R/(x), 0);
    """)
    std = standard_filtration(s.ring, 0)
    assert coaisle_member_gamma(std, s.get("A")).verdict
    r = coaisle_member_gamma(s.get("phi"), s.get("B"))
    assert not r.verdict
    assert any(w["degree"] == 0 and w["inf_rhom"] == 0 for w in r.witnesses)
    t = session("""
        filtration phi = { below: V(x); 0: V(x); above: V(1); };
        complex Y = stalk(R/(y), 0);
    """, ring="ring R = Q[x, y];")
    assert coaisle_member_gamma(t.get("phi"), t.get("Y")).verdict
    assert coaisle_member(t.get("phi"), t.get("Y")).verdict


@given(st.integers(0, 10_000))
def test_coaisle_matches_brute_force(seed):
    rng = random.Random(seed)
    name = rng.choice(randgen.COMPLEX_RINGS)
    ring, filts = fixed_filtrations(name)
    X = randgen.rand_complex(rng, ring)
    _, phi = rng.choice(filts)
    r = coaisle_member(phi, X).verdict
    assert r == brute_coaisle(phi, X)
    assert r == coaisle_member_gamma(phi, X).verdict


@given(st.integers(0, 10_000))
def test_orthogonality_and_shift(seed):
    rng = random.Random(seed)
    ring, filts = fixed_filtrations("Q[x,y]")
    X = randgen.rand_complex(rng, ring)
    for _, phi in filts:
        if aisle_member(phi, X).verdict and coaisle_member(phi, X).verdict:
            assert X.is_acyclic()
        # X[1] in U_φ iff X in U_ψ, ψ(m) = φ(m - 1)
        assert aisle_member(phi, shift(X, 1)).verdict == aisle_member(phi.shifted(1), X).verdict


def test_monotonicity():
    s = session("""
        filtration small = { below: V(x); 0: V(x, y); above: V(1); };
        filtration big = { below: V(0); 0: V(x); above: V(x, y); };
    """, ring="ring R = Q[x, y];")
    small, big = s.get("small"), s.get("big")
    for n in range(-2, 3):
        assert spc_contains(big.value(n), small.value(n))
    rng = random.Random(5)
    for _ in range(25):
        X = randgen.rand_complex(rng, s.ring)
        if aisle_member(small, X).verdict:
            assert aisle_member(big, X).verdict
        if coaisle_member(big, X).verdict:
            assert coaisle_member(small, X).verdict


# ---------------------------------------------------------------------------
# synthesis


def test_synthesis_hand_example():
    s = session("""
        prime p0 = (0);
        prime px = (x);
        evidence E = { primes: p0, px; edges: p0 < px; in: (px, 1); };
    """)
    r = synthesize_filtration(s.get("E"), (0, 2))
    assert r.closure == {0: [], 1: [0, 1], 2: [0, 1]}
    phi = r.filtration
    assert phi.value(0).is_spectrum()
    assert phi.value(1).is_empty() and phi.value(2).is_empty()


def test_synthesis_without_assertions():
    s = session("""
        prime p0 = (0);
        prime px = (x);
        evidence E = { primes: p0, px; };
    """)
    phi = synthesize_filtration(s.get("E"), (0, 1)).filtration
    for n in (-1, 0, 1, 2):
        assert phi.value(n).is_spectrum()


def test_synthesis_only_generalizes():
    s = session("""
        prime p0 = (0);
        prime px = (x);
        evidence E = { primes: p0, px; edges: p0 < px; in: (p0, 0); out: (px, 0); };
    """)
    phi = synthesize_filtration(s.get("E"), (0, 0)).filtration
    assert len(phi.value(0).components) == 1
    assert str(phi.value(0).components[0]) == "V(x)"


def test_synthesis_inconsistent():
    s = session("""
        prime p0 = (0);
        prime px = (x);
        evidence E = { primes: p0, px; in: (px, 0); out: (p0, 1); };
    """)
    with pytest.raises(InconsistentEvidence) as exc:
        synthesize_filtration(s.get("E"), (0, 1))
    chain = exc.value.chain
    assert any("generalization" in c for c in chain) and any("cosuspension" in c for c in chain)


def test_evidence_bad_edge():
    with pytest.raises(Exception, match="does not hold"):
        session("""
            prime px = (x);
            prime p1 = (x - 1);
            evidence E = { primes: px, p1; edges: px < p1; };
        """)


def test_synthesis_idempotent_on_induced_evidence():
    rng = random.Random(3)
    ring = randgen.ring_by_name("Q[x,y]")
    x, y = ring.gens()
    ideals = [[ring.zero()], [x], [y], [x, y], [x - ring.one()], [x - ring.one(), y]]
    primes = [make_prime(Ideal(ring, g)) for g in ideals]
    for _ in range(10):
        pos = [(rng.randrange(6), rng.randint(-1, 1), True) for _ in range(rng.randint(1, 3))]
        phi = synthesize_filtration(CoaisleEvidence(primes, [], pos), (-1, 1)).filtration
        psi = synthesize_filtration(induced_evidence(phi, primes, (-1, 1)), (-1, 1)).filtration
        assert filtrations_equal(phi, psi, (-1, 1))
        for n in range(-1, 2):
            for p in primes:
                for q in primes:
                    if prime_in_spc(p, phi.value(n)) and ideal_contains(q.ideal, p.ideal):
                        assert prime_in_spc(q, phi.value(n))


# ---------------------------------------------------------------------------
# boundedness


def test_bounded_standard(Rx):
    r = bounded_below_check(standard_filtration(Rx, 2))
    assert r.m == 2 and r.nondegenerate


def test_bounded_degenerate():
    s = session("filtration d = { below: V(x); 0: V(x); above: V(1); };")
    r = bounded_below_check(s.get("d"))
    assert r.m is None and not r.union_is_spectrum and r.intersection_empty


def test_bounded_quotient_ring():
    s = session("filtration b = { below: V(x); 0: V(x); 1: V(x, y); above: V(1); };",
                ring="ring S = Q[x, y] / (x^2);")
    r = bounded_below_check(s.get("b"))
    assert r.m == 0 and r.greatest == 0 and r.nondegenerate


# ---------------------------------------------------------------------------
# standard truncation


def test_standard_truncation_examples():
    s = session("""
        complex A = stalk(R/(x), 0);
        complex B = { 0: R -[[[x]]]-> 1: R };
    """)
    A, B = s.get("A"), s.get("B")
    T = standard_truncation(A, 0)
    assert T.right.is_acyclic() and not T.left.is_acyclic()
    T = standard_truncation(A, -1)
    assert T.left.is_acyclic() and not T.right.is_acyclic()
    T = standard_truncation(B, 0)
    assert T.left.is_acyclic()
    assert T.right_map.induced(1).is_isomorphism()
