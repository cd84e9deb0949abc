"""Randomized and curated property suites behind ``aisle verify``.

Case i of suite s under seed k draws from random.Random(f"{s}:{k}:{i}"), so a
case is reproducible on its own and the output does not depend on how cases
are spread over worker processes.
"""

import random
from concurrent.futures import ProcessPoolExecutor
from functools import lru_cache

from ..errors import AisleError, InconsistentEvidence, Undetermined
from ..groebner import Ideal, Span, ideal_member, is_unit_ideal
from ..homalg import (
    cone,
    depth_via_koszul,
    hom_complex,
    inf_rhom,
    koszul_complex,
    shift,
    tensor_complex,
)
from ..homalg.complexes import ComplexMap
from ..homalg.modules import kernel_generators
from ..oracles import ideal_member_oracle
from ..spectrum import (
    make_filtration,
    make_prime,
    prime_in_spc,
    standard_filtration,
)
from ..tstruct import (
    CoaisleEvidence,
    aisle_failure_by_primes,
    aisle_member,
    bounded_below_check,
    coaisle_member,
    coaisle_member_gamma,
    filtrations_equal,
    induced_evidence,
    standard_truncation,
    synthesize_filtration,
)
from . import randgen
from .dsl import fmt_complex, fmt_filtration, fmt_ideal, parse_session


class CaseFailure(Exception):
    def __init__(self, message, counterexample=None):
        super().__init__(message)
        self.counterexample = counterexample or {}


class CaseUndetermined(Exception):
    pass


def _check(cond, message, **ce):
    if not cond:
        raise CaseFailure(message, {k: str(v) for k, v in ce.items()})


# ---------------------------------------------------------------------------
# groebner-oracle


ORACLE_RINGS = ("Q[x,y]", "Q[x,y,z]", "GF7[x,y]", "GF7[x,y,z]")
ORACLE_DEGREE = 6


def case_groebner_oracle(rng):
    ring = randgen.ring_by_name(rng.choice(ORACLE_RINGS))
    I = randgen.rand_ideal(rng, ring)
    tests = []
    for _ in range(3):
        f = ring.zero()
        for g in I.nonzero_gens:
            room = ORACLE_DEGREE - g.degree()
            if room >= 0:
                f = f + randgen.rand_poly(rng, ring, min(room, 3), 2) * g
        tests.append(f)
        tests.append(f + randgen.rand_poly(rng, ring, 2, 1))
        tests.append(randgen.rand_poly(rng, ring, 3, 3))
    escalated = False
    for f in tests:
        a = ideal_member(f, I, certificate=True)
        b = ideal_member_oracle(f, I, ORACLE_DEGREE)
        if a.member and not b:
            # every representation needs degree > 6 (happens for unit ideals such as
            # (y^3, x*y + 3)); rerun the oracle at the certificate's degree
            top = max((c * g).degree() for c, g in zip(a.cofactors, I.gens) if c and g)
            b = ideal_member_oracle(f, I, top)
            escalated = True
        _check(bool(a) == b, "ideal_member disagrees with the degree-bounded linear algebra oracle",
               ideal=fmt_ideal(I), poly=f, engine=bool(a), oracle=b, ring=ring)
    return "escalated" if escalated else None


# ---------------------------------------------------------------------------
# fi-depth


def _depth_ideals(ring):
    v = ring.gens()
    return [Ideal(ring, v[:k]) for k in range(1, ring.nvars + 1)]


def case_fi_depth(rng):
    ring = randgen.ring_by_name(rng.choice(randgen.COMPLEX_RINGS))
    X = randgen.rand_complex(rng, ring)
    for I in _depth_ideals(ring):
        k = depth_via_koszul(I, X).value
        e = inf_rhom(I, X).value
        _check(k == e, "Koszul depth and inf RHom(R/I, X) differ",
               ideal=fmt_ideal(I), complex=fmt_complex(X), koszul=k, ext=e, ring=ring)


# ---------------------------------------------------------------------------
# orthogonality and coaisle agreement (shared case generator)


FILTRATION_TEXT = """
filtration std0 = { below: V(0); 0: V(0); above: V(1); };
filtration fx = { below: V(0); 0: V(x); above: V(1); };
filtration fmix = { below: V(0); -1: V(x) + V(y); 0: V(x, y); 1: V(x, y); above: V(1); };
filtration fdeg = { below: V(0); 0: V(x*y); 1: V(x); above: V(x, y); };
filtration fconst = { below: V(x); 0: V(x); above: V(x); };
"""

_RING_DECL = {
    "Q[x,y]": "ring R = Q[x, y] order grevlex;",
    "GF7[x,y,z]": "ring R = GF(7)[x, y, z] order grevlex;",
}


@lru_cache(maxsize=None)
def fixed_filtrations(ring_name):
    s = parse_session(_RING_DECL[ring_name] + FILTRATION_TEXT)
    return s.ring, [(n, s.get(n, "filtration")) for n in s.names("filtration")]


def _ortho_instance(rng):
    name = rng.choice(randgen.COMPLEX_RINGS)
    ring, filts = fixed_filtrations(name)
    # the filtrations are parsed in their own ring object; use it for the complex too
    X = randgen.rand_complex(rng, ring)
    n = rng.randint(X.lo - 1, X.hi) if X.objects else 0
    return ring, filts, X, n


def case_orthogonality(rng):
    ring, filts, X, n = _ortho_instance(rng)
    acyclic = X.is_acyclic()
    for fname, phi in filts:
        u = aisle_member(phi, X).verdict
        v = coaisle_member(phi, X).verdict
        _check(acyclic or not (u and v), "a non-acyclic complex is in both the aisle and the coaisle",
               filtration=fname, complex=fmt_complex(X))
    T = standard_truncation(X, n)  # asserts both memberships
    phi = standard_filtration(ring, n)
    _check(aisle_member(phi, T.left).verdict, "soft truncation τ≤n is not in the aisle", complex=fmt_complex(X), n=n)
    _check(coaisle_member(phi, T.right).verdict, "soft truncation τ>n is not in the coaisle",
           complex=fmt_complex(X), n=n)


def case_coaisle_agreement(rng):
    ring, filts, X, _ = _ortho_instance(rng)
    for fname, phi in filts:
        a = coaisle_member(phi, X).verdict
        try:
            b = coaisle_member_gamma(phi, X).verdict
        except Undetermined:
            raise CaseUndetermined() from None
        _check(a == b, "Hom-orthogonal and local-cohomology coaisle tests disagree",
               filtration=fname, complex=fmt_complex(X), hom=a, gamma=b)


# ---------------------------------------------------------------------------
# stalk-witness: curated corpus


CORPUS = """
ring R = Q[x, y] order grevlex;
prime p0 = (0);
prime px = (x);
prime py = (y);
prime pxy = (x, y);
prime pxm1 = (x - 1);
prime px2 = (x^2 - 2);
prime pxmy = (x - y);
prime pxy1 = (x, y - 1);
complex c01 = stalk(R, 0);
complex c02 = stalk(R/(x), 0);
complex c03 = stalk(R/(x*y), 0);
complex c04 = stalk(R/(x^2, x*y), 1);
complex c05 = stalk(R/(x, y), -1);
complex c06 = { 0: R -[[[x]]]-> 1: R };
complex c07 = { 0: R -[[[x*y]]]-> 1: R };
complex c08 = { 0: R -[[[x - 1]]]-> 1: R };
koszul c09 = K(x, y);
koszul c10 = K(x*y);
complex c11 = stalk(R/(x^2 - 2), 0);
complex c12 = { -1: R/(x) -[[[y]]]-> 0: R/(x) };
complex c13 = { -1: free 2 -[[[x, y]]]-> 0: free 1 };
complex c14 = stalk(R/(x - y), 1);
complex c15 = stalk(R/((x - 1)*y), 0);
complex c16 = { 0: free 1 -[[[x], [y]]]-> 1: free 2 };
complex c17 = stalk(R/(x*(x - 1)), 2);
complex c18 = { };
complex c19 = stalk(R/(y^2), 0);
complex c20 = { 0: R/(x*y) -[[[x]]]-> 1: R/(x*y) };
complex c21 = stalk(R/(x, y - 1), 0);
complex c22 = { -1: R -[[[x]]]-> 0: R/(y) };
complex c23 = shift(c03, 1);
complex c24 = { -1: R/(x^2) -[[[x]]]-> 0: R/(x^2) -[[[x]]]-> 1: R/(x^2) };
""" + FILTRATION_TEXT


@lru_cache(maxsize=None)
def corpus():
    s = parse_session(CORPUS)
    cx = [(n, s.get(n)) for n in s.names() if s.kind_of(n) in ("complex", "koszul")]
    primes = [s.get(n, "prime") for n in s.names("prime")]
    filts = [(n, s.get(n, "filtration")) for n in s.names("filtration")]
    return cx, primes, filts


def case_stalk_witness(i):
    cx, primes, filts = corpus()
    name, X = cx[i]
    for fname, phi in filts:
        fails = not aisle_member(phi, X).verdict
        found = aisle_failure_by_primes(phi, X, primes)
        _check(fails == bool(found), "aisle failure does not match the declared (p, n) witnesses",
               complex=name, filtration=fname, aisle_fails=fails,
               witnesses=[(str(p), n) for p, n in found])


# ---------------------------------------------------------------------------
# synthesis


def _point_prime(ring, point):
    """The prime (v - a_v : v in point) for a partial point {var index: value}."""
    v = ring.gens()
    gens = [v[k] - ring.const(a) for k, a in sorted(point.items())]
    return make_prime(Ideal(ring, gens or [ring.zero()]))


def _point_le(a, b):
    return all(b.get(k) == val for k, val in a.items())


@lru_cache(maxsize=None)
def _point_pool():
    pts = []
    for mask in range(8):
        vars_ = [k for k in range(3) if mask >> k & 1]
        for vals in range(1 << len(vars_)):
            pts.append({k: (vals >> j) & 1 for j, k in enumerate(vars_)})
    return pts


def _hand_example():
    ring = randgen.ring_by_name("Q[x]")
    x = ring.gen(0)
    p0 = make_prime(Ideal(ring, [ring.zero()]))
    px = make_prime(Ideal(ring, [x]))
    ev = CoaisleEvidence([p0, px], [(0, 1)], [(1, 1, True)])
    r = synthesize_filtration(ev, (0, 2))
    _check(r.closure == {0: [], 1: [0, 1], 2: [0, 1]}, "hand example closure differs", closure=r.closure)
    phi = r.filtration
    _check(phi.value(0).is_spectrum(), "φ(0) should be V(0)", phi=fmt_filtration(phi))
    _check(phi.value(1).is_empty() and phi.value(2).is_empty(), "φ(1), φ(2) should be empty",
           phi=fmt_filtration(phi))


def case_synthesis(rng, i):
    if i == 0:
        return _hand_example()
    ring = randgen.ring_by_name("Q[x,y,z]")
    pts = rng.sample(_point_pool(), 6)
    primes = [_point_prime(ring, p) for p in pts]
    k = len(primes)
    le = [[_point_le(pts[a], pts[b]) for b in range(k)] for a in range(k)]
    edges = [(a, b) for a in range(k) for b in range(k) if a != b and le[a][b] and rng.random() < 0.5]
    window = (-1, 2)
    pos = [(rng.randrange(k), rng.randint(*window), True) for _ in range(rng.randint(0, 4))]
    # oracle closure from the point order
    closure = {n: sorted({q for a, m, _ in pos if m <= n for q in range(k) if le[q][a]})
               for n in range(window[0], window[1] + 1)}
    outside = [(j, n) for n in closure for j in range(k) if j not in closure[n]]
    neg = [(j, n, False) for j, n in rng.sample(outside, min(len(outside), rng.randint(0, 3)))]
    ev = CoaisleEvidence(primes, edges, pos + neg)
    below = ev.containment()
    for b in range(k):
        _check(below[b] == {a for a in range(k) if le[a][b]}, "computed containment differs from the point order",
               prime=primes[b])
    r = synthesize_filtration(ev, window)
    phi = r.filtration
    _check(r.closure == closure, "closure differs from the order-theoretic oracle",
           engine=r.closure, oracle=closure)
    for n in range(window[0], window[1] + 1):
        for j in range(k):
            inside = prime_in_spc(primes[j], phi.value(n))
            _check(inside == (j not in closure[n]), "step membership does not match the closure",
                   n=n, prime=primes[j], phi=fmt_filtration(phi))
        # specialization-closed over the declared primes
        for a in range(k):
            for b in range(k):
                if le[a][b] and prime_in_spc(primes[a], phi.value(n)):
                    _check(prime_in_spc(primes[b], phi.value(n)), "step is not specialization closed",
                           n=n, phi=fmt_filtration(phi))
    make_filtration(phi.lo, phi.hi, phi.steps, phi.below_lo, phi.above_hi, ring)  # decreasing
    again = synthesize_filtration(induced_evidence(phi, primes, r.window), r.window).filtration
    _check(filtrations_equal(phi, again, r.window), "synthesis is not idempotent on induced evidence",
           first=fmt_filtration(phi), second=fmt_filtration(again))
    # a negative inside the closure must be rejected
    inside = [(j, n) for n in closure for j in closure[n]]
    if inside:
        j, n = rng.choice(inside)
        try:
            synthesize_filtration(CoaisleEvidence(primes, edges, pos + [(j, n, False)]), window)
        except InconsistentEvidence as exc:
            _check(bool(exc.chain), "inconsistency reported without a derivation chain")
        else:
            raise CaseFailure("contradictory evidence was accepted", {"prime": str(primes[j]), "n": str(n)})


# ---------------------------------------------------------------------------
# bounded


BOUNDED_QUOTIENT = """
ring S = Q[x, y] / (x^2) order grevlex;
filtration b1 = { below: V(x); 0: V(x); 1: V(x, y); above: V(1); };
filtration b2 = { below: V(x); 0: V(x, y); above: V(1); };
filtration b3 = { below: V(x, y); 0: V(x, y); above: V(1); };
filtration b4 = { below: V(0); 0: V(x); 1: V(1); above: V(1); };
"""

BOUNDED_DOMAIN = """
ring T = Q[x] order grevlex;
filtration d1 = { below: V(x); 0: V(x); above: V(1); };
filtration d2 = { below: V(0); 0: V(x); above: V(1); };
filtration d3 = { below: V(0); -1: V(0); 0: V(0); 1: V(x); above: V(1); };
filtration d4 = { below: V(0); 0: V(0); above: V(0); };
"""


def _nilradical_oracle(ring):
    # known nilradicals of the fixture rings
    if ring.is_quotient:
        return Ideal(ring, [ring.gen(0)])
    return Ideal(ring, [ring.zero()])


def _is_spec_oracle(S, nil):
    """Some component ideal lies inside the nilradical."""
    return any(all(ideal_member(g, nil).member for g in I.nonzero_gens) for I in S.ideals())


@lru_cache(maxsize=None)
def bounded_fixtures():
    out = []
    for text in (BOUNDED_QUOTIENT, BOUNDED_DOMAIN):
        s = parse_session(text)
        out += [(n, s.get(n, "filtration")) for n in s.names("filtration")]
    # synthesized filtrations over Q[x,y,z], half of them with (0) declared
    ring = randgen.ring_by_name("Q[x,y,z]")
    pool = _point_pool()
    for i in range(12):
        rng = random.Random(f"bounded-fixture:{i}")
        pts = rng.sample(pool[1:], 5)
        if i % 2 == 0:
            pts = [pool[0]] + pts[:4]
        primes = [_point_prime(ring, p) for p in pts]
        pos = [(rng.randrange(len(primes)), rng.randint(-1, 2), True) for _ in range(rng.randint(1, 3))]
        r = synthesize_filtration(CoaisleEvidence(primes, [], pos), (-1, 2))
        out.append((f"synth{i}", r.filtration))
    return out


def case_bounded(i):
    name, phi = bounded_fixtures()[i]
    nil = _nilradical_oracle(phi.ring)
    scan = range(phi.lo - 1, phi.hi + 2)
    full = [n for n in scan if _is_spec_oracle(phi.value(n), nil)]
    r = bounded_below_check(phi)
    _check((r.m is not None) == bool(full), "bounded_below_check disagrees with the brute-force scan",
           filtration=name, m=r.m, full=full)
    if r.m is not None:
        _check(_is_spec_oracle(phi.value(r.m), nil), "reported m is not a Spec step", filtration=name, m=r.m)
    top = None if phi.hi + 1 in full else (max(full) if full else None)
    _check(r.greatest == top, "greatest Spec step differs", filtration=name, engine=r.greatest, oracle=top)
    _check(r.union_is_spectrum == _is_spec_oracle(phi.below_lo, nil), "union test differs", filtration=name)
    _check(r.intersection_empty == all(is_unit_ideal(I) for I in phi.above_hi.ideals()),
           "intersection test differs", filtration=name)


# ---------------------------------------------------------------------------
# homological core


def _same_subquotient(P, Q):
    if P.ambient != Q.ambient:
        return False
    if P.ambient == 0:
        return True
    ring = P.ring
    top_p = Span.of(ring, P.ambient, P._gens + P._denoms)
    top_q = Span.of(ring, Q.ambient, Q._gens + Q._denoms)
    bot_p = Span.of(ring, P.ambient, P._denoms)
    bot_q = Span.of(ring, Q.ambient, Q._denoms)
    return top_p.equals(top_q) and bot_p.equals(bot_q)


def _exact_at(f, g):
    """im f = ker g for module maps A -f-> B -g-> C."""
    if not g.compose(f).is_zero():
        return False
    B = f.target
    if B.rank == 0:
        return True
    image = Span.of(B.ring, B.rank, list(f.matrix.cols) + list(B.relations.cols))
    return all(image.contains(k) for k in kernel_generators(g.matrix, g.target))


def _shift_map(f, k):
    return ComplexMap(shift(f.source, k), shift(f.target, k), {n - k: f.f(n) for n in f.maps})


def _homological_dd(rng, ring):
    X = randgen.rand_complex(rng, ring)
    I = randgen.rand_small_ideal(rng, ring)
    K = koszul_complex(I)
    for Y in (X, hom_complex(K, X), tensor_complex(X, K), cone(randgen.rand_chain_map(rng, ring))[0]):
        Y.validate()  # raises InvariantViolation on d∘d != 0


def _homological_shift(rng, ring):
    X = randgen.rand_complex(rng, ring)
    k = rng.randint(-2, 2)
    Xk = shift(X, k)
    for n in range(X.lo - k - 1, X.hi - k + 2):
        _check(_same_subquotient(Xk.cohomology_presentation(n), X.cohomology_presentation(n + k)),
               "H^n(X[k]) differs from H^(n+k)(X)", complex=fmt_complex(X), k=k, n=n)


def _homological_cone(rng, ring):
    f = randgen.rand_chain_map(rng, ring)
    C, inc, proj = cone(f)
    fs = _shift_map(f, 1)
    X = f.source
    for n in range(min(X.lo, f.target.lo) - 2, max(X.hi, f.target.hi) + 2):
        seq = [f.induced(n), inc.induced(n), proj.induced(n), fs.induced(n)]
        for a, b in zip(seq, seq[1:]):
            _check(_exact_at(a, b), "long exact sequence of the cone is not exact",
                   source=fmt_complex(f.source), target=fmt_complex(f.target), n=n)


def _homological_truncation(rng, ring):
    X = randgen.rand_complex(rng, ring)
    n = rng.randint(X.lo - 1, X.hi) if X.objects else 0
    T = standard_truncation(X, n)
    for k in range(X.lo - 1, X.hi + 2):
        a, b = T.left_map.induced(k), T.right_map.induced(k)
        if k <= n:
            _check(a.is_isomorphism(), "τ≤n X -> X is not an isomorphism on H^k", k=k, n=n, complex=fmt_complex(X))
            _check(T.right.cohomology(k).is_zero(), "τ>n X has cohomology in degree k ≤ n", k=k, n=n)
        else:
            _check(b.is_isomorphism(), "X -> τ>n X is not an isomorphism on H^k", k=k, n=n, complex=fmt_complex(X))
            _check(T.left.cohomology(k).is_zero(), "τ≤n X has cohomology in degree k > n", k=k, n=n)


def _homological_koszul(rng, ring):
    I = randgen.rand_ideal(rng, ring, ngens=3, maxdeg=2, nterms=2)
    H0 = koszul_complex(I).cohomology(0)
    if is_unit_ideal(I):
        _check(H0.is_zero(), "H^0 K(I) should vanish for the unit ideal", ideal=fmt_ideal(I))
        return
    _check(H0.rank == 1, "H^0 K(I) is not cyclic", ideal=fmt_ideal(I), module=H0)
    _check(H0.span.equals(I.span()), "H^0 K(I) is not R/I", ideal=fmt_ideal(I), module=H0)


_HOMOLOGICAL = (_homological_dd, _homological_shift, _homological_cone, _homological_truncation, _homological_koszul)


def case_homological(rng, i):
    ring = randgen.ring_by_name(rng.choice(randgen.COMPLEX_RINGS))
    _HOMOLOGICAL[i % len(_HOMOLOGICAL)](rng, ring)


# ---------------------------------------------------------------------------
# driver

SUITES = {
    "groebner-oracle": (200, lambda rng, i: case_groebner_oracle(rng)),  # may return "escalated"
    "fi-depth": (50, lambda rng, i: case_fi_depth(rng)),
    "orthogonality": (100, lambda rng, i: case_orthogonality(rng)),
    "coaisle-agreement": (100, lambda rng, i: case_coaisle_agreement(rng)),
    "stalk-witness": (None, lambda rng, i: case_stalk_witness(i)),
    "synthesis": (101, case_synthesis),
    "bounded": (None, lambda rng, i: case_bounded(i)),
    "homological": (200, case_homological),
}

# suites whose case generator is shared with another suite
_RNG_ALIAS = {"coaisle-agreement": "orthogonality"}


def suite_size(name, cases=None):
    default, _ = SUITES[name]
    if name == "stalk-witness":
        limit = len(corpus()[0])
    elif name == "bounded":
        limit = len(bounded_fixtures())
    else:
        limit = None
    n = cases if cases is not None else (default if default is not None else limit)
    return min(n, limit) if limit is not None else n


def run_case(suite, seed, i):
    """Outcome record of one case: status is 'pass', 'fail' or 'undetermined'."""
    rng = random.Random(f"{_RNG_ALIAS.get(suite, suite)}:{seed}:{i}")
    try:
        status = SUITES[suite][1](rng, i)
    except CaseUndetermined:
        return {"status": "undetermined"}
    except Undetermined:
        return {"status": "undetermined"}
    except CaseFailure as exc:
        return {"status": "fail", "message": str(exc), "counterexample": exc.counterexample}
    except AisleError as exc:
        return {"status": "fail", "message": f"{exc.kind}: {exc}", "counterexample": {}}
    return {"status": status or "pass"}


def _run_task(task):
    return run_case(*task)


def expand(name):
    if name == "all":
        return list(SUITES)
    if name not in SUITES:
        from ..errors import InvalidInput

        raise InvalidInput(f"unknown suite {name!r} (one of: all, {', '.join(SUITES)})")
    return [name]


def run_suites(name, seed=0, cases=None, jobs=1):
    names = expand(name)
    tasks = [(s, seed, i) for s in names for i in range(suite_size(s, cases))]
    if jobs and jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_task, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
    else:
        results = [_run_task(t) for t in tasks]
    per = {s: {"suite": s, "cases": 0, "passed": 0, "undetermined": 0, "escalated": 0, "outcomes": []}
           for s in names}
    failures = []
    for (s, _, i), r in zip(tasks, results):
        rec = per[s]
        rec["cases"] += 1
        st = r["status"]
        rec["outcomes"].append({"pass": "P", "escalated": "E", "fail": "F", "undetermined": "U"}[st])
        if st in ("pass", "escalated"):
            rec["passed"] += 1
            rec["escalated"] += st == "escalated"
        elif st == "undetermined":
            rec["undetermined"] += 1
        else:
            failures.append({"suite": s, "case": i, "message": r["message"], "counterexample": r["counterexample"]})
    suites = []
    for s in names:
        rec = per[s]
        rec["outcomes"] = "".join(rec["outcomes"])
        suites.append(rec)
    return {
        "suite": name,
        "seed": seed,
        "cases": len(tasks),
        "passed": sum(r["passed"] for r in suites),
        "undetermined": sum(r["undetermined"] for r in suites),
        "failures": failures,
        "suites": suites,
    }
