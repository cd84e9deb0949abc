"""Ideal and submodule calculus on top of the Buchberger kernel.

All computations happen in the ambient polynomial ring: an ideal I of
R = k[x]/J is handled through its preimage I + J, a submodule N of R^r
through N + J*R^r.
"""

import threading
from collections import OrderedDict
from dataclasses import dataclass
from operator import le

from . import _engine
from .errors import InvalidInput, InvariantViolation, RingMismatch
from .polyring import MonomialOrder, Polynomial, Ring


def freeze(vec):
    return tuple(sorted(vec.items()))


class _Cache:
    """Small thread-safe LRU map; values are pure functions of their keys."""

    def __init__(self, size=8192):
        self.size = size
        self.data = OrderedDict()
        self.lock = threading.Lock()

    def get(self, key):
        with self.lock:
            v = self.data.get(key)
            if v is not None:
                self.data.move_to_end(key)
            return v

    def put(self, key, value):
        with self.lock:
            self.data[key] = value
            if len(self.data) > self.size:
                self.data.popitem(last=False)
        return value

    def clear(self):
        with self.lock:
            self.data.clear()


_span_cache = _Cache()


def clear_caches():
    _span_cache.clear()
    _radical_cache.clear()


# ---------------------------------------------------------------------------
# submodules of free modules


class Span:
    """Submodule of R^rank generated by ``columns`` (raw vectors).

    With ``track=True`` the Groebner basis is computed for the graph module
    (c_j, e_{rank+j}) so syzygies of the columns and cofactor lifts are
    available.
    """

    def __init__(self, ring, rank, columns, track=False):
        self.ring = ring
        self.rank = rank
        self.columns = [dict(c) for c in columns]
        self.track = track
        p, negkey = ring.p, ring.negkey
        gens = []
        for j, c in enumerate(self.columns):
            v = dict(c)
            if track:
                v[(rank + j,) + (0,) * ring.nvars] = ring.field(1)
            gens.append(v)
        # J-multiples at every real position, and in the tracking part to keep
        # cofactors reduced
        npos = rank + (len(self.columns) if track else 0)
        for g in ring._rel_raw:
            for i in range(npos):
                gens.append({(i,) + t[1:]: c for t, c in g.items()})
        full = _engine.buchberger(gens, p, negkey, rank1=(rank == 1 and not track))
        self._full = full
        self._full_red = _engine.Reducer([(_engine.lead(f, negkey), f) for f in full])
        real = []
        syz = []
        for f in full:
            lt = _engine.lead(f, negkey)
            if lt[0] < rank:
                real.append(f)
            else:
                syz.append(f)
        self._syz_raw = syz
        # project to the real part; leading terms stay put under position-over-term
        proj = [{t: c for t, c in f.items() if t[0] < rank} for f in real]
        self.gb = proj
        self.reducer = _engine.Reducer([(_engine.lead(f, negkey), f) for f in proj])
        rel_lts = [_engine.lead(g, negkey) for g in ring._rel_raw]
        self.canonical = [
            f for f in proj
            if not any(all(map(le, r[1:], _engine.lead(f, negkey)[1:])) for r in rel_lts)
        ]

    @classmethod
    def of(cls, ring, rank, columns, track=False):
        # zero columns matter for tracking (they are syzygies), not otherwise
        cols = list(columns) if track else [c for c in columns if c]
        key = (ring, rank, tuple(freeze(c) for c in cols), track)
        hit = _span_cache.get(key)
        if hit is None:
            hit = _span_cache.put(key, cls(ring, rank, cols, track))
        return hit

    def reduce(self, v):
        return _engine.nf(v, self.reducer, self.ring.p, self.ring.negkey)

    def contains(self, v):
        return not self.reduce(v)

    def contains_span(self, other):
        return all(self.contains(c) for c in other.columns)

    def equals(self, other):
        return self.contains_span(other) and other.contains_span(self)

    def is_everything(self):
        return all(self.contains({(i,) + (0,) * self.ring.nvars: 1}) for i in range(self.rank))

    def syzygies(self):
        """Generators of the relations among ``columns`` (vectors in R^ncols)."""
        if not self.track:
            raise ValueError("span built without tracking")
        out = []
        for f in self._syz_raw:
            v = {(t[0] - self.rank,) + t[1:]: c for t, c in f.items()}
            v = self.ring.reduce_raw(v)
            if v:
                out.append(v)
        return out

    def lift(self, v):
        """Coefficients a with sum a_j columns_j == v (mod J), or None."""
        if not self.track:
            raise ValueError("span built without tracking")
        r = _engine.nf(v, self._full_red, self.ring.p, self.ring.negkey)
        if any(t[0] < self.rank for t in r):
            return None
        p = self.ring.p
        a = {(t[0] - self.rank,) + t[1:]: (-c % p if p else -c) for t, c in r.items()}
        return self.ring.reduce_raw(a)


def raw_const(ring, pos, c=1):
    return {(pos,) + (0,) * ring.nvars: ring.field(c)}


# ---------------------------------------------------------------------------
# ideals


class Ideal:
    """An ideal of ``ring`` given by generators (zero ideal: the single generator 0)."""

    def __init__(self, ring, generators):
        gens = []
        for g in generators:
            if isinstance(g, Polynomial) and g.ring != ring:
                if g.ring.ambient == ring.ambient:
                    g = ring(g)
                else:
                    raise RingMismatch(f"generator {g} is not in {ring}")
            else:
                g = ring(g)
            if g and g not in gens:
                gens.append(g)
        self.ring = ring
        self.gens = tuple(gens) if gens else (ring.zero(),)

    @property
    def nonzero_gens(self):
        return tuple(g for g in self.gens if g)

    def is_zero(self):
        return not self.gens[0]

    def __eq__(self, other):
        return isinstance(other, Ideal) and self.ring == other.ring and self.gens == other.gens

    def __hash__(self):
        return hash((self.ring, self.gens))

    def __str__(self):
        return "(" + ", ".join(str(g) for g in self.gens) + ")"

    def __repr__(self):
        return f"Ideal{self}"

    def raw_gens(self):
        return [g.raw() for g in self.nonzero_gens]

    def span(self, track=False):
        return Span.of(self.ring, 1, self.raw_gens(), track)


def _check_same(*objs):
    rings = {o.ring for o in objs}
    if len(rings) > 1:
        raise RingMismatch("operands live in different rings: " + ", ".join(str(r) for r in rings))


@dataclass(frozen=True)
class GroebnerBasis:
    ideal: Ideal
    basis: tuple
    order: MonomialOrder

    @property
    def ring(self):
        return self.ideal.ring

    def is_unit(self):
        return len(self.basis) == 1 and self.basis[0].is_constant() and bool(self.basis[0])


def groebner_basis(ideal):
    """Reduced Groebner basis; in a quotient ring the elements whose leading
    term is not already a leading term of the relations."""
    sp = ideal.span()
    basis = tuple(Polynomial._from_raw(ideal.ring, f) for f in sp.canonical)
    return GroebnerBasis(ideal, basis, ideal.ring.order)


def normal_form(f, G):
    _check_same(f, G)
    sp = G.ideal.span()
    r = sp.reduce(f.raw())
    return Polynomial._from_raw(f.ring, r)


@dataclass(frozen=True)
class Membership:
    member: bool
    cofactors: tuple = None

    def __bool__(self):
        return self.member


def ideal_member(f, ideal, certificate=False):
    """f in I, with cofactors q (f = sum q_i g_i) when requested and true."""
    _check_same(f, ideal)
    if not ideal.span().contains(f.raw()):
        return Membership(False)
    if not certificate:
        return Membership(True)
    gens = ideal.nonzero_gens
    if not f:
        return Membership(True, tuple(ideal.ring.zero() for _ in ideal.gens))
    sp = Span.of(ideal.ring, 1, [g.raw() for g in gens], track=True)
    a = sp.lift(f.raw())
    qs = [Polynomial._from_raw(ideal.ring, a, j) for j in range(len(gens))]
    total = ideal.ring.zero()
    for q, g in zip(qs, gens):
        total = total + q * g
    if total != f:
        raise InvariantViolation(f"membership certificate for {f} does not expand back")
    it = iter(qs)
    return Membership(True, tuple(next(it) if g else ideal.ring.zero() for g in ideal.gens))


def ideal_contains(big, small):
    """small ⊆ big."""
    _check_same(big, small)
    sp = big.span()
    return all(sp.contains(g.raw()) for g in small.nonzero_gens)


def ideals_equal(a, b):
    return ideal_contains(a, b) and ideal_contains(b, a)


def is_unit_ideal(ideal):
    return ideal.span().contains(raw_const(ideal.ring, 0))


def ideal_sum(a, b):
    _check_same(a, b)
    return Ideal(a.ring, a.nonzero_gens + b.nonzero_gens)


def ideal_product(a, b):
    _check_same(a, b)
    return Ideal(a.ring, [f * g for f in a.gens for g in b.gens])


def ideal_power(a, k):
    out = Ideal(a.ring, [a.ring.one()])
    for _ in range(k):
        out = ideal_product(out, a)
    return out


# --- fresh-variable constructions ------------------------------------------


def _ambient_gens(ideal):
    """Raw generators of the preimage I + J in the ambient ring."""
    return ideal.raw_gens() + [dict(g) for g in ideal.ring._rel_raw]


def _pad(vec, front=0, back=0):
    return {(t[0],) + (0,) * front + t[1:] + (0,) * back: c for t, c in vec.items()}


_radical_cache = _Cache()


def radical_member(f, ideal):
    """f in rad(I): 1 in (I, 1 - t*f) over the ring extended by t."""
    _check_same(f, ideal)
    key = (ideal, f)
    hit = _radical_cache.get(key)
    if hit is not None:
        return hit
    ring = ideal.ring
    n = ring.nvars
    p = ring.p
    gens = [_pad(g, back=1) for g in _ambient_gens(ideal)]
    one = (0,) + (0,) * (n + 1)
    rab = {one: ring.field(1)}
    for e, c in f.terms.items():
        t = (0,) + e + (1,)
        rab[t] = (-c) % p if p else -c
    gens.append(rab)
    # degree-compatible order; unit test needs no elimination property
    negkey = MonomialOrder("grevlex").negkey
    basis = _engine.buchberger(gens, p, negkey, rank1=True)
    result = len(basis) == 1 and list(basis[0]) == [one]
    return _radical_cache.put(key, result)


def _elim_basis(gens, k, p):
    """Groebner basis under elim(k) of raw generators in (k + n) variables."""
    negkey = MonomialOrder("elim", k).negkey
    return _engine.buchberger(gens, p, negkey, rank1=True)


def ideal_intersect(a, b):
    """I ∩ J by eliminating t from t*I + (1 - t)*J."""
    _check_same(a, b)
    ring = a.ring
    p = ring.p
    gens = []
    for g in _ambient_gens(a):
        gens.append({(0, 1) + t[1:]: c for t, c in g.items()})
    for g in _ambient_gens(b):
        h = _pad(g, front=1)
        for t, c in g.items():
            tt = (0, 1) + t[1:]
            h[tt] = (-c) % p if p else -c
        gens.append(h)
    basis = _elim_basis(gens, 1, p)
    out = [
        {(0,) + t[2:]: c for t, c in f.items()}
        for f in basis
        if all(t[1] == 0 for t in f)
    ]
    return Ideal(ring, [Polynomial(ring, {t[1:]: c for t, c in g.items()}) for g in out])


def _quotient_by_element(a, g):
    """(I : g) for a single element g, read off the syzygies of (g, I)."""
    ring = a.ring
    if not g:
        return Ideal(ring, [ring.one()])
    sp = Span.of(ring, 1, [g.raw()] + a.raw_gens(), track=True)
    out = [Polynomial._from_raw(ring, s, 0) for s in sp.syzygies()]
    return Ideal(ring, out)


def ideal_quotient(a, b):
    """(I : J) = {f : f J ⊆ I}."""
    _check_same(a, b)
    result = None
    for g in b.gens:
        q = _quotient_by_element(a, g)
        result = q if result is None else ideal_intersect(result, q)
    return _minimize(result)


def _minimize(ideal):
    """Replace generators by the reduced Groebner basis (drops redundancy)."""
    gb = groebner_basis(ideal)
    return Ideal(ideal.ring, gb.basis or [ideal.ring.zero()])


def saturate(a, b):
    """(I : J^∞) and the least t with (I : J^t) = (I : J^{t+1})."""
    _check_same(a, b)
    current = _minimize(a)
    t = 0
    while True:
        nxt = ideal_quotient(current, b)
        if ideals_equal(nxt, current):
            return current, t
        current = nxt
        t += 1


def eliminate(ideal, variables):
    """I ∩ k[remaining variables], as an ideal of that subring."""
    ring = ideal.ring
    names = set(variables)
    for v in names:
        if v not in ring.variables:
            raise InvalidInput(f"unknown variable {v!r} in {ring}")
    if not names:
        return ideal
    elim_idx = [i for i, v in enumerate(ring.variables) if v in names]
    keep_idx = [i for i in range(ring.nvars) if i not in elim_idx]
    perm = elim_idx + keep_idx
    k = len(elim_idx)
    p = ring.p

    def permute(g):
        return {(0,) + tuple(t[1 + i] for i in perm): c for t, c in g.items()}

    def restrict(basis):
        return [
            {t[1 + k:]: c for t, c in f.items()}
            for f in basis
            if all(not any(t[1:1 + k]) for t in f)
        ]

    order = ring.order if ring.order.kind != "elim" else MonomialOrder("grevlex")
    keep_names = [ring.variables[i] for i in keep_idx]
    sub = Ring(ring.field, keep_names, order)
    if ring._rel_raw:
        rel = restrict(_elim_basis([permute(g) for g in ring._rel_raw], k, p))
        if rel:
            sub = Ring(ring.field, keep_names, order, [Polynomial(sub, t) for t in rel])
    kept = restrict(_elim_basis([permute(g) for g in _ambient_gens(ideal)], k, p))
    return Ideal(sub, [Polynomial(sub, t) for t in kept])
