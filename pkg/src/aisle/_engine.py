"""Buchberger kernel on raw module vectors.

A raw term is a tuple ``(pos, e_1, ..., e_n)``: the position of a free-module
basis vector followed by an exponent vector.  Ideals are the ``pos == 0`` case.
A raw vector is a dict ``term -> coefficient``.  Coefficients are ``gmpy2.mpq``
when the characteristic ``p`` is 0 and ints in ``[0, p)`` otherwise.

Term orders are supplied as a ``negkey`` function: the *smallest* negkey is the
*largest* term.  Position-over-term is built into every negkey (position 0 is
the largest position).

Every basis produced here is monic and reduced.
"""

import os
import threading
from contextlib import contextmanager
from heapq import heapify, heappop, heappush
from operator import add, le, sub

from gmpy2 import mpq

from .errors import ResourceExhausted

DEFAULT_MAX_PAIRS = 200_000

_budget = threading.local()


def max_pairs():
    v = getattr(_budget, "value", None)
    if v is not None:
        return v
    env = os.environ.get("AISLE_MAX_PAIRS")
    if env:
        try:
            return int(env)
        except ValueError:
            pass
    return DEFAULT_MAX_PAIRS


@contextmanager
def pair_budget(n):
    old = getattr(_budget, "value", None)
    _budget.value = n
    try:
        yield
    finally:
        _budget.value = old


def set_max_pairs(n):
    _budget.value = n


def coerce(x, p):
    if p:
        if isinstance(x, int):
            return x % p
        x = mpq(x)
        num, den = int(x.numerator), int(x.denominator)
        if den % p == 0:
            raise ZeroDivisionError(f"denominator {den} vanishes modulo {p}")
        return num * pow(den, p - 2, p) % p
    return mpq(x)


def inverse(c, p):
    if p:
        return pow(c, p - 2, p)
    return 1 / c


def lead(f, negkey):
    return min(f, key=negkey)


def scale(f, c, p):
    if p:
        return {t: v * c % p for t, v in f.items()}
    return {t: v * c for t, v in f.items()}


def monic(f, negkey, p):
    lt = lead(f, negkey)
    c = f[lt]
    if c == 1:
        return f
    return scale(f, inverse(c, p), p)


def shift_term(f, m):
    """Multiply every term of ``f`` by the raw monomial ``m``."""
    return {tuple(map(add, t, m)): c for t, c in f.items()}


def vadd(f, g, p, c=1):
    """f + c*g as a new dict."""
    h = dict(f)
    for t, v in g.items():
        w = h.get(t, 0) + c * v
        if p:
            w %= p
        if w:
            h[t] = w
        else:
            h.pop(t, None)
    return h


class Reducer:
    """Index of reducers: leading term, tail items.

    ``by_pos`` reducers act only at their own position; ``glob`` reducers have
    position 0 and act at every position (ring relations of a quotient ring).
    """

    __slots__ = ("by_pos", "glob")

    def __init__(self, elements=(), glob=()):
        self.by_pos = {}
        for lt, f in elements:
            tail = [(t, c) for t, c in f.items() if t != lt]
            self.by_pos.setdefault(lt[0], []).append((lt, tail))
        self.glob = [(lt, [(t, c) for t, c in f.items() if t != lt]) for lt, f in glob]

    def find(self, t):
        for lt, tail in self.by_pos.get(t[0], ()):
            if all(map(le, lt, t)):
                return lt, tail
        for lt, tail in self.glob:
            if all(map(le, lt, t)):
                return lt, tail
        return None

    def __bool__(self):
        return bool(self.by_pos) or bool(self.glob)


def nf(f, red, p, negkey):
    """Full reduction of ``f``; reducers must be monic."""
    if not f or not red:
        return dict(f)
    f = dict(f)
    heap = [(negkey(t), t) for t in f]
    heapify(heap)
    r = {}
    find = red.find
    while heap:
        t = heappop(heap)[1]
        c = f.pop(t, None)
        if c is None:
            continue
        g = find(t)
        if g is None:
            r[t] = c
            continue
        glt, gtail = g
        m = tuple(map(sub, t, glt))
        for s, d in gtail:
            u = tuple(map(add, s, m))
            old = f.get(u)
            if old is None:
                v = -c * d
                if p:
                    v %= p
                f[u] = v
                heappush(heap, (negkey(u), u))
            else:
                v = old - c * d
                if p:
                    v %= p
                if v:
                    f[u] = v
                else:
                    del f[u]
    return r


def divide(f, g, p, negkey):
    """Exact division ``f / g`` of raw polynomials, or None if g does not divide f."""
    glt = lead(g, negkey)
    ginv = inverse(g[glt], p)
    f = dict(f)
    q = {}
    while f:
        t = lead(f, negkey)
        if t[0] != glt[0] or not all(map(le, glt, t)):
            return None
        m = tuple(map(sub, t, glt))
        c = f[t] * ginv
        if p:
            c %= p
        q[m] = c
        f = vadd(f, shift_term(g, m), p, -c)
    return q


def _lcm(a, b):
    return tuple(map(max, a, b))


def _coprime(a, b):
    for x, y in zip(a[1:], b[1:]):
        if x and y:
            return False
    return True


def _divides(a, b):
    return a[0] == b[0] and all(map(le, a, b))


def spoly(f, flt, g, glt, lcm, p):
    s = shift_term(f, tuple(map(sub, lcm, flt)))
    return vadd(s, shift_term(g, tuple(map(sub, lcm, glt))), p, -1)


def buchberger(gens, p, negkey, rank1=False, budget=None):
    """Reduced monic Groebner basis, sorted by decreasing leading term.

    Pairs are selected by the normal strategy (least degree of the lcm, then
    least lcm in the term order, then index). Both Buchberger criteria are
    applied through the Gebauer-Moeller update; the coprime criterion only in
    the ideal case (``rank1``), where it is valid.
    """
    limit = max_pairs() if budget is None else budget
    basis = []  # (lt, poly)
    active = []
    pairs = {}  # (i, j) -> (sortkey, lcm)
    state = {"red": Reducer()}

    def rebuild():
        state["red"] = Reducer([basis[i] for i in active])

    def pair_key(lcm, i, j):
        return (sum(lcm) - lcm[0], tuple(-x for x in negkey(lcm)), i, j)

    def update(h):
        hlt = basis[h][0]
        cands = [g for g in active if basis[g][0][0] == hlt[0]]
        lcms = {g: _lcm(hlt, basis[g][0]) for g in cands}
        C = list(cands)
        D = []
        while C:
            g1 = C.pop(0)
            l1 = lcms[g1]
            if rank1 and _coprime(hlt, basis[g1][0]):
                D.append(g1)
                continue
            if any(all(map(le, lcms[g2], l1)) for g2 in C) or any(all(map(le, lcms[g2], l1)) for g2 in D):
                continue
            D.append(g1)
        for key in list(pairs):
            g1, g2 = key
            l12 = pairs[key][1]
            if _divides(hlt, l12):
                l1h = _lcm(basis[g1][0], hlt) if basis[g1][0][0] == hlt[0] else None
                l2h = _lcm(basis[g2][0], hlt) if basis[g2][0][0] == hlt[0] else None
                if l1h != l12 and l2h != l12:
                    del pairs[key]
        for g in D:
            if rank1 and _coprime(hlt, basis[g][0]):
                continue
            i, j = min(g, h), max(g, h)
            pairs[(i, j)] = (pair_key(lcms[g], i, j), lcms[g])
        active[:] = [g for g in active if not _divides(hlt, basis[g][0])]
        active.append(h)
        rebuild()

    def insert(h):
        h = monic(h, negkey, p)
        basis.append((lead(h, negkey), h))
        update(len(basis) - 1)

    for g in gens:
        if not g:
            continue
        h = nf(g, state["red"], p, negkey)
        if h:
            insert(h)

    processed = 0
    while pairs:
        key = min(pairs, key=lambda k: pairs[k][0])
        _, lcm = pairs.pop(key)
        processed += 1
        if processed > limit:
            raise ResourceExhausted(f"Groebner pair budget of {limit} S-pairs exhausted")
        i, j = key
        (ilt, f), (jlt, g) = basis[i], basis[j]
        s = spoly(f, ilt, g, jlt, lcm, p)
        h = nf(s, state["red"], p, negkey)
        if h:
            insert(h)

    final = sorted((basis[i] for i in active), key=lambda e: negkey(e[0]))
    red = Reducer(final)
    out = []
    for lt, f in final:
        tail = {t: c for t, c in f.items() if t != lt}
        h = nf(tail, red, p, negkey)
        h[lt] = f[lt]
        out.append(h)
    # reductions never touch leading terms, so ``final`` order is preserved
    return out


def is_groebner(basis, p, negkey):
    """Buchberger's criterion: every S-polynomial reduces to zero."""
    elems = [(lead(f, negkey), monic(f, negkey, p)) for f in basis if f]
    red = Reducer(elems)
    for a in range(len(elems)):
        for b in range(a + 1, len(elems)):
            alt, f = elems[a]
            blt, g = elems[b]
            if alt[0] != blt[0]:
                continue
            s = spoly(f, alt, g, blt, _lcm(alt, blt), p)
            if nf(s, red, p, negkey):
                return False
    return True
