"""Resolutions, Hom and tensor complexes, Ext, torsion and depth."""

import math
from dataclasses import dataclass, field

from ..errors import InvalidInput, RingMismatch, Undetermined
from ..groebner import Span, ideal_power, ideal_sum, is_unit_ideal
from .complexes import Complex
from .koszul import koszul_complex
from .matrices import Matrix
from .modules import (
    ModuleMap,
    PresentedModule,
    Presentation,
    annihilator,
    direct_sum,
    minimize_columns,
    power,
    submodule_quotient,
)

INF = math.inf


# ---------------------------------------------------------------------------
# free resolutions


@dataclass
class Resolution:
    complex: Complex
    length: int
    complete: bool
    ranks: list

    def to_dict(self):
        return {"length": self.length, "complete": self.complete, "ranks": self.ranks}


def free_resolution(module, length):
    """F^{-length} -> ... -> F^0 -> M with free F^{-k}.

    ``complete`` is True when the kernel of the last map is zero, so the
    resolution shown is the whole resolution.
    """
    if length < 1:
        raise InvalidInput("resolution length must be at least 1")
    ring = module.ring
    if module.rank == 0:
        return Resolution(Complex(ring, {}), 0, True, [])
    objects = {0: PresentedModule(ring, module.rank)}
    diffs = {}
    ranks = [module.rank]
    current = minimize_columns(ring, module.rank, module.relations.cols)
    rows = module.rank
    k = 0
    complete = False
    while True:
        if not current:
            complete = True
            break
        if k == length:
            break
        k += 1
        mat = Matrix(ring, rows, len(current), current, reduce=False)
        objects[-k] = PresentedModule(ring, len(current))
        diffs[-k] = mat
        ranks.append(len(current))
        syz = Span.of(ring, rows, current, track=True).syzygies()
        rows = len(current)
        current = minimize_columns(ring, rows, syz)
    C = Complex(ring, objects, diffs)
    return Resolution(C, k, complete, ranks)


# ---------------------------------------------------------------------------
# Hom and tensor complexes


def _require_free(F):
    if not F.is_free():
        raise InvalidInput("the first argument must be a complex of free modules")


def hom_complex(F, X):
    """Hom^n = ⊕_p Hom(F^p, X^{p+n}), d(φ) = d_X φ - (-1)^n φ d_F.

    A map F^p -> X^q given by a matrix (r_q x a_p) is stored column-major:
    entry (i, j) sits at offset + j*r_q + i.
    """
    _require_free(F)
    if F.ring != X.ring:
        raise RingMismatch("Hom complex across different rings")
    ring = F.ring
    if F.is_zero_complex() or X.is_zero_complex():
        return Complex(ring, {})
    fdeg = sorted(F.objects)
    lo, hi = X.lo - F.hi, X.hi - F.lo

    def blocks(n):
        out, off = {}, 0
        for p in fdeg:
            q = p + n
            if X.rank(q):
                out[p] = off
                off += F.rank(p) * X.rank(q)
        return out, off

    layout = {n: blocks(n) for n in range(lo - 1, hi + 2)}
    objects = {}
    for n in range(lo, hi + 1):
        mods = [power(X.obj(p + n), F.rank(p)) for p in fdeg if X.rank(p + n)]
        if mods:
            objects[n] = direct_sum(ring, mods)
    diffs = {}
    for n in range(lo, hi):
        src, nsrc = layout[n]
        tgt, ntgt = layout[n + 1]
        if not nsrc or not ntgt:
            continue
        sign2 = 1 if n % 2 else -1  # -(-1)^n
        cols = [{} for _ in range(nsrc)]
        for p, off in src.items():
            q = p + n
            rq, rq1 = X.rank(q), X.rank(q + 1)
            ap = F.rank(p)
            dX = X.d(q)
            t1 = tgt.get(p)
            dF = F.d(p - 1)
            t2 = tgt.get(p - 1)
            for j in range(ap):
                for i in range(rq):
                    col = cols[off + j * rq + i]
                    if t1 is not None and rq1:
                        for t, c in dX.cols[i].items():
                            col[(t1 + j * rq1 + t[0],) + t[1:]] = c
                    if t2 is not None:
                        for jp in range(F.rank(p - 1)):
                            for t, c in dF.cols[jp].items():
                                if t[0] == j:
                                    u = (t2 + jp * rq + i,) + t[1:]
                                    v = col.get(u, 0) + sign2 * c
                                    if ring.p:
                                        v %= ring.p
                                    if v:
                                        col[u] = v
                                    else:
                                        col.pop(u, None)
        diffs[n] = Matrix(ring, ntgt, nsrc, cols)
    return Complex(ring, objects, diffs)


def tensor_complex(X, F):
    """(X⊗F)^n = ⊕_{p+q=n} X^p ⊗ F^q, d(x⊗f) = d_X x ⊗ f + (-1)^p x ⊗ d_F f.

    x_i ⊗ f_j sits at offset + j*r_p + i.
    """
    _require_free(F)
    if F.ring != X.ring:
        raise RingMismatch("tensor complex across different rings")
    ring = F.ring
    if F.is_zero_complex() or X.is_zero_complex():
        return Complex(ring, {})
    xdeg = sorted(X.objects)
    lo, hi = X.lo + F.lo, X.hi + F.hi

    def blocks(n):
        out, off = {}, 0
        for p in xdeg:
            q = n - p
            if F.rank(q):
                out[p] = off
                off += X.rank(p) * F.rank(q)
        return out, off

    layout = {n: blocks(n) for n in range(lo - 1, hi + 2)}
    objects = {}
    for n in range(lo, hi + 1):
        mods = [power(X.obj(p), F.rank(n - p)) for p in xdeg if F.rank(n - p)]
        if mods:
            objects[n] = direct_sum(ring, mods)
    diffs = {}
    for n in range(lo, hi):
        src, nsrc = layout[n]
        tgt, ntgt = layout[n + 1]
        if not nsrc or not ntgt:
            continue
        cols = [{} for _ in range(nsrc)]
        for p, off in src.items():
            q = n - p
            rp, rp1 = X.rank(p), X.rank(p + 1)
            dX = X.d(p)
            dF = F.d(q)
            t1 = tgt.get(p + 1)
            t2 = tgt.get(p)
            sign = -1 if p % 2 else 1
            for j in range(F.rank(q)):
                for i in range(rp):
                    col = cols[off + j * rp + i]
                    if t1 is not None and rp1:
                        for t, c in dX.cols[i].items():
                            col[(t1 + j * rp1 + t[0],) + t[1:]] = c
                    if t2 is not None:
                        for t, c in dF.cols[j].items():
                            u = (t2 + t[0] * rp + i,) + t[1:]
                            v = col.get(u, 0) + sign * c
                            if ring.p:
                                v %= ring.p
                            if v:
                                col[u] = v
                            else:
                                col.pop(u, None)
        diffs[n] = Matrix(ring, ntgt, nsrc, cols)
    return Complex(ring, objects, diffs)


# ---------------------------------------------------------------------------
# Ext


@dataclass
class ExtResult:
    modules: dict
    window: tuple
    length: int
    complete: bool

    def nonzero_degrees(self):
        return [n for n, m in sorted(self.modules.items()) if not m.is_zero()]


def resolution_length_for(window, X):
    a, b = window
    return max(1, b - a + X.amplitude + 1, b - X.lo + 1)


def ext_modules(module, X, window):
    """Ext^n(M, X) = H^n Hom(F, X) for n in the window, F a free resolution of M
    long enough that every reported degree is exact."""
    a, b = window
    if a > b:
        raise InvalidInput(f"empty window {a}..{b}")
    if module.ring != X.ring:
        raise RingMismatch("Ext across different rings")
    L = resolution_length_for(window, X)
    res = free_resolution(module, L)
    H = hom_complex(res.complex, X)
    mods = {n: H.cohomology(n) for n in range(a, b + 1)}
    return ExtResult(mods, (a, b), res.length, res.complete)


# ---------------------------------------------------------------------------
# torsion


@dataclass
class TorsionResult:
    presentation: Presentation
    inclusion: ModuleMap
    exponent: int

    @property
    def module(self):
        return self.presentation.module


def torsion_submodule(ideal, module):
    """Γ_I(M) = ∪_t (0 :_M I^t) and the least t with (0 :_M I^t) = (0 :_M I^{t+1})."""
    if ideal.ring != module.ring:
        raise RingMismatch("torsion across different rings")
    ring = module.ring
    prev = Presentation(ring, module.rank, [], module.relations.cols)
    t = 0
    while True:
        cur = submodule_quotient(module, ideal_power(ideal, t + 1))
        old = Span.of(ring, module.rank, list(prev.gens.cols) + list(module.relations.cols))
        if all(old.contains(g) for g in cur.gens.cols):
            inc = ModuleMap(prev.module, module, prev.gens, check=False)
            return TorsionResult(prev, inc, t)
        prev = cur
        t += 1


# ---------------------------------------------------------------------------
# depth


@dataclass
class DepthResult:
    value: object  # int or math.inf
    witness: object  # degree of the first nonzero group, or None
    window: tuple
    method: str
    details: dict = field(default_factory=dict)

    def to_dict(self):
        v = self.value
        return {
            "value": "inf" if v == INF else v,
            "witness": self.witness,
            "window": list(self.window),
            "method": self.method,
            **self.details,
        }


def depth_via_koszul(ideal, X):
    """inf{n : H^n Hom(K(I), X) != 0}; the scan [lo, hi + c] is exhaustive."""
    if ideal.ring != X.ring:
        raise RingMismatch("depth across different rings")
    K = koszul_complex(ideal)
    c = K.length
    window = (X.lo, X.hi + c)
    if X.is_zero_complex():
        return DepthResult(INF, None, window, "koszul")
    H = hom_complex(K, X)
    for n in range(window[0], window[1] + 1):
        if not H.cohomology(n).is_zero():
            return DepthResult(n, n, window, "koszul")
    return DepthResult(INF, None, window, "koszul")


def _support_misses(ideal, X):
    """V(I) ∩ Supp H^*(X) = ∅, i.e. I + Ann H^n(X) is the unit ideal for every n."""
    for n in X.degrees():
        h = X.cohomology(n)
        if h.is_zero():
            continue
        if not is_unit_ideal(ideal_sum(ideal, annihilator(h))):
            return False
    return True


def inf_rhom(ideal, X):
    """inf{n : Ext^n(R/I, X) != 0}.

    Over a polynomial ring in v variables Ext^n(R/I, X) vanishes above
    hi(X) + v, so the scan [lo, hi + v] is exhaustive. Over a quotient ring the
    scan runs to hi + max(v, c); an empty scan is only reported as +inf when
    V(I) misses the support of the cohomology, and is undetermined otherwise.
    """
    if ideal.ring != X.ring:
        raise RingMismatch("depth across different rings")
    ring = ideal.ring
    c = len(ideal.nonzero_gens)
    if X.is_zero_complex():
        return DepthResult(INF, None, (X.lo, X.hi), "ext")
    reach = ring.nvars if not ring.is_quotient else max(ring.nvars, c)
    window = (X.lo, X.hi + reach)
    M = PresentedModule.cyclic(ideal)
    L = resolution_length_for(window, X)
    res = free_resolution(M, L)
    H = hom_complex(res.complex, X)
    details = {"resolution_length": res.length, "resolution_complete": res.complete}
    for n in range(window[0], window[1] + 1):
        if not H.cohomology(n).is_zero():
            return DepthResult(n, n, window, "ext", details)
    if not ring.is_quotient or (res.complete and res.length <= reach) or _support_misses(ideal, X):
        return DepthResult(INF, None, window, "ext", details)
    raise Undetermined(
        f"no nonzero Ext^n(R/I, X) for n in {window[0]}..{window[1]} over a quotient ring; "
        "undetermined beyond window"
    )
