"""Degree-bounded linear algebra independent of the Groebner engine.

Everything here works on dense coordinates over the monomials of degree at most
D (Macaulay matrices) and plain Gaussian elimination, so it can be used to
cross-check the Buchberger based results.
"""

from itertools import combinations_with_replacement

from gmpy2 import mpq


def monomials_upto(nvars, D):
    out = []
    for d in range(D + 1):
        for combo in combinations_with_replacement(range(nvars), d):
            e = [0] * nvars
            for i in combo:
                e[i] += 1
            out.append(tuple(e))
    return out


class Echelon:
    """Row echelon form of a growing set of sparse vectors over Q or F_p."""

    def __init__(self, p=0):
        self.p = p
        self.rows = {}  # pivot column -> row (dict col -> value) with pivot value 1

    def _norm(self, v):
        return v % self.p if self.p else v

    def _inv(self, v):
        return pow(v, self.p - 2, self.p) if self.p else 1 / mpq(v)

    def reduce(self, vec):
        v = {k: self._norm(c) for k, c in vec.items() if self._norm(c)}
        while v:
            piv = min(v)
            row = self.rows.get(piv)
            if row is None:
                # reduce the remaining columns lazily: find any other pivot
                later = [k for k in v if k in self.rows]
                if not later:
                    return v
                piv = min(later)
                row = self.rows[piv]
            c = v[piv]
            for k, r in row.items():
                w = self._norm(v.get(k, 0) - c * r)
                if w:
                    v[k] = w
                else:
                    v.pop(k, None)
        return v

    def add(self, vec):
        v = self.reduce(vec)
        if not v:
            return False
        piv = min(k for k in v if k not in self.rows)
        inv = self._inv(v[piv])
        row = {k: self._norm(c * inv) for k, c in v.items()}
        # keep rows fully reduced with respect to the new pivot
        for q, r in self.rows.items():
            c = r.get(piv)
            if c:
                for k, x in row.items():
                    w = self._norm(r.get(k, 0) - c * x)
                    if w:
                        r[k] = w
                    else:
                        r.pop(k, None)
        self.rows[piv] = row
        return True

    def contains(self, vec):
        return not self.reduce(vec)

    @property
    def rank(self):
        return len(self.rows)


def _coords(terms, index):
    return {index[e]: c for e, c in terms.items()}


def _shift(terms, m):
    return {tuple(a + b for a, b in zip(e, m)): c for e, c in terms.items()}


def _deg(terms):
    return max((sum(e) for e in terms), default=-1)


def truncated_span(gens, nvars, D, p=0):
    """Echelon basis of span{m * g : deg(m * g) <= D} (gens are term dicts)."""
    mons = monomials_upto(nvars, D)
    index = {e: i for i, e in enumerate(mons)}
    ech = Echelon(p)
    for g in gens:
        if not g:
            continue
        dg = _deg(g)
        if dg > D:
            continue
        for m in monomials_upto(nvars, D - dg):
            ech.add(_coords(_shift(g, m), index))
    return ech, index


def macaulay_member(f, gens, nvars, D, p=0):
    """Whether f has a representation sum q_i g_i with deg(q_i g_i) <= D."""
    if not f:
        return True
    if _deg(f) > D:
        return False
    ech, index = truncated_span(gens, nvars, D, p)
    return ech.contains(_coords(f, index))


def ideal_member_oracle(f, ideal, D=6):
    """Degree-bounded membership of a Polynomial in an Ideal (relations included)."""
    ring = ideal.ring
    gens = [g.terms for g in ideal.nonzero_gens] + [r.terms for r in ring.relations]
    return macaulay_member(f.terms, gens, ring.nvars, D, ring.p)


def truncated_intersection_dim(gens_a, gens_b, nvars, D, p=0):
    """dim (I_{<=D} ∩ J_{<=D}) via dim A + dim B - dim (A + B)."""
    a, index = truncated_span(gens_a, nvars, D, p)
    b, _ = truncated_span(gens_b, nvars, D, p)
    s = Echelon(p)
    for r in list(a.rows.values()) + list(b.rows.values()):
        s.add(r)
    return a.rank + b.rank - s.rank


def truncated_dim(gens, nvars, D, p=0):
    return truncated_span(gens, nvars, D, p)[0].rank


def kernel_dim_bound(columns, nrows, nvars, D, p=0):
    """Dimension of the degree <= D part of the kernel of a polynomial matrix
    (columns are lists of term dicts, one per row), by brute linear algebra."""
    mons_in = monomials_upto(nvars, D)
    maxdeg = max((_deg(e) for col in columns for e in col), default=0)
    mons_out = monomials_upto(nvars, D + max(maxdeg, 0))
    index = {e: i for i, e in enumerate(mons_out)}
    ech = Echelon(p)
    count = 0
    for j, col in enumerate(columns):
        for m in mons_in:
            v = {}
            for r, entry in enumerate(col):
                for e, c in _shift(entry, m).items():
                    v[r * len(mons_out) + index[e]] = c
            count += 1
            ech.add(v)
    return count - ech.rank
