"""Finitely presented modules, maps between them, and subquotient presentations."""

from ..errors import InvalidInput, InvariantViolation, RingMismatch
from ..groebner import Ideal, Span, ideal_intersect
from ..polyring import Polynomial
from .matrices import Matrix, _accumulate, hstack


class PresentedModule:
    """coker(relations: R^m -> R^rank)."""

    def __init__(self, ring, rank, relations=None):
        if relations is None:
            relations = Matrix.zero(ring, rank, 0)
        if relations.ring != ring:
            raise RingMismatch("relation matrix lives in another ring")
        if relations.nrows != rank:
            raise InvalidInput(f"presentation has {relations.nrows} rows, expected {rank}")
        keep = [j for j, c in enumerate(relations.cols) if c]
        if len(keep) != relations.ncols:
            relations = relations.select_columns(keep)
        self.ring = ring
        self.rank = rank
        self.relations = relations

    @classmethod
    def free(cls, ring, rank):
        return cls(ring, rank)

    @classmethod
    def cyclic(cls, ideal):
        """R/I."""
        ring = ideal.ring
        return cls(ring, 1, Matrix.from_rows(ring, [list(ideal.nonzero_gens)], len(ideal.nonzero_gens)))

    @classmethod
    def zero_module(cls, ring):
        return cls(ring, 0)

    @property
    def span(self):
        return self.relations.span()

    @property
    def is_free(self):
        return self.relations.ncols == 0

    def is_zero(self):
        return self.rank == 0 or self.span.is_everything()

    def contains(self, vec):
        """Whether the raw vector ``vec`` of R^rank is zero in the module."""
        return self.span.contains(vec)

    def canonical_relations(self):
        sp = self.span
        return Matrix(self.ring, self.rank, len(sp.canonical), sp.canonical, reduce=False)

    def __eq__(self, other):
        return (isinstance(other, PresentedModule) and self.ring == other.ring
                and self.rank == other.rank and self.relations == other.relations)

    def __hash__(self):
        return hash((self.ring, self.rank, self.relations))

    def __str__(self):
        if self.rank == 0:
            return "0"
        if self.is_free:
            return f"R^{self.rank}"
        return f"coker {self.relations}"

    def __repr__(self):
        return f"PresentedModule({self})"


def direct_sum(ring, modules):
    from .matrices import block_diagonal

    rank = sum(m.rank for m in modules)
    return PresentedModule(ring, rank, block_diagonal(ring, [m.relations for m in modules]))


def power(module, k):
    return direct_sum(module.ring, [module] * k)


class ModuleMap:
    """Module homomorphism given on generators; well-definedness checked."""

    def __init__(self, source, target, matrix, check=True):
        if not (source.ring == target.ring == matrix.ring):
            raise RingMismatch("module map across different rings")
        if (matrix.nrows, matrix.ncols) != (target.rank, source.rank):
            raise InvalidInput(
                f"map matrix is {matrix.nrows}x{matrix.ncols}, expected {target.rank}x{source.rank}"
            )
        self.source = source
        self.target = target
        self.matrix = matrix
        if check and not self.is_well_defined():
            raise InvalidInput("matrix does not carry source relations into target relations")

    @property
    def ring(self):
        return self.source.ring

    def is_well_defined(self):
        if self.source.relations.ncols == 0:
            return True
        image = self.matrix @ self.source.relations
        sp = self.target.span
        return all(sp.contains(c) for c in image.cols)

    def is_zero(self):
        sp = self.target.span
        return all(sp.contains(c) for c in self.matrix.cols)

    def compose(self, other):
        """self ∘ other."""
        return ModuleMap(other.source, self.target, self.matrix @ other.matrix, check=False)

    def is_surjective(self):
        sp = Span.of(self.ring, self.target.rank, list(self.matrix.cols) + list(self.target.relations.cols))
        z = (0,) * self.ring.nvars
        return all(sp.contains({(i,) + z: self.ring.field(1)}) for i in range(self.target.rank))

    def is_injective(self):
        return present_subquotient("kernel", self).module.is_zero()

    def is_isomorphism(self):
        return self.is_surjective() and self.is_injective()

    def equals(self, other):
        diff = self.matrix - other.matrix
        sp = self.target.span
        return all(sp.contains(c) for c in diff.cols)


def syzygies(m):
    """Generators of the kernel of the map of free modules given by ``m``."""
    if m.ncols == 0:
        return Matrix.zero(m.ring, 0, 0)
    sp = Span.of(m.ring, m.nrows, m.cols, track=True)
    syz = sp.syzygies()
    return Matrix(m.ring, m.ncols, len(syz), syz, reduce=False)


def minimize_columns(ring, nrows, cols):
    """Drop zero, repeated and redundant generators (greedy, last first)."""
    seen = set()
    out = []
    for c in cols:
        key = tuple(sorted(c.items()))
        if c and key not in seen:
            seen.add(key)
            out.append(c)
    j = len(out) - 1
    while j >= 0 and len(out) > 1:
        others = out[:j] + out[j + 1:]
        if Span.of(ring, nrows, others).contains(out[j]):
            out = others
        j -= 1
    return out


# ---------------------------------------------------------------------------
# subquotients


def _const_entry(col, i, nvars):
    """Constant value of row ``i`` of ``col`` if that entry is a nonzero constant."""
    z = (i,) + (0,) * nvars
    c = col.get(z)
    if c is None:
        return None
    for t in col:
        if t[0] == i and t != z:
            return None
    return c


def _row_poly(col, i):
    return [(t[1:], c) for t, c in col.items() if t[0] == i]


def _eliminate(col, i, piv, inv_u, p):
    """col - (col_i / u) * piv, which clears row i of col."""
    coeff = _row_poly(col, i)
    if not coeff:
        return col
    out = dict(col)
    for e, c in coeff:
        _accumulate(out, piv, e, -c * inv_u, p)
    return out


def _drop_row(col, i):
    return {((t[0] - 1) if t[0] > i else t[0],) + t[1:]: c for t, c in col.items()}


def prune(ring, k, rels, transform):
    """Remove generators killed by unit-entry relations.

    ``rels`` are raw columns on k generators, ``transform`` raw columns giving
    original generators in terms of the current ones. Returns the surviving
    original indices, the new relations and the new transform.
    """
    p = ring.p
    n = ring.nvars
    alive = list(range(k))
    rels = [ring.reduce_raw(dict(c)) for c in rels if c]
    transform = [dict(c) for c in transform]
    changed = True
    while changed:
        changed = False
        found = None
        for j, col in enumerate(rels):
            rows = sorted({t[0] for t in col})
            for i in rows:
                u = _const_entry(col, i, n)
                if u is not None:
                    found = (j, i, u)
                    break
            if found:
                break
        if found is None:
            if rels:
                # a Groebner basis can expose hidden unit entries
                sp = Span.of(ring, len(alive), rels)
                canon = [dict(c) for c in sp.canonical]
                if any(_const_entry(c, i, n) is not None for c in canon for i in {t[0] for t in c}):
                    rels = canon
                    changed = True
            continue
        j, i, u = found
        piv = rels[j]
        inv_u = ring.field.inv(u)
        rels = [ring.reduce_raw(_drop_row(_eliminate(c, i, piv, inv_u, p), i))
                for jj, c in enumerate(rels) if jj != j]
        rels = [c for c in rels if c]
        transform = [ring.reduce_raw(_drop_row(_eliminate(c, i, piv, inv_u, p), i)) for c in transform]
        del alive[i]
        changed = True
    return alive, rels, transform


class Presentation:
    """A subquotient (span(gens) + span(denoms)) / span(denoms) of a free module R^ambient,
    presented on a pruned subset of ``gens``."""

    def __init__(self, ring, ambient, gens, denoms):
        self.ring = ring
        self.ambient = ambient
        self._gens = [dict(g) for g in gens]
        self._denoms = [dict(d) for d in denoms]
        k = len(self._gens)
        self._k = k
        if k:
            sp = Span.of(ring, ambient, self._gens + self._denoms, track=True)
            rels = [{t: c for t, c in s.items() if t[0] < k} for s in sp.syzygies()]
        else:
            rels = []
        z = (0,) * ring.nvars
        ident = [{(i,) + z: ring.field(1)} for i in range(k)]
        alive, rels, transform = prune(ring, k, rels, ident)
        self.alive = alive
        self.module = PresentedModule(ring, len(alive), Matrix(ring, len(alive), len(rels), rels, reduce=False))
        self.transform = Matrix(ring, len(alive), k, transform, reduce=False)
        self.gens = Matrix(ring, ambient, len(alive), [self._gens[i] for i in alive], reduce=False)

    def coords(self, vec):
        """Coordinates in the pruned generators of an ambient element, or None."""
        if not self._k:
            if not vec or Span.of(self.ring, self.ambient, self._denoms).contains(vec):
                return {}
            return None
        sp = Span.of(self.ring, self.ambient, self._gens + self._denoms, track=True)
        a = sp.lift(vec)
        if a is None:
            return None
        a = {t: c for t, c in a.items() if t[0] < self._k}
        return self.transform.apply(a)

    def coords_matrix(self, mat):
        cols = []
        for c in mat.cols:
            v = self.coords(c)
            if v is None:
                raise InvariantViolation("element does not lie in the subquotient")
            cols.append(v)
        return Matrix(self.ring, self.module.rank, len(cols), cols, reduce=False)

    def induced(self, other, ambient_map):
        """Map self.module -> other.module induced by an ambient matrix."""
        img = ambient_map @ self.gens
        return ModuleMap(self.module, other.module, other.coords_matrix(img), check=False)


def kernel_generators(mat, target):
    """Generators (as ambient columns) of ker(R^ncols -> target) given by ``mat``."""
    if mat.ncols == 0:
        return []
    k = mat.ncols
    full = hstack(mat.ring, mat.nrows, [mat, target.relations])
    sp = Span.of(mat.ring, full.nrows, full.cols, track=True)
    gens = [{t: c for t, c in s.items() if t[0] < k} for s in sp.syzygies()]
    gens = [g for g in gens if g]
    return minimize_columns(mat.ring, k, gens)


def present_subquotient(kind, f):
    """Kernel, image or cokernel of ``f`` as a Presentation (with ambient structure maps)."""
    kind = kind.lower()
    ring = f.ring
    if kind == "kernel":
        gens = kernel_generators(f.matrix, f.target)
        return Presentation(ring, f.source.rank, gens, f.source.relations.cols)
    if kind == "image":
        return Presentation(ring, f.target.rank, f.matrix.cols, f.target.relations.cols)
    if kind == "cokernel":
        z = (0,) * ring.nvars
        ident = [{(i,) + z: ring.field(1)} for i in range(f.target.rank)]
        return Presentation(ring, f.target.rank, ident, list(f.target.relations.cols) + list(f.matrix.cols))
    raise InvalidInput(f"unknown subquotient kind {kind!r}")


def annihilator(module):
    """Ann(M) as the intersection of the column quotients (N : e_i)."""
    ring = module.ring
    if module.rank == 0:
        return Ideal(ring, [ring.one()])
    if module.rank == 1:
        gens = [Polynomial._from_raw(ring, c, 0) for c in module.relations.cols]
        return Ideal(ring, gens)
    z = (0,) * ring.nvars
    result = None
    for i in range(module.rank):
        cols = [{(i,) + z: ring.field(1)}] + list(module.relations.cols)
        sp = Span.of(ring, module.rank, cols, track=True)
        q = Ideal(ring, [Polynomial._from_raw(ring, s, 0) for s in sp.syzygies()])
        result = q if result is None else ideal_intersect(result, q)
    return result


def submodule_quotient(module, ideal):
    """(0 :_M I) as a Presentation inside R^rank."""
    ring = module.ring
    gens = list(ideal.nonzero_gens)
    if not gens:
        z = (0,) * ring.nvars
        return Presentation(ring, module.rank,
                            [{(i,) + z: ring.field(1)} for i in range(module.rank)],
                            module.relations.cols)
    # v with g*v in N for each g: kernel of R^r -> M^{#gens}, v -> (g v)
    r = module.rank
    cols = [{} for _ in range(r)]
    for k, g in enumerate(gens):
        for i in range(r):
            for e, c in g.terms.items():
                cols[i][(k * r + i,) + e] = c
    mat = Matrix(ring, r * len(gens), r, cols)
    kg = kernel_generators(mat, power(module, len(gens)))
    return Presentation(ring, r, kg, module.relations.cols)
