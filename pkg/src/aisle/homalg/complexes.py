"""Bounded cochain complexes of finitely presented modules.

Cohomological indexing: the differential d^n goes from degree n to n+1.
Shift convention: X[k]^n = X^{n+k} with differential (-1)^k d^{n+k}.
"""

import threading

from ..errors import InvalidInput, InvariantViolation, RingMismatch
from .matrices import Matrix, embed
from .modules import ModuleMap, Presentation, PresentedModule, kernel_generators


def _fail(origin, message):
    if origin == "input":
        raise InvalidInput(message)
    raise InvariantViolation(message)


class Complex:
    """Finite family of modules and differentials; outside the stored degrees everything is 0."""

    def __init__(self, ring, objects, diffs=None, origin="derived", check=True):
        self.ring = ring
        self.objects = {}
        for n, m in sorted(objects.items()):
            if m.ring != ring:
                raise RingMismatch(f"object in degree {n} lives in another ring")
            if m.rank:
                self.objects[n] = m
        self.diffs = {}
        for n, d in sorted((diffs or {}).items()):
            src, tgt = self.obj(n), self.obj(n + 1)
            if d.ring != ring:
                raise RingMismatch(f"differential d^{n} lives in another ring")
            if (d.nrows, d.ncols) != (tgt.rank, src.rank):
                _fail(origin, f"differential d^{n} is {d.nrows}x{d.ncols}, expected {tgt.rank}x{src.rank}")
            if src.rank and tgt.rank and not d.is_zero():
                self.diffs[n] = d
        if self.objects:
            self.lo = min(self.objects)
            self.hi = max(self.objects)
        else:
            self.lo = self.hi = 0
        self._cache = {}
        self._lock = threading.Lock()
        if check:
            self.validate(origin)

    # access -------------------------------------------------------------------

    def obj(self, n):
        m = self.objects.get(n)
        return m if m is not None else PresentedModule(self.ring, 0)

    def rank(self, n):
        m = self.objects.get(n)
        return m.rank if m is not None else 0

    def d(self, n):
        m = self.diffs.get(n)
        if m is not None:
            return m
        return Matrix.zero(self.ring, self.rank(n + 1), self.rank(n))

    def degrees(self):
        return range(self.lo, self.hi + 1)

    def is_zero_complex(self):
        return not self.objects

    @property
    def amplitude(self):
        return self.hi - self.lo if self.objects else 0

    def is_free(self):
        return all(m.is_free for m in self.objects.values())

    @property
    def key(self):
        return (
            self.ring,
            tuple((n, m.rank, m.relations.key) for n, m in self.objects.items()),
            tuple((n, d.key) for n, d in self.diffs.items()),
        )

    def __eq__(self, other):
        return isinstance(other, Complex) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        parts = [f"{n}: {self.objects[n]}" for n in self.objects]
        return "Complex{" + "; ".join(parts) + "}"

    # checks -------------------------------------------------------------------

    def validate(self, origin="derived"):
        for n, d in self.diffs.items():
            if not ModuleMap(self.obj(n), self.obj(n + 1), d, check=False).is_well_defined():
                _fail(origin, f"differential d^{n} is not well defined on the presentations")
        for n, d in self.diffs.items():
            nxt = self.diffs.get(n + 1)
            if nxt is None:
                continue
            comp = nxt @ d
            target = self.obj(n + 2)
            if not all(target.contains(c) for c in comp.cols):
                _fail(origin, f"d^{n + 1} d^{n} != 0")
        return True

    # cohomology -----------------------------------------------------------------

    def cohomology_presentation(self, n):
        with self._lock:
            hit = self._cache.get(("H", n))
        if hit is not None:
            return hit
        ring = self.ring
        x = self.obj(n)
        if x.rank == 0:
            pres = Presentation(ring, 0, [], [])
        else:
            gens = kernel_generators(self.d(n), self.obj(n + 1))
            denoms = list(self.d(n - 1).cols) + list(x.relations.cols)
            pres = Presentation(ring, x.rank, gens, denoms)
        with self._lock:
            self._cache[("H", n)] = pres
        return pres

    def cohomology(self, n):
        return self.cohomology_presentation(n).module

    def is_acyclic(self):
        return all(self.cohomology(n).is_zero() for n in self.degrees())

    def cohomology_range(self):
        """(lowest, highest) degrees of nonzero cohomology, or None when acyclic."""
        nz = [n for n in self.degrees() if not self.cohomology(n).is_zero()]
        return (nz[0], nz[-1]) if nz else None


def stalk(module, n=0):
    return Complex(module.ring, {n: module}, origin="input")


def zero_complex(ring):
    return Complex(ring, {})


def from_modules(ring, objects, diffs):
    """Complex from user data: construction failures are input errors."""
    return Complex(ring, objects, diffs, origin="input")


def identity_matrix_map(X):
    return {n: Matrix.identity(X.ring, X.rank(n)) for n in X.objects}


class ComplexMap:
    """Degreewise maps f^n: X^n -> Y^n commuting with the differentials."""

    def __init__(self, source, target, maps, origin="derived", check=True):
        if source.ring != target.ring:
            raise RingMismatch("complex map across different rings")
        self.source = source
        self.target = target
        self.ring = source.ring
        self.maps = {}
        for n, m in maps.items():
            if source.rank(n) and target.rank(n):
                if (m.nrows, m.ncols) != (target.rank(n), source.rank(n)):
                    _fail(origin, f"component f^{n} has the wrong shape")
                self.maps[n] = m
        if check:
            self.validate(origin)

    def f(self, n):
        m = self.maps.get(n)
        if m is not None:
            return m
        return Matrix.zero(self.ring, self.target.rank(n), self.source.rank(n))

    def validate(self, origin="derived"):
        X, Y = self.source, self.target
        for n, m in self.maps.items():
            if not ModuleMap(X.obj(n), Y.obj(n), m, check=False).is_well_defined():
                _fail(origin, f"component f^{n} is not well defined")
        lo = min(X.lo, Y.lo) - 1
        hi = max(X.hi, Y.hi) + 1
        for n in range(lo, hi + 1):
            a = Y.d(n) @ self.f(n)
            b = self.f(n + 1) @ X.d(n)
            diff = a - b
            tgt = Y.obj(n + 1)
            if not all(tgt.contains(c) for c in diff.cols):
                _fail(origin, f"square at degree {n} does not commute")
        return True

    def induced(self, n):
        """H^n(f): H^n(X) -> H^n(Y)."""
        return self.source.cohomology_presentation(n).induced(
            self.target.cohomology_presentation(n), self.f(n)
        )

    def compose(self, other):
        """self ∘ other."""
        degs = set(self.maps) | set(other.maps)
        return ComplexMap(other.source, self.target, {n: self.f(n) @ other.f(n) for n in degs})


def identity_map(X):
    return ComplexMap(X, X, identity_matrix_map(X), check=False)


# ---------------------------------------------------------------------------
# constructions


def shift(X, k):
    sign = -1 if k % 2 else 1
    objects = {n - k: m for n, m in X.objects.items()}
    diffs = {n - k: (d if sign > 0 else -d) for n, d in X.diffs.items()}
    return Complex(X.ring, objects, diffs)


def direct_sum(ring, complexes):
    from .matrices import block_diagonal
    from .modules import direct_sum as module_sum

    degs = sorted(set().union(*[set(c.objects) for c in complexes])) if complexes else []
    objects = {n: module_sum(ring, [c.obj(n) for c in complexes]) for n in degs}
    diffs = {n: block_diagonal(ring, [c.d(n) for c in complexes]) for n in degs}
    return Complex(ring, objects, diffs)


def cone(f):
    """cone^n = X^{n+1} ⊕ Y^n with d = [[-d_X, 0], [f, d_Y]].

    Returns the cone and the structural maps Y -> cone and cone -> X[1].
    """
    from .modules import direct_sum as module_sum

    X, Y = f.source, f.target
    ring = f.ring
    degs = set(n - 1 for n in X.objects) | set(Y.objects)
    objects = {n: module_sum(ring, [X.obj(n + 1), Y.obj(n)]) for n in degs}
    diffs = {}
    for n in degs | {n - 1 for n in degs}:
        rx1, ry = X.rank(n + 1), Y.rank(n)
        rx2, ry1 = X.rank(n + 2), Y.rank(n + 1)
        rows, ncols = rx2 + ry1, rx1 + ry
        cols = [{} for _ in range(ncols)]
        embed(-X.d(n + 1), rows, 0, ncols, 0, cols)
        embed(f.f(n + 1), rows, rx2, ncols, 0, cols)
        embed(Y.d(n), rows, rx2, ncols, rx1, cols)
        diffs[n] = Matrix(ring, rows, ncols, cols, reduce=False)
    C = Complex(ring, objects, diffs)
    inc = {}
    proj = {}
    for n in degs:
        rx1, ry = X.rank(n + 1), Y.rank(n)
        inc[n] = Matrix(ring, rx1 + ry, ry, embed(Matrix.identity(ring, ry), rx1 + ry, rx1, ry, 0), reduce=False)
        proj[n] = Matrix(ring, rx1, rx1 + ry, embed(Matrix.identity(ring, rx1), rx1, 0, rx1 + ry, 0), reduce=False)
    Xs = shift(X, 1)
    return C, ComplexMap(Y, C, inc), ComplexMap(C, Xs, proj)


def truncate(X, kind, n):
    """Brutal (``brutal_ge``, ``brutal_le``) or soft (``soft_le``, ``soft_gt``) truncation."""
    kind = kind.lower().replace("-", "_")
    if kind in ("brutal_ge", "brutalge", "sigma_ge"):
        objs = {k: m for k, m in X.objects.items() if k >= n}
        diffs = {k: d for k, d in X.diffs.items() if k >= n}
        return Complex(X.ring, objs, diffs)
    if kind in ("brutal_le", "brutalle", "sigma_le"):
        objs = {k: m for k, m in X.objects.items() if k <= n}
        diffs = {k: d for k, d in X.diffs.items() if k + 1 <= n}
        return Complex(X.ring, objs, diffs)
    if kind in ("soft_le", "softle", "tau_le"):
        return soft_truncations(X, n)[0]
    if kind in ("soft_gt", "softgt", "tau_gt"):
        return soft_truncations(X, n)[2]
    raise InvalidInput(f"unknown truncation kind {kind!r}")


def soft_truncations(X, n):
    """(τ^{≤n}X, τ^{≤n}X -> X, τ^{>n}X, X -> τ^{>n}X)."""
    ring = X.ring
    # τ^{≤n}: degree n becomes ker d^n
    x = X.obj(n)
    objs = {k: m for k, m in X.objects.items() if k < n}
    diffs = {k: d for k, d in X.diffs.items() if k < n - 1}
    le_maps = {k: Matrix.identity(ring, X.rank(k)) for k in objs}
    if x.rank:
        z = Presentation(ring, x.rank, kernel_generators(X.d(n), X.obj(n + 1)), x.relations.cols)
        objs[n] = z.module
        if X.rank(n - 1):
            diffs[n - 1] = z.coords_matrix(X.d(n - 1))
        le_maps[n] = z.gens
    le = Complex(ring, objs, diffs)
    le_map = ComplexMap(le, X, le_maps)
    # τ^{>n}: degree n+1 becomes coker d^n
    objs = {k: m for k, m in X.objects.items() if k > n + 1}
    diffs = {k: d for k, d in X.diffs.items() if k > n}
    y = X.obj(n + 1)
    if y.rank:
        rel = Matrix(ring, y.rank, y.relations.ncols + X.d(n).ncols,
                     list(y.relations.cols) + list(X.d(n).cols), reduce=False)
        objs[n + 1] = PresentedModule(ring, y.rank, rel)
    gt = Complex(ring, objs, diffs)
    gt_map = ComplexMap(X, gt, {k: Matrix.identity(ring, X.rank(k)) for k in gt.objects})
    return le, le_map, gt, gt_map
