"""Matrices over a ring, stored column by column as raw module vectors."""

from operator import add

from ..errors import InvalidInput, RingMismatch
from ..groebner import Span, freeze
from ..polyring import Polynomial


def _accumulate(out, vec, mono, c, p, row_offset=0):
    for t, v in vec.items():
        u = (t[0] + row_offset,) + tuple(map(add, t[1:], mono))
        w = out.get(u, 0) + c * v
        if p:
            w %= p
        if w:
            out[u] = w
        else:
            out.pop(u, None)


class Matrix:
    """``nrows x ncols`` matrix; column j is a raw vector keyed by (row, e...)."""

    __slots__ = ("ring", "nrows", "ncols", "cols", "_key")

    def __init__(self, ring, nrows, ncols, cols=None, reduce=True):
        self.ring = ring
        self.nrows = nrows
        self.ncols = ncols
        if cols is None:
            cols = [{} for _ in range(ncols)]
        cols = list(cols)
        if len(cols) != ncols:
            raise InvalidInput(f"expected {ncols} columns, got {len(cols)}")
        if reduce:
            cols = [ring.reduce_raw(dict(c)) for c in cols]
        for c in cols:
            for t in c:
                if not 0 <= t[0] < nrows:
                    raise InvalidInput(f"row index {t[0]} out of range for {nrows} rows")
        self.cols = tuple(cols)
        self._key = None

    # construction ---------------------------------------------------------------

    @classmethod
    def from_rows(cls, ring, rows, ncols=None):
        rows = [list(r) for r in rows]
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise InvalidInput("ragged matrix rows")
        cols = [{} for _ in range(ncols)]
        for i, row in enumerate(rows):
            for j, entry in enumerate(row):
                f = ring(entry)
                for e, c in f.terms.items():
                    cols[j][(i,) + e] = c
        return cls(ring, len(rows), ncols, cols, reduce=False)

    @classmethod
    def zero(cls, ring, nrows, ncols):
        return cls(ring, nrows, ncols, reduce=False)

    @classmethod
    def identity(cls, ring, n):
        one = ring.field(1)
        z = (0,) * ring.nvars
        return cls(ring, n, n, [{(i,) + z: one} for i in range(n)], reduce=False)

    @classmethod
    def from_columns(cls, ring, nrows, cols):
        return cls(ring, nrows, len(cols), cols)

    # access -------------------------------------------------------------------

    def entry(self, i, j):
        return Polynomial._from_raw(self.ring, self.cols[j], i)

    def rows(self):
        return [[self.entry(i, j) for j in range(self.ncols)] for i in range(self.nrows)]

    def column(self, j):
        return self.cols[j]

    @property
    def key(self):
        if self._key is None:
            self._key = (self.nrows, self.ncols, tuple(freeze(c) for c in self.cols))
        return self._key

    def __eq__(self, other):
        return isinstance(other, Matrix) and self.ring == other.ring and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def is_zero(self):
        return not any(self.cols)

    def __str__(self):
        return "[" + ", ".join("[" + ", ".join(str(e) for e in row) + "]" for row in self.rows()) + "]"

    def __repr__(self):
        return f"Matrix({self.nrows}x{self.ncols}, {self})"

    # arithmetic -----------------------------------------------------------------

    def _check(self, other):
        if self.ring != other.ring:
            raise RingMismatch(f"matrices over {self.ring} and {other.ring}")

    def __matmul__(self, other):
        self._check(other)
        if self.ncols != other.nrows:
            raise InvalidInput(f"cannot multiply {self.nrows}x{self.ncols} by {other.nrows}x{other.ncols}")
        p = self.ring.p
        out = []
        for col in other.cols:
            acc = {}
            for t, c in col.items():
                src = self.cols[t[0]]
                if src:
                    _accumulate(acc, src, t[1:], c, p)
            out.append(acc)
        return Matrix(self.ring, self.nrows, other.ncols, out)

    def apply(self, vec):
        """Image of a raw vector (length ncols) under the matrix."""
        p = self.ring.p
        acc = {}
        for t, c in vec.items():
            src = self.cols[t[0]]
            if src:
                _accumulate(acc, src, t[1:], c, p)
        return self.ring.reduce_raw(acc)

    def __add__(self, other):
        self._check(other)
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise InvalidInput("matrix shapes differ")
        p = self.ring.p
        z = (0,) * (self.ring.nvars)
        out = []
        for a, b in zip(self.cols, other.cols):
            acc = dict(a)
            _accumulate(acc, b, z, 1, p)
            out.append(acc)
        return Matrix(self.ring, self.nrows, self.ncols, out, reduce=False)

    def scale(self, c):
        p = self.ring.p
        c = self.ring.field(c)
        if not c:
            return Matrix.zero(self.ring, self.nrows, self.ncols)
        if p:
            cols = [{t: v * c % p for t, v in col.items()} for col in self.cols]
        else:
            cols = [{t: v * c for t, v in col.items()} for col in self.cols]
        return Matrix(self.ring, self.nrows, self.ncols, cols, reduce=False)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def transpose(self):
        cols = [{} for _ in range(self.nrows)]
        for j, col in enumerate(self.cols):
            for t, c in col.items():
                cols[t[0]][(j,) + t[1:]] = c
        return Matrix(self.ring, self.ncols, self.nrows, cols, reduce=False)

    def select_columns(self, idx):
        return Matrix(self.ring, self.nrows, len(idx), [self.cols[j] for j in idx], reduce=False)

    def select_rows(self, idx):
        where = {i: k for k, i in enumerate(idx)}
        cols = [{(where[t[0]],) + t[1:]: c for t, c in col.items() if t[0] in where} for col in self.cols]
        return Matrix(self.ring, len(idx), self.ncols, cols, reduce=False)

    def span(self, track=False):
        return Span.of(self.ring, self.nrows, self.cols, track)


def hstack(ring, nrows, mats):
    cols = []
    for m in mats:
        if m.nrows != nrows:
            raise InvalidInput("hstack: row counts differ")
        cols.extend(m.cols)
    return Matrix(ring, nrows, len(cols), cols, reduce=False)


def block_diagonal(ring, mats):
    rows = sum(m.nrows for m in mats)
    cols = []
    off = 0
    for m in mats:
        for c in m.cols:
            cols.append({(t[0] + off,) + t[1:]: v for t, v in c.items()})
        off += m.nrows
    return Matrix(ring, rows, len(cols), cols, reduce=False)


def embed(m, nrows, row_offset, ncols, col_offset, into=None):
    """Place ``m`` as a block inside an ``nrows x ncols`` column list."""
    cols = into if into is not None else [{} for _ in range(ncols)]
    p = m.ring.p
    z = (0,) * m.ring.nvars
    for j, c in enumerate(m.cols):
        _accumulate(cols[col_offset + j], c, z, 1, p, row_offset)
    return cols


def shift_rows(vec, offset):
    return {(t[0] + offset,) + t[1:]: c for t, c in vec.items()}
