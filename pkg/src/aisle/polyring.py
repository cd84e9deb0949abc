"""Exact coefficient fields, monomial orders, polynomial rings and their quotients."""

from dataclasses import dataclass
from functools import cached_property
from operator import add

from gmpy2 import mpq

from . import _engine
from .errors import InvalidInput, ParseError, RingMismatch
from .lexer import TokenStream


# ---------------------------------------------------------------------------
# coefficient fields


def _is_prime(n):
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class Field:
    """The rationals (``characteristic == 0``) or a prime field F_p."""

    characteristic: int = 0

    def __post_init__(self):
        p = self.characteristic
        if p:
            if p >= 2**31:
                raise InvalidInput(f"prime modulus must be below 2^31, got {p}")
            if not _is_prime(p):
                raise InvalidInput(f"modulus {p} is not prime")

    @property
    def is_rational(self):
        return self.characteristic == 0

    def __call__(self, x):
        try:
            return _engine.coerce(x, self.characteristic)
        except ZeroDivisionError as exc:
            raise InvalidInput(str(exc)) from None

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero")
        return _engine.inverse(a, self.characteristic)

    def signed(self, a):
        """Representative used for display: symmetric residues for F_p."""
        p = self.characteristic
        if p and a > p // 2:
            return a - p
        return a

    def fmt(self, a):
        a = self.signed(a)
        if self.characteristic:
            return str(a)
        a = mpq(a)
        if a.denominator == 1:
            return str(a.numerator)
        return f"{a.numerator}/{a.denominator}"

    def __str__(self):
        return "Q" if self.is_rational else f"GF({self.characteristic})"


QQ = Field(0)


def GF(p):
    return Field(p)


# ---------------------------------------------------------------------------
# monomial orders


@dataclass(frozen=True)
class MonomialOrder:
    """``grevlex``, ``lex`` or ``elim`` (grevlex on the first ``block`` variables,
    ties broken by grevlex on the rest)."""

    kind: str = "grevlex"
    block: int = 0

    def __post_init__(self):
        if self.kind not in ("grevlex", "lex", "elim"):
            raise InvalidInput(f"unknown monomial order {self.kind!r}")
        if self.kind == "elim" and self.block < 1:
            raise InvalidInput("elimination order needs a block size >= 1")

    @cached_property
    def key(self):
        """Sort key on exponent tuples; larger key means larger monomial."""
        if self.kind == "lex":
            return tuple
        if self.kind == "grevlex":
            return lambda e: (sum(e),) + tuple(-x for x in e[::-1])
        k = self.block
        return lambda e: ((sum(e[:k]),) + tuple(-x for x in e[k - 1 :: -1])
                          + (sum(e[k:]),) + tuple(-x for x in e[:k - 1 : -1]))

    @cached_property
    def negkey(self):
        """Key on raw terms ``(pos, e...)``: smallest means largest, position first."""
        if self.kind == "lex":
            return lambda t: (t[0],) + tuple(-x for x in t[1:])
        if self.kind == "grevlex":
            return lambda t: (t[0], t[0] - sum(t)) + t[:0:-1]
        k = self.block
        return lambda t: ((t[0], -sum(t[1 : k + 1])) + t[k:0:-1]
                          + (-sum(t[k + 1 :]),) + t[:k:-1])

    def __str__(self):
        return f"elim({self.block})" if self.kind == "elim" else self.kind


GREVLEX = MonomialOrder("grevlex")
LEX = MonomialOrder("lex")


def compare_monomials(m1, m2, order=GREVLEX):
    """-1, 0 or 1 as ``m1`` is smaller than, equal to or larger than ``m2``."""
    if len(m1) != len(m2):
        raise InvalidInput(f"monomials of different lengths {len(m1)} and {len(m2)}")
    if order.kind == "elim" and order.block > len(m1):
        raise InvalidInput("elimination block exceeds the number of variables")
    k1, k2 = order.key(tuple(m1)), order.key(tuple(m2))
    return (k1 > k2) - (k1 < k2)


# ---------------------------------------------------------------------------
# rings


class Ring:
    """k[x_1..x_n]/J with J stored as a reduced Groebner basis in ``order``."""

    def __init__(self, field, variables, order=GREVLEX, relations=()):
        variables = tuple(variables)
        if len(set(variables)) != len(variables):
            dup = next(v for v in variables if variables.count(v) > 1)
            raise InvalidInput(f"duplicate variable name {dup!r}")
        if order.kind == "elim" and order.block > len(variables):
            raise InvalidInput("elimination block exceeds the number of variables")
        self.field = field
        self.variables = variables
        self.order = order
        self.nvars = len(variables)
        self.p = field.characteristic
        self.negkey = order.negkey
        self.ambient = self if not relations else Ring(field, variables, order)
        rel = []
        for r in relations:
            if isinstance(r, str):
                r = parse_polynomial(r, self.ambient)
            if not isinstance(r, Polynomial) or r.ring != self.ambient:
                raise RingMismatch("relations must be polynomials in the ambient ring")
            if r:
                rel.append(_engine.monic(r.raw(), self.negkey, self.p))
        basis = _engine.buchberger(rel, self.p, self.negkey, rank1=True) if rel else []
        self._rel_raw = basis
        self.relations = tuple(Polynomial._from_raw(self.ambient, g) for g in basis)
        self._key = (field, variables, order, tuple(tuple(r.terms.items()) for r in self.relations))
        self._hash = hash(self._key)

    # identity ---------------------------------------------------------------

    def __eq__(self, other):
        return self is other or (isinstance(other, Ring) and self._key == other._key)

    def __hash__(self):
        return self._hash

    @property
    def is_quotient(self):
        return bool(self.relations)

    @property
    def is_unit_ring(self):
        return any(r.is_constant() for r in self.relations)

    def __str__(self):
        s = f"{self.field}[{','.join(self.variables)}]"
        if self.relations:
            s += "/(" + ", ".join(str(r) for r in self.relations) + ")"
        return s

    def __repr__(self):
        return f"Ring({self}, order={self.order})"

    # element construction -----------------------------------------------------

    def zero(self):
        return Polynomial(self, {})

    def one(self):
        return Polynomial(self, {(0,) * self.nvars: 1})

    def const(self, c):
        return Polynomial(self, {(0,) * self.nvars: c})

    def gen(self, name_or_index):
        i = name_or_index if isinstance(name_or_index, int) else self._var_index(name_or_index)
        e = [0] * self.nvars
        e[i] = 1
        return Polynomial(self, {tuple(e): 1})

    def gens(self):
        return [self.gen(i) for i in range(self.nvars)]

    def _var_index(self, name):
        try:
            return self.variables.index(name)
        except ValueError:
            raise InvalidInput(f"unknown variable {name!r} in {self}") from None

    def __call__(self, x):
        if isinstance(x, Polynomial):
            if x.ring == self:
                return x
            if x.ring == self.ambient or x.ring.ambient == self.ambient:
                return Polynomial(self, x.terms)
            raise RingMismatch(f"cannot coerce element of {x.ring} into {self}")
        if isinstance(x, str):
            return parse_polynomial(x, self)
        return self.const(x)

    # raw helpers --------------------------------------------------------------

    def reduce_raw(self, f):
        """Normal form of a raw vector modulo the relations, at every position."""
        if not self._rel_raw or not f:
            return f
        return _engine.nf(f, self.relation_reducer, self.p, self.negkey)

    @cached_property
    def relation_reducer(self):
        return _engine.Reducer((), glob=[(_engine.lead(g, self.negkey), g) for g in self._rel_raw])


def make_ring(field, variables, order=GREVLEX, relations=()):
    if isinstance(order, str):
        order = parse_order(order)
    return Ring(field, variables, order, relations)


def parse_order(text):
    text = text.strip()
    if text in ("grevlex", "lex"):
        return MonomialOrder(text)
    if text.startswith("elim(") and text.endswith(")"):
        return MonomialOrder("elim", int(text[5:-1]))
    raise InvalidInput(f"unknown monomial order {text!r}")


# ---------------------------------------------------------------------------
# polynomials


def _clean(terms, p):
    out = {}
    for e, c in terms.items():
        c = _engine.coerce(c, p)
        if c:
            out[tuple(e)] = c
    return out


class Polynomial:
    """Immutable element of a Ring, always in normal form modulo its relations.

    ``terms`` maps exponent tuples to nonzero coefficients and iterates in
    decreasing term order.
    """

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring, terms, _canonical=False):
        self.ring = ring
        if not _canonical:
            p = ring.p
            try:
                terms = _clean(terms, p)
            except ZeroDivisionError as exc:
                raise InvalidInput(str(exc)) from None
            for e in terms:
                if len(e) != ring.nvars:
                    raise InvalidInput(f"monomial {e} has wrong length for {ring}")
                if any(x < 0 for x in e):
                    raise InvalidInput(f"negative exponent in {e}")
            if ring._rel_raw and terms:
                raw = ring.reduce_raw({(0,) + e: c for e, c in terms.items()})
                terms = {t[1:]: c for t, c in raw.items()}
            key = ring.order.key
            terms = dict(sorted(terms.items(), key=lambda kv: key(kv[0]), reverse=True))
        self.terms = terms
        self._hash = None

    @classmethod
    def _from_raw(cls, ring, raw, pos=0):
        """Polynomial from the given position of a raw vector (already reduced)."""
        key = ring.order.key
        terms = {t[1:]: c for t, c in raw.items() if t[0] == pos}
        return cls(ring, dict(sorted(terms.items(), key=lambda kv: key(kv[0]), reverse=True)), True)

    def raw(self, pos=0):
        return {(pos,) + e: c for e, c in self.terms.items()}

    # predicates ----------------------------------------------------------------

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_value(self):
        """Coefficient of the constant monomial (0 if absent)."""
        return self.terms.get((0,) * self.ring.nvars, self.ring.field(0))

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, mpq)):
            return self == self.ring.const(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, tuple(self.terms.items())))
        return self._hash

    # structure ------------------------------------------------------------------

    def degree(self):
        return max((sum(e) for e in self.terms), default=-1)

    def leading_monomial(self):
        return next(iter(self.terms)) if self.terms else None

    def leading_coefficient(self):
        return next(iter(self.terms.values())) if self.terms else self.ring.field(0)

    def variables_used(self):
        used = set()
        for e in self.terms:
            used.update(i for i, x in enumerate(e) if x)
        return sorted(used)

    def monic(self):
        if not self.terms:
            return self
        return self.scale(self.ring.field.inv(self.leading_coefficient()))

    # arithmetic -----------------------------------------------------------------

    def _coerce_other(self, other):
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise RingMismatch(f"ring mismatch: {self.ring} vs {other.ring}")
            return other
        if isinstance(other, (int, mpq)):
            return self.ring.const(other)
        return None

    def __add__(self, other):
        other = self._coerce_other(other)
        if other is None:
            return NotImplemented
        p = self.ring.p
        t = dict(self.terms)
        for e, c in other.terms.items():
            v = t.get(e, 0) + c
            if p:
                v %= p
            if v:
                t[e] = v
            else:
                t.pop(e, None)
        return Polynomial(self.ring, t)

    __radd__ = __add__

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        other = self._coerce_other(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce_other(other)
        if other is None:
            return NotImplemented
        return other - self

    def scale(self, c):
        c = self.ring.field(c)
        if not c:
            return self.ring.zero()
        p = self.ring.p
        if p:
            return Polynomial(self.ring, {e: v * c % p for e, v in self.terms.items()}, True)
        return Polynomial(self.ring, {e: v * c for e, v in self.terms.items()}, True)

    def __mul__(self, other):
        if isinstance(other, (int, mpq)):
            return self.scale(other)
        other = self._coerce_other(other)
        if other is None:
            return NotImplemented
        p = self.ring.p
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(map(add, e1, e2))
                v = out.get(e, 0) + c1 * c2
                if p:
                    v %= p
                out[e] = v
        return Polynomial(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise InvalidInput("polynomial powers need a nonnegative integer exponent")
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # display --------------------------------------------------------------------

    def __str__(self):
        if not self.terms:
            return "0"
        field = self.ring.field
        names = self.ring.variables
        parts = []
        for e, c in self.terms.items():
            c = field.signed(c)
            neg = c < 0
            a = -c if neg else c
            mono = "*".join(
                names[i] if x == 1 else f"{names[i]}^{x}" for i, x in enumerate(e) if x
            )
            cs = field.fmt(a)
            if not mono:
                body = cs
            elif a == 1:
                body = mono
            else:
                body = f"{cs}*{mono}"
            if not parts:
                parts.append(f"-{body}" if neg else body)
            else:
                parts.append(f"- {body}" if neg else f"+ {body}")
        return " ".join(parts)

    def __repr__(self):
        return f"Polynomial({self})"


def poly_op(op, a, b):
    """``Add``/``Mul`` of two polynomials or ``Scale`` by a field element."""
    op = op.lower()
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "scale":
        if isinstance(b, Polynomial):
            raise InvalidInput("Scale expects a scalar")
        return a.scale(b)
    raise InvalidInput(f"unknown polynomial operation {op!r}")


# ---------------------------------------------------------------------------
# text syntax


def parse_polynomial(text, ring, names=None):
    """Parse ``3*x^2*y - 1/2*y^3`` style text (parentheses allowed)."""
    ts = TokenStream.from_text(text) if isinstance(text, str) else text
    f = parse_expr(ts, ring, names)
    if isinstance(text, str) and not ts.at_end():
        ts.error(f"unexpected {ts.peek()}", expected=["'+'", "'-'", "'*'", "end of input"])
    return f


def parse_expr(ts, ring, names=None):
    sign = 1
    if ts.accept("-"):
        sign = -1
    else:
        ts.accept("+")
    acc = _parse_term(ts, ring, names)
    if sign < 0:
        acc = -acc
    while ts.at("+", "-"):
        op = ts.next().value
        t = _parse_term(ts, ring, names)
        acc = acc + t if op == "+" else acc - t
    return acc


def _parse_term(ts, ring, names):
    acc = _parse_factor(ts, ring, names)
    while ts.accept("*"):
        acc = acc * _parse_factor(ts, ring, names)
    return acc


def _parse_factor(ts, ring, names):
    base = _parse_atom(ts, ring, names)
    if ts.accept("^"):
        tok = ts.expect_kind("num", "exponent")
        return base ** int(tok.value)
    return base


def _parse_atom(ts, ring, names):
    tok = ts.peek()
    if tok.kind == "num":
        ts.next()
        if ts.at("/") and ts.peek(1).kind == "num":
            ts.next()
            den = int(ts.next().value)
            if den == 0:
                ts.error("zero denominator", tok=tok)
            return ring.const(mpq(int(tok.value), den))
        return ring.const(int(tok.value))
    if tok.kind == "ident":
        ts.next()
        if tok.value in ring.variables:
            return ring.gen(tok.value)
        if names is not None and tok.value in names:
            val = names[tok.value]
            if isinstance(val, Polynomial):
                return ring(val)
        raise ParseError(f"unknown variable {tok.value!r}", tok.line, tok.col,
                         expected=[repr(v) for v in ring.variables])
    if ts.accept("("):
        f = parse_expr(ts, ring, names)
        ts.expect(")")
        return f
    ts.error(f"unexpected {tok}", expected=["number", "variable", "'('"])
