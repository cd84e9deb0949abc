"""The session language: parser, evaluated declarations and a canonical printer.

The grammar is documented in docs/dsl.md.
"""

from dataclasses import dataclass, field

from ..errors import AisleError, InvalidInput, ParseError
from ..groebner import Ideal
from ..homalg import Matrix, PresentedModule, from_modules, koszul_complex, shift, stalk
from ..lexer import TokenStream
from ..polyring import GF, QQ, MonomialOrder, Ring, parse_expr
from ..spectrum import ClosedSet, PrimeIdeal, SpcSet, make_filtration, verify_prime
from ..tstruct import CoaisleEvidence

KEYWORDS = {
    "ring", "ideal", "poly", "prime", "module", "matrix", "complex", "koszul",
    "spcset", "filtration", "evidence",
}


@dataclass
class Declaration:
    kind: str
    name: str
    value: object
    line: int
    col: int
    extra: dict = field(default_factory=dict)


class Session:
    """Ordered declarations sharing a single ring."""

    def __init__(self, text=""):
        self.source = text
        self.ring = None
        self.ring_name = None
        self.decls = {}

    def add(self, decl):
        self.decls[decl.name] = decl

    def get(self, name, kind=None):
        d = self.decls.get(name)
        if d is None:
            raise InvalidInput(f"unknown name {name!r}")
        if kind is not None:
            kinds = (kind,) if isinstance(kind, str) else kind
            if d.kind not in kinds:
                raise InvalidInput(f"{name!r} is a {d.kind}, expected {' or '.join(kinds)}")
        return d.value

    def kind_of(self, name):
        d = self.decls.get(name)
        return d.kind if d else None

    def names(self, kind=None):
        return [n for n, d in self.decls.items() if kind is None or d.kind == kind]

    def __len__(self):
        return len(self.decls)


# ---------------------------------------------------------------------------
# parser


class _Parser:
    def __init__(self, text):
        self.ts = TokenStream.from_text(text)
        self.s = Session(text)

    # helpers ----------------------------------------------------------------

    def error(self, msg, tok=None, expected=()):
        self.ts.error(msg, expected=expected, tok=tok)

    def name(self):
        tok = self.ts.expect_kind("ident", "name")
        return tok

    def ring(self):
        return self.s.ring

    def new_name(self, tok):
        n = tok.value
        if n in KEYWORDS:
            self.error(f"{n!r} is a reserved word", tok)
        if n in self.s.decls or n == self.s.ring_name:
            self.error(f"name {n!r} is already declared", tok)
        if self.s.ring is not None and n in self.s.ring.variables:
            self.error(f"name {n!r} clashes with a ring variable", tok)
        return n

    def lookup(self, tok, kinds):
        d = self.s.decls.get(tok.value)
        if d is None:
            self.error(f"undeclared name {tok.value!r}", tok)
        kinds = (kinds,) if isinstance(kinds, str) else kinds
        if d.kind not in kinds:
            self.error(f"{tok.value!r} is a {d.kind}, expected {' or '.join(kinds)}", tok)
        return d.value

    def names_for_polys(self):
        return {n: d.value for n, d in self.s.decls.items() if d.kind == "poly"}

    def poly(self):
        return parse_expr(self.ts, self.ring(), self.names_for_polys())

    def polylist(self, close=")"):
        out = []
        if self.ts.at(close):
            return out
        out.append(self.poly())
        while self.ts.accept(","):
            out.append(self.poly())
        return out

    def integer(self):
        return self.ts.expect_int()

    # declarations -----------------------------------------------------------

    def session(self):
        first = True
        while not self.ts.at_end():
            tok = self.ts.peek()
            if tok.kind != "ident" or tok.value not in KEYWORDS:
                self.error(f"unexpected {tok}", expected=sorted(repr(k) for k in KEYWORDS))
            if first and tok.value != "ring":
                self.error("no ring declared", tok)
            if not first and tok.value == "ring":
                self.error("only one ring per session", tok)
            first = False
            getattr(self, "decl_" + tok.value)()
        return self.s

    def _finish(self, kind, name, value, tok, **extra):
        self.ts.expect(";")
        self.s.add(Declaration(kind, name, value, tok.line, tok.col, extra))

    def decl_ring(self):
        kw = self.ts.next()
        tok = self.name()
        name = tok.value
        if name in KEYWORDS:
            self.error(f"{name!r} is a reserved word", tok)
        self.ts.expect("=")
        ftok = self.ts.expect("Q", "QQ", "GF")
        if ftok.value == "GF":
            self.ts.expect("(")
            ptok = self.ts.peek()
            p = self.integer()
            self.ts.expect(")")
            try:
                fld = GF(p)
            except AisleError as exc:
                self.error(str(exc), ptok)
        else:
            fld = QQ
        self.ts.expect("[")
        variables = []
        if not self.ts.at("]"):
            variables.append(self.name())
            while self.ts.accept(","):
                variables.append(self.name())
        self.ts.expect("]")
        names = [v.value for v in variables]
        for v in variables:
            if v.value in KEYWORDS or names.count(v.value) > 1:
                self.error(f"duplicate or reserved variable name {v.value!r}", v)
        if name in names:
            self.error(f"ring name {name!r} clashes with a variable", tok)
        ambient_order = MonomialOrder("grevlex")
        relations = []
        order_tok = None
        if self.ts.at("/"):
            self.ts.next()
            self.ts.expect("(")
            # parse relations after the order is known; collect token span
            start = self.ts.i
            depth = 1
            while depth:
                t = self.ts.next()
                if t.kind == "eof":
                    self.error("unterminated relation list", t, expected=["')'"])
                if t.value == "(":
                    depth += 1
                elif t.value == ")":
                    depth -= 1
            rel_span = (start, self.ts.i - 1)
        else:
            rel_span = None
        if self.ts.accept("order"):
            order_tok = self.ts.peek()
            otok = self.ts.expect("grevlex", "lex", "elim")
            if otok.value == "elim":
                self.ts.expect("(")
                k = self.integer()
                self.ts.expect(")")
                try:
                    ambient_order = MonomialOrder("elim", k)
                except AisleError as exc:
                    self.error(str(exc), order_tok)
            else:
                ambient_order = MonomialOrder(otok.value)
        try:
            ambient = Ring(fld, names, ambient_order)
        except AisleError as exc:
            self.error(str(exc), order_tok or tok)
        if rel_span is not None:
            save = self.ts.i
            self.ts.i = rel_span[0]
            relations = []
            if not self.ts.at(")"):
                relations.append(parse_expr(self.ts, ambient))
                while self.ts.accept(","):
                    relations.append(parse_expr(self.ts, ambient))
            if self.ts.i != rel_span[1]:
                self.error(f"unexpected {self.ts.peek()}", expected=["','", "')'"])
            self.ts.i = save
        ring = Ring(fld, names, ambient_order, relations) if relations else ambient
        self.s.ring = ring
        self.s.ring_name = name
        self._finish("ring", name, ring, kw)

    def ideal_expr(self):
        tok = self.ts.peek()
        if tok.kind == "ident" and tok.value in self.s.decls:
            d = self.s.decls[tok.value]
            if d.kind in ("ideal", "prime"):
                self.ts.next()
                return d.value if d.kind == "ideal" else d.value.ideal
        if tok.kind == "ident":
            self.ts.next()
            self.lookup(tok, ("ideal", "prime"))
        self.ts.expect("(")
        gens = self.polylist()
        self.ts.expect(")")
        return Ideal(self.ring(), gens)

    def decl_ideal(self):
        kw = self.ts.next()
        tok = self.name()
        name = self.new_name(tok)
        self.ts.expect("=")
        self._finish("ideal", name, self.ideal_expr(), kw)

    def decl_poly(self):
        kw = self.ts.next()
        tok = self.name()
        name = self.new_name(tok)
        self.ts.expect("=")
        self._finish("poly", name, self.poly(), kw)

    def decl_prime(self):
        kw = self.ts.next()
        tok = self.name()
        name = self.new_name(tok)
        self.ts.expect("=")
        itok = self.ts.peek()
        ideal = self.ideal_expr()
        mode = "auto"
        if self.ts.at("assert", "verify"):
            mode = self.ts.next().value
        try:
            if mode == "assert":
                status = "asserted"
            else:
                status = verify_prime(ideal)
                if status == "unknown":
                    if mode == "verify":
                        self.error(f"could not verify that {ideal} is prime (use 'assert')", itok)
                    status = "asserted"
            p = PrimeIdeal(ideal, status, name)
        except ParseError:
            raise
        except AisleError as exc:
            self.error(str(exc), itok)
        self._finish("prime", name, p, kw, mode=mode)

    def matrix_literal(self):
        tok = self.ts.peek()
        if self.ts.accept("zero"):
            self.ts.expect("(")
            r = self.integer()
            self.ts.expect(",")
            c = self.integer()
            self.ts.expect(")")
            if r < 0 or c < 0:
                self.error("matrix dimensions must be nonnegative", tok)
            return Matrix.zero(self.ring(), r, c)
        self.ts.expect("[")
        rows = []
        if not self.ts.at("]"):
            self.ts.expect("[")
            rows.append(self.polylist("]"))
            self.ts.expect("]")
            while self.ts.accept(","):
                self.ts.expect("[")
                rows.append(self.polylist("]"))
                self.ts.expect("]")
        self.ts.expect("]")
        widths = {len(r) for r in rows}
        if len(widths) > 1:
            self.error("ragged matrix rows", tok)
        return Matrix.from_rows(self.ring(), rows, widths.pop() if widths else 0)

    def matrix_ref(self):
        tok = self.ts.peek()
        if tok.kind == "ident" and tok.value != "zero":
            self.ts.next()
            return self.lookup(tok, "matrix")
        return self.matrix_literal()

    def decl_matrix(self):
        kw = self.ts.next()
        tok = self.name()
        name = self.new_name(tok)
        self.ts.expect("=")
        self._finish("matrix", name, self.matrix_literal(), kw)

    def module_expr(self):
        tok = self.ts.peek()
        ring = self.ring()
        if self.ts.accept("coker"):
            m = self.matrix_ref()
            return PresentedModule(ring, m.nrows, m)
        if self.ts.accept("free"):
            k = self.integer()
            if k < 0:
                self.error("free rank must be nonnegative", tok)
            return PresentedModule.free(ring, k)
        if tok.kind == "num" and tok.value == "0":
            self.ts.next()
            return PresentedModule.zero_module(ring)
        if tok.kind == "ident" and tok.value == self.s.ring_name:
            self.ts.next()
            if self.ts.accept("/"):
                return PresentedModule.cyclic(self.ideal_expr())
            return PresentedModule.free(ring, 1)
        if tok.kind == "ident":
            self.ts.next()
            return self.lookup(tok, "module")
        self.error(f"unexpected {tok}", expected=["'coker'", "'free'", "'0'", repr(self.s.ring_name), "module name"])

    def decl_module(self):
        kw = self.ts.next()
        tok = self.name()
        name = self.new_name(tok)
        self.ts.expect("=")
        self._finish("module", name, self.module_expr(), kw)

    def complex_expr(self):
        tok = self.ts.peek()
        ring = self.ring()
        if self.ts.accept("stalk"):
            self.ts.expect("(")
            m = self.module_expr()
            self.ts.expect(",")
            n = self.integer()
            self.ts.expect(")")
            return stalk(m, n)
        if self.ts.accept("shift"):
            self.ts.expect("(")
            X = self.complex_expr()
            self.ts.expect(",")
            k = self.integer()
            self.ts.expect(")")
            return shift(X, k)
        if tok.kind == "ident" and tok.value not in ("stalk", "shift"):
            self.ts.next()
            return self.lookup(tok, ("complex", "koszul"))
        self.ts.expect("{")
        objects, diffs = {}, {}
        if not self.ts.at("}"):
            self._chain(objects, diffs)
            while self.ts.accept(","):
                self._chain(objects, diffs)
        self.ts.expect("}")
        try:
            return from_modules(ring, objects, diffs)
        except ParseError:
            raise
        except AisleError as exc:
            self.error(str(exc), tok)

    def _chain(self, objects, diffs):
        def entry():
            t = self.ts.peek()
            n = self.integer()
            self.ts.expect(":")
            if n in objects:
                self.error(f"degree {n} given twice", t)
            objects[n] = self.module_expr()
            return n

        n = entry()
        while self.ts.at("-"):
            self.ts.next()
            self.ts.expect("[")
            d = self.matrix_ref()
            self.ts.expect("]")
            self.ts.expect("->")
            t = self.ts.peek()
            m = entry()
            if m != n + 1:
                self.error(f"differential must go from degree {n} to {n + 1}, not {m}", t)
            diffs[n] = d
            n = m

    def decl_complex(self):
        kw = self.ts.next()
        tok = self.name()
        name = self.new_name(tok)
        self.ts.expect("=")
        self._finish("complex", name, self.complex_expr(), kw)

    def decl_koszul(self):
        kw = self.ts.next()
        tok = self.name()
        name = self.new_name(tok)
        self.ts.expect("=")
        self.ts.expect("K")
        self.ts.expect("(")
        t = self.ts.peek()
        if t.kind == "ident" and self.s.kind_of(t.value) in ("ideal", "prime") and self.ts.peek(1).value == ")":
            self.ts.next()
            d = self.s.decls[t.value]
            gens = list((d.value if d.kind == "ideal" else d.value.ideal).nonzero_gens)
        else:
            gens = self.polylist()
        self.ts.expect(")")
        self._finish("koszul", name, koszul_complex(gens, self.ring()), kw)

    def closed_term(self):
        tok = self.ts.peek()
        if self.ts.accept("V"):
            self.ts.expect("(")
            t = self.ts.peek()
            if t.kind == "ident" and self.s.kind_of(t.value) in ("ideal", "prime") and self.ts.peek(1).value == ")":
                self.ts.next()
                d = self.s.decls[t.value]
                ideal = d.value if d.kind == "ideal" else d.value.ideal
            else:
                ideal = Ideal(self.ring(), self.polylist())
            self.ts.expect(")")
            return [ClosedSet(ideal)]
        if self.ts.accept("empty"):
            return []
        if tok.kind == "ident":
            self.ts.next()
            return list(self.lookup(tok, "spcset").components)
        self.error(f"unexpected {tok}", expected=["'V'", "'empty'", "spcset name"])

    def spc_expr(self):
        comps = self.closed_term()
        while self.ts.accept("+"):
            comps += self.closed_term()
        return SpcSet(self.ring(), comps)

    def decl_spcset(self):
        kw = self.ts.next()
        tok = self.name()
        name = self.new_name(tok)
        self.ts.expect("=")
        self._finish("spcset", name, self.spc_expr(), kw)

    def decl_filtration(self):
        kw = self.ts.next()
        tok = self.name()
        name = self.new_name(tok)
        self.ts.expect("=")
        btok = self.ts.expect("{")
        below = above = None
        steps = {}
        while not self.ts.at("}"):
            t = self.ts.peek()
            if self.ts.accept("below"):
                if below is not None:
                    self.error("'below' given twice", t)
                self.ts.expect(":")
                below = self.spc_expr()
            elif self.ts.accept("above"):
                if above is not None:
                    self.error("'above' given twice", t)
                self.ts.expect(":")
                above = self.spc_expr()
            else:
                if t.kind not in ("num",) and not (t.value in ("-", "+")):
                    self.error(f"unexpected {t}", expected=["'below'", "'above'", "integer", "'}'"])
                n = self.integer()
                if n in steps:
                    self.error(f"step {n} given twice", t)
                self.ts.expect(":")
                steps[n] = self.spc_expr()
            self.ts.expect(";")
        self.ts.expect("}")
        if not steps:
            self.error("filtration needs at least one numbered step", btok)
        lo, hi = min(steps), max(steps)
        ring = self.ring()
        for n in range(lo, hi + 1):
            if n not in steps:
                self.error(f"filtration step {n} is missing (steps must be consecutive)", btok)
        if below is None:
            below = steps[lo]
        if above is None:
            above = steps[hi]
        try:
            phi = make_filtration(lo, hi, steps, below, above, ring)
        except ParseError:
            raise
        except AisleError as exc:
            self.error(str(exc), btok)
        self._finish("filtration", name, phi, kw)

    def decl_evidence(self):
        kw = self.ts.next()
        tok = self.name()
        name = self.new_name(tok)
        self.ts.expect("=")
        btok = self.ts.expect("{")
        primes = None
        index = {}
        edges, assertions = [], []
        while not self.ts.at("}"):
            t = self.ts.expect("primes", "edges", "in", "out")
            self.ts.expect(":")
            if t.value == "primes":
                if primes is not None:
                    self.error("'primes' given twice", t)
                primes = []
                while True:
                    pt = self.name()
                    p = self.lookup(pt, "prime")
                    if pt.value in index:
                        self.error(f"prime {pt.value!r} listed twice", pt)
                    index[pt.value] = len(primes)
                    primes.append(p)
                    if not self.ts.accept(","):
                        break
            elif primes is None:
                self.error("'primes' must come first", t)
            elif t.value == "edges":
                while True:
                    a = self.name()
                    self.ts.expect("<", "<=")
                    b = self.name()
                    for x in (a, b):
                        if x.value not in index:
                            self.error(f"{x.value!r} is not a declared evidence prime", x)
                    edges.append((index[a.value], index[b.value]))
                    if not self.ts.accept(","):
                        break
            else:
                flag = t.value == "in"
                while True:
                    self.ts.expect("(")
                    a = self.name()
                    if a.value not in index:
                        self.error(f"{a.value!r} is not a declared evidence prime", a)
                    self.ts.expect(",")
                    n = self.integer()
                    self.ts.expect(")")
                    assertions.append((index[a.value], n, flag))
                    if not self.ts.accept(","):
                        break
            self.ts.expect(";")
        self.ts.expect("}")
        if primes is None:
            self.error("evidence needs a 'primes' entry", btok)
        try:
            ev = CoaisleEvidence(primes, edges, assertions)
        except ParseError:
            raise
        except AisleError as exc:
            self.error(str(exc), btok)
        names = {i: n for n, i in index.items()}
        self._finish("evidence", name, ev, kw, prime_names=names)


def parse_session(text):
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"input is not UTF-8: {exc}") from None
    return _Parser(text).session()


def parse_in_session(session, text, what):
    """Parse a stand-alone polynomial, ideal, ... against a session's ring and names."""
    p = _Parser(text)
    p.s = session
    if session.ring is None:
        raise InvalidInput("no ring declared")
    fn = {"poly": p.poly, "ideal": p.ideal_expr, "spcset": p.spc_expr, "module": p.module_expr,
          "complex": p.complex_expr, "matrix": p.matrix_ref}[what]
    value = fn()
    if not p.ts.at_end():
        p.error(f"unexpected {p.ts.peek()}", expected=["end of input"])
    return value


# ---------------------------------------------------------------------------
# printer


def _fmt_ring(ring, name):
    fld = "Q" if ring.field.is_rational else f"GF({ring.field.characteristic})"
    s = f"ring {name} = {fld}[{', '.join(ring.variables)}]"
    if ring.relations:
        s += " / (" + ", ".join(str(r) for r in ring.relations) + ")"
    return s + f" order {ring.order};"


def fmt_ideal(I):
    return "(" + ", ".join(str(g) for g in I.gens) + ")"


def fmt_matrix(m):
    if m.nrows == 0 or m.ncols == 0:
        return f"zero({m.nrows}, {m.ncols})"
    return "[" + ", ".join("[" + ", ".join(str(e) for e in row) + "]" for row in m.rows()) + "]"


def fmt_module(M):
    if M.rank == 0:
        return "0"
    if M.is_free:
        return f"free {M.rank}"
    return f"coker {fmt_matrix(M.relations)}"


def fmt_complex(X):
    chains = []
    cur = []
    prev = None
    for n in sorted(X.objects):
        piece = f"{n}: {fmt_module(X.objects[n])}"
        if prev is not None and n == prev + 1 and (prev in X.diffs):
            cur.append(f" -[{fmt_matrix(X.diffs[prev])}]-> " + piece)
        else:
            if cur:
                chains.append("".join(cur))
            cur = [piece]
        prev = n
    if cur:
        chains.append("".join(cur))
    return "{ " + ", ".join(chains) + " }" if chains else "{ }"


def fmt_spc(S):
    if not S.components:
        return "V(1)"
    return " + ".join("V" + fmt_ideal(c.defining) for c in S.components)


def fmt_filtration(phi):
    parts = [f"below: {fmt_spc(phi.below_lo)};"]
    parts += [f"{n}: {fmt_spc(phi.steps[n])};" for n in range(phi.lo, phi.hi + 1)]
    parts.append(f"above: {fmt_spc(phi.above_hi)};")
    return "{ " + " ".join(parts) + " }"


def print_session(session):
    lines = []
    for name, d in session.decls.items():
        v = d.value
        if d.kind == "ring":
            lines.append(_fmt_ring(v, name))
        elif d.kind == "ideal":
            lines.append(f"ideal {name} = {fmt_ideal(v)};")
        elif d.kind == "poly":
            lines.append(f"poly {name} = {v};")
        elif d.kind == "prime":
            mode = "verify" if v.is_verified else "assert"
            lines.append(f"prime {name} = {fmt_ideal(v.ideal)} {mode};")
        elif d.kind == "matrix":
            lines.append(f"matrix {name} = {fmt_matrix(v)};")
        elif d.kind == "module":
            lines.append(f"module {name} = {fmt_module(v)};")
        elif d.kind == "complex":
            lines.append(f"complex {name} = {fmt_complex(v)};")
        elif d.kind == "koszul":
            lines.append(f"koszul {name} = K({', '.join(str(g) for g in v.generators)});")
        elif d.kind == "spcset":
            lines.append(f"spcset {name} = {fmt_spc(v)};")
        elif d.kind == "filtration":
            lines.append(f"filtration {name} = {fmt_filtration(v)};")
        elif d.kind == "evidence":
            pn = d.extra["prime_names"]
            body = [f"primes: {', '.join(pn[i] for i in range(len(v.primes)))};"]
            if v.edges:
                body.append("edges: " + ", ".join(f"{pn[i]} < {pn[j]}" for i, j in v.edges) + ";")
            ins = [(i, n) for i, n, f in v.assertions if f]
            outs = [(i, n) for i, n, f in v.assertions if not f]
            if ins:
                body.append("in: " + ", ".join(f"({pn[i]}, {n})" for i, n in ins) + ";")
            if outs:
                body.append("out: " + ", ".join(f"({pn[i]}, {n})" for i, n in outs) + ";")
            lines.append(f"evidence {name} = {{ {' '.join(body)} }};")
    return "\n".join(lines) + "\n"
