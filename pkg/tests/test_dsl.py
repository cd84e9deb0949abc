import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from aisle.cli import randgen
from aisle.cli.dsl import fmt_complex, parse_in_session, parse_session, print_session
from aisle.errors import InvalidInput, ParseError

FULL = """
ring R = Q[x, y] order grevlex;
poly f = x^2 - 3/2*x*y + 7;
ideal I = (x*y, f);
prime p = (x, y);
prime c = (x^2 - y^3) assert;
matrix A = [[x, y]];
module M = coker A;
module N = R/(x);
complex X = { -1: free 2 -[[[x, y]]]-> 0: free 1 };
complex S = shift(stalk(N, 0), 2);
koszul K = K(x, y);
spcset U = V(x) + V(y);
filtration phi = { below: V(0); 0: U; 1: V(x, y); above: V(1); };
evidence E = { primes: c, p; edges: c < p; in: (p, 1); out: (c, 0); };
"""


def test_smoke_parse():
    s = parse_session("ring R = Q[x,y] order grevlex; ideal I = (x*y);")
    assert len(s) == 2 and s.kind_of("I") == "ideal"


def test_no_ring_declared():
    with pytest.raises(ParseError) as exc:
        parse_session("ideal I = (x);")
    e = exc.value
    assert e.message == "no ring declared" and (e.line, e.col) == (1, 1)


def test_filtration_example():
    s = parse_session("ring R = Q[x, y]; filtration phi = { below: V(0); 0: V(x); above: V(1); };")
    phi = s.get("phi", "filtration")
    assert phi.lo == phi.hi == 0


def test_full_session():
    s = parse_session(FULL)
    assert s.names() == ["R", "f", "I", "p", "c", "A", "M", "N", "X", "S", "K", "U", "phi", "E"]
    assert sorted(s.get("S").objects) == [-2]
    assert s.get("K").rank(-1) == 2
    assert s.get("c").verified == "asserted"


def test_round_trip():
    s = parse_session(FULL)
    text = print_session(s)
    again = print_session(parse_session(text))
    assert again == text


def test_quotient_ring_and_finite_field():
    s = parse_session("ring S = GF(7)[x] / (x^2) ; poly g = 8*x^3 + x;")
    assert str(s.get("g")) == "x"


@pytest.mark.parametrize("text, message", [
    ("ring R = Q[x]; ring S = Q[y];", "only one ring"),
    ("ring R = Q[x]; ideal I = (x); ideal I = (x^2);", "I"),
    ("ring R = Q[x]; ideal I = (J);", "J"),
    ("ring R = Q[x]; ideal I = (x", "expected"),
    ("ring R = Q[x]; poly f = x ^ ;", "line 1"),
    ("ring R = Q[x]; matrix A = [[x], [x, x]];", "ragged"),
    ("ring R = Q[x]; complex X = { 0: R -[[[x]]]-> 2: R };", "degree 0 to 1"),
    ("ring R = Q[x]; filtration phi = { 0: V(x); 2: V(x); };", "missing"),
    ("ring R = Q[x]; prime p = (1);", "unit"),
    ("ring R = Q[x]; ideal I = (y);", "y"),
    ("ring R = GF(6)[x];", "prime"),
])
def test_errors_carry_position(text, message):
    with pytest.raises(ParseError) as exc:
        parse_session(text)
    assert message in str(exc.value)
    assert exc.value.line == 1 and exc.value.col >= 1


def test_multiline_position():
    with pytest.raises(ParseError) as exc:
        parse_session("ring R = Q[x];\nideal I = (x);\nideal J = (z);\n")
    assert exc.value.line == 3


def test_utf8_required():
    with pytest.raises(ParseError, match="UTF-8"):
        parse_session(b"ring R = Q[x]; \xff")


def test_parse_in_session():
    s = parse_session("ring R = Q[x, y]; ideal I = (x);")
    assert parse_in_session(s, "I", "ideal") is s.get("I")
    assert len(parse_in_session(s, "(x*y, y)", "ideal").gens) == 2
    assert parse_in_session(s, "R/(x, y)", "module").rank == 1
    with pytest.raises(ParseError):
        parse_in_session(s, "x +", "poly")
    with pytest.raises(ParseError):
        parse_in_session(s, "x y", "poly")
    with pytest.raises(InvalidInput):
        s.get("nope")


@given(st.integers(0, 10_000))
def test_polynomial_print_round_trip(seed):
    rng = random.Random(seed)
    name = rng.choice(["Q[x,y]", "GF7[x,y,z]"])
    R = randgen.ring_by_name(name)
    decl = {"Q[x,y]": "ring R = Q[x, y];", "GF7[x,y,z]": "ring R = GF(7)[x, y, z];"}[name]
    s = parse_session(decl)
    f = randgen.rand_poly(rng, R, 4, 4)
    g = parse_in_session(s, str(f), "poly")
    assert str(g) == str(f)


@given(st.integers(0, 10_000))
def test_complex_print_round_trip(seed):
    rng = random.Random(seed)
    s = parse_session("ring R = Q[x, y];")
    X = randgen.rand_complex(rng, s.ring)
    text = fmt_complex(X)
    Y = parse_in_session(s, text, "complex")
    assert fmt_complex(Y) == text
