import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from aisle.cli import randgen
from aisle.cli.dsl import parse_session
from aisle.cli.suites import _exact_at, _same_subquotient, _shift_map
from aisle.errors import InvalidInput, InvariantViolation, ParseError
from aisle.groebner import Ideal, Span, radical_member
from aisle.homalg import (
    INF,
    Complex,
    ComplexMap,
    Matrix,
    ModuleMap,
    PresentedModule,
    annihilator,
    cone,
    depth_via_koszul,
    ext_modules,
    free_resolution,
    hom_complex,
    inf_rhom,
    koszul_complex,
    present_subquotient,
    shift,
    soft_truncations,
    stalk,
    syzygies,
    tensor_complex,
    torsion_submodule,
    truncate,
)
from aisle.polyring import GF, QQ, make_ring


def is_cyclic(M, ring, *gens):
    """M is presented as R/(gens)."""
    I = Ideal(ring, [ring(g) for g in gens])
    return M.rank == 1 and M.span.equals(I.span())


def mat(ring, rows):
    return Matrix.from_rows(ring, [[ring(e) for e in r] for r in rows])


def two_term(ring, entry, lo=0):
    R1 = PresentedModule.free(ring, 1)
    return Complex(ring, {lo: R1, lo + 1: R1}, {lo: mat(ring, [[entry]])})


# ---------------------------------------------------------------------------
# syzygies and subquotients


def test_syzygies_examples(Rx, Rxy, axes):
    assert syzygies(mat(Rx, [["x"]])).ncols == 0
    s = syzygies(mat(Rxy, [["x", "y"]]))
    assert s.ncols == 1 and [str(e) for e in s.rows()[0]] + [str(e) for e in s.rows()[1]] in (
        ["y", "-x"], ["-y", "x"])
    s = syzygies(mat(axes, [["x"]]))
    assert s.ncols == 1 and str(s.entry(0, 0)) == "y"


def test_subquotient_examples(Rx, axes):
    R = PresentedModule.free(Rx, 1)
    f = ModuleMap(R, R, mat(Rx, [["x"]]))
    assert is_cyclic(present_subquotient("cokernel", f).module, Rx, "x")
    assert present_subquotient("kernel", f).module.is_zero()
    A = PresentedModule.free(axes, 1)
    k = present_subquotient("kernel", ModuleMap(A, A, mat(axes, [["x"]])))
    assert str(k.gens.entry(0, 0)) == "y"
    assert is_cyclic(k.module, axes, "x")


def test_module_map_must_be_well_defined(Rx):
    M = PresentedModule.cyclic(Ideal(Rx, [Rx("x")]))
    with pytest.raises(InvalidInput):
        ModuleMap(M, PresentedModule.free(Rx, 1), mat(Rx, [["1"]]))


def test_zero_module_accepted(Rx):
    Z = PresentedModule.zero_module(Rx)
    assert Z.is_zero() and annihilator(Z).gens and stalk(Z, 0).is_acyclic()


# ---------------------------------------------------------------------------
# resolutions


def test_resolution_principal(Rx):
    res = free_resolution(PresentedModule.cyclic(Ideal(Rx, [Rx("x")])), 2)
    assert res.complete and res.length == 1 and res.ranks == [1, 1]


def test_resolution_koszul(Rxy):
    res = free_resolution(PresentedModule.cyclic(Ideal(Rxy, [Rxy("x"), Rxy("y")])), 3)
    assert res.complete and res.ranks == [1, 2, 1]
    K = koszul_complex(Ideal(Rxy, [Rxy("x"), Rxy("y")]))
    assert [K.rank(n) for n in (0, -1, -2)] == res.ranks


def test_resolution_periodic_over_dual_numbers():
    R = make_ring(GF(7), ["x"], relations=["x^2"])
    res = free_resolution(PresentedModule.cyclic(Ideal(R, [R("x")])), 3)
    assert not res.complete and res.ranks == [1, 1, 1, 1]
    X = res.complex
    for n in (-3, -2, -1):
        assert str(X.d(n).entry(0, 0)) == "x"
    # exact in the middle, H^0 = R/(x)
    for n in (-2, -1):
        assert X.cohomology(n).is_zero()
    assert is_cyclic(X.cohomology(0), R, "x")


def test_resolution_is_exact_randomly():
    rng = random.Random(11)
    for _ in range(10):
        R = randgen.ring_by_name(rng.choice(randgen.COMPLEX_RINGS))
        M = randgen.rand_module(rng, R)
        res = free_resolution(M, 4)
        X = res.complex
        for n in range(X.lo + 1, 0):
            assert X.cohomology(n).is_zero()
        if M.rank:
            assert Span.of(R, M.rank, list(X.cohomology_presentation(0)._denoms)).equals(M.span)


# ---------------------------------------------------------------------------
# cohomology, shift, cone, truncation


def test_cohomology_regular(Rx):
    X = two_term(Rx, "x", -1)
    assert X.cohomology(-1).is_zero()
    assert is_cyclic(X.cohomology(0), Rx, "x")


def test_cohomology_axes(axes):
    X = two_term(axes, "x", -1)
    H = X.cohomology_presentation(-1)
    assert str(H.gens.entry(0, 0)) == "y" and is_cyclic(H.module, axes, "x")
    assert is_cyclic(X.cohomology(0), axes, "x")


def test_bad_complex_rejected(Rx):
    R1 = PresentedModule.free(Rx, 1)
    with pytest.raises(ParseError, match="d"):
        parse_session("ring R = Q[x]; complex X = { 0: R -[[[x]]]-> 1: R -[[[x]]]-> 2: R };")
    with pytest.raises(InvariantViolation):
        Complex(Rx, {0: R1, 1: R1, 2: R1}, {0: mat(Rx, [["x"]]), 1: mat(Rx, [["x"]])})


def test_shift_places_stalk(Rx):
    M = PresentedModule.cyclic(Ideal(Rx, [Rx("x")]))
    X = shift(stalk(M, 0), -3)
    assert sorted(X.objects) == [3]


def test_cone_of_multiplication(Rx):
    R1 = PresentedModule.free(Rx, 1)
    f = ComplexMap(stalk(R1, 0), stalk(R1, 0), {0: mat(Rx, [["x"]])})
    C, inc, proj = cone(f)
    assert sorted(C.objects) == [-1, 0]
    assert C.cohomology(-1).is_zero() and is_cyclic(C.cohomology(0), Rx, "x")


def test_truncations(Rx):
    M = PresentedModule.cyclic(Ideal(Rx, [Rx("x")]))
    X = stalk(M, 0)
    le, _, gt, _ = soft_truncations(X, 0)
    assert is_cyclic(le.cohomology(0), Rx, "x") and gt.is_acyclic()
    Y = two_term(Rx, "x", -1)
    b = truncate(Y, "brutal_ge", 0)
    assert sorted(b.objects) == [0] and b.obj(0).is_free
    assert truncate(Y, "soft_le", -1).is_acyclic()
    with pytest.raises(InvalidInput):
        truncate(Y, "sideways", 0)


@given(st.integers(0, 10_000))
def test_shift_isomorphism(seed):
    rng = random.Random(seed)
    R = randgen.ring_by_name(rng.choice(randgen.COMPLEX_RINGS))
    X = randgen.rand_complex(rng, R)
    k = rng.randint(-3, 3)
    Xk = shift(X, k)
    for n in range(X.lo - k - 1, X.hi - k + 2):
        assert _same_subquotient(Xk.cohomology_presentation(n), X.cohomology_presentation(n + k))


@given(st.integers(0, 10_000))
def test_cone_long_exact_sequence(seed):
    rng = random.Random(seed)
    R = randgen.ring_by_name(rng.choice(randgen.COMPLEX_RINGS))
    f = randgen.rand_chain_map(rng, R)
    C, inc, proj = cone(f)
    C.validate()
    fs = _shift_map(f, 1)
    for n in range(min(f.source.lo, f.target.lo) - 2, max(f.source.hi, f.target.hi) + 2):
        seq = [f.induced(n), inc.induced(n), proj.induced(n), fs.induced(n)]
        for a, b in zip(seq, seq[1:]):
            assert _exact_at(a, b)


@given(st.integers(0, 10_000))
def test_soft_truncation_contract(seed):
    rng = random.Random(seed)
    R = randgen.ring_by_name(rng.choice(randgen.COMPLEX_RINGS))
    X = randgen.rand_complex(rng, R)
    n = rng.randint(X.lo - 1, X.hi)
    le, le_map, gt, gt_map = soft_truncations(X, n)
    for k in range(X.lo - 1, X.hi + 2):
        if k <= n:
            assert le_map.induced(k).is_isomorphism() and gt.cohomology(k).is_zero()
        else:
            assert gt_map.induced(k).is_isomorphism() and le.cohomology(k).is_zero()


def test_exactness_detects_failure(Rx):
    # R -1-> R -1-> R is not exact in the middle
    R1 = PresentedModule.free(Rx, 1)
    one = ModuleMap(R1, R1, mat(Rx, [["1"]]))
    assert not _exact_at(one, one)
    zero = ModuleMap(R1, R1, mat(Rx, [["0"]]))
    assert _exact_at(zero, one)


# ---------------------------------------------------------------------------
# Koszul


def test_koszul_examples(Rx, Rxy):
    K = koszul_complex(Ideal(Rx, [Rx("x")]))
    assert K.cohomology(-1).is_zero() and is_cyclic(K.cohomology(0), Rx, "x")
    K = koszul_complex(Ideal(Rxy, [Rxy("x"), Rxy("y")]))
    assert [K.rank(n) for n in (-2, -1, 0)] == [1, 2, 1]
    assert K.cohomology(-2).is_zero() and K.cohomology(-1).is_zero()
    assert is_cyclic(K.cohomology(0), Rxy, "x", "y")
    K = koszul_complex([Rx("x"), Rx("x")])
    assert is_cyclic(K.cohomology(-1), Rx, "x")


@given(st.integers(0, 10_000))
def test_koszul_h0_is_quotient(seed):
    rng = random.Random(seed)
    R = randgen.ring_by_name(rng.choice(randgen.COMPLEX_RINGS))
    I = randgen.rand_ideal(rng, R, maxdeg=2, nterms=2)
    H0 = koszul_complex(I).cohomology(0)
    if H0.rank:
        assert H0.span.equals(I.span())
    else:
        assert I.span().is_everything()


def test_hom_and_tensor_are_complexes():
    rng = random.Random(2)
    for _ in range(10):
        R = randgen.ring_by_name(rng.choice(randgen.COMPLEX_RINGS))
        X = randgen.rand_complex(rng, R)
        K = koszul_complex(randgen.rand_small_ideal(rng, R))
        hom_complex(K, X).validate()
        tensor_complex(X, K).validate()


def test_hom_needs_free_source(Rx):
    M = stalk(PresentedModule.cyclic(Ideal(Rx, [Rx("x")])), 0)
    with pytest.raises(InvalidInput):
        hom_complex(M, M)


# ---------------------------------------------------------------------------
# Ext, torsion, depth


def test_ext_of_residue_field_into_ring(Rxy):
    k = PresentedModule.cyclic(Ideal(Rxy, [Rxy("x"), Rxy("y")]))
    r = ext_modules(k, stalk(PresentedModule.free(Rxy, 1), 0), (0, 3))
    assert r.nonzero_degrees() == [2]
    assert is_cyclic(r.modules[2], Rxy, "x", "y")


def test_ext_window_checks(Rx):
    with pytest.raises(InvalidInput):
        ext_modules(PresentedModule.free(Rx, 1), stalk(PresentedModule.free(Rx, 1)), (2, 1))


def test_torsion_examples(Rx, axes):
    M = PresentedModule.cyclic(Ideal(Rx, [Rx("x^2")]))
    t = torsion_submodule(Ideal(Rx, [Rx("x")]), M)
    assert t.exponent == 2 and t.inclusion.is_surjective()
    t = torsion_submodule(Ideal(Rx, [Rx("x")]), PresentedModule.free(Rx, 1))
    assert t.module.is_zero()
    t = torsion_submodule(Ideal(axes, [axes("x")]), PresentedModule.free(axes, 1))
    assert t.exponent == 1 and str(t.presentation.gens.entry(0, 0)) == "y"


def test_torsion_everything_iff_support_inside():
    rng = random.Random(4)
    R = randgen.ring_by_name("Q[x,y]")
    for _ in range(15):
        M = randgen.rand_module(rng, R)
        I = randgen.rand_small_ideal(rng, R)
        t = torsion_submodule(I, M)
        ann = annihilator(M)
        inside = all(radical_member(g, ann) for g in I.nonzero_gens)
        assert inside == (t.inclusion.is_surjective() or M.is_zero()) or M.is_zero()


def test_depth_examples(Rx, Rxy, Rxyz):
    X = stalk(PresentedModule.free(Rxyz, 1), 0)
    m = Ideal(Rxyz, Rxyz.gens())
    assert depth_via_koszul(m, X).value == inf_rhom(m, X).value == 3
    X = stalk(PresentedModule.cyclic(Ideal(Rx, [Rx("x")])), 0)
    I = Ideal(Rx, [Rx("x")])
    assert depth_via_koszul(I, X).value == inf_rhom(I, X).value == 0
    X = stalk(PresentedModule.cyclic(Ideal(Rxy, [Rxy("x")])), 5)
    I = Ideal(Rxy, Rxy.gens())
    assert depth_via_koszul(I, X).value == inf_rhom(I, X).value == 6


def test_depth_infinite_when_support_misses(Rxy):
    X = stalk(PresentedModule.cyclic(Ideal(Rxy, [Rxy("x - 1")])), 0)
    I = Ideal(Rxy, [Rxy("x")])
    assert depth_via_koszul(I, X).value == INF == inf_rhom(I, X).value


def test_depth_over_quotient_ring():
    R = make_ring(QQ, ["x", "y"], relations=["x*y"])
    X = stalk(PresentedModule.free(R, 1), 0)
    I = Ideal(R, [R("x")])
    # x is a zero divisor on R: Hom(R/(x), R) = (0 : x) = (y) != 0
    assert inf_rhom(I, X).value == 0 == depth_via_koszul(I, X).value
    I = Ideal(R, [R("x + y")])
    assert inf_rhom(I, X).value == 1 == depth_via_koszul(I, X).value


@given(st.integers(0, 10_000))
def test_depth_routes_agree(seed):
    rng = random.Random(seed)
    R = randgen.ring_by_name(rng.choice(randgen.COMPLEX_RINGS))
    X = randgen.rand_complex(rng, R)
    I = Ideal(R, R.gens()[: rng.randint(1, R.nvars)])
    assert depth_via_koszul(I, X).value == inf_rhom(I, X).value
