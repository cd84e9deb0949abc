"""Seeded random rings, ideals, modules and complexes for the verify suites.

Sizes are kept small on purpose: every object must be cheap enough that a
few hundred cases finish in seconds.
"""

from functools import lru_cache

from ..groebner import Ideal
from ..homalg import Complex, Matrix, PresentedModule, cone, koszul_complex, shift, stalk
from ..homalg.complexes import ComplexMap
from ..homalg.modules import syzygies
from ..polyring import GF, QQ, Polynomial, make_ring


@lru_cache(maxsize=None)
def ring_by_name(name):
    table = {
        "Q[x,y]": (QQ, ("x", "y")),
        "Q[x,y,z]": (QQ, ("x", "y", "z")),
        "GF7[x,y]": (GF(7), ("x", "y")),
        "GF7[x,y,z]": (GF(7), ("x", "y", "z")),
        "Q[x]": (QQ, ("x",)),
    }
    field, names = table[name]
    return make_ring(field, names, "grevlex")


COMPLEX_RINGS = ("Q[x,y]", "GF7[x,y,z]")


def rand_coeff(rng, ring, lo=-3, hi=3):
    c = 0
    while c == 0:
        c = rng.randint(lo, hi)
    return ring.field(c)


def rand_monomial(rng, nvars, deg):
    e = [0] * nvars
    for _ in range(deg):
        e[rng.randrange(nvars)] += 1
    return tuple(e)


def rand_poly(rng, ring, maxdeg=3, nterms=3, homogeneous=False, mindeg=0):
    terms = {}
    top = rng.randint(mindeg, maxdeg) if not homogeneous else maxdeg
    for k in range(nterms):
        d = top if homogeneous or k == 0 else rng.randint(0, top)
        terms[rand_monomial(rng, ring.nvars, d)] = rand_coeff(rng, ring)
    return Polynomial(ring, terms)


def rand_ideal(rng, ring, ngens=3, maxdeg=3, nterms=3):
    k = rng.randint(1, ngens)
    homogeneous = rng.random() < 0.3
    gens = []
    for _ in range(k):
        d = rng.randint(1, maxdeg)
        gens.append(rand_poly(rng, ring, d, rng.randint(1, nterms), homogeneous, mindeg=1))
    return Ideal(ring, gens)


def rand_linear_entry(rng, ring, zero_prob=0.35):
    """0, a constant, a variable, or a small linear form."""
    r = rng.random()
    if r < zero_prob:
        return ring.zero()
    if r < zero_prob + 0.15:
        return ring.const(rand_coeff(rng, ring))
    v = ring.gen(rng.randrange(ring.nvars))
    if rng.random() < 0.6:
        return v
    w = ring.gen(rng.randrange(ring.nvars))
    return v + w * ring.const(rand_coeff(rng, ring)) if rng.random() < 0.5 else v * w


def rand_matrix(rng, ring, nrows, ncols):
    return Matrix.from_rows(ring, [[rand_linear_entry(rng, ring) for _ in range(ncols)] for _ in range(nrows)])


def rand_small_ideal(rng, ring):
    """Ideals whose cohomological behaviour is interesting yet cheap."""
    v = ring.gens()
    pick = rng.randrange(7)
    if pick == 0:
        return Ideal(ring, [v[0]])
    if pick == 1:
        return Ideal(ring, [v[0] * v[1]])
    if pick == 2:
        return Ideal(ring, [v[0] ** 2, v[0] * v[1]])
    if pick == 3:
        return Ideal(ring, [v[0], v[1]])
    if pick == 4:
        return Ideal(ring, [v[-1] - ring.one()])
    if pick == 5:
        return Ideal(ring, [v[1] ** 2])
    return Ideal(ring, [rand_linear_entry(rng, ring, 0.0) or v[0]])


def rand_module(rng, ring):
    r = rng.random()
    if r < 0.2:
        return PresentedModule.free(ring, 1)
    if r < 0.8:
        return PresentedModule.cyclic(rand_small_ideal(rng, ring))
    return PresentedModule(ring, 2, rand_matrix(rng, ring, 2, 1))


def _two_term(rng, ring, n):
    a, b = rng.randint(1, 2), rng.randint(1, 2)
    A = rand_matrix(rng, ring, b, a)
    return Complex(ring, {n: PresentedModule.free(ring, a), n + 1: PresentedModule.free(ring, b)}, {n: A})


def _three_term(rng, ring, n):
    # B: R^m1 -> R^m2 random, A = generators of ker B, so B A = 0
    m1, m2 = rng.randint(1, 2), 1
    B = rand_matrix(rng, ring, m2, m1)
    A = syzygies(B)
    objs = {n + 1: PresentedModule.free(ring, m1), n + 2: PresentedModule.free(ring, m2)}
    diffs = {n + 1: B}
    if A.ncols:
        objs[n] = PresentedModule.free(ring, A.ncols)
        diffs[n] = A
    return Complex(ring, objs, diffs)


def rand_module_map(rng, ring):
    """A well-defined map between cyclic modules R/(f g) -> R/(g) or R/(g) -> R/(f g)."""
    v = ring.gens()
    f = v[rng.randrange(ring.nvars)]
    g = v[rng.randrange(ring.nvars)]
    fg = f * g
    if rng.random() < 0.5:
        src = PresentedModule.cyclic(Ideal(ring, [fg]))
        tgt = PresentedModule.cyclic(Ideal(ring, [g]))
        m = Matrix.from_rows(ring, [[ring.one()]])
    else:
        src = PresentedModule.cyclic(Ideal(ring, [g]))
        tgt = PresentedModule.cyclic(Ideal(ring, [fg]))
        m = Matrix.from_rows(ring, [[f]])
    return src, tgt, m


def _cone_of_modules(rng, ring, n):
    src, tgt, m = rand_module_map(rng, ring)
    f = ComplexMap(stalk(src, n), stalk(tgt, n), {n: m})
    return cone(f)[0]


def rand_complex(rng, ring, kinds=None):
    kinds = kinds or ("stalk", "two-term", "three-term", "koszul", "cone")
    kind = rng.choice(kinds)
    n = rng.randint(-1, 1)
    if kind == "stalk":
        return stalk(rand_module(rng, ring), n)
    if kind == "two-term":
        return _two_term(rng, ring, n)
    if kind == "three-term":
        return _three_term(rng, ring, n)
    if kind == "koszul":
        K = koszul_complex(rand_small_ideal(rng, ring))
        return shift(K, -n)
    return _cone_of_modules(rng, ring, n)


def rand_chain_map(rng, ring):
    """A chain map f: X -> Y between small complexes (random, cheap, verified)."""
    kind = rng.randrange(3)
    n = rng.randint(-1, 1)
    if kind == 0:
        src, tgt, m = rand_module_map(rng, ring)
        return ComplexMap(stalk(src, n), stalk(tgt, n), {n: m})
    if kind == 1:
        # multiplication by a ring element on a two-term complex
        X = _two_term(rng, ring, n)
        c = rand_linear_entry(rng, ring, 0.0)
        maps = {}
        for k in X.objects:
            r = X.rank(k)
            maps[k] = Matrix.from_rows(ring, [[c if i == j else ring.zero() for j in range(r)] for i in range(r)])
        return ComplexMap(X, X, maps)
    # identity-induced map into the quotient by the image of d
    X = _two_term(rng, ring, n)
    Y = Complex(ring, {n + 1: PresentedModule(ring, X.rank(n + 1), X.d(n))}, {})
    return ComplexMap(X, Y, {n + 1: Matrix.identity(ring, X.rank(n + 1))})
