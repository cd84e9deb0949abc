"""The linear algebra oracle itself, checked against hand counts."""

from gmpy2 import mpq

from aisle.oracles import (
    Echelon,
    kernel_dim_bound,
    macaulay_member,
    monomials_upto,
    truncated_dim,
    truncated_intersection_dim,
)


def test_monomial_count():
    # C(n + D, D)
    assert len(monomials_upto(2, 4)) == 15
    assert len(monomials_upto(3, 6)) == 84


def test_echelon_rank_over_q_and_fp():
    e = Echelon()
    assert e.add({0: 1, 1: 2})
    assert e.add({0: 2, 1: 3})
    assert not e.add({0: mpq(1, 2), 1: 7})
    assert e.rank == 2
    f = Echelon(7)
    f.add({0: 1, 1: 2})
    assert not f.add({0: 4, 1: 1})  # 4*(1,2) = (4,8) = (4,1) mod 7


def test_member_degree_bound():
    x2 = {(2, 0): 1}
    assert macaulay_member({(3, 1): 5}, [x2], 2, 4)
    assert not macaulay_member({(1, 0): 1}, [x2], 2, 6)
    # x*y - 1 and x^2: 1 = y^2*x^2 - (x*y + 1)(x*y - 1) needs degree 4
    gens = [{(1, 1): 1, (0, 0): -1}, {(2, 0): 1}]
    assert not macaulay_member({(0, 0): 1}, gens, 2, 3)
    assert macaulay_member({(0, 0): 1}, gens, 2, 4)


def test_truncated_dims():
    x, y = {(1, 0): 1}, {(0, 1): 1}
    # (x) in degrees <= 3: monomials divisible by x -> 1 + 2 + 3
    assert truncated_dim([x], 2, 3) == 6
    assert truncated_intersection_dim([x], [y], 2, 3) == 3


def test_kernel_dim_koszul_relation():
    # kernel of [x y] in source degrees <= 1: spanned by (y, -x), one vector
    cols = [[{(1, 0): 1}], [{(0, 1): 1}]]
    assert kernel_dim_bound(cols, 1, 2, 1) == 1
    assert kernel_dim_bound(cols, 1, 2, 0) == 0
