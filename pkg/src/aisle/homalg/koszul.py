"""Koszul complexes in cohomological degrees [-c, 0]."""

from itertools import combinations

from ..errors import InvalidInput, RingMismatch
from ..groebner import Ideal
from .complexes import Complex
from .matrices import Matrix
from .modules import PresentedModule


class KoszulComplex(Complex):
    """K(f_1..f_c): K^{-k} has basis e_S for the k-subsets S, and
    d(e_S) = sum_i (-1)^i f_{s_i} e_{S minus s_i} (i counted from 0)."""

    def __init__(self, ring, generators):
        self.generators = tuple(generators)
        c = len(self.generators)
        subsets = {k: list(combinations(range(c), k)) for k in range(c + 1)}
        objects = {-k: PresentedModule(ring, len(subsets[k])) for k in range(c + 1)}
        diffs = {}
        for k in range(1, c + 1):
            index = {S: i for i, S in enumerate(subsets[k - 1])}
            cols = []
            for S in subsets[k]:
                col = {}
                for pos, s in enumerate(S):
                    row = index[S[:pos] + S[pos + 1:]]
                    sign = -1 if pos % 2 else 1
                    for e, v in self.generators[s].terms.items():
                        col[(row,) + e] = v if sign > 0 else ring.field(-v)
                cols.append(col)
            diffs[-k] = Matrix(ring, len(subsets[k - 1]), len(subsets[k]), cols)
        super().__init__(ring, objects, diffs)

    @property
    def length(self):
        return len(self.generators)


def koszul_complex(gens, ring=None):
    """Koszul complex on a list of polynomials or on the generators of an Ideal."""
    if isinstance(gens, Ideal):
        ring = gens.ring
        gens = gens.nonzero_gens
    gens = list(gens)
    if ring is None:
        if not gens:
            raise InvalidInput("Koszul complex on an empty list needs an explicit ring")
        ring = gens[0].ring
    for g in gens:
        if g.ring != ring:
            raise RingMismatch("Koszul generators live in different rings")
    return KoszulComplex(ring, [g for g in gens if g])
