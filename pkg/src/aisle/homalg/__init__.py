"""Finitely presented modules and bounded cochain complexes."""

from .complexes import (
    Complex,
    ComplexMap,
    cone,
    direct_sum,
    from_modules,
    identity_map,
    shift,
    soft_truncations,
    stalk,
    truncate,
    zero_complex,
)
from .derived import (
    INF,
    DepthResult,
    ExtResult,
    Resolution,
    TorsionResult,
    depth_via_koszul,
    ext_modules,
    free_resolution,
    hom_complex,
    inf_rhom,
    tensor_complex,
    torsion_submodule,
)
from .koszul import KoszulComplex, koszul_complex
from .matrices import Matrix
from .modules import (
    ModuleMap,
    PresentedModule,
    Presentation,
    annihilator,
    present_subquotient,
    syzygies,
)


def cohomology(X, n):
    return X.cohomology(n)
