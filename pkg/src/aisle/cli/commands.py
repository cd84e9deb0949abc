"""Verb implementations. Each takes (session, parsed args) and returns a Report."""

from ..errors import InvalidInput
from ..groebner import (
    eliminate,
    groebner_basis,
    ideal_intersect,
    ideal_member,
    ideal_quotient,
    normal_form,
    radical_member,
    saturate,
)
from ..homalg import (
    depth_via_koszul,
    ext_modules,
    free_resolution,
    inf_rhom,
    koszul_complex,
    torsion_submodule,
)
from ..homalg.complexes import truncate
from ..spectrum import StalkInjectiveRef, stalk_hom_nonzero, support
from ..tstruct import (
    aisle_member,
    bounded_below_check,
    coaisle_member,
    coaisle_member_gamma,
    compact_generators,
    synthesize_filtration,
)
from .dsl import fmt_complex, fmt_ideal, fmt_module, parse_in_session, print_session
from .report import Report


def parse_window(text):
    if text is None:
        return None
    try:
        a, b = text.split("..")
        a, b = int(a), int(b)
    except ValueError:
        raise InvalidInput(f"window must look like a..b, got {text!r}") from None
    if a > b:
        raise InvalidInput(f"empty window {text}")
    return (a, b)


def _need(args, k, usage):
    ops = args.operands
    if len(ops) != k:
        raise InvalidInput(f"usage: {usage}")
    return ops


def _ideal(s, text):
    return parse_in_session(s, text, "ideal")


def _poly(s, text):
    return parse_in_session(s, text, "poly")


def _module(s, text):
    return parse_in_session(s, text, "module")


def _complex(s, text):
    return parse_in_session(s, text, "complex")


def _cohomology_table(X):
    out = {}
    for n in X.degrees():
        H = X.cohomology(n)
        if not H.is_zero():
            out[str(n)] = fmt_module(H)
    return out


# ---------------------------------------------------------------------------
# ideals


def cmd_gb(s, args):
    (i,) = _need(args, 1, "gb IDEAL")
    G = groebner_basis(_ideal(s, i))
    return Report("gb", {"order": str(G.order), "basis": [str(g) for g in G.basis]})


def cmd_nf(s, args):
    f, i = _need(args, 2, "nf POLY IDEAL")
    G = groebner_basis(_ideal(s, i))
    return Report("nf", {"poly": str(_poly(s, f)), "normal_form": str(normal_form(_poly(s, f), G)),
                         "order": str(G.order)})


def cmd_member(s, args):
    if args.side:
        return _tstruct_member(s, args)
    f, i = _need(args, 2, "member POLY IDEAL | member --side SIDE --filtration F --complex X")
    m = ideal_member(_poly(s, f), _ideal(s, i), certificate=True)
    data = {"side": "ideal", "poly": str(_poly(s, f))}
    if m.member:
        data["cofactors"] = [str(c) for c in m.cofactors]
    return Report("member", data, verdict=bool(m.member))


def cmd_radical_member(s, args):
    f, i = _need(args, 2, "radical-member POLY IDEAL")
    return Report("radical-member", {"poly": str(_poly(s, f))},
                  verdict=radical_member(_poly(s, f), _ideal(s, i)))


def _binary(name, fn):
    def cmd(s, args):
        a, b = _need(args, 2, f"{name} IDEAL IDEAL")
        return Report(name, {"ideal": fmt_ideal(fn(_ideal(s, a), _ideal(s, b)))})
    return cmd


cmd_intersect = _binary("intersect", ideal_intersect)
cmd_quotient = _binary("quotient", ideal_quotient)


def cmd_saturate(s, args):
    a, b = _need(args, 2, "saturate IDEAL IDEAL")
    I, t = saturate(_ideal(s, a), _ideal(s, b))
    return Report("saturate", {"ideal": fmt_ideal(I), "exponent": t})


def cmd_eliminate(s, args):
    (a,) = _need(args, 1, "eliminate IDEAL --vars x,y")
    if not args.vars:
        raise InvalidInput("eliminate needs --vars")
    names = [v.strip() for v in args.vars.split(",") if v.strip()]
    J = eliminate(_ideal(s, a), names)
    return Report("eliminate", {"ideal": fmt_ideal(J), "variables": list(J.ring.variables)})


# ---------------------------------------------------------------------------
# modules and complexes


def cmd_resolve(s, args):
    (m,) = _need(args, 1, "resolve MODULE [--length k]")
    res = free_resolution(_module(s, m), args.length or 3)
    return Report("resolve", {"complex": fmt_complex(res.complex), **res.to_dict()})


def cmd_cohomology(s, args):
    (x,) = _need(args, 1, "cohomology COMPLEX [--degree n]")
    X = _complex(s, x)
    if args.degree is not None:
        H = X.cohomology(args.degree)
        return Report("cohomology", {"degree": args.degree, "module": fmt_module(H), "zero": H.is_zero()})
    return Report("cohomology", {"nonzero": _cohomology_table(X), "range": [X.lo, X.hi]})


def cmd_koszul(s, args):
    (i,) = _need(args, 1, "koszul IDEAL")
    K = koszul_complex(_ideal(s, i))
    return Report("koszul", {"complex": fmt_complex(K), "length": K.length,
                             "cohomology": _cohomology_table(K)})


def cmd_ext(s, args):
    m, x = _need(args, 2, "ext MODULE COMPLEX --window a..b")
    X = _complex(s, x)
    window = parse_window(args.window) or (X.lo, X.hi + s.ring.nvars)
    r = ext_modules(_module(s, m), X, window)
    return Report("ext", {
        "window": list(r.window),
        "modules": {str(n): fmt_module(M) for n, M in sorted(r.modules.items()) if not M.is_zero()},
        "resolution_length": r.length,
        "resolution_complete": r.complete,
    })


def cmd_depth(s, args):
    i, x = _need(args, 2, "depth IDEAL COMPLEX [--method koszul|ext|both]")
    I, X = _ideal(s, i), _complex(s, x)
    method = args.method or "both"
    data = {}
    if method in ("koszul", "both"):
        data["koszul"] = depth_via_koszul(I, X).to_dict()
    if method in ("ext", "both"):
        data["ext"] = inf_rhom(I, X).to_dict()
    if method not in ("koszul", "ext", "both"):
        raise InvalidInput(f"unknown depth method {method!r}")
    if method == "both":
        data["agree"] = data["koszul"]["value"] == data["ext"]["value"]
    data["value"] = (data.get("koszul") or data["ext"])["value"]
    return Report("depth", data)


def cmd_torsion(s, args):
    i, m = _need(args, 2, "torsion IDEAL MODULE")
    r = torsion_submodule(_ideal(s, i), _module(s, m))
    return Report("torsion", {"module": fmt_module(r.module), "exponent": r.exponent,
                              "zero": r.module.is_zero()})


def cmd_support(s, args):
    (m,) = _need(args, 1, "support MODULE")
    return Report("support", {"support": "V" + fmt_ideal(support(_module(s, m)).defining)})


def cmd_stalk_hom(s, args):
    x, p = _need(args, 2, "stalk-hom COMPLEX PRIME --shift n")
    prime = s.get(p, "prime")
    n = args.shift or 0
    e = StalkInjectiveRef(prime, n)
    return Report("stalk-hom", {"target": str(e)}, verdict=stalk_hom_nonzero(_complex(s, x), e))


# ---------------------------------------------------------------------------
# t-structures


def _tstruct_member(s, args):
    if not args.filtration or not args.complex:
        raise InvalidInput("member --side needs --filtration and --complex")
    phi = s.get(args.filtration, "filtration")
    X = _complex(s, args.complex)
    fn = {"aisle": aisle_member, "coaisle": coaisle_member, "coaisle-gamma": coaisle_member_gamma}.get(args.side)
    if fn is None:
        raise InvalidInput(f"unknown side {args.side!r} (aisle, coaisle, coaisle-gamma)")
    r = fn(phi, X)
    d = r.to_dict()
    verdict = d.pop("verdict")
    return Report("member", d, verdict=verdict)


def cmd_generators(s, args):
    (f,) = _need(args, 1, "generators FILTRATION --window a..b")
    phi = s.get(f, "filtration")
    window = parse_window(args.window) or (phi.lo, phi.hi)
    gens = compact_generators(phi, window)
    return Report("generators", {"window": list(window), "generators": [str(g) for g in gens]})


def cmd_synthesize(s, args):
    name = args.evidence or (args.operands[0] if args.operands else None)
    if not name:
        raise InvalidInput("synthesize needs --evidence NAME")
    ev = s.get(name, "evidence")
    shifts = [n for _, n, _ in ev.assertions] or [0]
    window = parse_window(args.window) or (min(shifts), max(shifts))
    r = synthesize_filtration(ev, window)
    return Report("synthesize", r.to_dict())


def cmd_bounded_check(s, args):
    (f,) = _need(args, 1, "bounded-check FILTRATION")
    r = bounded_below_check(s.get(f, "filtration"))
    return Report("bounded-check", r.to_dict())


def cmd_truncate(s, args):
    (x,) = _need(args, 1, "truncate COMPLEX --n n [--kind soft_le|soft_gt|brutal_le|brutal_ge]")
    X = _complex(s, x)
    n = args.n if args.n is not None else 0
    T = truncate(X, args.kind or "soft_le", n)
    return Report("truncate", {"kind": args.kind or "soft_le", "n": n, "complex": fmt_complex(T),
                               "cohomology": _cohomology_table(T)})


def cmd_print(s, args):
    return Report("print", {"session": print_session(s)})


def cmd_verify(s, args):
    from .suites import run_suites

    data = run_suites(args.suite or "all", args.seed or 0, args.cases, args.jobs or 1)
    return Report("verify", data, verdict=not data["failures"])


VERBS = {
    "gb": cmd_gb,
    "nf": cmd_nf,
    "member": cmd_member,
    "radical-member": cmd_radical_member,
    "intersect": cmd_intersect,
    "quotient": cmd_quotient,
    "saturate": cmd_saturate,
    "eliminate": cmd_eliminate,
    "resolve": cmd_resolve,
    "cohomology": cmd_cohomology,
    "koszul": cmd_koszul,
    "ext": cmd_ext,
    "depth": cmd_depth,
    "torsion": cmd_torsion,
    "support": cmd_support,
    "stalk-hom": cmd_stalk_hom,
    "generators": cmd_generators,
    "synthesize": cmd_synthesize,
    "bounded-check": cmd_bounded_check,
    "truncate": cmd_truncate,
    "print": cmd_print,
    "verify": cmd_verify,
}

# verbs that do not read a session
SESSIONLESS = {"verify"}
