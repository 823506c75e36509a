"""``toral``: command-line access to the invariants and conjugacy tools.

Exit codes: 0 when a verdict was computed (negative answers included),
2 when a mathematical precondition fails, 1 on unreadable or malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Optional, Sequence

from . import __version__
from .bf_invariants import (
    DEFAULT_MAX_K,
    DEFAULT_MODULE_CAP,
    DEFAULT_POINT_CAP,
    bf_group,
    bf_k,
    enumerate_periodic_points,
    per_count,
    require_similar,
    strong_bf_equivalent,
)
from .errors import ParseError, PreconditionError, ToralError
from .exact_linalg import charpoly, snf
from .formats import read_matrix
from .ideals import (
    DEFAULT_IDEAL_BOUND,
    conjugate_over_Z,
    eigenvector,
    equivalence_chain_report,
    ideal_equivalent,
    ideal_from_matrix,
    is_cyclic_direct,
    is_cyclic_via_ideal,
    multiplicator_ring,
    weakly_equivalent,
)
from .poly import parse_poly
from .polynum import is_hyperbolic, minimal_polynomial, rational_invariant_factors, similar_over_Q
from .profinite_tower import (
    DEFAULT_ENUM_CAP,
    DivisorChain,
    build_tower,
    check_surjective,
    cofinality_check,
    induced_conjugacy,
    order_mod,
    search_truncated_conjugacy,
)

SCHEMA_VERSION = 1


def _report(kind: str, **fields) -> dict:
    return {"schema_version": SCHEMA_VERSION, "kind": kind, **fields}


def _frac(x: Fraction) -> str:
    return str(x)


# ---------------------------------------------------------------- verbs
# Each handler returns (json_report, text_lines).


def cmd_bf(args):
    A = args.A
    if args.poly is not None:
        g = parse_poly(args.poly)
        G = bf_group(A, g)
        label = str(g)
    else:
        G = bf_k(A, args.k)
        label = f"t^{args.k} - 1"
    rep = _report(
        "bf",
        g=label,
        k=None if args.poly is not None else args.k,
        factors=G.factors.to_list(),
        order=G.order,
        action=[list(r) for r in G.action],
    )
    text = [f"BF group for g = {label}", f"invariant factors: {G.factors.to_list()}", f"order: {G.order}"]
    return rep, text


def cmd_per(args):
    c = per_count(args.A, args.k)
    return _report("per", k=args.k, count=c), [f"|Per_{args.k}(A)| = {c}"]


def cmd_points(args):
    pts = enumerate_periodic_points(args.A, args.k, cap=args.cap)
    rep = _report("points", k=args.k, count=len(pts), points=[[_frac(x) for x in p] for p in pts])
    text = [f"{len(pts)} points of period dividing {args.k}:"]
    text += ["  (" + ", ".join(_frac(x) for x in p) + ")" for p in pts]
    return rep, text


def cmd_hyperbolic(args):
    h = is_hyperbolic(args.A)
    f = charpoly(args.A)
    return _report("hyperbolic", charpoly=list(f.coeffs), hyperbolic=h), [
        f"charpoly: {f}",
        f"hyperbolic: {str(h).lower()}",
    ]


def cmd_similar(args):
    s = similar_over_Q(args.A, args.B) if args.A.n == args.B.n else False
    return _report("similar", similar=s), [f"similar over Q: {str(s).lower()}"]


def cmd_snf(args):
    d = snf(args.A)
    rep = _report("snf", diagonal=list(d.diagonal), U=d.U.tolist(), V=d.V.tolist(), D=d.D.tolist())
    return rep, [f"diagonal: {list(d.diagonal)}"]


def cmd_charpoly(args):
    A = args.A
    f = charpoly(A)
    m = minimal_polynomial(A)
    inv = rational_invariant_factors(A)
    rep = _report(
        "charpoly",
        charpoly=list(f.coeffs),
        minpoly=m.to_list(),
        rational_invariant_factors=[p.to_list() for p in inv],
    )
    return rep, [f"charpoly: {f}", f"minimal polynomial: {m}"]


def cmd_strong_bf(args):
    r = strong_bf_equivalent(args.A, args.B, max_k=args.max_k, level=args.level, cap=args.cap)
    text = [f"{'k':>3}  {'factors A':<24} {'factors B':<24} group  module"]
    for lv in r.levels:
        text.append(
            f"{lv.k:>3}  {str(list(lv.factors_A)):<24} {str(list(lv.factors_B)):<24} "
            f"{str(lv.group).lower():<6} {lv.module or '-'}"
        )
    text += [f"verdict: {r.summary}", f"basis: {r.justification}"]
    return r.to_json(), text


def cmd_ideal(args):
    A = args.A
    u = eigenvector(A, args.column)
    I = ideal_from_matrix(A, args.column)
    O = multiplicator_ring(I)
    rep = _report(
        "ideal",
        eigenvector=[x.to_json() for x in u],
        ideal=I.to_json(),
        norm=_frac(I.norm()),
        multiplicator_ring=O.to_json(),
    )
    text = [
        f"f = {parse_poly(' '.join(map(str, I.f)))}",
        f"ideal: (1/{I.den}) * rows {[list(r) for r in I.basis]}",
        f"norm: {I.norm()}",
        f"multiplicator ring: (1/{O.den}) * rows {[list(r) for r in O.basis]}",
    ]
    return rep, text


def _ideal_pair(args):
    require_similar(args.A, args.B)
    return ideal_from_matrix(args.A), ideal_from_matrix(args.B)


def cmd_weak_equiv(args):
    I, J = _ideal_pair(args)
    v = weakly_equivalent(I, J)
    text = [f"weakly equivalent: {str(v.found).lower()} (complete decision via I(J:I) = J and J(I:J) = I)"]
    return _report("ideal_verdict", **v.to_json()), text


def cmd_ideal_equiv(args):
    I, J = _ideal_pair(args)
    v = ideal_equivalent(I, J, args.bound)
    text = [f"relation: {v.relation}"]
    if v.found:
        text.append(f"gamma: {v.witness.to_json()}")
    elif v.search_bound_reached:
        text.append(f"no gamma within coefficient bound {args.bound}")
    else:
        text.append("certified: the ideals are not even weakly equivalent")
    return _report("ideal_verdict", **v.to_json()), text


def cmd_cyclic(args):
    out = {}
    text = []
    if args.method in ("direct", "both"):
        d = is_cyclic_direct(args.A, args.bound)
        out["direct"] = d.to_json()
        text.append(f"direct search: {d.status}" + (f" xi = {list(d.witness)}" if d.witness else ""))
    if args.method in ("ideal", "both"):
        v = is_cyclic_via_ideal(args.A, args.bound)
        out["via_ideal"] = v.to_json()
        text.append(f"via ideal class: {v.status}")
    return _report("cyclic", bound=args.bound, **out), text


def cmd_conjugate(args):
    v = conjugate_over_Z(args.A, args.B, args.bound)
    text = [f"conjugate over Z: {v.status}", f"reason: {v.reason}"]
    if v.C is not None:
        text.append(f"C = {v.C.tolist()}")
    return _report("conjugate", **v.to_json()), text


def cmd_chain_report(args):
    r = equivalence_chain_report(args.A, args.B, max_k=args.max_k, cap=args.cap)
    names = [
        ("a", "I_A, I_B weakly equivalent", r.weak_equivalence),
        ("b", "A (+) A' block conjugate to B (+) B", r.block_conjugate),
        ("c", "profinitely conjugate", r.profinitely_conjugate),
        ("d", "strongly BF-equivalent", r.strongly_bf_equivalent),
    ]
    text = [f"({c}) {label}: {str(v).lower()}" for c, label, v in names]
    text.append(f"BF cross-check up to k = {args.max_k}: {r.cross_check['verdict']}")
    return r.to_json(), text


def cmd_tower(args):
    T = build_tower(args.A, args.chain)
    rep = T.to_json()
    ks = T.chain.levels
    rep["surjective"] = {
        f"{b}->{a}": check_surjective(T, b, a, args.cap) for a, b in zip(ks, ks[1:])
    }
    text = [f"{'k':>4}  {'order':>10}  factors"]
    for k in ks:
        lv = T.level(k)
        text.append(f"{k:>4}  {lv.order:>10}  {lv.group.factors.to_list()}")
    return rep, text


def cmd_order_mod(args):
    k = order_mod(args.A, args.d)
    return _report("order_mod", d=args.d, k=k), [f"order of A modulo {args.d}: {k}"]


def cmd_cofinality(args):
    r = cofinality_check(args.A, args.d_max, args.k_max)
    text = [f"d <= {args.d_max}: " + ", ".join(f"{d}:{k}" for d, k, _, _ in r.moduli)]
    text.append(f"all containments verified: {str(r.all_verified).lower()}")
    return r.to_json(), text


def cmd_induced_psi(args):
    if args.C is not None:
        tc = induced_conjugacy(args.C, args.A, args.B, args.chain)
        text = [f"induced maps verified on chain {args.chain}: {str(tc.verified).lower()}"]
        return tc.to_json(), text
    res = search_truncated_conjugacy(args.A, args.B, args.chain, args.cap)
    text = [f"search on chain {args.chain}: {res.status}" + (f" at k = {res.at_k}" if res.at_k else "")]
    return res.to_json(), text


# ---------------------------------------------------------------- parser


def _add_A(p, B=False):
    p.add_argument("-A", required=True, metavar="FILE", help="matrix A (text or JSON)")
    if B:
        p.add_argument("-B", required=True, metavar="FILE", help="matrix B (text or JSON)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="toral",
        description="Exact Bowen-Franks invariants and conjugacy tests for integer matrices.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--json", action="store_true", help="print a JSON report")
    sub = parser.add_subparsers(dest="verb", required=True, metavar="VERB")

    def verb(name, handler, help_):
        p = sub.add_parser(name, help=help_, description=help_)
        p.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="print a JSON report")
        p.set_defaults(handler=handler)
        return p

    p = verb("bf", cmd_bf, "invariant factors of Z^n / Z^n g(A)")
    _add_A(p)
    p.add_argument("-k", type=int, default=1, help="use g = t^k - 1 (default 1)")
    p.add_argument("--poly", help='arbitrary g: "1 -3 1" ascending or "poly:t^2-3t+1"')

    p = verb("per", cmd_per, "number of k-periodic points |det(A^k - I)|")
    _add_A(p)
    p.add_argument("-k", type=int, required=True)

    p = verb("points", cmd_points, "list the k-periodic points on the torus")
    _add_A(p)
    p.add_argument("-k", type=int, required=True)
    p.add_argument("--cap", type=int, default=DEFAULT_POINT_CAP, help="enumeration cap (default %(default)s)")

    p = verb("hyperbolic", cmd_hyperbolic, "test for eigenvalues of modulus 1")
    _add_A(p)

    p = verb("similar", cmd_similar, "similarity over Q")
    _add_A(p, B=True)

    p = verb("snf", cmd_snf, "Smith normal form with transforms")
    _add_A(p)

    p = verb("charpoly", cmd_charpoly, "characteristic and minimal polynomials")
    _add_A(p)

    p = verb("strong-bf", cmd_strong_bf, "compare BF_k(A) and BF_k(B) for k = 1..max-k")
    _add_A(p, B=True)
    p.add_argument("--max-k", type=int, default=DEFAULT_MAX_K, help="default %(default)s")
    p.add_argument("--level", choices=("group", "module"), default="module", help="default %(default)s")
    p.add_argument("--cap", type=int, default=DEFAULT_MODULE_CAP, help="module search cap (default %(default)s)")

    p = verb("ideal", cmd_ideal, "the ideal I_A of an irreducible A")
    _add_A(p)
    p.add_argument("--column", type=int, default=None, help="adjugate column (default: first nonzero)")

    p = verb("weak-equiv", cmd_weak_equiv, "weak equivalence of I_A and I_B")
    _add_A(p, B=True)

    p = verb("ideal-equiv", cmd_ideal_equiv, "search gamma with gamma I_A = I_B")
    _add_A(p, B=True)
    p.add_argument("--bound", type=int, default=DEFAULT_IDEAL_BOUND, help="default %(default)s")

    p = verb("cyclic", cmd_cyclic, "does some xi make xi, xi A, ... a basis of Z^n")
    _add_A(p)
    p.add_argument("--bound", type=int, default=DEFAULT_IDEAL_BOUND, help="default %(default)s")
    p.add_argument("--method", choices=("direct", "ideal", "both"), default="direct", help="default %(default)s")

    p = verb("conjugate", cmd_conjugate, "search C in GL_n(Z) with AC = CB")
    _add_A(p, B=True)
    p.add_argument("--bound", type=int, default=DEFAULT_IDEAL_BOUND, help="default %(default)s")

    p = verb("chain-report", cmd_chain_report, "equivalence chain for irreducible similar hyperbolic A, B")
    _add_A(p, B=True)
    p.add_argument("--max-k", type=int, default=DEFAULT_MAX_K, help="cross-check depth (default %(default)s)")
    p.add_argument("--cap", type=int, default=DEFAULT_MODULE_CAP, help="default %(default)s")

    p = verb("tower", cmd_tower, "quotient tower over a divisor chain")
    _add_A(p)
    p.add_argument("--chain", default="1,2,4", help="comma-separated divisor chain (default %(default)s)")
    p.add_argument("--cap", type=int, default=DEFAULT_ENUM_CAP, help="exhaustive-check cap (default %(default)s)")

    p = verb("order-mod", cmd_order_mod, "least k with A^k = I mod d")
    _add_A(p)
    p.add_argument("-d", type=int, required=True, help="modulus")

    p = verb("cofinality", cmd_cofinality, "containment checks N_k in dZ^n and N_k1k2 in N_k1 & N_k2")
    _add_A(p)
    p.add_argument("--d-max", type=int, default=10, help="default %(default)s")
    p.add_argument("--k-max", type=int, default=24, help="default %(default)s")

    p = verb("induced-psi", cmd_induced_psi, "level maps [m] -> [mC], or a search when -C is omitted")
    _add_A(p, B=True)
    p.add_argument("-C", metavar="FILE", help="conjugator with AC = CB")
    p.add_argument("--chain", default="1,2,4", help="comma-separated divisor chain (default %(default)s)")
    p.add_argument("--cap", type=int, default=DEFAULT_MODULE_CAP, help="default %(default)s")
    return parser


def _load_matrices(args) -> None:
    for name in ("A", "B", "C"):
        path = getattr(args, name, None)
        if isinstance(path, str):
            setattr(args, name, read_matrix(path))
    if isinstance(getattr(args, "chain", None), str):
        args.chain = DivisorChain.parse(args.chain)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and 1
    try:
        _load_matrices(args)
        rep, text = args.handler(args)
    except PreconditionError as exc:
        print(f"toral: precondition failed [{exc.code}]: {exc}", file=sys.stderr)
        return 2
    except (ParseError, OSError) as exc:
        print(f"toral: input error: {exc}", file=sys.stderr)
        return 1
    except ToralError as exc:
        print(f"toral: {exc}", file=sys.stderr)
        return 1
    if args.json:
        print(json.dumps(rep, indent=2, sort_keys=True))
    else:
        print("\n".join(text))
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
