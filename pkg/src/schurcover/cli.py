"""Command line: ``schurcover {multiplier,cover,tower,surface,verify}``.

Reports go to standard output as ``key: value`` lines, diagnostics to
standard error.  Exit status 0 on success, 1 when a checked invariant
fails, 2 for invalid input or a refused (capped) computation.
"""

from __future__ import annotations

import argparse
import shlex
import sys

from .cocycles import multiplier_part
from .formats import (
    InputDocument,
    InputError,
    Report,
    element_list,
    load_document,
    split_elements,
)
from .groups import FiniteGroup, build_group
from .hopf import (
    DEFAULT_TOWER_THRESHOLD,
    HopfError,
    multiplier_from_cover,
    order_formula,
    periodic_cover,
    schur_predicate,
    tower,
)
from .oracle import H2_CAP, OracleCapExceeded, bar_h2
from .presentations import (
    cayley_presentation,
    generating_system,
    signature_of,
    standard_presentation,
)
from .topology import SurfaceError, curvature_class, export, surface_complex
from .verify import SUITES, run_suite

EXIT_OK, EXIT_INVARIANT, EXIT_INPUT = 0, 1, 2
COCYCLE_CAP = 24


def _group_from_args(args) -> tuple[FiniteGroup, InputDocument | None]:
    if getattr(args, "input", None):
        doc = load_document(args.input)
        return doc.group, doc
    if not args.group:
        raise InputError("give --group or --input")
    return build_group(args.group), None


def _describe_group(r: Report, G: FiniteGroup, doc: InputDocument | None = None) -> None:
    r.add("group", doc.group_description if doc is not None else G.name)
    r.add("order", G.order)


def _describe_presentation(r: Report, P) -> None:
    r.add("periods", P.periods)
    r.add("images", element_list(P.group, P.images))
    r.add("locally_unitary", P.locally_unitary)


# ---------------------------------------------------------------------------
# commands


def cmd_multiplier(args) -> Report:
    G, doc = _group_from_args(args)
    r = Report(args.echo)
    _describe_group(r, G, doc)
    methods = ["hopf", "bar", "cocycle"] if args.method == "all" else [args.method]
    cap = args.cap or (doc.options.get("oracle_cap") if doc else None)
    results = {}
    for m in methods:
        if m == "hopf":
            if doc is not None and doc.periods is not None:
                P = doc.presentation()
                r.add("presentation", "document")
            elif args.presentation == "cayley":
                P = cayley_presentation(G)
                r.add("presentation", "cayley")
            else:
                P = standard_presentation(G)
                r.add("presentation", "auto")
            P.require_surjective()
            _describe_presentation(r, P)
            E = periodic_cover(P)
            results[m] = multiplier_from_cover(E)
            f = order_formula(E, results[m])
            r.check("order_formula", f.holds, f"{f.cover_order} = {f.free_abelian_order}*{f.derived_order}*{f.multiplier_order}")
        elif m == "bar":
            results[m] = bar_h2(G, cap=cap or H2_CAP)
        else:
            if G.order > (cap or COCYCLE_CAP):
                raise OracleCapExceeded(f"cocycle method refuses groups of order {G.order} > {cap or COCYCLE_CAP}")
            N = args.modulus or (doc.options.get("modulus") if doc else None)
            results[m] = multiplier_part(G, N)
            r.add("modulus", N or G.order * G.exponent)
        r.add(f"multiplier[{m}]", results[m])
    values = list(results.values())
    r.add("multiplier", values[0])
    if len(values) > 1:
        r.check("methods_agree", all(v == values[0] for v in values))
    return r


def _presentation_doc(path) -> tuple[InputDocument, object]:
    doc = load_document(path)
    P = doc.presentation()
    P.require_surjective()
    return doc, P


def cmd_cover(args) -> Report:
    doc, P = _presentation_doc(args.file)
    G = P.group
    r = Report(args.echo)
    _describe_group(r, G, doc)
    _describe_presentation(r, P)
    E = periodic_cover(P)
    H2 = multiplier_from_cover(E)
    r.add("cover_order", E.order)
    r.add("kernel", E.kernel)
    r.add("exponent", E.exponent)
    r.add("multiplier", H2)
    r.add("schur", schur_predicate(P, E.schreier))
    f = order_formula(E, H2)
    r.check("order_formula", f.holds, f"{f.cover_order} = {f.free_abelian_order}*{f.derived_order}*{f.multiplier_order}")
    r.check("schur_predicate_matches_kernel", schur_predicate(P, E.schreier) == (E.kernel.order == H2.order))
    return r


def cmd_tower(args) -> Report:
    doc, P = _presentation_doc(args.file)
    steps = args.steps or int(doc.options.get("tower_steps", 2))
    threshold = args.threshold or int(doc.options.get("threshold", DEFAULT_TOWER_THRESHOLD))
    if steps < 1:
        raise InputError("tower needs at least one step")
    r = Report(args.echo)
    _describe_group(r, P.group, doc)
    r.add("steps", steps)
    _describe_presentation(r, P)
    tw = tower(P, steps, threshold)
    r.add("threshold", threshold)
    r.add("truncated", tw.truncated)
    r.add("orders", tw.orders)
    for j, step in enumerate(tw.steps, start=1):
        r.add(f"step{j}.order", step.order)
        r.add(f"step{j}.kernel", step.kernel)
        r.add(f"step{j}.base_multiplier", step.base_multiplier)
        if j > 1:
            r.check(f"step{j}.schur", step.kernel == step.base_multiplier)
    growth = [b > a for a, b in zip(tw.orders, tw.orders[1:])]
    r.add("growth", growth)
    r.add("stationary", not any(growth))
    return r


def cmd_surface(args) -> Report:
    doc = None
    if args.input:
        doc = load_document(args.input)
        G = doc.group
        if doc.generators is None:
            raise InputError("document has no [generators] section")
        X = doc.generators
    else:
        if not args.group or args.gens is None:
            raise InputError("give --group and --gens, or --input")
        G = build_group(args.group)
        X = [G.element(t) for t in split_elements(args.gens)]
    gs = generating_system(G, X)
    r = Report(args.echo)
    _describe_group(r, G, doc)
    r.add("generators", element_list(G, X))
    policy = args.policy or (doc.options.get("policy") if doc else None) or "bfs"
    S = surface_complex(G, X, policy=policy)
    sig = signature_of(gs).periods
    c = curvature_class(sig, G.order)
    r.add("signature", sig)
    r.add("policy", policy)
    r.add("vertices", S.counts[0])
    r.add("edges", S.counts[1])
    r.add("faces", S.counts[2])
    r.add("euler_characteristic", S.euler_characteristic)
    r.add("genus", S.genus)
    r.add("curvature", c.kind)
    r.check("certificate", S.certificate.ok)
    r.check("euler_formula", S.euler_characteristic == c.euler_characteristic)
    if args.export:
        r.attachment = export(S, args.export)
    return r


def cmd_verify(args) -> Report:
    if args.suite not in SUITES:
        raise InputError(f"unknown suite {args.suite!r}; choose from {', '.join(SUITES)}")
    r = Report(args.echo)
    params = {}
    if args.limit is not None:
        if args.suite != "duality":
            raise InputError("--limit applies to the duality suite only")
        params["limit"] = args.limit
    run_suite(args.suite, r, **params)
    r.add("result", "PASS" if r.ok else "FAIL")
    return r


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="schurcover", description="Schur multipliers, covers and surfaces of finite groups.")
    sub = p.add_subparsers(dest="command", required=True)

    m = sub.add_parser("multiplier", help="Schur multiplier of a finite group")
    m.add_argument("--group", help="named group such as C2xC2, D8, Q8, A4")
    m.add_argument("--input", help="INI document with a [group] section")
    m.add_argument("--method", choices=["hopf", "bar", "cocycle", "all"], default="hopf")
    m.add_argument("--presentation", choices=["auto", "cayley"], default="auto")
    m.add_argument("--modulus", type=int, help="coefficient modulus for the cocycle method")
    m.add_argument("--cap", type=int, help="order cap for the bar and cocycle methods")
    m.set_defaults(func=cmd_multiplier)

    c = sub.add_parser("cover", help="periodic cover of a presentation document")
    c.add_argument("file")
    c.set_defaults(func=cmd_cover)

    t = sub.add_parser("tower", help="tower of iterated periodic covers")
    t.add_argument("file")
    t.add_argument("--steps", type=int)
    t.add_argument("--threshold", type=int)
    t.set_defaults(func=cmd_tower)

    s = sub.add_parser("surface", help="closed surface of a generating system")
    s.add_argument("--group")
    s.add_argument("--gens", help="comma list of elements, e.g. a,b or (1,2,3),(1,2,4)")
    s.add_argument("--input")
    s.add_argument("--policy", choices=["bfs", "dfs"], help="transversal policy (default bfs)")
    s.add_argument("--export", choices=["dot", "cell2"])
    s.set_defaults(func=cmd_surface)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("--suite", required=True, help=", ".join(SUITES))
    v.add_argument("--limit", type=int, help="largest group order for the duality suite")
    v.set_defaults(func=cmd_verify)
    return p


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(argv)
    args.echo = shlex.join(["schurcover", *argv])
    try:
        report = args.func(args)
    except (HopfError, SurfaceError) as exc:
        print(f"error: invariant violated: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except (InputError, OracleCapExceeded, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    sys.stdout.write(report.render())
    return EXIT_OK if report.ok else EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
