"""Named verification suites; each writes one check line per invariant instance."""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Callable

import numpy as np

from .cocycles import (
    all_cover_exponents,
    locally_unitary_exponents,
    multiplier_part,
    standard_map,
    unitary_exponent,
    unitary_universality,
)
from .duality import (
    abelian_groups,
    common_kernel,
    double_dual_is_isomorphism,
    generates_dual,
    perp,
    quotient_by_perp,
    subgroups,
)
from .formats import Report
from .groups import FiniteGroup, build_group, closure, find_isomorphism
from .hopf import (
    burnside_quotient,
    multiplier_from_cover,
    order_formula,
    periodic_cover,
    tower,
)
from .linalg import AbelianGroup, subgroup_structure
from .oracle import bar_h2
from .presentations import cayley_presentation, make_presentation, standard_presentation
from .topology import complex_homology, covering_map, surface_complex

CORPUS = [
    "C1", "C2", "C3", "C4", "C5", "C6", "C7", "C8",
    "C2xC2", "C2xC4", "C2xC2xC2", "S3", "D8", "Q8", "D10", "D12", "A4",
]  # fmt: skip


def corpus(max_order: int | None = None) -> list[FiniteGroup]:
    groups = [build_group(s) for s in CORPUS]
    return [G for G in groups if max_order is None or G.order <= max_order]


def oracle_presentations(G: FiniteGroup):
    """Standard, periods doubled, and the Cayley presentation for ``|G| <= 8``."""
    P = standard_presentation(G)
    out = [("standard", P), ("doubled", make_presentation([2 * m for m in P.periods], G, P.images))]
    if G.order <= 8:
        out.append(("cayley", cayley_presentation(G)))
    return out


def generating_systems(G: FiniteGroup, max_rank: int):
    """Every ordered tuple of at most ``max_rank`` elements that generates ``G``."""
    for d in range(max_rank + 1):
        for X in itertools.product(range(G.order), repeat=d):
            if closure(G, X).size == G.order:
                yield list(X)


def surface_is_certified(G: FiniteGroup, X) -> tuple[bool, str]:
    S = surface_complex(G, X)
    H = complex_homology(S)
    chi = G.order * (sum(Fraction(1, m) for m in S.signature) - len(X) + 1)
    Z = AbelianGroup.from_orders([], free_rank=1)
    ok = (
        S.certificate.ok
        and S.euler_characteristic == chi
        and H == [Z, AbelianGroup.from_orders([], free_rank=2 * S.genus), Z]
    )
    return ok, f"signature {S.signature} chi {S.euler_characteristic}"


def extension_projection(P):
    E = periodic_cover(P)
    return E.to_group(), list(E.generator_images), P.group, list(P.images), E.project(np.arange(E.order))


# ---------------------------------------------------------------------------
# suites


def suite_hopf_oracle(r: Report) -> None:
    for G in corpus():
        H2 = bar_h2(G)
        for name, P in oracle_presentations(G):
            E = periodic_cover(P)
            got = multiplier_from_cover(E)
            r.check(f"hopf[{G.name}/{name}]", got == H2, str(got))
            f = order_formula(E, got)
            r.check(
                f"order_formula[{G.name}/{name}]",
                f.holds,
                f"{f.cover_order} = {f.free_abelian_order}*{f.derived_order}*{f.multiplier_order}",
            )


def suite_cocycle_oracle(r: Report) -> None:
    for G in corpus():
        got = multiplier_part(G)
        r.check(f"cocycle[{G.name}]", got == bar_h2(G), str(got))


def suite_surface_certificates(r: Report, max_rank: int = 2) -> None:
    for G in corpus():
        count = bad = 0
        for X in generating_systems(G, max_rank):
            ok, _ = surface_is_certified(G, X)
            count += 1
            bad += not ok
        r.check(f"surfaces[{G.name}]", not bad, f"{count} systems")
    for group_name, gens, chi in [("C2xC2", ["a", "b"], 2), ("A4", ["(1,2,3)", "(1,2,4)"], 2),
                            ("A5", ["(1,2)(3,4)", "(1,3,5)"], 2), ("C7", ["1", "2"], -4)]:  # fmt: skip
        G = build_group(group_name)
        X = [G.element(g) for g in gens]
        ok, detail = surface_is_certified(G, X)
        r.check(f"surface[{group_name}]", ok and surface_complex(G, X).euler_characteristic == chi, detail)


def suite_local_homeomorphism(r: Report) -> None:
    for G in corpus(max_order=8):
        P = standard_presentation(G)
        for k in range(P.rank + 1):
            periods = [m * (2 if i < k else 1) for i, m in enumerate(P.periods)]
            Q = make_presentation(periods, G, P.images)
            cov = covering_map(*extension_projection(Q))
            r.check(
                f"local_homeo[{G.name}{tuple(periods)}]",
                cov.is_local_homeomorphism == Q.locally_unitary and cov.commutes and cov.orbit_quotient,
                f"predicate {str(cov.is_local_homeomorphism).lower()}",
            )


def suite_towers(r: Report) -> None:
    V4 = build_group("C2xC2")
    S3 = build_group("S3")
    bases = [("C2xC2", make_presentation([2, 2], V4, ["a", "b"])),
             ("S3", make_presentation([2, 2], S3, ["(1,2)", "(2,3)"]))]  # fmt: skip
    for name, P in bases:
        tw = tower(P, 2)
        r.check(f"tower_growth[{name}]", all(a < b for a, b in zip(tw.orders, tw.orders[1:])), str(tw.orders))
        for j, step in enumerate(tw.steps[1:], start=1):
            H2 = bar_h2(tw.steps[j - 1].cover.to_group())
            r.check(f"tower_schur_step[{name}/{j}]", step.kernel == H2, str(step.kernel))
    for n in (1, 4, 6):
        G = build_group(f"C{n}")
        tw = tower(make_presentation([n], G, [1 if n > 1 else 0]), 3)
        r.check(f"tower_stationary[C{n}]", tw.orders == [n] * 3, str(tw.orders))


def suite_duality(r: Report, limit: int = 64) -> None:
    for A in abelian_groups(limit):
        ok = double_dual_is_isomorphism(A)
        count = 0
        for gens in subgroups(A):
            count += 1
            B = subgroup_structure(A, [list(g) for g in gens]) if gens else AbelianGroup()
            ann = perp(A, gens)
            chars = ann.characters()
            ok &= ann.order * B.order == A.order
            ok &= quotient_by_perp(A, gens) == B
            ok &= common_kernel(A, chars).order == B.order
            ok &= generates_dual(A, chars) == (B.order == 1)
        r.check(f"duality[{A}]", ok, f"{count} subgroups")


def suite_exponents(r: Report) -> None:
    for G in corpus(max_order=12):
        ue = unitary_exponent(G)
        lu = set(locally_unitary_exponents(G))
        r.check(f"locally_unitary_exponent[{G.name}]", lu == {ue}, f"exp {ue}")
        r.check(f"minimal_exponent[{G.name}]", min(all_cover_exponents(G)) == ue)


def suite_universality(r: Report) -> None:
    for G in corpus(max_order=8):
        u = unitary_universality(G)
        r.check(f"unitary_universality[{G.name}]", u.isomorphic, f"order {u.cayley.order}")


def suite_witness(r: Report) -> None:
    V4 = build_group("C2xC2")
    E = periodic_cover(make_presentation([2, 2], V4, ["a", "b"]))
    Eg = E.to_group()
    r.check("d8_witness_order", E.order == 8 and not Eg.is_abelian())
    r.check("d8_witness_isomorphic", find_isomorphism(Eg, build_group("D8")).mapping is not None)
    r.check("d8_witness_standard_map", standard_map(E).is_schur_cover)
    Q = burnside_quotient(E, 2)
    r.check("burnside_e2", find_isomorphism(Q, V4).mapping is not None)
    r.check("burnside_exp", burnside_quotient(E, E.exponent).order == E.order)


SUITES: dict[str, Callable[..., None]] = {
    "hopf-oracle": suite_hopf_oracle,
    "cocycle-oracle": suite_cocycle_oracle,
    "surface-certificates": suite_surface_certificates,
    "local-homeomorphism": suite_local_homeomorphism,
    "towers": suite_towers,
    "duality": suite_duality,
    "exponents": suite_exponents,
    "universality": suite_universality,
    "witness": suite_witness,
}


def run_suite(name: str, report: Report, **params) -> Report:
    SUITES[name](report, **params)
    return report
