"""End-to-end acceptance checks, one test per criterion.

Each test prints ``criterion N PASS|FAIL: title`` and the same lines are
collected in the pytest terminal summary.
"""

import os
import subprocess
import sys
import time

import numpy as np
import pytest

from schurcover.cocycles import (
    complement_choices,
    locally_unitary_exponents,
    schur_construction,
    standard_map,
    unitary_cover,
    unitary_exponent,
    unitary_universality,
)
from schurcover.formats import Report
from schurcover.groups import build_group, find_isomorphism
from schurcover.hopf import (
    burnside_quotient,
    multiplier_from_cover,
    order_formula,
    periodic_cover,
    schur_predicate,
    smooth_central_extension,
    tower,
)
from schurcover.oracle import bar_h2
from schurcover.presentations import (
    cayley_presentation,
    make_presentation,
    standard_presentation,
)
from schurcover.topology import covering_map, surface_complex, surface_covering
from schurcover.verify import (
    corpus,
    extension_projection,
    generating_systems,
    oracle_presentations,
    suite_duality,
    surface_is_certified,
)


@pytest.fixture(scope="module")
def oracle_covers():
    """``(group, presentation name, cover, Hopf multiplier, bar multiplier)`` over the corpus."""
    start = time.perf_counter()
    rows = []
    for G in corpus():
        H2 = bar_h2(G)
        for name, P in oracle_presentations(G):
            E = periodic_cover(P)
            rows.append((G, name, E, multiplier_from_cover(E), H2))
    return rows, time.perf_counter() - start


def test_oracle_agreement(oracle_covers, acceptance):
    rows, elapsed = oracle_covers
    groups = {G.name for G, *_ in rows}
    names = {}
    for G, name, *_ in rows:
        names.setdefault(G.name, set()).add(name)
    enough = all(len(v) >= 2 for v in names.values())
    cayley = all("cayley" in names[G.name] for G, *_ in rows if G.order <= 8)
    bad = [f"{G.name}/{n}" for G, n, _, got, want in rows if got != want]
    ok = len(groups) == 17 and enough and cayley and not bad and elapsed < 120
    acceptance(1, "Hopf multiplier equals bar-resolution H2 on the corpus", ok,
               f"{len(rows)} covers of {len(groups)} groups in {elapsed:.1f}s, mismatches {bad}")


def test_order_formula(oracle_covers, acceptance):
    rows, _ = oracle_covers
    bad = [f"{G.name}/{n}" for G, n, E, got, _ in rows if not order_formula(E, got).holds]
    acceptance(2, "|E| = |F_ab| |G'| |H2| for every oracle cover", not bad, f"{len(rows)} covers, failures {bad}")


def test_d8_witness(acceptance):
    V4 = build_group("C2xC2")
    P = make_presentation([2, 2], V4, ["a", "b"])
    E = periodic_cover(P)
    Eg = E.to_group()
    checks = {
        "order 8": E.order == 8,
        "nonabelian": not Eg.is_abelian(),
        "isomorphic to D8": find_isomorphism(Eg, build_group("D8")).mapping is not None,
        "standard map bijective": standard_map(E).is_schur_cover,
        "relations in derived subgroup": schur_predicate(P),
    }
    failed = [k for k, v in checks.items() if not v]
    acceptance(3, "cover of C2xC2 from Z2*Z2 is the Schur cover D8", not failed, f"failed {failed}")


def test_minimal_exponent(acceptance):
    bad = []
    counted = 0
    for G in corpus(max_order=12):
        ue = unitary_exponent(G)
        lu = locally_unitary_exponents(G, 3)
        counted += len(lu)
        if set(lu) != {ue}:
            bad.append(f"{G.name}: locally unitary {sorted(set(lu))} vs {ue}")
        P = standard_presentation(G)
        others = [unitary_cover(G).exponent, periodic_cover(cayley_presentation(G)).exponent]
        others += [schur_construction(G, basis).exponent for basis in complement_choices(G)]
        others.append(periodic_cover(make_presentation([2 * m for m in P.periods], G, P.images)).exponent)
        if min(others) < ue:
            bad.append(f"{G.name}: cover exponent {min(others)} below {ue}")
    acceptance(4, "locally unitary covers reach the minimal cover exponent", not bad,
               f"{counted} locally unitary presentations, failures {bad}")


def test_unitary_universality(acceptance):
    # every group of order at most 8 up to isomorphism
    names = ["C1", "C2", "C3", "C4", "C2xC2", "C5", "C6", "S3", "C7",
             "C8", "C2xC4", "C2xC2xC2", "D8", "Q8"]  # fmt: skip
    bad = [n for n in names if not unitary_universality(build_group(n)).isomorphic]
    acceptance(5, "unitary cover is isomorphic to the Cayley cover for |G| <= 8", not bad,
               f"{len(names)} groups, failures {bad}")


def test_surface_certificates(acceptance):
    count = 0
    bad = []
    for G in corpus():
        for X in generating_systems(G, 3):
            count += 1
            if not surface_is_certified(G, X)[0]:
                bad.append(f"{G.name}{tuple(X)}")
    A5 = build_group("A5")
    for X in generating_systems(A5, 2):
        count += 1
        if not surface_is_certified(A5, X)[0]:
            bad.append(f"A5{tuple(X)}")

    def surface(group_name, gens):
        G = build_group(group_name)
        return surface_complex(G, [G.element(g) for g in gens])

    S = surface("C2xC2", ["a", "b"])
    specific = {
        "V4 (2,2,2)": S.signature == (2, 2, 2) and S.counts == (4, 8, 6) and S.euler_characteristic == 2,
        "A4 (3,3,2)": surface("A4", ["(1,2,3)", "(1,2,4)"]).euler_characteristic == 2,
        "A5 (2,3,5)": surface("A5", ["(1,2)(3,4)", "(1,3,5)"]).signature == (2, 3, 5)
        and surface("A5", ["(1,2)(3,4)", "(1,3,5)"]).euler_characteristic == 2,
        "C7 (7,7,7)": surface("C7", ["1", "2"]).euler_characteristic == -4 and surface("C7", ["1", "2"]).genus == 3,
    }
    bad += [k for k, v in specific.items() if not v]
    acceptance(6, "every generating system yields a certified closed surface", not bad,
               f"{count} systems, failures {bad[:5]}")


def test_local_homeomorphism(acceptance):
    total = unitary = 0
    bad = []
    for G in corpus(max_order=12):
        P = standard_presentation(G)
        for k in range(P.rank + 1):
            periods = [m * (2 if i < k else 1) for i, m in enumerate(P.periods)]
            Q = make_presentation(periods, G, P.images)
            cov = covering_map(*extension_projection(Q))
            total += 1
            unitary += Q.locally_unitary
            if cov.is_local_homeomorphism != Q.locally_unitary:
                bad.append(f"{G.name}{tuple(periods)}")
    ok = total >= 20 and 0 < unitary < total and not bad
    acceptance(7, "local homeomorphism exactly when the extension preserves orders", ok,
               f"{total} extensions, {unitary} locally unitary, discrepancies {bad}")


def _smooth_inputs():
    out = [(G.name, standard_presentation(G)) for G in corpus() if G.order > 1]
    V4, A4, C7 = build_group("C2xC2"), build_group("A4"), build_group("C7")
    out += [
        ("C2xC2", make_presentation([2, 2], V4, ["a", "b"])),
        ("A4", make_presentation([3, 3], A4, ["(1,2,3)", "(1,2,4)"])),
        ("C7", make_presentation([7, 7], C7, [1, 2])),
    ]
    return out


def test_smooth_coverings(acceptance):
    computed = matched = 0
    bad = []
    for name, P in _smooth_inputs():
        D = smooth_central_extension(P).extension
        if D is None:
            continue
        computed += 1
        sc = surface_covering(D.to_group(), list(D.generator_images), P.group, list(P.images),
                              D.project(np.arange(D.order)))
        ok = sc.covering.commutes
        if sc.signatures_match:
            matched += 1
            ok &= sc.riemann_hurwitz
        if not ok:
            bad.append(f"{name}{tuple(P.periods)}")
    ok = computed > 0 and matched > 0 and not bad
    acceptance(8, "smooth extensions give commuting surface coverings with chi multiplied by the degree", ok,
               f"{computed} extensions, {matched} with equal signatures, failures {bad}")


def test_towers(acceptance):
    V4, S3 = build_group("C2xC2"), build_group("S3")
    bases = {
        "C2xC2 via Z2*Z2": make_presentation([2, 2], V4, ["a", "b"]),
        "S3 via Z2*Z2": make_presentation([2, 2], S3, ["(1,2)", "(2,3)"]),
    }
    bad = []
    orders = {}
    for name, P in bases.items():
        tw = tower(P, 2)
        orders[name] = tw.orders
        if not all(a < b for a, b in zip(tw.orders, tw.orders[1:])):
            bad.append(f"{name} not growing")
        for lower, upper in zip(tw.steps, tw.steps[1:]):
            if upper.kernel.order != bar_h2(lower.cover.to_group()).order:
                bad.append(f"{name} step kernel")
    for n in (1, 2, 4, 6):
        G = build_group(f"C{n}")
        tw = tower(make_presentation([n], G, [1 if n > 1 else 0]), 3)
        if tw.orders != [n] * 3:
            bad.append(f"C{n} not stationary")
    acceptance(9, "towers grow strictly with Schur steps; cyclic towers are stationary", not bad,
               f"orders {orders}, failures {bad}")


def test_duality(acceptance):
    r = Report("duality")
    suite_duality(r, limit=64)
    checked = len(r.lines) - 2
    acceptance(10, "character duality for every abelian group of order <= 64", r.ok and checked > 0,
               f"{checked} groups, failures {r.failures[:5]}")


def test_burnside_quotients(acceptance):
    V4 = build_group("C2xC2")
    E = periodic_cover(make_presentation([2, 2], V4, ["a", "b"]))
    q2 = burnside_quotient(E, 2)
    qe = burnside_quotient(E, E.exponent)
    ok = find_isomorphism(q2, V4).mapping is not None and find_isomorphism(qe, E.to_group()).mapping is not None
    acceptance(11, "Burnside quotients of D8 at exponents 2 and 4", ok, f"orders {q2.order}, {qe.order}")


COVER_DOC = """[group]
kind = named
name = C2xC2

[presentation]
periods = 2, 2
images = a, b
"""

TOWER_DOC = """[group]
kind = perm
generators = (1,2), (2,3)

[presentation]
periods = 2, 2
images = (1,2), (2,3)

[options]
tower_steps = 2
"""


def test_determinism(tmp_path, acceptance):
    cover = tmp_path / "cover.ini"
    cover.write_text(COVER_DOC)
    towerdoc = tmp_path / "tower.ini"
    towerdoc.write_text(TOWER_DOC)
    commands = [
        ["multiplier", "--group", "D8", "--method", "all"],
        ["cover", str(cover)],
        ["tower", str(towerdoc)],
        ["surface", "--group", "A4", "--gens", "(1,2,3),(1,2,4)", "--export", "cell2"],
        ["verify", "--suite", "witness"],
    ]
    bad = []
    for args in commands:
        outputs = []
        for seed in ("0", "12345"):
            env = dict(os.environ, PYTHONHASHSEED=seed)
            run = subprocess.run([sys.executable, "-m", "schurcover.cli", *args],
                                 capture_output=True, env=env, check=False)
            outputs.append((run.returncode, run.stdout))
        if outputs[0] != outputs[1] or outputs[0][0] != 0 or not outputs[0][1]:
            bad.append(args[0])
    acceptance(12, "repeated runs produce byte-identical reports", not bad,
               f"{len(commands)} commands, differing {bad}")
