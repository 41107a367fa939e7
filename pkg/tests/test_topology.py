import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from schurcover.groups import (
    GroupError,
    alternating_group,
    build_group,
    closure,
    cyclic_group,
    trivial_group,
)
from schurcover.hopf import periodic_cover, smooth_central_extension, tower
from schurcover.linalg import AbelianGroup
from schurcover.presentations import make_presentation, standard_presentation
from schurcover.topology import (
    SurfaceError,
    cayley_complex,
    certify,
    complex_homology,
    covering_map,
    curvature_class,
    export,
    parse_cell2,
    same_shape,
    surface_complex,
    surface_covering,
)

V4 = build_group("C2xC2")
Z = AbelianGroup.from_orders([], free_rank=1)


def free(r):
    return AbelianGroup.from_orders([], free_rank=r)


def cover_data(P):
    E = periodic_cover(P)
    return E.to_group(), list(E.generator_images), P.group, list(P.images), E.project(np.arange(E.order))


# Cayley complexes -----------------------------------------------------------


def test_cayley_complex_z4():
    C = cayley_complex(cyclic_group(4), [1])
    assert C.counts == (4, 4, 1)
    assert C.boundary_composite_zero()
    assert complex_homology(C) == [Z, free(0), free(0)]


def test_cayley_complex_v4():
    C = cayley_complex(V4, [V4.element("a"), V4.element("b")])
    assert C.counts == (4, 8, 4)
    assert C.face_sizes() == {2: 4}
    H0, H1, H2 = complex_homology(C)
    assert H0 == Z and H1.free_rank == 1 and H2.free_rank == 0


def test_cayley_complex_trivial():
    C = cayley_complex(trivial_group(), [])
    assert C.counts == (1, 0, 0)


def test_cayley_complex_rejects_non_generating():
    with pytest.raises(GroupError):
        cayley_complex(V4, [V4.element("a")])


@pytest.mark.parametrize("group_name", ["S3", "D8", "Q8", "A4"])
def test_cayley_face_families(group_name):
    G = build_group(group_name)
    X = standard_presentation(G).images
    C = cayley_complex(G, X)
    orders = G.element_orders()
    assert len(C.edges) == G.order * len(X)
    for i, g in enumerate(X):
        m = int(orders[g])
        fam = [f for f, k in zip(C.faces, C.face_families) if k == i]
        assert len(fam) == G.order // m and all(len(f) == m for f in fam)
    assert C.boundary_composite_zero()


# surfaces -------------------------------------------------------------------


def test_surface_v4():
    S = surface_complex(V4, [V4.element("a"), V4.element("b")])
    assert S.signature == (2, 2, 2)
    assert S.counts == (4, 8, 6)
    assert S.euler_characteristic == 2 and S.genus == 0
    assert complex_homology(S) == [Z, free(0), Z]


def test_surface_a4():
    A4 = alternating_group(4)
    S = surface_complex(A4, [A4.element("(1,2,3)"), A4.element("(1,2,4)")])
    assert S.signature == (3, 3, 2)
    assert S.euler_characteristic == 2 and S.genus == 0


def test_surface_a5():
    A5 = alternating_group(5)
    S = surface_complex(A5, [A5.element("(1,2)(3,4)"), A5.element("(1,3,5)")])
    assert S.signature == (2, 3, 5)
    assert S.euler_characteristic == 2


def test_surface_z7():
    S = surface_complex(cyclic_group(7), [1, 2])
    assert S.signature == (7, 7, 7)
    assert S.euler_characteristic == -4 and S.genus == 3
    assert complex_homology(S) == [Z, free(6), Z]


def test_surface_cyclic_is_bigon_sphere():
    S = surface_complex(cyclic_group(4), [1])
    assert S.signature == (4, 4)
    assert S.counts == (4, 4, 2)
    assert S.euler_characteristic == 2


def test_surface_trivial_group():
    S = surface_complex(trivial_group(), [])
    assert S.counts == (1, 0, 1) and S.euler_characteristic == 2


@pytest.mark.parametrize("group_name", ["C6", "C2xC4", "S3", "D8", "Q8", "D10"])
def test_all_generating_pairs_give_surfaces(group_name):
    G = build_group(group_name)
    for X in itertools.product(range(G.order), repeat=2):
        if closure(G, X).size != G.order:
            continue
        S = surface_complex(G, list(X))
        assert S.certificate.ok
        assert S.euler_characteristic == S.expected_euler_characteristic
        assert complex_homology(S) == [Z, free(2 * S.genus), Z]


@pytest.mark.parametrize("group_name", ["C2xC2", "S3", "D8", "A4", "C7"])
def test_transversal_independence(group_name):
    G = build_group(group_name)
    X = standard_presentation(G).images
    a = surface_complex(G, X, policy="bfs")
    b = surface_complex(G, X, policy="dfs")
    assert same_shape(a, b)


def test_unknown_policy_rejected():
    with pytest.raises(ValueError):
        surface_complex(V4, [1, 2], policy="random")


def test_tampered_surface_fails_certificate():
    S = surface_complex(V4, [V4.element("a"), V4.element("b")])
    (e, s), *rest = S.faces[0]
    S.faces[0] = tuple([(e, -s)] + rest)
    assert not certify(S).ok


# curvature ------------------------------------------------------------------


@pytest.mark.parametrize(
    "sig,order,chi,genus,kind",
    [
        ((2, 3, 5), 60, 2, 0, "spherical"),
        ((3, 3, 3), 9, 0, 1, "parabolic"),
        ((2, 3, 6), 6, 0, 1, "parabolic"),
        ((2, 2, 2, 2), 4, 0, 1, "parabolic"),
        ((7, 7, 7), 7, -4, 3, "hyperbolic"),
        ((5, 5), 5, 2, 0, "spherical"),
    ],
)
def test_curvature_class(sig, order, chi, genus, kind):
    c = curvature_class(sig, order)
    assert (c.euler_characteristic, c.genus, c.kind) == (chi, genus, kind)


def test_curvature_rejects_incompatible_order():
    with pytest.raises(SurfaceError):
        curvature_class((2, 3, 7), 5)


@given(st.lists(st.integers(1, 12), min_size=2, max_size=5))
@settings(max_examples=100, deadline=None)
def test_curvature_matches_formula(sig):
    from fractions import Fraction
    from math import lcm

    order = 2 * lcm(*sig)
    c = curvature_class(sig, order)
    s = sum(Fraction(1, m) for m in sig) - (len(sig) - 1) + 1
    assert c.euler_characteristic == order * s
    assert c.kind == ("spherical" if s > 0 else "parabolic" if s == 0 else "hyperbolic")


# coverings ------------------------------------------------------------------


def test_d8_over_v4_is_local_homeomorphism():
    cov = covering_map(*cover_data(make_presentation([2, 2], V4, ["a", "b"])))
    assert cov.is_local_homeomorphism and cov.commutes and cov.orbit_quotient
    assert cov.deck_order == 2


def test_z4_over_z2_is_not_local_homeomorphism():
    cov = covering_map(*cover_data(make_presentation([4], cyclic_group(2), [1])))
    assert not cov.is_local_homeomorphism
    assert cov.commutes and cov.orbit_quotient
    assert sorted(set(cov.face_degrees.tolist())) == [2]


@pytest.mark.parametrize("group_name", ["C2xC2", "S3", "D8", "Q8", "C6"])
def test_local_homeomorphism_iff_locally_unitary(group_name):
    G = build_group(group_name)
    P = standard_presentation(G)
    for k in range(P.rank + 1):
        periods = [m * (2 if i < k else 1) for i, m in enumerate(P.periods)]
        Q = make_presentation(periods, G, P.images)
        cov = covering_map(*cover_data(Q))
        assert cov.is_local_homeomorphism == Q.locally_unitary
        assert cov.commutes and cov.orbit_quotient


def test_tower_step_is_local_homeomorphism():
    tw = tower(make_presentation([2, 2], V4, ["a", "b"]), 2)
    E1, E2 = tw.steps[0].cover, tw.steps[1].cover
    cov = covering_map(
        E2.to_group(), list(E2.generator_images), E2.base, list(E1.generator_images), E2.project(np.arange(E2.order))
    )
    assert cov.is_local_homeomorphism


def test_tower_step_surface_covering_is_not_smooth():
    # the product of the generators changes order from E1 to E2, so the signatures differ
    tw = tower(make_presentation([2, 2], V4, ["a", "b"]), 2)
    E1, E2 = tw.steps[0].cover, tw.steps[1].cover
    sc = surface_covering(
        E2.to_group(), list(E2.generator_images), E2.base, list(E1.generator_images), E2.project(np.arange(E2.order))
    )
    assert sc.upper.signature == (2, 2, 8) and sc.lower.signature == (2, 2, 4)
    assert not sc.is_smooth and not sc.signatures_match


@pytest.mark.parametrize(
    "P",
    [
        make_presentation([2, 2], V4, ["a", "b"]),
        make_presentation([7, 7], cyclic_group(7), [1, 2]),
        make_presentation([3, 3], alternating_group(4), ["(1,2,3)", "(1,2,4)"]),
    ],
    ids=["V4", "C7", "A4"],
)
def test_smooth_extension_surface_covering(P):
    D = smooth_central_extension(P).extension
    sc = surface_covering(
        D.to_group(), list(D.generator_images), P.group, list(P.images), D.project(np.arange(D.order))
    )
    assert sc.is_smooth and sc.signatures_match and sc.covering.commutes
    assert sc.upper.euler_characteristic == sc.covering.deck_order * sc.lower.euler_characteristic


def test_non_smooth_surface_covering():
    E, Y, G, X, proj = cover_data(make_presentation([4], cyclic_group(2), [1]))
    sc = surface_covering(E, Y, G, X, proj)
    assert not sc.is_smooth and not sc.signatures_match


# export ---------------------------------------------------------------------


def test_dot_export_trivial():
    doc = export(cayley_complex(trivial_group(), []), "dot")
    assert doc.count("[label=") == 1 and "->" not in doc


def test_cell2_z4_surface():
    doc = export(surface_complex(cyclic_group(4), [1]), "cell2")
    lines = doc.splitlines()
    assert lines[:2] == ["cell2 1", "vertices 4"]
    assert "edges 4" in lines and "faces 2" in lines


@pytest.mark.parametrize("group_name", ["C2xC2", "A4", "C7"])
def test_cell2_round_trip(group_name):
    G = build_group(group_name)
    S = surface_complex(G, standard_presentation(G).images)
    doc = export(S, "cell2")
    back = parse_cell2(doc)
    assert back.counts == S.counts
    assert certify(back).ok
    assert export(back, "cell2") == doc


def test_export_rejects_unknown_format():
    with pytest.raises(ValueError):
        export(cayley_complex(V4, [1, 2]), "svg")


def test_parse_cell2_rejects_garbage():
    with pytest.raises(ValueError):
        parse_cell2("cell2 1\nvertices 1\nedges 1\n0 3 1\nfaces 0\n")
