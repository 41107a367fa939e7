import numpy as np
import pytest

from schurcover.groups import (
    GroupError,
    abelian_invariants,
    alternating_group,
    build_group,
    center,
    closure,
    cyclic_group,
    derived_subgroup,
    dihedral_group,
    direct_product,
    element_order,
    extend_homomorphism,
    find_isomorphism,
    group_from_table,
    is_homomorphism_table,
    normal_subgroups,
    permutation_group,
    quaternion_group,
    quotient,
    structure_report,
    subgroup_group,
    symmetric_group,
    two_generated_subgroups,
)
from schurcover.linalg import AbelianGroup

CORPUS = ["1", "C2", "C3", "C4", "C5", "C6", "C7", "C8", "C2xC2", "C2xC4", "C2^3", "S3", "D8", "Q8", "D10", "D12", "A4"]


def brute_associative(G):
    # (a b) c == a (b c) for all b, c, one a at a time
    T = G.table
    return all(np.array_equal(T[T[a]], T[a][T]) for a in range(G.order))


@pytest.mark.parametrize("group_name", CORPUS + ["S4", "A5"])
def test_group_laws(group_name):
    G = build_group(group_name)
    n = G.order
    ar = np.arange(n)
    assert (G.table[0] == ar).all() and (G.table[:, 0] == ar).all()
    assert (G.table[ar, G.inv_table] == 0).all()
    for row in G.table:
        assert np.array_equal(np.sort(row), ar)
    if n <= 24:
        assert brute_associative(G)
    # Lagrange
    assert (n % G.element_orders() == 0).all()


def test_klein_four():
    G = build_group("C2xC2")
    assert G.order == 4 and G.exponent == 2


def test_d8_facts():
    G = build_group("D8")
    assert G.order == 8
    assert derived_subgroup(G).size == 2
    assert center(G).size == 2


def test_a5_from_permutations():
    G = permutation_group(["(1,2,3,4,5)", "(1,2,3)"])
    assert G.order == 60
    assert G.order == alternating_group(5).order


def test_permutation_cap():
    with pytest.raises(GroupError):
        permutation_group(["(1,2,3,4,5,6,7,8)", "(1,2)"], cap=1000)


def test_malformed_table_rejected():
    with pytest.raises(GroupError):
        group_from_table([[0, 1], [1, 1]])
    with pytest.raises(GroupError):
        # Latin square that is not associative
        group_from_table([[0, 1, 2, 3, 4], [1, 0, 3, 4, 2], [2, 4, 0, 1, 3], [3, 2, 4, 0, 1], [4, 3, 1, 2, 0]])


def test_element_orders():
    assert element_order(cyclic_group(6), 0) == 1
    assert element_order(cyclic_group(6), 1) == 6
    A5 = alternating_group(5)
    g = A5.element("(1,2)(3,4)*(1,3,5)")
    a = element_order(A5, g, method="power")
    b = element_order(A5, g, method="naive")
    assert a == b
    assert a in (1, 2, 3, 5)


def test_structure_reports():
    r = structure_report(build_group("C2xC2"))
    assert r.derived.order == 1 and r.abelianization == AbelianGroup((2, 2)) and r.exponent == 2
    r = structure_report(build_group("D8"))
    assert r.derived.order == 2 and r.abelianization == AbelianGroup((2, 2)) and r.exponent == 4
    A4 = build_group("A4")
    r = structure_report(A4)
    assert r.abelianization == AbelianGroup((3,))
    D = subgroup_group(A4, r.derived.elements)
    assert D.order == 4 and D.exponent == 2


@pytest.mark.parametrize("group_name", CORPUS)
def test_abelianization_matches_commutator_quotient(group_name):
    G = build_group(group_name)
    D = derived_subgroup(G)
    # the derived subgroup is normal and contains every commutator
    T, inv = G.table, G.inv_table
    ar = np.arange(G.order)
    comms = T[T[inv[ar][:, None], inv[ar][None, :]], T[ar[:, None], ar[None, :]]]
    assert set(np.unique(comms)) <= set(D.tolist())
    if G.is_abelian():
        assert abelian_invariants(G).order == G.order
    Q, _ = quotient(G, D)
    assert Q.is_abelian()


def test_quotients():
    G = build_group("S3")
    Q, proj = quotient(G, np.arange(G.order))
    assert Q.order == 1
    V4 = build_group("C2xC2")
    for group_name in ["D8", "Q8"]:
        G = build_group(group_name)
        Q, _ = quotient(G, center(G))
        assert find_isomorphism(Q, V4)


def test_quotient_rejects_non_normal():
    G = symmetric_group(3)
    with pytest.raises(GroupError):
        quotient(G, closure(G, [G.element("(1,2)")]))


@pytest.mark.parametrize("group_name", ["D8", "Q8", "A4", "D12", "C2xC4"])
def test_projection_is_homomorphism(group_name):
    G = build_group(group_name)
    for N in normal_subgroups(G):
        Q, proj = quotient(G, N)
        assert Q.order * N.order == G.order
        assert (proj[G.table] == Q.table[np.ix_(proj, proj)]).all()
        assert set(np.flatnonzero(proj == 0).tolist()) == set(N.elements)


def test_find_isomorphism_examples():
    C4, V4 = cyclic_group(4), build_group("C2xC2")
    assert find_isomorphism(C4, V4).status == "not isomorphic"
    D8, Q8 = dihedral_group(8), quaternion_group()
    assert find_isomorphism(D8, Q8).status == "not isomorphic"
    other = permutation_group(["(1,2,3,4)", "(1,3)"])
    out = find_isomorphism(D8, other)
    assert out.status == "isomorphic"
    assert is_homomorphism_table(D8, other, out.mapping)
    assert np.unique(out.mapping).size == 8


@pytest.mark.parametrize("a,b", [("D8", "Q8"), ("C2xC4", "C8"), ("D12", "A4"), ("C6", "S3")])
def test_find_isomorphism_symmetric(a, b):
    G, H = build_group(a), build_group(b)
    assert bool(find_isomorphism(G, H)) == bool(find_isomorphism(H, G))


def test_isomorphism_cap_is_undecided():
    G = build_group("C2xC2")
    assert find_isomorphism(G, G, cap=2).status == "undecided"


def test_direct_product_and_cyclic_iso():
    assert find_isomorphism(direct_product(cyclic_group(2), cyclic_group(3)), cyclic_group(6))
    assert not find_isomorphism(direct_product(cyclic_group(2), cyclic_group(2)), cyclic_group(4))


def test_two_generated_subgroups():
    subs = two_generated_subgroups(cyclic_group(5))
    assert sorted(s.order for s in subs) == [1, 5]
    subs = two_generated_subgroups(build_group("C2xC2"))
    assert sorted(s.order for s in subs) == [1, 2, 2, 2, 4]
    A4 = build_group("A4")
    orders = sorted(s.order for s in two_generated_subgroups(A4))
    assert orders.count(12) == 1 and orders.count(4) == 1
    assert orders.count(3) == 4 and orders.count(2) == 3


def test_extend_homomorphism():
    Z4, Z2 = cyclic_group(4), cyclic_group(2)
    phi = extend_homomorphism(Z4, [1], Z2, [1])
    assert phi.tolist() == [0, 1, 0, 1]
    # Z2 -> Z4 sending the generator to an element of order 4 is inconsistent
    assert extend_homomorphism(Z2, [1], Z4, [1]) is None
