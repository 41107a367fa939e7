import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from schurcover.linalg import (
    AbelianGroup,
    IllDefinedMap,
    IntMatrix,
    Lattice,
    cokernel,
    cokernel_map,
    kernel_basis,
    kernel_of_map,
    lattice_quotient,
    modular_kernel,
    quotient_structure,
    snf,
    solve_integer,
    subgroup_structure,
)


def check_snf(M):
    res = snf(M)
    assert res.U @ M @ res.V == res.D
    assert abs(res.U.determinant()) == 1
    assert abs(res.V.determinant()) == 1
    diag = res.diagonal
    nz = [d for d in diag if d]
    assert all(d > 0 for d in nz)
    assert diag[: len(nz)] == nz
    for a, b in zip(nz, nz[1:]):
        assert b % a == 0
    for i, j, v in res.D.items():
        assert i == j
    return res


def test_snf_zero_matrix():
    M = IntMatrix(3, 3)
    res = check_snf(M)
    assert res.D.is_zero()
    c = cokernel(M)
    assert c.invariant_factors == () and c.free_rank == 3


def test_snf_diag_2_3():
    res = check_snf(IntMatrix.diagonal([2, 3]))
    assert res.diagonal == [1, 6]
    assert cokernel(IntMatrix.diagonal([2, 3])) == AbelianGroup((6,))


def test_snf_cycle_graph_boundary():
    # vertex x edge incidence of the 4-cycle, edge g -> g+1
    n = 4
    cols = [{(g + 1) % n: 1, g: -1} for g in range(n)]
    M = IntMatrix.from_columns(cols, n)
    res = check_snf(M)
    # hand reduction: three unit pivots, the last row becomes the sum of all rows = 0
    assert res.diagonal == [1, 1, 1, 0]


def test_snf_empty_shapes():
    for shape in [(0, 0), (0, 3), (3, 0)]:
        M = IntMatrix(*shape)
        res = check_snf(M)
        assert res.D.shape == shape
    assert cokernel(IntMatrix(2, 0)) == AbelianGroup((), 2)


def test_out_of_bounds_access():
    M = IntMatrix.diagonal([1, 2])
    with pytest.raises(IndexError):
        M[2, 0]
    with pytest.raises(IndexError):
        M[0, -1]


def test_big_entries_exact():
    big = 10**40 + 7
    M = IntMatrix.from_dense([[big, 0], [0, big * 3]])
    res = check_snf(M)
    assert res.diagonal == [big, 3 * big]


small_matrices = st.integers(0, 5).flatmap(
    lambda r: st.integers(0, 5).flatmap(
        lambda c: st.lists(st.lists(st.integers(-6, 6), min_size=c, max_size=c), min_size=r, max_size=r).map(
            lambda rows: IntMatrix.from_dense(rows, c)
        )
    )
)


@given(small_matrices)
@settings(max_examples=150, deadline=None)
def test_snf_properties(M):
    check_snf(M)


@given(small_matrices, st.randoms(use_true_random=False))
@settings(max_examples=80, deadline=None)
def test_cokernel_permutation_invariance(M, rnd):
    base = cokernel(M)
    rp = list(range(M.nrows))
    cp = list(range(M.ncols))
    rnd.shuffle(rp)
    rnd.shuffle(cp)
    dense = M.to_dense()
    P = IntMatrix.from_dense([[dense[i][j] for j in cp] for i in rp], M.ncols)
    assert cokernel(P) == base
    Z = IntMatrix.hstack(M, IntMatrix(M.nrows, 2))
    assert cokernel(Z) == base


@given(small_matrices)
@settings(max_examples=80, deadline=None)
def test_kernel_basis_is_kernel(M):
    K = kernel_basis(M)
    for v in K:
        assert all(x == 0 for x in M.apply(v))
    res = snf(M)
    assert len(K) == M.ncols - res.rank


@given(small_matrices)
@settings(max_examples=60, deadline=None)
def test_cokernel_map_coordinates(M):
    cm = cokernel_map(M)
    # columns of M map to zero, generator lifts map to unit vectors
    for j in range(M.ncols):
        col = [M[i, j] for i in range(M.nrows)]
        assert all(c == 0 for c in cm.coords(col))
    for k, g in enumerate(cm.generators):
        c = cm.coords(g)
        assert c == tuple(int(i == k) for i in range(len(c)))


def test_cokernel_map_sparse_unit_pass_consistency():
    rnd = random.Random(3)
    for _ in range(20):
        rows = [{j: rnd.choice([-1, 1, 2, 3]) for j in rnd.sample(range(12), 3)} for _ in range(10)]
        M = IntMatrix.from_rows(rows, 12).T
        check_snf(M)
        cm = cokernel_map(M)
        assert cm.group == cokernel(M)


def test_solve_integer():
    A = IntMatrix.from_dense([[2, 4], [0, 6]])
    x = solve_integer(A, [2, 6])
    assert A.apply(x) == [2, 6]
    assert solve_integer(A, [1, 0]) is None


def test_kernel_of_map_examples():
    Z4 = AbelianGroup((4,))
    assert kernel_of_map(Z4, Z4, IntMatrix.identity(1)).is_trivial
    Z2, Z3 = AbelianGroup((2,)), AbelianGroup((3,))
    assert kernel_of_map(Z2, Z3, IntMatrix(1, 1)) == Z2
    # multiplication by 2 on Z4 has kernel Z2
    assert kernel_of_map(Z4, Z4, IntMatrix.diagonal([2])) == Z2


def test_kernel_of_map_rejects_ill_defined():
    # Z2 -> Z3 sending the generator to 1 is not a homomorphism
    with pytest.raises(IllDefinedMap) as err:
        kernel_of_map(AbelianGroup((2,)), AbelianGroup((3,)), IntMatrix.identity(1))
    assert err.value.column == 0


def test_abelian_group_normalization_and_text():
    assert AbelianGroup.from_orders([2, 3, 4]) == AbelianGroup((2, 12))
    assert str(AbelianGroup((2, 4))) == "Z2 x Z4"
    assert str(AbelianGroup((3,), 2)) == "Z^2 x Z3"
    assert str(AbelianGroup()) == "trivial"
    assert AbelianGroup().exponent == 1
    assert AbelianGroup((2, 6)).order == 12 and AbelianGroup((2, 6)).exponent == 6
    with pytest.raises(ValueError):
        AbelianGroup((2, 3))
    with pytest.raises(ValueError):
        AbelianGroup((1,))
    with pytest.raises(ValueError):
        AbelianGroup((), 1).order
    assert AbelianGroup((2, 4)).tensor(AbelianGroup((6,))) == AbelianGroup((2, 2))


def test_subgroup_and_quotient_structure():
    A = AbelianGroup((2, 4))
    assert subgroup_structure(A, [(1, 2)]) == AbelianGroup((2,))
    assert subgroup_structure(A, [(0, 1)]) == AbelianGroup((4,))
    assert quotient_structure(A, [(1, 2)]) == AbelianGroup((4,))
    assert quotient_structure(A, [(0, 2)]) == AbelianGroup((2, 2))


def brute_span_mod(vectors, n, dim):
    seen = {tuple([0] * dim)}
    frontier = list(seen)
    while frontier:
        new = []
        for a in frontier:
            for v in vectors:
                b = tuple((x + y) % n for x, y in zip(a, v))
                if b not in seen:
                    seen.add(b)
                    new.append(b)
        frontier = new
    return seen


@given(
    st.integers(2, 12),
    st.integers(1, 3),
    st.lists(st.lists(st.integers(0, 11), min_size=3, max_size=3), max_size=4),
)
@settings(max_examples=120, deadline=None)
def test_modular_lattice_matches_brute_force(n, dim, raw):
    vecs = [v[:dim] for v in raw]
    L = Lattice(dim, n, vecs)
    span = brute_span_mod(vecs, n, dim)
    assert L.group_order() == len(span)
    for x in itertools.product(range(n), repeat=dim):
        assert L.contains(x) == (x in span)


def test_integer_lattice_index_and_quotient():
    big = Lattice(2, vectors=[(1, 0), (0, 1)])
    small = Lattice(2, vectors=[(2, 0), (0, 6), (2, 2)])
    assert small.index() == 4
    q = lattice_quotient(big, small)
    assert q.group.order == small.index()
    for k, g in enumerate(q.generators):
        assert q.coords(g) == tuple(int(i == k) for i in range(len(q.generators)))


def test_modular_kernel():
    # x + y = 0 mod 4 inside (Z/4)^2 has 4 solutions
    L = modular_kernel(IntMatrix.from_dense([[1, 1]]), 4)
    assert L.group_order() == 4
    assert L.contains((1, 3)) and not L.contains((1, 1))
    # 2x = 0 mod 6 in Z/6: {0, 3}
    assert modular_kernel(IntMatrix.from_dense([[2]]), 6).group_order() == 2


@given(
    st.sampled_from([4, 6, 12]),
    st.lists(st.lists(st.integers(-20, 20), min_size=3, max_size=3), max_size=4),
    st.randoms(use_true_random=False),
)
@settings(max_examples=100, deadline=None)
def test_canonical_form_identifies_equal_lattices(n, raw, rnd):
    a = Lattice(3, n, raw)
    # same subgroup from shuffled, rescaled-by-unit, recombined generators
    gens = [list(v) for v in raw]
    rnd.shuffle(gens)
    if len(gens) >= 2:
        gens[0] = [x + 5 * y for x, y in zip(gens[0], gens[1])]
    gens = [[-x for x in v] for v in gens]
    b = Lattice(3, n, gens)
    assert a == b and a.canonical() == b.canonical()
    c = Lattice(3, n, raw + [[1, 0, 0]])
    assert (c.canonical() == a.canonical()) == (c == a)
