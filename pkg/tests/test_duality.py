from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from schurcover.duality import (
    common_kernel,
    double_dual_is_isomorphism,
    dual,
    generates_dual,
    group_elements,
    perp,
    quotient_by_perp,
)
from schurcover.linalg import AbelianGroup, subgroup_structure


def all_groups_up_to(limit):
    out = []
    for n in range(1, limit + 1):
        for orders in _chains(n):
            out.append(AbelianGroup(tuple(orders)))
    return out


def _chains(n, smallest=2):
    # invariant factor chains d1 | ... | dk with product n
    if n == 1:
        yield []
        return
    for d in range(smallest, n + 1):
        if n % d == 0:
            for rest in _chains(n // d, d):
                if all(r % d == 0 for r in rest):
                    yield [d] + rest


def span(A, gens):
    seen = {tuple([0] * len(A.invariant_factors))}
    frontier = list(seen)
    while frontier:
        new = []
        for a in frontier:
            for g in gens:
                b = tuple((x + y) % d for x, y, d in zip(a, g, A.invariant_factors))
                if b not in seen:
                    seen.add(b)
                    new.append(b)
        frontier = new
    return seen


def test_dual_examples():
    assert dual(AbelianGroup((6,))).structure == AbelianGroup((6,))
    D = dual(AbelianGroup((2, 4)))
    assert D.structure == AbelianGroup((2, 4)) and D.order == 8
    assert dual(AbelianGroup()).order == 1
    with pytest.raises(ValueError, match="dual of infinite group unsupported"):
        dual(AbelianGroup((2,), 1))


def test_perp_examples():
    A = AbelianGroup((2, 4))
    assert perp(A, [(1, 0), (0, 1)]).order == 1
    assert perp(A, []).structure == A
    # enumerate the 8 characters directly: those killing (1,2)
    D = dual(A)
    killers = [c for c in D.elements() if D.evaluate(c, (1, 2)) == 0]
    assert len(killers) == 4
    ann = perp(A, [(1, 2)])
    assert ann.structure == AbelianGroup((4,))
    assert {D.to_coords(c) for c in killers} == span(A, ann.generators)
    assert quotient_by_perp(A, [(1, 2)]) == AbelianGroup((2,))


def test_perp_rejects_bad_generator():
    with pytest.raises(ValueError):
        perp(AbelianGroup((2, 4)), [(1,)])


def test_character_canonical_form():
    D = dual(AbelianGroup((2, 4)))
    assert D.canonical([Fraction(3, 2), Fraction(-1, 4)]) == (Fraction(1, 2), Fraction(3, 4))
    with pytest.raises(ValueError):
        D.canonical([Fraction(1, 3), 0])


GROUPS_64 = all_groups_up_to(64)


def test_duality_laws_exhaustive_small():
    for A in GROUPS_64:
        if A.order > 24:
            continue
        D = dual(A)
        elems = list(group_elements(A))
        chars = list(D.elements())
        # pairing is bilinear and nondegenerate
        for c in chars:
            if any(c):
                assert any(D.evaluate(c, a) != 0 for a in elems)
        for a in elems:
            if any(a):
                assert any(D.evaluate(c, a) != 0 for c in chars)
        # |B perp| |B| = |A| on every cyclic subgroup
        for b in elems:
            B = span(A, [b])
            ann = perp(A, [b])
            assert ann.order * len(B) == A.order
            assert quotient_by_perp(A, [b]) == subgroup_structure(A, [b])


@pytest.mark.parametrize("A", [g for g in GROUPS_64], ids=str)
def test_double_dual_bijective(A):
    assert double_dual_is_isomorphism(A)


@given(st.sampled_from([g for g in GROUPS_64 if g.order > 1]), st.data())
@settings(max_examples=60, deadline=None)
def test_generation_criterion(A, data):
    D = dual(A)
    chars = list(D.elements())
    picks = data.draw(st.lists(st.sampled_from(chars), max_size=3))
    elems = list(group_elements(A))
    inter = [a for a in elems if all(D.evaluate(c, a) == 0 for c in picks)]
    generated = len(span(A, [D.to_coords(c) for c in picks])) == A.order
    assert generated == (len(inter) == 1)
    assert generates_dual(A, picks) == generated
    assert common_kernel(A, picks).order == len(inter)
