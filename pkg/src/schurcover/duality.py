"""Character groups of finite abelian groups.

A character of ``A = Z/d1 + ... + Z/dk`` is a homomorphism ``A -> Q/Z``.  It is
stored as a vector of fractions ``(c1/d1, ..., ck/dk)`` reduced into ``[0, 1)``,
its value on ``a`` being ``sum(ci * ai / di) mod 1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product as cartesian
from typing import Iterable, Sequence

from .linalg import (
    AbelianGroup,
    IntMatrix,
    kernel_of_map,
    preimage_lattice,
    quotient_structure,
    relation_matrix,
    subgroup_structure,
)

Character = tuple[Fraction, ...]


def _frac_mod1(x: Fraction) -> Fraction:
    return x - (x.numerator // x.denominator)


@dataclass(frozen=True)
class DualGroup:
    """``Hom(base, Q/Z)`` with the basis dual to the invariant-factor basis of ``base``."""

    base: AbelianGroup

    @property
    def factors(self) -> tuple[int, ...]:
        return self.base.invariant_factors

    @property
    def characters(self) -> tuple[Character, ...]:
        k = len(self.factors)
        return tuple(
            tuple(Fraction(1, d) if i == j else Fraction(0) for j, d in enumerate(self.factors)) for i in range(k)
        )

    @property
    def structure(self) -> AbelianGroup:
        # the dual basis character of order d_k pairs with the k-th summand
        return AbelianGroup(self.factors)

    @property
    def order(self) -> int:
        return self.base.order

    def canonical(self, vec: Sequence[Fraction | int]) -> Character:
        """Reduce into ``[0,1)`` and check that the vector defines a character."""
        if len(vec) != len(self.factors):
            raise ValueError("character has the wrong length")
        out = []
        for v, d in zip(vec, self.factors):
            v = _frac_mod1(Fraction(v))
            if (v * d).denominator != 1:
                raise ValueError(f"{v} is not a value of a character on Z{d}")
            out.append(v)
        return tuple(out)

    def from_coords(self, coords: Sequence[int]) -> Character:
        """The character ``sum(c_k * basis_k)``."""
        return self.canonical([Fraction(c, d) for c, d in zip(coords, self.factors)])

    def to_coords(self, ch: Sequence[Fraction]) -> tuple[int, ...]:
        ch = self.canonical(ch)
        return tuple(int(v * d) for v, d in zip(ch, self.factors))

    def evaluate(self, ch: Sequence[Fraction], a: Sequence[int]) -> Fraction:
        if len(a) != len(self.factors):
            raise ValueError("element has the wrong length")
        return _frac_mod1(sum((Fraction(v) * x for v, x in zip(ch, a)), Fraction(0)))

    def add(self, x: Sequence[Fraction], y: Sequence[Fraction]) -> Character:
        return self.canonical([a + b for a, b in zip(x, y)])

    def elements(self) -> Iterable[Character]:
        for coords in cartesian(*(range(d) for d in self.factors)):
            yield self.from_coords(coords)


def dual(A: AbelianGroup) -> DualGroup:
    if not A.is_finite:
        raise ValueError("dual of infinite group unsupported")
    return DualGroup(A)


def group_elements(A: AbelianGroup) -> Iterable[tuple[int, ...]]:
    if not A.is_finite:
        raise ValueError("cannot enumerate an infinite group")
    return cartesian(*(range(d) for d in A.invariant_factors))


def _check_elements(A: AbelianGroup, gens: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    k = len(A.invariant_factors)
    out = []
    for idx, g in enumerate(gens):
        if len(g) != k:
            raise ValueError(f"generator {idx} has {len(g)} coordinates, expected {k}")
        out.append(tuple(int(x) % d for x, d in zip(g, A.invariant_factors)))
    return out


@dataclass(frozen=True)
class Annihilator:
    """``B^perp`` inside the dual: generators as dual coordinates, plus structure."""

    dual: DualGroup
    generators: tuple[tuple[int, ...], ...]
    structure: AbelianGroup

    @property
    def order(self) -> int:
        return self.structure.order

    def characters(self) -> list[Character]:
        return [self.dual.from_coords(c) for c in self.generators]


def _pairing_map(A: AbelianGroup, elems: Sequence[Sequence[int]]) -> IntMatrix:
    """Rows: elements ``b``; columns: dual coordinates ``c``; entry ``b_k e / d_k``.

    A character ``c`` kills ``b`` iff the row of ``b`` applied to ``c`` is 0 mod ``e``.
    """
    e = A.exponent
    rows = [[b[k] * (e // d) for k, d in enumerate(A.invariant_factors)] for b in elems]
    return IntMatrix.from_dense(rows, len(A.invariant_factors))


def perp(A: AbelianGroup, gens: Sequence[Sequence[int]]) -> Annihilator:
    """Characters vanishing on the subgroup generated by ``gens``."""
    D = dual(A)
    gens = _check_elements(A, gens)
    k = len(A.invariant_factors)
    if not gens:
        basis = tuple(tuple(int(i == j) for j in range(k)) for i in range(k))
        return Annihilator(D, basis, A)
    M = _pairing_map(A, gens)
    Rt = IntMatrix.diagonal([A.exponent] * len(gens))
    P = preimage_lattice(M, Rt)
    cols = [tuple(P[i, j] % A.invariant_factors[i] for i in range(k)) for j in range(P.ncols)]
    cols = [c for c in cols if any(c)]
    return Annihilator(D, tuple(cols), subgroup_structure(A, cols))


def common_kernel(A: AbelianGroup, chars: Sequence[Sequence[Fraction]]) -> AbelianGroup:
    """``intersection of ker(lambda)`` over ``chars`` as an abstract group."""
    D = dual(A)
    if not chars:
        return A
    coords = [D.to_coords(c) for c in chars]
    # a is killed by c iff sum c_k a_k e/d_k = 0 mod e; symmetric in a and c
    M = _pairing_map(A, coords)
    return kernel_of_map(A, IntMatrix.diagonal([A.exponent] * len(coords)), M)


def generates_dual(A: AbelianGroup, chars: Sequence[Sequence[Fraction]]) -> bool:
    """True iff ``chars`` generate the full character group."""
    D = dual(A)
    coords = [D.to_coords(c) for c in chars]
    return subgroup_structure(A, coords).order == A.order if coords else A.order == 1


def double_dual_is_isomorphism(A: AbelianGroup) -> bool:
    """Check that ``a -> (lambda -> lambda(a))`` is bijective.

    The evaluation map is written against the basis of ``Hom(dual, Q/Z)`` dual
    to the character basis; it is bijective iff its kernel is trivial and the
    two sides have the same order.
    """
    D = dual(A)
    chars = D.characters
    k = len(A.invariant_factors)
    # coordinate of ev(e_j) on the l-th double-dual basis vector: d_l * lambda_l(e_j)
    cols = []
    for j in range(k):
        ej = tuple(int(i == j) for i in range(k))
        cols.append([int(D.evaluate(chars[l], ej) * A.invariant_factors[l]) for l in range(k)])
    M = IntMatrix.from_columns(cols, k)
    ker = kernel_of_map(A, relation_matrix(D.structure), M)
    return ker.is_trivial and D.structure == A


def quotient_by_perp(A: AbelianGroup, gens: Sequence[Sequence[int]]) -> AbelianGroup:
    """``dual / B^perp`` as an abstract group; it should match the dual of ``B``."""
    ann = perp(A, gens)
    return quotient_structure(relation_matrix(A), [list(c) for c in ann.generators])


# ---------------------------------------------------------------------------
# enumeration


def _factor_chains(n: int, smallest: int = 2) -> Iterable[list[int]]:
    if n == 1:
        yield []
        return
    for d in range(smallest, n + 1):
        if n % d == 0:
            for rest in _factor_chains(n // d, d):
                if all(r % d == 0 for r in rest):
                    yield [d] + rest


def abelian_groups(limit: int) -> list[AbelianGroup]:
    """Every finite abelian group of order at most ``limit``, once each."""
    return [AbelianGroup(tuple(c)) for n in range(1, limit + 1) for c in _factor_chains(n)]


def subgroups(A: AbelianGroup) -> list[tuple[tuple[int, ...], ...]]:
    """One generating tuple per subgroup of ``A``, smallest subgroups first."""
    elems = list(group_elements(A))
    index = {e: i for i, e in enumerate(elems)}
    factors = A.invariant_factors
    table = [
        [index[tuple((a + b) % d for a, b, d in zip(x, y, factors))] for y in elems] for x in elems
    ]
    seen = {frozenset([0]): ()}
    frontier = [(frozenset([0]), ())]
    while frontier:
        new = []
        for H, gens in frontier:
            for g in range(1, len(elems)):
                if g in H:
                    continue
                # H + <g> as the union of the cosets H + k g
                out, cur = set(H), g
                while cur not in H:
                    row = table[cur]
                    out.update(row[h] for h in H)
                    cur = row[g]
                key = frozenset(out)
                if key not in seen:
                    seen[key] = gens + (g,)
                    new.append((key, gens + (g,)))
        frontier = new
    return sorted((tuple(elems[g] for g in gens) for gens in seen.values()), key=lambda t: (len(t), t))
