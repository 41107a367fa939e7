"""Normalized 2-cocycles with values in ``Z/N`` and the covers built from them.

A cocycle is stored as an integer vector indexed by pairs ``(g, h)`` of
non-identity elements, ``index = (g - 1)(n - 1) + (h - 1)``; the entries with
an identity argument are zero (normalization).  ``Z/N`` is viewed inside
``Q/Z`` as ``(1/N)Z/Z``, which is how the multiplier ``H^2(G, C^x)`` is
reached from finite coefficients.

The working modulus is ``N = |G| * exp(G)`` unless stated otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations_with_replacement, islice, product
from typing import Iterator, Sequence

import numpy as np

from .duality import perp
from .extensions import CentralExtension
from .groups import (
    FiniteGroup,
    GroupError,
    abelianization,
    closure,
    extend_homomorphism,
    normal_subgroups,
    quotient,
    subgroup_group,
    two_generated_subgroups,
)
from .linalg import (
    AbelianGroup,
    IntMatrix,
    Lattice,
    lattice_quotient,
    lcm,
    modular_kernel,
    preimage_lattice,
    relation_matrix,
    solve_integer,
)

UNITARY_CAP = 24
COMPLEMENT_LIMIT = 256


class CocycleError(ValueError):
    pass


def default_modulus(G: FiniteGroup) -> int:
    return G.order * G.exponent


# ---------------------------------------------------------------------------
# linear systems


def _dim(G: FiniteGroup) -> int:
    return (G.order - 1) ** 2


def _var(n: int, g, h):
    return (np.asarray(g) - 1) * (n - 1) + (np.asarray(h) - 1)


def cocycle_matrix(G: FiniteGroup) -> IntMatrix:
    """Rows ``a(x,y) + a(xy,z) - a(x,yz) - a(y,z)`` over non-identity ``x, y, z``."""
    n = G.order
    rows: list[dict[int, int]] = []
    if n == 1:
        return IntMatrix(0, 0)
    T = G.table
    el = np.arange(1, n)
    x, y, z = (a.ravel() for a in np.meshgrid(el, el, el, indexing="ij"))
    xy, yz = T[x, y], T[y, z]
    terms = [(x, y, 1), (xy, z, 1), (x, yz, -1), (y, z, -1)]
    cols = []
    for a, b, s in terms:
        idx = np.where((a == 0) | (b == 0), -1, _var(n, a, b))
        cols.append((idx, s))
    for r in range(x.size):
        row: dict[int, int] = {}
        for idx, s in cols:
            j = int(idx[r])
            if j >= 0:
                v = row.get(j, 0) + s
                if v:
                    row[j] = v
                else:
                    del row[j]
        rows.append(row)
    return IntMatrix.from_rows(rows, _dim(G))


def unitary_matrix(G: FiniteGroup) -> IntMatrix:
    """Rows ``sum_{0 < j < o(g)} a(g, g^j)`` for non-identity ``g``."""
    n = G.order
    orders = G.element_orders()
    rows = []
    for g in range(1, n):
        row: dict[int, int] = {}
        cur = g
        for _ in range(1, int(orders[g])):
            j = int(_var(n, g, cur))
            row[j] = row.get(j, 0) + 1
            cur = int(G.table[cur, g])
        rows.append(row)
    return IntMatrix.from_rows(rows, _dim(G))


def coboundary(G: FiniteGroup, zeta: Sequence[int]) -> list[int]:
    """``(d zeta)(g, h) = zeta(g) + zeta(h) - zeta(gh)`` for ``zeta`` on all of ``G``."""
    n = G.order
    z = np.asarray(zeta, dtype=object)
    el = np.arange(1, n)
    g, h = (a.ravel() for a in np.meshgrid(el, el, indexing="ij"))
    vals = z[g] + z[h] - z[G.table[g, h]]
    return [int(v) for v in vals]


def homomorphism_lifts(G: FiniteGroup, e: int) -> list[list[int]]:
    """Integer lifts (values in ``0..e-1``) of a generating set of ``Hom(G, Z/e)``."""
    n = G.order
    if n == 1:
        return []
    el = np.arange(1, n)
    g, h = (a.ravel() for a in np.meshgrid(el, el, indexing="ij"))
    gh = G.table[g, h]
    rows = []
    for a, b, c in zip(g.tolist(), h.tolist(), gh.tolist()):
        row = {a - 1: 1}
        row[b - 1] = row.get(b - 1, 0) + 1
        if c:
            row[c - 1] = row.get(c - 1, 0) - 1
        rows.append({k: v for k, v in row.items() if v})
    L = modular_kernel(IntMatrix.from_rows(rows, n - 1), e)
    out = []
    for v in L.basis():
        if any(x % e for x in v):
            out.append([0] + [x % e for x in v])
    return out


def evaluate(G: FiniteGroup, vec: Sequence[int], g: int, h: int) -> int:
    if g == 0 or h == 0:
        return 0
    return int(vec[int(_var(G.order, g, h))])


def to_array(G: FiniteGroup, vec: Sequence[int]) -> np.ndarray:
    n = G.order
    out = np.zeros((n, n), dtype=np.int64)
    if n > 1:
        out[1:, 1:] = np.asarray(vec, dtype=np.int64).reshape(n - 1, n - 1)
    return out


def from_array(G: FiniteGroup, arr: np.ndarray) -> list[int]:
    return [int(v) for v in np.asarray(arr)[1:, 1:].ravel()]


def satisfies_identity(G: FiniteGroup, arr: np.ndarray, modulus: int) -> bool:
    """Exhaustive check of the cocycle identity for an ``n x n`` value array."""
    T = G.table
    a = np.asarray(arr, dtype=np.int64)
    x = np.arange(G.order)
    X, Y, Z = x[:, None, None], x[None, :, None], x[None, None, :]
    lhs = a[X, Y] + a[T[X, Y], Z]
    rhs = a[X, T[Y, Z]] + a[Y, Z]
    return bool(((lhs - rhs) % modulus == 0).all())


def is_unitary(G: FiniteGroup, arr: np.ndarray, modulus: int) -> bool:
    orders = G.element_orders()
    for g in range(G.order):
        s, cur = 0, 0
        for _ in range(int(orders[g])):
            s += int(arr[g, cur])
            cur = int(G.table[cur, g])
        if s % modulus:
            return False
    return True


# ---------------------------------------------------------------------------
# cocycle groups


@dataclass
class CocycleGroup:
    group: FiniteGroup = field(repr=False)
    modulus: int
    cocycles: Lattice = field(repr=False)
    coboundaries: Lattice = field(repr=False)
    unitary: Lattice | None = field(default=None, repr=False)

    @property
    def dim(self) -> int:
        return _dim(self.group)

    def _whole(self) -> Lattice:
        return Lattice(self.dim, self.modulus)

    def h2(self) -> AbelianGroup:
        """``H^2(G, Z/N) = Z^2 / B^2``."""
        return lattice_quotient(self.cocycles, self.coboundaries).group

    def cocycle_structure(self) -> AbelianGroup:
        return lattice_quotient(self.cocycles, self._whole()).group

    def unitary_structure(self) -> AbelianGroup:
        if self.unitary is None:
            raise CocycleError("unitary cocycles were not computed")
        return lattice_quotient(self.unitary, self._whole()).group

    def basis_arrays(self, which: str = "cocycles") -> list[np.ndarray]:
        L = getattr(self, which)
        return [to_array(self.group, v) for v in L.basis() if any(x % self.modulus for x in v)]


def cocycle_group(G: FiniteGroup, n: int | None = None, unitary: bool = False) -> CocycleGroup:
    N = default_modulus(G) if n is None else int(n)
    if N < 1:
        raise CocycleError("modulus must be positive")
    dim = _dim(G)
    C = cocycle_matrix(G)
    Z2 = modular_kernel(C, N) if dim else Lattice(0, N)
    B2 = Lattice(dim, N)
    for k in range(1, G.order):
        B2.add(coboundary(G, [int(g == k) for g in range(G.order)]))
    U = None
    if unitary:
        U = unitary_cocycles(G, N, cocycle_rows=C)
    return CocycleGroup(G, N, Z2, B2, U)


def unitary_cocycles(G: FiniteGroup, n: int | None = None, cocycle_rows: IntMatrix | None = None) -> Lattice:
    """Cocycles with ``sum_{j < o(g)} a(g, g^j) = 0`` for every ``g``."""
    N = default_modulus(G) if n is None else int(n)
    if N % G.exponent:
        raise CocycleError(f"modulus {N} is not a multiple of exp(G) = {G.exponent}")
    dim = _dim(G)
    if not dim:
        return Lattice(0, N)
    C = cocycle_rows if cocycle_rows is not None else cocycle_matrix(G)
    U = unitary_matrix(G)
    stacked = IntMatrix.from_rows([C.row(i) for i in range(C.nrows)] + [U.row(i) for i in range(U.nrows)], dim)
    return modular_kernel(stacked, N)


def multiplier_kernel(G: FiniteGroup, n: int, coboundaries: Lattice | None = None) -> Lattice:
    """Cocycles mod ``n`` that become coboundaries in ``Q/Z``.

    These are ``B^2`` plus ``d(lift h)/e`` for ``h`` in ``Hom(G, Z/e)``,
    ``e = exp(G)``.
    """
    dim = _dim(G)
    e = G.exponent
    K = coboundaries.copy() if coboundaries is not None else Lattice(dim, n)
    if coboundaries is None:
        for k in range(1, G.order):
            K.add(coboundary(G, [int(g == k) for g in range(G.order)]))
    for z in homomorphism_lifts(G, e):
        d = coboundary(G, z)
        if any(v % e for v in d):
            raise CocycleError("lift of a homomorphism has a coboundary not divisible by exp(G)")
        K.add([v // e for v in d])
    return K


@dataclass
class MultiplierData:
    cocycles: CocycleGroup
    kernel: Lattice  # classes trivial over Q/Z
    multiplier: AbelianGroup
    correction: AbelianGroup  # kernel / B^2, isomorphic to G_ab


def multiplier_data(G: FiniteGroup, n: int | None = None) -> MultiplierData:
    Z = cocycle_group(G, n)
    K = multiplier_kernel(G, Z.modulus, Z.coboundaries)
    corr = lattice_quotient(K, Z.coboundaries).group
    if corr.order != abelianization(G).order:
        raise CocycleError(f"homomorphism correction {corr} does not match the abelianization")
    M = lattice_quotient(Z.cocycles, K).group
    return MultiplierData(Z, K, M, corr)


def multiplier_part(G: FiniteGroup, n: int | None = None) -> AbelianGroup:
    """``H^2(G, C^x)`` read off from cocycles mod ``n``."""
    return multiplier_data(G, n).multiplier


# ---------------------------------------------------------------------------
# the construction on a subgroup of cocycles


class SchurExtension(CentralExtension):
    """Pairs ``(g, theta)`` with ``theta`` a character of ``S``, twisted by evaluation."""

    def __init__(self, base, kernel, gamma, basis, modulus, name=None):
        super().__init__(base, kernel, gamma, name=name)
        self.basis = basis  # invariant-factor basis of S, as cocycle vectors
        self.modulus = modulus


def _invariant_basis(G: FiniteGroup, S: Lattice) -> tuple[AbelianGroup, list[list[int]]]:
    q = lattice_quotient(S, Lattice(S.dim, S.modulus))
    return q.group, [list(g) for g in q.generators]


def _as_lattice(G: FiniteGroup, S, modulus: int) -> Lattice:
    if isinstance(S, Lattice):
        if S.modulus != modulus:
            raise CocycleError("lattice modulus does not match")
        return S
    L = Lattice(_dim(G), modulus)
    for v in S:
        if not satisfies_identity(G, to_array(G, v), modulus):
            raise CocycleError("generator is not a cocycle")
        L.add(v)
    return L


def schur_construction(G: FiniteGroup, S, modulus: int | None = None, name: str | None = None) -> SchurExtension:
    """Extension of ``G`` by the dual of ``S``.

    On the dual basis ``chi_k`` of an invariant-factor basis ``beta_k`` of
    ``S`` (orders ``d_k``), the evaluation character at ``(g, h)`` has
    coordinates ``beta_k(g, h) d_k / N``.
    """
    N = default_modulus(G) if modulus is None else int(modulus)
    L = _as_lattice(G, S, N)
    A, basis = _invariant_basis(G, L)
    n = G.order
    gamma = np.zeros((n, n, len(basis)), dtype=np.int64)
    for k, (beta, d) in enumerate(zip(basis, A.invariant_factors)):
        arr = to_array(G, [x % N for x in beta])
        if ((arr * d) % N).any():
            raise CocycleError("basis element order does not divide its invariant factor")
        gamma[:, :, k] = (arr * d) // N
    return SchurExtension(G, A, gamma, basis, N, name=name)


def unitary_cover(G: FiniteGroup, n: int | None = None, cap: int = UNITARY_CAP) -> SchurExtension:
    if G.order > cap:
        raise GroupError(f"unitary cover refuses groups of order {G.order} > {cap}")
    N = default_modulus(G) if n is None else int(n)
    return schur_construction(G, unitary_cocycles(G, N), N, name=f"U({G.name})")


def unitary_exponent(G: FiniteGroup, n: int | None = None) -> int:
    """``lcm(exp G, exp Z_u)`` without enumerating the cover."""
    N = default_modulus(G) if n is None else int(n)
    U = unitary_cocycles(G, N)
    Zu = lattice_quotient(U, Lattice(U.dim, N)).group
    return lcm(G.exponent, Zu.exponent)


# ---------------------------------------------------------------------------
# Schur covers from a complement


def _solve_multiple(K: Lattice, h: int, target: Sequence[int], N: int) -> list[int] | None:
    """Some ``k`` in ``K`` with ``h k = target`` mod ``N``."""
    B = [b for b in K.basis()]
    dim = K.dim
    cols = [[h * x for x in b] for b in B] + [[N * int(i == j) for i in range(dim)] for j in range(dim)]
    x = solve_integer(IntMatrix.from_columns(cols, dim), list(target))
    if x is None:
        return None
    out = [0] * dim
    for c, b in zip(x[: len(B)], B):
        if c:
            out = [o + c * y for o, y in zip(out, b)]
    return [o % N for o in out]


def _torsion_elements(K: Lattice, h: int) -> list[list[int]]:
    """All ``x`` in ``K`` (mod ``N``) with ``h x = 0``."""
    N, dim = K.modulus, K.dim
    B = K.basis()
    cols = [[h * x for x in b] for b in B]
    coeff = modular_kernel(IntMatrix.from_columns(cols, dim), N)
    gens = []
    for c in coeff.basis():
        x = [0] * dim
        for ci, b in zip(c, B):
            if ci:
                x = [(xi + ci * bi) % N for xi, bi in zip(x, b)]
        gens.append(x)
    T = Lattice(dim, N, gens)
    q = lattice_quotient(T, Lattice(dim, N))
    out = []
    for coef in product(*(range(d) for d in q.group.invariant_factors)):
        out.append([sum(c * g[i] for c, g in zip(coef, q.generators)) % N for i in range(dim)])
    return out


def complement_choices(G: FiniteGroup, n: int | None = None, limit: int = COMPLEMENT_LIMIT) -> Iterator[list[list[int]]]:
    """Bases of complements ``J`` of the multiplier kernel ``K`` inside ``Z^2``.

    A lift ``alpha`` of an invariant generator of ``Z^2/K`` of order ``h`` is
    replaced by ``alpha - k`` with ``k`` in ``K`` and ``h k = h alpha``; the
    admissible ``k`` form a coset of the ``h``-torsion of ``K``.  Distinct
    subgroups ``J`` are yielded in a fixed order, scanning at most ``limit``
    combinations.
    """
    md = multiplier_data(G, n)
    N = md.cocycles.modulus
    K = md.kernel
    q = lattice_quotient(md.cocycles.cocycles, K)
    if q.group.free_rank:
        raise CocycleError("multiplier quotient is not finite")
    if q.group.is_trivial:
        yield []
        return
    per_generator = []
    for alpha, h in zip(q.generators, q.group.invariant_factors):
        alpha = [x % N for x in alpha]
        k0 = _solve_multiple(K, h, [h * a % N for a in alpha], N)
        if k0 is None:
            raise CocycleError(f"no complement lift for a generator of order {h}")
        base = [(a - k) % N for a, k in zip(alpha, k0)]
        per_generator.append([[(x - t) % N for x, t in zip(base, tt)] for tt in _torsion_elements(K, h)])
    seen: set = set()
    for combo in islice(product(*per_generator), limit):
        key = Lattice(K.dim, N, combo).canonical()
        if key in seen:
            continue
        seen.add(key)
        yield [list(v) for v in combo]


def schur_cover_complement(G: FiniteGroup, n: int | None = None, choice: int = 0) -> SchurExtension:
    """Schur cover ``J^ x G`` for the ``choice``-th complement (deterministic order)."""
    N = default_modulus(G) if n is None else int(n)
    for k, basis in enumerate(complement_choices(G, N)):
        if k == choice:
            return schur_construction(G, basis, N, name=f"S({G.name})")
    raise CocycleError(f"complement choice {choice} is not available")


# ---------------------------------------------------------------------------
# the standard map


@dataclass
class StandardMapReport:
    extension: CentralExtension = field(repr=False)
    kernel_generators: tuple[tuple[int, ...], ...]  # ker eta, in dual coordinates
    image_order: int
    derived_kernel: tuple[tuple[int, ...], ...]  # [E,E] meet A
    derived_kernel_order: int
    multiplier_order: int
    kernel_is_perp: bool

    @property
    def kernel_order(self) -> int:
        return self.extension.kernel_order // self.image_order

    @property
    def is_cover(self) -> bool:
        return self.image_order == self.multiplier_order

    @property
    def is_schur_cover(self) -> bool:
        return self.is_cover and self.kernel_order == 1


def _kernel_cocycles(E: CentralExtension, M: int) -> list[list[int]]:
    """``(M / d_k) gamma_k`` as cocycle vectors mod ``M``."""
    G = E.base
    out = []
    for k, d in enumerate(E.factors.tolist()):
        arr = (E.gamma[:, :, k] * (M // d)) % M
        out.append(from_array(G, arr))
    return out


def _same_subgroup(factors: Sequence[int], a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> bool:
    e = lcm(*factors) if factors else 1
    scale = [e // d for d in factors]

    def lat(gens):
        return Lattice(len(factors), e, [[x * s for x, s in zip(g, scale)] for g in gens])

    return lat(a) == lat(b)


def standard_map(E: CentralExtension, multiplier_order: int | None = None) -> StandardMapReport:
    """``eta: A^ -> H^2(G, C^x)``, ``lambda -> [lambda o gamma]``."""
    if not E.is_central():
        raise CocycleError("extension is not central")
    if not E.is_normalized():
        raise CocycleError("cocycle is not normalized")
    G = E.base
    factors = E.kernel.invariant_factors
    if multiplier_order is None:
        multiplier_order = multiplier_part(G).order
    dk = E.derived_kernel()
    dk_nonzero = tuple(v for v in dk if any(v))
    if not factors:
        return StandardMapReport(E, (), 1, (), 1, multiplier_order, True)
    M = E.kernel.exponent
    K = multiplier_kernel(G, M)
    betas = _kernel_cocycles(E, M)
    big = K.copy()
    for b in betas:
        big.add(b)
    q = lattice_quotient(big, K)
    image_order = q.group.order
    # ker eta = {c : sum c_k beta_k in K}
    cols = [list(q.coords(b)) for b in betas]
    Mmap = IntMatrix.from_columns(cols, len(q.group.invariant_factors))
    P = preimage_lattice(Mmap, relation_matrix(q.group))
    kgens = []
    for j in range(P.ncols):
        c = tuple(P[i, j] % d for i, d in enumerate(factors))
        if any(c):
            kgens.append(c)
    ann = perp(E.kernel, list(dk_nonzero))
    ok = _same_subgroup(factors, kgens, ann.generators)
    return StandardMapReport(E, tuple(kgens), image_order, dk_nonzero, len(dk), multiplier_order, ok)


# ---------------------------------------------------------------------------
# section subgroups and universality


@dataclass
class SectionIsomorphism:
    construction: SchurExtension = field(repr=False)
    mapping: np.ndarray = field(repr=False)
    subgroup_order: int
    verified: bool


def section_subgroup_iso(E: CentralExtension) -> SectionIsomorphism:
    """``<sigma(G)>`` in ``E`` versus the construction on ``eta(A^)`` at cocycle level."""
    if not E.is_central():
        raise CocycleError("extension is not central")
    G = E.base
    M = E.kernel.exponent
    S = Lattice(_dim(G), M, _kernel_cocycles(E, M)) if len(E.factors) else Lattice(_dim(G), M)
    X = schur_construction(G, S, M, name="section")
    sections = list(range(1, G.order))
    src_gens = [int(X.section(g)) for g in sections]
    dst_gens = [int(E.section(g)) for g in sections]
    phi = extend_homomorphism(X, src_gens, E, dst_gens)
    sub = closure(E, dst_gens) if G.order > 1 else np.array([0])
    ok = (
        phi is not None
        and bool((phi >= 0).all())
        and np.unique(phi).size == X.order
        and X.order == sub.size
        and set(np.unique(phi).tolist()) == set(sub.tolist())
    )
    return SectionIsomorphism(X, phi if phi is not None else np.array([]), int(sub.size), bool(ok))


def has_order_preserving_section(E: CentralExtension) -> bool:
    return not E.section_powers().any()


def universal_map(Gu: CentralExtension, E: CentralExtension) -> np.ndarray | None:
    """The map ``Gu -> E`` with ``(g, 0) -> sigma(g)``; ``None`` if it does not exist."""
    if Gu.base.order != E.base.order or not np.array_equal(Gu.base.table, E.base.table):
        raise CocycleError("extensions have different base groups")
    if not has_order_preserving_section(E):
        raise CocycleError("target section does not preserve orders")
    G = Gu.base
    gens = list(range(1, G.order))
    phi = extend_homomorphism(Gu, [int(Gu.section(g)) for g in gens], E, [int(E.section(g)) for g in gens])
    if phi is None or (phi < 0).any():
        return None
    return phi


@dataclass
class UniversalityReport:
    unitary: SchurExtension = field(repr=False)
    cayley: CentralExtension = field(repr=False)
    mapping: np.ndarray | None = field(repr=False)

    @property
    def isomorphic(self) -> bool:
        phi = self.mapping
        return (
            phi is not None
            and bool((phi >= 0).all())
            and self.unitary.order == self.cayley.order
            and np.unique(phi).size == self.cayley.order
        )


def unitary_universality(G: FiniteGroup, cap: int = UNITARY_CAP) -> UniversalityReport:
    """Pair ``(g, 0)`` in the unitary cover with the generator ``f_g`` of the Cayley cover."""
    from .hopf import periodic_cover
    from .presentations import cayley_presentation

    Gu = unitary_cover(G, cap=cap)
    Eu = periodic_cover(cayley_presentation(G))
    gens = list(range(1, G.order))
    phi = extend_homomorphism(Gu, [int(Gu.section(g)) for g in gens], Eu, [int(Eu.generator_images[g]) for g in gens])
    return UniversalityReport(Gu, Eu, phi)


# ---------------------------------------------------------------------------
# exponents


@dataclass
class ExponentReport:
    group_exponent: int
    unitary_exponent: int  # lcm(exp G, exp Z_u)
    cover_exponent: int | None  # exp of the constructed cover, when small enough
    pair_exponent: int  # lcm over two-generated subgroups
    divisibility: list[tuple[int, int, int, bool]]  # (|N|, exp N, exp G/N, divides)

    @property
    def consistent(self) -> bool:
        ok = self.pair_exponent == self.unitary_exponent
        if self.cover_exponent is not None:
            ok &= self.cover_exponent == self.unitary_exponent
        return ok and all(d[3] for d in self.divisibility)


def exponent_report(G: FiniteGroup, cover_limit: int = 1 << 16) -> ExponentReport:
    ue = unitary_exponent(G)
    cover = None
    Gu = unitary_cover(G)
    if Gu.order <= cover_limit:
        cover = Gu.exponent
    pair = 1
    for H in two_generated_subgroups(G):
        pair = lcm(pair, unitary_exponent(subgroup_group(G, H.elements)))
    div = []
    for N in normal_subgroups(G):
        if N.order in (1, G.order):
            continue
        a = unitary_exponent(subgroup_group(G, N.elements))
        Q, _ = quotient(G, N.elements)
        b = unitary_exponent(Q)
        div.append((N.order, a, b, (a * b) % ue == 0))
    return ExponentReport(G.exponent, ue, cover, pair, div)


def all_cover_exponents(G: FiniteGroup, max_rank: int = 3) -> list[int]:
    """Exponents of every cover of ``G`` this package builds.

    Schur covers from complements, periodic covers of locally unitary
    presentations with up to ``max_rank`` generators, the Cayley cover and
    the unitary cover.
    """
    from .hopf import periodic_cover
    from .presentations import cayley_presentation

    out = [unitary_cover(G).exponent]
    for basis in complement_choices(G):
        out.append(schur_construction(G, basis).exponent)
    out.append(periodic_cover(cayley_presentation(G)).exponent)
    out.extend(locally_unitary_exponents(G, max_rank))
    return out


def generating_tuples(G: FiniteGroup, max_rank: int = 3) -> Iterator[tuple[int, ...]]:
    """Generating multisets of non-identity elements, sorted, up to ``max_rank`` entries.

    Reordering the free factors gives isomorphic periodic covers, so sorted
    tuples suffice.
    """
    if G.order == 1:
        yield ()
        return
    for d in range(1, max_rank + 1):
        for t in combinations_with_replacement(range(1, G.order), d):
            if closure(G, t).size == G.order:
                yield t


def locally_unitary_exponents(G: FiniteGroup, max_rank: int = 3) -> list[int]:
    from .hopf import periodic_cover
    from .presentations import make_presentation

    orders = G.element_orders()
    out = []
    for t in generating_tuples(G, max_rank):
        P = make_presentation([int(orders[g]) for g in t], G, list(t))
        out.append(periodic_cover(P).exponent)
    return out


# ---------------------------------------------------------------------------
# modulus stability


@dataclass
class StabilityReport:
    modulus: int
    multiplier: AbelianGroup
    multiplier_doubled: AbelianGroup
    unitary: AbelianGroup
    unitary_doubled: AbelianGroup

    @property
    def stable(self) -> bool:
        return self.multiplier == self.multiplier_doubled and self.unitary == self.unitary_doubled


def modulus_stability(G: FiniteGroup, n: int | None = None) -> StabilityReport:
    N = default_modulus(G) if n is None else int(n)

    def zu(m):
        U = unitary_cocycles(G, m)
        return lattice_quotient(U, Lattice(U.dim, m)).group

    return StabilityReport(N, multiplier_part(G, N), multiplier_part(G, 2 * N), zu(N), zu(2 * N))
