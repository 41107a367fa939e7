"""Multipliers and covers from periodic presentations.

For a surjection ``F -> G`` from a free product of finite cyclic groups with
kernel ``R`` the group ``E = F/[R,F]`` is a finite central extension of ``G``
by ``A = R/[R,F]``, and the multiplier of ``G`` is the kernel of ``A -> F_ab``.

``R`` is handled through Reidemeister-Schreier data: a BFS transversal
``t_g`` over the letters ``x_i`` and one Schreier generator
``s(h, i) = t_h x_i t_{h g_i}^-1`` per non-tree edge.  Words are rewritten
directly into exponent vectors over the Schreier generators; ``A`` is the
cokernel of the conjugation rows ``s - x_j^-1 s x_j`` together with the
power rows ``t_h x_i^{m_i} t_h^-1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .extensions import CentralExtension
from .groups import (
    FiniteGroup,
    GroupError,
    abelianization,
    closure,
    derived_subgroup,
    extend_homomorphism,
    is_p_group,
    quotient,
)
from .linalg import (
    AbelianGroup,
    CokernelMap,
    IntMatrix,
    cokernel_map,
    kernel_of_map,
    subgroup_structure,
)
from .presentations import (
    PeriodicPresentation,
    Word,
    clone_presentation,
    make_presentation,
)

DEFAULT_TOWER_THRESHOLD = 4096


class HopfError(RuntimeError):
    """An internal consistency check failed."""


@dataclass
class SchreierData:
    presentation: PeriodicPresentation = field(repr=False)
    parent: np.ndarray  # BFS parent of each element (-1 for the identity)
    letter: np.ndarray  # last letter of t_h
    bfs_order: np.ndarray
    edge_index: np.ndarray  # (n, d): Schreier generator index of edge (h, i), -1 on tree edges
    edges: list[tuple[int, int]]  # Schreier generator -> (h, i)
    transversal_sums: np.ndarray  # (n, d) exponent sums of t_h

    @property
    def group(self) -> FiniteGroup:
        return self.presentation.group

    @property
    def num_generators(self) -> int:
        return len(self.edges)

    def transversal_word(self, h: int) -> list[int]:
        out = []
        while self.parent[h] >= 0:
            out.append(int(self.letter[h]))
            h = int(self.parent[h])
        return out[::-1]

    def walk(self, letters: Sequence[int], start: int = 0, inverse: Sequence[bool] | None = None):
        """Rewrite a letter sequence read from coset ``start``.

        Returns ``(vector, end)`` where ``vector`` maps Schreier indices to
        exponents.  Inverse letters subtract the generator of the edge they
        traverse backwards.
        """
        G = self.group
        imgs = self.presentation.images
        vec: dict[int, int] = {}
        h = start
        for pos, i in enumerate(letters):
            if inverse is not None and inverse[pos]:
                h = int(G.table[h, G.inv_table[imgs[i]]])
                s = int(self.edge_index[h, i])
                if s >= 0:
                    vec[s] = vec.get(s, 0) - 1
            else:
                s = int(self.edge_index[h, i])
                if s >= 0:
                    vec[s] = vec.get(s, 0) + 1
                h = int(G.table[h, imgs[i]])
        return {k: v for k, v in vec.items() if v}, h

    def rewrite(self, w: Word) -> dict[int, int]:
        """Exponent vector of a word of ``R``; a word outside ``R`` is a hard error."""
        vec, end = self.walk(w.letters())
        if end != 0:
            raise HopfError(f"word {w} does not lie in the relation subgroup")
        return vec

    def generator_exponent_sums(self) -> np.ndarray:
        """``(num_generators, d)`` exponent sums of the Schreier generators, reduced mod periods."""
        m = np.array(self.presentation.periods, dtype=np.int64)
        d = len(m)
        out = np.zeros((len(self.edges), d), dtype=np.int64)
        G = self.group
        imgs = self.presentation.images
        for s, (h, i) in enumerate(self.edges):
            t = int(G.table[h, imgs[i]])
            out[s] = self.transversal_sums[h] - self.transversal_sums[t]
            out[s, i] += 1
        return out % m if d else out


def schreier_data(P: PeriodicPresentation) -> SchreierData:
    P.require_surjective()
    G = P.group
    n, d = G.order, P.rank
    parent = np.full(n, -1, dtype=np.int64)
    letter = np.full(n, -1, dtype=np.int64)
    seen = np.zeros(n, dtype=bool)
    seen[0] = True
    order = [0]
    tree = set()
    head = 0
    while head < len(order):
        h = order[head]
        head += 1
        for i in range(d):
            t = int(G.table[h, P.images[i]])
            if not seen[t]:
                seen[t] = True
                parent[t], letter[t] = h, i
                order.append(t)
                tree.add((h, i))
    if len(order) != n:
        raise HopfError("transversal does not reach every element")
    edge_index = np.full((n, d), -1, dtype=np.int64)
    edges = []
    for h in range(n):
        for i in range(d):
            if (h, i) not in tree:
                edge_index[h, i] = len(edges)
                edges.append((h, i))
    sums = np.zeros((n, d), dtype=np.int64)
    for h in order[1:]:
        sums[h] = sums[parent[h]]
        sums[h, letter[h]] += 1
    data = SchreierData(P, parent, letter, np.array(order, dtype=np.int64), edge_index, edges, sums)
    if len(edges) != n * d - (n - 1):
        raise HopfError("Schreier generator count mismatch")
    return data


def _transversal_walks(S: SchreierData, start: int) -> list[dict[int, int]]:
    """Exponent vectors of ``t_h`` read from coset ``start`` for every ``h``."""
    G = S.group
    out: list[dict[int, int] | None] = [None] * G.order
    out[0] = {}
    for h in S.bfs_order[1:]:
        p, i = int(S.parent[h]), int(S.letter[h])
        vec = dict(out[p])
        s = int(S.edge_index[int(G.table[start, p]), i])
        if s >= 0:
            vec[s] = vec.get(s, 0) + 1
            if not vec[s]:
                del vec[s]
        out[h] = vec
    return out  # type: ignore[return-value]


def coinvariant_rows(S: SchreierData) -> list[dict[int, int]]:
    """Relation rows over the Schreier generators whose cokernel is ``R/[R,F]``."""
    P = S.presentation
    G = S.group
    T = G.table
    imgs = P.images
    rows: list[dict[int, int]] = []
    walks: dict[int, list[dict[int, int]]] = {}
    for j in range(P.rank):
        c = int(G.inv_table[imgs[j]])
        if c not in walks:
            walks[c] = _transversal_walks(S, c)
        W = walks[c]
        for s, (h, i) in enumerate(S.edges):
            hp = int(T[h, imgs[i]])
            # x_j^-1 s x_j read from 1 passes through coset c
            row: dict[int, int] = {s: 1}
            for k, v in W[h].items():
                row[k] = row.get(k, 0) - v
            t = int(S.edge_index[int(T[c, h]), i])
            if t >= 0:
                row[t] = row.get(t, 0) - 1
            for k, v in W[hp].items():
                row[k] = row.get(k, 0) + v
            row = {k: v for k, v in row.items() if v}
            if row:
                rows.append(row)
    for i, m in enumerate(P.periods):
        for h in range(G.order):
            row = {}
            cur = h
            for _ in range(m):
                s = int(S.edge_index[cur, i])
                if s >= 0:
                    row[s] = row.get(s, 0) + 1
                cur = int(T[cur, imgs[i]])
            if cur != h:
                raise HopfError("power relator does not close up")
            row = {k: v for k, v in row.items() if v}
            if row:
                rows.append(row)
    return rows


def coinvariant_matrix(S: SchreierData) -> IntMatrix:
    """Rows are relations, columns are Schreier generators."""
    return IntMatrix.from_rows(coinvariant_rows(S), S.num_generators)


def _relator_rows(S: SchreierData, letters: Sequence[int]) -> list[dict[int, int]]:
    """Rows ``t_h w t_h^-1`` for every coset ``h`` (``w`` must lie in ``R``)."""
    rows = []
    for h in range(S.group.order):
        vec, end = S.walk(letters, start=h)
        if end != h:
            raise HopfError("extra relator does not lie in the relation subgroup")
        if vec:
            rows.append(vec)
    return rows


class PresentationCover(CentralExtension):
    """``F/[R,F]`` (or a further quotient) with its rewriting data."""

    def __init__(self, base, kernel, gamma, schreier: SchreierData, cmap: CokernelMap, name=None, extra_letters=None):
        super().__init__(base, kernel, gamma, name=name)
        self.schreier = schreier
        self.cmap = cmap
        self.presentation = schreier.presentation
        self.extra_letters = extra_letters
        self.generator_images = tuple(self._generator_image(i) for i in range(self.presentation.rank))

    def _generator_image(self, i: int) -> int:
        """``x_i = s(1, i) t_{g_i}``, i.e. the pair ``(g_i, [s(1, i)])``."""
        g = self.presentation.images[i]
        s = int(self.schreier.edge_index[0, i])
        vec = [0] * self.schreier.num_generators
        if s >= 0:
            vec[s] = 1
        return self.encode(g, list(self.cmap.coords(vec)))

    def coords(self, vec: dict[int, int]) -> tuple[int, ...]:
        return self.cmap.coords(vec)

    def word_element(self, w: Word) -> int:
        out = 0
        for i, e in w.syllables:
            out = self.mul(out, self.power(self.generator_images[i], e))
        return int(out)


def _gamma_array(S: SchreierData, cmap: CokernelMap) -> np.ndarray:
    """``gamma(g, h) = [t_g t_h t_{gh}^-1]``, i.e. the walk of ``t_h`` from coset ``g``."""
    G = S.group
    n = G.order
    factors = np.array(cmap.group.invariant_factors, dtype=np.int64)
    k = len(factors)
    gen_coords = np.zeros((S.num_generators + 1, k), dtype=np.int64)
    for s in range(S.num_generators):
        gen_coords[s] = cmap.coords({s: 1})
    idx = np.where(S.edge_index < 0, S.num_generators, S.edge_index)
    gamma = np.zeros((n, n, k), dtype=np.int64)
    T = G.table
    for h in S.bfs_order[1:]:
        p, i = int(S.parent[h]), int(S.letter[h])
        gamma[:, h] = gamma[:, p] + gen_coords[idx[T[:, p], i]]
        if k:
            gamma[:, h] %= factors
    return gamma


def _cover_from_rows(S: SchreierData, rows, name=None, extra_letters=None) -> PresentationCover:
    M = IntMatrix.from_columns(rows, S.num_generators)
    cmap = cokernel_map(M)
    if not cmap.group.is_finite:
        raise HopfError(f"kernel has free rank {cmap.group.free_rank}; a periodic presentation must give a finite cover")
    gamma = _gamma_array(S, cmap)
    return PresentationCover(S.group, cmap.group, gamma, S, cmap, name=name, extra_letters=extra_letters)


def periodic_cover(P: PeriodicPresentation, schreier: SchreierData | None = None) -> PresentationCover:
    S = schreier or schreier_data(P)
    return _cover_from_rows(S, coinvariant_rows(S), name=f"E({P.group.name})")


def free_abelianization_map(E: PresentationCover) -> IntMatrix:
    """Matrix (d x k) of ``A -> F_ab`` on the canonical generators of ``A``."""
    S = E.schreier
    es = S.generator_exponent_sums()
    d = E.presentation.rank
    cols = []
    for lift in E.cmap.generators:
        v = np.zeros(d, dtype=np.int64)
        for s, c in enumerate(lift):
            if c:
                v += c * es[s]
        cols.append([int(x) for x in v])
    return IntMatrix.from_columns(cols, d)


def multiplier_from_cover(E: PresentationCover) -> AbelianGroup:
    M = free_abelianization_map(E)
    target = IntMatrix.diagonal(list(E.presentation.periods))
    return kernel_of_map(E.kernel, target, M)


def multiplier_hopf(P: PeriodicPresentation) -> AbelianGroup:
    return multiplier_from_cover(periodic_cover(P))


def schur_predicate(P: PeriodicPresentation, schreier: SchreierData | None = None) -> bool:
    """True iff every Schreier generator dies in ``F_ab``, i.e. ``R <= [F, F]``."""
    S = schreier or schreier_data(P)
    return not S.generator_exponent_sums().any()


def derived_order(G: FiniteGroup) -> int:
    return int(derived_subgroup(G).size)


@dataclass(frozen=True)
class OrderFormula:
    free_abelian_order: int
    derived_order: int
    multiplier_order: int
    cover_order: int

    @property
    def holds(self) -> bool:
        return self.cover_order == self.free_abelian_order * self.derived_order * self.multiplier_order


def order_formula(E: PresentationCover, multiplier: AbelianGroup | None = None) -> OrderFormula:
    H2 = multiplier if multiplier is not None else multiplier_from_cover(E)
    Fab = E.presentation.free.abelianization()
    return OrderFormula(Fab.order, derived_order(E.base), H2.order, E.order)


@dataclass(frozen=True)
class FiveTermReport:
    multiplier: AbelianGroup
    coinvariants: AbelianGroup
    free_abelianization: AbelianGroup
    abelianization: AbelianGroup
    image_order: int
    image_in_kernel: bool

    @property
    def exact(self) -> bool:
        m, a = self.multiplier.order, self.coinvariants.order
        f, g = self.free_abelianization.order, self.abelianization.order
        return (
            self.image_in_kernel
            and self.image_order * m == a
            and self.image_order * g == f
            and a * g == m * f
        )


def five_term_report(P: PeriodicPresentation) -> FiveTermReport:
    """``0 -> H2 G -> A -> F_ab -> G_ab -> 0`` by orders and image containment."""
    E = periodic_cover(P)
    H2 = multiplier_from_cover(E)
    Fab = P.free.abelianization()
    Gab = abelianization(P.group)
    G = P.group
    D = np.zeros(G.order, dtype=bool)
    D[derived_subgroup(G)] = True
    es = E.schreier.generator_exponent_sums()
    inside = True
    for v in es:
        g = 0
        for i, e in enumerate(v):
            g = int(G.mul(g, G.power(P.images[i], int(e))))
        inside &= bool(D[g])
    M = free_abelianization_map(E)
    cols = [[M[i, j] for i in range(M.nrows)] for j in range(M.ncols)]
    img = subgroup_structure(IntMatrix.diagonal(list(P.periods)), cols)
    rep = FiveTermReport(H2, E.kernel, Fab, Gab, img.order, inside)
    if not rep.exact:
        raise HopfError(f"five-term sequence is not exact: {rep}")
    return rep


# ---------------------------------------------------------------------------
# smooth presentations


@dataclass
class ExtensionReport:
    kernel: AbelianGroup
    extension: PresentationCover | None
    signature: tuple[int, ...]
    cyclic_kernel_order: int  # |ker(E -> D)|
    cyclic_kernel_verified: bool
    periodic: PresentationCover | None = None


def smooth_central_extension(P: PeriodicPresentation, word: Word | None = None) -> ExtensionReport:
    """``F/([R,F] T)`` with ``T`` normally generated by ``w^{o(w)}``, ``w = x_1...x_d`` by default."""
    S = schreier_data(P)
    G = P.group
    if word is None:
        letters = list(range(P.rank))
    else:
        letters = word.letters()
    img = 0
    for i in letters:
        img = int(G.mul(img, P.images[i]))
    last = int(G.element_orders()[img])
    signature = tuple(P.periods) + (last,)
    base_rows = coinvariant_rows(S)
    extra = _relator_rows(S, letters * last)
    rows = base_rows + extra
    M = IntMatrix.from_columns(rows, S.num_generators)
    cmap = cokernel_map(M)
    E = _cover_from_rows(S, base_rows, name=f"E({G.name})")
    if not cmap.group.is_finite:
        return ExtensionReport(cmap.group, None, signature, 0, False, E)
    gamma = _gamma_array(S, cmap)
    D = PresentationCover(G, cmap.group, gamma, S, cmap, name=f"D({G.name})", extra_letters=letters * last)
    # ker(E -> D) is generated by the class of w^{o(w)} read from the identity coset
    vec, _ = S.walk(letters * last)
    rel = E.kernel_element(E.coords(vec))
    cyc = E.element_order(rel)
    ok = E.order == D.order * cyc
    return ExtensionReport(cmap.group, D, signature, cyc, ok, E)


@dataclass
class SmoothCover:
    cover: PresentationCover  # the smooth central extension of the cloned presentation
    target: PresentationCover  # the periodic cover of the original presentation
    homomorphism: np.ndarray
    surjective: bool
    derived_kernel_order: int
    multiplier_order: int

    @property
    def is_cover(self) -> bool:
        return self.derived_kernel_order == self.multiplier_order


def smooth_cover(P: PeriodicPresentation) -> SmoothCover:
    """Smooth cover through cloning: every generator repeated ``m_i`` times."""
    cl = clone_presentation(P)
    rep = smooth_central_extension(cl.presentation, cl.star)
    if rep.extension is None:
        raise HopfError("cloned smooth extension is infinite")
    Dt = rep.extension
    E = periodic_cover(P)
    imgs = [E.generator_images[i] for i in cl.origin]
    phi = extend_homomorphism(Dt, list(Dt.generator_images), E, imgs)
    if phi is None or (phi < 0).any():
        raise HopfError("cloned extension does not map onto the periodic cover")
    surj = np.unique(phi).size == E.order
    if not surj:
        raise HopfError("map from the cloned extension is not surjective")
    H2 = multiplier_from_cover(E)
    return SmoothCover(Dt, E, phi, surj, Dt.derived_kernel_order(), H2.order)


# ---------------------------------------------------------------------------
# towers and Burnside quotients


@dataclass
class TowerStep:
    cover: PresentationCover
    base_multiplier: AbelianGroup
    kernel: AbelianGroup

    @property
    def order(self) -> int:
        return self.cover.order


@dataclass
class Tower:
    steps: list[TowerStep]
    truncated: bool
    threshold: int

    @property
    def orders(self) -> list[int]:
        return [s.order for s in self.steps]


def tower(P: PeriodicPresentation, k: int, threshold: int = DEFAULT_TOWER_THRESHOLD) -> Tower:
    """``E_1 = F/[R,F]`` and ``E_{j+1}`` the periodic cover of ``E_j`` for the same ``F``."""
    if k < 1:
        raise ValueError("tower length must be at least 1")
    steps = []
    current = P
    truncated = False
    for j in range(k):
        E = periodic_cover(current)
        H2 = multiplier_from_cover(E)
        steps.append(TowerStep(E, H2, E.kernel))
        if j + 1 == k:
            break
        if E.order > threshold:
            truncated = True
            break
        base = E.to_group(limit=threshold, name=f"E{j + 1}")
        current = make_presentation(P.free, base, list(E.generator_images))
    return Tower(steps, truncated, threshold)


def burnside_quotient(C: CentralExtension, e: int) -> FiniteGroup:
    """``E / <x^e>``; requires ``exp(G) | e``."""
    if e < 1 or e % C.base.exponent:
        raise ValueError(f"exponent {e} is not a multiple of exp(G) = {C.base.exponent}")
    E = C.to_group() if isinstance(C, CentralExtension) else C
    ar = np.arange(E.order)
    pw = np.zeros(E.order, dtype=np.int64)
    base = ar.copy()
    k = e
    while k:
        if k & 1:
            pw = E.table[pw, base]
        base = E.table[base, base]
        k >>= 1
    N = closure(E, np.unique(pw))
    Q, _ = quotient(E, N, name=f"{E.name}/pow{e}")
    return Q


def is_p_cover(E: CentralExtension) -> bool:
    return is_p_group(E.order)


def base_is_cyclic(G: FiniteGroup) -> bool:
    return int(G.element_orders().max()) == G.order


def identity_presentation(G: FiniteGroup, g: int | None = None) -> PeriodicPresentation:
    """``Z_n -> G = Z_n`` on a generator (cyclic groups only)."""
    if g is None:
        g = int(np.argmax(G.element_orders()))
    if int(G.element_orders()[g]) != G.order:
        raise GroupError("group is not cyclic")
    return make_presentation([G.order], G, [g])


def section_power_identity(E: CentralExtension) -> bool:
    """``sigma(g)^{o(g)} = sum_j gamma(g, g^j)`` for every ``g``."""
    G = E.base
    orders = G.element_orders()
    pw = E.section_powers()
    for g in range(G.order):
        lhs = E.power(int(E.section(g)), int(orders[g]))
        if lhs != E.kernel_element(list(pw[g])):
            return False
        # the same sum written with gamma(g, g^j)
        acc = np.zeros(len(E.factors), dtype=np.int64)
        cur = 0
        for _ in range(int(orders[g])):
            acc += E.gamma[g, cur]
            cur = int(G.table[cur, g])
        if E.kernel_element(list(acc)) != lhs:
            return False
    return True
