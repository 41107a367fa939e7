"""Cellular 2-complexes of generating systems and the surfaces they close up to.

For a group ``G`` with generating system ``X = (g_1, ..., g_d)``:

* vertices are the elements of ``G``;
* edge ``(g, i)`` runs from ``g`` to ``g g_i`` (index ``g d + i``);
* family ``i`` has one face per left coset ``g <g_i>``, bounded by the
  ``m_i`` edges of that cycle (a monogon when ``m_i = 1``).

The surface complex adds family ``d+1``: with ``g_{d+1} = g_1 ... g_d`` of
order ``m_{d+1}``, each left coset ``t <g_{d+1}>`` gets a face whose walk
starts at the transversal element ``t`` and reads ``e_1 ... e_d`` repeatedly
(``d m_{d+1}`` sides).  That face carries the opposite orientation, so its
stored boundary is the reversed walk with negated signs.

Faces are stored as oriented boundary walks ``((edge, sign), ...)``.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .groups import GroupError, closure
from .linalg import AbelianGroup, IntMatrix, smith_diagonal

TRANSVERSAL_POLICIES = ("bfs", "dfs")


class SurfaceError(RuntimeError):
    pass


Walk = tuple[tuple[int, int], ...]


@dataclass
class CellComplex2:
    num_vertices: int
    edges: list[tuple[int, int, int]]  # (source, target, label)
    faces: list[Walk]
    face_families: list[int]
    vertex_labels: list[str] = field(default_factory=list)

    @property
    def counts(self) -> tuple[int, int, int]:
        return self.num_vertices, len(self.edges), len(self.faces)

    @property
    def euler_characteristic(self) -> int:
        v, e, f = self.counts
        return v - e + f

    def boundary1(self) -> IntMatrix:
        cols = []
        for s, t, _ in self.edges:
            col: dict[int, int] = {}
            col[t] = col.get(t, 0) + 1
            col[s] = col.get(s, 0) - 1
            cols.append({k: v for k, v in col.items() if v})
        return IntMatrix.from_columns(cols, self.num_vertices)

    def boundary2(self) -> IntMatrix:
        cols = []
        for walk in self.faces:
            col: dict[int, int] = {}
            for e, s in walk:
                col[e] = col.get(e, 0) + s
            cols.append({k: v for k, v in col.items() if v})
        return IntMatrix.from_columns(cols, len(self.edges))

    def boundary_composite_zero(self) -> bool:
        return (self.boundary1() @ self.boundary2()).is_zero()

    def face_sizes(self) -> Counter:
        return Counter(len(w) for w in self.faces)

    def walks_connected(self) -> bool:
        """Consecutive sides of every face share their vertex."""
        for walk in self.faces:
            for k, (e, s) in enumerate(walk):
                e2, s2 = walk[(k + 1) % len(walk)]
                end = self.edges[e][1] if s > 0 else self.edges[e][0]
                start = self.edges[e2][0] if s2 > 0 else self.edges[e2][1]
                if end != start:
                    return False
        return True


def complex_homology(C: CellComplex2) -> list[AbelianGroup]:
    """``H_0, H_1, H_2`` over the integers."""
    d1, d2 = C.boundary1(), C.boundary2()
    s1 = smith_diagonal(d1)
    s2 = smith_diagonal(d2)
    v, e, f = C.counts
    r1, r2 = len(s1), len(s2)
    H0 = AbelianGroup.from_orders([d for d in s1 if d > 1], free_rank=v - r1)
    H1 = AbelianGroup.from_orders([d for d in s2 if d > 1], free_rank=e - r1 - r2)
    H2 = AbelianGroup((), f - r2)
    return [H0, H1, H2]


# ---------------------------------------------------------------------------
# construction


def _check_generating(G, X: Sequence[int]) -> None:
    if closure(G, X).size != G.order:
        raise GroupError("elements do not generate the group")


def _cycle_faces(G, X: Sequence[int]) -> tuple[list[Walk], list[int]]:
    n, d = G.order, len(X)
    faces, fams = [], []
    for i, g in enumerate(X):
        seen = np.zeros(n, dtype=bool)
        for start in range(n):
            if seen[start]:
                continue
            walk = []
            cur = start
            while True:
                seen[cur] = True
                walk.append((cur * d + i, 1))
                cur = int(G.mul(cur, g))
                if cur == start:
                    break
            faces.append(tuple(walk))
            fams.append(i)
    return faces, fams


def _edges(G, X: Sequence[int]) -> list[tuple[int, int, int]]:
    return [(g, int(G.mul(g, x)), i) for g in range(G.order) for i, x in enumerate(X)]


def _labels(G) -> list[str]:
    labels = getattr(G, "labels", None)
    return list(labels) if labels is not None else [str(g) for g in range(G.order)]


def cayley_complex(G, X: Sequence[int]) -> CellComplex2:
    X = [int(x) for x in X]
    _check_generating(G, X)
    faces, fams = _cycle_faces(G, X)
    return CellComplex2(G.order, _edges(G, X), faces, fams, _labels(G))


def _traversal_order(G, X: Sequence[int], policy: str) -> list[int]:
    """Vertex visiting order along generator edges from the identity."""
    n = G.order
    seen = np.zeros(n, dtype=bool)
    seen[0] = True
    order = [0]
    if policy == "bfs":
        queue = deque([0])
        while queue:
            v = queue.popleft()
            for x in X:
                w = int(G.mul(v, x))
                if not seen[w]:
                    seen[w] = True
                    order.append(w)
                    queue.append(w)
    elif policy == "dfs":
        stack = [0]
        while stack:
            v = stack[-1]
            for x in X:
                w = int(G.mul(v, x))
                if not seen[w]:
                    seen[w] = True
                    order.append(w)
                    stack.append(w)
                    break
            else:
                stack.pop()
    else:
        raise ValueError(f"unknown transversal policy {policy!r}; expected one of {TRANSVERSAL_POLICIES}")
    return order


@dataclass
class SurfaceCertificate:
    closed_oriented: bool
    links_are_cycles: bool
    walks_connected: bool
    boundary_zero: bool

    @property
    def ok(self) -> bool:
        return self.closed_oriented and self.links_are_cycles and self.walks_connected and self.boundary_zero


@dataclass
class SurfaceComplex(CellComplex2):
    signature: tuple[int, ...] = ()
    policy: str = "bfs"
    certificate: SurfaceCertificate | None = None

    @property
    def genus(self) -> int:
        chi = self.euler_characteristic
        if chi % 2:
            raise SurfaceError(f"odd Euler characteristic {chi}")
        return 1 - chi // 2

    @property
    def expected_euler_characteristic(self) -> Fraction:
        d = len(self.signature) - 1
        return self.num_vertices * (sum(Fraction(1, m) for m in self.signature) - d + 1)


def _edge_uses(C: CellComplex2) -> dict[int, list[int]]:
    uses: dict[int, list[int]] = {e: [] for e in range(len(C.edges))}
    for walk in C.faces:
        for e, s in walk:
            uses[e].append(s)
    return uses


def _corners(C: CellComplex2) -> dict[int, list[tuple[tuple[int, int], tuple[int, int]]]]:
    """Per vertex, the corners ``(end, end)`` joining two edge ends; an end is ``(edge, 0 tail | 1 head)``."""
    out: dict[int, list] = {v: [] for v in range(C.num_vertices)}
    for walk in C.faces:
        for k, (e, s) in enumerate(walk):
            e2, s2 = walk[(k + 1) % len(walk)]
            arrive = (e, 1) if s > 0 else (e, 0)
            leave = (e2, 0) if s2 > 0 else (e2, 1)
            v = C.edges[e][1] if s > 0 else C.edges[e][0]
            out[v].append((arrive, leave))
    return out


def links_are_cycles(C: CellComplex2) -> bool:
    ends: dict[int, set] = {v: set() for v in range(C.num_vertices)}
    for e, (s, t, _) in enumerate(C.edges):
        ends[s].add((e, 0))
        ends[t].add((e, 1))
    for v, corners in _corners(C).items():
        adj: dict[tuple[int, int], list] = {x: [] for x in ends[v]}
        for a, b in corners:
            if a not in adj or b not in adj:
                return False
            adj[a].append(b)
            adj[b].append(a)
        if not adj:
            continue
        if any(len(nb) != 2 for nb in adj.values()):
            return False
        # connected 2-regular graph is a single cycle
        start = next(iter(sorted(adj)))
        seen = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        if len(seen) != len(adj):
            return False
    return True


def certify(C: CellComplex2) -> SurfaceCertificate:
    uses = _edge_uses(C)
    closed = all(sorted(u) == [-1, 1] for u in uses.values())
    return SurfaceCertificate(closed, links_are_cycles(C), C.walks_connected(), C.boundary_composite_zero())


def surface_complex(G, X: Sequence[int], policy: str = "bfs", check: bool = True) -> SurfaceComplex:
    X = [int(x) for x in X]
    _check_generating(G, X)
    n, d = G.order, len(X)
    faces, fams = _cycle_faces(G, X)
    orders = G.element_orders()
    prod = 0
    for x in X:
        prod = int(G.mul(prod, x))
    m_last = int(orders[prod])
    signature = tuple(int(orders[x]) for x in X) + (m_last,)
    if d:
        assigned = np.zeros(n, dtype=bool)
        for t in _traversal_order(G, X, policy):
            if assigned[t]:
                continue
            walk = []
            cur = t
            for _ in range(m_last):
                assigned[cur] = True
                for i, x in enumerate(X):
                    walk.append((cur * d + i, 1))
                    cur = int(G.mul(cur, x))
            if cur != t:
                raise SurfaceError("transversal walk does not close")
            faces.append(tuple((e, -s) for e, s in reversed(walk)))
            fams.append(d)
    else:
        # one vertex capped by a single face with empty boundary: the sphere
        faces.append(())
        fams.append(0)
    S = SurfaceComplex(n, _edges(G, X), faces, fams, _labels(G), signature, policy)
    if check:
        S.certificate = certify(S)
        if not S.certificate.ok:
            raise SurfaceError(f"surface certificate failed: {S.certificate}")
        if S.euler_characteristic != S.expected_euler_characteristic:
            raise SurfaceError("Euler characteristic disagrees with the signature formula")
        S.genus  # noqa: B018 - raises on odd Euler characteristic
    return S


def same_shape(a: SurfaceComplex, b: SurfaceComplex) -> bool:
    return (
        a.euler_characteristic == b.euler_characteristic
        and a.genus == b.genus
        and a.face_sizes() == b.face_sizes()
        and a.counts == b.counts
    )


# ---------------------------------------------------------------------------
# curvature


@dataclass(frozen=True)
class CurvatureClass:
    euler_characteristic: int
    genus: int
    kind: str  # spherical, parabolic or hyperbolic


def curvature_class(signature: Sequence[int], order: int) -> CurvatureClass:
    d = len(signature) - 1
    s = sum(Fraction(1, int(m)) for m in signature) - d + 1
    chi = order * s
    if chi.denominator != 1:
        raise SurfaceError(f"signature {tuple(signature)} is incompatible with order {order}")
    chi = int(chi)
    if chi % 2:
        raise SurfaceError(f"odd Euler characteristic {chi}")
    kind = "spherical" if s > 0 else "parabolic" if s == 0 else "hyperbolic"
    return CurvatureClass(chi, 1 - chi // 2, kind)


# ---------------------------------------------------------------------------
# coverings


@dataclass
class CoveringMap:
    upper: CellComplex2 = field(repr=False)
    lower: CellComplex2 = field(repr=False)
    vertex_map: np.ndarray = field(repr=False)
    edge_map: np.ndarray = field(repr=False)
    face_map: np.ndarray = field(repr=False)
    face_degrees: np.ndarray = field(repr=False)
    deck_order: int
    commutes: bool
    orbit_quotient: bool
    links_bijective: bool

    @property
    def is_local_homeomorphism(self) -> bool:
        return bool((self.face_degrees == 1).all()) and self.links_bijective

    @property
    def is_smooth(self) -> bool:
        return self.is_local_homeomorphism


def _face_index(C: CellComplex2) -> dict[tuple[int, int], int]:
    """``(family, edge) -> face``; each edge lies on one face of each family using it."""
    out = {}
    for k, walk in enumerate(C.faces):
        fam = C.face_families[k]
        for e, _ in walk:
            out[(fam, e)] = k
    return out


def _chain_map_commutes(U: CellComplex2, L: CellComplex2, vmap, emap, fmap, fdeg) -> bool:
    d1u, d1l = U.boundary1(), L.boundary1()
    for e in range(len(U.edges)):
        lhs: dict[int, int] = {}
        for v, c in d1u.column(e).items():
            lhs[int(vmap[v])] = lhs.get(int(vmap[v]), 0) + c
        rhs = d1l.column(int(emap[e]))
        if {k: v for k, v in lhs.items() if v} != rhs:
            return False
    d2u, d2l = U.boundary2(), L.boundary2()
    for f in range(len(U.faces)):
        lhs = {}
        for e, c in d2u.column(f).items():
            lhs[int(emap[e])] = lhs.get(int(emap[e]), 0) + c
        rhs = {e: c * int(fdeg[f]) for e, c in d2l.column(int(fmap[f])).items()}
        if {k: v for k, v in lhs.items() if v} != rhs:
            return False
    return True


def _links_bijective(U: CellComplex2, L: CellComplex2, vmap, emap) -> bool:
    cu, cl = _corners(U), _corners(L)
    for v, corners in cu.items():
        img = sorted(((int(emap[a[0]]), a[1]), (int(emap[b[0]]), b[1])) for a, b in corners)
        if img != sorted(cl[int(vmap[v])]):
            return False
    return True


def _covering(U: CellComplex2, L: CellComplex2, proj: np.ndarray, kernel: np.ndarray, mul, d: int) -> CoveringMap:
    vmap = np.asarray(proj, dtype=np.int64)
    emap = np.array([int(vmap[s]) * d + lab for s, _, lab in U.edges], dtype=np.int64)
    lidx = _face_index(L)
    fmap = np.zeros(len(U.faces), dtype=np.int64)
    fdeg = np.zeros(len(U.faces), dtype=np.int64)
    for k, walk in enumerate(U.faces):
        fam = U.face_families[k]
        if not walk:
            fmap[k], fdeg[k] = L.faces.index(()), 1
            continue
        target = lidx[(fam, int(emap[walk[0][0]]))]
        fmap[k] = target
        lu, ll = len(walk), len(L.faces[target])
        if lu % ll:
            raise SurfaceError("face does not wrap evenly over its image")
        fdeg[k] = lu // ll
    commutes = _chain_map_commutes(U, L, vmap, emap, fmap, fdeg)
    # the deck group (left multiplication by the kernel) acts transitively on fibres
    orbit_ok = True
    kernel = [int(x) for x in kernel]
    uidx = _face_index(U)
    for cells, cmap, name in ((range(U.num_vertices), vmap, "v"), (range(len(U.edges)), emap, "e"), (range(len(U.faces)), fmap, "f")):
        fibres: dict[int, set] = {}
        for c in cells:
            fibres.setdefault(int(cmap[c]), set()).add(c)
        for low, fib in fibres.items():
            c = min(fib)
            if name == "f" and not U.faces[c]:
                continue
            if name == "v":
                orbit = {int(mul(k, c)) for k in kernel}
            elif name == "e":
                s, _, lab = U.edges[c]
                orbit = {int(mul(k, s)) * d + lab for k in kernel}
            else:
                fam = U.face_families[c]
                s, _, lab = U.edges[U.faces[c][0][0]]
                orbit = {uidx[(fam, int(mul(k, s)) * d + lab)] for k in kernel}
            if orbit != fib:
                orbit_ok = False
    if len(set(vmap.tolist())) != L.num_vertices:
        orbit_ok = False
    links = _links_bijective(U, L, vmap, emap)
    return CoveringMap(U, L, vmap, emap, fmap, fdeg, len(kernel), commutes, orbit_ok, links)


def _projection_data(upper, lower, proj, Y, X):
    proj = np.asarray(proj, dtype=np.int64)
    if proj.shape != (upper.order,):
        raise ValueError("projection must list an image for every upper element")
    if np.unique(proj).size != lower.order:
        raise GroupError("projection is not surjective")
    X = [int(x) for x in X]
    if [int(proj[y]) for y in Y] != X:
        raise GroupError("lower generators are not the images of the upper generators")
    kernel = np.flatnonzero(proj == 0)
    return proj, X, kernel


def covering_map(upper, Y: Sequence[int], lower, X: Sequence[int], proj) -> CoveringMap:
    """Cell map ``Phi(upper, Y) -> Phi(lower, X)`` induced by the surjection ``proj``."""
    Y = [int(y) for y in Y]
    proj, X, kernel = _projection_data(upper, lower, proj, Y, X)
    U = cayley_complex(upper, Y)
    L = cayley_complex(lower, X)
    return _covering(U, L, proj, kernel, upper.mul, len(Y))


@dataclass
class SurfaceCovering:
    covering: CoveringMap
    upper: SurfaceComplex = field(repr=False)
    lower: SurfaceComplex = field(repr=False)

    @property
    def signatures_match(self) -> bool:
        return self.upper.signature == self.lower.signature

    @property
    def is_smooth(self) -> bool:
        return self.covering.is_local_homeomorphism

    @property
    def riemann_hurwitz(self) -> bool:
        """``chi_upper = |kernel| chi_lower`` (meaningful for smooth coverings)."""
        return self.upper.euler_characteristic == self.covering.deck_order * self.lower.euler_characteristic


def surface_covering(upper, Y: Sequence[int], lower, X: Sequence[int], proj, policy: str = "bfs") -> SurfaceCovering:
    Y = [int(y) for y in Y]
    proj, X, kernel = _projection_data(upper, lower, proj, Y, X)
    U = surface_complex(upper, Y, policy)
    L = surface_complex(lower, X, policy)
    cov = _covering(U, L, proj, kernel, upper.mul, len(Y))
    return SurfaceCovering(cov, U, L)


# ---------------------------------------------------------------------------
# export


def export(C: CellComplex2, fmt: str) -> str:
    if fmt == "dot":
        lines = ["digraph complex {"]
        labels = C.vertex_labels or [str(v) for v in range(C.num_vertices)]
        for v in range(C.num_vertices):
            lines.append(f'  v{v} [label="{labels[v]}"];')
        for s, t, lab in C.edges:
            lines.append(f'  v{s} -> v{t} [label="{lab + 1}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"
    if fmt == "cell2":
        lines = ["cell2 1", f"vertices {C.num_vertices}", f"edges {len(C.edges)}"]
        lines += [f"{s} {t} {lab + 1}" for s, t, lab in C.edges]
        lines.append(f"faces {len(C.faces)}")
        for walk, fam in zip(C.faces, C.face_families):
            lines.append(f"{fam + 1}: " + " ".join(f"{'+' if s > 0 else '-'}{e}" for e, s in walk))
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown export format {fmt!r}; expected dot or cell2")


def parse_cell2(text: str) -> CellComplex2:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != "cell2 1":
        raise ValueError("missing cell2 header")
    pos = 1

    def header(name):
        nonlocal pos
        key, _, val = lines[pos].partition(" ")
        if key != name:
            raise ValueError(f"expected '{name}' at line {pos + 1}")
        pos += 1
        return int(val)

    nv = header("vertices")
    ne = header("edges")
    edges = []
    for _ in range(ne):
        s, t, lab = (int(x) for x in lines[pos].split())
        if not (0 <= s < nv and 0 <= t < nv):
            raise ValueError(f"edge endpoint out of range at line {pos + 1}")
        edges.append((s, t, lab - 1))
        pos += 1
    nf = header("faces")
    faces, fams = [], []
    for _ in range(nf):
        fam, _, body = lines[pos].partition(":")
        walk = []
        for tok in body.split():
            sign = 1 if tok[0] == "+" else -1 if tok[0] == "-" else 0
            e = int(tok[1:])
            if not sign or not 0 <= e < ne:
                raise ValueError(f"bad face entry {tok!r} at line {pos + 1}")
            walk.append((e, sign))
        faces.append(tuple(walk))
        fams.append(int(fam) - 1)
        pos += 1
    if pos != len(lines):
        raise ValueError("trailing content after faces")
    return CellComplex2(nv, edges, faces, fams)
