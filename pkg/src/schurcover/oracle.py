"""Integral homology of a finite group from the inhomogeneous bar complex.

Brute-force ground truth for the multiplier:  ``C_k = Z[G^k]`` with

    d2[g, h]    = [h] - [gh] + [g]
    d3[g, h, k] = [h, k] - [gh, k] + [g, hk] - [g, h]

and ``H2 = ker d2 / im d3``.  Degenerate tuples are kept unless the
normalized variant is requested.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .groups import FiniteGroup, GroupError
from .linalg import AbelianGroup, IntMatrix, rank, smith_diagonal

H2_CAP = 24
H1_CAP = 48
WITNESS_CAP = 8


class OracleCapExceeded(GroupError):
    pass


@dataclass
class BarComplexSlice:
    group: FiniteGroup
    d2: IntMatrix  # C2 -> C1, shape (|C1|, |C2|)
    d3: IntMatrix  # C3 -> C2, shape (|C2|, |C3|)
    normalized: bool

    def composite_is_zero(self) -> bool:
        return (self.d2 @ self.d3).is_zero()


def _columns(entries: list[tuple[np.ndarray, int]], ncols: int) -> list[dict[int, int]]:
    cols: list[dict[int, int]] = [{} for _ in range(ncols)]
    for idx, sign in entries:
        for c, r in enumerate(idx.tolist()):
            if r < 0:
                continue
            d = cols[c]
            v = d.get(r, 0) + sign
            if v:
                d[r] = v
            else:
                del d[r]
    return cols


def bar_slice(G: FiniteGroup, normalized: bool = False) -> BarComplexSlice:
    n = G.order
    T = G.table.astype(np.int64)
    # position of an element (resp. a pair) in the chosen basis; -1 for dropped degenerate cells
    if normalized:
        elems = np.arange(1, n)
        pos1 = np.arange(-1, n - 1)
    else:
        elems = np.arange(n)
        pos1 = np.arange(n)
    m = elems.size

    def pos2(a, b):
        if normalized:
            return np.where((a == 0) | (b == 0), -1, (a - 1) * m + (b - 1))
        return a * n + b

    g, h = np.meshgrid(elems, elems, indexing="ij")
    g, h = g.ravel(), h.ravel()
    gh = T[g, h]
    d2 = _columns([(pos1[h], 1), (pos1[gh], -1), (pos1[g], 1)], m * m)
    g, h, k = np.meshgrid(elems, elems, elems, indexing="ij")
    g, h, k = g.ravel(), h.ravel(), k.ravel()
    d3 = _columns(
        [(pos2(h, k), 1), (pos2(T[g, h], k), -1), (pos2(g, T[h, k]), 1), (pos2(g, h), -1)],
        m**3,
    )
    return BarComplexSlice(
        G, IntMatrix.from_columns(d2, m), IntMatrix.from_columns(d3, m * m), normalized
    )


def _check_cap(G: FiniteGroup, cap: int, what: str) -> None:
    if G.order > cap:
        raise OracleCapExceeded(f"{what} refuses groups of order {G.order} > {cap}")


def bar_h2(G: FiniteGroup, normalized: bool = False, cap: int = H2_CAP) -> AbelianGroup:
    """``H2(G, Z)`` as invariant factors."""
    _check_cap(G, cap, "bar_h2")
    S = bar_slice(G, normalized)
    # coker d3 = H2 + (free image of d2), so the torsion of coker d3 is H2
    diag = smith_diagonal(S.d3.T)
    free = S.d3.nrows - rank(S.d2) - sum(1 for d in diag if d)
    if free:
        raise GroupError(f"bar complex reports free rank {free} for a finite group")
    return AbelianGroup.from_orders([d for d in diag if d > 1])


def bar_h1(G: FiniteGroup, cap: int = H1_CAP) -> AbelianGroup:
    """``H1(G, Z) = C1 / im d2`` (``d1`` vanishes for trivial coefficients)."""
    _check_cap(G, cap, "bar_h1")
    n = G.order
    T = G.table.astype(np.int64)
    g, h = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    g, h = g.ravel(), h.ravel()
    cols = _columns([(h, 1), (T[g, h], -1), (g, 1)], n * n)
    d2 = IntMatrix.from_columns(cols, n)
    diag = smith_diagonal(d2)
    free = n - sum(1 for d in diag if d)
    return AbelianGroup.from_orders([d for d in diag if d > 1], free_rank=free)


def min_exponent_witness(G: FiniteGroup, cap: int = WITNESS_CAP) -> int:
    """Smallest exponent among the covers of ``G`` this package can build."""
    _check_cap(G, cap, "min_exponent_witness")
    from .cocycles import all_cover_exponents

    return min(all_cover_exponents(G))
