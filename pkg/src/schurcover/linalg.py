"""Exact integer linear algebra.

Sparse integer matrices, Smith normal form with unimodular transforms,
finitely generated abelian groups in invariant-factor form, and row
lattices in ``Z^n`` (optionally containing ``n * Z^dim``, i.e. subgroups
of ``(Z/n)^dim``).  Everything is exact: Python integers throughout.
"""

from __future__ import annotations

import heapq
from collections import Counter
from dataclasses import dataclass
from math import gcd, prod
from typing import Iterable, Sequence

from sympy import factorint


def egcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, x, y)`` with ``g = gcd(a, b) >= 0`` and ``a*x + b*y = g``."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def lcm(*values: int) -> int:
    out = 1
    for v in values:
        out = out * v // gcd(out, v) if v else out
    return out


# ---------------------------------------------------------------------------
# IntMatrix


class IntMatrix:
    """Sparse integer matrix with a fixed shape.

    Rows are stored as ``{col: value}`` dictionaries holding only nonzero
    entries.  Instances are treated as immutable.
    """

    __slots__ = ("nrows", "ncols", "_rows")

    def __init__(self, nrows: int, ncols: int, rows: Sequence[dict[int, int]] | None = None):
        if nrows < 0 or ncols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        self.nrows = nrows
        self.ncols = ncols
        if rows is None:
            self._rows: tuple[dict[int, int], ...] = tuple({} for _ in range(nrows))
        else:
            if len(rows) != nrows:
                raise ValueError(f"expected {nrows} rows, got {len(rows)}")
            clean = []
            for r in rows:
                d = {}
                for j, v in r.items():
                    if not 0 <= j < ncols:
                        raise IndexError(f"column {j} outside 0..{ncols - 1}")
                    v = int(v)
                    if v:
                        d[j] = v
                clean.append(d)
            self._rows = tuple(clean)

    # constructors ------------------------------------------------------

    @classmethod
    def from_dense(cls, data: Sequence[Sequence[int]], ncols: int | None = None) -> "IntMatrix":
        data = [list(r) for r in data]
        if ncols is None:
            ncols = len(data[0]) if data else 0
        for r in data:
            if len(r) != ncols:
                raise ValueError("ragged dense matrix")
        return cls(len(data), ncols, [{j: v for j, v in enumerate(r) if v} for r in data])

    @classmethod
    def from_rows(cls, rows: Sequence[dict[int, int] | Sequence[int]], ncols: int) -> "IntMatrix":
        out = []
        for r in rows:
            out.append(dict(r) if isinstance(r, dict) else {j: v for j, v in enumerate(r) if v})
        return cls(len(out), ncols, out)

    @classmethod
    def from_columns(cls, cols: Sequence[dict[int, int] | Sequence[int]], nrows: int) -> "IntMatrix":
        rows: list[dict[int, int]] = [{} for _ in range(nrows)]
        for j, c in enumerate(cols):
            items = c.items() if isinstance(c, dict) else enumerate(c)
            for i, v in items:
                if v:
                    if not 0 <= i < nrows:
                        raise IndexError(f"row {i} outside 0..{nrows - 1}")
                    rows[i][j] = v
        return cls(nrows, len(cols), rows)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, [{i: 1} for i in range(n)])

    @classmethod
    def diagonal(cls, entries: Sequence[int], nrows: int | None = None, ncols: int | None = None) -> "IntMatrix":
        k = len(entries)
        nrows = k if nrows is None else nrows
        ncols = k if ncols is None else ncols
        rows: list[dict[int, int]] = [{} for _ in range(nrows)]
        for i, v in enumerate(entries):
            if v:
                rows[i][i] = v
        return cls(nrows, ncols, rows)

    @classmethod
    def hstack(cls, *mats: "IntMatrix") -> "IntMatrix":
        nrows = mats[0].nrows
        rows: list[dict[int, int]] = [{} for _ in range(nrows)]
        off = 0
        for m in mats:
            if m.nrows != nrows:
                raise ValueError("hstack: row counts differ")
            for i, r in enumerate(m._rows):
                for j, v in r.items():
                    rows[i][j + off] = v
            off += m.ncols
        return cls(nrows, off, rows)

    # access ------------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def __getitem__(self, idx: tuple[int, int]) -> int:
        i, j = idx
        if not (0 <= i < self.nrows and 0 <= j < self.ncols):
            raise IndexError(f"entry ({i}, {j}) outside shape {self.shape}")
        return self._rows[i].get(j, 0)

    def row(self, i: int) -> dict[int, int]:
        if not 0 <= i < self.nrows:
            raise IndexError(f"row {i} outside 0..{self.nrows - 1}")
        return dict(self._rows[i])

    def column(self, j: int) -> dict[int, int]:
        if not 0 <= j < self.ncols:
            raise IndexError(f"column {j} outside 0..{self.ncols - 1}")
        return {i: r[j] for i, r in enumerate(self._rows) if j in r}

    def items(self):
        """Iterate over nonzero entries as ``(row, col, value)`` in row-major order."""
        for i, r in enumerate(self._rows):
            for j in sorted(r):
                yield i, j, r[j]

    @property
    def nnz(self) -> int:
        return sum(len(r) for r in self._rows)

    def to_dense(self) -> list[list[int]]:
        out = [[0] * self.ncols for _ in range(self.nrows)]
        for i, r in enumerate(self._rows):
            for j, v in r.items():
                out[i][j] = v
        return out

    @property
    def T(self) -> "IntMatrix":
        rows: list[dict[int, int]] = [{} for _ in range(self.ncols)]
        for i, r in enumerate(self._rows):
            for j, v in r.items():
                rows[j][i] = v
        return IntMatrix(self.ncols, self.nrows, rows)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        orows = other._rows
        rows = []
        for r in self._rows:
            acc: dict[int, int] = {}
            for k, a in r.items():
                for j, b in orows[k].items():
                    acc[j] = acc.get(j, 0) + a * b
            rows.append({j: v for j, v in acc.items() if v})
        return IntMatrix(self.nrows, other.ncols, rows)

    def apply(self, vec: Sequence[int]) -> list[int]:
        """Matrix-vector product ``M @ vec``."""
        if len(vec) != self.ncols:
            raise ValueError("vector length mismatch")
        return [sum(v * vec[j] for j, v in r.items()) for r in self._rows]

    def is_zero(self) -> bool:
        return all(not r for r in self._rows)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.shape == other.shape and self._rows == other._rows

    def __hash__(self) -> int:
        return hash((self.shape, tuple(tuple(sorted(r.items())) for r in self._rows)))

    def __repr__(self) -> str:
        return f"IntMatrix({self.nrows}x{self.ncols}, nnz={self.nnz})"

    def determinant(self) -> int:
        """Exact determinant by fraction-free (Bareiss) elimination."""
        if self.nrows != self.ncols:
            raise ValueError("determinant of a non-square matrix")
        a = self.to_dense()
        n = self.nrows
        sign, prev = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                for i in range(k + 1, n):
                    if a[i][k]:
                        a[k], a[i] = a[i], a[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1] if n else 1


# ---------------------------------------------------------------------------
# Smith normal form


@dataclass(frozen=True)
class SNFResult:
    """``U @ M @ V == D`` with ``U``, ``V`` unimodular and ``D`` in Smith form."""

    D: IntMatrix
    U: IntMatrix
    V: IntMatrix

    @property
    def diagonal(self) -> list[int]:
        return [self.D[i, i] for i in range(min(self.D.shape))]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d)


class _Smith:
    """Workhorse for Smith normal form.

    ``U`` is kept as sparse rows, ``Uinv`` and ``V`` as sparse columns; each
    is tracked only when requested.  A sparse pass eliminates unit pivots
    first (Markowitz cost, then lowest ``(row, col)``), the remaining core
    is reduced densely with the minimal-absolute-value pivot rule.
    """

    def __init__(self, m: IntMatrix, want_u=False, want_uinv=False, want_v=False):
        self.m, self.n = m.shape
        self.rows = [dict(r) for r in m._rows]
        self.U = [{i: 1} for i in range(self.m)] if want_u else None
        self.Uinv = [{i: 1} for i in range(self.m)] if want_uinv else None
        self.V = [{j: 1} for j in range(self.n)] if want_v else None

    # elementary operations on the transforms ---------------------------

    @staticmethod
    def _axpy(target: dict, src: dict, f: int) -> None:
        for k, v in src.items():
            nv = target.get(k, 0) + f * v
            if nv:
                target[k] = nv
            else:
                target.pop(k, None)

    def _row_add(self, r: int, i: int, f: int) -> None:
        """Record ``row_r += f * row_i``."""
        if self.U is not None:
            self._axpy(self.U[r], self.U[i], f)
        if self.Uinv is not None:
            self._axpy(self.Uinv[i], self.Uinv[r], -f)

    def _row_neg(self, r: int) -> None:
        if self.U is not None:
            self.U[r] = {k: -v for k, v in self.U[r].items()}
        if self.Uinv is not None:
            self.Uinv[r] = {k: -v for k, v in self.Uinv[r].items()}

    def _col_add(self, c: int, j: int, f: int) -> None:
        """Record ``col_c += f * col_j``."""
        if self.V is not None:
            self._axpy(self.V[c], self.V[j], f)

    # sparse unit-pivot pass ---------------------------------------------

    def _unit_pass(self):
        rows = self.rows
        colsets: dict[int, set[int]] = {}
        for i, r in enumerate(rows):
            for j in r:
                colsets.setdefault(j, set()).add(i)
        active = [True] * self.m

        def cost(i, j):
            return (len(rows[i]) - 1) * (len(colsets[j]) - 1)

        heap = []

        def push_row(i):
            for j, v in rows[i].items():
                if v == 1 or v == -1:
                    heap.append((cost(i, j), i, j))

        for i in range(self.m):
            push_row(i)
        heapq.heapify(heap)
        pivots: list[tuple[int, int, int]] = []
        while heap:
            c, i, j = heapq.heappop(heap)
            if not active[i]:
                continue
            u = rows[i].get(j)
            if u is None or (u != 1 and u != -1):
                continue
            now = cost(i, j)
            if now > c and heap and now > heap[0][0]:
                heapq.heappush(heap, (now, i, j))
                continue
            prow = rows[i]
            for r in sorted(colsets[j] - {i}):
                f = -rows[r][j] * u
                rr = rows[r]
                for col, val in prow.items():
                    nv = rr.get(col, 0) + f * val
                    if nv:
                        if col not in rr:
                            colsets[col].add(r)
                        rr[col] = nv
                        if nv == 1 or nv == -1:
                            heapq.heappush(heap, (cost(r, col), r, col))
                    else:
                        if col in rr:
                            del rr[col]
                            colsets[col].discard(r)
                self._row_add(r, i, f)
            for col in sorted(prow):
                if col != j:
                    self._col_add(col, j, -prow[col] * u)
                    colsets[col].discard(i)
            for col in list(prow):
                if col != j:
                    del prow[col]
            del colsets[j]
            active[i] = False
            pivots.append((i, j, u))
        used_cols = {j for _, j, _ in pivots}
        rest = [i for i in range(self.m) if active[i]]
        return pivots, rest, [j for j in range(self.n) if j not in used_cols]

    # dense core --------------------------------------------------------

    def _core(self, R: list[int], C: list[int]) -> list[int]:
        """Reduce the submatrix on rows ``R`` and cols ``C`` in place.

        ``R`` and ``C`` are permuted so that the core ends up diagonal.
        Returns the diagonal (length ``min(len(R), len(C))``).
        """
        live_cols = {c for r in R for c in self.rows[r]}
        R[:] = [r for r in R if self.rows[r]] + [r for r in R if not self.rows[r]]
        C[:] = [c for c in C if c in live_cols] + [c for c in C if c not in live_cols]
        nr_live = sum(1 for r in R if self.rows[r])
        nc_live = len(live_cols)
        colpos = {c: k for k, c in enumerate(C[:nc_live])}
        A = []
        for r in R[:nr_live]:
            row = [0] * nc_live
            for c, v in self.rows[r].items():
                row[colpos[c]] = v
            A.append(row)
        nr, nc = nr_live, nc_live

        def row_add(k, l, f):  # row_k += f row_l
            if f:
                ak, al = A[k], A[l]
                for x in range(nc):
                    if al[x]:
                        ak[x] += f * al[x]
                self._row_add(R[k], R[l], f)

        def col_add(k, l, f):  # col_k += f col_l
            if f:
                for row in A:
                    if row[l]:
                        row[k] += f * row[l]
                self._col_add(C[k], C[l], f)

        def row_swap(k, l):
            if k != l:
                A[k], A[l] = A[l], A[k]
                R[k], R[l] = R[l], R[k]

        def col_swap(k, l):
            if k != l:
                for row in A:
                    row[k], row[l] = row[l], row[k]
                C[k], C[l] = C[l], C[k]

        diag = []
        t = 0
        while t < min(nr, nc):
            best = None
            for i in range(t, nr):
                row = A[i]
                for j in range(t, nc):
                    v = row[j]
                    if v:
                        key = (abs(v), i, j)
                        if best is None or key < best:
                            best = key
                            if key[0] == 1:
                                break
                if best is not None and best[0] == 1:
                    break
            if best is None:
                break
            _, i, j = best
            row_swap(t, i)
            col_swap(t, j)
            while True:
                p = A[t][t]
                dirty = False
                for i in range(t + 1, nr):
                    if A[i][t]:
                        q = A[i][t] // p
                        row_add(i, t, -q)
                        if A[i][t]:
                            dirty = True
                for j in range(t + 1, nc):
                    if A[t][j]:
                        q = A[t][j] // p
                        col_add(j, t, -q)
                        if A[t][j]:
                            dirty = True
                if dirty:
                    # move the smallest remaining entry of row/col t to the pivot
                    cands = [(abs(A[i][t]), i, t) for i in range(t, nr) if A[i][t]]
                    cands += [(abs(A[t][j]), t, j) for j in range(t + 1, nc) if A[t][j]]
                    _, i, j = min(cands)
                    row_swap(t, i)
                    col_swap(t, j)
                    continue
                bad = None
                for i in range(t + 1, nr):
                    for j in range(t + 1, nc):
                        if A[i][j] % p:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                row_add(t, bad, 1)
            if A[t][t] < 0:
                A[t] = [-x for x in A[t]]
                self._row_neg(R[t])
            diag.append(A[t][t])
            t += 1
        return diag

    def run(self, sparse_first: bool = True):
        if sparse_first:
            pivots, R, C = self._unit_pass()
        else:
            pivots, R, C = [], list(range(self.m)), list(range(self.n))
        for i, _, u in pivots:
            if u < 0:
                self._row_neg(i)
        core = self._core(R, C)
        diag = [1] * len(pivots) + core
        row_order = [i for i, _, _ in pivots] + R
        col_order = [j for _, j, _ in pivots] + C
        return diag, row_order, col_order


def _assemble(sm: _Smith, row_order, col_order):
    m, n = sm.m, sm.n
    U = Uinv = V = None
    if sm.U is not None:
        U = IntMatrix(m, m, [sm.U[i] for i in row_order])
    if sm.Uinv is not None:
        Uinv = IntMatrix.from_columns([sm.Uinv[i] for i in row_order], m)
    if sm.V is not None:
        V = IntMatrix.from_columns([sm.V[j] for j in col_order], n)
    return U, Uinv, V


def snf(M: IntMatrix) -> SNFResult:
    """Smith normal form with both unimodular transforms."""
    sm = _Smith(M, want_u=True, want_v=True)
    diag, ro, co = sm.run()
    U, _, V = _assemble(sm, ro, co)
    D = IntMatrix.diagonal([d for d in diag if d], M.nrows, M.ncols)
    return SNFResult(D, U, V)


def smith_diagonal(M: IntMatrix) -> list[int]:
    """Nonzero Smith invariants of ``M`` (no transforms)."""
    sm = _Smith(M)
    diag, _, _ = sm.run()
    return [d for d in diag if d]


def rank(M: IntMatrix) -> int:
    return len(smith_diagonal(M))


# ---------------------------------------------------------------------------
# Abelian groups


def _invariant_from_orders(orders: Iterable[int]) -> tuple[int, ...]:
    """Invariant factors of a direct sum of cyclic groups of the given orders."""
    by_prime: dict[int, list[int]] = {}
    for o in orders:
        o = abs(int(o))
        if o <= 1:
            if o == 0:
                raise ValueError("use free_rank for infinite cyclic summands")
            continue
        for p, e in factorint(o).items():
            by_prime.setdefault(int(p), []).append(int(e))
    if not by_prime:
        return ()
    k = max(len(v) for v in by_prime.values())
    factors = [1] * k
    for p, exps in by_prime.items():
        exps = sorted(exps)
        exps = [0] * (k - len(exps)) + exps
        for idx, e in enumerate(exps):
            factors[idx] *= p**e
    return tuple(f for f in factors if f > 1)


@dataclass(frozen=True)
class AbelianGroup:
    """``Z/d1 + ... + Z/dk + Z^free_rank`` with ``d1 | d2 | ... | dk``, each ``di >= 2``."""

    invariant_factors: tuple[int, ...] = ()
    free_rank: int = 0

    def __post_init__(self):
        inv = tuple(int(d) for d in self.invariant_factors)
        object.__setattr__(self, "invariant_factors", inv)
        if self.free_rank < 0:
            raise ValueError("negative free rank")
        for d in inv:
            if d < 2:
                raise ValueError(f"invariant factor {d} < 2")
        for a, b in zip(inv, inv[1:]):
            if b % a:
                raise ValueError(f"divisibility chain broken: {a} does not divide {b}")

    @classmethod
    def from_orders(cls, orders: Iterable[int], free_rank: int = 0) -> "AbelianGroup":
        """Normalize an arbitrary direct sum of cyclic groups (0 means Z)."""
        orders = list(orders)
        free = free_rank + sum(1 for o in orders if o == 0)
        return cls(_invariant_from_orders(o for o in orders if o != 0), free)

    @classmethod
    def trivial(cls) -> "AbelianGroup":
        return cls()

    @classmethod
    def cyclic(cls, n: int) -> "AbelianGroup":
        return cls.from_orders([n])

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def is_trivial(self) -> bool:
        return not self.invariant_factors and self.free_rank == 0

    @property
    def order(self) -> int:
        if not self.is_finite:
            raise ValueError("group is infinite")
        return prod(self.invariant_factors)

    @property
    def exponent(self) -> int:
        if not self.is_finite:
            raise ValueError("group is infinite")
        return self.invariant_factors[-1] if self.invariant_factors else 1

    @property
    def rank(self) -> int:
        """Minimal number of generators."""
        return len(self.invariant_factors) + self.free_rank

    def elementary_divisors(self) -> list[int]:
        out = []
        for d in self.invariant_factors:
            out.extend(int(p) ** int(e) for p, e in factorint(d).items())
        return sorted(out)

    def direct_sum(self, other: "AbelianGroup") -> "AbelianGroup":
        return AbelianGroup.from_orders(
            self.invariant_factors + other.invariant_factors, self.free_rank + other.free_rank
        )

    def tensor(self, other: "AbelianGroup") -> "AbelianGroup":
        orders = [gcd(a, b) for a in self.invariant_factors for b in other.invariant_factors]
        orders += list(self.invariant_factors) * other.free_rank
        orders += list(other.invariant_factors) * self.free_rank
        return AbelianGroup.from_orders(orders, self.free_rank * other.free_rank)

    def is_cyclic(self) -> bool:
        return self.rank <= 1

    def __str__(self) -> str:
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts += [f"Z{d}" for d in self.invariant_factors]
        return " x ".join(parts) if parts else "trivial"


def relation_matrix(A: AbelianGroup) -> IntMatrix:
    """Columns are the defining relations of ``A`` on its canonical generators."""
    k = len(A.invariant_factors)
    return IntMatrix.diagonal(list(A.invariant_factors), k + A.free_rank, k)


# ---------------------------------------------------------------------------
# Cokernels, kernels, maps


@dataclass(frozen=True)
class CokernelMap:
    """``Z^m / col(M)`` in invariant-factor coordinates.

    ``group`` is the quotient, ``generators[k]`` a lift in ``Z^m`` of the
    k-th canonical generator, and :meth:`coords` sends a vector of ``Z^m``
    to its canonical coordinates (torsion coordinates reduced).
    """

    group: AbelianGroup
    generators: tuple[tuple[int, ...], ...]
    _coord_rows: tuple[dict[int, int], ...]
    _moduli: tuple[int, ...]

    def coords(self, v: Sequence[int] | dict[int, int]) -> tuple[int, ...]:
        items = v.items() if isinstance(v, dict) else enumerate(v)
        vec = dict(items)
        out = []
        for row, d in zip(self._coord_rows, self._moduli):
            s = sum(c * vec.get(j, 0) for j, c in row.items())
            out.append(s % d if d else s)
        return tuple(out)


def cokernel(M: IntMatrix) -> AbelianGroup:
    """``Z^rows / column space of M``."""
    diag = smith_diagonal(M)
    return AbelianGroup(tuple(d for d in diag if d > 1), M.nrows - len(diag))


def cokernel_map(M: IntMatrix) -> CokernelMap:
    sm = _Smith(M, want_u=True, want_uinv=True)
    diag, ro, co = sm.run()
    U, Uinv, _ = _assemble(sm, ro, co)
    m = M.nrows
    full = diag + [0] * (m - len(diag))
    keep = [k for k, d in enumerate(full) if d != 1]
    # torsion part first (ascending chain), then free coordinates
    tors = [k for k in keep if full[k] > 1]
    free = [k for k in keep if full[k] == 0]
    order = tors + free
    Ucols = Uinv.T
    gens = tuple(tuple(Ucols.row(k).get(i, 0) for i in range(m)) for k in order)
    coord_rows = tuple(U.row(k) for k in order)
    moduli = tuple(full[k] for k in order)
    group = AbelianGroup(tuple(full[k] for k in tors), len(free))
    return CokernelMap(group, gens, coord_rows, moduli)


def kernel_basis(M: IntMatrix) -> list[list[int]]:
    """A basis of the integer kernel ``{x : M x = 0}``."""
    sm = _Smith(M, want_v=True)
    diag, ro, co = sm.run()
    _, _, V = _assemble(sm, ro, co)
    r = len([d for d in diag if d])
    Vt = V.T
    return [[Vt.row(k).get(i, 0) for i in range(M.ncols)] for k in range(r, M.ncols)]


def solve_integer(A: IntMatrix, b: Sequence[int]) -> list[int] | None:
    """An integer solution of ``A x = b`` or ``None``."""
    sm = _Smith(A, want_u=True, want_v=True)
    diag, ro, co = sm.run()
    U, _, V = _assemble(sm, ro, co)
    y = U.apply(list(b))
    x = [0] * A.ncols
    for k, yk in enumerate(y):
        d = diag[k] if k < len(diag) else 0
        if d == 0:
            if yk:
                return None
        else:
            if yk % d:
                return None
            x[k] = yk // d
    return V.apply(x)


def _as_relations(p: AbelianGroup | IntMatrix) -> IntMatrix:
    return relation_matrix(p) if isinstance(p, AbelianGroup) else p


def preimage_lattice(M: IntMatrix, R: IntMatrix) -> IntMatrix:
    """Generators (as columns) of ``{x : M x in col(R)}``."""
    if M.nrows != R.nrows:
        raise ValueError("target dimension mismatch")
    ker = kernel_basis(IntMatrix.hstack(M, R))
    cols = [v[: M.ncols] for v in ker]
    return IntMatrix.from_columns(cols, M.ncols)


def in_column_space(R: IntMatrix, v: Sequence[int]) -> bool:
    return solve_integer(R, v) is not None


class IllDefinedMap(ValueError):
    def __init__(self, column: int):
        super().__init__(f"map is not well defined: relation column {column} does not map into the target relations")
        self.column = column


def kernel_of_map(
    source: AbelianGroup | IntMatrix, target: AbelianGroup | IntMatrix, M: IntMatrix
) -> AbelianGroup:
    """Kernel of the map ``coker(source) -> coker(target)`` induced by ``M``.

    Presentations are given as relation matrices (relations are columns) or
    as :class:`AbelianGroup` values (canonical generators).
    """
    Rs, Rt = _as_relations(source), _as_relations(target)
    if M.shape != (Rt.nrows, Rs.nrows):
        raise ValueError(f"map shape {M.shape} does not match ({Rt.nrows}, {Rs.nrows})")
    image_rel = M @ Rs
    for j in range(Rs.ncols):
        col = [image_rel[i, j] for i in range(image_rel.nrows)]
        if any(col) and not in_column_space(Rt, col):
            raise IllDefinedMap(j)
    P = preimage_lattice(M, Rt)
    return cokernel(preimage_lattice(P, Rs))


def subgroup_structure(ambient: AbelianGroup | IntMatrix, gens: Sequence[Sequence[int]]) -> AbelianGroup:
    """Isomorphism type of the subgroup generated by ``gens`` inside ``coker(ambient)``."""
    R = _as_relations(ambient)
    if not gens:
        return AbelianGroup()
    P = IntMatrix.from_columns([list(g) for g in gens], R.nrows)
    return cokernel(preimage_lattice(P, R))


def quotient_structure(ambient: AbelianGroup | IntMatrix, gens: Sequence[Sequence[int]]) -> AbelianGroup:
    """Isomorphism type of ``coker(ambient) / <gens>``."""
    R = _as_relations(ambient)
    P = IntMatrix.from_columns([list(g) for g in gens], R.nrows)
    return cokernel(IntMatrix.hstack(R, P))


# ---------------------------------------------------------------------------
# Lattices


class Lattice:
    """A sublattice of ``Z^dim`` kept as an echelon basis of row vectors.

    With ``modulus=n`` the lattice always contains ``n Z^dim`` and so models a
    subgroup of ``(Z/n)^dim``; entries are then kept reduced mod ``n``.
    """

    def __init__(self, dim: int, modulus: int | None = None, vectors: Iterable[Sequence[int]] = ()):
        self.dim = dim
        self.modulus = modulus
        self._piv: dict[int, list[int]] = {}
        if modulus is not None:
            if modulus < 1:
                raise ValueError("modulus must be positive")
            for j in range(dim):
                row = [0] * dim
                row[j] = modulus
                self._piv[j] = row
        for v in vectors:
            self.add(v)

    def copy(self) -> "Lattice":
        out = Lattice.__new__(Lattice)
        out.dim, out.modulus = self.dim, self.modulus
        out._piv = {j: list(r) for j, r in self._piv.items()}
        return out

    def _reduce_vec(self, v: list[int]) -> list[int]:
        n = self.modulus
        return [x % n for x in v] if n is not None else v

    def add(self, v: Sequence[int]) -> bool:
        """Insert ``v``; return True if the lattice grew."""
        if len(v) != self.dim:
            raise ValueError("vector length mismatch")
        n = self.modulus
        queue = [self._reduce_vec([int(x) for x in v])]
        grew = False
        while queue:
            v = queue.pop()
            for j in range(self.dim):
                vj = v[j]
                if not vj:
                    continue
                r = self._piv.get(j)
                if r is None:
                    if vj < 0:
                        v = [-x for x in v]
                    self._piv[j] = v
                    grew = True
                    break
                p = r[j]
                if vj % p == 0:
                    q = vj // p
                    v = [a - q * b for a, b in zip(v, r)]
                else:
                    g, x, y = egcd(p, vj)
                    a, b = p // g, vj // g
                    new_r = [x * ri + y * vi for ri, vi in zip(r, v)]
                    v = [b * ri - a * vi for ri, vi in zip(r, v)]
                    if n is not None:
                        new_r = [e % n for e in new_r]
                        # keep n Z^dim inside the span of the echelon rows
                        queue.append([(n // g) * e % n for e in new_r])
                    self._piv[j] = new_r
                    grew = True
                if n is not None:
                    v = [x % n for x in v]
        return grew

    def contains(self, v: Sequence[int]) -> bool:
        return self.coordinates(v) is not None

    def basis(self) -> list[list[int]]:
        return [list(self._piv[j]) for j in sorted(self._piv)]

    @property
    def rank(self) -> int:
        return len(self._piv)

    def canonical(self) -> tuple[tuple[int, ...], ...]:
        """Hermite normal form: equal lattices give equal tuples."""
        cols = sorted(self._piv)
        rows = {j: list(self._piv[j]) for j in cols}
        for a, j in enumerate(cols):
            r = rows[j]
            for k in cols[a + 1 :]:
                q = r[k] // rows[k][k]
                if q:
                    r = [x - q * y for x, y in zip(r, rows[k])]
            rows[j] = r
        return tuple(tuple(rows[j]) for j in cols)

    def coordinates(self, v: Sequence[int]) -> list[int] | None:
        """Coefficients of ``v`` on :meth:`basis`, or None if ``v`` is not in the lattice."""
        v = [int(x) for x in v]
        coeffs = []
        for j in sorted(self._piv):
            r = self._piv[j]
            if v[j] % r[j]:
                return None
            q = v[j] // r[j]
            coeffs.append(q)
            if q:
                v = [a - q * b for a, b in zip(v, r)]
        if any(v):
            return None
        return coeffs

    def index(self) -> int:
        """``|Z^dim : L|`` for a full-rank lattice."""
        if self.rank != self.dim:
            raise ValueError("lattice is not of full rank")
        return prod(self._piv[j][j] for j in range(self.dim))

    def __le__(self, other: "Lattice") -> bool:
        return all(other.contains(b) for b in self.basis())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Lattice):
            return NotImplemented
        return self.dim == other.dim and self <= other and other <= self

    def group_order(self) -> int:
        """``|L / n Z^dim|`` for a modular lattice."""
        if self.modulus is None:
            raise ValueError("not a modular lattice")
        return self.modulus**self.dim // self.index()


@dataclass(frozen=True)
class LatticeQuotient:
    """``big / small`` as an abelian group with generator lifts and coordinates."""

    group: AbelianGroup
    generators: tuple[tuple[int, ...], ...]
    _big: Lattice
    _cmap: CokernelMap

    def coords(self, v: Sequence[int]) -> tuple[int, ...]:
        c = self._big.coordinates(v)
        if c is None:
            raise ValueError("vector is not in the ambient lattice")
        return self._cmap.coords(c)


def lattice_quotient(big: Lattice, small: Lattice) -> LatticeQuotient:
    """Structure of ``big / small`` (``small`` must lie inside ``big``)."""
    B = big.basis()
    rows = []
    for s in small.basis():
        c = big.coordinates(s)
        if c is None:
            raise ValueError("small lattice is not contained in big lattice")
        rows.append(c)
    X_T = IntMatrix.from_columns(rows, len(B))
    cm = cokernel_map(X_T)
    gens = []
    for w in cm.generators:
        vec = [0] * big.dim
        for coef, b in zip(w, B):
            if coef:
                vec = [x + coef * y for x, y in zip(vec, b)]
        if big.modulus is not None:
            vec = [x % big.modulus for x in vec]
        gens.append(tuple(vec))
    return LatticeQuotient(cm.group, tuple(gens), big, cm)


def modular_kernel(C: IntMatrix, n: int) -> Lattice:
    """``{x in Z^ncols : C x = 0 mod n}`` as a modular lattice (mod ``n``)."""
    sm = _Smith(C, want_v=True)
    diag, ro, co = sm.run()
    _, _, V = _assemble(sm, ro, co)
    Vt = V.T
    L = Lattice(C.ncols, n)
    for k in range(C.ncols):
        d = diag[k] if k < len(diag) else 0
        scale = n // gcd(n, d) if d else 1
        if scale % n == 0:
            continue
        col = Vt.row(k)
        L.add([scale * col.get(i, 0) for i in range(C.ncols)])
    return L


def elementary_multiset_difference(big: AbelianGroup, small: AbelianGroup) -> AbelianGroup:
    """Remove the cyclic primary summands of ``small`` from those of ``big``."""
    cb, cs = Counter(big.elementary_divisors()), Counter(small.elementary_divisors())
    if cs - cb:
        raise ValueError(f"{small} is not a direct summand type of {big}")
    return AbelianGroup.from_orders(list((cb - cs).elements()), big.free_rank - small.free_rank)
