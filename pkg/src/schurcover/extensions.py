"""Central extensions in pair representation.

An extension ``1 -> A -> E -> G -> 1`` with ``A = Z/d1 + ... + Z/dk`` central is
stored through a normalized 2-cocycle ``gamma: G x G -> A`` with

    (g, a) (h, b) = (gh, a + b + gamma(g, h)).

Element ``(g, a)`` has index ``g * |A| + r(a)``, ``r`` the mixed-radix rank of
``a`` (last coordinate fastest), so the kernel occupies indices ``0..|A|-1``
and the canonical section is ``g -> g * |A|``.  Products are computed on
demand; a full table is only built on request for small orders.
"""

from __future__ import annotations

from math import gcd
from typing import Sequence

import numpy as np

from .groups import FiniteGroup, GroupError, closure, derived_subgroup
from .linalg import AbelianGroup, lcm

TABLE_LIMIT = 4096


class CentralExtension:
    """Implicit group of pairs ``(g, a)`` twisted by ``gamma``."""

    def __init__(self, base: FiniteGroup, kernel: AbelianGroup, gamma: np.ndarray, name: str | None = None):
        if not kernel.is_finite:
            raise GroupError("kernel must be finite")
        self.base = base
        self.kernel = kernel
        self.factors = np.array(kernel.invariant_factors, dtype=np.int64)
        k = len(kernel.invariant_factors)
        n = base.order
        gamma = np.asarray(gamma, dtype=np.int64).reshape(n, n, k)
        self.gamma = gamma % self.factors if k else gamma
        self.name = name
        self.kernel_order = kernel.order
        self.order = n * self.kernel_order
        strides = [1] * k
        for j in range(k - 2, -1, -1):
            strides[j] = strides[j + 1] * int(self.factors[j + 1])
        self.strides = np.array(strides, dtype=np.int64)
        self._orders = None
        self._gens_cache = None
        # mixed-radix rank of each cocycle value
        self._gamma_rank = (self.gamma * self.strides).sum(axis=2) if k else np.zeros((n, n), dtype=np.int64)

    # encoding -----------------------------------------------------------

    @property
    def identity(self) -> int:
        return 0

    def encode(self, g, a) -> np.ndarray | int:
        a = np.asarray(a, dtype=np.int64)
        if len(self.factors):
            r = ((a % self.factors) * self.strides).sum(axis=-1)
        else:
            r = np.zeros(a.shape[:-1], dtype=np.int64) if a.ndim > 1 else 0
        out = np.asarray(g, dtype=np.int64) * self.kernel_order + r
        return int(out) if out.ndim == 0 else out

    def decode(self, x):
        x = np.asarray(x, dtype=np.int64)
        g, r = np.divmod(x, self.kernel_order)
        a = (r[..., None] // self.strides) % self.factors if len(self.factors) else np.zeros(r.shape + (0,), np.int64)
        return g, a

    def _add_ranks(self, r1, r2):
        """Sum of kernel elements given by their mixed-radix ranks."""
        if not len(self.factors):
            return np.zeros(np.broadcast(r1, r2).shape, dtype=np.int64)
        a1 = (np.asarray(r1)[..., None] // self.strides) % self.factors
        a2 = (np.asarray(r2)[..., None] // self.strides) % self.factors
        return (((a1 + a2) % self.factors) * self.strides).sum(axis=-1)

    # group protocol -----------------------------------------------------

    def mul(self, x, y):
        x = np.asarray(x, dtype=np.int64)
        y = np.asarray(y, dtype=np.int64)
        g1, r1 = np.divmod(x, self.kernel_order)
        g2, r2 = np.divmod(y, self.kernel_order)
        g = self.base.table[g1, g2]
        r = self._add_ranks(self._add_ranks(r1, r2), self._gamma_rank[g1, g2])
        out = g.astype(np.int64) * self.kernel_order + r
        return int(out) if out.ndim == 0 else out

    def inv(self, x):
        x = np.asarray(x, dtype=np.int64)
        g, a = self.decode(x)
        gi = self.base.inv_table[g]
        b = -a - self.gamma[g, gi]
        return self.encode(gi, b)

    def section(self, g):
        return np.asarray(g, dtype=np.int64) * self.kernel_order

    def project(self, x):
        return np.asarray(x, dtype=np.int64) // self.kernel_order

    def kernel_element(self, a: Sequence[int]) -> int:
        return self.encode(0, list(a))

    def kernel_generators(self) -> list[int]:
        k = len(self.factors)
        return [self.kernel_element([int(i == j) for i in range(k)]) for j in range(k)]

    def power(self, x: int, e: int) -> int:
        result, base = 0, int(x)
        e = int(e)
        if e < 0:
            base, e = int(self.inv(base)), -e
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return int(result)

    # orders ---------------------------------------------------------------

    def section_powers(self) -> np.ndarray:
        """``sigma(g)^{o(g)}`` as kernel vectors: ``sum_{j=1}^{o(g)-1} gamma(g^j, g)``."""
        G = self.base
        n = G.order
        orders = G.element_orders()
        out = np.zeros((n, len(self.factors)), dtype=np.int64)
        ar = np.arange(n)
        cur = ar.copy()
        maxo = int(orders.max())
        for j in range(1, maxo):
            active = orders > j
            out[active] += self.gamma[cur[active], ar[active]]
            cur = G.table[cur, ar]
        return out % self.factors if len(self.factors) else out

    def _kernel_orders(self, a: np.ndarray) -> np.ndarray:
        if not len(self.factors):
            return np.ones(a.shape[0], dtype=np.int64)
        ords = self.factors // np.gcd(a % self.factors, self.factors)
        out = ords[:, 0].copy()
        for j in range(1, ords.shape[1]):
            out = np.lcm(out, ords[:, j])
        return out

    def element_orders(self) -> np.ndarray:
        if self._orders is None:
            go = self.base.element_orders()
            pw = self.section_powers()
            idx = np.arange(self.order, dtype=np.int64)
            g, a = self.decode(idx)
            o = go[g]
            self._orders = o * self._kernel_orders(o[:, None] * a + pw[g])
        return self._orders

    def element_order(self, x: int) -> int:
        if self._orders is not None:
            return int(self._orders[x])
        g, a = self.decode(np.array([x], dtype=np.int64))
        o = self.base.element_orders()[g]
        pw = self.section_powers()
        return int(o[0] * self._kernel_orders(o[:, None] * a + pw[g])[0])

    @property
    def exponent(self) -> int:
        return lcm(*(int(v) for v in np.unique(self.element_orders())))

    # checks ---------------------------------------------------------------

    def check_cocycle(self, sample_above: int = 50, samples: int = 20000, seed: int = 0) -> bool:
        G = self.base
        n = G.order
        T = G.table
        if n <= sample_above:
            x, y, z = np.meshgrid(np.arange(n), np.arange(n), np.arange(n), indexing="ij")
            x, y, z = x.ravel(), y.ravel(), z.ravel()
        else:
            rng = np.random.default_rng(seed)
            x, y, z = rng.integers(0, n, size=(3, samples))
        lhs = self.gamma[x, y] + self.gamma[T[x, y], z]
        rhs = self.gamma[x, T[y, z]] + self.gamma[y, z]
        if len(self.factors):
            return bool(((lhs - rhs) % self.factors == 0).all())
        return True

    def is_normalized(self) -> bool:
        return not self.gamma[0].any() and not self.gamma[:, 0].any()

    def is_central(self) -> bool:
        from .groups import generating_set

        gens = [int(self.section(g)) for g in generating_set(self.base)] + self.kernel_generators()
        for a in self.kernel_generators():
            for x in gens:
                if self.mul(a, x) != self.mul(x, a):
                    return False
        return True

    # derived data -------------------------------------------------------

    def generators(self) -> list[int]:
        """Section images of the base generators together with the kernel generators."""
        from .groups import generating_set

        return [int(self.section(g)) for g in generating_set(self.base)] + self.kernel_generators()

    def derived_kernel(self) -> list[tuple[int, ...]]:
        """Generators of ``[E, E]`` intersected with the kernel, as kernel coordinates."""
        D = derived_subgroup(self)
        ker = D[D < self.kernel_order]
        _, a = self.decode(ker)
        return [tuple(int(v) for v in row) for row in a]

    def derived_kernel_order(self) -> int:
        D = derived_subgroup(self)
        return int((D < self.kernel_order).sum())

    def to_group(self, limit: int = TABLE_LIMIT, name: str | None = None) -> FiniteGroup:
        if self.order > limit:
            raise GroupError(f"extension of order {self.order} exceeds table limit {limit}")
        idx = np.arange(self.order, dtype=np.int64)
        T = self.mul(idx[:, None], idx[None, :])
        labels = []
        g, a = self.decode(idx)
        for gi, ai in zip(g.tolist(), a.tolist()):
            lab = self.base.labels[gi]
            labels.append(lab if not any(ai) else f"{lab}|{','.join(map(str, ai))}")
        return FiniteGroup(np.asarray(T), name=name or self.name, labels=labels)

    def subgroup_closure(self, gens: Sequence[int]) -> np.ndarray:
        return closure(self, gens)

    def __repr__(self) -> str:
        return f"CentralExtension({self.name or '?'}, base={self.base.name}, kernel={self.kernel}, order={self.order})"


def trivial_extension(G: FiniteGroup, A: AbelianGroup | None = None) -> CentralExtension:
    A = A or AbelianGroup()
    n = G.order
    return CentralExtension(G, A, np.zeros((n, n, len(A.invariant_factors)), dtype=np.int64), name=f"{G.name}xA")


def kernel_order_of(vec: Sequence[int], factors: Sequence[int]) -> int:
    out = 1
    for v, d in zip(vec, factors):
        out = lcm(out, d // gcd(int(v) % d, d))
    return out
