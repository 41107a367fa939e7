"""Explicit finite groups given by multiplication tables.

Elements are the indices ``0..n-1`` with ``0`` the identity.  Any object with
``order``, ``mul(a, b)`` (vectorized over numpy arrays) and ``inv(a)`` can be
used where only products are needed; :class:`FiniteGroup` and the implicit
extension groups of :mod:`schurcover.hopf` both satisfy that protocol.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, Sequence

import numpy as np
from sympy import factorint

from .linalg import AbelianGroup, lcm

DEFAULT_PERM_CAP = 20000
DEFAULT_ISO_CAP = 512
FULL_ASSOC_LIMIT = 256


class GroupError(ValueError):
    pass


class FiniteGroup:
    """A finite group stored as a full multiplication table."""

    def __init__(
        self,
        table,
        name: str | None = None,
        labels: Sequence[str] | None = None,
        aliases: dict[str, int] | None = None,
        perms: np.ndarray | None = None,
        check: bool = True,
        seed: int = 0,
    ):
        T = np.asarray(table)
        if T.ndim != 2 or T.shape[0] != T.shape[1] or T.shape[0] == 0:
            raise GroupError("multiplication table must be a nonempty square array")
        n = T.shape[0]
        self.table = T.astype(np.int32 if n < 2**31 else np.int64, copy=False)
        self.order = n
        self.name = name
        self.labels = list(labels) if labels is not None else [str(i) for i in range(n)]
        if len(self.labels) != n:
            raise GroupError("label count does not match order")
        self.aliases = dict(aliases or {})
        self.perms = perms
        if check:
            self._validate(seed)
        inv = np.empty(n, dtype=np.int64)
        rows, cols = np.nonzero(self.table == 0)
        inv[rows] = cols
        self.inv_table = inv
        self._orders = None
        self._label_index = None

    # construction checks -------------------------------------------------

    def _validate(self, seed: int) -> None:
        T = self.table
        n = self.order
        if T.min() < 0 or T.max() >= n:
            raise GroupError("table entries out of range")
        ar = np.arange(n)
        if not (np.array_equal(T[0], ar) and np.array_equal(T[:, 0], ar)):
            raise GroupError("element 0 is not a two-sided identity")
        srt = np.sort(T, axis=1)
        bad = np.nonzero((srt != ar).any(axis=1))[0]
        if bad.size:
            raise GroupError(f"row {int(bad[0])} of the table is not a permutation")
        srt = np.sort(T, axis=0)
        bad = np.nonzero((srt != ar[:, None]).any(axis=0))[0]
        if bad.size:
            raise GroupError(f"column {int(bad[0])} of the table is not a permutation")
        if n <= FULL_ASSOC_LIMIT:
            for a in range(n):
                # (a b) c  vs  a (b c) for all b, c
                left = T[T[a]]
                right = T[a][T]
                if not np.array_equal(left, right):
                    raise GroupError("multiplication is not associative")
        else:
            rng = np.random.default_rng(seed)
            a, b, c = rng.integers(0, n, size=(3, 10 * n))
            if not np.array_equal(T[T[a, b], c], T[a, T[b, c]]):
                raise GroupError("multiplication is not associative (sampled)")

    # basic arithmetic ----------------------------------------------------

    @property
    def identity(self) -> int:
        return 0

    def mul(self, a, b):
        return self.table[a, b]

    def inv(self, a):
        return self.inv_table[a]

    def power(self, g: int, k: int) -> int:
        if k < 0:
            g, k = int(self.inv_table[g]), -k
        result, base = 0, g
        while k:
            if k & 1:
                result = int(self.table[result, base])
            base = int(self.table[base, base])
            k >>= 1
        return result

    def product(self, elems: Iterable[int]) -> int:
        out = 0
        for e in elems:
            out = int(self.table[out, e])
        return out

    def conj(self, g: int, x: int) -> int:
        """``x^-1 g x``."""
        return int(self.table[self.table[self.inv_table[x], g], x])

    def commutator(self, a: int, b: int) -> int:
        """``a^-1 b^-1 a b``."""
        return int(commutator(self, a, b))

    def element_orders(self) -> np.ndarray:
        if self._orders is None:
            n = self.order
            ar = np.arange(n)
            orders = np.zeros(n, dtype=np.int64)
            cur = ar.copy()
            k = 1
            while (orders == 0).any():
                hit = (cur == 0) & (orders == 0)
                orders[hit] = k
                cur = self.table[cur, ar]
                k += 1
                if k > n + 1:
                    raise GroupError("element order computation did not terminate")
            self._orders = orders
        return self._orders

    @property
    def exponent(self) -> int:
        return lcm(*(int(o) for o in np.unique(self.element_orders())))

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    def right_mul_perm(self, x: int) -> np.ndarray:
        return self.table[:, x]

    # naming --------------------------------------------------------------

    def label(self, g: int) -> str:
        return self.labels[g]

    def element(self, token) -> int:
        """Resolve an index, label, alias, cycle notation or ``*``-product of those."""
        if isinstance(token, (int, np.integer)):
            g = int(token)
            if not 0 <= g < self.order:
                raise GroupError(f"element index {g} outside 0..{self.order - 1}")
            return g
        tok = str(token).strip()
        if self._label_index is None:
            self._label_index = {lab: i for i, lab in enumerate(self.labels)}
        if tok in self._label_index:
            return self._label_index[tok]
        if tok in self.aliases:
            return self.aliases[tok]
        if "*" in tok:
            return self.product(self.element(p) for p in tok.split("*"))
        if self.perms is not None and tok.startswith("("):
            return self._parse_cycles(tok)
        m = re.fullmatch(r"(.+)\^(-?\d+)", tok)
        if m:
            return self.power(self.element(m.group(1)), int(m.group(2)))
        if tok.startswith("#") and tok[1:].isdigit() and int(tok[1:]) < self.order:
            return int(tok[1:])
        raise GroupError(f"unknown element {tok!r} in {self.name or 'group'}")

    def _parse_cycles(self, tok: str) -> int:
        return perm_index(self, parse_cycles(tok, self.perms.shape[1]))

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name or '?'}, order={self.order})"


def perm_index(G: FiniteGroup, perm: Sequence[int]) -> int:
    arr = np.asarray(perm)
    hits = np.nonzero((G.perms == arr).all(axis=1))[0]
    if not hits.size:
        raise GroupError(f"permutation {list(perm)} is not in {G.name or 'group'}")
    return int(hits[0])


# ---------------------------------------------------------------------------
# constructors


def trivial_group() -> FiniteGroup:
    return FiniteGroup(np.zeros((1, 1), dtype=np.int32), name="1", labels=["1"])


def cyclic_group(n: int) -> FiniteGroup:
    if n < 1:
        raise GroupError("cyclic group order must be positive")
    ar = np.arange(n)
    T = (ar[:, None] + ar[None, :]) % n
    return FiniteGroup(T, name=f"C{n}", labels=[str(i) for i in range(n)], aliases={"a": 1 % n, "g": 1 % n})


def dihedral_group(order: int) -> FiniteGroup:
    """Dihedral group of the given order ``2n``; element ``r^k s^e`` has index ``k + n e``."""
    if order < 2 or order % 2:
        raise GroupError("dihedral group order must be even and positive")
    n = order // 2
    T = np.empty((order, order), dtype=np.int64)
    for x in range(order):
        k, a = x % n, x // n
        for y in range(order):
            l, b = y % n, y // n
            T[x, y] = (k + (l if a == 0 else -l)) % n + n * ((a + b) % 2)
    labels = []
    for x in range(order):
        k, a = x % n, x // n
        r = "" if k == 0 else ("r" if k == 1 else f"r^{k}")
        s = "s" if a else ""
        labels.append((r + s) or "1")
    return FiniteGroup(T, name=f"D{order}", labels=labels, aliases={"r": 1 % n, "s": n})


def quaternion_group() -> FiniteGroup:
    # index 2u + sign with u in (1, i, j, k)
    unit_mul = {
        (0, 0): (0, 1), (0, 1): (1, 1), (0, 2): (2, 1), (0, 3): (3, 1),
        (1, 0): (1, 1), (1, 1): (0, -1), (1, 2): (3, 1), (1, 3): (2, -1),
        (2, 0): (2, 1), (2, 1): (3, -1), (2, 2): (0, -1), (2, 3): (1, 1),
        (3, 0): (3, 1), (3, 1): (2, 1), (3, 2): (1, -1), (3, 3): (0, -1),
    }  # fmt: skip
    T = np.empty((8, 8), dtype=np.int64)
    for x in range(8):
        for y in range(8):
            u, su = divmod(x, 2)
            v, sv = divmod(y, 2)
            w, s = unit_mul[(u, v)]
            sign = (su + sv + (0 if s == 1 else 1)) % 2
            T[x, y] = 2 * w + sign
    names = ["1", "i", "j", "k"]
    labels = [("-" if x % 2 else "") + names[x // 2] for x in range(8)]
    labels[1] = "-1"
    return FiniteGroup(T, name="Q8", labels=labels, aliases={"i": 2, "j": 4, "k": 6})


def cycle_string(perm: Sequence[int]) -> str:
    seen, parts = set(), []
    for s in range(len(perm)):
        if s in seen or perm[s] == s:
            continue
        cyc, x = [], s
        while x not in seen:
            seen.add(x)
            cyc.append(x + 1)
            x = perm[x]
        sep = " " if len(perm) > 9 else ""
        parts.append("(" + sep.join(map(str, cyc)) + ")")
    return "".join(parts) or "()"


def _perm_group_from_elements(elems: np.ndarray, name: str, aliases=None) -> FiniteGroup:
    """Table for a sorted array of permutations closed under composition.

    The product ``p * q`` applies ``p`` first: ``(p*q)[x] = q[p[x]]``.
    """
    n, deg = elems.shape
    base = max(deg, 2)
    if base**deg < 2**62:
        w = base ** np.arange(deg, dtype=np.int64)[::-1]
        keys = elems.astype(np.int64) @ w
        order = np.argsort(keys)
        skeys = keys[order]
        T = np.empty((n, n), dtype=np.int64)
        for a in range(n):
            prod = elems[:, elems[a]]  # row b holds b[a[x]] = (a*b)[x]
            k = prod.astype(np.int64) @ w
            pos = np.searchsorted(skeys, k)
            T[a] = order[pos]
    else:
        index = {tuple(p): i for i, p in enumerate(elems.tolist())}
        T = np.empty((n, n), dtype=np.int64)
        for a in range(n):
            prod = elems[:, elems[a]]
            T[a] = [index[tuple(r)] for r in prod.tolist()]
    labels = [cycle_string(p) for p in elems.tolist()]
    return FiniteGroup(T, name=name, labels=labels, aliases=aliases, perms=elems)


def _closure_perms(gens: Sequence[Sequence[int]], deg: int, cap: int) -> np.ndarray:
    ident = tuple(range(deg))
    gens = [tuple(g) for g in gens]
    seen = {ident}
    frontier = [ident]
    while frontier:
        new = []
        for p in frontier:
            for g in gens:
                q = tuple(g[p[x]] for x in range(deg))
                if q not in seen:
                    seen.add(q)
                    new.append(q)
                    if len(seen) > cap:
                        raise GroupError(f"permutation group order exceeds cap {cap}")
        frontier = new
    return np.array(sorted(seen), dtype=np.int64).reshape(len(seen), deg)


def parse_cycles(text: str, degree: int | None = None) -> list[int]:
    """Parse 1-based cycle notation such as ``(1 2 3)(4 5)`` or ``(123)``."""
    text = text.strip()
    if re.sub(r"\([^()]*\)", "", text).strip():
        raise GroupError(f"malformed cycle notation {text!r}")
    cycles = []
    for cyc in re.findall(r"\(([^()]*)\)", text):
        cyc = cyc.strip()
        if not cyc:
            continue
        if " " in cyc or "," in cyc:
            pts = [int(x) for x in re.split(r"[\s,]+", cyc) if x]
        else:
            pts = [int(ch) for ch in cyc]
        if len(set(pts)) != len(pts) or min(pts) < 1:
            raise GroupError(f"malformed cycle ({cyc})")
        cycles.append([p - 1 for p in pts])
    deg = degree or max([max(c) + 1 for c in cycles] + [1])
    perm = list(range(deg))
    for c in cycles:
        step = list(range(deg))
        for a, b in zip(c, c[1:] + c[:1]):
            if a >= deg:
                raise GroupError(f"point {a + 1} outside 1..{deg}")
            step[a] = b
        perm = [step[perm[x]] for x in range(deg)]
    return perm


def permutation_group(gens: Sequence[Sequence[int] | str], degree: int | None = None, cap: int = DEFAULT_PERM_CAP,
                      name: str | None = None) -> FiniteGroup:
    """Group generated by permutations (arrays on ``0..deg-1`` or cycle strings)."""
    parsed = []
    for g in gens:
        if isinstance(g, str):
            parsed.append(g)
        else:
            parsed.append(list(g))
    if degree is None:
        degree = 1
        for g in parsed:
            if isinstance(g, str):
                nums = [int(x) for x in re.findall(r"\d+", g)] if (" " in g or "," in g) else [
                    int(ch) for ch in re.sub(r"[^0-9]", "", g)
                ]
                degree = max([degree] + nums)
            else:
                degree = max(degree, len(g))
    arrs = []
    for g in parsed:
        p = parse_cycles(g, degree) if isinstance(g, str) else list(g) + list(range(len(g), degree))
        if sorted(p) != list(range(degree)):
            raise GroupError(f"{g!r} is not a permutation of 1..{degree}")
        arrs.append(p)
    elems = _closure_perms(arrs, degree, cap)
    G = _perm_group_from_elements(elems, name or f"Perm{len(elems)}")
    for k, p in enumerate(arrs):
        G.aliases.setdefault(f"x{k + 1}", perm_index(G, p))
    return G


def symmetric_group(n: int) -> FiniteGroup:
    if not 1 <= n <= 5:
        raise GroupError("symmetric groups are available for n <= 5")
    elems = np.array(sorted(itertools.permutations(range(n))), dtype=np.int64).reshape(-1, n)
    G = _perm_group_from_elements(elems, f"S{n}")
    return G


def _parity(p: Sequence[int]) -> int:
    p = list(p)
    sign = 0
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            sign ^= 1
    return sign


def alternating_group(n: int) -> FiniteGroup:
    if not 1 <= n <= 5:
        raise GroupError("alternating groups are available for n <= 5")
    elems = [p for p in sorted(itertools.permutations(range(n))) if _parity(p) == 0]
    return _perm_group_from_elements(np.array(elems, dtype=np.int64).reshape(-1, n), f"A{n}")


def direct_product(*groups: FiniteGroup, name: str | None = None) -> FiniteGroup:
    """Lexicographic product: ``(g1, ..., gk)`` has index ``g1 * |G2...Gk| + ...``."""
    if not groups:
        return trivial_group()
    T = groups[0].table.astype(np.int64)
    labels = [[lab] for lab in groups[0].labels]
    for H in groups[1:]:
        m = H.order
        T = (T[:, None, :, None] * m + H.table[None, :, None, :]).reshape(T.shape[0] * m, T.shape[0] * m)
        labels = [a + [b] for a in labels for b in H.labels]
    text = ["(" + ",".join(lab) + ")" for lab in labels]
    text[0] = "1"
    aliases = {}
    letters = iter("abcdefghijklmnopqrstuvwxyz")
    for pos, H in enumerate(groups):
        for g in designated_generators(H):
            idx = 0
            for q, K in enumerate(groups):
                idx = idx * K.order + (g if q == pos else 0)
            aliases[next(letters)] = idx
    return FiniteGroup(T, name=name or "x".join(H.name or "?" for H in groups), labels=text, aliases=aliases,
                       check=T.shape[0] <= FULL_ASSOC_LIMIT)


def designated_generators(G: FiniteGroup) -> list[int]:
    """The standard generators of a named group, else a greedy generating set."""
    nm = G.name or ""
    if G.order == 1:
        return []
    if re.fullmatch(r"C\d+", nm):
        return [1]
    if re.fullmatch(r"D\d+", nm) and G.aliases.get("s") is not None:
        return [G.aliases["r"], G.aliases["s"]] if G.order > 2 else [G.aliases["s"]]
    if nm == "Q8":
        return [G.aliases["i"], G.aliases["j"]]
    return generating_set(G)


def group_from_table(table, name: str | None = None, labels=None) -> FiniteGroup:
    """Build from an arbitrary table, relabelling so the identity becomes index 0."""
    T = np.asarray(table, dtype=np.int64)
    n = T.shape[0]
    if T.shape != (n, n):
        raise GroupError("table must be square")
    ar = np.arange(n)
    ids = [e for e in range(n) if np.array_equal(T[e], ar) and np.array_equal(T[:, e], ar)]
    if not ids:
        for r in range(n):
            if sorted(T[r].tolist()) != ar.tolist():
                raise GroupError(f"row {r} of the table is not a permutation")
        raise GroupError("table has no identity element")
    e = ids[0]
    perm = [e] + [x for x in range(n) if x != e]
    pos = np.empty(n, dtype=np.int64)
    pos[perm] = ar
    newT = pos[T[np.ix_(perm, perm)]]
    if labels is not None:
        labels = [labels[x] for x in perm]
    return FiniteGroup(newT, name=name, labels=labels)


_NAMED = re.compile(r"(?:C|Z)(\d+)|D(\d+)|Q8|S(\d)|A(\d)|1|trivial")


def build_group(group_name: str) -> FiniteGroup:
    """Named groups: ``C6``/``Z6``, ``D8`` (order 8), ``Q8``, ``S4``, ``A5``, ``1``, products ``C2xC2``."""
    group_name = group_name.strip()
    parts = [p for p in re.split(r"\s*[x×]\s*", group_name) if p]
    if not parts:
        raise GroupError("empty group name")
    factors = []
    for p in parts:
        m = re.fullmatch(r"(.+)\^(\d+)", p)
        reps = 1
        if m:
            p, reps = m.group(1), int(m.group(2))
        mm = _NAMED.fullmatch(p)
        if not mm:
            raise GroupError(f"unknown group name {p!r}")
        if mm.group(1):
            G = cyclic_group(int(mm.group(1)))
        elif mm.group(2):
            G = dihedral_group(int(mm.group(2)))
        elif p == "Q8":
            G = quaternion_group()
        elif mm.group(3):
            G = symmetric_group(int(mm.group(3)))
        elif mm.group(4):
            G = alternating_group(int(mm.group(4)))
        else:
            G = trivial_group()
        factors.extend([G] * reps)
    if len(factors) == 1:
        return factors[0]
    return direct_product(*factors, name=group_name)


# ---------------------------------------------------------------------------
# element orders


def subgroup_group(G: FiniteGroup, elems: Sequence[int], name: str | None = None) -> FiniteGroup:
    """The subgroup on ``elems`` as a group in its own right (sorted, identity first)."""
    el = np.asarray(sorted(int(x) for x in elems), dtype=np.int64)
    pos = np.full(G.order, -1, dtype=np.int64)
    pos[el] = np.arange(el.size)
    sub = pos[G.table[np.ix_(el, el)]]
    if (sub < 0).any():
        raise GroupError("elements are not closed under multiplication")
    return FiniteGroup(sub, name=name, labels=[G.labels[x] for x in el],
                       perms=None if G.perms is None else G.perms[el])


def element_order(G, g: int, method: str = "power") -> int:
    """Order of ``g``; ``method`` is ``"power"`` (divisors of |G|) or ``"naive"``."""
    if method == "naive":
        k, x = 1, g
        while x != 0:
            x = int(G.mul(x, g))
            k += 1
            if k > G.order:
                raise GroupError("element order exceeds group order")
        return k
    if method != "power":
        raise ValueError(f"unknown method {method!r}")
    k = G.order
    for p in factorint(k):
        p = int(p)
        while k % p == 0 and _power(G, g, k // p) == 0:
            k //= p
    return k


def _power(G, g: int, k: int) -> int:
    result, base = 0, g
    while k:
        if k & 1:
            result = int(G.mul(result, base))
        base = int(G.mul(base, base))
        k >>= 1
    return result


# ---------------------------------------------------------------------------
# subgroups


@dataclass(frozen=True)
class Subgroup:
    parent: FiniteGroup = field(repr=False)
    elements: tuple[int, ...]
    is_normal: bool

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, g: int) -> bool:
        return g in self._set

    @property
    def _set(self) -> frozenset:
        return frozenset(self.elements)


def closure(G, gens: Iterable[int]) -> np.ndarray:
    """Sorted elements of the subgroup generated by ``gens``."""
    gens = sorted({int(g) for g in gens if int(g) != 0})
    n = G.order
    mark = np.zeros(n, dtype=bool)
    mark[0] = True
    frontier = np.array([0], dtype=np.int64)
    while frontier.size:
        new = []
        for g in gens:
            img = np.asarray(G.mul(frontier, g))
            fresh = img[~mark[img]]
            if fresh.size:
                fresh = np.unique(fresh)
                mark[fresh] = True
                new.append(fresh)
        frontier = np.concatenate(new) if new else np.array([], dtype=np.int64)
    return np.nonzero(mark)[0]


def _conjugate_all(G, elems: np.ndarray, x: int) -> np.ndarray:
    """``x^-1 e x`` for every ``e`` in ``elems``."""
    return np.asarray(G.mul(G.mul(G.inv(x), elems), x))


def is_normal(G, elems: Sequence[int]) -> bool:
    mask = np.zeros(G.order, dtype=bool)
    e = np.asarray(elems, dtype=np.int64)
    mask[e] = True
    for x in generating_set(G):
        if not mask[_conjugate_all(G, e, x)].all():
            return False
    return True


def subgroup(G: FiniteGroup, gens: Iterable[int]) -> Subgroup:
    el = closure(G, gens)
    return Subgroup(G, tuple(int(x) for x in el), is_normal(G, el))


def normal_closure(G, gens: Iterable[int]) -> np.ndarray:
    current = closure(G, gens)
    ggens = generating_set(G)
    while True:
        mask = np.zeros(G.order, dtype=bool)
        mask[current] = True
        extra = []
        for x in ggens:
            conj = _conjugate_all(G, current, x)
            extra.extend(int(c) for c in np.unique(conj[~mask[conj]]))
        if not extra:
            return current
        current = closure(G, list(current) + extra)


def generating_set(G) -> list[int]:
    """Deterministic small generating set: elements of largest order first."""
    cached = getattr(G, "_gens_cache", None)
    if cached is not None:
        return list(cached)
    n = G.order
    if hasattr(G, "generators"):
        gens = G.generators()
    elif n == 1:
        gens = []
    else:
        orders = G.element_orders()
        cand = sorted(range(1, n), key=lambda x: (-int(orders[x]), x))
        mask = np.zeros(n, dtype=bool)
        mask[0] = True
        gens = []
        for x in cand:
            if mask[x]:
                continue
            gens.append(x)
            el = closure(G, gens)
            mask[:] = False
            mask[el] = True
            if el.size == n:
                break
    try:
        G._gens_cache = tuple(gens)
    except AttributeError:
        pass
    return gens


def generates(G, elems: Sequence[int]) -> bool:
    return closure(G, elems).size == G.order


def commutator(G, a, b):
    """``a^-1 b^-1 a b`` (vectorized)."""
    return G.mul(G.mul(G.mul(G.inv(a), G.inv(b)), a), b)


def derived_subgroup(G) -> np.ndarray:
    gens = generating_set(G)
    comms = {int(commutator(G, a, b)) for a in gens for b in gens}
    return normal_closure(G, comms)


def center(G) -> np.ndarray:
    allg = np.arange(G.order)
    mask = np.ones(G.order, dtype=bool)
    for x in generating_set(G):
        mask &= np.asarray(G.mul(allg, x)) == np.asarray(G.mul(x, allg))
    return np.nonzero(mask)[0]


def abelian_invariants(G) -> AbelianGroup:
    """Invariant factors of an abelian group given by its table.

    For each prime ``p`` the count ``c_k`` of ``p``-elements of order at most
    ``p^k`` equals ``p^(sum_j min(k, e_j))``, so ``log_p(c_k / c_(k-1))`` is the
    number of cyclic ``p``-factors of order at least ``p^k``.
    """
    ppart_orders = G.element_orders()
    n = G.order
    result = []
    for p in factorint(n):
        p = int(p)
        parts = np.array([_ppart(int(o), p) for o in ppart_orders if _ppart(int(o), p) == int(o)])
        full = _ppart(n, p)
        at_least = []
        prev, k = 1, 1
        while prev < full:
            c = int((parts <= p**k).sum())
            q, r = c // prev, 0
            while q > 1:
                q //= p
                r += 1
            at_least.append(r)
            prev, k = c, k + 1
        for k, r in enumerate(at_least):
            nxt = at_least[k + 1] if k + 1 < len(at_least) else 0
            result.extend([p ** (k + 1)] * (r - nxt))
    return AbelianGroup.from_orders(result)


def _ppart(m: int, p: int) -> int:
    out = 1
    while m % p == 0:
        m //= p
        out *= p
    return out


@dataclass(frozen=True)
class StructureReport:
    derived: Subgroup
    center: Subgroup
    abelianization: AbelianGroup
    exponent: int


def structure_report(G: FiniteGroup) -> StructureReport:
    D = derived_subgroup(G)
    Z = center(G)
    Q, _ = quotient(G, D)
    return StructureReport(
        Subgroup(G, tuple(int(x) for x in D), True),
        Subgroup(G, tuple(int(x) for x in Z), True),
        abelian_invariants(Q),
        G.exponent,
    )


def abelianization(G: FiniteGroup) -> AbelianGroup:
    Q, _ = quotient(G, derived_subgroup(G))
    return abelian_invariants(Q)


def quotient(G: FiniteGroup, N, name: str | None = None) -> tuple[FiniteGroup, np.ndarray]:
    """``G/N`` and the projection array ``g -> coset index`` (identity coset is 0)."""
    elems = np.asarray(N.elements if isinstance(N, Subgroup) else N, dtype=np.int64)
    if not is_normal(G, elems):
        raise GroupError("subgroup is not normal")
    T = G.table
    reps = T[:, elems].min(axis=1)
    uniq = np.unique(reps)
    pos = np.full(G.order, -1, dtype=np.int64)
    pos[uniq] = np.arange(uniq.size)
    proj = pos[reps]
    Q = proj[T[np.ix_(uniq, uniq)]]
    labels = [G.labels[r] + ("N" if elems.size > 1 else "") for r in uniq]
    return FiniteGroup(Q, name=name or (f"{G.name}/N" if G.name else None), labels=labels), proj


def two_generated_subgroups(G: FiniteGroup) -> list[Subgroup]:
    cyc = {}
    for g in range(G.order):
        el = tuple(int(x) for x in closure(G, [g]))
        cyc.setdefault(el, g)
    gens = sorted(cyc.values())
    seen = {}
    for i, a in enumerate(gens):
        for b in gens[i:]:
            el = tuple(int(x) for x in closure(G, [a, b]))
            seen.setdefault(el, None)
    return [Subgroup(G, el, is_normal(G, el)) for el in sorted(seen, key=lambda e: (len(e), e))]


def normal_subgroups(G: FiniteGroup) -> list[Subgroup]:
    base = {}
    for g in range(G.order):
        el = tuple(int(x) for x in normal_closure(G, [g]))
        base.setdefault(el, None)
    found = set(base)
    frontier = list(found)
    while frontier:
        new = []
        for a in frontier:
            for b in list(base):
                el = tuple(int(x) for x in closure(G, set(a) | set(b)))
                if el not in found:
                    found.add(el)
                    new.append(el)
        frontier = new
    return [Subgroup(G, el, True) for el in sorted(found, key=lambda e: (len(e), e))]


# ---------------------------------------------------------------------------
# homomorphisms and isomorphism


def extend_homomorphism(src, gens: Sequence[int], dst, imgs: Sequence[int]) -> np.ndarray | None:
    """Extend ``gens[k] -> imgs[k]`` to a homomorphism on ``<gens>``.

    Returns an array with ``-1`` outside the generated subgroup, or ``None`` if
    the assignment is inconsistent.  Consistency on every edge ``a -> a x``
    of the Cayley graph is equivalent to being a homomorphism.
    """
    n = src.order
    phi = np.full(n, -1, dtype=np.int64)
    phi[0] = 0
    frontier = np.array([0], dtype=np.int64)
    pairs = [(int(g), int(h)) for g, h in zip(gens, imgs)]
    while frontier.size:
        new = []
        for g, h in pairs:
            tgt = np.asarray(src.mul(frontier, g), dtype=np.int64)
            val = np.asarray(dst.mul(phi[frontier], h), dtype=np.int64)
            known = phi[tgt] >= 0
            if (phi[tgt[known]] != val[known]).any():
                return None
            fresh_t, fresh_v = tgt[~known], val[~known]
            if fresh_t.size:
                fresh_t, first = np.unique(fresh_t, return_index=True)
                vals = fresh_v[first]
                # duplicates inside this batch must agree too
                chk = np.full(n, -1, dtype=np.int64)
                chk[tgt[~known]] = val[~known]
                if (chk[tgt[~known]] != val[~known]).any():
                    return None
                phi[fresh_t] = vals
                new.append(fresh_t)
        frontier = np.concatenate(new) if new else np.array([], dtype=np.int64)
    return phi


def is_homomorphism_table(src: FiniteGroup, dst: FiniteGroup, phi: np.ndarray) -> bool:
    """Full-table check ``phi(ab) = phi(a)phi(b)``."""
    return bool(np.array_equal(phi[src.table], dst.table[np.ix_(phi, phi)]))


@dataclass(frozen=True)
class IsomorphismOutcome:
    status: str  # "isomorphic", "not isomorphic" or "undecided"
    mapping: np.ndarray | None = None
    generators: tuple[int, ...] = ()
    images: tuple[int, ...] = ()
    reason: str = ""

    def __bool__(self) -> bool:
        return self.status == "isomorphic"


def _element_invariants(G: FiniteGroup) -> np.ndarray:
    orders = G.element_orders()
    Z = np.zeros(G.order, dtype=np.int64)
    Z[center(G)] = 1
    D = np.zeros(G.order, dtype=np.int64)
    D[derived_subgroup(G)] = 1
    # size of the conjugacy class via the centralizer of each element
    T = G.table
    cent = (T == T.T).sum(axis=1)
    sq = orders[T[np.arange(G.order), np.arange(G.order)]]
    return np.stack([orders, Z, D, cent, sq], axis=1)


def find_isomorphism(G: FiniteGroup, H: FiniteGroup, cap: int = DEFAULT_ISO_CAP, budget: int = 200000
                     ) -> IsomorphismOutcome:
    if G.order != H.order:
        return IsomorphismOutcome("not isomorphic", reason="orders differ")
    if G.order > cap:
        return IsomorphismOutcome("undecided", reason=f"order {G.order} exceeds cap {cap}")
    og, oh = np.sort(G.element_orders()), np.sort(H.element_orders())
    if not np.array_equal(og, oh):
        return IsomorphismOutcome("not isomorphic", reason="element order census differs")
    if derived_subgroup(G).size != derived_subgroup(H).size:
        return IsomorphismOutcome("not isomorphic", reason="derived subgroup orders differ")
    ig, ih = _element_invariants(G), _element_invariants(H)
    key = lambda row: tuple(int(v) for v in row)  # noqa: E731
    if sorted(map(key, ig)) != sorted(map(key, ih)):
        return IsomorphismOutcome("not isomorphic", reason="element invariant census differs")
    gens = generating_set(G)
    cands = [[int(y) for y in range(H.order) if key(ih[y]) == key(ig[x])] for x in gens]
    steps = [0]

    def search(k: int, imgs: list[int]):
        if k == len(gens):
            phi = extend_homomorphism(G, gens, H, imgs)
            if phi is not None and (phi >= 0).all() and np.unique(phi).size == H.order:
                return phi
            return None
        for y in cands[k]:
            steps[0] += 1
            if steps[0] > budget:
                raise _Budget()
            trial = imgs + [y]
            phi = extend_homomorphism(G, gens[: k + 1], H, trial)
            if phi is None:
                continue
            # the partial map must be injective on the generated part
            dom = phi[phi >= 0]
            if np.unique(dom).size != dom.size:
                continue
            res = search(k + 1, trial)
            if res is not None:
                return res
        return None

    try:
        phi = search(0, [])
    except _Budget:
        return IsomorphismOutcome("undecided", reason=f"search budget {budget} exhausted")
    if phi is None:
        return IsomorphismOutcome("not isomorphic", reason="exhaustive search over generator images")
    if not is_homomorphism_table(G, H, phi):
        raise GroupError("internal error: isomorphism candidate fails the table check")
    imgs = tuple(int(phi[g]) for g in gens)
    return IsomorphismOutcome("isomorphic", phi, tuple(gens), imgs)


class _Budget(Exception):
    pass


def conjugate_system(G: FiniteGroup, gens: Sequence[int], x: int) -> list[int]:
    return [G.conj(g, x) for g in gens]


def is_p_group(n: int) -> bool:
    return n == 1 or len(factorint(n)) == 1


def gcd_list(values: Iterable[int]) -> int:
    out = 0
    for v in values:
        out = gcd(out, v)
    return out
