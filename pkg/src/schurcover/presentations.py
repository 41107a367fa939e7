"""Free products of finite cyclic groups and periodic presentations.

``F = Z/m1 * ... * Z/md`` with generators ``x_1..x_d``; a periodic presentation
is a homomorphism ``F -> G`` onto a finite group, given by the images of the
generators.  Words are kept in free-product normal form.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .groups import FiniteGroup, GroupError, closure, element_order
from .linalg import AbelianGroup


class PresentationError(ValueError):
    pass


@dataclass(frozen=True)
class FreeProduct:
    periods: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "periods", tuple(int(m) for m in self.periods))
        for i, m in enumerate(self.periods):
            if m < 1:
                raise PresentationError(f"period {m} at index {i} must be positive")

    @property
    def rank(self) -> int:
        return len(self.periods)

    def abelianization(self) -> AbelianGroup:
        return AbelianGroup.from_orders([m for m in self.periods if m > 1])

    def __str__(self) -> str:
        return " * ".join(f"Z{m}" for m in self.periods) or "1"


Syllable = tuple[int, int]


@dataclass(frozen=True)
class Word:
    """Reduced word: syllables ``(i, e)`` with ``0 < e < m_i`` and no equal neighbours."""

    free: FreeProduct
    syllables: tuple[Syllable, ...] = ()

    def __mul__(self, other: "Word") -> "Word":
        if other.free != self.free:
            raise PresentationError("words live in different free products")
        return reduce_word(self.free, self.syllables + other.syllables)

    def inverse(self) -> "Word":
        m = self.free.periods
        return Word(self.free, tuple((i, m[i] - e) for i, e in reversed(self.syllables)))

    def __pow__(self, k: int) -> "Word":
        base = self if k >= 0 else self.inverse()
        out = Word(self.free)
        for _ in range(abs(k)):
            out = out * base
        return out

    def letters(self) -> list[int]:
        """Expansion into positive letters ``x_i`` (every inverse is a positive power)."""
        out = []
        for i, e in self.syllables:
            out.extend([i] * e)
        return out

    def exponent_sums(self) -> tuple[int, ...]:
        sums = [0] * self.free.rank
        for i, e in self.syllables:
            sums[i] = (sums[i] + e) % self.free.periods[i]
        return tuple(sums)

    def is_identity(self) -> bool:
        return not self.syllables

    def __len__(self) -> int:
        return len(self.syllables)

    def __str__(self) -> str:
        if not self.syllables:
            return "1"
        return "".join(f"x{i + 1}" + (f"^{e}" if e != 1 else "") for i, e in self.syllables)


def reduce_word(F: FreeProduct, raw: Iterable[Sequence[int]]) -> Word:
    """Normal form of a product of syllables ``(i, e)``; ``e`` may be any integer."""
    stack: list[list[int]] = []
    m = F.periods
    for syl in raw:
        i, e = int(syl[0]), int(syl[1])
        if not 0 <= i < F.rank:
            raise PresentationError(f"generator index {i} outside 0..{F.rank - 1}")
        e %= m[i]
        if e == 0:
            continue
        if stack and stack[-1][0] == i:
            e2 = (stack[-1][1] + e) % m[i]
            if e2:
                stack[-1][1] = e2
            else:
                stack.pop()
        else:
            stack.append([i, e])
    return Word(F, tuple((i, e) for i, e in stack))


def generator_word(F: FreeProduct, i: int, e: int = 1) -> Word:
    return reduce_word(F, [(i, e)])


@dataclass(frozen=True)
class PeriodicPresentation:
    """``F -> G`` sending ``x_i`` to ``images[i]``."""

    free: FreeProduct
    group: FiniteGroup = field(repr=False)
    images: tuple[int, ...]
    surjective: bool
    locally_unitary: bool

    @property
    def periods(self) -> tuple[int, ...]:
        return self.free.periods

    @property
    def rank(self) -> int:
        return self.free.rank

    def evaluate(self, w: Word) -> int:
        G = self.group
        out = 0
        for i, e in w.syllables:
            out = int(G.mul(out, G.power(self.images[i], e)))
        return out

    def require_surjective(self) -> None:
        if not self.surjective:
            raise PresentationError("presentation is not surjective; cover constructions need a surjection")

    def describe(self) -> str:
        imgs = ", ".join(self.group.label(g) for g in self.images)
        return f"{self.free} -> {self.group.name or 'G'} [{imgs}]"


def make_presentation(periods: Sequence[int] | FreeProduct, G: FiniteGroup, images: Sequence[int]) -> PeriodicPresentation:
    F = periods if isinstance(periods, FreeProduct) else FreeProduct(tuple(periods))
    images = tuple(G.element(g) for g in images)
    if len(images) != F.rank:
        raise PresentationError(f"{F.rank} periods but {len(images)} images")
    orders = G.element_orders()
    for i, (m, g) in enumerate(zip(F.periods, images)):
        if m % int(orders[g]):
            raise PresentationError(
                f"period {m} at index {i} is not a multiple of the order {int(orders[g])} of its image"
            )
    surjective = closure(G, images).size == G.order
    lu = all(int(orders[g]) == m for m, g in zip(F.periods, images))
    return PeriodicPresentation(F, G, images, surjective, lu)


@dataclass(frozen=True)
class GeneratingSystem:
    group: FiniteGroup = field(repr=False)
    elements: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(int(g) for g in self.elements))
        if closure(self.group, self.elements).size != self.group.order:
            raise GroupError("elements do not generate the group")

    @property
    def periods(self) -> tuple[int, ...]:
        o = self.group.element_orders()
        return tuple(int(o[g]) for g in self.elements)

    def presentation(self) -> PeriodicPresentation:
        return make_presentation(self.periods, self.group, self.elements)


def generating_system(G: FiniteGroup, elements: Sequence) -> GeneratingSystem:
    return GeneratingSystem(G, tuple(G.element(g) for g in elements))


def standard_presentation(G: FiniteGroup, elements: Sequence | None = None) -> PeriodicPresentation:
    """Locally unitary presentation on the given (or a default) generating set."""
    from .groups import designated_generators

    elems = designated_generators(G) if elements is None else [G.element(g) for g in elements]
    return GeneratingSystem(G, tuple(elems)).presentation()


def cayley_presentation(G: FiniteGroup) -> PeriodicPresentation:
    """One free factor ``Z/o(g)`` per element ``g`` (identity included), ``x_g -> g``."""
    orders = G.element_orders()
    return make_presentation([int(o) for o in orders], G, list(range(G.order)))


@dataclass(frozen=True)
class Signature:
    periods: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "periods", tuple(int(m) for m in self.periods))
        if any(m < 1 for m in self.periods):
            raise PresentationError("signature entries must be positive")

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.periods)) + ")"

    def __len__(self) -> int:
        return len(self.periods)


def product_element(G: FiniteGroup, elements: Sequence[int]) -> int:
    return G.product(elements)


def signature_of(X: GeneratingSystem) -> Signature:
    G = X.group
    last = product_element(G, X.elements)
    return Signature(X.periods + (element_order(G, last),))


def promote_signature(sig: Signature | Sequence[int]) -> Signature:
    periods = sig.periods if isinstance(sig, Signature) else tuple(sig)
    return Signature(tuple(periods) + (1,))


@dataclass(frozen=True)
class ClonedPresentation:
    presentation: PeriodicPresentation
    star: Word
    origin: tuple[int, ...]  # original generator index of each clone


def clone_presentation(P: PeriodicPresentation) -> ClonedPresentation:
    """Repeat generator ``i`` exactly ``m_i`` times; ``star`` is the product of all clones."""
    P.require_surjective()
    periods, images, origin = [], [], []
    for i, (m, g) in enumerate(zip(P.periods, P.images)):
        periods.extend([m] * m)
        images.extend([g] * m)
        origin.extend([i] * m)
    Q = make_presentation(periods, P.group, images)
    star = reduce_word(Q.free, [(k, 1) for k in range(Q.rank)])
    return ClonedPresentation(Q, star, tuple(origin))


def word_image(P: PeriodicPresentation, w: Word) -> int:
    return P.evaluate(w)


def random_word(F: FreeProduct, length: int, rng: np.random.Generator) -> list[tuple[int, int]]:
    if F.rank == 0:
        return []
    idx = rng.integers(0, F.rank, size=length)
    return [(int(i), int(rng.integers(-3 * F.periods[i], 3 * F.periods[i] + 1))) for i in idx]
