"""Sparse integer degrees and the componentwise partial order.

A degree is a finitely supported integer vector indexed by 1, 2, 3, ...
The nonnegative degrees form the monoid Q, and ``g <= h`` means every
component of ``h - g`` is nonnegative.  Two finite descriptions of
regions recur throughout the package:

* a :class:`SupportDescriptor` is a finite set of lower bounds, denoting
  the union of the upward cones ``lb + Q``;
* a :class:`Window` is a finite set of ceiling degrees, denoting the
  downward-closed region of everything below some ceiling element.

Their intersection is always finite, which is what makes every
computation here terminate.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping


class WindowError(Exception):
    """A degree, or a whole region, escaped the window it was promised in."""


@dataclass(frozen=True)
class Degree:
    """Finitely supported integer vector, stored as (index, coefficient) pairs.

    Indices are 1-based and strictly increasing; zero coefficients are
    never stored, so equality of entry tuples is equality of vectors.
    """

    entries: tuple[tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        previous = 0
        for index, coeff in self.entries:
            if index <= previous:
                raise ValueError(f"indices must be >= 1 and strictly increasing: {self.entries}")
            if coeff == 0:
                raise ValueError(f"zero coefficient stored at index {index}")
            previous = index

    @staticmethod
    def of(items: Mapping[int, int] | Iterable[tuple[int, int]]) -> "Degree":
        pairs = items.items() if isinstance(items, Mapping) else items
        merged: dict[int, int] = {}
        for index, coeff in pairs:
            merged[index] = merged.get(index, 0) + coeff
        return Degree(tuple(sorted((i, c) for i, c in merged.items() if c)))

    def coeff(self, index: int) -> int:
        for i, c in self.entries:
            if i == index:
                return c
        return 0

    def __add__(self, other: "Degree") -> "Degree":
        return Degree.of(list(self.entries) + list(other.entries))

    def __neg__(self) -> "Degree":
        return Degree(tuple((i, -c) for i, c in self.entries))

    def __sub__(self, other: "Degree") -> "Degree":
        return self + (-other)

    def scaled(self, factor: int) -> "Degree":
        if factor == 0:
            return ZERO
        return Degree(tuple((i, factor * c) for i, c in self.entries))

    def is_nonnegative(self) -> bool:
        """Membership in Q (stored coefficients are nonzero by invariant)."""
        return all(c > 0 for _, c in self.entries)

    def total(self) -> int:
        return sum(c for _, c in self.entries)

    def max_index(self) -> int:
        return self.entries[-1][0] if self.entries else 0

    def dense(self, width: int) -> tuple[int, ...]:
        lookup = dict(self.entries)
        return tuple(lookup.get(i, 0) for i in range(1, width + 1))

    def to_json(self) -> list[list[int]]:
        return [[i, c] for i, c in self.entries]

    def __str__(self) -> str:
        if not self.entries:
            return "0"
        parts = []
        for i, c in self.entries:
            term = f"e{i}" if abs(c) == 1 else f"{abs(c)}e{i}"
            parts.append(("-" if c < 0 else "+") + term)
        joined = "".join(parts)
        return joined[1:] if joined.startswith("+") else joined


ZERO = Degree()


def unit(index: int) -> Degree:
    """The standard basis degree e_index."""
    return Degree(((index, 1),))


def degree(*coords: int) -> Degree:
    """Degree from dense leading coordinates: degree(2, 0, -1) = 2e1 - e3."""
    return Degree.of(enumerate(coords, start=1))


def leq_q(g: Degree, h: Degree) -> bool:
    """The partial order induced by Q: g <= h iff h - g has no negative component."""
    return (h - g).is_nonnegative()


def componentwise_min(g: Degree, h: Degree) -> Degree:
    indices = {i for i, _ in g.entries} | {i for i, _ in h.entries}
    return Degree.of({i: min(g.coeff(i), h.coeff(i)) for i in indices})


def grlex_sorted(degrees: Iterable[Degree]) -> list[Degree]:
    """Sort by total, ties broken lexicographically on dense coordinates.

    This is a linear extension of the partial order: g strictly below h
    forces total(g) < total(h), so the recursion in series inversion may
    walk any downset in this order.
    """
    items = list(degrees)
    width = max((d.max_index() for d in items), default=0)
    return sorted(items, key=lambda d: (d.total(), d.dense(width)))


def enumerate_downset_q(u: Degree) -> list[Degree]:
    """All of Q below u, in graded-lex order; empty when u has a negative component."""
    if not u.is_nonnegative():
        return []
    indices = [i for i, _ in u.entries]
    ranges = [range(c + 1) for _, c in u.entries]
    found = [Degree.of(zip(indices, combo)) for combo in itertools.product(*ranges)]
    return grlex_sorted(found)


@dataclass(frozen=True)
class SupportDescriptor:
    """Finite lower-bound set describing the union of the cones ``lb + Q``."""

    lower_bounds: tuple[Degree, ...] = ()

    @staticmethod
    def of(bounds: Iterable[Degree]) -> "SupportDescriptor":
        distinct = set(bounds)
        # a bound dominated by another describes a smaller cone and is redundant
        keep = [b for b in distinct if not any(o != b and leq_q(o, b) for o in distinct)]
        return SupportDescriptor(tuple(grlex_sorted(keep)))

    @property
    def is_empty(self) -> bool:
        return not self.lower_bounds

    def contains(self, g: Degree) -> bool:
        return any(leq_q(lb, g) for lb in self.lower_bounds)

    def __add__(self, other: "SupportDescriptor") -> "SupportDescriptor":
        """Minkowski sum: bounds every pairwise sum of the described sets."""
        return SupportDescriptor.of(
            a + b for a in self.lower_bounds for b in other.lower_bounds
        )

    def union(self, other: "SupportDescriptor") -> "SupportDescriptor":
        return SupportDescriptor.of(self.lower_bounds + other.lower_bounds)

    def translate(self, g: Degree) -> "SupportDescriptor":
        return SupportDescriptor.of(lb + g for lb in self.lower_bounds)


EMPTY_SUPPORT = SupportDescriptor()
FULL_Q = SupportDescriptor((ZERO,))


@dataclass(frozen=True)
class Window:
    """Finite ceiling set; the region is every degree below some ceiling element.

    Regions are downward closed, so membership of g certifies membership
    of everything below g.  Ceilings are kept verbatim (dominated elements
    included); membership scans all of them.
    """

    ceiling: tuple[Degree, ...] = ()

    @staticmethod
    def of(degrees: Iterable[Degree]) -> "Window":
        return Window(tuple(grlex_sorted(set(degrees))))

    @property
    def is_empty(self) -> bool:
        return not self.ceiling

    def contains(self, g: Degree) -> bool:
        return any(leq_q(g, u) for u in self.ceiling)

    def covers(self, other: "Window") -> bool:
        """Whether the other region is contained in this one."""
        return all(self.contains(u) for u in other.ceiling)

    def intersect(self, other: "Window") -> "Window":
        # exact for the componentwise order: below u and below v iff below min(u, v)
        minima = {componentwise_min(u, v) for u in self.ceiling for v in other.ceiling}
        keep = [m for m in minima if not any(o != m and leq_q(m, o) for o in minima)]
        return Window.of(keep)

    def translate(self, g: Degree) -> "Window":
        return Window.of(u + g for u in self.ceiling)


def candidate_degrees(support: SupportDescriptor, window: Window) -> list[Degree]:
    """The finite set (support cones) ∩ (window region), in graded-lex order.

    Every nonzero coefficient of a series with this support and window
    lives here; it is the enumeration grid for all degreewise loops.
    """
    found: set[Degree] = set()
    for lb in support.lower_bounds:
        for u in window.ceiling:
            for p in enumerate_downset_q(u - lb):
                found.add(lb + p)
    return grlex_sorted(found)


def decompositions(
    g: Degree, a: SupportDescriptor, b: SupportDescriptor
) -> list[tuple[Degree, Degree]]:
    """All pairs (u, v) with u in a's cones, v in b's cones, u + v = g.

    Finiteness: u is pinned between some lower bound of a and g minus a
    lower bound of b, a box.
    """
    pairs: set[tuple[Degree, Degree]] = set()
    for la in a.lower_bounds:
        for lb in b.lower_bounds:
            for p in enumerate_downset_q(g - la - lb):
                u = la + p
                pairs.add((u, g - u))
    width = max((max(u.max_index(), v.max_index()) for u, v in pairs), default=0)

    def key(pair: tuple[Degree, Degree]):
        u, v = pair
        return (u.total(), u.dense(width), v.dense(width))

    return sorted(pairs, key=key)
