"""Koszul complexes on variable subsets, tensored degreewise with a module.

Each degree sees only finitely many homological indices: a wedge of n
variables contributing in degree g forces n distinct variables below
g minus a support lower bound of the module, and only finitely many
variables fit.  Homology dimensions come from exact ranks, giving graded
Betti numbers, torsion dimension, and the shape of the minimal free
resolution.  A small degreewise chain-complex interface supports the
Euler-characteristic identity used by the Grothendieck layer.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Callable, Iterable, Sequence

from .degrees import (
    ZERO,
    Degree,
    SupportDescriptor,
    Window,
    WindowError,
    candidate_degrees,
    grlex_sorted,
    leq_q,
)
from .linalg import IntMatrix, is_zero, matmul, rank, zero_matrix
from .modules import (
    BasisLabel,
    ModuleExpr,
    MonomialQuotient,
    RingSpec,
    graded_piece,
    variable_quotient,
)

logger = logging.getLogger("bdfkalc")


class ChainComplexError(ValueError):
    """Consecutive differentials failed to compose to zero."""


def all_variables(ring: RingSpec) -> tuple[int, ...]:
    return tuple(range(1, len(ring.variables) + 1))


def _canonical_sequence(seq: Iterable[int]) -> tuple[int, ...]:
    return tuple(sorted(set(seq)))


@dataclass(frozen=True)
class Wedge:
    """Strictly increasing tuple of ring variable positions."""

    positions: tuple[int, ...]

    def __post_init__(self) -> None:
        if any(a >= b for a, b in zip(self.positions, self.positions[1:])):
            raise ValueError(f"wedge positions must strictly increase: {self.positions}")

    def degree(self, ring: RingSpec) -> Degree:
        result = ZERO
        for pos in self.positions:
            result = result + ring.degree_of(pos)
        return result

    def drop(self, slot: int) -> "Wedge":
        return Wedge(self.positions[:slot] + self.positions[slot + 1 :])


@dataclass(frozen=True)
class KoszulPiece:
    """Degree-g part of the n-th Koszul term tensored with the module."""

    index: int
    degree: Degree
    basis: tuple[tuple[Wedge, BasisLabel], ...]

    @property
    def dimension(self) -> int:
        return len(self.basis)


@lru_cache(maxsize=None)
def _koszul_piece(
    module: ModuleExpr, ring: RingSpec, seq: tuple[int, ...], n: int, g: Degree
) -> KoszulPiece:
    basis: list[tuple[Wedge, BasisLabel]] = []
    for combo in combinations(seq, n):
        w = Wedge(combo)
        inner = graded_piece(module, ring, g - w.degree(ring))
        basis.extend((w, label) for label in inner.basis)
    return KoszulPiece(n, g, tuple(basis))


def koszul_piece(
    module: ModuleExpr,
    ring: RingSpec,
    seq: Iterable[int],
    n: int,
    g: Degree,
    window: Window | None = None,
) -> KoszulPiece:
    """Basis of wedges paired with module basis elements of the complementary degree."""
    if window is not None and not window.contains(g):
        raise WindowError(f"degree {g} is outside the window")
    if n < 0:
        raise ValueError("homological index must be nonnegative")
    return _koszul_piece(module, ring, _canonical_sequence(seq), n, g)


def koszul_differential(
    module: ModuleExpr,
    ring: RingSpec,
    seq: Iterable[int],
    n: int,
    g: Degree,
    window: Window | None = None,
) -> IntMatrix:
    """Matrix of the n-th Koszul differential in degree g.

    Dropping the slot at position l carries sign (-1)^l (first slot
    positive, so the length-1 case is plain multiplication by the
    variable) and multiplies the module element by the dropped variable.
    """
    if n < 1:
        raise ValueError("differentials start at homological index 1")
    sequence = _canonical_sequence(seq)
    source = koszul_piece(module, ring, sequence, n, g, window)
    target = koszul_piece(module, ring, sequence, n - 1, g, window)
    index = {element: row for row, element in enumerate(target.basis)}
    matrix = zero_matrix(target.dimension, source.dimension)
    for col, (w, label) in enumerate(source.basis):
        for slot, pos in enumerate(w.positions):
            image = module.multiply_label(ring, label, pos)
            if image is None:
                continue
            sign = 1 if slot % 2 == 0 else -1
            matrix[index[(w.drop(slot), image)]][col] += sign
    return matrix


def koszul_index_bound(
    module: ModuleExpr, ring: RingSpec, seq: Iterable[int], g: Degree
) -> int:
    """An n beyond which every Koszul piece in degree g is zero.

    A contributing wedge needs all its variables below g minus some
    support lower bound of the module, so its length is at most the
    largest such variable count.
    """
    sequence = _canonical_sequence(seq)
    bound = 0
    for lb in module.lower_bounds(ring).lower_bounds:
        room = g - lb
        count = sum(1 for pos in sequence if leq_q(ring.degree_of(pos), room))
        bound = max(bound, count)
    return bound


def _homology_dimensions(
    module: ModuleExpr,
    ring: RingSpec,
    seq: tuple[int, ...],
    g: Degree,
    characteristic: int,
) -> list[int]:
    """Dimensions of the Koszul homology in degree g, indices 0..bound."""
    bound = koszul_index_bound(module, ring, seq, g)
    dims = [
        koszul_piece(module, ring, seq, n, g).dimension for n in range(bound + 2)
    ]
    ranks = [0] * (bound + 3)
    for n in range(1, bound + 2):
        if dims[n] and dims[n - 1]:
            ranks[n] = rank(
                koszul_differential(module, ring, seq, n, g), characteristic
            )
    return [dims[n] - ranks[n] - ranks[n + 1] for n in range(bound + 1)]


def tor_k(
    module: ModuleExpr,
    ring: RingSpec,
    i: int,
    g: Degree,
    window: Window | None = None,
    characteristic: int = 0,
) -> int:
    """Dimension of the i-th torsion of the module against the residue field, in degree g.

    Computed as homology of the full-variable Koszul complex tensored with
    the module; by graded symmetry of torsion this equals the i-th graded
    Betti number in degree g.
    """
    if window is not None and not window.contains(g):
        raise WindowError(f"degree {g} is outside the window")
    seq = all_variables(ring)
    dims = _homology_dimensions(module, ring, seq, g, characteristic)
    return dims[i] if 0 <= i < len(dims) else 0


def parallel_map(fn: Callable, items: Sequence, threads: int | None = None) -> list:
    """Order-preserving map; results are independent of the thread count."""
    items = list(items)
    if threads is None or threads <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


@dataclass(frozen=True)
class BettiTable:
    """Graded Betti numbers on a window: entries (index, degree, value)."""

    window: Window
    entries: tuple[tuple[int, Degree, int], ...]

    def beta(self, i: int, g: Degree) -> int:
        for index, deg, value in self.entries:
            if index == i and deg == g:
                return value
        return 0

    def total(self, i: int) -> int:
        return sum(value for index, _, value in self.entries if index == i)

    def max_index(self) -> int:
        return max((index for index, _, _ in self.entries), default=0)

    def rows(self) -> tuple[tuple[int, Degree, int], ...]:
        return self.entries

    def __str__(self) -> str:
        if not self.entries:
            return "(empty betti table)"
        lines = ["    i  degree          beta"]
        for i, g, value in self.entries:
            lines.append(f"    {i:<2} {str(g):<15} {value}")
        return "\n".join(lines)


def betti_table(
    module: ModuleExpr,
    ring: RingSpec,
    window: Window,
    characteristic: int = 0,
    threads: int | None = None,
) -> BettiTable:
    """All graded Betti numbers with degree inside the window.

    Per degree, homological indices run up to the finite wedge bound, so
    the table is total on its domain.
    """
    seq = all_variables(ring)
    degrees = candidate_degrees(module.lower_bounds(ring), window)
    logger.debug("betti table over %d degrees", len(degrees))

    def per_degree(g: Degree) -> list[tuple[int, Degree, int]]:
        dims = _homology_dimensions(module, ring, seq, g, characteristic)
        return [(i, g, value) for i, value in enumerate(dims) if value]

    collected = parallel_map(per_degree, degrees, threads)
    order = {g: rank_ for rank_, g in enumerate(degrees)}
    entries = sorted(
        (entry for chunk in collected for entry in chunk),
        key=lambda entry: (entry[0], order[entry[1]]),
    )
    return BettiTable(window, tuple(entries))


def torsion_dimension(
    module: ModuleExpr,
    ring: RingSpec,
    g: Degree,
    window: Window,
    characteristic: int = 0,
) -> int:
    """Largest homological index with a nonzero Betti number below g.

    Window regions are downward closed, so requiring g in the window puts
    the whole downset of g inside it.  This equals the projective
    dimension at g.  A module with no torsion at all below g (nothing of
    its support lies there) reports 0.
    """
    if not window.contains(g):
        raise WindowError(f"the downset of {g} exceeds the window")
    seq = all_variables(ring)
    best = 0
    for h in candidate_degrees(module.lower_bounds(ring), Window.of([g])):
        dims = _homology_dimensions(module, ring, seq, h, characteristic)
        for i, value in enumerate(dims):
            if value and i > best:
                best = i
    return best


def minimal_resolution_shape(
    module: ModuleExpr,
    ring: RingSpec,
    window: Window,
    characteristic: int = 0,
    threads: int | None = None,
) -> tuple[tuple[Degree, ...], ...]:
    """Shift multisets of the minimal free resolution, one per homological index.

    In a minimal resolution the i-th term repeats the shift g exactly
    beta(i, g) times; the alternating sum of the terms' multiplicity
    series reproduces the module's K-series on the window.
    """
    table = betti_table(module, ring, window, characteristic, threads)
    if not table.entries:
        return ((),)
    shapes: list[tuple[Degree, ...]] = []
    for i in range(table.max_index() + 1):
        shifts: list[Degree] = []
        for index, g, value in table.entries:
            if index == i:
                shifts.extend([g] * value)
        shapes.append(tuple(grlex_sorted(shifts)))
    return tuple(shapes)


@dataclass(frozen=True)
class KoszulTensorComplex:
    """The Koszul complex of a variable subset, tensored with a module."""

    module: ModuleExpr
    ring: RingSpec
    sequence: tuple[int, ...]

    @staticmethod
    def of(module: ModuleExpr, ring: RingSpec, seq: Iterable[int] | None = None):
        sequence = all_variables(ring) if seq is None else _canonical_sequence(seq)
        return KoszulTensorComplex(module, ring, sequence)

    @property
    def support(self) -> SupportDescriptor:
        return self.module.lower_bounds(self.ring)

    def index_bound(self, g: Degree) -> int:
        return koszul_index_bound(self.module, self.ring, self.sequence, g)

    def piece_dim(self, n: int, g: Degree) -> int:
        return koszul_piece(self.module, self.ring, self.sequence, n, g).dimension

    def differential(self, n: int, g: Degree) -> IntMatrix:
        return koszul_differential(self.module, self.ring, self.sequence, n, g)


@dataclass(frozen=True)
class ZeroDifferentialComplex:
    """A complex whose differentials all vanish: homology equals the terms."""

    modules: tuple[ModuleExpr, ...]
    ring: RingSpec

    @property
    def support(self) -> SupportDescriptor:
        result = SupportDescriptor()
        for m in self.modules:
            result = result.union(m.lower_bounds(self.ring))
        return result

    def index_bound(self, g: Degree) -> int:
        return len(self.modules)

    def piece_dim(self, n: int, g: Degree) -> int:
        if n >= len(self.modules):
            return 0
        return graded_piece(self.modules[n], self.ring, g).dimension

    def differential(self, n: int, g: Degree) -> IntMatrix:
        return zero_matrix(self.piece_dim(n - 1, g), self.piece_dim(n, g))


@dataclass(frozen=True)
class AugmentedKoszulComplex:
    """Full-variable Koszul complex of the ring with the residue field appended.

    The term at index 0 is the quotient by all variables, index n >= 1
    holds the (n-1)-st Koszul term; the whole complex is exact, so every
    homology dimension vanishes.
    """

    ring: RingSpec

    @property
    def support(self) -> SupportDescriptor:
        return SupportDescriptor.of([ZERO])

    def _field(self) -> MonomialQuotient:
        return variable_quotient(self.ring, all_variables(self.ring))

    def index_bound(self, g: Degree) -> int:
        from .modules import RING_MODULE

        return koszul_index_bound(RING_MODULE, self.ring, all_variables(self.ring), g) + 1

    def piece_dim(self, n: int, g: Degree) -> int:
        from .modules import RING_MODULE

        if n == 0:
            return graded_piece(self._field(), self.ring, g).dimension
        return koszul_piece(RING_MODULE, self.ring, all_variables(self.ring), n - 1, g).dimension

    def differential(self, n: int, g: Degree) -> IntMatrix:
        from .modules import RING_MODULE

        if n == 1:
            field = self._field()
            source = graded_piece(RING_MODULE, self.ring, g)
            target = graded_piece(field, self.ring, g)
            index = {label.monomial: row for row, label in enumerate(target.basis)}
            matrix = zero_matrix(target.dimension, source.dimension)
            for col, label in enumerate(source.basis):
                row = index.get(label.monomial)
                if row is not None:
                    matrix[row][col] = 1
            return matrix
        return koszul_differential(RING_MODULE, self.ring, all_variables(self.ring), n - 1, g)


def _complex_snapshot(complex_, g: Degree, characteristic: int) -> tuple[list[int], list[int]]:
    """Term dimensions and homology dimensions of a complex in one degree.

    Verifies the chain law along the way and raises ChainComplexError on a
    nonzero composite.
    """
    bound = complex_.index_bound(g)
    dims = [complex_.piece_dim(n, g) for n in range(bound + 2)]
    mats = [complex_.differential(n, g) for n in range(1, bound + 2)]
    for n in range(1, bound + 1):
        if dims[n] and not is_zero(matmul(mats[n - 1], mats[n])):
            raise ChainComplexError(
                f"differentials {n} and {n + 1} do not compose to zero at {g}"
            )
    ranks = [0] * (bound + 3)
    for n in range(1, bound + 2):
        if dims[n] and dims[n - 1]:
            ranks[n] = rank(mats[n - 1], characteristic)
    homology = [dims[n] - ranks[n] - ranks[n + 1] for n in range(bound + 1)]
    return dims, homology


def homology_profile(
    complex_, window: Window, characteristic: int = 0, threads: int | None = None
) -> list[tuple[Degree, tuple[int, ...]]]:
    """Per-degree homology dimensions of a degreewise complex on the window."""
    degrees = candidate_degrees(complex_.support, window)

    def per_degree(g: Degree) -> tuple[Degree, tuple[int, ...]]:
        _, homology = _complex_snapshot(complex_, g, characteristic)
        return (g, tuple(homology))

    return parallel_map(per_degree, degrees, threads)


def euler_profile(
    complex_, window: Window, characteristic: int = 0, threads: int | None = None
) -> list[tuple[Degree, int, int]]:
    """Per-degree alternating sums of term and homology dimensions."""
    degrees = candidate_degrees(complex_.support, window)

    def per_degree(g: Degree) -> tuple[Degree, int, int]:
        dims, homology = _complex_snapshot(complex_, g, characteristic)
        chi_terms = sum((-1) ** n * d for n, d in enumerate(dims))
        chi_homology = sum((-1) ** n * h for n, h in enumerate(homology))
        return (g, chi_terms, chi_homology)

    return parallel_map(per_degree, degrees, threads)


def euler_check(
    complex_, window: Window, characteristic: int = 0, threads: int | None = None
) -> bool:
    """Degreewise Euler characteristic: terms versus homology.

    For every window degree the alternating sum of term dimensions must
    equal the alternating sum of homology dimensions; both sums are
    finite because pieces vanish beyond the per-degree index bound.
    """
    return all(
        terms == homology
        for _, terms, homology in euler_profile(complex_, window, characteristic, threads)
    )
