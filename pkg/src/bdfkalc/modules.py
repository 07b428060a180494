"""Multigraded polynomial rings and constructive module expressions.

A ring is a finite family of variables, each with a nonzero nonnegative
degree; its graded pieces are enumerated as monomials of a fixed
multidegree.  Module expressions are built from shifted free modules,
direct sums, monomial ideals and their quotients.  Every node can list a
monomial basis of its piece in any degree, say how a variable acts on
that basis, and produce a finite lower-bound set for its support — which
is all the homology and series layers need.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

from .degrees import (
    FULL_Q,
    ZERO,
    Degree,
    SupportDescriptor,
    Window,
    WindowError,
    candidate_degrees,
    grlex_sorted,
    unit,
)
from .series import LaurentSeries, QSeries, invert, mul_q


@dataclass(frozen=True)
class Variable:
    name: str
    degree: Degree


@dataclass(frozen=True)
class RingSpec:
    """A polynomial ring given by its homogeneous variables.

    Variables are addressed by 1-based position in this tuple; the order
    fixes monomial serialization and every deterministic basis order
    downstream.
    """

    variables: tuple[Variable, ...]

    @staticmethod
    def of(pairs: Iterable[tuple[str, Degree]]) -> "RingSpec":
        return RingSpec(tuple(Variable(name, deg) for name, deg in pairs))

    @staticmethod
    def standard(num_vars: int) -> "RingSpec":
        """k[x1..xn] with deg(xi) the i-th unit degree."""
        return RingSpec.of((f"x{i}", unit(i)) for i in range(1, num_vars + 1))

    @staticmethod
    def matrix_ring(columns: Sequence[int]) -> "RingSpec":
        """Column-graded variable matrix: x[i,j] for i <= columns[j-1], of degree e_j."""
        variables = []
        for j, height in enumerate(columns, start=1):
            for i in range(1, height + 1):
                variables.append(Variable(f"x[{i},{j}]", unit(j)))
        return RingSpec(tuple(variables))

    def position(self, name: str) -> int:
        for pos, v in enumerate(self.variables, start=1):
            if v.name == name:
                return pos
        raise KeyError(f"no variable named {name!r}")

    def degree_of(self, pos: int) -> Degree:
        return self.variables[pos - 1].degree

    def truncated(self, window: Window) -> "RingSpec":
        """Drop variables whose degree exceeds the window ceiling.

        Such variables cannot divide any monomial of in-window degree, so
        every in-window graded piece is unchanged.
        """
        return RingSpec(tuple(v for v in self.variables if window.contains(v.degree)))


@dataclass(frozen=True)
class RingReport:
    """Validation outcome; each problem names the offending variable."""

    problems: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.problems


class RingValidationError(ValueError):
    pass


def validate_ring(ring: RingSpec, window: Window | None = None) -> RingReport:
    """Check the grading is pointed and connected.

    Degrees must be nonzero (connectedness: the degree-0 piece is the
    base field alone) and nonnegative (pointedness of the image monoid).
    Per-degree finiteness and downward finiteness hold automatically for
    a finite variable family.
    """
    problems = []
    seen: dict[str, int] = {}
    for v in ring.variables:
        if v.degree == ZERO:
            problems.append(f"variable {v.name} has degree 0; the ring would not be connected")
        elif not v.degree.is_nonnegative():
            problems.append(f"variable {v.name} has degree {v.degree} outside the nonnegative orthant")
        seen[v.name] = seen.get(v.name, 0) + 1
    for name, count in seen.items():
        if count > 1:
            problems.append(f"variable name {name} appears {count} times")
    return RingReport(tuple(problems))


def require_valid(ring: RingSpec, window: Window | None = None) -> None:
    report = validate_ring(ring, window)
    if not report.ok:
        raise RingValidationError("; ".join(report.problems))


@dataclass(frozen=True)
class Monomial:
    """Exponent vector over ring variable positions (1-based), sparse and sorted."""

    exps: tuple[tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        previous = 0
        for pos, e in self.exps:
            if pos <= previous:
                raise ValueError(f"positions must be >= 1 and strictly increasing: {self.exps}")
            if e <= 0:
                raise ValueError(f"exponent at position {pos} must be positive")
            previous = pos

    @staticmethod
    def of(items: Iterable[tuple[int, int]]) -> "Monomial":
        merged: dict[int, int] = {}
        for pos, e in items:
            merged[pos] = merged.get(pos, 0) + e
        return Monomial(tuple(sorted((p, e) for p, e in merged.items() if e)))

    def exponent(self, pos: int) -> int:
        for p, e in self.exps:
            if p == pos:
                return e
        return 0

    def times(self, pos: int) -> "Monomial":
        return Monomial.of(self.exps + ((pos, 1),))

    def divisible_by(self, other: "Monomial") -> bool:
        return all(self.exponent(p) >= e for p, e in other.exps)

    def degree(self, ring: RingSpec) -> Degree:
        result = ZERO
        for pos, e in self.exps:
            result = result + ring.degree_of(pos).scaled(e)
        return result

    def total(self) -> int:
        return sum(e for _, e in self.exps)

    def key(self, num_vars: int) -> tuple:
        dense = [0] * num_vars
        for pos, e in self.exps:
            dense[pos - 1] = e
        return (self.total(), tuple(dense))

    def describe(self, ring: RingSpec) -> str:
        if not self.exps:
            return "1"
        parts = []
        for pos, e in self.exps:
            name = ring.variables[pos - 1].name
            parts.append(name if e == 1 else f"{name}^{e}")
        return "*".join(parts)


ONE_MONOMIAL = Monomial()


@lru_cache(maxsize=None)
def monomials_of_degree(ring: RingSpec, g: Degree) -> tuple[Monomial, ...]:
    """All monomials of multidegree g, in graded-lex order on exponents.

    Bounded multiset enumeration: each variable of degree d can appear at
    most min_i(remaining_i / d_i) times, and a remainder outside the
    nonnegative orthant can never be completed.
    """
    num_vars = len(ring.variables)
    out: list[Monomial] = []

    def extend(pos: int, remaining: Degree, picked: list[tuple[int, int]]) -> None:
        if not remaining.is_nonnegative():
            return
        if remaining == ZERO:
            out.append(Monomial(tuple(picked)))
            return
        if pos > num_vars:
            return
        d = ring.variables[pos - 1].degree
        bound = min(remaining.coeff(i) // c for i, c in d.entries)
        for e in range(bound + 1):
            if e:
                picked.append((pos, e))
            extend(pos + 1, remaining - d.scaled(e), picked)
            if e:
                picked.pop()

    extend(1, g, [])
    return tuple(sorted(out, key=lambda m: m.key(num_vars)))


def ring_dimension(ring: RingSpec, g: Degree) -> int:
    return len(monomials_of_degree(ring, g))


@lru_cache(maxsize=None)
def ring_hilbert(ring: RingSpec) -> QSeries:
    """Hilbert series of the ring: counts monomials in each multidegree."""
    return QSeries(lambda g: ring_dimension(ring, g), "H(ring)")


@lru_cache(maxsize=None)
def ring_hilbert_inverse(ring: RingSpec) -> QSeries:
    return invert(ring_hilbert(ring))


@dataclass(frozen=True)
class BasisLabel:
    """Basis element of a graded piece: a monomial tagged by its summand path."""

    path: tuple[int, ...]
    monomial: Monomial


@dataclass(frozen=True)
class GradedPiece:
    degree: Degree
    basis: tuple[BasisLabel, ...]

    @property
    def dimension(self) -> int:
        return len(self.basis)


class ModuleExpr:
    """Constructive graded module; subclasses enumerate bases degreewise."""

    def piece(self, ring: RingSpec, g: Degree, window: Window | None = None) -> GradedPiece:
        return graded_piece(self, ring, g, window)

    def _labels(self, ring: RingSpec, g: Degree) -> Iterator[BasisLabel]:
        raise NotImplementedError

    def lower_bounds(self, ring: RingSpec) -> SupportDescriptor:
        raise NotImplementedError

    def multiply_label(self, ring: RingSpec, label: BasisLabel, pos: int) -> BasisLabel | None:
        raise NotImplementedError

    def describe(self, ring: RingSpec) -> str:
        raise NotImplementedError

    def to_json(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class FreeModule(ModuleExpr):
    """Direct sum of ring copies shifted by the given degrees (with multiplicity)."""

    shifts: tuple[Degree, ...] = ()

    @staticmethod
    def of(shifts: Iterable[Degree]) -> "FreeModule":
        return FreeModule(tuple(grlex_sorted(shifts)))

    def _labels(self, ring, g):
        for tag, shift in enumerate(self.shifts):
            for m in monomials_of_degree(ring, g - shift):
                yield BasisLabel((tag,), m)

    def lower_bounds(self, ring):
        return SupportDescriptor.of(self.shifts)

    def multiply_label(self, ring, label, pos):
        return BasisLabel(label.path, label.monomial.times(pos))

    def describe(self, ring):
        if not self.shifts:
            return "0"
        return "free(" + ", ".join(str(h) for h in self.shifts) + ")"

    def to_json(self):
        return {"node": "free", "shifts": [h.to_json() for h in self.shifts]}


RING_MODULE = FreeModule((ZERO,))


@dataclass(frozen=True)
class ShiftedModule(ModuleExpr):
    """The inner module with its grading moved up by ``by``.

    The piece at g is the inner piece at g - by with identical labels, so
    the Hilbert series picks up the factor t^by.
    """

    inner: ModuleExpr
    by: Degree

    def _labels(self, ring, g):
        return self.inner._labels(ring, g - self.by)

    def lower_bounds(self, ring):
        return self.inner.lower_bounds(ring).translate(self.by)

    def multiply_label(self, ring, label, pos):
        return self.inner.multiply_label(ring, label, pos)

    def describe(self, ring):
        return f"shift({self.inner.describe(ring)}, {self.by})"

    def to_json(self):
        return {"node": "shift", "module": self.inner.to_json(), "by": self.by.to_json()}


@dataclass(frozen=True)
class DirectSum(ModuleExpr):
    parts: tuple[ModuleExpr, ...]

    @staticmethod
    def of(parts: Iterable[ModuleExpr]) -> "DirectSum":
        return DirectSum(tuple(parts))

    def _labels(self, ring, g):
        for idx, part in enumerate(self.parts):
            for label in part._labels(ring, g):
                yield BasisLabel((idx,) + label.path, label.monomial)

    def lower_bounds(self, ring):
        result = SupportDescriptor()
        for part in self.parts:
            result = result.union(part.lower_bounds(ring))
        return result

    def multiply_label(self, ring, label, pos):
        idx = label.path[0]
        inner = self.parts[idx].multiply_label(
            ring, BasisLabel(label.path[1:], label.monomial), pos
        )
        if inner is None:
            return None
        return BasisLabel((idx,) + inner.path, inner.monomial)

    def describe(self, ring):
        return "sum(" + ", ".join(p.describe(ring) for p in self.parts) + ")"

    def to_json(self):
        return {"node": "sum", "parts": [p.to_json() for p in self.parts]}


def _require_reduced(gens: tuple[Monomial, ...]) -> None:
    for i, a in enumerate(gens):
        for j, b in enumerate(gens):
            if i != j and a.divisible_by(b):
                raise ValueError(
                    f"generators are not reduced: {a.exps} is divisible by {b.exps}"
                )


def _sorted_gens(gens: Iterable[Monomial]) -> tuple[Monomial, ...]:
    items = tuple(gens)
    width = max((m.exps[-1][0] for m in items if m.exps), default=0)
    return tuple(sorted(items, key=lambda m: m.key(width)))


@dataclass(frozen=True)
class MonomialIdeal(ModuleExpr):
    """The ideal spanned by the monomials divisible by some generator."""

    gens: tuple[Monomial, ...]

    @staticmethod
    def of(gens: Iterable[Monomial]) -> "MonomialIdeal":
        ordered = _sorted_gens(gens)
        _require_reduced(ordered)
        return MonomialIdeal(ordered)

    def _labels(self, ring, g):
        for m in monomials_of_degree(ring, g):
            if any(m.divisible_by(gen) for gen in self.gens):
                yield BasisLabel((), m)

    def lower_bounds(self, ring):
        return SupportDescriptor.of(gen.degree(ring) for gen in self.gens)

    def multiply_label(self, ring, label, pos):
        return BasisLabel((), label.monomial.times(pos))

    def describe(self, ring):
        return "ideal(" + ", ".join(g.describe(ring) for g in self.gens) + ")"

    def to_json(self):
        return {"node": "ideal", "gens": [[[p, e] for p, e in g.exps] for g in self.gens]}


@dataclass(frozen=True)
class MonomialQuotient(ModuleExpr):
    """The ring modulo a monomial ideal: monomials no generator divides."""

    gens: tuple[Monomial, ...]

    @staticmethod
    def of(gens: Iterable[Monomial]) -> "MonomialQuotient":
        ordered = _sorted_gens(gens)
        _require_reduced(ordered)
        return MonomialQuotient(ordered)

    def _labels(self, ring, g):
        for m in monomials_of_degree(ring, g):
            if not any(m.divisible_by(gen) for gen in self.gens):
                yield BasisLabel((), m)

    def lower_bounds(self, ring):
        return FULL_Q

    def multiply_label(self, ring, label, pos):
        product = label.monomial.times(pos)
        if any(product.divisible_by(gen) for gen in self.gens):
            return None
        return BasisLabel((), product)

    def describe(self, ring):
        if not self.gens:
            return "ring"
        return "quotient(" + ", ".join(g.describe(ring) for g in self.gens) + ")"

    def to_json(self):
        return {"node": "quotient", "gens": [[[p, e] for p, e in g.exps] for g in self.gens]}


def variable_quotient(ring: RingSpec, positions: Iterable[int]) -> MonomialQuotient:
    """The quotient by a subset of the variables (e.g. the residue field for all of them)."""
    return MonomialQuotient.of(Monomial(((pos, 1),)) for pos in positions)


def residue_field(ring: RingSpec) -> MonomialQuotient:
    return variable_quotient(ring, range(1, len(ring.variables) + 1))


@lru_cache(maxsize=None)
def _graded_piece(module: ModuleExpr, ring: RingSpec, g: Degree) -> GradedPiece:
    num_vars = len(ring.variables)
    basis = sorted(module._labels(ring, g), key=lambda l: (l.monomial.key(num_vars), l.path))
    return GradedPiece(g, tuple(basis))


def graded_piece(
    module: ModuleExpr, ring: RingSpec, g: Degree, window: Window | None = None
) -> GradedPiece:
    """The (finite) monomial basis of the module's piece in degree g."""
    if window is not None and not window.contains(g):
        raise WindowError(f"degree {g} is outside the window")
    return _graded_piece(module, ring, g)


def var_action(
    module: ModuleExpr,
    ring: RingSpec,
    variable: int | str,
    g: Degree,
    window: Window | None = None,
) -> list[list[int]]:
    """Matrix of multiplication by a variable, piece at g -> piece at g + deg.

    Rows index the target basis, columns the source basis; entries are 0
    or 1 since a monomial maps to a monomial or dies in a quotient.
    """
    pos = ring.position(variable) if isinstance(variable, str) else variable
    vdeg = ring.degree_of(pos)
    if window is not None and (not window.contains(g) or not window.contains(g + vdeg)):
        raise WindowError(f"action at {g} leaves the window")
    source = graded_piece(module, ring, g)
    target = graded_piece(module, ring, g + vdeg)
    index = {label: row for row, label in enumerate(target.basis)}
    matrix = [[0] * source.dimension for _ in range(target.dimension)]
    for col, label in enumerate(source.basis):
        image = module.multiply_label(ring, label, pos)
        if image is not None:
            matrix[index[image]][col] = 1
    return matrix


def hilbert(module: ModuleExpr, ring: RingSpec, window: Window) -> LaurentSeries:
    """Dimension series of the module's graded pieces on the window."""
    require_valid(ring)
    support = module.lower_bounds(ring)
    coeffs: dict[Degree, int] = {}
    for g in candidate_degrees(support, window):
        d = graded_piece(module, ring, g).dimension
        if d:
            coeffs[g] = d
    return LaurentSeries(window, support, coeffs)


def kseries(module: ModuleExpr, ring: RingSpec, window: Window) -> LaurentSeries:
    """The Hilbert series divided by the ring's: the Grothendieck-ring coordinate."""
    return mul_q(ring_hilbert_inverse(ring), hilbert(module, ring, window))
