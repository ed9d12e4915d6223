"""Points of the compactified space and their stratum bookkeeping.

A point assigns each positive root an exact rational or infinity (the
two standard affine charts of P^1; None encodes infinity).  Membership
in the compactification is a linear-algebra check on the finite part:
the finite support must be a flat's positive half, and the finite
values must extend to a linear functional on its span.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

from .errors import InvalidId, NotInVariety, SpanDeficient
from .flats import IntersectionLattice
from .linalg import IncrementalSpan, solve_in_basis
from .rootsys import RootSystem, closure

Value = Fraction | None  # None is the infinity coordinate


@dataclass(frozen=True)
class ExtendedPoint:
    """Coordinates over the positive roots, in root-index order."""

    values: tuple[Value, ...]

    @classmethod
    def of(cls, entries: Iterable) -> "ExtendedPoint":
        vals = tuple(None if v is None else Fraction(v) for v in entries)
        return cls(vals)

    def finite_positions(self) -> list[int]:
        return [p for p, v in enumerate(self.values) if v is not None]


@dataclass(frozen=True)
class Functional:
    """A linear functional on the span of a flat, by values on a root basis."""

    basis_positions: tuple[int, ...]
    values: tuple[Fraction, ...]

    def evaluate(self, rs: RootSystem, position: int) -> Fraction | None:
        """Value at the positive root in the given position; None off-span."""
        basis = [rs.roots[rs.positives[p]] for p in self.basis_positions]
        target = rs.roots[rs.positives[position]]
        coeffs = solve_in_basis(basis, target)
        if coeffs is None:
            return None
        return sum((c * v for c, v in zip(coeffs, self.values)), Fraction(0))


@dataclass(frozen=True)
class StratumResult:
    flat_id: int
    witness: Functional


@dataclass(frozen=True)
class Rejection:
    """Normal non-membership outcome, carrying the first obstruction."""

    reason: str
    forced_position: int | None = None
    relation: tuple[int, ...] | None = None


def fin_set(rs: RootSystem, point: ExtendedPoint) -> int:
    """Mask of the roots with finite coordinate (negation-symmetrized)."""
    mask = 0
    for p in point.finite_positions():
        mask |= 1 << p
    return mask


def membership(
    rs: RootSystem, lat: IntersectionLattice, point: ExtendedPoint
) -> StratumResult | Rejection:
    """Decide membership; return the stratum flat and witness, or the obstruction.

    The point lies in the variety iff its finite support is span-closed
    and the finite values satisfy every rational linear relation among
    those roots.
    """
    if len(point.values) != rs.d:
        raise InvalidId(f"point has {len(point.values)} coordinates, expected {rs.d}")
    fin = fin_set(rs, point)
    span_closed = closure(rs, fin)
    if span_closed != fin:
        forced = (span_closed & ~fin).bit_length() - 1
        return Rejection("finite support is not span-closed", forced_position=forced)
    finite = point.finite_positions()
    span = IncrementalSpan(rs.ambient)
    basis_positions = [
        p for p in finite if span.add(rs.roots[rs.positives[p]])
    ]
    witness = Functional(
        tuple(basis_positions), tuple(point.values[p] for p in basis_positions)
    )
    basis = [rs.roots[rs.positives[p]] for p in basis_positions]
    for p in finite:
        coeffs = solve_in_basis(basis, rs.roots[rs.positives[p]])
        assert coeffs is not None
        expected = sum(
            (c * point.values[b] for c, b in zip(coeffs, basis_positions)), Fraction(0)
        )
        if expected != point.values[p]:
            return Rejection(
                "finite values violate a root relation",
                relation=_clear_relation(rs, p, basis_positions, coeffs),
            )
    return StratumResult(lat.id_of[fin], witness)


def stratum_of(rs: RootSystem, lat: IntersectionLattice, point: ExtendedPoint) -> int:
    """Flat id whose subsystem's positive part is the point's finite support."""
    result = membership(rs, lat, point)
    if isinstance(result, Rejection):
        raise NotInVariety(result.reason)
    return result.flat_id


def h_translate(rs: RootSystem, point: ExtendedPoint, y: Sequence) -> ExtendedPoint:
    """Translate by an ambient vector: finite coordinates shift by root(y)."""
    yvec = [Fraction(c) for c in y]
    if len(yvec) != rs.ambient:
        raise InvalidId(f"translation vector needs {rs.ambient} coordinates")
    out = []
    for p, v in enumerate(point.values):
        if v is None:
            out.append(None)
        else:
            root = rs.roots[rs.positives[p]]
            out.append(v + sum(Fraction(a) * c for a, c in zip(root, yvec)))
    return ExtendedPoint(tuple(out))


def limit_point(
    rs: RootSystem,
    subsystem: int | Iterable[int],
    witness: Functional,
    lam0: int,
    t,
    within: int | None = None,
) -> ExtendedPoint:
    """The finite point with witness values on the subsystem and t at lam0.

    As t grows, coordinates at roots outside the subsystem's span grow
    linearly, so the limit lands in the target stratum.  With `within`
    set to a larger flat's mask, coordinates outside it are infinity and
    the construction happens inside that flat instead.
    """
    mask = rs.as_mask(subsystem)
    lam0_pos = rs.pos_of.get(lam0)
    if lam0_pos is None:
        lam0_pos = rs.pos_of[rs.neg[lam0]]
    basis = [rs.roots[rs.positives[p]] for p in witness.basis_positions]
    ext_basis = basis + [rs.roots[rs.positives[lam0_pos]]]
    ext_values = list(witness.values) + [Fraction(t)]
    span = IncrementalSpan(rs.ambient)
    for v in ext_basis:
        span.add(v)
    ambient_positions = (
        list(range(rs.d)) if within is None else rs.positions(within)
    )
    if within is None and span.rank != rs.rank:
        raise SpanDeficient("auxiliary root does not complete the span")
    values: list[Value] = [None] * rs.d
    for p in ambient_positions:
        coeffs = solve_in_basis(ext_basis, rs.roots[rs.positives[p]])
        if coeffs is None:
            raise SpanDeficient("a coordinate in the ambient flat is not determined")
        values[p] = sum((c * v for c, v in zip(coeffs, ext_values)), Fraction(0))
    return ExtendedPoint(tuple(values))


def generate_relations(rs: RootSystem) -> list[tuple[int, ...]]:
    """Integer relations expressing each positive root over a fixed basis.

    The basis is the first maximal independent set of positives in index
    order; each remaining root contributes one cleared-denominator
    relation.  Together they span the full (d - r)-dimensional relation
    lattice.
    """
    span = IncrementalSpan(rs.ambient)
    basis_positions = [p for p in range(rs.d) if span.add(rs.roots[rs.positives[p]])]
    basis = [rs.roots[rs.positives[p]] for p in basis_positions]
    relations = []
    for p in range(rs.d):
        if p in basis_positions:
            continue
        coeffs = solve_in_basis(basis, rs.roots[rs.positives[p]])
        assert coeffs is not None
        relations.append(_clear_relation(rs, p, basis_positions, coeffs))
    return relations


def _clear_relation(
    rs: RootSystem, position: int, basis_positions: Sequence[int], coeffs: Sequence[Fraction]
) -> tuple[int, ...]:
    den = lcm(*(c.denominator for c in coeffs)) if coeffs else 1
    rel = [0] * rs.d
    rel[position] = den
    for b, c in zip(basis_positions, coeffs):
        rel[b] -= int(c * den)
    return tuple(rel)


def relation_support(relation: Sequence[int]) -> list[int]:
    return [p for p, c in enumerate(relation) if c]
