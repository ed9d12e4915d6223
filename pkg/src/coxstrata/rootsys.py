"""Root systems with exact integer coordinates.

All classical and exceptional irreducible types are realized in a fixed
ambient Z^m (half-integer families uniformly doubled), generated by
reflection closure from the simple roots.  Root subsets are bit masks
over positive-root positions; every subset operation treats the set as
closed under negation.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidRank, NotSpanClosed, UnrecognizedDiagram
from .linalg import IncrementalSpan, bareiss_rank, integer_kernel, solve_in_basis

RANK_BOUNDS = {
    "A": (1, None),
    "B": (2, None),
    "C": (2, None),
    "D": (3, None),
    "E": (6, 8),
    "F": (4, 4),
    "G": (2, 2),
}


def _check_factor(family: str, rank: int) -> None:
    if family not in RANK_BOUNDS:
        raise InvalidRank(f"unknown family {family!r}")
    lo, hi = RANK_BOUNDS[family]
    if rank < lo or (hi is not None and rank > hi):
        raise InvalidRank(f"{family}{rank} is not a valid type")


@dataclass(frozen=True, order=True)
class CartanType:
    """A product of irreducible types, canonically ordered."""

    factors: tuple[tuple[str, int], ...]

    def __post_init__(self):
        for family, rank in self.factors:
            _check_factor(family, rank)
        ordered = tuple(sorted(self.factors))
        if ordered != self.factors:
            object.__setattr__(self, "factors", ordered)

    @classmethod
    def parse(cls, text: str) -> "CartanType":
        factors = []
        for part in text.replace(" ", "").split("x"):
            if len(part) < 2 or not part[0].isalpha() or not part[1:].isdigit():
                raise InvalidRank(f"cannot parse type string {text!r}")
            factors.append((part[0].upper(), int(part[1:])))
        if not factors:
            raise InvalidRank("empty type string")
        return cls(tuple(factors))

    @property
    def rank(self) -> int:
        return sum(r for _, r in self.factors)

    @property
    def is_irreducible(self) -> bool:
        return len(self.factors) == 1

    @property
    def is_classical(self) -> bool:
        return all(f in "ABCD" for f, _ in self.factors)

    def __str__(self) -> str:
        if not self.factors:
            return "1"  # empty product: the type of the zero subsystem
        return "x".join(f"{f}{r}" for f, r in self.factors)


def _simple_root_coords(family: str, rank: int) -> list[tuple[int, ...]]:
    """Simple roots in the standard coordinate realization, integer-scaled."""
    r = rank

    def e(i: int, m: int, c: int = 1) -> list[int]:
        v = [0] * m
        v[i] = c
        return v

    def diff(i: int, m: int) -> list[int]:
        v = [0] * m
        v[i], v[i + 1] = 1, -1
        return v

    if family == "A":
        return [tuple(diff(i, r + 1)) for i in range(r)]
    if family == "B":
        return [tuple(diff(i, r)) for i in range(r - 1)] + [tuple(e(r - 1, r))]
    if family == "C":
        return [tuple(diff(i, r)) for i in range(r - 1)] + [tuple(e(r - 1, r, 2))]
    if family == "D":
        last = [0] * r
        last[r - 2], last[r - 1] = 1, 1
        return [tuple(diff(i, r)) for i in range(r - 1)] + [tuple(last)]
    if family == "G":
        return [(1, -1, 0), (-2, 1, 1)]
    if family == "F":
        # Halves cleared by doubling every root uniformly.
        return [
            (0, 2, -2, 0),
            (0, 0, 2, -2),
            (0, 0, 0, 2),
            (1, -1, -1, -1),
        ]
    if family == "E":
        base = [
            (1, -1, -1, -1, -1, -1, -1, 1),
            (2, 2, 0, 0, 0, 0, 0, 0),
            (-2, 2, 0, 0, 0, 0, 0, 0),
            (0, -2, 2, 0, 0, 0, 0, 0),
            (0, 0, -2, 2, 0, 0, 0, 0),
            (0, 0, 0, -2, 2, 0, 0, 0),
            (0, 0, 0, 0, -2, 2, 0, 0),
            (0, 0, 0, 0, 0, -2, 2, 0),
        ]
        return [tuple(v) for v in base[:r]]
    raise InvalidRank(f"unknown family {family!r}")


def _dot(u: Sequence[int], v: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(u, v))


def _reflect_coords(v: Sequence[int], mirror: Sequence[int]) -> tuple[int, ...]:
    num = 2 * _dot(v, mirror)
    den = _dot(mirror, mirror)
    q, rem = divmod(num, den)
    if rem:
        raise AssertionError("non-integral Cartan pairing")
    return tuple(a - q * b for a, b in zip(v, mirror))


class RootSystem:
    """An irreducible root system with deterministic root indexing.

    Roots are indexed by (height, lexicographic coordinates); positives
    occupy the upper half.  Construction is pure and the object is
    immutable afterwards, so instances are safe to share.
    """

    def __init__(self, ctype: CartanType):
        if not ctype.is_irreducible:
            raise InvalidRank("ambient root system must be irreducible")
        self.ctype = ctype
        family, rank = ctype.factors[0]
        self.rank = rank
        simple_coords = _simple_root_coords(family, rank)
        self.ambient = len(simple_coords[0])

        roots = set(simple_coords)
        frontier = list(simple_coords)
        while frontier:
            new = []
            for v in frontier:
                for s in simple_coords:
                    w = _reflect_coords(v, s)
                    if w not in roots:
                        roots.add(w)
                        new.append(w)
            frontier = new
        roots |= {tuple(-x for x in v) for v in roots}

        coeff_of = {v: self._expand(simple_coords, v) for v in roots}
        height = {v: sum(coeff_of[v]) for v in roots}
        self.roots: list[tuple[int, ...]] = sorted(roots, key=lambda v: (height[v], v))
        self.index = {v: i for i, v in enumerate(self.roots)}
        self.d = len(self.roots) // 2
        self.neg = [self.index[tuple(-x for x in v)] for v in self.roots]
        self.heights = [height[v] for v in self.roots]
        self.simple_coefficients = [coeff_of[v] for v in self.roots]
        self.positives = [i for i in range(2 * self.d) if self.heights[i] > 0]
        assert len(self.positives) == self.d
        self.pos_of = {idx: p for p, idx in enumerate(self.positives)}
        self.simples = [self.index[v] for v in simple_coords]
        self.highest = max(range(2 * self.d), key=lambda i: self.heights[i])

        theta_coeffs = self.simple_coefficients[self.highest]
        assert all(m >= 1 for m in theta_coeffs)
        self.labels = [1] + list(theta_coeffs)

        # Affine diagram: node 0 is -theta, nodes 1..r the simple roots.
        affine = [tuple(-x for x in self.roots[self.highest])] + list(simple_coords)
        self.affine_roots = affine
        self.affine_adjacency = {}
        for i in range(rank + 1):
            for j in range(i + 1, rank + 1):
                aij = 2 * _dot(affine[i], affine[j])
                mult = (aij * aij) // (_dot(affine[i], affine[i]) * _dot(affine[j], affine[j]))
                if mult:
                    self.affine_adjacency[(i, j)] = mult

        self._pos_matrix = np.array(
            [self.roots[i] for i in self.positives], dtype=np.int64
        )
        self.full_mask = (1 << self.d) - 1
        self._generic = self._pick_generic()
        self._refl_perm: dict[int, list[int]] = {}

    def _expand(self, simple_coords, v) -> tuple[int, ...]:
        coeffs = solve_in_basis(simple_coords, v)
        assert coeffs is not None, "root outside simple-root span"
        out = []
        for c in coeffs:
            assert c.denominator == 1, "non-integral simple-root expansion"
            out.append(int(c))
        return tuple(out)

    def _pick_generic(self) -> tuple[int, ...]:
        maxc = max(abs(x) for v in self.roots for x in v)
        for mult in (1, 2):
            m = 1 + mult * maxc
            g = tuple(m ** (self.ambient - 1 - i) for i in range(self.ambient))
            values = [_dot(g, v) for v in self.roots]
            if 0 not in values and len(set(values)) == len(values):
                return g
        raise AssertionError("no generic functional found")

    # -- subset plumbing ------------------------------------------------

    def as_mask(self, subset: int | Iterable[int]) -> int:
        """Normalize a positive-position mask or iterable of root indices."""
        if isinstance(subset, int):
            return subset
        mask = 0
        for idx in subset:
            pos = self.pos_of.get(idx)
            if pos is None:
                pos = self.pos_of[self.neg[idx]]
            mask |= 1 << pos
        return mask

    def mask_of_roots(self, coords: Iterable[Sequence[int]]) -> int:
        return self.as_mask(self.index[tuple(v)] for v in coords)

    def positive_indices(self, mask: int) -> list[int]:
        return [self.positives[p] for p in range(self.d) if mask >> p & 1]

    def root_indices(self, mask: int) -> list[int]:
        pos = self.positive_indices(mask)
        return sorted(pos + [self.neg[i] for i in pos])

    def positions(self, mask: int) -> list[int]:
        return [p for p in range(self.d) if mask >> p & 1]

    def reflection_perm(self, mirror: int) -> list[int]:
        """Permutation i -> index of the mirror-reflection of root i."""
        perm = self._refl_perm.get(mirror)
        if perm is None:
            mv = self.roots[mirror]
            perm = [self.index[_reflect_coords(v, mv)] for v in self.roots]
            self._refl_perm[mirror] = perm
        return perm

    def positive_perm(self, mirror: int) -> list[int]:
        """Reflection as a permutation of positive positions (signs dropped)."""
        perm = self.reflection_perm(mirror)
        out = []
        for idx in self.positives:
            image = perm[idx]
            pos = self.pos_of.get(image)
            if pos is None:
                pos = self.pos_of[self.neg[image]]
            out.append(pos)
        return out

    def apply_perm_to_mask(self, perm: list[int], mask: int) -> int:
        out = 0
        while mask:
            p = (mask & -mask).bit_length() - 1
            out |= 1 << perm[p]
            mask &= mask - 1
        return out

    def span_mask(self, vectors: Sequence[Sequence[int]]) -> int:
        """Mask of all roots lying in the rational span of the vectors."""
        span = IncrementalSpan(self.ambient)
        basis = [tuple(v) for v in vectors if span.add(v)]
        if span.rank == 0:
            return 0
        kernel = integer_kernel(basis, self.ambient)
        if not kernel:
            return self.full_mask
        kmat = np.array(kernel, dtype=np.int64).T
        assert int(np.abs(kmat).max()) < 1 << 40, "kernel entries out of safe range"
        hits = ~np.any(self._pos_matrix @ kmat, axis=1)
        return int.from_bytes(np.packbits(hits, bitorder="little").tobytes(), "little")

    def __repr__(self) -> str:
        return f"RootSystem({self.ctype}, d={self.d})"


@lru_cache(maxsize=None)
def build_root_system(ctype: CartanType | str) -> RootSystem:
    """Construct (and memoize) the root system of a single-factor type."""
    if isinstance(ctype, str):
        ctype = CartanType.parse(ctype)
    return RootSystem(ctype)


def reflect(rs: RootSystem, mirror: int, target: int) -> int:
    """Index of the reflection of root `target` in the mirror root's hyperplane."""
    return rs.index[_reflect_coords(rs.roots[target], rs.roots[mirror])]


def closure(rs: RootSystem, subset: int | Iterable[int]) -> int:
    """Span closure: all roots in the rational span of the subset."""
    mask = rs.as_mask(subset)
    vectors = [rs.roots[i] for i in rs.positive_indices(mask)]
    return rs.span_mask(vectors)


def is_closed(rs: RootSystem, subset: int | Iterable[int]) -> bool:
    """Additive closedness of a negation-closed root subset."""
    mask = rs.as_mask(subset)
    indices = rs.root_indices(mask)
    members = {rs.roots[i] for i in indices}
    for u in members:
        for v in members:
            s = tuple(a + b for a, b in zip(u, v))
            if s in rs.index and s not in members:
                return False
    return True


def subsystem_rank(rs: RootSystem, subset: int | Iterable[int]) -> int:
    """Dimension of the rational span of the subset (0 for empty)."""
    mask = rs.as_mask(subset)
    rows = [rs.roots[i] for i in rs.positive_indices(mask)]
    return bareiss_rank(rows)


def additive_closure(rs: RootSystem, subset: int | Iterable[int]) -> int:
    """Smallest negation-closed, additively closed subset containing the input."""
    mask = rs.as_mask(subset)
    members = set(rs.root_indices(mask))
    changed = True
    while changed:
        changed = False
        current = [rs.roots[i] for i in members]
        for u in current:
            for v in current:
                s = tuple(a + b for a, b in zip(u, v))
                idx = rs.index.get(s)
                if idx is not None and idx not in members:
                    members.add(idx)
                    members.add(rs.neg[idx])
                    changed = True
    return rs.as_mask(members)


def _base_of(rs: RootSystem, mask: int) -> list[int]:
    """A base of a span-closed subsystem: indecomposable generic-positives."""
    full = rs.root_indices(mask)
    positives = [i for i in full if _dot(rs._generic, rs.roots[i]) > 0]
    pos_coords = {rs.roots[i] for i in positives}
    base = []
    for i in positives:
        v = rs.roots[i]
        decomposable = any(
            tuple(a - b for a, b in zip(v, rs.roots[j])) in pos_coords
            for j in positives
            if j != i
        )
        if not decomposable:
            base.append(i)
    return base


def classify_subsystem(rs: RootSystem, subset: int | Iterable[int]) -> CartanType:
    """Cartan type of a closed subsystem, as a canonically ordered product.

    Any additively closed, negation-closed subset is itself a root
    system, so a base can be extracted; span-closed inputs (flats) are
    the common case.
    """
    mask = rs.as_mask(subset)
    if mask == 0:
        return CartanType(())
    if closure(rs, mask) != mask and not is_closed(rs, mask):
        raise NotSpanClosed("subsystem is not additively closed")
    base = _base_of(rs, mask)
    vecs = [rs.roots[i] for i in base]
    n = len(vecs)
    cartan = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            cartan[i][j] = 2 * _dot(vecs[i], vecs[j]) // _dot(vecs[j], vecs[j])

    mult = [[cartan[i][j] * cartan[j][i] if i != j else 0 for j in range(n)] for i in range(n)]
    seen = [False] * n
    factors = []
    for start in range(n):
        if seen[start]:
            continue
        comp = [start]
        seen[start] = True
        queue = [start]
        while queue:
            u = queue.pop()
            for v in range(n):
                if not seen[v] and mult[u][v]:
                    seen[v] = True
                    comp.append(v)
                    queue.append(v)
        factors.append(_match_component(comp, mult, vecs))
    return CartanType(tuple(factors))


def _match_component(comp: list[int], mult, vecs) -> tuple[str, int]:
    n = len(comp)
    if n == 1:
        return ("A", 1)
    edges = [(u, v) for u in comp for v in comp if u < v and mult[u][v]]
    if len(edges) != n - 1:
        raise UnrecognizedDiagram("component is not a tree")
    degree = {u: sum(1 for v in comp if mult[u][v]) for u in comp}
    triples = [e for e in edges if mult[e[0]][e[1]] == 3]
    doubles = [e for e in edges if mult[e[0]][e[1]] == 2]
    if triples:
        if n == 2 and not doubles:
            return ("G", 2)
        raise UnrecognizedDiagram("triple edge in a large component")
    if doubles:
        if len(doubles) != 1 or max(degree.values()) > 2:
            raise UnrecognizedDiagram("bad double-edge pattern")
        u, v = doubles[0]
        if n == 2:
            return ("B", 2)
        if degree[u] == 2 and degree[v] == 2:
            if n == 4:
                return ("F", 4)
            raise UnrecognizedDiagram("interior double edge outside F4")
        end, inner = (u, v) if degree[u] == 1 else (v, u)
        norm_end = _dot(vecs[end], vecs[end])
        norm_inner = _dot(vecs[inner], vecs[inner])
        return ("B", n) if norm_end < norm_inner else ("C", n)
    if max(degree.values()) <= 2:
        return ("A", n)
    branch = [u for u in comp if degree[u] == 3]
    if len(branch) != 1 or max(degree.values()) > 3:
        raise UnrecognizedDiagram("multiple branch nodes")
    b = branch[0]
    arms = []
    for nb in (v for v in comp if mult[b][v]):
        length, prev, cur = 1, b, nb
        while True:
            nxt = [w for w in comp if mult[cur][w] and w != prev]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
            length += 1
        arms.append(length)
    arms.sort()
    if arms[:2] == [1, 1]:
        return ("D", n)
    if arms == [1, 2, 2]:
        return ("E", 6)
    if arms == [1, 2, 3]:
        return ("E", 7)
    if arms == [1, 2, 4]:
        return ("E", 8)
    raise UnrecognizedDiagram(f"arm lengths {arms}")
