from __future__ import annotations

import random
from fractions import Fraction
from itertools import product

import pytest

from conftest import pos_of_coords
from coxstrata.errors import NotInVariety, SpanDeficient
from coxstrata.flats import leq
from coxstrata.strata import (
    ExtendedPoint,
    Functional,
    Rejection,
    StratumResult,
    fin_set,
    generate_relations,
    h_translate,
    limit_point,
    membership,
    relation_support,
    stratum_of,
)
from coxstrata.weyl import weyl_act_point


def a2_point(rs, x1, x2, x12):
    """Point with given values at alpha1, alpha2, alpha1+alpha2 (None = inf)."""
    vals = [None] * 3
    vals[pos_of_coords(rs, (1, -1, 0))] = None if x1 is None else Fraction(x1)
    vals[pos_of_coords(rs, (0, 1, -1))] = None if x2 is None else Fraction(x2)
    vals[pos_of_coords(rs, (1, 0, -1))] = None if x12 is None else Fraction(x12)
    return ExtendedPoint(tuple(vals))


def a2_hypersurface_value(rs, point):
    """The defining trinomial evaluated on homogeneous coordinates.

    Coordinates ordered (alpha1, alpha2, alpha1+alpha2); a finite value v
    becomes [1 : v] and infinity becomes [0 : 1].
    """
    def hom(v):
        return (1, v) if v is not None else (0, 1)

    x0, x1 = hom(point.values[pos_of_coords(rs, (1, -1, 0))])
    y0, y1 = hom(point.values[pos_of_coords(rs, (0, 1, -1))])
    z0, z1 = hom(point.values[pos_of_coords(rs, (1, 0, -1))])
    return x1 * y0 * z0 + x0 * y1 * z0 - x0 * y0 * z1


def test_fin_set_examples(lattice_of):
    rs, _ = lattice_of("A2")
    assert fin_set(rs, a2_point(rs, 1, 2, 3)) == rs.full_mask
    assert fin_set(rs, a2_point(rs, 1, None, None)) == 1 << pos_of_coords(rs, (1, -1, 0))
    assert fin_set(rs, a2_point(rs, None, None, None)) == 0


def test_membership_fixtures(lattice_of):
    rs, lat = lattice_of("A2")
    res = membership(rs, lat, a2_point(rs, 1, 2, 3))
    assert isinstance(res, StratumResult)
    assert lat.flat(res.flat_id).rank == rs.rank  # open stratum

    out = membership(rs, lat, a2_point(rs, 1, 2, 5))
    assert isinstance(out, Rejection) and out.relation is not None

    out = membership(rs, lat, a2_point(rs, 1, 2, None))
    assert isinstance(out, Rejection)
    assert out.forced_position == pos_of_coords(rs, (1, 0, -1))


def test_membership_agrees_with_hypersurface(lattice_of):
    # every point pattern over a small value grid, checked against the
    # defining equation of the A2 compactification
    rs, lat = lattice_of("A2")
    grid = [None, Fraction(0), Fraction(1), Fraction(2), Fraction(-1), Fraction(1, 2)]
    for x1, x2, x12 in product(grid, repeat=3):
        point = a2_point(rs, x1, x2, x12)
        ours = isinstance(membership(rs, lat, point), StratumResult)
        assert ours == (a2_hypersurface_value(rs, point) == 0), (x1, x2, x12)


def test_stratum_of_examples(lattice_of):
    rs, lat = lattice_of("A2")
    theta_pos = pos_of_coords(rs, (1, 0, -1))
    fid = stratum_of(rs, lat, a2_point(rs, None, None, 7))
    assert lat.flat(fid).mask == 1 << theta_pos
    assert lat.flat(fid).rank == 1

    # the all-infinity point sits in the zero-dimensional stratum, whose
    # flat is the empty subsystem (lattice bottom)
    fid = stratum_of(rs, lat, a2_point(rs, None, None, None))
    assert fid == lat.bottom

    fid = stratum_of(rs, lat, a2_point(rs, 4, -9, -5))
    assert fid == lat.top

    with pytest.raises(NotInVariety):
        stratum_of(rs, lat, a2_point(rs, 1, 2, 5))


def test_membership_witness_evaluates_all_finite_coords(lattice_of):
    rng = random.Random(47)
    for name in ["A3", "B3", "G2"]:
        rs, lat = lattice_of(name)
        for _ in range(25):
            fid = rng.randrange(len(lat))
            point = _member_of_flat(rs, lat, fid, rng)
            res = membership(rs, lat, point)
            assert isinstance(res, StratumResult)
            mask = lat.flat(fid).mask
            for p in range(rs.d):
                value = res.witness.evaluate(rs, p)
                if mask >> p & 1:
                    assert value == point.values[p]
                else:
                    # flats are span-closed, so everything else is off-span
                    assert value is None


def test_h_translate_examples(lattice_of):
    rs, lat = lattice_of("A2")
    p = a2_point(rs, 1, None, None)
    # alpha1(y) = 5 for y = (5, 0, 0): alpha1 = e1 - e2
    q = h_translate(rs, p, [5, 0, 0])
    assert q.values[pos_of_coords(rs, (1, -1, 0))] == 6
    assert q.values[pos_of_coords(rs, (0, 1, -1))] is None

    full = a2_point(rs, 1, 2, 3)
    assert h_translate(rs, full, [0, 0, 0]) == full


def test_h_translate_preserves_stratum(lattice_of):
    rng = random.Random(23)
    for name in ["A2", "B2", "G2"]:
        rs, lat = lattice_of(name)
        for _ in range(100):
            fid = rng.randrange(len(lat))
            point = _member_of_flat(rs, lat, fid, rng)
            y = [rng.randrange(-5, 6) for _ in range(rs.ambient)]
            assert stratum_of(rs, lat, h_translate(rs, point, y)) == fid


def _member_of_flat(rs, lat, fid, rng):
    mask = lat.flat(fid).mask
    h = [Fraction(rng.randrange(-4, 5)) for _ in range(rs.ambient)]
    vals = [None] * rs.d
    for p in rs.positions(mask):
        root = rs.roots[rs.positives[p]]
        vals[p] = sum(Fraction(a) * c for a, c in zip(root, h))
    return ExtendedPoint(tuple(vals))


def test_limit_point_example(lattice_of):
    rs, lat = lattice_of("A2")
    p1 = pos_of_coords(rs, (1, -1, 0))
    p2 = pos_of_coords(rs, (0, 1, -1))
    pt = pos_of_coords(rs, (1, 0, -1))
    flat_mask = 1 << p1
    witness = Functional((p1,), (Fraction(5),))
    a2_root = rs.index[(0, 1, -1)]
    point = limit_point(rs, flat_mask, witness, a2_root, 1000)
    assert point.values[p1] == 5
    assert point.values[p2] == 1000
    assert point.values[pt] == 1005
    assert stratum_of(rs, lat, point) == lat.top


def test_limit_point_divergence_pattern(lattice_of):
    # exactly the coordinates outside the target subsystem grow with t
    rs, lat = lattice_of("A2")
    p1 = pos_of_coords(rs, (1, -1, 0))
    flat_mask = 1 << p1
    witness = Functional((p1,), (Fraction(5),))
    lam0 = rs.index[(0, 1, -1)]
    a = limit_point(rs, flat_mask, witness, lam0, 10)
    b = limit_point(rs, flat_mask, witness, lam0, 11)
    for p in range(rs.d):
        moving = a.values[p] != b.values[p]
        assert moving == (not flat_mask >> p & 1)


def test_limit_point_span_deficient(lattice_of):
    rs, lat = lattice_of("A3")
    atom_root = rs.simples[0]
    mask = 1 << rs.pos_of[atom_root]
    witness = Functional((rs.pos_of[atom_root],), (Fraction(1),))
    # rank(atom) + one root cannot span a rank-3 space
    with pytest.raises(SpanDeficient):
        limit_point(rs, mask, witness, rs.simples[2], 7)


def test_limit_chains_realize_closure_order(lattice_of):
    # for every cover x < y, stratum-x points are limits of stratum-y points
    rng = random.Random(29)
    for name in ["A2", "A3", "B2"]:
        rs, lat = lattice_of(name)
        for lo, hi in lat.covers:
            lo_mask = lat.flat(lo).mask
            hi_mask = lat.flat(hi).mask
            assert leq(lat, lo, hi)
            target = _member_of_flat(rs, lat, lo, rng)
            basis_positions = []
            from coxstrata.linalg import IncrementalSpan

            span = IncrementalSpan(rs.ambient)
            for p in rs.positions(lo_mask):
                if span.add(rs.roots[rs.positives[p]]):
                    basis_positions.append(p)
            witness = Functional(
                tuple(basis_positions),
                tuple(target.values[p] for p in basis_positions),
            )
            lam0_pos = next(p for p in rs.positions(hi_mask) if not span.contains(rs.roots[rs.positives[p]]))
            lam0 = rs.positives[lam0_pos]
            approach = limit_point(rs, lo_mask, witness, lam0, 997, within=hi_mask)
            assert stratum_of(rs, lat, approach) == hi
            # finite coordinates on the lower flat agree with the target
            for p in rs.positions(lo_mask):
                assert approach.values[p] == target.values[p]


def test_generate_relations_examples(lattice_of):
    rs1, _ = lattice_of("A1")
    assert generate_relations(rs1) == []

    rs, _ = lattice_of("A2")
    rels = generate_relations(rs)
    assert len(rels) == 1
    support = relation_support(rels[0])
    assert len(support) == 3

    rsb, _ = lattice_of("B2")
    relsb = generate_relations(rsb)
    assert len(relsb) == 2
    from coxstrata.linalg import bareiss_rank

    assert bareiss_rank(relsb) == 2


def test_relations_vanish_on_embedded_space(lattice_of):
    rng = random.Random(31)
    for name in ["A3", "B3", "C3", "D4", "G2"]:
        rs, _ = lattice_of(name)
        rels = generate_relations(rs)
        assert len(rels) == rs.d - rs.rank
        for _ in range(10):
            h = [Fraction(rng.randrange(-6, 7)) for _ in range(rs.ambient)]
            values = [
                sum(Fraction(a) * c for a, c in zip(rs.roots[rs.positives[p]], h))
                for p in range(rs.d)
            ]
            for rel in rels:
                assert sum(c * values[p] for p, c in enumerate(rel)) == 0


def test_relation_support_dichotomy(lattice_of):
    # a relation meets a good subsystem fully or misses it in >= 2 spots
    for name in ["A1", "A2", "A3", "B2", "B3", "C2", "C3", "D3", "G2"]:
        rs, lat = lattice_of(name)
        rels = generate_relations(rs)
        for fid in lat.by_rank[rs.rank - 1]:
            mask = lat.flats[fid].mask
            for rel in rels:
                outside = [p for p in relation_support(rel) if not mask >> p & 1]
                assert len(outside) != 1, (name, fid, rel)


def test_grid_sweep_counts_match_whitney(lattice_of):
    # full sweep over a fixed value grid: every member lands in exactly
    # one stratum, every flat is hit, and per-rank hit counts match the
    # Whitney numbers
    from coxstrata.flats import whitney_second

    grids = {
        "A2": [None, Fraction(0), Fraction(1), Fraction(-1)],
        "B2": [None, Fraction(0), Fraction(1), Fraction(-1)],
        "A3": [None, Fraction(0), Fraction(1)],
        "D3": [None, Fraction(0), Fraction(1)],
        "G2": [None, Fraction(0), Fraction(1)],
        "B3": [None, Fraction(0)],
        "C3": [None, Fraction(0)],
    }
    for name, grid in grids.items():
        rs, lat = lattice_of(name)
        hit = {}
        for combo in product(grid, repeat=rs.d):
            res = membership(rs, lat, ExtendedPoint(combo))
            if isinstance(res, StratumResult):
                hit.setdefault(res.flat_id, 0)
                hit[res.flat_id] += 1
        assert set(hit) == set(range(len(lat))), name
        by_rank = {}
        for fid in hit:
            by_rank.setdefault(lat.flat(fid).rank, set()).add(fid)
        for rank, fids in by_rank.items():
            assert len(fids) == whitney_second(lat, rs.rank - rank), (name, rank)


def test_membership_invariant_under_actions(lattice_of):
    rng = random.Random(37)
    for name in ["A2", "B2", "D3"]:
        rs, lat = lattice_of(name)
        for _ in range(60):
            fid = rng.randrange(len(lat))
            point = _member_of_flat(rs, lat, fid, rng)
            word = [rng.randrange(1, rs.rank + 1) for _ in range(rng.randrange(0, 5))]
            moved = weyl_act_point(rs, word, point)
            res = membership(rs, lat, moved)
            assert isinstance(res, StratumResult)
            assert lat.flat(res.flat_id).rank == lat.flat(fid).rank
