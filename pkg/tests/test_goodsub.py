from __future__ import annotations

import pytest

from coxstrata.betti import f_closed_form
from coxstrata.errors import MalformedDescriptor, NotClassical, NotGood, StarViolation
from coxstrata.flats import whitney_second
from coxstrata.goodsub import (
    bds_candidates,
    bds_covers_all,
    classical_omit_node,
    descriptors_of,
    enumerate_good,
    is_k_step_good,
    param_F,
    param_G,
    star_check,
    star_sets,
)
from coxstrata.rootsys import CartanType, classify_subsystem, closure


def test_is_k_step_good_examples(lattice_of):
    rs, _ = lattice_of("A2")
    theta = rs.index[(1, 0, -1)]
    a1, a2 = rs.simples
    assert is_k_step_good(rs, [theta], 1)
    assert not is_k_step_good(rs, [a1, a2], 0)

    b2, _ = lattice_of("B2")
    longs = b2.as_mask([b2.index[(1, -1)], b2.index[(1, 1)]])
    # rank 2 but its span closure is the whole system
    assert not is_k_step_good(b2, longs, 0)
    assert closure(b2, longs) == b2.full_mask


def test_every_flat_is_k_step_good(lattice_of):
    for name in ["A3", "B3", "D4", "G2"]:
        rs, lat = lattice_of(name)
        for f in lat.flats:
            assert is_k_step_good(rs, f.mask, rs.rank - f.rank)


def test_enumerate_good_examples(lattice_of):
    rs, lat = lattice_of("A2")
    goods = enumerate_good(rs, lat)
    assert len(goods) == 3
    types = {classify_subsystem(rs, m) for m in goods}
    assert types == {CartanType.parse("A1")}

    g2, latg = lattice_of("G2")
    assert len(enumerate_good(g2, latg)) == 6
    b3, latb = lattice_of("B3")
    assert len(enumerate_good(b3, latb)) == 13


def test_bds_candidates_examples(lattice_of):
    rs, _ = lattice_of("A2")
    cands = bds_candidates(rs)
    assert len(cands) == 3
    assert all(classify_subsystem(rs, m) == CartanType.parse("A1") for _, m in cands)

    g2, _ = lattice_of("G2")
    cands = bds_candidates(g2)
    assert len(cands) == 3  # labels (1, 3, 2): all pairs coprime
    assert all(classify_subsystem(g2, m) == CartanType.parse("A1") for _, m in cands)

    b2, _ = lattice_of("B2")
    for _, m in bds_candidates(b2):
        assert is_k_step_good(b2, m, 1)


def test_bds_coprime_filter():
    from coxstrata.rootsys import build_root_system
    from itertools import combinations
    from math import gcd

    rs = build_root_system("F4")
    pairs = {ij for ij, _ in bds_candidates(rs)}
    expected = {
        (i, j)
        for i, j in combinations(range(rs.rank + 1), 2)
        if gcd(rs.labels[i], rs.labels[j]) == 1
    }
    assert pairs == expected
    assert (1, 3) not in pairs  # labels 2 and 4 share a factor


def test_bds_covers_all_small_types(lattice_of):
    for name in ["A1", "A2", "A3", "A4", "B2", "B3", "B4", "C2", "C3", "C4",
                 "D3", "D4", "G2", "F4"]:
        rs, lat = lattice_of(name)
        assert bds_covers_all(rs, lat), name


def test_parabolic_characterization(lattice_of):
    # each good subsystem's type appears among the candidate types
    for name in ["A3", "B3", "C3", "D4", "G2", "F4"]:
        rs, lat = lattice_of(name)
        cand_types = {classify_subsystem(rs, m) for _, m in bds_candidates(rs)}
        for fid in lat.by_rank[rs.rank - 1]:
            assert classify_subsystem(rs, lat.flats[fid].mask) in cand_types


def test_classical_omit_node(lattice_of):
    a3, _ = lattice_of("A3")
    assert classify_subsystem(a3, classical_omit_node(a3, 2)) == CartanType.parse("A1xA1")

    a2, _ = lattice_of("A2")
    omit1 = classical_omit_node(a2, 1)
    assert omit1 == a2.as_mask([a2.simples[1]])

    b3, _ = lattice_of("B3")
    assert classify_subsystem(b3, classical_omit_node(b3, 1)) == CartanType.parse("B2")
    for i in (1, 2, 3):
        assert is_k_step_good(b3, classical_omit_node(b3, i), 1)

    g2, _ = lattice_of("G2")
    with pytest.raises(NotClassical):
        classical_omit_node(g2, 1)
    with pytest.raises(MalformedDescriptor):
        classical_omit_node(b3, 4)


def test_star_check_type_a():
    assert star_check("A3", {(1, 1), (2, 3)})
    assert not star_check("A3", {(1, 2), (1, 3)})  # shared i
    assert not star_check("A3", {(1, 3), (2, 3)})  # shared j
    assert star_check("A3", set())
    with pytest.raises(MalformedDescriptor):
        star_check("A3", {(3, 1)})
    with pytest.raises(MalformedDescriptor):
        star_check("A3", {(0, 1)})


def test_star_check_type_b():
    assert star_check("B3", {(1,), (2, 3, "+")})
    assert not star_check("B3", {(1,), (1, 2, "-")})  # singleton blocks its index
    assert not star_check("B3", {(1, 2, "+"), (1, 2, "-")})  # same pair twice
    assert star_check("B2", {(1,), (2,)})
    with pytest.raises(MalformedDescriptor):
        star_check("B2", {(2, 1, "+")})


def test_star_check_type_d_fixture():
    good = {(1, 2, "-"), (2, 3, "-"), (3, 4, "-"), (3, 4, "+")}
    assert star_check("D4", good)
    # two pairs carrying both signs
    assert not star_check("D4", {(1, 2, "+"), (1, 2, "-"), (3, 4, "+"), (3, 4, "-")})
    # chain into the double pair must be minus-signed
    assert not star_check("D4", {(1, 2, "+"), (2, 3, "+"), (2, 3, "-")})
    assert star_check("D4", {(1, 2, "-"), (2, 3, "+"), (2, 3, "-")})
    # nothing may continue past the double pair
    assert not star_check("D4", {(2, 3, "+"), (2, 3, "-"), (3, 4, "-")})
    with pytest.raises(NotClassical):
        star_check("G2", set())


def test_param_f_examples(lattice_of):
    a2, _ = lattice_of("A2")
    theta_mask = 1 << a2.pos_of[a2.index[(1, 0, -1)]]
    assert param_F(a2, theta_mask) == frozenset({(1, 2)})

    d4, _ = lattice_of("D4")
    assert param_F(d4, d4.full_mask) == frozenset(
        {(1, 2, "-"), (2, 3, "-"), (3, 4, "-"), (3, 4, "+")}
    )

    a3, _ = lattice_of("A3")
    sub = closure(a3, [a3.simples[0], a3.simples[2]])
    assert param_F(a3, sub) == frozenset({(1, 1), (3, 3)})


def test_param_f_rejects_non_good(lattice_of):
    a2, _ = lattice_of("A2")
    with pytest.raises(NotGood):
        param_F(a2, a2.as_mask([a2.simples[0], a2.simples[1]]))
    g2, _ = lattice_of("G2")
    with pytest.raises(NotClassical):
        param_F(g2, g2.full_mask)


def test_param_g_examples(lattice_of):
    a2, _ = lattice_of("A2")
    theta_mask = 1 << a2.pos_of[a2.index[(1, 0, -1)]]
    assert param_G(a2, {(1, 2)}) == theta_mask

    b2, _ = lattice_of("B2")
    eps1_mask = 1 << b2.pos_of[b2.index[(1, 0)]]
    assert param_G(b2, {(1,)}) == eps1_mask

    a3, _ = lattice_of("A3")
    got = param_G(a3, {(1, 1), (2, 3)})
    # alpha_1 + alpha_{2,3} is again a root, so the additive closure is the
    # rank-2 block subsystem on {1, 2, 4}, of type A2, and F recovers P.
    expected = a3.as_mask(
        [a3.simples[0], a3.index[(0, 1, 0, -1)], a3.index[(1, 0, 0, -1)]]
    )
    assert got == expected
    assert classify_subsystem(a3, got) == CartanType.parse("A2")
    assert param_F(a3, got) == frozenset({(1, 1), (2, 3)})

    with pytest.raises(StarViolation):
        param_G(a3, {(1, 2), (1, 3)})


def test_round_trips_and_counts(lattice_of):
    cases = (
        [(f"A{r}", r) for r in range(1, 6)]
        + [(f"B{r}", r) for r in (2, 3, 4)]
        + [(f"C{r}", r) for r in (2, 3, 4)]
        + [("D3", 3), ("D4", 4)]
    )
    for name, r in cases:
        rs, lat = lattice_of(name)
        for k in range(r + 1):
            sets = list(star_sets(name, r - k))
            assert len(sets) == f_closed_form(name, k) == whitney_second(lat, k)
            for P in sets:
                assert param_F(rs, param_G(rs, P)) == P
            for fid in lat.by_rank[r - k]:
                mask = lat.flats[fid].mask
                assert param_G(rs, param_F(rs, mask)) == mask


def test_descriptors_of_roundtrip(lattice_of):
    for name in ["A3", "B3", "C3", "D4"]:
        rs, _ = lattice_of(name)
        descs = descriptors_of(rs, rs.full_mask)
        assert len(descs) == rs.d
