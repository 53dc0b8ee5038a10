"""Pairs (L, u): a p-group with a coprime automorphism, up to isomorphism."""

from __future__ import annotations

import pytest

from weightlab.dsl import parse_group_spec
from weightlab.errors import CapExceeded
from weightlab.pairs import (
    DDeltaPair,
    automorphism_group,
    enumerate_ddelta_pairs,
    is_automorphism,
    pair_aut_data,
    pair_isomorphic,
)
from weightlab.perm import Perm, find_isomorphism, p_subgroups

AUT_ORDERS = {
    "C(2)": 1,
    "C(4)": 2,
    "C(2) x C(2)": 6,
    "C(2) x C(2) x C(2)": 168,
    "D(8)": 8,
    "Q(8)": 24,
    "C(3)": 2,
    "C(9)": 6,
    "C(3) x C(3)": 48,
    "S(3)": 6,
}


def test_automorphism_group_orders():
    for spec, want in AUT_ORDERS.items():
        g = parse_group_spec(spec)
        aut = automorphism_group(g)
        assert aut.order == want, spec
        # every member really is an automorphism
        for i in range(min(aut.order, 12)):
            assert is_automorphism(g, aut.element(i))


def pick_u3(v4):
    aut = automorphism_group(v4)
    return next(aut.element(i) for i in range(aut.order) if aut.element(i).order() == 3)


def test_semidirect_of_klein_with_triality_is_a4():
    v4 = parse_group_spec("C(2) x C(2)")
    pair = DDeltaPair(2, v4, pick_u3(v4))
    assert pair.semidirect.order == 12
    assert find_isomorphism(pair.semidirect, parse_group_spec("A(4)")) is not None
    # the embedded copy of L is normal of index |u|
    assert pair.u_order == 3
    assert len(pair.l_to_m) == 4


def test_pair_construction_guards():
    v4 = parse_group_spec("C(2) x C(2)")
    with pytest.raises(AssertionError):
        DDeltaPair(2, v4, Perm.from_cycles(4, [(0, 1)]))  # moves the identity
    with pytest.raises(CapExceeded):
        DDeltaPair(2, v4, pick_u3(v4), semidirect_cap=10)
    with pytest.raises(AssertionError):
        DDeltaPair(3, v4, pick_u3(v4))  # |u| = 3 is not coprime to p = 3


def test_restriction_to_l_is_an_automorphism():
    v4 = parse_group_spec("C(2) x C(2)")
    pair = DDeltaPair(2, v4, pick_u3(v4))
    data = pair_aut_data(pair)
    table = v4.table
    for own in range(data.aut_pair.order):
        r = data.restriction(own)
        for a in range(4):
            for b in range(4):
                assert r[table[a, b]] == table[r[a], r[b]]


def test_pair_isomorphic_basics():
    v4 = parse_group_spec("C(2) x C(2)")
    c4 = parse_group_spec("C(4)")
    aut = automorphism_group(v4)
    threes = [aut.element(i) for i in range(aut.order) if aut.element(i).order() == 3]
    a = DDeltaPair(2, v4, threes[0])
    b = DDeltaPair(2, v4, threes[1])  # the inverse triality: same class
    assert pair_isomorphic(a, b) is not None
    assert pair_isomorphic(b, a) is not None
    triv_v4 = DDeltaPair(2, v4, Perm.identity(4))
    triv_c4 = DDeltaPair(2, c4, Perm.identity(4))
    assert pair_isomorphic(triv_v4, triv_c4) is None
    assert pair_isomorphic(a, triv_v4) is None  # same L, different u
    assert pair_isomorphic(a, a) is not None


OUT_ORDERS_P2 = {(1, 1): 1, (2, 1): 1, (4, 1, "C"): 2, (4, 1, "V"): 6, (4, 3): 1}


def classify(pair) -> tuple:
    if pair.L.order == 4 and pair.u_order == 1:
        kind = "C" if max(int(o) for o in pair.L.orders) == 4 else "V"
        return (4, 1, kind)
    return (pair.L.order, pair.u_order)


def test_enumerate_pairs_p2_order4():
    pairs = enumerate_ddelta_pairs(2, max_order=4)
    assert len(pairs) == 5
    got = {classify(q): pair_aut_data(q).out_order for q in pairs}
    assert got == OUT_ORDERS_P2


def test_enumerate_pairs_p3_order3():
    pairs = enumerate_ddelta_pairs(3, max_order=3)
    # trivial, (C3, 1), (C3, inversion)
    assert sorted((q.L.order, q.u_order) for q in pairs) == [(1, 1), (3, 1), (3, 2)]
    outs = {(q.L.order, q.u_order): pair_aut_data(q).out_order for q in pairs}
    assert outs == {(1, 1): 1, (3, 1): 2, (3, 2): 1}


def test_enumerate_within_group():
    s5 = parse_group_spec("S(5)")
    pairs = enumerate_ddelta_pairs(2, max_order=16, within=s5)
    shapes = sorted((q.L.order, q.u_order) for q in pairs)
    assert shapes == [(1, 1), (2, 1), (4, 1), (4, 1), (4, 3), (8, 1)]
    # within only keeps L that embed: no C8 or order-16 groups inside S5
    assert all(q.L.order <= 8 for q in pairs)


def brute_pair_classes(p: int, max_order: int, container):
    """Independent enumeration: every subgroup of the container, every coprime
    automorphism element (not just class representatives), greedy classification."""
    from weightlab.perm import Subgroup

    lat = p_subgroups(container, p)
    classes: list[DDeltaPair] = []
    for members in lat.subgroups:
        if len(members) > max_order:
            continue
        Lg = Subgroup(container, members, check=False).as_group()
        aut = automorphism_group(Lg)
        for i in range(aut.order):
            u = aut.element(i)
            if u.order() % p == 0:
                continue
            cand = DDeltaPair(p, Lg, u)
            if not any(pair_isomorphic(cand, k) is not None for k in classes):
                classes.append(cand)
    return classes


def test_brute_enumeration_agrees_p2():
    container = parse_group_spec("D(8)")
    brute = brute_pair_classes(2, 4, container)
    fast = enumerate_ddelta_pairs(2, max_order=4)
    assert len(brute) == len(fast) == 5
    # one-to-one matching between the two lists
    used = set()
    for q in fast:
        hit = next(
            j for j, r in enumerate(brute) if j not in used and pair_isomorphic(q, r) is not None
        )
        used.add(hit)
    assert len(used) == 5


def test_out_order_independent_count():
    """|Out(L,u)| = |Aut(L,u)| / |Inn(M)| with both factors counted directly."""
    for q in enumerate_ddelta_pairs(2, max_order=4):
        M = q.semidirect
        aut_m = automorphism_group(M)
        u_class = int(M.classes.class_of[q.u_index])
        stab = [
            i
            for i in range(aut_m.order)
            if int(M.classes.class_of[aut_m.element(i)(q.u_index)]) == u_class
        ]
        center = sum(
            1
            for z in range(M.order)
            if all(M.table[z, x] == M.table[x, z] for x in range(M.order))
        )
        inn = M.order // center
        assert len(stab) % inn == 0
        assert len(stab) // inn == pair_aut_data(q).out_order


def test_abstract_enumeration_cap():
    # order-16 candidates need a container too large for the default cap
    with pytest.raises(CapExceeded):
        enumerate_ddelta_pairs(2, max_order=16)
