"""Chain orbits, the alternating sum, and the length-flipping involution."""

from __future__ import annotations

import random

import pytest

from weightlab.blocks import chain_block, p_blocks
from weightlab.chains import Chain, awc_sum, chain_orbits, count_chains, kr_involution
from weightlab.dsl import parse_group_spec
from weightlab.errors import BudgetExceeded, PNotInStabilizer, PTrivial
from weightlab.perm import Subgroup, p_subgroups


def brute_chains(group, p):
    """Every strictly increasing chain of p-subgroups anchored at 1.

    Deliberately naive: depth-first over the raw subgroup list using only set
    inclusion, no conjugation or orbit bookkeeping.
    """
    lat = p_subgroups(group, p)
    subs = lat.subgroups
    out = []

    def grow(prefix):
        out.append(tuple(prefix))
        top = prefix[-1]
        for cand in subs:
            if len(cand) > len(top) and top < cand:
                grow(prefix + [cand])

    grow([frozenset({0})])
    return out


CASES = ["S(3)", "S(4)", "A(4)", "D(8)", "Q(8)", "D(12)", "A(5)"]


def test_orbits_cover_all_chains():
    for spec in CASES:
        g = parse_group_spec(spec)
        for p in {2, 3, 5}:
            if g.order % p:
                continue
            raw = brute_chains(g, p)
            orbits = chain_orbits(g, p)
            assert sum(o.orbit_size for o in orbits) == len(raw), (spec, p)
            assert count_chains(g, p) == len(raw)
            # length census agrees
            by_len_raw: dict[int, int] = {}
            for ch in raw:
                by_len_raw[len(ch) - 1] = by_len_raw.get(len(ch) - 1, 0) + 1
            by_len_orb: dict[int, int] = {}
            for o in orbits:
                by_len_orb[o.chain.length] = by_len_orb.get(o.chain.length, 0) + o.orbit_size
            assert by_len_raw == by_len_orb, (spec, p)


def test_orbit_stabilizers():
    g = parse_group_spec("S(4)")
    for p in (2, 3):
        for orb in chain_orbits(g, p):
            orb.verify()
            stab = orb.chain.stabilizer()
            # stabilizer elements fix every member setwise
            for x in stab.indices:
                conj = orb.chain.conjugate(int(x))
                assert conj.members == orb.chain.members
            # orbit * stabilizer = group order (checked in verify; restate)
            assert orb.orbit_size * stab.order == g.order


def test_orbit_reps_not_conjugate_to_each_other():
    g = parse_group_spec("A(4)")
    orbits = chain_orbits(g, 2)
    seen = set()
    for orb in orbits:
        images = frozenset(orb.chain.conjugate(x).members for x in range(g.order))
        assert not (images & seen)
        seen |= images
    assert len(seen) == sum(o.orbit_size for o in orbits)


def test_chain_validation():
    g = parse_group_spec("S(4)")
    c2 = next(s for s in p_subgroups(g, 2).subgroups if len(s) == 2)
    chain = Chain(g, 2, (frozenset({0}), c2))
    chain.verify()
    with pytest.raises(Exception):
        Chain(g, 2, (c2,)).verify()  # must be anchored at the trivial group
    base = Chain.base(g, 2)
    assert base.length == 0 and base.top_subgroup().order == 1
    assert base.stabilizer().order == g.order


def test_awc_sums_small():
    # p-defect of each block decides the expected alternating sum
    for spec, p in (("S(4)", 2), ("S(4)", 3), ("A(5)", 2), ("S(3)", 3), ("C(12)", 2)):
        g = parse_group_spec(spec)
        for b in p_blocks(g, p).blocks:
            rep = awc_sum(g, p, b)
            assert rep.alternating_sum == (1 if b.defect == 0 else 0), (spec, p, b.index)
            assert rep.passed and rep.verdict == "pass"
            # report total agrees with its own ledger
            recomputed = sum(
                (-1 if row.length % 2 else 1) * row.l_value for row in rep.ledger
            )
            assert recomputed == rep.alternating_sum


def test_awc_report_json():
    g = parse_group_spec("S(3)")
    b = p_blocks(g, 2).blocks[0]
    rep = awc_sum(g, 2, b, group_spec="S(3)")
    data = rep.to_json()
    assert data["group"] == "S(3)"
    assert data["sum"] == rep.alternating_sum
    assert data["expected"] == rep.expected
    assert len(data["ledger"]) == len(rep.ledger)


def test_budget():
    g = parse_group_spec("S(4)")
    with pytest.raises(BudgetExceeded):
        chain_orbits(g, 2, budget=3)
    with pytest.raises(BudgetExceeded):
        awc_sum(g, 2, p_blocks(g, 2).blocks[0], budget=3)


def test_involution_is_an_involution():
    rng = random.Random(5)
    for spec in ("S(4)", "A(4)", "D(8)", "A(5)"):
        g = parse_group_spec(spec)
        for p in (2, 3, 5):
            if g.order % p:
                continue
            lat = p_subgroups(g, p)
            for orb in chain_orbits(g, p):
                chain = orb.chain
                stab = chain.stabilizer()
                choices = [s for s in lat.subgroups if len(s) > 1 and s <= stab.indices]
                rng.shuffle(choices)
                for pset in choices[:4]:
                    psub = Subgroup(g, pset, check=False)
                    other = kr_involution(chain, psub)
                    assert abs(other.length - chain.length) == 1
                    other.verify()
                    # P still lies in the stabilizer of the image
                    assert pset <= other.stabilizer().indices
                    assert kr_involution(other, psub) == chain


def test_involution_rejects_bad_inputs():
    g = parse_group_spec("S(4)")
    chain = Chain.base(g, 2)
    with pytest.raises(PTrivial):
        kr_involution(chain, Subgroup(g, frozenset({0})))
    c2 = next(s for s in p_subgroups(g, 2).subgroups if len(s) == 2)
    longer = kr_involution(Chain.base(g, 2), Subgroup(g, c2, check=False))
    assert longer.length == 1 and longer.members[1] == c2
    # a P outside the stabilizer of some chain is refused
    for orb in chain_orbits(g, 2):
        stab = orb.chain.stabilizer()
        outside = [
            s for s in p_subgroups(g, 2).subgroups if len(s) > 1 and not s <= stab.indices
        ]
        if outside:
            with pytest.raises(PNotInStabilizer):
                kr_involution(orb.chain, Subgroup(g, outside[0], check=False))
            break


def test_involution_preserves_block_data():
    # the paired chain has the same stabilizer-blocks restriction behavior
    g = parse_group_spec("A(5)")
    part = p_blocks(g, 2)
    b0 = next(b for b in part.blocks if b.is_principal)
    lat = p_subgroups(g, 2)
    checked = 0
    for orb in chain_orbits(g, 2):
        chain = orb.chain
        stab = chain.stabilizer()
        for pset in lat.subgroups:
            if len(pset) == 1 or not pset <= stab.indices:
                continue
            psub = Subgroup(g, pset, check=False)
            other = kr_involution(chain, psub)
            stab2 = other.stabilizer()
            # the two stabilizers both contain P and share its normalizer data
            assert pset <= stab2.indices
            data1 = chain_block(g, b0, chain)
            data2 = chain_block(g, b0, other)
            assert data1.central.algebra.group.order == stab.order
            assert data2.central.algebra.group.order == stab2.order
            checked += 1
            if checked >= 6:
                return
    assert checked > 0
