"""Modular block data against independently derived (defect, l, k) tables.

The expected multisets below come from the classical block theory of small
symmetric, alternating and p-groups: partition p-cores pin down the block
distribution for S(n) and A(n), p-groups have a single block, and abelian
groups split by restriction to the p'-part. None of them were computed with
this package.
"""

from __future__ import annotations

from weightlab.blocks import BlockPartition, brauer_map, chain_block, p_blocks
from weightlab.chains import Chain
from weightlab.dsl import parse_group_spec
from weightlab.perm import Perm, Subgroup, centralizer, normalizer, p_subgroups
from weightlab.session import get_session

# (defect, num_simples, num_ordinary) per block, as multisets
EXPECTED = {
    ("S(3)", 2): [(0, 1, 1), (1, 1, 2)],
    ("S(3)", 3): [(1, 2, 3)],
    ("S(4)", 2): [(3, 2, 5)],
    ("S(4)", 3): [(0, 1, 1), (0, 1, 1), (1, 2, 3)],
    ("S(5)", 2): [(1, 1, 2), (3, 2, 5)],
    ("S(5)", 3): [(0, 1, 1), (1, 2, 3), (1, 2, 3)],
    ("S(5)", 5): [(0, 1, 1), (0, 1, 1), (1, 4, 5)],
    ("A(4)", 2): [(2, 3, 4)],
    ("A(4)", 3): [(0, 1, 1), (1, 1, 3)],
    ("A(5)", 2): [(0, 1, 1), (2, 3, 4)],
    ("A(5)", 3): [(0, 1, 1), (0, 1, 1), (1, 2, 3)],
    ("A(5)", 5): [(0, 1, 1), (1, 2, 4)],
    ("D(8)", 2): [(3, 1, 5)],
    ("Q(8)", 2): [(3, 1, 5)],
    ("C(6)", 2): [(1, 1, 2), (1, 1, 2), (1, 1, 2)],
    ("C(6)", 3): [(1, 1, 3), (1, 1, 3)],
}


def shape(partition: BlockPartition):
    return sorted((b.defect, b.num_simples, len(b.irr_indices)) for b in partition.blocks)


def test_frozen_block_shapes():
    for (spec, p), want in EXPECTED.items():
        part = p_blocks(parse_group_spec(spec), p)
        assert shape(part) == want, (spec, p)


def test_partition_axioms():
    for spec, p in (("S(4)", 2), ("S(5)", 3), ("A(5)", 5), ("S(3) x S(3)", 3)):
        part = p_blocks(parse_group_spec(spec), p)
        part.verify()  # idempotent, orthogonality, p-regular support, counts


def test_defect_zero_blocks_are_singletons():
    for (spec, p), _ in EXPECTED.items():
        part = p_blocks(parse_group_spec(spec), p)
        for b in part.blocks:
            if b.defect == 0:
                assert b.num_simples == 1 and len(b.irr_indices) == 1


def test_principal_block():
    from weightlab.blocks import nu_p

    for spec, p in (("S(4)", 2), ("S(5)", 5), ("A(5)", 2), ("C(6)", 3)):
        g = parse_group_spec(spec)
        part = p_blocks(g, p)
        principals = [b for b in part.blocks if b.is_principal]
        assert len(principals) == 1
        b0 = principals[0]
        assert b0.defect == nu_p(g.order, p)  # full defect
        # the trivial character lives in it
        table = part.table
        triv = next(
            i
            for i in range(table.num_irr)
            if all(
                table.value(i, c).is_rational() and table.value(i, c).as_rational() == 1
                for c in range(table.num_irr)
            )
        )
        assert part.block_of_irr(triv) is b0


def test_brauer_map_third_main_flavor():
    sess = get_session()
    # S5 at p=5: truncating the principal idempotent to C(P) = P gives the
    # identity of Z(kC5); defect-zero blocks die.
    g = parse_group_spec("S(5)")
    part = p_blocks(g, 5)
    syl = next(s for s in p_subgroups(g, 5).class_reps if s.order == 5)
    cent = centralizer(g, syl)
    assert cent.order == 5
    h_alg_one = None
    for b in part.blocks:
        img = brauer_map(b.idempotent, syl, cent)
        if b.is_principal:
            assert img == img.algebra.one()
            h_alg_one = img
        else:
            assert b.defect == 0 and img.is_zero()
    assert h_alg_one is not None


def test_brauer_map_at_normalizer():
    g = parse_group_spec("S(4)")
    part = p_blocks(g, 3)
    syl = next(s for s in p_subgroups(g, 3).class_reps if s.order == 3)
    norm = normalizer(g, syl)
    assert norm.order == 6
    for b in part.blocks:
        img = brauer_map(b.idempotent, syl, norm)
        if b.is_principal:
            assert img == img.algebra.one()  # kS3 at p=3 has a single block
        else:
            assert img.is_zero()


def test_brauer_map_needs_valid_sandwich():
    import pytest

    g = parse_group_spec("S(4)")
    part = p_blocks(g, 2)
    syl2 = next(s for s in p_subgroups(g, 2).class_reps if s.order == 8)
    tiny = Subgroup(g, frozenset({0}))
    with pytest.raises(ValueError):
        brauer_map(part.blocks[0].idempotent, syl2, tiny)


def test_chain_block_decomposition():
    g = parse_group_spec("S(4)")
    part3 = p_blocks(g, 3)
    b0 = next(b for b in part3.blocks if b.is_principal)
    c3 = next(s for s in p_subgroups(g, 3).subgroups if len(s) == 3)
    chain = Chain(g, 3, (frozenset({0}), c3))
    data = chain_block(g, b0, chain)
    assert len(data.constituents) == 1
    assert data.l_value == 2  # principal block of S3 at p=3 has two simples
    assert data.central == data.constituents[0].idempotent


def test_chain_block_equal_stabilizers():
    g = parse_group_spec("S(4)")
    part = p_blocks(g, 2)
    b = part.blocks[0]
    t = g.index_of(Perm.from_cycles(4, [(0, 1)]))
    c2 = next(s for s in p_subgroups(g, 2).subgroups if len(s) == 2 and t in s)
    v4 = next(s for s in p_subgroups(g, 2).subgroups if len(s) == 4 and c2 < s and t in s)
    short = Chain(g, 2, (frozenset({0}), c2))
    long = Chain(g, 2, (frozenset({0}), c2, v4))
    if short.stabilizer().indices == long.stabilizer().indices:
        assert chain_block(g, b, short).central == chain_block(g, b, long).central


def test_partition_json_round_trip(tmp_path):
    g = parse_group_spec("A(4)")
    part = p_blocks(g, 2)
    data = part.to_json()
    revived = BlockPartition.from_json(part.table, part.redmap, data)
    assert shape(revived) == shape(part)
    for a, b in zip(part.blocks, revived.blocks):
        assert a.idempotent == b.idempotent
        assert a.irr_indices == b.irr_indices
    revived.verify()
