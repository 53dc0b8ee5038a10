"""Smoke test for k0.py against hand-derived values."""
from __future__ import annotations

from weightlab import k0
from weightlab.blocks import p_blocks
from weightlab.dsl import parse_group_spec
from weightlab.errors import PTrivial, UnsupportedPointStructure
from weightlab.pairs import enumerate_ddelta_pairs
from weightlab.perm import Subgroup
from weightlab.session import get_session

s = get_session()


def blocks_of(spec, p):
    g = s.intern(parse_group_spec(spec))
    return g, p_blocks(g, p, session=s)


# --- C2 at p=2 ---
g, part = blocks_of("C(2)", 2)
(b,) = part.blocks
pairs = enumerate_ddelta_pairs(2, max_order=2, session=s)
assert [(pr.L.order, pr.u_order) for pr in pairs] == [(1, 1), (2, 1)]
triv_pair, c2_pair = pairs

lps = k0.local_points(g, 2, b.idempotent, Subgroup(g, frozenset(range(g.order)), check=False), session=s)
assert len(lps.points) == 1, lps.points

res = k0.sigma_element(g, 2, b, pairs, session=s)
for lab in res.labels:
    assert res.element[lab] == 0, (lab, res.element[lab])
assert not res.unsupported
print("C2 sigma coords all zero ok")

assert k0.multiplicity(g, 2, b, c2_pair, 0, session=s) == 1
assert k0.w_fixed_points(g, 2, b, c2_pair, 0, session=s) == 0

rep = k0.quintuple_involution_check(g, 2, b, c2_pair, 0, session=s)
assert rep.total == 2 and rep.signed_total == 0 and rep.members_checked == 2, rep
print("C2 quintuple set has", rep.total, "members, signed total 0 ok")

try:
    k0.quintuple_involution_check(g, 2, b, triv_pair, 0, session=s)
except PTrivial:
    print("trivial L refused ok")
else:
    raise AssertionError("expected PTrivial")

# --- S3 at p=3 ---
g3, part3 = blocks_of("S(3)", 3)
(b3,) = part3.blocks
assert b3.num_simples == 2 and b3.defect == 1
pairs3 = enumerate_ddelta_pairs(3, max_order=3, session=s)
assert [(pr.L.order, pr.u_order) for pr in pairs3] == [(1, 1), (3, 1), (3, 2)]
_, c3_triv, c3_inv = pairs3

# multiplicities at the group level
assert k0.multiplicity(g3, 3, b3, c3_inv, 0, session=s) == 1
m0 = k0.multiplicity(g3, 3, b3, c3_triv, 0, session=s)
m1 = k0.multiplicity(g3, 3, b3, c3_triv, 1, session=s)
assert sorted((m0, m1)) == [0, 1], (m0, m1)
print("S3 group-level multiplicities ok")

res3 = k0.sigma_element(g3, 3, b3, pairs3, session=s)
for lab in res3.labels:
    assert res3.element[lab] == 0, (lab, res3.element[lab])
assert not res3.unsupported
print("S3 p=3 sigma coords all zero ok (defect > 0)")

aut_inv = k0._aut_data(c3_inv, s)
assert aut_inv.out_order == 1
A = aut_inv.aut_pair.as_group()
for phi in range(A.order):
    assert k0.w_fixed_points(g3, 3, b3, c3_inv, phi, session=s) == 0
    rep = k0.quintuple_involution_check(g3, 3, b3, c3_inv, phi, session=s)
    assert rep.total == 4 and rep.signed_total == 0, rep
print("S3 (C3,inv) quintuples and w fixed points ok for", A.order, "automorphisms")

aut_triv = k0._aut_data(c3_triv, s)
assert aut_triv.out_order == 2

# --- S3 at p=2: defect-zero block is a unit vector at (1,1,triv) ---
g2, part2 = blocks_of("S(3)", 2)
d0 = [blk for blk in part2.blocks if blk.defect == 0]
assert len(d0) == 1
(blk0,) = d0
res0 = k0.sigma_element(g2, 2, blk0, pairs, session=s)
for lab in res0.labels:
    want = 1 if (lab.l_order == 1 and lab.v_index == 0) else 0
    assert res0.element[lab] == want, (lab, res0.element[lab])
print("S3 defect-0 block at p=2 is the unit vector at (1,1,triv) ok")

# positive-defect principal block of S3 at p=2
pb = [blk for blk in part2.blocks if blk.defect > 0][0]
resp = k0.sigma_element(g2, 2, pb, pairs, session=s)
for lab in resp.labels:
    assert resp.element[lab] == 0, (lab, resp.element[lab])
repp = k0.quintuple_involution_check(g2, 2, pb, c2_pair, 0, session=s)
assert repp.signed_total == 0 and repp.total > 0
print("S3 p=2 principal block quintuples:", repp.total, "signed 0 ok")

# --- unsupported point structure: S3 x S3 at p=3 ---
gx, partx = blocks_of("S(3) x S(3)", 3)
assert len(partx.blocks) == 1
(bx,) = partx.blocks
resx = k0.sigma_element(gx, 3, bx, [c3_triv], session=s)
assert resx.unsupported == [c3_triv.key], resx.unsupported
assert all(lab not in resx.element.coords for lab in resx.labels)
try:
    k0.quintuple_involution_check(gx, 3, bx, c3_triv, 0, session=s)
except UnsupportedPointStructure as exc:
    print("S3xS3 unsupported label gated ok:", exc.detail or "l>1")
else:
    raise AssertionError("expected UnsupportedPointStructure")

# --- left-stabilizer identity on S3, p=3, P=A3 ---
g3i = g3
stab_all = Subgroup(g3i, frozenset(range(g3i.order)), check=False)
p_members = frozenset(i for i in range(g3i.order) if g3i.orders[i] in (1, 3))
lps3 = k0.local_points(g3i, 3, b3.idempotent, Subgroup(g3i, p_members, check=False), session=s)
table, inv = g3i.table, g3i.inv
for gamma in range(len(lps3.points)):
    for pi_pos in [tuple(range(3))]:
        direct = set()
        for h in range(g3i.order):
            if not all(int(table[table[h, e], inv[h]]) in p_members for e in lps3.sorted_p):
                continue
            if lps3.point_image(gamma, h) != gamma:
                continue
            sig = lps3.conj_signature(h)
            if all(sig[k] == k for k in range(3)):
                direct.add(h)
        c_g = {h for h in range(g3i.order)
               if all(int(table[table[h, e], inv[h]]) == e for e in lps3.sorted_p)}
        expected = c_g & set(lps3.point_stabs[gamma])
        assert direct == expected, (direct, expected)
print("left-stabilizer identity ok")

print("ALL K0 SMOKE OK")
