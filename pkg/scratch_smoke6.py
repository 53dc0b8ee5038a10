"""Heavier k0 stress: S4/A4/D12 at p=2, S4 at p=3, with timing."""
from __future__ import annotations

import time

from weightlab import k0
from weightlab.blocks import p_blocks
from weightlab.dsl import parse_group_spec
from weightlab.pairs import enumerate_ddelta_pairs
from weightlab.session import get_session

s = get_session()


def run(spec, p, max_l):
    g = s.intern(parse_group_spec(spec))
    part = p_blocks(g, p, session=s)
    pairs = enumerate_ddelta_pairs(p, max_order=max_l, session=s)
    t0 = time.time()
    for b in part.blocks:
        res = k0.sigma_element(g, p, b, pairs, session=s)
        for lab in res.labels:
            want = (1 if b.defect == 0 else 0) if (lab.l_order == 1 and lab.v_index == 0) else 0
            if lab.l_order > 1 and lab.pair_key in res.unsupported:
                continue
            assert res.element[lab] == want, (spec, p, b.block_id, lab, res.element[lab])
        if res.unsupported:
            print(f"  {spec} p={p} {b.block_id}: unsupported {res.unsupported}")
        for pr in pairs:
            if pr.L.order == 1 or pr.key in res.unsupported:
                continue
            data = k0._aut_data(pr, s)
            A = data.aut_pair.as_group()
            phis = [int(r) for r in A.classes.rep_indices]
            for phi in phis:
                w = k0.w_fixed_points(g, p, b, pr, phi, session=s)
                assert w == 0, (spec, p, b.block_id, pr.key, phi, w)
            rep = k0.quintuple_involution_check(g, p, b, pr, phis[0], session=s)
            assert rep.signed_total == 0
    print(f"{spec} p={p}: {len(part.blocks)} blocks, {len(pairs)} pairs, "
          f"{time.time()-t0:.1f}s")


run("A(4)", 2, 4)
run("D(12)", 2, 4)
run("S(4)", 2, 8)
run("S(4)", 3, 3)
run("C(12)", 2, 4)
run("C(12)", 3, 3)
print("ALL K0 STRESS OK")
