import numpy as np

from weightlab.dsl import parse_group_spec
from weightlab.pairs import (
    DDeltaPair, automorphism_group, enumerate_ddelta_pairs, is_automorphism,
    pair_aut_data, pair_isomorphic, _wreath_cp,
)
from weightlab.perm import Perm, PermGroup
from weightlab.session import Session, set_session

set_session(Session())

# automorphism groups
c2 = parse_group_spec("C(2)")
assert automorphism_group(c2).order == 1
c4 = parse_group_spec("C(4)")
assert automorphism_group(c4).order == 2
v4 = parse_group_spec("C(2)xC(2)")
a_v4 = automorphism_group(v4)
assert a_v4.order == 6 and not a_v4.is_abelian  # GL(2,2) = S3
q8 = parse_group_spec("Q(8)")
assert automorphism_group(q8).order == 24
c2cubed = parse_group_spec("C(2)xC(2)xC(2)")
assert automorphism_group(c2cubed).order == 168  # |GL(3,2)|
d8 = parse_group_spec("D(8)")
assert automorphism_group(d8).order == 8
print("automorphism groups ok")

# wreath containers
w2 = _wreath_cp(2, 2)
assert w2.order == 8
w3 = _wreath_cp(2, 3)
assert w3.order == 128
assert _wreath_cp(3, 1).order == 3
print("wreath ok")

# pair construction: (V4, u) with ord(u)=3 -> semidirect A4
av4 = automorphism_group(v4)
u3 = next(av4.element(int(av4.classes.rep_indices[c]))
          for c in range(av4.classes.num_classes) if av4.classes.rep_order(c) == 3)
pair = DDeltaPair(2, v4, u3)
assert pair.semidirect.order == 12
assert not pair.semidirect.is_abelian
# A4 check: no element of order 6/4
assert max(int(o) for o in pair.semidirect.orders) == 3
print("semidirect (V4,u3) = A4 ok")

# (V4,u) vs (V4,u^2) isomorphic
u3sq = u3 * u3
pair2 = DDeltaPair(2, v4, u3sq)
assert pair_isomorphic(pair, pair2) is not None
# (C3,1) vs (C3,inv) not isomorphic
c3 = parse_group_spec("C(3)")
ac3 = automorphism_group(c3)
inv = next(ac3.element(i) for i in range(2) if not ac3.element(i).is_identity())
p31 = DDeltaPair(3, c3, Perm.identity(3))
p3i = DDeltaPair(3, c3, inv)
assert p3i.semidirect.order == 6
assert pair_isomorphic(p31, p3i) is None
assert pair_isomorphic(p31, p31) is not None
print("pair_isomorphic ok")

# enumeration p=2 through |L|=4: exactly 5 classes
classes = enumerate_ddelta_pairs(2, 4)
desc = [(c.L.order, c.u_order) for c in classes]
assert len(classes) == 5, desc
assert sorted(desc) == [(1, 1), (2, 1), (4, 1), (4, 1), (4, 3)], desc
print("enumeration p=2 |L|<=4:", desc)

# out orders 1,1,2,6,1 (order: (1,1),(C2,1),(C4,1),(V4,1),(V4,u3)) -- depends on sort
outs = []
for c in classes:
    data = pair_aut_data(c)
    outs.append(data.out_order)
    # Inn <= aut_pair verified inside; |out| = |aut_pair|/|inn|
    assert data.out_order * data.inn.order == data.aut_pair.order
print("out orders:", outs)
assert sorted(outs) == [1, 1, 1, 2, 6], outs
# match specific pairs: C4 -> 2, V4 -> 6, (V4,u3) -> 1
by_desc = {(c.L.order, c.u_order, c.L.exponent): o for c, o in zip(classes, outs)}
assert by_desc[(4, 1, 4)] == 2      # C4
assert by_desc[(4, 1, 2)] == 6      # V4
assert by_desc[(4, 3, 2)] == 1      # (V4,u3)
assert by_desc[(1, 1, 1)] == 1
assert by_desc[(2, 1, 2)] == 1
print("out orders match")

# p=3: C3 pairs
classes3 = enumerate_ddelta_pairs(3, 3)
desc3 = [(c.L.order, c.u_order) for c in classes3]
assert desc3 == [(1, 1), (3, 1), (3, 2)], desc3
print("enumeration p=3 |L|<=3:", desc3)

# within-group mode: pairs arising in S4 at p=2
within = enumerate_ddelta_pairs(2, 8, within=parse_group_spec("S(4)"))
desc_w = [(c.L.order, c.u_order) for c in within]
# 2-subgroups of S4: 1, C2, C4, V4, D8 -> pairs: (1,1),(C2,1),(C4,1),(V4,1),(V4,u3),(D8,1)
assert sorted(desc_w) == [(1, 1), (2, 1), (4, 1), (4, 1), (4, 3), (8, 1)], desc_w
print("within S(4):", desc_w)

print("ALL PAIRS SMOKE OK")
