from fractions import Fraction

from weightlab.perm import Perm, PermGroup
from weightlab.chartable import character_table, schur_inner_product
from weightlab.cyclotomic import Cyclotomic
from weightlab.blocks import p_blocks, brauer_map, chain_block
from weightlab.session import Session, set_session

set_session(Session())

def cyclic(n):
    return PermGroup.from_generators([Perm.from_cycles(n, [tuple(range(n))])])

def sym(n):
    gens = [Perm.from_cycles(n, [tuple(range(n))]), Perm.from_cycles(n, [(0, 1)])]
    return PermGroup.from_generators(gens)

# --- character tables ---
for g, want in [
    (sym(3), [1, 1, 2]),
    (sym(4), [1, 1, 2, 3, 3]),
    (cyclic(6), [1] * 6),
]:
    t = character_table(g)
    assert t.degrees == sorted(want), (t.degrees, want)
    for i in range(t.num_irr):
        for j in range(t.num_irr):
            ip = schur_inner_product(t, t.values[i], t.values[j])
            assert ip == (1 if i == j else 0), (i, j, ip)
print("chartable S3/S4/C6 ok")

# Q8
a = Perm.from_cycles(8, [(0, 1, 2, 3), (4, 5, 6, 7)])
b = Perm.from_cycles(8, [(0, 4, 2, 6), (1, 7, 3, 5)])
q8 = PermGroup.from_generators([a, b])
assert q8.order == 8
tq = character_table(q8)
assert tq.degrees == [1, 1, 1, 1, 2], tq.degrees
print("chartable Q8 ok")

# S5 (bigger Dixon exercise): degrees 1,1,4,4,5,5,6
t5 = character_table(sym(5))
assert t5.degrees == [1, 1, 4, 4, 5, 5, 6], t5.degrees
print("chartable S5 ok")

# JSON round trip
import json
t3 = character_table(sym(3))
data = json.loads(json.dumps(t3.to_json()))
from weightlab.chartable import CharacterTable
t3b = CharacterTable.from_json(sym(3), data)
assert t3b.values == t3.values
print("chartable json ok")

# --- blocks ---
s3 = sym(3)
bp3 = p_blocks(s3, 3)
assert len(bp3.blocks) == 1
assert bp3.blocks[0].defect == 1
assert bp3.blocks[0].num_simples == 2
print("S3 p=3 blocks ok:", [(b.irr_indices, b.defect, b.num_simples) for b in bp3.blocks])

bp2 = p_blocks(s3, 2)
assert len(bp2.blocks) == 2
info = sorted((b.defect, b.num_simples, len(b.irr_indices)) for b in bp2.blocks)
assert info == [(0, 1, 1), (1, 1, 2)], info
print("S3 p=2 blocks ok:", info)

s4 = sym(4)
bp42 = p_blocks(s4, 2)
assert len(bp42.blocks) == 1 and bp42.blocks[0].num_simples == 2, [
    (b.irr_indices, b.defect, b.num_simples) for b in bp42.blocks
]
print("S4 p=2 blocks ok")

bp43 = p_blocks(s4, 3)
info = sorted((b.defect, b.num_simples, len(b.irr_indices)) for b in bp43.blocks)
# S4 p=3: principal block {1,sgn,std3,std3'} wait degrees 1,1,2,3,3; nu3(24)=1
# defect-0 blocks: chars of degree divisible by 3: the two degree-3 chars.
# principal-type blocks: {1,1',2} with defect 1, l=2.
assert info == [(0, 1, 1), (0, 1, 1), (1, 2, 3)], info
print("S4 p=3 blocks ok:", info)

c1 = PermGroup.from_generators([Perm.identity(1)])
bpc1 = p_blocks(c1, 2)
assert len(bpc1.blocks) == 1 and bpc1.blocks[0].defect == 0 and bpc1.blocks[0].num_simples == 1
print("C1 p=2 blocks ok")

# brauer map: S3, p=3, P = Sylow 3 = <(1 2 3)>, H = N_G(P) = S3
from weightlab.perm import p_subgroups
import numpy as np
lat = p_subgroups(s3, 3)
syl = max(lat.subgroups, key=len)
P = s3.subgroup(np.array(sorted(syl)))
b = bp3.blocks[0]
z = brauer_map(b.idempotent, P, s3.full_subgroup())
# Br_P(b0) for the principal block is the principal block idempotent of kN_G(P).
print("Brauer image support:", z.support(), "coeffs:", {k: v.coords for k, v in z.coeffs.items()})
assert not z.is_zero()

# chain_block needs chains module; test via a fake chain-like object
class FakeChain:
    def __init__(self, group, sub):
        self.group = group
        self._sub = sub
    def stabilizer(self):
        return self.group.full_subgroup()
    def top_subgroup(self):
        return self._sub

cb = chain_block(s3, b, FakeChain(s3, P))
assert cb.l_value == 2, cb.l_value
print("chain_block S3 p=3 trivial-chain ok, l =", cb.l_value)

# trivial chain: P = trivial subgroup -> Br_1(b) = b itself
cb0 = chain_block(s3, b, FakeChain(s3, s3.trivial_subgroup()))
assert cb0.central == b.idempotent
assert cb0.l_value == 2
print("chain_block trivial-P ok")
print("ALL SMOKE OK")
