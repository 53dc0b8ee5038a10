import numpy as np

from weightlab.dsl import parse_group_spec
from weightlab.chains import Chain, chain_orbits, count_chains, awc_sum, kr_involution
from weightlab.blocks import p_blocks
from weightlab.session import Session, set_session
from weightlab.perm import Subgroup

set_session(Session())

def brute_chains(group, p):
    """Direct enumeration of all strictly ascending p-subgroup chains."""
    from weightlab.perm import p_subgroups
    subs = p_subgroups(group, p).subgroups
    chains = [(frozenset([0]),)]
    frontier = [(frozenset([0]),)]
    while frontier:
        nxt = []
        for ch in frontier:
            for s in subs:
                if len(s) > len(ch[-1]) and s > ch[-1]:
                    nxt.append(ch + (s,))
        chains.extend(nxt)
        frontier = nxt
    return chains

# --- orbit counts vs brute force ---
for spec, p in [("S(3)", 3), ("S(3)", 2), ("C(1)", 2), ("S(4)", 2), ("S(4)", 3),
                ("Q(8)", 2), ("D(12)", 2), ("D(12)", 3), ("C(6)", 2), ("A(4)", 2)]:
    g = parse_group_spec(spec)
    orbits = chain_orbits(g, p)
    raw = count_chains(g, p)
    brute = brute_chains(g, p)
    assert raw == len(brute), (spec, p, raw, len(brute))
    for o in orbits:
        o.verify()
    print(f"{spec} p={p}: {len(orbits)} orbits, {raw} chains (brute {len(brute)})")

s3 = parse_group_spec("S(3)")
assert len(chain_orbits(s3, 3)) == 2
assert len(chain_orbits(s3, 2)) == 2

# --- awc sums ---
def run(spec, p):
    g = parse_group_spec(spec)
    bp = g_session_blocks = p_blocks(g, p)
    out = []
    for b in bp.blocks:
        rep = awc_sum(g, p, b, group_spec=spec)
        out.append((b.index, b.defect, rep.alternating_sum, rep.verdict))
        assert rep.passed, (spec, p, b.index, rep.to_json())
    return out

print(run("S(3)", 3))   # d=1 block: 2-2=0
print(run("S(3)", 2))   # principal d=1: 0; defect-0: 1
print(run("C(2)", 2))   # 1-1=0
print(run("C(1)", 2))   # sum=1, d=0
print(run("S(4)", 2))
print(run("S(4)", 3))
print(run("A(4)", 2))
print(run("Q(8)", 2))
print(run("D(12)", 2))
print(run("D(12)", 3))

def g_normalizer(g, s):
    from weightlab.session import get_session
    return get_session().normalizer_indices(g, s)

# --- KR involution on S(4), p=2 ---
for spec, p in [("S(4)", 2), ("S(3)", 3), ("D(16)", 2), ("A(4)", 2)]:
    g = parse_group_spec(spec)
    orbits = chain_orbits(g, p)
    checked = 0
    for orb in orbits:
        stab = orb.stabilizer
        # all nontrivial p-subgroups P <= G_sigma
        from weightlab.perm import p_subgroups
        for s in p_subgroups(g, p).subgroups:
            if len(s) == 1 or not (s <= stab.indices):
                continue
            P = Subgroup(g, s, check=False)
            sig2 = kr_involution(orb.chain, P)
            sig2.verify()
            assert abs(sig2.length - orb.chain.length) == 1
            back = kr_involution(sig2, P)
            assert back == orb.chain, (spec, p, orb.chain.members, s)
            # P <= stabilizer of sigma'
            assert s <= sig2.stabilizer().indices
            # normalizer-in-stabilizer invariance
            ns1 = orb.stabilizer.indices & g_normalizer(g, s)
            ns2 = sig2.stabilizer().indices & g_normalizer(g, s)
            assert ns1 == ns2
            checked += 1
    print(f"kr involution {spec} p={p}: {checked} (sigma,P) pairs ok")

print("ALL CHAIN SMOKE OK")
