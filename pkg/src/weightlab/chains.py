"""Strictly ascending chains of p-subgroups, their G-orbits, the alternating
sum over chain orbits, and the sign-reversing chain involution.

Orbits are enumerated by extension: a representative chain sigma with
stabilizer S grows by one S-orbit representative Q of p-subgroups strictly
containing its top member. Two extensions of the same representative are
G-conjugate iff the added tops are S-conjugate, so the enumeration is
complete and irredundant by construction; tests cross-check raw counts
against direct enumeration.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Iterable, Optional

import numpy as np

from . import _kernels as K
from .blocks import Block, chain_block
from .errors import BudgetExceeded, PNotInStabilizer, PTrivial
from .perm import PermGroup, Subgroup

if TYPE_CHECKING:
    from .session import Session

DEFAULT_CHAIN_BUDGET = 1_000_000


class Chain:
    """1 = P_0 < P_1 < ... < P_n of p-subgroups; length is n."""

    __slots__ = ("group", "p", "members")

    def __init__(self, group: PermGroup, p: int, members: tuple[frozenset[int], ...]):
        self.group = group
        self.p = p
        self.members = members

    @staticmethod
    def base(group: PermGroup, p: int) -> "Chain":
        return Chain(group, p, (frozenset([0]),))

    @property
    def length(self) -> int:
        return len(self.members) - 1

    def subgroup(self, i: int) -> Subgroup:
        return Subgroup(self.group, self.members[i], check=False)

    def top_subgroup(self) -> Subgroup:
        return self.subgroup(len(self.members) - 1)

    def stabilizer(self, session: Optional["Session"] = None) -> Subgroup:
        """Pointwise stabilizer: the intersection of all member normalizers."""
        from .session import get_session

        session = session or get_session()
        indices = frozenset(range(self.group.order))
        for member in self.members[1:]:
            indices &= session.normalizer_indices(self.group, member)
        return Subgroup(self.group, indices, check=False)

    def conjugate(self, g: int) -> "Chain":
        table, inv = self.group.table, self.group.inv
        members = tuple(
            frozenset(int(i) for i in K.conj_subset(table, inv, g, np.fromiter(sorted(m), dtype=np.int64)))
            for m in self.members
        )
        return Chain(self.group, self.p, members)

    def verify(self) -> None:
        assert self.members[0] == frozenset([0])
        for a, b in zip(self.members, self.members[1:]):
            assert a < b, "chain not strictly ascending"
        for m in self.members[1:]:
            for i in m:
                o = int(self.group.orders[i])
                while o % self.p == 0:
                    o //= self.p
                assert o == 1, "chain member is not a p-subgroup"

    def shape(self) -> tuple[int, ...]:
        return tuple(len(m) for m in self.members)

    def describe(self) -> str:
        return " < ".join(str(len(m)) for m in self.members)

    def sort_key(self) -> tuple:
        return (self.length, tuple(tuple(sorted(m)) for m in self.members))

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Chain)
            and self.group.canonical_key == other.group.canonical_key
            and self.members == other.members
        )

    def __hash__(self) -> int:
        return hash((self.group.canonical_key, self.members))

    def __repr__(self) -> str:
        return f"Chain({self.describe()})"


@dataclass
class ChainOrbit:
    chain: Chain
    orbit_size: int
    stabilizer: Subgroup

    def verify(self) -> None:
        self.chain.verify()
        assert self.orbit_size * len(self.stabilizer.indices) == self.chain.group.order


def _subgroup_orbit(group: PermGroup, gen_idx: Iterable[int], seed: frozenset[int]) -> set[frozenset[int]]:
    """Orbit of a subgroup (as an index set) under conjugation by given elements."""
    table, inv = group.table, group.inv
    seen = {seed}
    queue = [seed]
    gens = list(gen_idx)
    while queue:
        cur = queue.pop()
        arr = np.fromiter(sorted(cur), dtype=np.int64)
        for g in gens:
            img = frozenset(int(i) for i in K.conj_subset(table, inv, int(g), arr))
            if img not in seen:
                seen.add(img)
                queue.append(img)
    return seen


def chain_orbits(
    group: PermGroup,
    p: int,
    budget: int = DEFAULT_CHAIN_BUDGET,
    session: Optional["Session"] = None,
) -> list[ChainOrbit]:
    """One representative per G-orbit of chains, sorted by length then key."""
    from .session import get_session

    session = session or get_session()
    group = session.intern(group)
    lattice = session.p_subgroup_lattice(group, p)
    all_subs = lattice.subgroups

    base = ChainOrbit(Chain.base(group, p), 1, group.full_subgroup())
    orbits = [base]
    total_raw = 1
    frontier = [base]
    while frontier:
        next_frontier = []
        for orb in frontier:
            top = orb.chain.members[-1]
            stab = orb.stabilizer
            candidates = [s for s in all_subs if len(s) > len(top) and s > top]
            if not candidates:
                continue
            stab_gens = [int(i) for i in stab.gen_indices]
            remaining = set(candidates)
            for seed in session.shuffled(sorted(candidates, key=sorted)):
                if seed not in remaining:
                    continue
                seen = _subgroup_orbit(group, stab_gens, seed)
                remaining -= seen
                new_members = orb.chain.members + (seed,)
                new_indices = stab.indices & session.normalizer_indices(group, seed)
                new_stab = Subgroup(group, new_indices, check=False)
                new_orbit = ChainOrbit(
                    Chain(group, p, new_members),
                    group.order // len(new_indices),
                    new_stab,
                )
                total_raw += new_orbit.orbit_size
                if total_raw > budget:
                    raise BudgetExceeded(
                        f"more than {budget} chains for |G|={group.order}, p={p}"
                    )
                next_frontier.append(new_orbit)
        orbits.extend(next_frontier)
        frontier = next_frontier
    orbits.sort(key=lambda o: o.chain.sort_key())
    return orbits


def count_chains(group: PermGroup, p: int, budget: int = DEFAULT_CHAIN_BUDGET,
                 session: Optional["Session"] = None) -> int:
    """|S_p(G)|: the raw number of chains, including the trivial chain."""
    return sum(o.orbit_size for o in chain_orbits(group, p, budget, session))


@dataclass
class LedgerRow:
    chain: Chain
    length: int
    stabilizer_order: int
    constituents: tuple[int, ...]
    l_value: int

    def to_json(self) -> dict:
        return {
            "chain": self.chain.describe(),
            "members": [sorted(m) for m in self.chain.members],
            "length": self.length,
            "stabilizer_order": self.stabilizer_order,
            "constituents": list(self.constituents),
            "l": self.l_value,
        }


@dataclass
class AwcReport:
    group_key: str
    group_spec: str
    p: int
    block_index: int
    defect: int
    alternating_sum: int
    ledger: list[LedgerRow] = field(default_factory=list)

    @property
    def expected(self) -> int:
        return 1 if self.defect == 0 else 0

    @property
    def passed(self) -> bool:
        return self.alternating_sum == self.expected

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "FAIL"

    def to_json(self) -> dict:
        return {
            "group": self.group_spec or self.group_key,
            "group_key": self.group_key,
            "p": self.p,
            "block": self.block_index,
            "defect": self.defect,
            "sum": self.alternating_sum,
            "expected": self.expected,
            "verdict": self.verdict,
            "ledger": [row.to_json() for row in self.ledger],
        }


def awc_sum(
    group: PermGroup,
    p: int,
    block: Block,
    budget: int = DEFAULT_CHAIN_BUDGET,
    session: Optional["Session"] = None,
    group_spec: str = "",
) -> AwcReport:
    """The alternating sum of simple counts over chain orbits, with its ledger."""
    from .session import get_session

    session = session or get_session()
    group = session.intern(group)
    orbits = chain_orbits(group, p, budget, session)
    total = 0
    rows = []
    for orb in orbits:
        data = chain_block(group, block, orb.chain, session=session)
        l = data.l_value
        sign = -1 if orb.chain.length % 2 else 1
        total += sign * l
        rows.append(
            LedgerRow(
                chain=orb.chain,
                length=orb.chain.length,
                stabilizer_order=len(orb.stabilizer.indices),
                constituents=tuple(b.index for b in data.constituents),
                l_value=l,
            )
        )
    return AwcReport(
        group_key=group.canonical_key,
        group_spec=group_spec,
        p=p,
        block_index=block.index,
        defect=block.defect,
        alternating_sum=total,
        ledger=rows,
    )


def _product_set(group: PermGroup, a: frozenset[int], b: frozenset[int]) -> frozenset[int]:
    """The set {xy : x in a, y in b}; a subgroup when one factor normalizes the other."""
    table = group.table
    block = table[np.ix_(np.fromiter(sorted(a), dtype=np.int64), np.fromiter(sorted(b), dtype=np.int64))]
    return frozenset(int(i) for i in np.unique(block))


def kr_involution(chain: Chain, p_sub: Subgroup, session: Optional["Session"] = None) -> Chain:
    """The pairing sigma -> sigma' for a fixed 1 != P <= G_sigma: append/insert
    P*P_i at the largest i with P not contained in P_i, or delete P_{i+1} when
    they coincide. Applying it twice returns the original chain."""
    group = chain.group
    assert p_sub.parent.canonical_key == group.canonical_key
    pset = p_sub.indices
    if pset == frozenset([0]):
        raise PTrivial("the chain involution needs a nontrivial P")
    stab = chain.stabilizer(session)
    if not pset <= stab.indices:
        raise PNotInStabilizer("P must lie in the chain stabilizer")

    members = chain.members
    i = max(idx for idx, m in enumerate(members) if not pset <= m)
    prod = _product_set(group, pset, members[i])
    n = chain.length
    if i == n:
        new_members = members + (prod,)
    elif prod == members[i + 1]:
        new_members = members[: i + 1] + members[i + 2 :]
    else:
        new_members = members[: i + 1] + (prod,) + members[i + 1 :]
    return Chain(group, chain.p, new_members)
