"""Grothendieck-group coordinates of the alternating chain sum.

For a block b of kG and a pair (L,u), the coordinate machinery works with
local points: for a p-subgroup P of a chain stabilizer H, the points of
kC_H(P)·Br_P(b_sigma) are materialized as that algebra's blocks, which is
faithful exactly when every such block has a single simple module; anything
else raises UnsupportedPointStructure rather than guessing.

Pairs (P_gamma, pi) carry a left H-action (conjugation) and a right
Aut(L,u)-action (precomposition on pi). Multiplicities are sums of fixed
subspace dimensions over double cosets; the involution check pairs chains
carrying identical point data with opposite signs.

All signatures are position-based: an isomorphism pi: L -> P is stored as a
map from L's element indices to positions in the sorted element list of P,
which makes the data independent of the ambient group chosen for H.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import TYPE_CHECKING, Optional

import numpy as np

from .blocks import Block, CentralElement, brauer_map
from .chains import DEFAULT_CHAIN_BUDGET, Chain, ChainOrbit, awc_sum, chain_orbits, kr_involution
from .errors import (
    DecompositionFailure,
    InvolutionFailure,
    PTrivial,
    UnsupportedPointStructure,
)
from .pairs import DDeltaPair, PairAutData, automorphism_group, pair_aut_data
from .perm import PermGroup, Subgroup, centralizer, find_isomorphism, normalizer

if TYPE_CHECKING:
    from .session import Session


# ---------------------------------------------------------------------------
# labels and sparse K0 vectors


@dataclass(frozen=True)
class K0Label:
    pair_key: tuple
    v_index: int
    l_order: int
    u_order: int

    def to_json(self) -> dict:
        return {
            "L_order": self.l_order,
            "L_key": self.pair_key[1],
            "u_order": self.u_order,
            "V_index": self.v_index,
        }


class K0Element:
    """Finitely supported integer vector over K0 labels."""

    def __init__(self, coords: Optional[dict[K0Label, int]] = None):
        self.coords = {k: v for k, v in (coords or {}).items() if v != 0}

    def __getitem__(self, label: K0Label) -> int:
        return self.coords.get(label, 0)

    def __add__(self, other: "K0Element") -> "K0Element":
        out = dict(self.coords)
        for k, v in other.coords.items():
            out[k] = out.get(k, 0) + v
        return K0Element(out)

    def scale(self, c: int) -> "K0Element":
        return K0Element({k: c * v for k, v in self.coords.items()})

    def __eq__(self, other: object) -> bool:
        return isinstance(other, K0Element) and self.coords == other.coords

    def restrict(self, keep) -> "K0Element":
        return K0Element({k: v for k, v in self.coords.items() if keep(k)})

    def to_json(self) -> list:
        items = sorted(self.coords.items(), key=lambda kv: (kv[0].pair_key, kv[0].v_index))
        return [{**k.to_json(), "value": v} for k, v in items]

    def __repr__(self) -> str:
        return f"K0Element({self.coords!r})"


def pair_labels(pair: DDeltaPair, session: Optional["Session"] = None) -> list[K0Label]:
    """One label per irreducible character of Out(L,u)."""
    data = _aut_data(pair, session)
    return [
        K0Label(pair_key=pair.key, v_index=v, l_order=pair.L.order, u_order=pair.u_order)
        for v in range(data.out_table.num_irr)
    ]


def _aut_data(pair: DDeltaPair, session: Optional["Session"]) -> PairAutData:
    from .session import get_session

    session = session or get_session()
    return session.memo(("pair_aut", pair.key), lambda: pair_aut_data(pair, session=session))


def _aut_of_l(L: PermGroup, session: "Session") -> PermGroup:
    return session.memo(("aut_group", L.canonical_key), lambda: automorphism_group(L))


def _iso_to(L: PermGroup, target: PermGroup, session: "Session"):
    key = ("iso", L.canonical_key, target.canonical_key)
    return session.memo(key, lambda: find_isomorphism(L, target))


# ---------------------------------------------------------------------------
# local points


class LocalPointSet:
    """Points of kC_H(P)·Br_P(c) with their N_H(P)-action.

    Supported case only: each block of that algebra must have exactly one
    simple module, making points literally the blocks. Conjugation data is
    stored against positions in the sorted element list of P so that the
    same P produces comparable data inside different ambient stabilizers.
    """

    def __init__(self, H: PermGroup, p: int, c: CentralElement, P: Subgroup,
                 session: "Session"):
        self.H = H
        self.p = p
        self.c = c
        self.P = P
        self.sorted_p = [int(i) for i in sorted(P.indices)]
        self.pos_of = {e: k for k, e in enumerate(self.sorted_p)}

        cent = centralizer(H, P)
        self.cent = cent
        self.cent_group = session.group_of(cent)
        self.br = brauer_map(c, P, cent, session=session)
        norm = normalizer(H, P)
        self.n_sorted = [int(i) for i in sorted(norm.indices)]

        redmap = c.algebra.redmap
        if self.br.is_zero():
            self.partition = None
            self.points: tuple[Block, ...] = ()
        else:
            self.partition = session.block_partition(self.cent_group, p, redmap=redmap)
            constituents = []
            for blk in self.partition.blocks:
                if not (blk.idempotent * self.br).is_zero():
                    constituents.append(blk)
            total = self.br.algebra.zero()
            for blk in constituents:
                total = total + blk.idempotent
            if total != self.br:
                raise DecompositionFailure("Brauer image is not a sum of block idempotents")
            for blk in constituents:
                if blk.num_simples != 1:
                    raise UnsupportedPointStructure(
                        "a centralizer block has more than one simple module",
                        group_key=self.cent_group.canonical_key,
                        detail=f"l={blk.num_simples} at p={p}",
                    )
            self.points = tuple(constituents)

        self._point_by_coeffs = {
            self._coeff_key(blk.idempotent): i for i, blk in enumerate(self.points)
        }
        self._cent_sorted = [int(i) for i in sorted(cent.indices)]
        self._cent_pos = {e: k for k, e in enumerate(self._cent_sorted)}
        self._conj_cache: dict[int, tuple[int, ...]] = {}
        self._build_stabilizers()

    @staticmethod
    def _coeff_key(e: CentralElement) -> frozenset:
        return frozenset((j, v.coords) for j, v in e.coeffs.items())

    def conj_signature(self, h: int) -> tuple[int, ...]:
        """Conjugation by h restricted to P, as a permutation of positions."""
        table, inv = self.H.table, self.H.inv
        return tuple(
            self.pos_of[int(table[table[h, e], inv[h]])] for e in self.sorted_p
        )

    def point_image(self, gamma: int, h: int) -> int:
        """Index of h·gamma·h^{-1} among the points, for h in N_H(P)."""
        perm = self._point_perm(h)
        return perm[gamma]

    def _point_perm(self, h: int) -> tuple[int, ...]:
        cached = self._conj_cache.get(h)
        if cached is not None:
            return cached
        table, inv = self.H.table, self.H.inv
        classes = self.cent_group.classes
        perm = []
        for blk in self.points:
            e = blk.idempotent
            new_coeffs = {}
            for j in range(classes.num_classes):
                rep_own = int(classes.rep_indices[j])
                y = self._cent_sorted[rep_own]
                y_conj = int(table[table[inv[h], y], h])
                j_src = int(classes.class_of[self._cent_pos[y_conj]])
                val = e.coeffs.get(j_src)
                if val is not None:
                    new_coeffs[j] = val
            target = self._point_by_coeffs.get(
                frozenset((j, v.coords) for j, v in new_coeffs.items())
            )
            assert target is not None, "conjugation does not permute the points"
            perm.append(target)
        out = tuple(perm)
        self._conj_cache[h] = out
        return out

    def _build_stabilizers(self) -> None:
        self.point_stabs: list[list[int]] = [[] for _ in self.points]
        for h in self.n_sorted:
            perm = self._point_perm(h) if self.points else ()
            for gamma in range(len(self.points)):
                if perm[gamma] == gamma:
                    self.point_stabs[gamma].append(h)
        # for each point, which conjugation signatures arise in its stabilizer,
        # and a smallest witness element for each
        self.sig_witness: list[dict[tuple[int, ...], int]] = []
        for gamma in range(len(self.points)):
            table: dict[tuple[int, ...], int] = {}
            for h in self.point_stabs[gamma]:
                sig = self.conj_signature(h)
                if sig not in table:
                    table[sig] = h
            self.sig_witness.append(table)

    def membership(self, gamma: int, pi_pos: tuple[int, ...], u_map) -> bool:
        """Is pi·u·pi^{-1} induced by some element of N_H(P_gamma)?"""
        return self.twist_signature(pi_pos, u_map) in self.sig_witness[gamma]

    def witness(self, gamma: int, pi_pos: tuple[int, ...], phi_map) -> Optional[int]:
        return self.sig_witness[gamma].get(self.twist_signature(pi_pos, phi_map))

    @staticmethod
    def twist_signature(pi_pos: tuple[int, ...], auto_map) -> tuple[int, ...]:
        """pi·alpha·pi^{-1} as a permutation of positions of P."""
        inv_pos = {pos: x for x, pos in enumerate(pi_pos)}
        return tuple(pi_pos[auto_map(inv_pos[k])] for k in range(len(pi_pos)))


def local_points(
    H: PermGroup,
    p: int,
    c: CentralElement,
    P: Subgroup,
    session: Optional["Session"] = None,
) -> LocalPointSet:
    """Memoized local point data for (H, Br-source c, P)."""
    from .session import get_session

    session = session or get_session()
    key = ("local_points", H.canonical_key, p, frozenset(P.indices), c)
    return session.memo(key, lambda: LocalPointSet(H, p, c, P, session))


# ---------------------------------------------------------------------------
# the pair biset of one stabilizer, with the left-orbit decomposition


@dataclass
class ClassFibre:
    """All pairs (gamma, pi) over one H-class representative P0 = L."""

    rep: Subgroup
    lps: LocalPointSet
    pairs: list[tuple[int, tuple[int, ...]]]
    pair_index: dict[tuple[int, tuple[int, ...]], int]
    orbit_of: list[int]
    orbit_offset: int = 0

    @property
    def num_orbits(self) -> int:
        return max(self.orbit_of) + 1 if self.orbit_of else 0


class LPairOrbitData:
    """Left H-orbits of the pair biset, with the right Aut(L,u)-action."""

    def __init__(self, H: PermGroup, c: CentralElement, pair: DDeltaPair, session: "Session"):
        self.H = H
        self.c = c
        self.pair = pair
        self.aut_data = _aut_data(pair, session)
        self.fibres: list[ClassFibre] = []

        p = pair.p
        u = pair.u
        lattice = session.p_subgroup_lattice(H, p)
        aut_l = _aut_of_l(pair.L, session)
        for rep in lattice.class_reps:
            if rep.order != pair.L.order:
                continue
            rep_group = session.group_of(rep)
            iso0 = _iso_to(pair.L, rep_group, session)
            if iso0 is None:
                continue
            lps = local_points(H, p, c, rep, session=session)
            if not lps.points:
                continue
            pairs = []
            for alpha_idx in range(aut_l.order):
                alpha = aut_l.element(alpha_idx)
                pi_pos = tuple(int(iso0[alpha(x)]) for x in range(pair.L.order))
                for gamma in range(len(lps.points)):
                    if lps.membership(gamma, pi_pos, u):
                        pairs.append((gamma, pi_pos))
            pairs = sorted(set(pairs))
            if not pairs:
                continue
            fibre = ClassFibre(
                rep=rep,
                lps=lps,
                pairs=pairs,
                pair_index={pr: i for i, pr in enumerate(pairs)},
                orbit_of=self._left_orbits(H, rep, lps, pairs, session),
            )
            self.fibres.append(fibre)

        offset = 0
        for fibre in self.fibres:
            fibre.orbit_offset = offset
            offset += fibre.num_orbits
        self.num_orbits = offset
        self._right_maps: dict[int, tuple[int, ...]] = {}

    @staticmethod
    def _left_orbits(H, rep, lps, pairs, session) -> list[int]:
        n_gens = [int(g) for g in Subgroup(H, session.normalizer_indices(H, rep.indices), check=False).gen_indices]
        index = {pr: i for i, pr in enumerate(pairs)}
        orbit_of = [-1] * len(pairs)
        table, inv = H.table, H.inv
        next_orbit = 0
        for start in range(len(pairs)):
            if orbit_of[start] >= 0:
                continue
            orbit_of[start] = next_orbit
            queue = [pairs[start]]
            while queue:
                gamma, pi_pos = queue.pop()
                for n in n_gens:
                    new_gamma = lps.point_image(gamma, n)
                    new_pi = tuple(
                        lps.pos_of[int(table[table[n, lps.sorted_p[pos]], inv[n]])]
                        for pos in pi_pos
                    )
                    moved = (new_gamma, new_pi)
                    j = index.get(moved)
                    assert j is not None, "left action leaves the pair set"
                    if orbit_of[j] < 0:
                        orbit_of[j] = next_orbit
                        queue.append(moved)
            next_orbit += 1
        return orbit_of

    # --- right action ---

    def right_map(self, a_own: int) -> tuple[int, ...]:
        """The permutation of left-orbit ids induced by a pair automorphism."""
        cached = self._right_maps.get(a_own)
        if cached is not None:
            return cached
        restr = self.aut_data.restriction(a_own)
        out = [-1] * self.num_orbits
        for fibre in self.fibres:
            for (gamma, pi_pos), idx in fibre.pair_index.items():
                new_pi = tuple(pi_pos[int(restr[x])] for x in range(len(pi_pos)))
                j = fibre.pair_index.get((gamma, new_pi))
                assert j is not None, "right action leaves the pair set"
                src = fibre.orbit_offset + fibre.orbit_of[idx]
                dst = fibre.orbit_offset + fibre.orbit_of[j]
                if out[src] < 0:
                    out[src] = dst
                else:
                    assert out[src] == dst, "right action not constant on left orbits"
        result = tuple(out)
        self._right_maps[a_own] = result
        return result

    def fixed_orbits(self, a_own: int) -> int:
        m = self.right_map(a_own)
        return sum(1 for o in range(self.num_orbits) if m[o] == o)

    def multiplicity_of(self, v_index: int) -> int:
        """Sum over double cosets of the fixed-space dimension of V."""
        A = self.aut_data.aut_pair.as_group()
        data = self.aut_data
        chi = data.out_table.values[v_index]
        out_class = data.out.classes.class_of
        seen = [False] * self.num_orbits
        total = Fraction(0)
        for o in range(self.num_orbits):
            if seen[o]:
                continue
            stab = []
            orbit = set()
            for a in range(A.order):
                img = self.right_map(a)[o]
                orbit.add(img)
                if img == o:
                    stab.append(a)
            for member in orbit:
                seen[member] = True
            acc = None
            for a in stab:
                val = chi[int(out_class[data.to_out[a]])]
                acc = val if acc is None else acc + val
            dim = acc.as_rational() / len(stab)
            assert dim.denominator == 1 and dim >= 0, "fixed-space dimension not a nonnegative integer"
            total += dim
        assert total.denominator == 1
        return int(total)


def l_pair_orbits(
    H: PermGroup,
    c: CentralElement,
    pair: DDeltaPair,
    session: Optional["Session"] = None,
) -> LPairOrbitData:
    from .session import get_session

    session = session or get_session()
    key = ("l_pair_orbits", H.canonical_key, c, pair.key)
    return session.memo(key, lambda: LPairOrbitData(H, c, pair, session))


# ---------------------------------------------------------------------------
# chain-level drivers


def s111_coordinate(G: PermGroup, p: int, block: Block,
                    session: Optional["Session"] = None) -> int:
    """The coordinate at the trivial pair: the number of simple modules."""
    return block.num_simples


def _chain_stab_and_central(
    G: PermGroup, block: Block, chain: Chain, session: "Session"
) -> tuple[PermGroup, CentralElement, Subgroup]:
    stab = chain.stabilizer(session)
    H = session.group_of(stab)
    key = ("chain_central", G.canonical_key, block.p, block.index,
           chain.members, frozenset(stab.indices))

    def compute() -> CentralElement:
        return brauer_map(block.idempotent, chain.top_subgroup(), stab, session=session)

    return H, session.memo(key, compute), stab


def multiplicity(
    G: PermGroup,
    p: int,
    block: Block,
    pair: DDeltaPair,
    v_index: int,
    session: Optional["Session"] = None,
) -> int:
    """The (L,u,V)-coordinate of the group-block pair itself."""
    from .session import get_session

    session = session or get_session()
    G = session.intern(G)
    if pair.L.order == 1:
        return block.num_simples if v_index == 0 else 0
    data = l_pair_orbits(G, block.idempotent, pair, session=session)
    return data.multiplicity_of(v_index)


def _chain_multiplicity(
    G: PermGroup,
    block: Block,
    pair: DDeltaPair,
    orbit: ChainOrbit,
    session: "Session",
) -> LPairOrbitData:
    H, c, _ = _chain_stab_and_central(G, block, orbit.chain, session)
    return l_pair_orbits(H, c, pair, session=session)


@dataclass
class SigmaResult:
    """Coordinates of the alternating chain sum at the requested labels."""

    group_key: str
    p: int
    block_index: int
    element: K0Element
    labels: list[K0Label]
    unsupported: list[tuple] = field(default_factory=list)

    def coordinate(self, label: K0Label) -> int:
        return self.element[label]

    def to_json(self) -> dict:
        return {
            "group_key": self.group_key,
            "p": self.p,
            "block": self.block_index,
            "labels": [lab.to_json() for lab in self.labels],
            "coordinates": [self.element[lab] for lab in self.labels],
            "unsupported": [list(k) for k in self.unsupported],
        }


def sigma_element(
    G: PermGroup,
    p: int,
    block: Block,
    pairs: list[DDeltaPair],
    budget: int = DEFAULT_CHAIN_BUDGET,
    session: Optional["Session"] = None,
) -> SigmaResult:
    """Alternating sum of chain-level coordinates over the given pair classes.

    The coordinate at (1,1,triv) is the alternating sum of simple counts; at
    any other label it sums signed multiplicities over chain orbits. A pair
    that hits an unsupported point structure anywhere is reported in
    `unsupported` and omitted from the element.
    """
    from .session import get_session

    session = session or get_session()
    G = session.intern(G)
    orbits = chain_orbits(G, p, budget, session)
    coords: dict[K0Label, int] = {}
    labels: list[K0Label] = []
    unsupported: list[tuple] = []
    for pair in pairs:
        plabels = pair_labels(pair, session)
        labels.extend(plabels)
        if pair.L.order == 1:
            report = awc_sum(G, p, block, budget=budget, session=session)
            for lab in plabels:
                coords[lab] = report.alternating_sum if lab.v_index == 0 else 0
            continue
        try:
            per_orbit = [
                (_chain_multiplicity(G, block, pair, orb, session), orb)
                for orb in orbits
            ]
        except UnsupportedPointStructure:
            unsupported.append(pair.key)
            continue
        for lab in plabels:
            total = 0
            for data, orb in per_orbit:
                sign = -1 if orb.chain.length % 2 else 1
                total += sign * data.multiplicity_of(lab.v_index)
            coords[lab] = total
    return SigmaResult(
        group_key=G.canonical_key,
        p=p,
        block_index=block.index,
        element=K0Element(coords),
        labels=labels,
        unsupported=unsupported,
    )


def w_fixed_points(
    G: PermGroup,
    p: int,
    block: Block,
    pair: DDeltaPair,
    phi_own: int,
    budget: int = DEFAULT_CHAIN_BUDGET,
    session: Optional["Session"] = None,
) -> int:
    """Signed count of left orbits fixed by one pair automorphism.

    With L = 1 this is the plain alternating sum; for L != 1 the result is
    expected to vanish identically.
    """
    from .session import get_session

    session = session or get_session()
    G = session.intern(G)
    if pair.L.order == 1:
        return awc_sum(G, p, block, budget=budget, session=session).alternating_sum
    total = 0
    for orb in chain_orbits(G, p, budget, session):
        data = _chain_multiplicity(G, block, pair, orb, session)
        sign = -1 if orb.chain.length % 2 else 1
        total += sign * data.fixed_orbits(phi_own)
    return total


# ---------------------------------------------------------------------------
# the quintuple involution


@dataclass
class QuintupleRec:
    chain: Chain
    p_members: frozenset
    gamma: int
    pi_pos: tuple[int, ...]
    witness: int


@dataclass
class QuintupleReport:
    pair_key: tuple
    phi_own: int
    total: int
    signed_total: int
    orbits_checked: int
    members_checked: int

    @property
    def passed(self) -> bool:
        return self.signed_total == 0

    def to_json(self) -> dict:
        return {
            "pair": list(self.pair_key),
            "phi": self.phi_own,
            "total": self.total,
            "signed_total": self.signed_total,
            "orbits_checked": self.orbits_checked,
            "members_checked": self.members_checked,
            "verdict": "pass" if self.passed else "FAIL",
        }


def _fibre_records(
    G: PermGroup,
    block: Block,
    chain: Chain,
    pair: DDeltaPair,
    phi_map,
    session: "Session",
) -> tuple[list[QuintupleRec], Subgroup, PermGroup, CentralElement]:
    """All (P, gamma, pi, g) over one chain satisfying membership and the
    phi-witness condition, in the stabilizer's own indices."""
    H, c, stab = _chain_stab_and_central(G, block, chain, session)
    lattice = session.p_subgroup_lattice(H, pair.p)
    recs: list[QuintupleRec] = []
    aut_l = _aut_of_l(pair.L, session)
    u = pair.u
    for s in lattice.subgroups:
        if len(s) != pair.L.order:
            continue
        sub = Subgroup(H, s, check=False)
        sub_group = session.group_of(sub)
        iso0 = _iso_to(pair.L, sub_group, session)
        if iso0 is None:
            continue
        lps = local_points(H, pair.p, c, sub, session=session)
        if not lps.points:
            continue
        for alpha_idx in range(aut_l.order):
            alpha = aut_l.element(alpha_idx)
            pi_pos = tuple(int(iso0[alpha(x)]) for x in range(pair.L.order))
            for gamma in range(len(lps.points)):
                if not lps.membership(gamma, pi_pos, u):
                    continue
                g = lps.witness(gamma, pi_pos, phi_map)
                if g is None:
                    continue
                recs.append(QuintupleRec(chain, s, gamma, pi_pos, g))
    return recs, stab, H, c


def quintuple_involution_check(
    G: PermGroup,
    p: int,
    block: Block,
    pair: DDeltaPair,
    phi_own: int = 0,
    budget: int = DEFAULT_CHAIN_BUDGET,
    session: Optional["Session"] = None,
) -> QuintupleReport:
    """Materialize the signed quintuple set and drive each member through the
    chain involution, asserting that everything transports and cancels."""
    from .session import get_session

    session = session or get_session()
    G = session.intern(G)
    if pair.L.order == 1:
        raise PTrivial("the quintuple involution needs a nontrivial L")
    aut_data = _aut_data(pair, session)
    restr = aut_data.restriction(phi_own)

    def phi_map(x: int) -> int:
        return int(restr[x])

    total = 0
    signed = 0
    members_checked = 0
    orbits = chain_orbits(G, p, budget, session)
    for orb in orbits:
        recs, stab, H, c = _fibre_records(G, block, orb.chain, pair, phi_map, session)
        weight = orb.orbit_size
        sign = -1 if orb.chain.length % 2 else 1
        total += weight * len(recs)
        signed += sign * weight * len(recs)
        for rec in recs:
            _verify_involution(G, block, orb.chain, stab, H, c, rec, pair, phi_map, session)
            members_checked += 1
    if signed != 0:
        raise InvolutionFailure(f"signed quintuple total is {signed}, not 0")
    return QuintupleReport(
        pair_key=pair.key,
        phi_own=phi_own,
        total=total,
        signed_total=signed,
        orbits_checked=len(orbits),
        members_checked=members_checked,
    )


def _verify_involution(
    G: PermGroup,
    block: Block,
    chain: Chain,
    stab: Subgroup,
    H: PermGroup,
    c: CentralElement,
    rec: QuintupleRec,
    pair: DDeltaPair,
    phi_map,
    session: "Session",
) -> None:
    p_parent = frozenset(stab.to_parent_index(i) for i in rec.p_members)
    p_sub_g = Subgroup(G, p_parent, check=False)
    sigma2 = kr_involution(chain, p_sub_g, session)
    if abs(sigma2.length - chain.length) != 1:
        raise InvolutionFailure("paired chain length is not one off")
    back = kr_involution(sigma2, p_sub_g, session)
    if back != chain:
        raise InvolutionFailure("involution is not self-inverse")

    stab2 = sigma2.stabilizer(session)
    if not p_parent <= stab2.indices:
        raise InvolutionFailure("P does not stabilize the paired chain")

    n_g = session.memo(
        ("g_normalizer", G.canonical_key, p_parent),
        lambda: frozenset(normalizer(G, p_sub_g).indices),
    )
    if stab.indices & n_g != stab2.indices & n_g:
        raise InvolutionFailure("N_{G_sigma}(P) changed across the involution")
    c_g = session.memo(
        ("g_centralizer", G.canonical_key, p_parent),
        lambda: frozenset(centralizer(G, p_sub_g).indices),
    )
    if stab.indices & c_g != stab2.indices & c_g:
        raise InvolutionFailure("C_{G_sigma}(P) changed across the involution")

    H2, c2, stab2 = _chain_stab_and_central(G, block, sigma2, session)
    sub2 = stab2.sub_subgroup(p_parent)
    lps2 = local_points(H2, pair.p, c2, sub2, session=session)
    lps1 = local_points(H, pair.p, c, stab.sub_subgroup(p_parent), session=session)
    ids1 = [LocalPointSet._coeff_key(b.idempotent) for b in lps1.points]
    ids2 = [LocalPointSet._coeff_key(b.idempotent) for b in lps2.points]
    if set(ids1) != set(ids2):
        raise InvolutionFailure("point sets differ across the involution")
    gamma_key = ids1[rec.gamma]
    gamma2 = ids2.index(gamma_key)

    if not lps2.membership(gamma2, rec.pi_pos, pair.u):
        raise InvolutionFailure("pair membership lost across the involution")
    if lps2.witness(gamma2, rec.pi_pos, phi_map) is None:
        raise InvolutionFailure("phi-witness lost across the involution")
