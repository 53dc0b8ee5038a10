"""Pairs (L, u): a finite p-group with a p'-automorphism, up to the
isomorphisms of L⋊⟨u⟩ that send u to a conjugate of the target generator.

A pair is materialized as: L (a permutation group), u (a permutation of L's
element indices that respects the multiplication table), and the semidirect
product L⋊⟨u⟩ acting regularly on |L|·ord(u) points. Pair-automorphism data
lives in Aut(L⋊⟨u⟩): the subgroup preserving the conjugacy class of u, its
inner automorphisms, and the quotient with its character table.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterator, Optional

import numpy as np

from . import _kernels as K
from .errors import CapExceeded
from .perm import (
    Perm,
    PermGroup,
    Subgroup,
    _invariant,
    _iter_embeddings,
    find_isomorphism,
    quotient_group,
)

if TYPE_CHECKING:
    from .chartable import CharacterTable
    from .session import Session

DEFAULT_PAIR_MAX_ORDER = 64
DEFAULT_SEMIDIRECT_CAP = 2000
DEFAULT_AUT_CAP = 100_000


def automorphism_group(L: PermGroup, cap: int = DEFAULT_AUT_CAP) -> PermGroup:
    """Aut(L) as permutations of L's element indices."""
    if L.order == 1:
        return PermGroup.from_generators([Perm.identity(1)])
    perms = []
    for img in _iter_embeddings(L, L, bijective=True):
        perms.append(Perm(tuple(int(x) for x in img)))
        if len(perms) > cap:
            raise CapExceeded(f"|Aut| exceeds {cap} for a group of order {L.order}")
    elems = np.array([p.images for p in perms], dtype=np.int32)
    elems = elems[np.lexsort(elems.T[::-1])]
    gens = [Perm(tuple(int(x) for x in row)) for row in elems]
    return PermGroup._from_elements(elems, gens, L.order)


def is_automorphism(L: PermGroup, u: Perm) -> bool:
    table = L.table
    n = L.order
    img = np.fromiter((u(i) for i in range(n)), dtype=np.int64, count=n)
    if sorted(int(x) for x in img) != list(range(n)):
        return False
    return bool((img[table] == table[np.ix_(img, img)]).all())


class DDeltaPair:
    """A p-group L with a p'-automorphism u, realized inside L⋊⟨u⟩."""

    def __init__(self, p: int, L: PermGroup, u: Perm, semidirect_cap: int = DEFAULT_SEMIDIRECT_CAP):
        assert is_automorphism(L, u), "u must be an automorphism of L"
        self.p = p
        self.L = L
        self.u = u
        self.u_order = u.order()
        assert self.u_order % p != 0, "u must have order coprime to p"
        if L.order * self.u_order > semidirect_cap:
            raise CapExceeded(
                f"|L x <u>| = {L.order * self.u_order} exceeds cap {semidirect_cap}"
            )
        self.semidirect, self.l_to_m, self.u_index = _build_semidirect(L, u, self.u_order)
        self._m_to_l = {int(m): i for i, m in enumerate(self.l_to_m)}

    @property
    def key(self) -> tuple:
        return (self.p, self.L.canonical_key, self.u_order, self.semidirect.canonical_key)

    def m_to_l(self, m_index: int) -> Optional[int]:
        return self._m_to_l.get(m_index)

    def restrict_to_l(self, phi: Perm) -> np.ndarray:
        """The action on L-element indices of an automorphism of L⋊⟨u⟩."""
        out = np.empty(self.L.order, dtype=np.int64)
        for i in range(self.L.order):
            m_img = phi(int(self.l_to_m[i]))
            j = self._m_to_l.get(m_img)
            assert j is not None, "automorphism does not preserve the normal Sylow"
            out[i] = j
        return out

    def describe(self) -> str:
        return f"(L order {self.L.order}, u order {self.u_order})"

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "L_order": self.L.order,
            "L_id_key": self.L.canonical_key,
            "u_order": self.u_order,
        }

    def __repr__(self) -> str:
        return f"DDeltaPair{self.describe()}"


def _build_semidirect(L: PermGroup, u: Perm, o: int) -> tuple[PermGroup, np.ndarray, int]:
    """L⋊⟨u⟩ acting on pairs (x, k) = point k·|L| + x by left multiplication."""
    n = L.order
    table = L.table
    u_pows = [list(range(n))]
    for _ in range(o - 1):
        u_pows.append([u(x) for x in u_pows[-1]])

    def elem_perm(a: int, k: int) -> Perm:
        # (a, k) * (b, l) = (a * u^k(b), k + l)
        images = [0] * (n * o)
        for l in range(o):
            for b in range(n):
                c = int(table[a, u_pows[k][b]])
                images[l * n + b] = ((k + l) % o) * n + c
        return Perm(tuple(images))

    gens = [elem_perm(L.index_of(g), 0) for g in L.generators if not g.is_identity()]
    gens.append(elem_perm(0, 1 % o))
    M = PermGroup.from_generators(gens, cap=n * o)
    assert M.order == n * o, "semidirect construction not regular"
    l_to_m = np.array([M.index_of(elem_perm(a, 0)) for a in range(n)], dtype=np.int64)
    u_index = M.index_of(elem_perm(0, 1 % o))
    return M, l_to_m, u_index


@dataclass
class PairAutData:
    """Automorphisms of L⋊⟨u⟩ preserving the class of u, with the outer quotient."""

    pair: DDeltaPair
    aut: PermGroup
    aut_pair: Subgroup
    inn: Subgroup
    out: PermGroup
    out_table: "CharacterTable"
    to_out: dict[int, int]

    @property
    def out_order(self) -> int:
        return self.out.order

    def restriction(self, aut_pair_own_index: int) -> np.ndarray:
        """Action on L-indices of the chosen pair automorphism."""
        parent_idx = self.aut_pair.to_parent_index(aut_pair_own_index)
        return self.pair.restrict_to_l(self.aut.element(parent_idx))

    def out_image(self, aut_pair_own_index: int) -> int:
        return self.to_out[aut_pair_own_index]


def pair_aut_data(
    pair: DDeltaPair,
    aut_cap: int = DEFAULT_AUT_CAP,
    session: Optional["Session"] = None,
) -> PairAutData:
    """Aut(L,u), Inn(L⋊⟨u⟩), and Out(L,u) with its character table."""
    from .chartable import character_table
    from .session import get_session

    session = session or get_session()
    M = pair.semidirect
    aut = automorphism_group(M, cap=aut_cap)
    u_class = int(M.classes.class_of[pair.u_index])
    keep = frozenset(
        i for i in range(aut.order)
        if int(M.classes.class_of[aut.element(i)(pair.u_index)]) == u_class
    )
    aut_pair = Subgroup(aut, keep)

    inner = []
    table, inv = M.table, M.inv
    for g in range(M.order):
        conj = Perm(tuple(int(table[table[g, x], inv[g]]) for x in range(M.order)))
        inner.append(aut.index_of(conj))
    inn_parent = frozenset(inner)
    assert inn_parent <= keep, "inner automorphisms must preserve the class of u"
    A = aut_pair.as_group()
    inn_own = frozenset(aut_pair.own_index(i) for i in inn_parent)
    inn = Subgroup(A, inn_own, check=False)
    out, to_out_full = quotient_group(A, inn)
    out = session.intern(out)
    out_table = session.char_table(out)
    return PairAutData(
        pair=pair,
        aut=aut,
        aut_pair=aut_pair,
        inn=Subgroup(aut, inn_parent),
        out=out,
        out_table=out_table,
        to_out=to_out_full,
    )


def _iter_pair_isos(a: DDeltaPair, b: DDeltaPair) -> Iterator[np.ndarray]:
    """Isomorphisms L_a⋊⟨u_a⟩ → L_b⋊⟨u_b⟩ sending u_a into the class of u_b."""
    Ma, Mb = a.semidirect, b.semidirect
    if Ma.order != Mb.order:
        return
    src_gens = [int(a.u_index)]
    for g in a.L.generators:
        if not g.is_identity():
            src_gens.append(int(a.l_to_m[a.L.index_of(g)]))
    # drop generators already in the closure of the previous ones
    chosen: list[int] = []
    current = {0}
    for g in src_gens:
        if g in current:
            continue
        chosen.append(g)
        current = {
            int(x) for x in K.subgroup_closure(Ma.table, np.array(chosen, dtype=np.int32))
        }
    if not chosen:
        if Mb.order == 1:
            yield np.zeros(1, dtype=np.int32)
        return
    src_gens = chosen

    u_class_b = int(Mb.classes.class_of[b.u_index])
    cands: list[list[int]] = []
    for level, g in enumerate(src_gens):
        want = _invariant(Ma, g)
        pool = [j for j in range(Mb.order) if _invariant(Mb, j) == want]
        if level == 0 and g == int(a.u_index):
            pool = [j for j in pool if int(Mb.classes.class_of[j]) == u_class_b]
        cands.append(pool)
    gen_arr = np.array(src_gens, dtype=np.int32)

    def rec(level: int, chosen_imgs: list[int]) -> Iterator[np.ndarray]:
        for j in cands[level]:
            trial = chosen_imgs + [j]
            img = K.extend_hom(Ma.table, Mb.table, gen_arr[: len(trial)], np.array(trial, dtype=np.int32))
            if img is None:
                continue
            reached = img >= 0
            vals = img[reached]
            if len(set(int(v) for v in vals)) != len(vals):
                continue
            if reached.all():
                if len(trial) == len(src_gens):
                    yield np.asarray(img, dtype=np.int32)
                continue
            yield from rec(level + 1, trial)

    yield from rec(0, [])


def pair_isomorphic(a: DDeltaPair, b: DDeltaPair) -> Optional[np.ndarray]:
    """A witness isomorphism of pairs, or None."""
    if a.p != b.p or a.L.order != b.L.order or a.u_order != b.u_order:
        return None
    if a.semidirect.order != b.semidirect.order:
        return None
    for img in _iter_pair_isos(a, b):
        return img
    return None


def _wreath_cp(p: int, levels: int) -> PermGroup:
    """The iterated wreath product C_p ≀ ... ≀ C_p on p^levels points."""
    if levels == 0:
        return PermGroup.from_generators([Perm.identity(1)])
    gens = [Perm.from_cycles(p, [tuple(range(p))])]
    deg = p
    for _ in range(levels - 1):
        new_deg = deg * p
        lifted = []
        for g in gens:
            images = list(range(new_deg))
            for i in range(deg):
                images[i] = g(i)
            lifted.append(Perm(tuple(images)))
        block_cycle = Perm(tuple((i + deg) % new_deg for i in range(new_deg)))
        gens = lifted + [block_cycle]
        deg = new_deg
    return PermGroup.from_generators(gens, cap=p ** ((p ** levels - 1) // (p - 1)))


def _candidate_p_groups(
    p: int,
    max_order: int,
    within: Optional[PermGroup],
    session: "Session",
) -> list[PermGroup]:
    """Isomorphism-class representatives of p-groups of order <= max_order.

    With `within`, candidates are the p-subgroups of that group. Otherwise
    they are subgroups of the Sylow p-subgroup of the symmetric group on
    p^a points (a maximal p-power <= max_order), which contains a copy of
    every p-group of order <= p^a.
    """
    if within is not None:
        container = session.intern(within)
    else:
        a = 0
        while p ** (a + 1) <= max_order:
            a += 1
        wreath_order = p ** ((p**a - 1) // (p - 1)) if a else 1
        if wreath_order > session.config.group_cap:
            raise CapExceeded(
                f"abstract enumeration container has order {wreath_order}"
            )
        container = session.intern(_wreath_cp(p, a))
    lattice = session.p_subgroup_lattice(container, p)
    reps: list[PermGroup] = []
    for rep_sub in lattice.class_reps:
        if rep_sub.order > max_order:
            continue
        cand = session.group_of(rep_sub)
        if any(find_isomorphism(cand, known) is not None for known in reps):
            continue
        reps.append(cand)
    reps.sort(key=lambda g: (g.order, g.canonical_key))
    return reps


def enumerate_ddelta_pairs(
    p: int,
    max_order: int = DEFAULT_PAIR_MAX_ORDER,
    within: Optional[PermGroup] = None,
    aut_cap: int = DEFAULT_AUT_CAP,
    semidirect_cap: int = DEFAULT_SEMIDIRECT_CAP,
    session: Optional["Session"] = None,
) -> list[DDeltaPair]:
    """All pairs (L,u) with |L| <= max_order, one per isomorphism class.

    Candidate u's run over conjugacy-class representatives of p'-elements of
    Aut(L); a final pass removes pair-isomorphic duplicates such as
    (L,u) ≅ (L,u') with u' conjugate to u only inside the semidirect product.
    """
    from .session import get_session

    session = session or get_session()
    classes: list[DDeltaPair] = []
    for L in _candidate_p_groups(p, max_order, within, session):
        aut = automorphism_group(L, cap=aut_cap)
        u_reps = []
        for c in range(aut.classes.num_classes):
            o = aut.classes.rep_order(c)
            if o % p == 0 and o > 1:
                continue
            u_reps.append(aut.element(int(aut.classes.rep_indices[c])))
        u_reps.sort(key=lambda perm: (perm.order(), perm.images))
        for u in u_reps:
            cand = DDeltaPair(p, L, u, semidirect_cap=semidirect_cap)
            if any(pair_isomorphic(cand, known) is not None for known in classes):
                continue
            classes.append(cand)
    classes.sort(key=lambda c: (c.L.order, c.L.canonical_key, c.u_order, c.semidirect.canonical_key))
    return classes
