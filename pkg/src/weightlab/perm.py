"""Permutation groups of small order: elements, classes, subgroups, p-subgroups.

Conventions used throughout the package:

* permutations act on points 0..d-1 and compose right-to-left,
  (p*q)(x) = p(q(x));
* a group's element list is sorted lexicographically by image tuple, which
  places the identity at index 0 and makes element indices canonical;
* conjugacy classes are sorted by (representative order, representative image
  tuple) with the representative being the lex-least class member, so class 0
  is always the identity class.
"""

from __future__ import annotations

import hashlib
import math
from functools import reduce
from typing import Iterable, Optional, Sequence

import numpy as np

from . import _kernels as K
from .errors import CapExceeded, NotASubgroup

DEFAULT_GROUP_CAP = 2000


class Perm:
    """An immutable permutation given by its image tuple."""

    __slots__ = ("images",)

    def __init__(self, images: Iterable[int]):
        imgs = tuple(int(x) for x in images)
        if sorted(imgs) != list(range(len(imgs))):
            raise ValueError(f"not a permutation of 0..{len(imgs) - 1}: {imgs}")
        object.__setattr__(self, "images", imgs)

    @property
    def degree(self) -> int:
        return len(self.images)

    @staticmethod
    def identity(degree: int) -> "Perm":
        return Perm(range(degree))

    @staticmethod
    def from_cycles(degree: int, cycles: Sequence[Sequence[int]]) -> "Perm":
        """Build from disjoint 0-based cycles; points may repeat across cycles only if equal maps."""
        imgs = list(range(degree))
        for cyc in cycles:
            for a, b in zip(cyc, cyc[1:] + type(cyc)((cyc[0],))):
                imgs[a] = b
        return Perm(imgs)

    def __call__(self, x: int) -> int:
        return self.images[x]

    def __mul__(self, other: "Perm") -> "Perm":
        if self.degree != other.degree:
            raise ValueError("degree mismatch")
        return Perm(self.images[x] for x in other.images)

    def inverse(self) -> "Perm":
        imgs = [0] * self.degree
        for i, j in enumerate(self.images):
            imgs[j] = i
        return Perm(imgs)

    def __pow__(self, k: int) -> "Perm":
        if k < 0:
            return self.inverse() ** (-k)
        result = Perm.identity(self.degree)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def order(self) -> int:
        return reduce(math.lcm, (len(c) for c in self.cycles()), 1)

    def cycles(self) -> list[tuple[int, ...]]:
        """Nontrivial cycles, 0-based, each starting at its least point."""
        seen = [False] * self.degree
        out = []
        for start in range(self.degree):
            if seen[start] or self.images[start] == start:
                seen[start] = True
                continue
            cyc = [start]
            seen[start] = True
            x = self.images[start]
            while x != start:
                cyc.append(x)
                seen[x] = True
                x = self.images[x]
            out.append(tuple(cyc))
        return out

    def cycle_string(self) -> str:
        """1-based cycle notation, '()' for the identity."""
        cycs = self.cycles()
        if not cycs:
            return "()"
        return "".join("(" + " ".join(str(x + 1) for x in c) + ")" for c in cycs)

    def is_identity(self) -> bool:
        return all(i == x for i, x in enumerate(self.images))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Perm) and self.images == other.images

    def __lt__(self, other: "Perm") -> bool:
        return self.images < other.images

    def __hash__(self) -> int:
        return hash(self.images)

    def __repr__(self) -> str:
        return f"Perm{self.cycle_string()}"


class ConjClassTable:
    """Conjugacy classes of a PermGroup in canonical order."""

    def __init__(self, group: "PermGroup"):
        self.group = group
        table, inv = group.table, group.inv
        raw = K.conj_classes(table, inv, group.small_gen_indices)
        labels = sorted(set(int(x) for x in raw))
        orders = group.orders
        keyed = []
        for lab in labels:
            members = np.nonzero(raw == lab)[0].astype(np.int32)
            keyed.append(((int(orders[lab]), tuple(int(v) for v in group._elems[lab])), lab, members))
        keyed.sort(key=lambda t: t[0])
        self.rep_indices = np.array([lab for _, lab, _ in keyed], dtype=np.int32)
        self.sizes = [len(members) for _, _, members in keyed]
        self._members = [members for _, _, members in keyed]
        self.class_of = np.empty(group.order, dtype=np.int32)
        for c, (_, _, members) in enumerate(keyed):
            self.class_of[members] = c
        self.inverse_class = [int(self.class_of[inv[r]]) for r in self.rep_indices]
        self._power_cache: dict[tuple[int, int], int] = {}

    @property
    def num_classes(self) -> int:
        return len(self.sizes)

    def rep(self, c: int) -> Perm:
        return self.group.element(int(self.rep_indices[c]))

    def members(self, c: int) -> np.ndarray:
        return self._members[c]

    def rep_order(self, c: int) -> int:
        return int(self.group.orders[self.rep_indices[c]])

    def power_class(self, c: int, s: int) -> int:
        """Class index of rep(c)**s."""
        o = self.rep_order(c)
        s %= o
        key = (c, s)
        if key not in self._power_cache:
            table = self.group.table
            cur, rep = 0, int(self.rep_indices[c])
            for _ in range(s):
                cur = int(table[cur, rep])
            self._power_cache[key] = int(self.class_of[cur])
        return self._power_cache[key]

    def p_regular_classes(self, p: int) -> list[int]:
        return [c for c in range(self.num_classes) if self.rep_order(c) % p != 0]


class PermGroup:
    """A finite permutation group with fully enumerated, canonically ordered elements."""

    def __init__(self, elems: np.ndarray, generators: list[Perm], degree: int):
        self._elems = elems
        self.degree = degree
        self.generators = generators
        self._index: dict[bytes, int] = {row.tobytes(): i for i, row in enumerate(elems)}
        self._table: Optional[np.ndarray] = None
        self._inv: Optional[np.ndarray] = None
        self._orders: Optional[np.ndarray] = None
        self._classes: Optional[ConjClassTable] = None
        self._small_gens: Optional[np.ndarray] = None
        self._key: Optional[str] = None

    @classmethod
    def from_generators(cls, generators: Sequence[Perm], cap: int = DEFAULT_GROUP_CAP) -> "PermGroup":
        gens = list(generators)
        if not gens:
            raise ValueError("need at least one generator (use Perm.identity for the trivial group)")
        degree = gens[0].degree
        if any(g.degree != degree for g in gens):
            raise ValueError("generators must share a degree")
        arr = np.array([g.images for g in gens], dtype=np.int32)
        elems = K.perm_closure(arr, cap)
        if elems.shape[0] == 0:
            raise CapExceeded(f"group closure exceeded cap {cap}")
        return cls(elems, gens, degree)

    @classmethod
    def _from_elements(cls, elems: np.ndarray, generators: list[Perm], degree: int) -> "PermGroup":
        """Trusted constructor: elems must be a lex-sorted closed element set."""
        return cls(elems, generators, degree)

    @property
    def order(self) -> int:
        return self._elems.shape[0]

    @property
    def identity(self) -> Perm:
        return Perm.identity(self.degree)

    def element(self, i: int) -> Perm:
        return Perm(self._elems[i])

    def elements(self) -> list[Perm]:
        return [Perm(row) for row in self._elems]

    def index_of(self, p: Perm) -> int:
        key = np.array(p.images, dtype=np.int32).tobytes()
        if key not in self._index:
            raise KeyError(f"{p!r} is not an element of this group")
        return self._index[key]

    def __contains__(self, p: Perm) -> bool:
        return np.array(p.images, dtype=np.int32).tobytes() in self._index

    @property
    def table(self) -> np.ndarray:
        if self._table is None:
            self._table, self._inv = K.mult_table(self._elems)
        return self._table

    @property
    def inv(self) -> np.ndarray:
        if self._inv is None:
            self.table
        return self._inv

    @property
    def orders(self) -> np.ndarray:
        if self._orders is None:
            self._orders = K.element_orders(self.table)
        return self._orders

    @property
    def exponent(self) -> int:
        return reduce(math.lcm, (int(o) for o in self.orders), 1)

    @property
    def classes(self) -> ConjClassTable:
        if self._classes is None:
            self._classes = ConjClassTable(self)
        return self._classes

    @property
    def small_gen_indices(self) -> np.ndarray:
        """A short generating sequence, picked greedily by descending element order."""
        if self._small_gens is None:
            if self.order == 1:
                self._small_gens = np.array([0], dtype=np.int32)
            else:
                order_key = sorted(range(self.order), key=lambda i: (-int(self.orders[i]), i))
                chosen: list[int] = []
                current = {0}
                for i in order_key:
                    if i in current:
                        continue
                    chosen.append(i)
                    current = set(int(x) for x in K.subgroup_closure(self.table, np.array(chosen, dtype=np.int32)))
                    if len(current) == self.order:
                        break
                self._small_gens = np.array(chosen, dtype=np.int32)
        return self._small_gens

    @property
    def canonical_key(self) -> str:
        """Digest of the sorted element list; equal iff same degree and same element set."""
        if self._key is None:
            h = hashlib.blake2b(digest_size=16)
            h.update(f"{self.degree}:{self.order}:".encode())
            h.update(self._elems.tobytes())
            self._key = h.hexdigest()
        return self._key

    @property
    def is_abelian(self) -> bool:
        return self.classes.num_classes == self.order

    def power_index(self, a: int, k: int) -> int:
        """Index of element(a)**k."""
        k %= int(self.orders[a])
        cur = 0
        for _ in range(k):
            cur = int(self.table[cur, a])
        return cur

    def subgroup(self, members: Iterable[Perm] | np.ndarray, check: bool = True) -> "Subgroup":
        if isinstance(members, np.ndarray):
            idx = members.astype(np.int64)
        else:
            idx = np.array(sorted(self.index_of(p) for p in members), dtype=np.int64)
        return Subgroup(self, frozenset(int(i) for i in idx), check=check)

    def generated_subgroup(self, gens: Iterable[Perm]) -> "Subgroup":
        gen_idx = np.array(sorted({self.index_of(p) for p in gens} | {0}), dtype=np.int32)
        closed = K.subgroup_closure(self.table, gen_idx)
        return Subgroup(self, frozenset(int(i) for i in closed), check=False)

    def trivial_subgroup(self) -> "Subgroup":
        return Subgroup(self, frozenset([0]), check=False)

    def full_subgroup(self) -> "Subgroup":
        return Subgroup(self, frozenset(range(self.order)), check=False)

    def __repr__(self) -> str:
        return f"<PermGroup order {self.order} degree {self.degree}>"


class Subgroup:
    """A subgroup of a PermGroup, stored as a set of parent element indices."""

    def __init__(self, parent: PermGroup, indices: frozenset[int], check: bool = True):
        self.parent = parent
        self.indices = indices
        self.sorted_idx = np.array(sorted(indices), dtype=np.int32)
        if check:
            self._validate()
        self._group: Optional[PermGroup] = None
        self._gen_idx: Optional[np.ndarray] = None

    def _validate(self) -> None:
        if 0 not in self.indices:
            raise NotASubgroup("identity missing")
        table = self.parent.table
        prods = table[np.ix_(self.sorted_idx, self.sorted_idx)]
        member = np.zeros(self.parent.order, dtype=bool)
        member[self.sorted_idx] = True
        if not member[prods].all():
            raise NotASubgroup("set is not closed under products")
        if self.parent.order % len(self.indices) != 0:
            raise NotASubgroup("order does not divide parent order")

    @property
    def order(self) -> int:
        return len(self.indices)

    def __contains__(self, i: int) -> bool:
        return i in self.indices

    def perms(self) -> list[Perm]:
        return [self.parent.element(int(i)) for i in self.sorted_idx]

    @property
    def gen_indices(self) -> np.ndarray:
        """Short generating sequence in parent indices."""
        if self._gen_idx is None:
            if self.order == 1:
                self._gen_idx = np.array([0], dtype=np.int32)
            else:
                orders = self.parent.orders
                cand = sorted(self.indices, key=lambda i: (-int(orders[i]), i))
                chosen: list[int] = []
                current = {0}
                for i in cand:
                    if i in current:
                        continue
                    chosen.append(i)
                    current = set(
                        int(x) for x in K.subgroup_closure(self.parent.table, np.array(chosen, dtype=np.int32))
                    )
                    if len(current) == self.order:
                        break
                self._gen_idx = np.array(chosen, dtype=np.int32)
        return self._gen_idx

    def as_group(self) -> PermGroup:
        """This subgroup as a standalone PermGroup (same degree, canonical ordering)."""
        if self._group is None:
            elems = self.parent._elems[self.sorted_idx]
            gens = [self.parent.element(int(i)) for i in self.gen_indices]
            self._group = PermGroup._from_elements(elems, gens, self.parent.degree)
        return self._group

    def to_parent_index(self, own_index: int) -> int:
        """Translate an element index of as_group() to a parent index."""
        return int(self.sorted_idx[own_index])

    def own_index(self, parent_index: int) -> int:
        """Translate a parent element index to an as_group() index."""
        pos = int(np.searchsorted(self.sorted_idx, parent_index))
        if pos >= len(self.sorted_idx) or int(self.sorted_idx[pos]) != parent_index:
            raise KeyError(f"element {parent_index} not in subgroup")
        return pos

    def sub_subgroup(self, parent_indices: frozenset) -> "Subgroup":
        """A subgroup of as_group() given by parent element indices."""
        own = frozenset(self.own_index(i) for i in parent_indices)
        return Subgroup(self.as_group(), own, check=False)

    def conjugate(self, g: int) -> "Subgroup":
        """The subgroup g S g^-1, with g a parent element index."""
        new_idx = K.conj_subset(self.parent.table, self.parent.inv, g, self.sorted_idx)
        return Subgroup(self.parent, frozenset(int(i) for i in new_idx), check=False)

    def intersect(self, other: "Subgroup") -> "Subgroup":
        assert self.parent is other.parent
        return Subgroup(self.parent, self.indices & other.indices, check=False)

    def contains_subgroup(self, other: "Subgroup") -> bool:
        return other.indices <= self.indices

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Subgroup)
            and self.parent is other.parent
            and self.indices == other.indices
        )

    def __hash__(self) -> int:
        return hash((id(self.parent), self.indices))

    def __repr__(self) -> str:
        return f"<Subgroup order {self.order} of {self.parent!r}>"


def conjugacy_classes(group: PermGroup) -> ConjClassTable:
    return group.classes


def centralizer(group: PermGroup, target: Subgroup | Perm) -> Subgroup:
    """Elements of `group` commuting with the whole target."""
    if isinstance(target, Perm):
        idx = np.array([group.index_of(target)], dtype=np.int32)
    else:
        idx = target.sorted_idx
    cent = K.centralizer_idx(group.table, idx)
    return Subgroup(group, frozenset(int(i) for i in cent), check=False)


def normalizer(group: PermGroup, target: Subgroup) -> Subgroup:
    norm = K.normalizer_idx(group.table, group.inv, target.sorted_idx)
    return Subgroup(group, frozenset(int(i) for i in norm), check=False)


def join(first: Subgroup, second: Subgroup) -> Subgroup:
    """Smallest subgroup containing both (inside their common parent)."""
    assert first.parent is second.parent
    gen_idx = np.array(sorted(first.indices | second.indices), dtype=np.int32)
    closed = K.subgroup_closure(first.parent.table, gen_idx)
    return Subgroup(first.parent, frozenset(int(i) for i in closed), check=False)


def intersection(first: Subgroup, second: Subgroup) -> Subgroup:
    return first.intersect(second)


def is_conjugate(group: PermGroup, first: Subgroup, second: Subgroup) -> Optional[Perm]:
    """A conjugating element g with g first g^-1 = second, or None."""
    if first.order != second.order:
        return None
    table, inv = group.table, group.inv
    target = second.indices
    for g in range(group.order):
        moved = K.conj_subset(table, inv, g, first.sorted_idx)
        if frozenset(int(i) for i in moved) == target:
            return group.element(g)
    return None


def p_part_split(n: int, p: int) -> tuple[int, int]:
    """(p-part, p'-part) of n."""
    a = 1
    while n % p == 0:
        n //= p
        a *= p
    return a, n


class PSubgroupLattice:
    """All p-subgroups of a group, with their conjugation classes."""

    def __init__(self, group: PermGroup, p: int, subgroups: list[frozenset[int]], class_of: list[int]):
        self.group = group
        self.p = p
        self.subgroups = subgroups
        self.index = {s: i for i, s in enumerate(subgroups)}
        self.class_of = class_of
        n_classes = max(class_of) + 1 if class_of else 0
        self.classes: list[list[int]] = [[] for _ in range(n_classes)]
        for pos, c in enumerate(class_of):
            self.classes[c].append(pos)
        self.class_reps = [
            Subgroup(group, min((subgroups[pos] for pos in members), key=sorted), check=False)
            for members in self.classes
        ]

    @property
    def num_classes(self) -> int:
        return len(self.classes)

    def overgroups(self, s: frozenset[int]) -> list[frozenset[int]]:
        """All p-subgroups strictly containing s."""
        return [t for t in self.subgroups if len(t) > len(s) and s < t]


def p_subgroups(group: PermGroup, p: int) -> PSubgroupLattice:
    """Every p-subgroup of the group, classified up to conjugacy.

    A Sylow p-subgroup is grown by repeated normalizer extension, its
    subgroups are enumerated bottom-up (each subgroup of a p-group sits under
    a chain of index-p oversteps inside the Sylow), and G-conjugation then
    sweeps out all remaining p-subgroups and the class partition at once.
    """
    n = group.order
    table, inv = group.table, group.inv
    orders = group.orders
    sylow_order, _ = p_part_split(n, p)

    sylow = frozenset([0])
    while len(sylow) < sylow_order:
        arr = np.array(sorted(sylow), dtype=np.int32)
        norm = K.normalizer_idx(table, inv, arr)
        extended = False
        for y in norm:
            y = int(y)
            if y in sylow:
                continue
            _, m = p_part_split(int(orders[y]), p)
            z = group.power_index(y, m)
            if z not in sylow:
                new_gens = np.array(sorted(sylow | {z}), dtype=np.int32)
                sylow = frozenset(int(i) for i in K.subgroup_closure(table, new_gens))
                extended = True
                break
        if not extended:
            raise RuntimeError("sylow construction stalled; group data inconsistent")

    levels: list[set[frozenset[int]]] = [{frozenset([0])}]
    sylow_arr = np.array(sorted(sylow), dtype=np.int32)
    while True:
        last = levels[-1]
        nxt: set[frozenset[int]] = set()
        for t in last:
            t_arr = np.array(sorted(t), dtype=np.int32)
            norm_t = set(int(i) for i in K.normalizer_idx(table, inv, t_arr)) & sylow
            for x in sorted(norm_t - t):
                if group.power_index(x, p) in t:
                    gens = np.array(sorted(t | {x}), dtype=np.int32)
                    u = frozenset(int(i) for i in K.subgroup_closure(table, gens))
                    nxt.add(u)
        if not nxt:
            break
        levels.append(nxt)

    gen_idx = [int(g) for g in group.small_gen_indices]
    seen: dict[frozenset[int], int] = {}
    all_subs: list[frozenset[int]] = []
    class_of: list[int] = []
    n_classes = 0
    for level in levels:
        for s in sorted(level, key=sorted):
            if s in seen:
                continue
            c = n_classes
            n_classes += 1
            queue = [s]
            seen[s] = c
            while queue:
                cur = queue.pop()
                all_subs.append(cur)
                class_of.append(c)
                cur_arr = np.array(sorted(cur), dtype=np.int32)
                for g in gen_idx:
                    moved = frozenset(int(i) for i in K.conj_subset(table, inv, g, cur_arr))
                    if moved not in seen:
                        seen[moved] = c
                        queue.append(moved)

    order_pairs = sorted(
        range(len(all_subs)),
        key=lambda i: (len(all_subs[i]), sorted(all_subs[i])),
    )
    reordered = [all_subs[i] for i in order_pairs]
    old_class = [class_of[i] for i in order_pairs]
    remap: dict[int, int] = {}
    final_class = []
    for c in old_class:
        if c not in remap:
            remap[c] = len(remap)
        final_class.append(remap[c])
    return PSubgroupLattice(group, p, reordered, final_class)


def find_isomorphism(src: PermGroup, dst: PermGroup) -> Optional[np.ndarray]:
    """An isomorphism src -> dst as an index map array, or None.

    Backtracks over generator images, filtered by element order and class
    size, with each partial assignment certified by forced extension.
    """
    if src.order != dst.order:
        return None
    if sorted(src.orders.tolist()) != sorted(dst.orders.tolist()):
        return None
    src_classes, dst_classes = src.classes, dst.classes
    src_profile = sorted((src_classes.sizes[c], src_classes.rep_order(c)) for c in range(src_classes.num_classes))
    dst_profile = sorted((dst_classes.sizes[c], dst_classes.rep_order(c)) for c in range(dst_classes.num_classes))
    if src_profile != dst_profile:
        return None
    for img in _iter_embeddings(src, dst, bijective=True):
        return img
    return None


def _invariant(group: PermGroup, i: int) -> tuple[int, int]:
    c = int(group.classes.class_of[i])
    return (int(group.orders[i]), group.classes.sizes[c])


def _iter_embeddings(src: PermGroup, dst: PermGroup, bijective: bool):
    """Yield index-map arrays of isomorphisms src -> dst (all of them when run out)."""
    gens = [int(g) for g in src.small_gen_indices]
    if src.order == 1:
        if not bijective or dst.order == 1:
            yield np.zeros(1, dtype=np.int32)
        return
    cands: list[list[int]] = []
    for g in gens:
        want = _invariant(src, g)
        cands.append([j for j in range(dst.order) if _invariant(dst, j) == want])
    table_s, table_d = src.table, dst.table
    gen_arr = np.array(gens, dtype=np.int32)
    n = src.order

    def rec(level: int, chosen: list[int]):
        if level == len(gens):
            return
        for j in cands[level]:
            trial = chosen + [j]
            img = K.extend_hom(table_s, table_d, gen_arr[: len(trial)], np.array(trial, dtype=np.int32))
            if img is None:
                continue
            reached = img >= 0
            vals = img[reached]
            if len(set(int(v) for v in vals)) != len(vals):
                continue
            if reached.all():
                if len(trial) == len(gens):
                    yield np.asarray(img, dtype=np.int32)
                continue
            yield from rec(level + 1, trial)

    yield from rec(0, [])


def quotient_group(parent: PermGroup, normal: Subgroup) -> tuple[PermGroup, dict[int, int]]:
    """G/N as a permutation group on the cosets of N, with the projection map.

    Returns (quotient, to_quotient) where to_quotient sends a parent element
    index to the quotient element index of its coset. N must be normal.
    """
    assert normal.parent is parent
    table = parent.table
    n = parent.order
    nset = sorted(normal.indices)
    for g in parent.small_gen_indices:
        if normal.conjugate(int(g)).indices != normal.indices:
            raise NotASubgroup("quotient by a non-normal subgroup")
    coset_id = np.full(n, -1, dtype=np.int64)
    reps = []
    for x in range(n):
        if coset_id[x] >= 0:
            continue
        cid = len(reps)
        reps.append(x)
        coset_id[table[x, nset]] = cid
    num = len(reps)
    rep_arr = np.array(reps, dtype=np.int64)

    def left_action(x: int) -> Perm:
        return Perm(tuple(int(coset_id[table[x, r]]) for r in rep_arr))

    gens = [left_action(int(g)) for g in parent.small_gen_indices]
    quotient = PermGroup.from_generators(gens, cap=max(num, 2))
    assert quotient.order == num, "coset action not regular; N not normal?"
    to_quotient = {x: quotient.index_of(left_action(x)) for x in range(n)}
    return quotient, to_quotient
