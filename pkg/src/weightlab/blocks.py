"""p-blocks: partition of the irreducibles, defects, simple counts, idempotents,
the Brauer truncation, and blocks along chains.

Two characters share a block iff their central characters agree after
reduction to F_{p^m}. Idempotent coefficients come from the classical
degree-weighted sum over the block's characters, computed exactly in Q(zeta)
and then reduced; all idempotent axioms are verified on construction. The
simple count l(B) is the rank of the block's characters restricted to
p-regular classes, which spans the same row space as the Brauer characters.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING, Optional

from .chartable import CharacterTable, ClassConstants
from .cyclotomic import Cyclotomic
from .errors import DecompositionFailure, NotClassConstant
from .gf import FFElem, RedMap
from .linalg import rank as exact_rank
from .perm import PermGroup, Subgroup, centralizer, normalizer

if TYPE_CHECKING:
    from .chains import Chain
    from .session import Session


def nu_p(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


class CentralAlgebra:
    """Z(kG) in the class-sum basis, for a fixed group and reduction map."""

    def __init__(self, group: PermGroup, redmap: RedMap, constants: Optional[ClassConstants] = None):
        self.group = group
        self.redmap = redmap
        self._constants = constants

    @property
    def constants(self) -> ClassConstants:
        if self._constants is None:
            self._constants = ClassConstants(self.group)
        return self._constants

    def element(self, coeffs: dict[int, FFElem]) -> "CentralElement":
        return CentralElement(self, {j: c for j, c in coeffs.items() if not c.is_zero()})

    def zero(self) -> "CentralElement":
        return CentralElement(self, {})

    def one(self) -> "CentralElement":
        return CentralElement(self, {0: self.redmap.field.one})

    def signature(self) -> tuple:
        return (self.group.canonical_key, self.redmap.signature())


class CentralElement:
    """An element of Z(kG) as a sparse class-sum coefficient vector."""

    __slots__ = ("algebra", "coeffs")

    def __init__(self, algebra: CentralAlgebra, coeffs: dict[int, FFElem]):
        self.algebra = algebra
        self.coeffs = coeffs

    def __add__(self, other: "CentralElement") -> "CentralElement":
        assert self.algebra.signature() == other.algebra.signature()
        out = dict(self.coeffs)
        for j, c in other.coeffs.items():
            s = out.get(j)
            s = c if s is None else s + c
            if s.is_zero():
                out.pop(j, None)
            else:
                out[j] = s
        return CentralElement(self.algebra, out)

    def __sub__(self, other: "CentralElement") -> "CentralElement":
        return self + (-other)

    def __neg__(self) -> "CentralElement":
        return CentralElement(self.algebra, {j: -c for j, c in self.coeffs.items()})

    def __mul__(self, other: "CentralElement") -> "CentralElement":
        assert self.algebra.signature() == other.algebra.signature()
        field = self.algebra.redmap.field
        sparse = self.algebra.constants.sparse
        acc: dict[int, FFElem] = {}
        for i, ci in self.coeffs.items():
            for j, cj in other.coeffs.items():
                row = sparse.get((i, j))
                if row is None:
                    continue
                prod = ci * cj
                for k, count in row.items():
                    term = prod * field.from_int(count)
                    cur = acc.get(k)
                    acc[k] = term if cur is None else cur + term
        return CentralElement(self.algebra, {k: v for k, v in acc.items() if not v.is_zero()})

    def is_zero(self) -> bool:
        return not self.coeffs

    def support(self) -> list[int]:
        return sorted(self.coeffs)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, CentralElement)
            and self.algebra.signature() == other.algebra.signature()
            and self.coeffs == other.coeffs
        )

    def __hash__(self) -> int:
        return hash(frozenset((j, c.coords) for j, c in self.coeffs.items()))

    def to_json(self) -> dict:
        return {str(j): c.to_json() for j, c in sorted(self.coeffs.items())}

    @staticmethod
    def from_json(algebra: CentralAlgebra, data: dict) -> "CentralElement":
        field = algebra.redmap.field
        return algebra.element({int(j): field.elem(v) for j, v in data.items()})

    def __repr__(self) -> str:
        return f"CentralElement({self.coeffs!r})"


@dataclass
class Block:
    """One p-block of kG."""

    table: CharacterTable
    p: int
    index: int
    irr_indices: tuple[int, ...]
    defect: int
    num_simples: int
    idempotent: CentralElement

    @property
    def group(self) -> PermGroup:
        return self.table.group

    @property
    def is_principal(self) -> bool:
        triv = next(
            i
            for i in range(self.table.num_irr)
            if all(v == 1 for v in self.table.values[i])
        )
        return triv in self.irr_indices

    def block_id(self) -> str:
        return f"p{self.p}.b{self.index}"

    def to_json(self) -> dict:
        return {
            "irr_indices": list(self.irr_indices),
            "defect": self.defect,
            "l": self.num_simples,
            "idempotent": self.idempotent.to_json(),
            "idempotent_support": self.idempotent.support(),
        }


class BlockPartition:
    """All p-blocks of a group, verified."""

    def __init__(self, table: CharacterTable, p: int, redmap: RedMap, blocks: list[Block]):
        self.table = table
        self.p = p
        self.redmap = redmap
        self.blocks = blocks
        self.assignment = {}
        for b in blocks:
            for i in b.irr_indices:
                self.assignment[i] = b.index
        self.verify()

    @property
    def group(self) -> PermGroup:
        return self.table.group

    @property
    def algebra(self) -> CentralAlgebra:
        return self.blocks[0].idempotent.algebra

    def verify(self) -> None:
        table = self.table
        covered = sorted(i for b in self.blocks for i in b.irr_indices)
        if covered != list(range(table.num_irr)):
            raise DecompositionFailure("blocks do not partition the irreducibles")
        classes = table.classes
        n_reg = len(classes.p_regular_classes(self.p))
        if sum(b.num_simples for b in self.blocks) != n_reg:
            raise DecompositionFailure("sum of simple counts != number of p-regular classes")
        algebra = self.blocks[0].idempotent.algebra
        total = algebra.zero()
        for b in self.blocks:
            e = b.idempotent
            if e * e != e:
                raise DecompositionFailure(f"idempotent axiom failed for {b.block_id()}")
            for j in e.coeffs:
                if classes.rep_order(j) % self.p == 0:
                    raise DecompositionFailure("idempotent supported on a p-singular class")
            total = total + e
        for a in range(len(self.blocks)):
            for b in range(a + 1, len(self.blocks)):
                if not (self.blocks[a].idempotent * self.blocks[b].idempotent).is_zero():
                    raise DecompositionFailure("idempotents not orthogonal")
        if total != algebra.one():
            raise DecompositionFailure("idempotents do not sum to 1")

    def block_of_irr(self, i: int) -> Block:
        return self.blocks[self.assignment[i]]

    def to_json(self) -> dict:
        return {
            "group_key": self.table.group_key,
            "p": self.p,
            "field": {"p": self.redmap.p, "m": self.redmap.field.m, "modulus": list(self.redmap.field.modulus)},
            "blocks": [b.to_json() for b in self.blocks],
        }

    @staticmethod
    def from_json(
        table: CharacterTable,
        redmap: RedMap,
        data: dict,
        algebra: Optional[CentralAlgebra] = None,
    ) -> "BlockPartition":
        if data["group_key"] != table.group_key or data["p"] != redmap.p:
            raise DecompositionFailure("cached blocks do not match")
        if tuple(data["field"]["modulus"]) != redmap.field.modulus:
            raise DecompositionFailure("cached blocks use a different field")
        if algebra is None:
            algebra = CentralAlgebra(table.group, redmap)
        blocks = [
            Block(
                table=table,
                p=data["p"],
                index=i,
                irr_indices=tuple(bd["irr_indices"]),
                defect=bd["defect"],
                num_simples=bd["l"],
                idempotent=CentralElement.from_json(algebra, bd["idempotent"]),
            )
            for i, bd in enumerate(data["blocks"])
        ]
        return BlockPartition(table, data["p"], redmap, blocks)


def p_blocks(
    group: PermGroup,
    p: int,
    redmap: Optional[RedMap] = None,
    session: Optional["Session"] = None,
) -> BlockPartition:
    """Partition Irr(G) into p-blocks with defects, simple counts, idempotents."""
    from .session import get_session

    session = session or get_session()
    group = session.intern(group)
    table = session.char_table(group)
    if redmap is None:
        redmap = session.ambient_redmap(group, p)

    classes = table.classes
    r = classes.num_classes
    n = group.order

    groups: dict[tuple, list[int]] = {}
    for i in session.shuffled(list(range(table.num_irr))):
        omega = table.central_character(i)
        reduced = tuple(redmap.reduce(v).coords for v in omega)
        groups.setdefault(reduced, []).append(i)
    families = sorted(tuple(sorted(v)) for v in groups.values())

    algebra = session.central_algebra(group, redmap)
    reg = classes.p_regular_classes(p)
    nu_n = nu_p(n, p)
    blocks: list[Block] = []
    for index, irr_indices in enumerate(families):
        defect = nu_n - min(nu_p(table.degrees[i], p) for i in irr_indices)
        coeffs: dict[int, FFElem] = {}
        for j in range(r):
            jinv = classes.inverse_class[j]
            total = Cyclotomic.from_rational(0)
            for i in irr_indices:
                total = total + table.values[i][jinv] * Fraction(table.degrees[i], n)
            val = redmap.reduce(total)
            if not val.is_zero():
                coeffs[j] = val
        idem = algebra.element(coeffs)
        matrix = [[table.values[i][j] for j in reg] for i in irr_indices]
        l = exact_rank(matrix)
        blocks.append(
            Block(
                table=table,
                p=p,
                index=index,
                irr_indices=irr_indices,
                defect=defect,
                num_simples=l,
                idempotent=idem,
            )
        )
    return BlockPartition(table, p, redmap, blocks)


def num_simples(block: Block) -> int:
    """l(kGb): rank of the block's characters on p-regular classes."""
    return block.num_simples


def block_idempotent(block: Block) -> CentralElement:
    return block.idempotent


def brauer_map(
    z: CentralElement,
    p_sub: Subgroup,
    h_sub: Subgroup,
    session: Optional["Session"] = None,
) -> CentralElement:
    """Truncate a central element of kG to C_G(P), re-read in Z(kH).

    Requires C_G(P) <= H <= N_G(P); the result's class constancy over H is
    verified element by element (a failure would mean corrupted inputs).
    """
    from .session import get_session

    session = session or get_session()
    parent = z.algebra.group
    assert p_sub.parent.canonical_key == parent.canonical_key
    assert h_sub.parent.canonical_key == parent.canonical_key
    cent = centralizer(parent, p_sub)
    norm = normalizer(parent, p_sub)
    if not (cent.indices <= h_sub.indices and h_sub.indices <= norm.indices):
        raise ValueError("need C_G(P) <= H <= N_G(P)")

    h_group = session.group_of(h_sub)
    h_algebra = session.central_algebra(h_group, z.algebra.redmap)
    parent_classes = parent.classes
    h_classes = h_group.classes
    cent_set = cent.indices
    coeffs: dict[int, FFElem] = {}
    for j in range(h_classes.num_classes):
        members = h_classes.members(j)
        values = []
        for own in members:
            parent_idx = h_sub.to_parent_index(int(own))
            if parent_idx in cent_set:
                values.append(z.coeffs.get(int(parent_classes.class_of[parent_idx])))
            else:
                values.append(None)
        first = values[0]
        for v in values[1:]:
            if (v is None) != (first is None) or (v is not None and v != first):
                raise NotClassConstant("truncated coefficients not constant on an H-class")
        if first is not None:
            coeffs[j] = first
    return h_algebra.element(coeffs)


@dataclass
class ChainBlockData:
    """b_sigma with its decomposition into blocks of the chain stabilizer."""

    central: CentralElement
    partition: BlockPartition
    constituents: tuple[Block, ...]

    @property
    def l_value(self) -> int:
        return sum(b.num_simples for b in self.constituents)


def chain_block(
    group: PermGroup,
    block: Block | CentralElement,
    chain: "Chain",
    session: Optional["Session"] = None,
) -> ChainBlockData:
    """b_sigma = Br_{P_n}(b) in kG_sigma, decomposed as a sum of its blocks."""
    from .session import get_session

    session = session or get_session()
    z = block.idempotent if isinstance(block, Block) else block
    p = z.algebra.redmap.p
    stab = chain.stabilizer()
    b_sigma = brauer_map(z, chain.top_subgroup(), stab, session=session)
    stab_group = session.group_of(stab)
    partition = session.block_partition(stab_group, p, redmap=z.algebra.redmap)
    constituents = tuple(
        b for b in partition.blocks if not (b.idempotent * b_sigma).is_zero()
    )
    total = partition.algebra.zero()
    for b in constituents:
        total = total + b.idempotent
    if total != b_sigma:
        raise DecompositionFailure("Brauer image is not a subset sum of block idempotents")
    for b in constituents:
        if b.idempotent * b_sigma != b.idempotent:
            raise DecompositionFailure("constituent not fixed by the Brauer image")
    return ChainBlockData(central=b_sigma, partition=partition, constituents=constituents)
