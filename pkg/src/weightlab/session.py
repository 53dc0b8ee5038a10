"""Run-wide configuration, caching, and deterministic-shuffle plumbing.

A Session interns groups by canonical key and memoizes the expensive derived
data (character tables, block partitions, p-subgroup lattices, automorphism
groups). With a cache directory set (WEIGHTLAB_CACHE or explicit config),
character tables and block partitions are also persisted as JSON; every disk
load is re-verified (orthogonality, idempotent axioms) and silently recomputed
when stale or corrupt.

The optional shuffle seed perturbs internal candidate orderings (never
reported output): reports must come out identical under any seed, which the
determinism tests exercise.
"""

from __future__ import annotations

import json
import os
import random
import tempfile
from dataclasses import dataclass, field
from typing import Any, Callable, Optional, TypeVar

from filelock import FileLock

from .chartable import CharacterTable, character_table
from .gf import RedMap, build_redmap
from .perm import (
    PermGroup,
    PSubgroupLattice,
    Subgroup,
    normalizer,
    p_part_split,
    p_subgroups,
)

T = TypeVar("T")


@dataclass
class RunConfig:
    group_cap: int = 2000
    chain_budget: int = 1_000_000
    pair_max_order: int = 64
    pair_semidirect_cap: int = 2000
    aut_cap: int = 100_000
    cache_dir: Optional[str] = None
    redmap_factor: int = 0
    shuffle_seed: Optional[int] = None

    @staticmethod
    def from_env() -> "RunConfig":
        return RunConfig(cache_dir=os.environ.get("WEIGHTLAB_CACHE") or None)


class Session:
    """Shared caches and configuration for one verification run."""

    def __init__(self, config: Optional[RunConfig] = None):
        self.config = config or RunConfig.from_env()
        self._rng = (
            random.Random(self.config.shuffle_seed)
            if self.config.shuffle_seed is not None
            else None
        )
        self._groups: dict[str, PermGroup] = {}
        self._tables: dict[str, CharacterTable] = {}
        self._redmaps: dict[tuple[int, int, int], RedMap] = {}
        self._psubs: dict[tuple[str, int], PSubgroupLattice] = {}
        self._subgroup_groups: dict[tuple[str, frozenset[int]], PermGroup] = {}
        self.extra: dict[Any, Any] = {}

    # --- determinism hook ---

    def shuffled(self, items: list[T]) -> list[T]:
        """A copy in perturbed order when a shuffle seed is configured."""
        out = list(items)
        if self._rng is not None:
            self._rng.shuffle(out)
        return out

    # --- interning ---

    def intern(self, group: PermGroup) -> PermGroup:
        key = group.canonical_key
        if key not in self._groups:
            self._groups[key] = group
        return self._groups[key]

    def group_of(self, sub: Subgroup) -> PermGroup:
        """Interned standalone group of a subgroup.

        Keyed by the parent's content digest, not ``id(parent)``: parents are
        often transient ``as_group()`` results, and a recycled object id would
        silently alias two unrelated subgroups.
        """
        cache_key = (sub.parent.canonical_key, sub.indices)
        if cache_key not in self._subgroup_groups:
            self._subgroup_groups[cache_key] = self.intern(sub.as_group())
        return self._subgroup_groups[cache_key]

    # --- derived data ---

    def char_table(self, group: PermGroup) -> CharacterTable:
        group = self.intern(group)
        key = group.canonical_key
        if key not in self._tables:
            loaded = self._disk_load(
                "chartable", key, lambda data: self._revive_table(group, data)
            )
            if loaded is None:
                loaded = character_table(group)
                self._disk_store("chartable", key, loaded.to_json())
            self._tables[key] = loaded
        return self._tables[key]

    @staticmethod
    def _revive_table(group: PermGroup, data: dict) -> CharacterTable:
        table = CharacterTable.from_json(group, data)
        table.verify_orthogonality()
        return table

    def redmap(self, p: int, e_prime: int) -> RedMap:
        key = (p, e_prime, self.config.redmap_factor)
        if key not in self._redmaps:
            self._redmaps[key] = build_redmap(e_prime, p, self.config.redmap_factor)
        return self._redmaps[key]

    def ambient_redmap(self, ambient: PermGroup, p: int) -> RedMap:
        """The reduction map fixed by a run's largest group: e' = p'-part of exp."""
        _, e_prime = p_part_split(ambient.exponent, p)
        return self.redmap(p, e_prime)

    def p_subgroup_lattice(self, group: PermGroup, p: int) -> PSubgroupLattice:
        group = self.intern(group)
        key = (group.canonical_key, p)
        if key not in self._psubs:
            self._psubs[key] = p_subgroups(group, p)
        return self._psubs[key]

    def normalizer_indices(self, group: PermGroup, member: frozenset) -> frozenset:
        """Element indices of N_G(member), memoized per (group, member)."""
        group = self.intern(group)

        def compute() -> frozenset:
            sub = Subgroup(group, member, check=False)
            return normalizer(group, sub).indices

        return self.memo(("normalizer", group.canonical_key, member), compute)

    def central_algebra(self, group: PermGroup, redmap: RedMap):
        """One Z(kG) instance per (group, reduction map), so class constants are shared."""
        from . import blocks as _blocks

        group = self.intern(group)
        return self.memo(
            ("central_algebra", group.canonical_key, redmap.signature()),
            lambda: _blocks.CentralAlgebra(group, redmap),
        )

    def block_partition(self, group: PermGroup, p: int, redmap: Optional[RedMap] = None):
        from . import blocks as _blocks

        group = self.intern(group)
        if redmap is None:
            redmap = self.ambient_redmap(group, p)
        sig = redmap.signature()
        cache_key = ("blocks", group.canonical_key, p, sig)
        if cache_key not in self.extra:
            disk_key = f"{group.canonical_key}-p{p}-m{redmap.field.m}-f{redmap.factor_index}"
            loaded = self._disk_load(
                "blocks",
                disk_key,
                lambda data: _blocks.BlockPartition.from_json(
                    self.char_table(group), redmap, data,
                    algebra=self.central_algebra(group, redmap),
                ),
            )
            if loaded is None:
                loaded = _blocks.p_blocks(group, p, redmap=redmap, session=self)
                self._disk_store("blocks", disk_key, loaded.to_json())
            self.extra[cache_key] = loaded
        return self.extra[cache_key]

    def memo(self, key: Any, compute: Callable[[], T]) -> T:
        if key not in self.extra:
            self.extra[key] = compute()
        return self.extra[key]

    # --- disk layer ---

    def _cache_path(self, kind: str, key: str) -> Optional[str]:
        if not self.config.cache_dir:
            return None
        d = os.path.join(self.config.cache_dir, kind)
        os.makedirs(d, exist_ok=True)
        return os.path.join(d, f"{key}.json")

    def _disk_load(self, kind: str, key: str, revive: Callable[[dict], T]) -> Optional[T]:
        path = self._cache_path(kind, key)
        if path is None or not os.path.exists(path):
            return None
        try:
            with open(path) as fh:
                data = json.load(fh)
            return revive(data)
        except Exception:
            try:
                os.unlink(path)
            except OSError:
                pass
            return None

    def _disk_store(self, kind: str, key: str, data: dict) -> None:
        path = self._cache_path(kind, key)
        if path is None:
            return
        lock = FileLock(path + ".lock")
        with lock:
            fd, tmp = tempfile.mkstemp(dir=os.path.dirname(path), suffix=".tmp")
            try:
                with os.fdopen(fd, "w") as fh:
                    json.dump(data, fh)
                os.replace(tmp, path)
            except BaseException:
                if os.path.exists(tmp):
                    os.unlink(tmp)
                raise


_default: Optional[Session] = None


def get_session() -> Session:
    global _default
    if _default is None:
        _default = Session()
    return _default


def set_session(session: Optional[Session]) -> None:
    global _default
    _default = session
