"""Pure/compiled kernel parity on random inputs plus unit behaviors."""

from __future__ import annotations

import random

import numpy as np
import pytest

from weightlab._kernels import pure

try:
    from weightlab._kernels import core
except ImportError:  # pragma: no cover - compiled backend optional
    core = None

BACKENDS = [pure] + ([core] if core is not None else [])
IDS = ["pure"] + (["compiled"] if core is not None else [])


def random_gens(rng: random.Random, degree: int, count: int) -> np.ndarray:
    rows = []
    for _ in range(count):
        img = list(range(degree))
        rng.shuffle(img)
        rows.append(img)
    return np.array(rows, dtype=np.int32)


def closure_fixture(seed: int, degree: int, count: int):
    rng = random.Random(seed)
    gens = random_gens(rng, degree, count)
    elems = pure.perm_closure(gens, 10000)
    assert elems.shape[0] > 0
    table, inv = pure.mult_table(elems)
    return gens, elems, table, inv


@pytest.mark.parametrize("backend", BACKENDS, ids=IDS)
def test_perm_closure_matches_reference(backend):
    for seed in range(8):
        rng = random.Random(100 + seed)
        gens = random_gens(rng, rng.randint(3, 6), rng.randint(1, 3))
        got = backend.perm_closure(gens, 10000)
        want = pure.perm_closure(gens, 10000)
        assert got.dtype == want.dtype
        assert np.array_equal(got, want)


@pytest.mark.parametrize("backend", BACKENDS, ids=IDS)
def test_perm_closure_is_a_group(backend):
    gens = np.array([[1, 2, 3, 0], [1, 0, 2, 3]], dtype=np.int32)  # S4
    elems = backend.perm_closure(gens, 100)
    assert elems.shape == (24, 4)
    # identity first under lex sort, rows unique and closed
    assert list(elems[0]) == [0, 1, 2, 3]
    rows = {tuple(int(v) for v in r) for r in elems}
    assert len(rows) == 24
    for a in rows:
        for b in list(rows)[:5]:
            prod = tuple(a[x] for x in b)
            assert prod in rows


@pytest.mark.parametrize("backend", BACKENDS, ids=IDS)
def test_perm_closure_cap(backend):
    gens = np.array([[1, 2, 3, 0], [1, 0, 2, 3]], dtype=np.int32)
    out = backend.perm_closure(gens, 10)
    assert out.shape[0] == 0


@pytest.mark.parametrize("backend", BACKENDS, ids=IDS)
def test_mult_table_and_orders(backend):
    _, elems, ref_table, ref_inv = closure_fixture(7, 4, 2)
    table, inv = backend.mult_table(elems)
    assert np.array_equal(table, ref_table)
    assert np.array_equal(inv, ref_inv)
    orders = backend.element_orders(table)
    assert orders[0] == 1
    n = table.shape[0]
    for x in range(n):
        # x^order = identity and no smaller power is
        acc = 0
        for k in range(1, int(orders[x]) + 1):
            acc = int(table[acc, x])
            if k < int(orders[x]):
                assert acc != 0
        assert acc == 0


@pytest.mark.parametrize("backend", BACKENDS, ids=IDS)
def test_table_axioms_random(backend):
    for seed in (3, 11):
        _, elems, _, _ = closure_fixture(seed, 5, 2)
        table, inv = backend.mult_table(elems)
        n = table.shape[0]
        assert np.array_equal(table[0], np.arange(n))
        assert np.array_equal(table[:, 0], np.arange(n))
        for x in range(n):
            assert table[x, inv[x]] == 0
            assert table[inv[x], x] == 0
        rng = random.Random(seed)
        for _ in range(30):
            a, b, c = (rng.randrange(n) for _ in range(3))
            assert table[table[a, b], c] == table[a, table[b, c]]


@pytest.mark.parametrize("backend", BACKENDS, ids=IDS)
def test_subgroup_closure(backend):
    _, elems, table, inv = closure_fixture(7, 4, 2)
    n = table.shape[0]
    rng = random.Random(21)
    for _ in range(10):
        gens = np.array(sorted(rng.sample(range(n), 2)), dtype=np.int64)
        got = backend.subgroup_closure(table, gens)
        want = pure.subgroup_closure(table, gens)
        assert np.array_equal(got, want)
        members = {int(i) for i in got}
        assert 0 in members
        for a in members:
            assert int(inv[a]) in members
            for b in members:
                assert int(table[a, b]) in members
        assert n % len(members) == 0  # Lagrange


@pytest.mark.parametrize("backend", BACKENDS, ids=IDS)
def test_conj_classes_and_subset(backend):
    _, elems, table, inv = closure_fixture(5, 5, 2)
    n = table.shape[0]
    gen_idx = np.arange(n, dtype=np.int64)
    got = backend.conj_classes(table, inv, gen_idx)
    want = pure.conj_classes(table, inv, gen_idx)
    assert np.array_equal(got, want)
    # class labels are the minimal member, and classes partition the group
    for x in range(n):
        assert got[got[x]] == got[x]
        assert got[x] <= x
    rng = random.Random(5)
    sub = np.array(sorted(rng.sample(range(n), 4)), dtype=np.int64)
    for g in rng.sample(range(n), 5):
        img = backend.conj_subset(table, inv, g, sub)
        ref = [int(table[table[g, x], inv[g]]) for x in sub]
        assert sorted(int(v) for v in img) == sorted(ref)


@pytest.mark.parametrize("backend", BACKENDS, ids=IDS)
def test_centralizer_and_normalizer(backend):
    _, elems, table, inv = closure_fixture(9, 4, 2)
    n = table.shape[0]
    rng = random.Random(13)
    sub = backend.subgroup_closure(table, np.array([rng.randrange(1, n)], dtype=np.int64))
    cent = backend.centralizer_idx(table, sub)
    assert np.array_equal(cent, pure.centralizer_idx(table, sub))
    members = {int(i) for i in sub}
    for c in cent:
        for x in members:
            assert int(table[c, x]) == int(table[x, c])
    norm = backend.normalizer_idx(table, inv, sub)
    assert np.array_equal(norm, pure.normalizer_idx(table, inv, sub))
    for g in norm:
        img = {int(table[table[g, x], inv[g]]) for x in members}
        assert img == members
    assert set(int(i) for i in cent) <= set(int(i) for i in norm)


@pytest.mark.parametrize("backend", BACKENDS, ids=IDS)
def test_class_matrix_parity(backend):
    _, elems, table, inv = closure_fixture(2, 4, 3)
    n = table.shape[0]
    raw = pure.conj_classes(table, inv, np.arange(n, dtype=np.int64))
    reps = np.array(sorted(set(int(v) for v in raw)), dtype=np.int64)
    renum = np.zeros(n, dtype=np.int32)
    for j, r in enumerate(reps):
        renum[raw == r] = j
    r = len(reps)
    for i in range(r):
        members = np.flatnonzero(raw == reps[i]).astype(np.int64)
        got = backend.class_matrix(table, inv, renum, members, reps, r)
        want = pure.class_matrix(table, inv, renum, members, reps, r)
        assert np.array_equal(got, want)
        # row sums count the class size
        assert all(int(row.sum()) == len(members) for row in got)


@pytest.mark.parametrize("backend", BACKENDS, ids=IDS)
def test_extend_hom(backend):
    # S3 -> S3 by conjugation is an automorphism; sign map S3 -> C2 is onto.
    gens = np.array([[1, 2, 0], [1, 0, 2]], dtype=np.int32)
    elems = pure.perm_closure(gens, 100)
    table, inv = pure.mult_table(elems)
    c2 = pure.perm_closure(np.array([[1, 0]], dtype=np.int32), 10)
    table2, _ = pure.mult_table(c2)

    def idx(img):
        rows = {tuple(int(v) for v in r): i for i, r in enumerate(elems)}
        return rows[img]

    r3 = idx((1, 2, 0))
    t12 = idx((1, 0, 2))
    src = np.array([r3, t12], dtype=np.int64)
    # sign: 3-cycle -> 0, transposition -> 1
    img = backend.extend_hom(table, table2, src, np.array([0, 1], dtype=np.int64))
    assert img is not None
    assert set(int(v) for v in img) == {0, 1}
    # law check: mapping both generators to the flip is inconsistent for r3
    bad = backend.extend_hom(table, table2, src, np.array([1, 1], dtype=np.int64))
    assert bad is None
    # conjugation by t12 is an automorphism: send r3 -> r3^2, t12 -> t12
    r3sq = int(table[r3, r3])
    auto = backend.extend_hom(table, table, src, np.array([r3sq, t12], dtype=np.int64))
    assert auto is not None
    vals = sorted(int(v) for v in auto)
    assert vals == list(range(6))  # bijective


@pytest.mark.parametrize("backend", BACKENDS, ids=IDS)
def test_extend_hom_parity_random(backend):
    _, elems, table, inv = closure_fixture(4, 4, 2)
    n = table.shape[0]
    rng = random.Random(31)
    for _ in range(20):
        src = np.array(rng.sample(range(n), 2), dtype=np.int64)
        dst = np.array([rng.randrange(n) for _ in range(2)], dtype=np.int64)
        got = backend.extend_hom(table, table, src, dst)
        want = pure.extend_hom(table, table, src, dst)
        if want is None:
            assert got is None
        else:
            assert got is not None and np.array_equal(got, want)


def test_backend_selector(monkeypatch):
    import importlib

    import weightlab._kernels as kern

    monkeypatch.setenv("WEIGHTLAB_PURE", "1")
    mod = importlib.reload(kern)
    assert mod.BACKEND == "pure"
    monkeypatch.delenv("WEIGHTLAB_PURE")
    mod = importlib.reload(kern)
    assert mod.BACKEND in {"pure", "compiled"}
