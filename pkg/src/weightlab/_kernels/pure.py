"""Pure-Python kernel backend.

Mirrors the compiled backend in weightlab._kernels.core: same function names,
same argument and result conventions. All permutations are int32 image rows
(perm[i] = image of point i), element sets are lex-sorted so the identity sits
at index 0, and group structure is passed around as a dense multiplication
table of element indices.
"""

from __future__ import annotations

import numpy as np

BACKEND = "pure"


def perm_closure(gens: np.ndarray, cap: int) -> np.ndarray:
    """Return all products of the generator perms, lex-sorted; -1 row count on cap."""
    k, d = gens.shape
    ident = tuple(range(d))
    seen = {ident}
    gen_rows = [tuple(int(v) for v in row) for row in gens]
    frontier = [ident]
    while frontier:
        nxt = []
        for w in frontier:
            for g in gen_rows:
                prod = tuple(g[x] for x in w)
                if prod not in seen:
                    if len(seen) >= cap:
                        return np.empty((0, d), dtype=np.int32)
                    seen.add(prod)
                    nxt.append(prod)
        frontier = nxt
    return np.array(sorted(seen), dtype=np.int32)


def mult_table(elems: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Dense index table[a, b] = index of elems[a] o elems[b], plus inverse indices."""
    n, d = elems.shape
    lookup = {row.tobytes(): i for i, row in enumerate(elems)}
    table = np.empty((n, n), dtype=np.int32)
    for a in range(n):
        composed = np.ascontiguousarray(elems[a][elems], dtype=np.int32)
        table[a] = [lookup[row.tobytes()] for row in composed]
    inv = np.empty(n, dtype=np.int32)
    rows, cols = np.nonzero(table == 0)
    inv[rows] = cols.astype(np.int32)
    return table, inv


def element_orders(table: np.ndarray) -> np.ndarray:
    n = table.shape[0]
    orders = np.zeros(n, dtype=np.int32)
    orders[0] = 1
    for a in range(1, n):
        cur, k = a, 1
        while cur != 0:
            cur = int(table[cur, a])
            k += 1
        orders[a] = k
    return orders


def subgroup_closure(table: np.ndarray, gen_idx: np.ndarray) -> np.ndarray:
    """Indices of the subgroup generated by gen_idx, sorted ascending."""
    seen = {0}
    gens = [int(g) for g in gen_idx]
    frontier = [0]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                b = int(table[a, g])
                if b not in seen:
                    seen.add(b)
                    nxt.append(b)
                c = int(table[g, a])
                if c not in seen:
                    seen.add(c)
                    nxt.append(c)
        frontier = nxt
    return np.array(sorted(seen), dtype=np.int32)


def conj_classes(table: np.ndarray, inv: np.ndarray, gen_idx: np.ndarray) -> np.ndarray:
    """class_of[x] = smallest element index in the conjugacy class of x."""
    n = table.shape[0]
    class_of = np.full(n, -1, dtype=np.int32)
    gens = [(int(g), int(inv[g])) for g in gen_idx]
    for x in range(n):
        if class_of[x] >= 0:
            continue
        orbit = [x]
        class_of[x] = x
        while orbit:
            y = orbit.pop()
            for g, gi in gens:
                z = int(table[table[g, y], gi])
                if class_of[z] < 0:
                    class_of[z] = x
                    orbit.append(z)
    return class_of


def conj_subset(table: np.ndarray, inv: np.ndarray, g: int, sub_idx: np.ndarray) -> np.ndarray:
    """Sorted indices of g S g^-1."""
    out = table[table[g, sub_idx], int(inv[g])]
    out.sort()
    return out.astype(np.int32)


def centralizer_idx(table: np.ndarray, sub_idx: np.ndarray) -> np.ndarray:
    """Indices of all elements commuting with every member of sub_idx."""
    left = table[:, sub_idx]
    right = table[sub_idx, :].T
    mask = (left == right).all(axis=1)
    return np.nonzero(mask)[0].astype(np.int32)


def normalizer_idx(table: np.ndarray, inv: np.ndarray, sub_idx: np.ndarray) -> np.ndarray:
    """Indices of all elements g with g S g^-1 = S."""
    n = table.shape[0]
    member = np.zeros(n, dtype=bool)
    member[sub_idx] = True
    conj = table[table[:, sub_idx], inv[:, None]]
    mask = member[conj].all(axis=1)
    return np.nonzero(mask)[0].astype(np.int32)


def class_matrix(
    table: np.ndarray,
    inv: np.ndarray,
    class_of: np.ndarray,
    members_i: np.ndarray,
    reps: np.ndarray,
    r: int,
) -> np.ndarray:
    """Matrix M[k, j] = #{x in class i : class(x^-1 z_k) = j} of class-sum multiplication."""
    t = table[np.ix_(inv[members_i], reps)]
    j = class_of[t]
    m = np.zeros((len(reps), r), dtype=np.int64)
    for k in range(len(reps)):
        m[k] = np.bincount(j[:, k], minlength=r)
    return m


def extend_hom(
    table_src: np.ndarray,
    table_dst: np.ndarray,
    src_gens: np.ndarray,
    dst_imgs: np.ndarray,
) -> np.ndarray | None:
    """Extend gen -> image assignments to a homomorphism on the generated subgroup.

    Returns the image array img (img[x] = image index, -1 outside the subgroup
    the given generators produce) or None on any conflict. The extension is
    forced, img[a*b] = img[a]*img[b], propagated from the identity and the
    generators; on success the homomorphism law is verified on every pair of
    reached elements, so a non-None result is a certified morphism from the
    generated subgroup. Injectivity is the caller's business.
    """
    n = table_src.shape[0]
    img = np.full(n, -1, dtype=np.int32)
    img[0] = 0
    known = [0]
    for g, h in zip(src_gens, dst_imgs):
        g, h = int(g), int(h)
        if img[g] >= 0:
            if img[g] != h:
                return None
            continue
        img[g] = h
        known.append(g)
    frontier = list(known)
    while frontier:
        new: list[int] = []
        for a in frontier:
            ia = int(img[a])
            for b in known:
                for x, ix in ((int(table_src[a, b]), int(table_dst[ia, img[b]])),
                              (int(table_src[b, a]), int(table_dst[img[b], ia]))):
                    cur = int(img[x])
                    if cur < 0:
                        img[x] = ix
                        new.append(x)
                    elif cur != ix:
                        return None
        known.extend(new)
        frontier = new
    reached = np.array(sorted(known), dtype=np.int32)
    sub_img = img[reached]
    if not (table_dst[np.ix_(sub_img, sub_img)] == img[table_src[np.ix_(reached, reached)]]).all():
        return None
    return img
