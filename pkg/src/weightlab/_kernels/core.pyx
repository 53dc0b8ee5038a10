# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernel backend.

Mirrors weightlab._kernels.pure: same function names, same argument and
result conventions, same element ordering. Anything returned here must be
indistinguishable from the pure backend's output.
"""

import numpy as np

BACKEND = "compiled"


def perm_closure(gens, int cap):
    """Return all products of the generator perms, lex-sorted; empty on cap."""
    gens = np.ascontiguousarray(gens, dtype=np.int32)
    cdef int k = gens.shape[0]
    cdef int d = gens.shape[1]
    cdef int[:, :] g = gens
    cdef int i, j
    ident = np.arange(d, dtype=np.int32)
    seen = {ident.tobytes()}
    rows = [ident]
    frontier = [ident]
    cdef int[:] w
    cdef int[:] pv
    while frontier:
        nxt = []
        for w_arr in frontier:
            w = w_arr
            for i in range(k):
                prod = np.empty(d, dtype=np.int32)
                pv = prod
                for j in range(d):
                    pv[j] = g[i, w[j]]
                key = prod.tobytes()
                if key not in seen:
                    if len(rows) >= cap:
                        return np.empty((0, d), dtype=np.int32)
                    seen.add(key)
                    rows.append(prod)
                    nxt.append(prod)
        frontier = nxt
    out = np.array(rows, dtype=np.int32)
    order = np.lexsort(out[:, ::-1].T)
    return np.ascontiguousarray(out[order])


def mult_table(elems):
    """Dense index table[a, b] = index of elems[a] o elems[b], plus inverses."""
    elems = np.ascontiguousarray(elems, dtype=np.int32)
    cdef int n = elems.shape[0]
    cdef int d = elems.shape[1]
    cdef int[:, :] e = elems
    lookup = {bytes(elems[i].tobytes()): i for i in range(n)}
    table = np.empty((n, n), dtype=np.int32)
    cdef int[:, :] t = table
    cdef int a, b, j
    row = np.empty(d, dtype=np.int32)
    cdef int[:] rv = row
    for a in range(n):
        for b in range(n):
            for j in range(d):
                rv[j] = e[a, e[b, j]]
            t[a, b] = lookup[row.tobytes()]
    inv = np.empty(n, dtype=np.int32)
    cdef int[:] iv = inv
    for a in range(n):
        for b in range(n):
            if t[a, b] == 0:
                iv[a] = b
                break
    return table, inv


def element_orders(table):
    cdef int[:, :] t = table
    cdef int n = t.shape[0]
    orders = np.zeros(n, dtype=np.int32)
    cdef int[:] o = orders
    cdef int a, cur, k
    o[0] = 1
    for a in range(1, n):
        cur = a
        k = 1
        while cur != 0:
            cur = t[cur, a]
            k += 1
        o[a] = k
    return orders


def subgroup_closure(table, gen_idx):
    """Indices of the subgroup generated by gen_idx, sorted ascending."""
    cdef int[:, :] t = table
    cdef int n = t.shape[0]
    gen_arr = np.ascontiguousarray(gen_idx, dtype=np.int32)
    cdef int[:] gens = gen_arr
    cdef int ng = gens.shape[0]
    member = np.zeros(n, dtype=np.int8)
    cdef signed char[:] m = member
    cdef int a, b, c, i, head
    stack = [0]
    m[0] = 1
    while stack:
        a = stack.pop()
        for i in range(ng):
            b = t[a, gens[i]]
            if not m[b]:
                m[b] = 1
                stack.append(b)
            c = t[gens[i], a]
            if not m[c]:
                m[c] = 1
                stack.append(c)
    return np.nonzero(member)[0].astype(np.int32)


def conj_classes(table, inv, gen_idx):
    """class_of[x] = smallest element index in the conjugacy class of x."""
    cdef int[:, :] t = table
    cdef int[:] iv = inv
    cdef int n = t.shape[0]
    gen_arr = np.ascontiguousarray(gen_idx, dtype=np.int32)
    cdef int[:] gens = gen_arr
    cdef int ng = gens.shape[0]
    class_of = np.full(n, -1, dtype=np.int32)
    cdef int[:] co = class_of
    cdef int x, y, z, i, g
    for x in range(n):
        if co[x] >= 0:
            continue
        co[x] = x
        orbit = [x]
        while orbit:
            y = orbit.pop()
            for i in range(ng):
                g = gens[i]
                z = t[t[g, y], iv[g]]
                if co[z] < 0:
                    co[z] = x
                    orbit.append(z)
    return class_of


def conj_subset(table, inv, int g, sub_idx):
    """Sorted indices of g S g^-1."""
    cdef int[:, :] t = table
    cdef int[:] iv = inv
    sub_arr = np.ascontiguousarray(sub_idx, dtype=np.int32)
    cdef int[:] s = sub_arr
    cdef int k = s.shape[0]
    out = np.empty(k, dtype=np.int32)
    cdef int[:] ov = out
    cdef int i, gi = iv[g]
    for i in range(k):
        ov[i] = t[t[g, s[i]], gi]
    out.sort()
    return out


def centralizer_idx(table, sub_idx):
    """Indices of all elements commuting with every member of sub_idx."""
    cdef int[:, :] t = table
    cdef int n = t.shape[0]
    sub_arr = np.ascontiguousarray(sub_idx, dtype=np.int32)
    cdef int[:] s = sub_arr
    cdef int k = s.shape[0]
    cdef int x, i
    cdef bint ok
    hits = []
    for x in range(n):
        ok = True
        for i in range(k):
            if t[x, s[i]] != t[s[i], x]:
                ok = False
                break
        if ok:
            hits.append(x)
    return np.array(hits, dtype=np.int32)


def normalizer_idx(table, inv, sub_idx):
    """Indices of all elements g with g S g^-1 = S."""
    cdef int[:, :] t = table
    cdef int[:] iv = inv
    cdef int n = t.shape[0]
    sub_arr = np.ascontiguousarray(sub_idx, dtype=np.int32)
    cdef int[:] s = sub_arr
    cdef int k = s.shape[0]
    member = np.zeros(n, dtype=np.int8)
    cdef signed char[:] m = member
    cdef int x, i
    cdef bint ok
    for i in range(k):
        m[s[i]] = 1
    hits = []
    for x in range(n):
        ok = True
        for i in range(k):
            if not m[t[t[x, s[i]], iv[x]]]:
                ok = False
                break
        if ok:
            hits.append(x)
    return np.array(hits, dtype=np.int32)


def class_matrix(table, inv, class_of, members_i, reps, int r):
    """Matrix M[k, j] = #{x in class i : class(x^-1 z_k) = j}."""
    cdef int[:, :] t = table
    cdef int[:] iv = inv
    cdef int[:] co = class_of
    mem_arr = np.ascontiguousarray(members_i, dtype=np.int32)
    rep_arr = np.ascontiguousarray(reps, dtype=np.int32)
    cdef int[:] mem = mem_arr
    cdef int[:] rp = rep_arr
    cdef int nm = mem.shape[0]
    cdef int nr = rp.shape[0]
    m = np.zeros((nr, r), dtype=np.int64)
    cdef long long[:, :] mv = m
    cdef int a, k, xi
    for a in range(nm):
        xi = iv[mem[a]]
        for k in range(nr):
            mv[k, co[t[xi, rp[k]]]] += 1
    return m


def extend_hom(table_src, table_dst, src_gens, dst_imgs):
    """Extend gen -> image assignments to a verified homomorphism, or None."""
    cdef int[:, :] ts = table_src
    cdef int[:, :] td = table_dst
    cdef int n = ts.shape[0]
    img = np.full(n, -1, dtype=np.int32)
    cdef int[:] im = img
    cdef int g, h, a, b, x, ix, cur, ia, i, j
    im[0] = 0
    known = [0]
    gen_arr = np.ascontiguousarray(src_gens, dtype=np.int32)
    img_arr = np.ascontiguousarray(dst_imgs, dtype=np.int32)
    cdef int[:] sg = gen_arr
    cdef int[:] di = img_arr
    for i in range(sg.shape[0]):
        g = sg[i]
        h = di[i]
        if im[g] >= 0:
            if im[g] != h:
                return None
            continue
        im[g] = h
        known.append(g)
    frontier = list(known)
    while frontier:
        new = []
        for a in frontier:
            ia = im[a]
            for b in known:
                x = ts[a, b]
                ix = td[ia, im[b]]
                cur = im[x]
                if cur < 0:
                    im[x] = ix
                    new.append(x)
                elif cur != ix:
                    return None
                x = ts[b, a]
                ix = td[im[b], ia]
                cur = im[x]
                if cur < 0:
                    im[x] = ix
                    new.append(x)
                elif cur != ix:
                    return None
        known.extend(new)
        frontier = new
    known.sort()
    cdef int nk = len(known)
    reached = np.array(known, dtype=np.int32)
    cdef int[:] rv = reached
    for i in range(nk):
        a = rv[i]
        for j in range(nk):
            b = rv[j]
            if td[im[a], im[b]] != im[ts[a, b]]:
                return None
    return img
