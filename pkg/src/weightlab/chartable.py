"""Ordinary character tables, exactly, via class-algebra eigenvector splitting.

The table is found over a prime field F_q with q = 1 (mod exp(G)) and
q > 2*sqrt(|G|), minimal: the class-sum matrices commute, their common
eigenvectors are the central characters mod q, degrees are recovered from the
orthogonality identity (unique below sqrt(|G|) because of the bound on q), and
eigenvalue multiplicities lift each character value to an exact cyclotomic
through the fixed correspondence zeta_e -> w^((q-1)/e) for the least primitive
root w mod q. Both orthogonality relations are then verified exactly before
the table is returned.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import _kernels as K
from .cyclotomic import Cyclotomic
from .errors import DecompositionFailure, DimensionMismatch
from .linalg import modq_kernel, modq_solve_matrix
from .perm import ConjClassTable, Perm, PermGroup


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for d in range(2, math.isqrt(n) + 1):
        if n % d == 0:
            return False
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def dixon_prime(order: int, exponent: int) -> int:
    """Least prime q with q = 1 (mod exponent) and q^2 > 4*order."""
    q = 1
    while True:
        q += exponent
        if q * q > 4 * order and _is_prime(q):
            return q


def _least_primitive_root(q: int) -> int:
    factors = _prime_factors(q - 1)
    for w in range(2, q):
        if all(pow(w, (q - 1) // f, q) != 1 for f in factors):
            return w
    raise DecompositionFailure(f"no primitive root mod {q}")


class ClassConstants:
    """The structure constants a_{ijk} of the class-sum basis of Z(ZG)."""

    def __init__(self, group: PermGroup):
        self.group = group
        self.classes = group.classes
        self._dense: dict[int, np.ndarray] = {}
        self._sparse: dict[tuple[int, int], dict[int, int]] | None = None

    def matrix(self, i: int) -> np.ndarray:
        """M_i[k, j] = a_{ijk}, the matrix of multiplication by class sum i."""
        if i not in self._dense:
            cl = self.classes
            self._dense[i] = K.class_matrix(
                self.group.table,
                self.group.inv,
                cl.class_of,
                cl.members(i),
                cl.rep_indices,
                cl.num_classes,
            )
        return self._dense[i]

    def value(self, i: int, j: int, k: int) -> int:
        return int(self.matrix(i)[k, j])

    @property
    def sparse(self) -> dict[tuple[int, int], dict[int, int]]:
        """(i, j) -> {k: a_{ijk}} over nonzero entries."""
        if self._sparse is None:
            out: dict[tuple[int, int], dict[int, int]] = {}
            r = self.classes.num_classes
            for i in range(r):
                m = self.matrix(i)
                ks, js = np.nonzero(m)
                for k, j in zip(ks.tolist(), js.tolist()):
                    out.setdefault((i, j), {})[k] = int(m[k, j])
            self._sparse = out
        return self._sparse


def class_algebra_constants(group: PermGroup) -> ClassConstants:
    return ClassConstants(group)


class CharacterTable:
    """All irreducible characters of a group, exact values over Q(zeta_exp)."""

    def __init__(
        self,
        group: PermGroup,
        values: list[list[Cyclotomic]],
        degrees: list[int],
    ):
        self.group = group
        self.group_key = group.canonical_key
        self.classes: ConjClassTable = group.classes
        self.exponent = group.exponent
        self.values = values
        self.degrees = degrees

    @property
    def num_irr(self) -> int:
        return len(self.values)

    def value(self, i: int, j: int) -> Cyclotomic:
        return self.values[i][j]

    def power_maps(self) -> dict[int, list[int]]:
        """For each prime s dividing the exponent, class j -> class of rep_j^s."""
        return {
            s: [self.classes.power_class(j, s) for j in range(self.classes.num_classes)]
            for s in _prime_factors(self.exponent)
        }

    def central_character(self, i: int) -> list[Cyclotomic]:
        """omega_i(j) = sizes[j] * chi_i(g_j) / chi_i(1), exact."""
        d = Fraction(self.degrees[i])
        return [
            self.values[i][j] * Fraction(self.classes.sizes[j], 1) * (1 / d)
            for j in range(self.classes.num_classes)
        ]

    def verify_orthogonality(self) -> None:
        """Exact row and column orthogonality; raises DecompositionFailure otherwise."""
        n = self.group.order
        e = self.exponent
        r = self.classes.num_classes
        sizes = self.classes.sizes
        for i in range(self.num_irr):
            for i2 in range(i, self.num_irr):
                got = _herm_dot(e, self.values[i], self.values[i2], sizes)
                want = n if i == i2 else 0
                if got != want:
                    raise DecompositionFailure(f"row orthogonality failed at ({i},{i2})")
        for j in range(r):
            for j2 in range(j, r):
                col_a = [self.values[i][j] for i in range(self.num_irr)]
                col_b = [self.values[i][j2] for i in range(self.num_irr)]
                got = _herm_dot(e, col_a, col_b, None)
                want = n // sizes[j] if j == j2 else 0
                if got != want:
                    raise DecompositionFailure(f"column orthogonality failed at ({j},{j2})")
        if sum(d * d for d in self.degrees) != n:
            raise DecompositionFailure("degree square sum mismatch")
        if any(n % d != 0 for d in self.degrees):
            raise DecompositionFailure("degree does not divide the group order")

    def to_json(self) -> dict:
        return {
            "group_key": self.group_key,
            "e": self.exponent,
            "classes": [
                {"rep_cycles": self.classes.rep(j).cycle_string(), "size": self.classes.sizes[j]}
                for j in range(self.classes.num_classes)
            ],
            "irr": [[v.to_json() for v in row] for row in self.values],
        }

    @staticmethod
    def from_json(group: PermGroup, data: dict) -> "CharacterTable":
        values = [[Cyclotomic.from_json(v) for v in row] for row in data["irr"]]
        degrees = [int(row[0].as_rational()) for row in values]
        table = CharacterTable(group, values, degrees)
        if data["group_key"] != group.canonical_key or data["e"] != group.exponent:
            raise DecompositionFailure("cached table does not match the group")
        return table


def _herm_dot(
    e: int,
    avals: Sequence[Cyclotomic],
    bvals: Sequence[Cyclotomic],
    weights: Sequence[int] | None,
) -> Cyclotomic:
    """Sum_j w_j * a_j * conj(b_j), accumulated in raw exponent space for speed."""
    raw: dict[int, Fraction] = {}
    for j, (a, b) in enumerate(zip(avals, bvals)):
        w = weights[j] if weights is not None else 1
        if not w:
            continue
        ca = a.with_conductor(e).coeffs if a.conductor != e else a.coeffs
        cb = b.with_conductor(e).coeffs if b.conductor != e else b.coeffs
        for ia, va in ca.items():
            wv = va * w
            for ib, vb in cb.items():
                k = (ia - ib) % e
                cur = raw.get(k)
                raw[k] = wv * vb if cur is None else cur + wv * vb
    return Cyclotomic(e, raw)


def schur_inner_product(
    table: CharacterTable,
    a: Sequence[Cyclotomic | int | Fraction],
    b: Sequence[Cyclotomic | int | Fraction],
) -> Cyclotomic:
    """(1/|G|) * sum_j sizes[j] * a_j * conj(b_j)."""
    r = table.classes.num_classes
    if len(a) != r or len(b) != r:
        raise DimensionMismatch("class function length mismatch")
    e = table.exponent
    av = [x if isinstance(x, Cyclotomic) else Cyclotomic.from_rational(x) for x in a]
    bv = [x if isinstance(x, Cyclotomic) else Cyclotomic.from_rational(x) for x in b]
    ec = math.lcm(e, *[v.conductor for v in av + bv])
    total = _herm_dot(ec, av, bv, table.classes.sizes)
    return total * Fraction(1, table.group.order)


def character_table(group: PermGroup) -> CharacterTable:
    """Compute the table from scratch; see the module docstring for the method."""
    classes = group.classes
    r = classes.num_classes
    n = group.order
    e = group.exponent
    if r == 1:
        table = CharacterTable(group, [[Cyclotomic.from_rational(1, 1)]], [1])
        table.verify_orthogonality()
        return table

    q = dixon_prime(n, e)
    constants = ClassConstants(group)

    # split the column space of F_q^r into common eigenlines of the M_i
    spaces: list[np.ndarray] = [np.eye(r, dtype=np.int64)]
    for i in range(1, r):
        if all(s.shape[1] == 1 for s in spaces):
            break
        m_i = constants.matrix(i) % q
        new_spaces: list[np.ndarray] = []
        for basis in spaces:
            d = basis.shape[1]
            if d == 1:
                new_spaces.append(basis)
                continue
            action = modq_solve_matrix(basis, (m_i @ basis) % q, q)
            found = 0
            for lam in range(q):
                shifted = (action - lam * np.eye(d, dtype=np.int64)) % q
                ker = modq_kernel(shifted, q)
                if ker.shape[0]:
                    new_spaces.append((basis @ ker.T) % q)
                    found += ker.shape[0]
                    if found == d:
                        break
            if found != d:
                raise DecompositionFailure("class matrix failed to split over F_q")
        spaces = new_spaces
    if any(s.shape[1] != 1 for s in spaces):
        raise DecompositionFailure("central characters not separated")

    omegas: list[np.ndarray] = []
    for basis in spaces:
        v = basis[:, 0] % q
        anchor = int(np.nonzero(v)[0][0])
        inv_anchor = pow(int(v[anchor]), -1, q)
        omega = np.empty(r, dtype=np.int64)
        omega[0] = 1
        for i in range(1, r):
            omega[i] = (int((constants.matrix(i) % q @ v)[anchor]) * inv_anchor) % q
        omegas.append(omega)

    inv_class = classes.inverse_class
    inv_sizes = [pow(classes.sizes[j], -1, q) for j in range(r)]
    degrees: list[int] = []
    for omega in omegas:
        s = 0
        for j in range(r):
            s = (s + int(omega[j]) * int(omega[inv_class[j]]) * inv_sizes[j]) % q
        target = (n * pow(s, -1, q)) % q
        d = next((d for d in range(1, math.isqrt(n) + 1) if (d * d) % q == target), None)
        if d is None:
            raise DecompositionFailure("degree recovery failed")
        degrees.append(d)

    root = _least_primitive_root(q)
    theta_cache: dict[int, tuple[int, int]] = {}

    def theta(o: int) -> tuple[int, int]:
        if o not in theta_cache:
            t = pow(root, (q - 1) // o, q)
            theta_cache[o] = (t, pow(t, -1, q))
        return theta_cache[o]

    rows: list[list[Cyclotomic]] = []
    for omega, d in zip(omegas, degrees):
        xvals = [(d * int(omega[j]) * inv_sizes[j]) % q for j in range(r)]
        row: list[Cyclotomic] = []
        for j in range(r):
            o = classes.rep_order(j)
            _, th_inv = theta(o)
            inv_o = pow(o, -1, q)
            mults: dict[int, Fraction] = {}
            total = 0
            power_classes = [classes.power_class(j, s) for s in range(o)]
            for l in range(o):
                acc = 0
                tpow = 1
                step = pow(th_inv, l, q)
                for s in range(o):
                    acc = (acc + xvals[power_classes[s]] * tpow) % q
                    tpow = (tpow * step) % q
                m_l = (acc * inv_o) % q
                if m_l:
                    if m_l > d:
                        raise DecompositionFailure("eigenvalue multiplicity out of range")
                    mults[(e // o) * l] = Fraction(m_l)
                    total += m_l
            if total != d:
                raise DecompositionFailure("eigenvalue multiplicities do not sum to the degree")
            row.append(Cyclotomic(e, mults))
        rows.append(row)

    order = sorted(range(len(rows)), key=lambda t: (degrees[t], [v.sort_key() for v in rows[t]]))
    table = CharacterTable(group, [rows[t] for t in order], [degrees[t] for t in order])
    table.verify_orthogonality()
    return table
