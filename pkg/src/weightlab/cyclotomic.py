"""Exact cyclotomic arithmetic in Q(zeta_e), canonical power-basis representation.

Elements are sparse maps exponent -> Fraction over the basis
{zeta_e^i : 0 <= i < phi(e)}; everything above the basis degree is rewritten
through the e-th cyclotomic polynomial, so equal values always have equal
coefficient maps at a given conductor. Mixed-conductor arithmetic embeds both
sides into the lcm conductor first.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Mapping

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _poly_divmod_int(num: list[int], den: list[int]) -> tuple[list[int], list[int]]:
    """Exact division of integer polynomials (ascending coefficients)."""
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for shift in range(len(num) - len(den), -1, -1):
        lead = num[shift + len(den) - 1]
        q, r = divmod(lead, den[-1])
        assert r == 0, "non-exact cyclotomic division"
        out[shift] = q
        if q:
            for i, c in enumerate(den):
                num[shift + i] -= q * c
    while len(num) > 1 and num[-1] == 0:
        num.pop()
    return out, num


@lru_cache(maxsize=None)
def cyclotomic_polynomial(e: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_e, ascending."""
    if e == 1:
        return (-1, 1)
    poly = [0] * e + [1]
    poly[0] = -1
    for d in range(1, e):
        if e % d == 0:
            poly, rem = _poly_divmod_int(poly, list(cyclotomic_polynomial(d)))
            assert rem == [0]
    return tuple(poly)


@lru_cache(maxsize=None)
def _reduction_rows(e: int) -> dict[int, dict[int, int]]:
    """Rewrites of zeta_e^i, phi(e) <= i < e, as integer combinations of the power basis."""
    phi = len(cyclotomic_polynomial(e)) - 1
    rows: dict[int, dict[int, int]] = {}
    cur = {j: -c for j, c in enumerate(cyclotomic_polynomial(e)[:-1]) if c}
    for i in range(phi, e):
        rows[i] = dict(cur)
        shifted: dict[int, int] = {}
        for j, c in cur.items():
            shifted[j + 1] = shifted.get(j + 1, 0) + c
        top = shifted.pop(phi, 0)
        if top:
            for j, c in rows[phi].items():
                shifted[j] = shifted.get(j, 0) + top * c
        cur = {j: c for j, c in shifted.items() if c}
    return rows


def _canonical(e: int, raw: Mapping[int, Fraction]) -> dict[int, Fraction]:
    phi = len(cyclotomic_polynomial(e)) - 1
    rows = None
    out: dict[int, Fraction] = {}
    for exp, coeff in raw.items():
        if not coeff:
            continue
        exp %= e
        if exp < phi:
            out[exp] = out.get(exp, _ZERO) + coeff
        else:
            if rows is None:
                rows = _reduction_rows(e)
            for j, c in rows[exp].items():
                out[j] = out.get(j, _ZERO) + coeff * c
    return {i: c for i, c in out.items() if c}


class Cyclotomic:
    """An element of Q(zeta_e) in canonical form."""

    __slots__ = ("conductor", "coeffs")
    __hash__ = None  # type: ignore[assignment]  # equal values at different conductors

    def __init__(self, conductor: int, coeffs: Mapping[int, Fraction], *, _canon: bool = False):
        if conductor < 1:
            raise ValueError("conductor must be positive")
        self.conductor = conductor
        if _canon:
            self.coeffs = dict(coeffs)
        else:
            self.coeffs = _canonical(conductor, {i: Fraction(c) for i, c in coeffs.items()})

    @staticmethod
    def from_rational(value: Fraction | int, conductor: int = 1) -> "Cyclotomic":
        v = Fraction(value)
        return Cyclotomic(conductor, {0: v} if v else {}, _canon=True)

    @staticmethod
    def zeta(e: int, power: int = 1) -> "Cyclotomic":
        return Cyclotomic(e, {power: _ONE})

    def with_conductor(self, m: int) -> "Cyclotomic":
        """Embed into Q(zeta_m); m must be a multiple of the conductor."""
        if m == self.conductor:
            return self
        if m % self.conductor != 0:
            raise ValueError("target conductor must be a multiple")
        k = m // self.conductor
        return Cyclotomic(m, {i * k: c for i, c in self.coeffs.items()})

    def _common(self, other: "Cyclotomic") -> tuple["Cyclotomic", "Cyclotomic"]:
        m = math.lcm(self.conductor, other.conductor)
        return self.with_conductor(m), other.with_conductor(m)

    def __add__(self, other: "Cyclotomic | int | Fraction") -> "Cyclotomic":
        other = _coerce(other)
        a, b = self._common(other)
        out = dict(a.coeffs)
        for i, c in b.coeffs.items():
            s = out.get(i, _ZERO) + c
            if s:
                out[i] = s
            else:
                out.pop(i, None)
        return Cyclotomic(a.conductor, out, _canon=True)

    def __neg__(self) -> "Cyclotomic":
        return Cyclotomic(self.conductor, {i: -c for i, c in self.coeffs.items()}, _canon=True)

    def __sub__(self, other: "Cyclotomic | int | Fraction") -> "Cyclotomic":
        return self + (-_coerce(other))

    def __mul__(self, other: "Cyclotomic | int | Fraction") -> "Cyclotomic":
        other = _coerce(other)
        a, b = self._common(other)
        raw: dict[int, Fraction] = {}
        e = a.conductor
        for i, ci in a.coeffs.items():
            for j, cj in b.coeffs.items():
                k = (i + j) % e
                raw[k] = raw.get(k, _ZERO) + ci * cj
        return Cyclotomic(e, raw)

    __radd__ = __add__
    __rmul__ = __mul__

    def __rsub__(self, other: "int | Fraction") -> "Cyclotomic":
        return _coerce(other) - self

    def inverse(self) -> "Cyclotomic":
        """Multiplicative inverse via extended gcd with Phi_e."""
        if not self.coeffs:
            raise ZeroDivisionError("inverse of zero cyclotomic")
        e = self.conductor
        phi_poly = [Fraction(c) for c in cyclotomic_polynomial(e)]
        deg = len(phi_poly) - 1
        a = [self.coeffs.get(i, _ZERO) for i in range(deg)]

        def trim(p: list[Fraction]) -> list[Fraction]:
            while len(p) > 1 and not p[-1]:
                p.pop()
            return p

        # extended euclid in Q[x] tracking the coefficient of a:
        # r_i = s_i * a (mod Phi_e); Phi_e irreducible, so gcd is a constant
        r0, r1 = phi_poly, trim(a)
        s0, s1 = [_ZERO], [_ONE]
        while r1 != [_ZERO]:
            q, rem = _poly_divmod_frac(r0, r1)
            r0, r1 = r1, trim(rem)
            s0, s1 = s1, trim(_poly_sub(s0, _poly_mul(q, s1)))
        const = r0[0]
        inv_coeffs = {i: c / const for i, c in enumerate(s0) if c}
        return Cyclotomic(e, inv_coeffs)

    def __truediv__(self, other: "Cyclotomic | int | Fraction") -> "Cyclotomic":
        return self * _coerce(other).inverse()

    def conjugate(self) -> "Cyclotomic":
        """Image under zeta -> zeta^(-1) (complex conjugation on all embeddings used here)."""
        return self.galois(-1)

    def galois(self, t: int) -> "Cyclotomic":
        """Image under zeta -> zeta^t, gcd(t, e) = 1."""
        e = self.conductor
        if math.gcd(t % e, e) != 1:
            raise ValueError("not a Galois automorphism")
        return Cyclotomic(e, {(i * t) % e: c for i, c in self.coeffs.items()})

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_rational(self) -> bool:
        return set(self.coeffs) <= {0}

    def as_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("not rational")
        return self.coeffs.get(0, _ZERO)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Cyclotomic.from_rational(other)
        if not isinstance(other, Cyclotomic):
            return NotImplemented
        a, b = self._common(other)
        return a.coeffs == b.coeffs

    def sort_key(self) -> tuple:
        """Total order among values sharing a conductor (for canonical output order)."""
        return tuple(sorted(self.coeffs.items()))

    def to_json(self) -> dict:
        return {
            "conductor": self.conductor,
            "coeffs": {str(i): [c.numerator, c.denominator] for i, c in sorted(self.coeffs.items())},
        }

    @staticmethod
    def from_json(data: dict) -> "Cyclotomic":
        coeffs = {int(i): Fraction(n, d) for i, (n, d) in data["coeffs"].items()}
        return Cyclotomic(data["conductor"], coeffs)

    def __repr__(self) -> str:
        if not self.coeffs:
            return "Cyc(0)"
        parts = []
        for i, c in sorted(self.coeffs.items()):
            if i == 0:
                parts.append(str(c))
            else:
                parts.append(f"{c}*z{self.conductor}^{i}")
        return "Cyc(" + " + ".join(parts) + ")"


def _coerce(value: "Cyclotomic | int | Fraction") -> Cyclotomic:
    if isinstance(value, Cyclotomic):
        return value
    return Cyclotomic.from_rational(value)


def _poly_divmod_frac(num: list[Fraction], den: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    num = list(num)
    if len(num) < len(den):
        return [_ZERO], num
    out = [_ZERO] * (len(num) - len(den) + 1)
    for shift in range(len(num) - len(den), -1, -1):
        q = num[shift + len(den) - 1] / den[-1]
        out[shift] = q
        if q:
            for i, c in enumerate(den):
                num[shift + i] -= q * c
    return out, num


def _poly_mul(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    out = [_ZERO] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if not ca:
            continue
        for j, cb in enumerate(b):
            out[i + j] += ca * cb
    return out


def _poly_sub(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    out = list(a) + [_ZERO] * max(0, len(b) - len(a))
    for i, c in enumerate(b):
        out[i] -= c
    return out
