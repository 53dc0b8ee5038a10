"""Finite fields F_{p^m} and the reduction map from cyclotomic values.

A field is F_p[x]/(f) with f a deterministically chosen irreducible factor of
the e'-th cyclotomic polynomial mod p (lexicographically least coefficient
sequence by default). The residue class of x is then a primitive e'-th root of
unity, which fixes once and for all where every p-regular root of unity lands;
p-power roots of unity reduce to 1.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable

from .cyclotomic import Cyclotomic, cyclotomic_polynomial
from .errors import NotPIntegral
from .perm import p_part_split


def _poly_trim(p: list[int]) -> list[int]:
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def _poly_mul_mod(a: list[int], b: list[int], p: int) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca:
            for j, cb in enumerate(b):
                out[i + j] = (out[i + j] + ca * cb) % p
    return _poly_trim(out)


def _poly_divmod_mod(num: list[int], den: list[int], p: int) -> tuple[list[int], list[int]]:
    num = list(num)
    den = _poly_trim(list(den))
    if len(num) < len(den):
        return [0], _poly_trim(num)
    inv_lead = pow(den[-1], -1, p)
    out = [0] * (len(num) - len(den) + 1)
    for shift in range(len(num) - len(den), -1, -1):
        q = (num[shift + len(den) - 1] * inv_lead) % p
        out[shift] = q
        if q:
            for i, c in enumerate(den):
                num[shift + i] = (num[shift + i] - q * c) % p
    return _poly_trim(out), _poly_trim(num)


def _poly_gcd_mod(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _poly_trim(list(a)), _poly_trim(list(b))
    while b != [0]:
        _, r = _poly_divmod_mod(a, b, p)
        a, b = b, r
    if a != [0]:
        inv = pow(a[-1], -1, p)
        a = [(c * inv) % p for c in a]
    return a


def _poly_pow_mod(base: list[int], k: int, modulus: list[int], p: int) -> list[int]:
    result = [1]
    base = _poly_divmod_mod(base, modulus, p)[1]
    while k:
        if k & 1:
            result = _poly_divmod_mod(_poly_mul_mod(result, base, p), modulus, p)[1]
        base = _poly_divmod_mod(_poly_mul_mod(base, base, p), modulus, p)[1]
        k >>= 1
    return result


def _iter_test_polys(p: int, max_degree: int) -> Iterable[list[int]]:
    """All nonconstant polynomials of degree < max_degree in lex order, indefinitely extended."""
    degree = 1
    while True:
        for code in range(p ** degree):
            coeffs = []
            c = code
            for _ in range(degree):
                coeffs.append(c % p)
                c //= p
            yield coeffs + [1]
        degree += 1
        if degree > max_degree + 2:
            raise RuntimeError("equal-degree factorization exhausted its test polynomials")


def _equal_degree_factor(poly: list[int], m: int, p: int) -> list[list[int]]:
    """Split a squarefree product of degree-m irreducibles into its factors, deterministically."""
    if len(poly) - 1 == m:
        return [poly]
    for h in _iter_test_polys(p, len(poly) - 1):
        if p == 2:
            # trace splitter: T(h) = h + h^2 + ... + h^(2^(m-1)) mod poly
            t = [0]
            cur = _poly_divmod_mod(h, poly, p)[1]
            for _ in range(m):
                t = _poly_trim([(a + b) % p for a, b in
                                zip(t + [0] * (len(cur) - len(t)), cur + [0] * (len(t) - len(cur)))])
                cur = _poly_divmod_mod(_poly_mul_mod(cur, cur, p), poly, p)[1]
            g = _poly_gcd_mod(t, poly, p)
        else:
            powed = _poly_pow_mod(h, (p ** m - 1) // 2, poly, p)
            powed[0] = (powed[0] - 1) % p
            g = _poly_gcd_mod(powed, poly, p)
        if len(g) > 1 and len(g) < len(poly):
            rest = _poly_divmod_mod(poly, g, p)[0]
            return _equal_degree_factor(g, m, p) + _equal_degree_factor(rest, m, p)
    raise RuntimeError("unreachable")


def cyclotomic_factor_mod(e_prime: int, p: int) -> list[tuple[int, ...]]:
    """Irreducible factors of Phi_{e'} mod p, sorted lex on coefficient sequence."""
    assert math.gcd(e_prime, p) == 1
    poly = [c % p for c in cyclotomic_polynomial(e_prime)]
    m = 1
    while pow(p, m, e_prime) != 1 % e_prime:
        m += 1
    factors = _equal_degree_factor(_poly_trim(poly), m, p)
    return sorted(tuple(f) for f in factors)


class FF:
    """The field F_{p^m} presented as F_p[x]/(modulus)."""

    def __init__(self, p: int, modulus: tuple[int, ...]):
        self.p = p
        self.m = len(modulus) - 1
        self.modulus = modulus
        # rewrite table: _red[k - m] = coefficients of x^k mod modulus, m <= k <= 2m-2
        self._red: list[tuple[int, ...]] = []
        cur = [(-c) % p for c in modulus[:-1]]
        for _ in range(self.m - 1):
            self._red.append(tuple(cur))
            shifted = [0] + cur
            top = shifted[self.m]
            cur = shifted[: self.m]
            if top:
                cur = [(a + top * b) % p for a, b in zip(cur, self._red[0])]
        self._red.append(tuple(cur))
        self.zero = FFElem(self, (0,) * self.m)
        self.one = FFElem(self, (1,) + (0,) * (self.m - 1))

    def elem(self, coords: Iterable[int]) -> "FFElem":
        c = tuple(int(v) % self.p for v in coords)
        assert len(c) == self.m
        return FFElem(self, c)

    def from_int(self, n: int) -> "FFElem":
        return FFElem(self, (n % self.p,) + (0,) * (self.m - 1))

    def gen(self) -> "FFElem":
        """The class of x."""
        if self.m == 1:
            return self.from_int(-self.modulus[0])
        return FFElem(self, (0, 1) + (0,) * (self.m - 2))

    @property
    def order(self) -> int:
        return self.p ** self.m

    def signature(self) -> tuple:
        return (self.p, self.m, self.modulus)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FF) and self.signature() == other.signature()

    def __hash__(self) -> int:
        return hash(self.signature())

    def __repr__(self) -> str:
        return f"FF(p={self.p}, m={self.m})"


class FFElem:
    __slots__ = ("field", "coords")

    def __init__(self, field: FF, coords: tuple[int, ...]):
        self.field = field
        self.coords = coords

    def __add__(self, other: "FFElem") -> "FFElem":
        p = self.field.p
        return FFElem(self.field, tuple((a + b) % p for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "FFElem") -> "FFElem":
        p = self.field.p
        return FFElem(self.field, tuple((a - b) % p for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "FFElem":
        p = self.field.p
        return FFElem(self.field, tuple((-a) % p for a in self.coords))

    def __mul__(self, other: "FFElem") -> "FFElem":
        f = self.field
        p, m = f.p, f.m
        if m == 1:
            return FFElem(f, ((self.coords[0] * other.coords[0]) % p,))
        prod = [0] * (2 * m - 1)
        for i, a in enumerate(self.coords):
            if a:
                for j, b in enumerate(other.coords):
                    prod[i + j] = (prod[i + j] + a * b) % p
        out = prod[:m]
        for k in range(m, 2 * m - 1):
            c = prod[k]
            if c:
                row = f._red[k - m]
                out = [(x + c * y) % p for x, y in zip(out, row)]
        return FFElem(f, tuple(out))

    def inverse(self) -> "FFElem":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero field element")
        # xgcd of coords against the modulus
        p = self.field.p
        r0 = list(self.field.modulus)
        r1 = _poly_trim(list(self.coords))
        s0, s1 = [0], [1]
        while r1 != [0]:
            q, rem = _poly_divmod_mod(r0, r1, p)
            r0, r1 = r1, rem
            prod = _poly_mul_mod(q, s1, p)
            s0, s1 = s1, _poly_trim([(a - b) % p for a, b in
                                     zip(s0 + [0] * max(0, len(prod) - len(s0)),
                                         prod + [0] * max(0, len(s0) - len(prod)))])
        inv_const = pow(r0[0], -1, p)
        coeffs = [(c * inv_const) % p for c in s0]
        coeffs += [0] * (self.field.m - len(coeffs))
        return FFElem(self.field, tuple(coeffs[: self.field.m]))

    def __pow__(self, k: int) -> "FFElem":
        if k < 0:
            return self.inverse() ** (-k)
        result = self.field.one
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def frobenius(self) -> "FFElem":
        return self ** self.field.p

    def multiplicative_order(self) -> int:
        if self.is_zero():
            raise ZeroDivisionError("zero has no multiplicative order")
        cur, k = self, 1
        while cur != self.field.one:
            cur = cur * self
            k += 1
        return k

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FFElem) and self.coords == other.coords and self.field == other.field

    def __hash__(self) -> int:
        return hash(self.coords)

    def to_json(self) -> list[int]:
        return list(self.coords)

    def __repr__(self) -> str:
        return f"FFElem{self.coords}"


class RedMap:
    """Reduction Q(zeta) -> F_{p^m}: p-power roots to 1, zeta_{e'} to a fixed root."""

    def __init__(self, e_prime: int, p: int, field: FF, zeta_image: "FFElem", factor_index: int):
        self.e_prime = e_prime
        self.p = p
        self.field = field
        self.zeta_image = zeta_image
        self.factor_index = factor_index
        self._pows = [field.one]
        for _ in range(e_prime - 1):
            self._pows.append(self._pows[-1] * zeta_image)

    def reduce(self, value: Cyclotomic | Fraction | int) -> FFElem:
        if not isinstance(value, Cyclotomic):
            return self.reduce_fraction(Fraction(value))
        e = value.conductor
        e_p, e_q = p_part_split(e, self.p)
        if self.e_prime % e_q != 0:
            raise ValueError(f"conductor {e} not compatible with reduction modulus e'={self.e_prime}")
        scale = self.e_prime // e_q
        inv_ep = pow(e_p % e_q, -1, e_q) if e_q > 1 else 0
        out = self.field.zero
        for i, coeff in value.coeffs.items():
            # zeta_e^i = zeta_{e_p}^(..) * zeta_{e_q}^(i * inv(e_p) mod e_q); p-part -> 1
            exp = (i * inv_ep) % e_q if e_q > 1 else 0
            out = out + self._pows[exp * scale] * self.reduce_fraction(coeff)
        return out

    def reduce_fraction(self, q: Fraction) -> FFElem:
        if q.denominator % self.p == 0:
            raise NotPIntegral(f"denominator of {q} divisible by {self.p}")
        num = self.field.from_int(q.numerator % self.p)
        den = self.field.from_int(q.denominator % self.p)
        return num * den.inverse()

    def signature(self) -> tuple:
        return (self.p, self.e_prime, self.field.modulus, self.factor_index)


def build_redmap(e_prime: int, p: int, factor_index: int = 0) -> RedMap:
    """Deterministic reduction map with modulus the chosen factor of Phi_{e'} mod p."""
    if math.gcd(e_prime, p) != 1:
        raise ValueError("e' must be coprime to p")
    factors = cyclotomic_factor_mod(e_prime, p)
    modulus = factors[factor_index % len(factors)]
    field = FF(p, modulus)
    zeta_image = field.gen()
    return RedMap(e_prime, p, field, zeta_image, factor_index % len(factors))


def reduce_mod_p(value: Cyclotomic | Fraction | int, redmap: RedMap) -> FFElem:
    """Ring homomorphism on p-integral cyclotomics (see RedMap.reduce)."""
    return redmap.reduce(value)
