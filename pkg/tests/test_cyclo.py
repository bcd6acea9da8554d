import cmath
import random
from fractions import Fraction

import pytest

from weillab.cyclo import CycloNumber, cyclotomic_poly, divisors, euler_phi, zeta
from weillab.errors import NotRational


def test_divisors_and_phi():
    assert divisors(12) == [1, 2, 3, 4, 6, 12]
    assert euler_phi(1) == 1
    assert euler_phi(12) == 4
    assert euler_phi(35) == 24


def test_cyclotomic_poly_small_cases():
    assert cyclotomic_poly(1) == (-1, 1)
    assert cyclotomic_poly(2) == (1, 1)
    assert cyclotomic_poly(4) == (1, 0, 1)
    assert cyclotomic_poly(6) == (1, -1, 1)
    assert cyclotomic_poly(12) == (1, 0, -1, 0, 1)


def test_zeta_has_exact_order():
    for n in (3, 4, 5, 6, 7, 12):
        z = zeta(n, 1)
        acc = z
        for _ in range(2, n + 1):
            acc = acc * z
        assert acc == CycloNumber.from_rational(1).lift(acc.n)
        assert (z**n).as_rational() == 1
        with pytest.raises(NotRational):
            z.as_rational()


def test_geometric_sum_of_roots_vanishes():
    # 1 + zeta + ... + zeta^{n-1} = 0 for n > 1
    for n in (3, 5, 6, 12):
        total = CycloNumber.from_rational(Fraction(1))
        for k in range(1, n):
            total = total + zeta(n, k)
        assert total.is_zero()


def test_lift_preserves_value():
    z3 = zeta(3, 1)
    z6sq = zeta(6, 1) ** 2
    assert z3.lift(6) == z6sq
    assert (z3.lift(12)).embed_complex() == pytest.approx(z3.embed_complex())


def test_conjugate_and_galois():
    z = zeta(7, 1)
    assert z.conjugate() == zeta(7, 6)
    assert z.galois(3) == zeta(7, 3)
    x = zeta(5, 1) + zeta(5, 4)  # 2 cos(2 pi / 5), real
    assert x.conjugate() == x


def test_inverse_and_division():
    rng = random.Random(2)
    for _ in range(20):
        n = rng.choice((3, 4, 5, 6))
        x = CycloNumber.from_zeta_counts(
            n, {k: rng.randrange(-3, 4) for k in range(n)}
        )
        if x.is_zero():
            continue
        assert (x * x.inverse()).as_rational() == 1
        assert ((x / x)).as_rational() == 1


def test_embed_complex_matches_exp():
    for n in (3, 5, 8, 12):
        for k in range(1, n):
            got = zeta(n, k).embed_complex()
            want = cmath.exp(2j * cmath.pi * k / n)
            assert abs(got - want) < 1e-12


def test_quadratic_gauss_period_oracle():
    # zeta_3 + zeta_3^2 = -1 and (zeta_3 - zeta_3^2)^2 = -3
    z = zeta(3, 1)
    assert (z + z**2).as_rational() == -1
    assert ((z - z**2) ** 2).as_rational() == -3


def test_json_round_trip():
    rng = random.Random(8)
    for _ in range(15):
        n = rng.choice((1, 3, 6, 12))
        x = CycloNumber.from_zeta_counts(
            n, {k: Fraction(rng.randrange(-5, 6), rng.randrange(1, 4)) for k in range(n)}
        )
        assert CycloNumber.from_json(x.to_json()) == x
