import random

import pytest

from weillab.errors import EvenCharacteristic, NonPrime, Reducible
from weillab.ff import (
    Field,
    Fq,
    MPoly,
    Poly,
    Tower,
    companion_matrix,
    enumeration_budget,
    mat_trace,
    poly_pow_mod,
)

F3 = Field(3, 1)
F7 = Field(7, 1)
F9 = Field(3, 2)
F9B = Field(3, 2, (2, 2, 1))
F25 = Field(5, 2)


def test_field_rejects_bad_parameters():
    with pytest.raises(EvenCharacteristic):
        Field(2, 1)
    with pytest.raises(NonPrime):
        Field(9, 1)
    with pytest.raises(Reducible):
        Field(3, 2, (1, 1, 1))  # x^2 + x + 1 = (x - 1)^2 over F_3
    with pytest.raises(Reducible):
        Field(3, 2, (2, 0, 2))  # not monic


def test_field_sizes_and_interning():
    assert F9.size == 9
    assert F25.size == 25
    assert Field(3, 2) is F9
    assert F9B is not F9


def test_fermat_little_all_elements():
    for field in (F3, F9, F9B, F25):
        q = field.size
        for x in field.elements():
            assert x**q == x


def test_inverses_and_division():
    for field in (F9, F25):
        for x in field.elements():
            if x.is_zero():
                continue
            assert (x * x.inverse()) == field.element(1)


def test_frobenius_is_additive_and_multiplicative():
    rng = random.Random(11)
    for _ in range(60):
        a = F25.from_index(rng.randrange(25))
        b = F25.from_index(rng.randrange(25))
        assert (a + b) ** 5 == a**5 + b**5
        assert (a * b) ** 5 == a**5 * b**5


def test_poly_gcd_oracles():
    # gcd(x^3 - x, 3x^2 - 1) = 1 over F_7: f is square-free
    f = Poly.from_ints(F7, [0, -1, 0, 1])
    assert f.gcd(f.derivative()).degree == 0
    assert f.is_squarefree()
    # x^3 + x^2 = x^2 (x + 1) shares the double root x = 0 with f'
    g = Poly.from_ints(F7, [0, 0, 1, 1])
    assert g.gcd(g.derivative()).degree == 1
    assert not g.is_squarefree()


def test_poly_ring_identities_random():
    rng = random.Random(5)
    for _ in range(40):
        a = Poly.from_ints(F7, [rng.randrange(7) for _ in range(rng.randrange(1, 6))])
        b = Poly.from_ints(F7, [rng.randrange(7) for _ in range(rng.randrange(1, 6))])
        c = Poly.from_ints(F7, [rng.randrange(7) for _ in range(rng.randrange(1, 6))])
        assert a * (b + c) == a * b + a * c
        if not b.is_zero():
            quo, rem = divmod(a * b + c, b)
            assert quo * b + rem == a * b + c
            assert rem.is_zero() or rem.degree < b.degree


def test_poly_pow_mod_matches_repeated_multiplication():
    rng = random.Random(7)
    mod = Poly.from_ints(F7, [1, 0, 0, 1])
    for _ in range(20):
        base = Poly.from_ints(F7, [rng.randrange(7) for _ in range(3)])
        n = rng.randrange(1, 40)
        acc = Poly.from_ints(F7, [1])
        for _ in range(n):
            acc = (acc * base) % mod
        assert poly_pow_mod(base, n, mod) == acc


def test_tower_trace_against_direct_frobenius_sum():
    # Tr_{F_81/F_3}(x) = x + x^3 + x^9 + x^27
    tower = Tower(F3, 4)
    top = tower.top
    for i in range(81):
        x = top.from_index(i)
        tr = x + x**3 + x**9 + x**27
        assert tower.embed(tower.trace(x)) == tr


def test_tower_embed_is_a_ring_homomorphism():
    tower = Tower(F9, 3)
    rng = random.Random(3)
    for _ in range(30):
        a = F9.from_index(rng.randrange(9))
        b = F9.from_index(rng.randrange(9))
        assert tower.embed(a + b) == tower.embed(a) + tower.embed(b)
        assert tower.embed(a * b) == tower.embed(a) * tower.embed(b)


def test_subfield_trace_rows_kernel_membership():
    # rows for m = 2 must vanish exactly on ker Tr_{F_81/F_9} = ker(x + x^9)
    tower = Tower(F3, 4)
    top = tower.top
    rows = tower.subfield_trace_rows(2)
    for i in range(81):
        x = top.from_index(i)
        digits = list(x.coeffs)
        in_row_kernel = all(
            sum(r * c for r, c in zip(row, digits)) % 3 == 0 for row in rows
        )
        assert in_row_kernel == (x + x**9).is_zero()


def test_companion_matrix_kills_its_polynomial():
    f = Poly.from_ints(F7, [3, 1, 0, 1]).monic()
    B = companion_matrix(f)
    fB = f.evaluate_matrix(B)
    assert all(all(c.is_zero() for c in row) for row in fB)
    assert mat_trace(B, F7) == -f.coeffs[2]


def test_mpoly_evaluate_matches_term_expansion():
    rng = random.Random(19)
    F = MPoly.from_ints(F3, 2, {(2, 0): 1, (0, 2): 1, (1, 1): 2})
    for _ in range(20):
        x = F3.from_index(rng.randrange(3))
        y = F3.from_index(rng.randrange(3))
        assert F.evaluate((x, y)) == x * x + y * y + F3.element(2) * x * y


def test_enumeration_budget_env_override(monkeypatch):
    monkeypatch.setenv("WEILLAB_BUDGET", "12345")
    assert enumeration_budget() == 12345
    monkeypatch.setenv("WEILLAB_BUDGET", "bogus")
    assert enumeration_budget() == 10**9
    monkeypatch.delenv("WEILLAB_BUDGET")
    assert enumeration_budget() == 10**9
