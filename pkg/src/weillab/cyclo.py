"""Exact arithmetic in cyclotomic fields Q(zeta_n).

A CycloNumber is a rational-coefficient vector of length deg Phi_n in the
power basis 1, zeta, ..., zeta^{phi(n)-1}, reduced modulo the n-th cyclotomic
polynomial.  Mixed conductors lift eagerly to the lcm, so equality is a
coordinate comparison after a common lift.

>>> (zeta(3) + zeta(3, 2)).as_rational()
Fraction(-1, 1)
>>> (zeta(4) * zeta(4)).as_rational()
Fraction(-1, 1)
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from functools import lru_cache

from .errors import DivisionByZero, NotRational


def divisors(n: int) -> list[int]:
    out = [d for d in range(1, n + 1) if n % d == 0]
    return out


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_n, constant-first.

    >>> cyclotomic_poly(12)
    (1, 0, -1, 0, 1)
    """
    num = [-1] + [0] * (n - 1) + [1]  # x^n - 1
    for d in divisors(n):
        if d == n:
            continue
        num = _int_poly_div_exact(num, list(cyclotomic_poly(d)))
    return tuple(num)


def _int_poly_div_exact(a: list[int], b: list[int]) -> list[int]:
    # exact division by a monic integer polynomial
    a = a[:]
    out = [0] * (len(a) - len(b) + 1)
    for k in range(len(out) - 1, -1, -1):
        c = a[len(b) - 1 + k]
        out[k] = c
        if c:
            for j in range(len(b)):
                a[k + j] -= c * b[j]
    assert all(v == 0 for v in a[: len(b) - 1])
    return out


@lru_cache(maxsize=None)
def euler_phi(n: int) -> int:
    return len(cyclotomic_poly(n)) - 1


def _reduce(n: int, dense: list[Fraction]) -> tuple[Fraction, ...]:
    # fold exponents mod n, then reduce modulo Phi_n
    folded = [Fraction(0)] * n
    for i, c in enumerate(dense):
        if c:
            folded[i % n] += c
    phi = cyclotomic_poly(n)
    deg = len(phi) - 1
    for i in range(n - 1, deg - 1, -1):
        c = folded[i]
        if c:
            folded[i] = Fraction(0)
            for j in range(deg):
                folded[i - deg + j] -= c * phi[j]
    return tuple(folded[:deg])


class CycloNumber:
    __slots__ = ("n", "coords")

    def __init__(self, n: int, dense_coeffs):
        self.n = n
        cs = [c if isinstance(c, Fraction) else Fraction(c) for c in dense_coeffs]
        if len(cs) == euler_phi(n) and len(cs) < n:
            # already a reduced coordinate vector
            self.coords = tuple(cs)
        else:
            self.coords = _reduce(n, cs)

    # -- constructors -------------------------------------------------------

    @staticmethod
    def from_rational(x) -> "CycloNumber":
        return CycloNumber(1, [Fraction(x)])

    @staticmethod
    def from_zeta_counts(n: int, counts) -> "CycloNumber":
        """sum of counts[k] * zeta_n^k, counts a length-n integer vector."""
        return CycloNumber(n, [Fraction(c) for c in counts])

    # -- conductor plumbing -------------------------------------------------

    def lift(self, m: int) -> "CycloNumber":
        if m == self.n:
            return self
        assert m % self.n == 0
        step = m // self.n
        dense = [Fraction(0)] * ((len(self.coords) - 1) * step + 1 if self.coords else 1)
        for i, c in enumerate(self.coords):
            if c:
                dense[i * step] += c
        return CycloNumber(m, dense)

    def _common(self, other: "CycloNumber"):
        L = math.lcm(self.n, other.n)
        return self.lift(L), other.lift(L)

    # -- ring operations ----------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, (int, Fraction)):
            return CycloNumber.from_rational(other)
        if isinstance(other, CycloNumber):
            return other
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        a, b = self._common(other)
        return CycloNumber(a.n, [x + y for x, y in zip(a.coords, b.coords)])

    __radd__ = __add__

    def __neg__(self):
        return CycloNumber(self.n, [-c for c in self.coords])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        a, b = self._common(other)
        if not a.coords or not b.coords:
            return CycloNumber(a.n, [Fraction(0)])
        dense = [Fraction(0)] * (len(a.coords) + len(b.coords) - 1)
        for i, x in enumerate(a.coords):
            if x:
                for j, y in enumerate(b.coords):
                    if y:
                        dense[i + j] += x * y
        return CycloNumber(a.n, dense)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "CycloNumber":
        if k < 0:
            return self.inverse() ** (-k)
        result = CycloNumber.from_rational(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def inverse(self) -> "CycloNumber":
        if self.is_zero():
            raise DivisionByZero("inverse of zero cyclotomic number")
        # extended Euclid in Q[x] against Phi_n (irreducible, so gcd is constant)
        phi = [Fraction(c) for c in cyclotomic_poly(self.n)]
        a = list(self.coords)
        r0, r1 = phi, a
        t0, t1 = [Fraction(0)], [Fraction(1)]
        while any(r1):
            q, r = _frac_poly_divmod(r0, r1)
            r0, r1 = r1, r
            t0, t1 = t1, _frac_poly_sub(t0, _frac_poly_mul(q, t1))
        # r0 = gcd (a nonzero constant), t0 * a == r0 mod Phi_n
        const = next(c for c in r0 if c)
        inv_coeffs = [c / const for c in t0]
        return CycloNumber(self.n, inv_coeffs)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    # -- structure maps -----------------------------------------------------

    def conjugate(self) -> "CycloNumber":
        """Complex conjugation: zeta_n -> zeta_n^{-1}."""
        if self.n == 1:
            return self
        dense = [Fraction(0)] * self.n
        for i, c in enumerate(self.coords):
            if c:
                dense[(-i) % self.n] += c
        return CycloNumber(self.n, dense)

    def galois(self, k: int) -> "CycloNumber":
        """zeta_n -> zeta_n^k for gcd(k, n) = 1."""
        dense = [Fraction(0)] * self.n
        for i, c in enumerate(self.coords):
            if c:
                dense[(i * k) % self.n] += c
        return CycloNumber(self.n, dense)

    def as_rational(self) -> Fraction:
        if any(self.coords[1:]):
            raise NotRational(f"conductor-{self.n} value with nonconstant coordinates")
        return self.coords[0] if self.coords else Fraction(0)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def embed_complex(self) -> complex:
        z = cmath.exp(2j * cmath.pi / self.n)
        acc = 0j
        for c in reversed(self.coords):
            acc = acc * z + complex(c)
        return acc

    # -- comparisons / io ---------------------------------------------------

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        a, b = self._common(other)
        return a.coords == b.coords

    def __hash__(self):
        # hash via the minimal faithful data: lift-independent rational case first
        if not any(self.coords[1:]):
            return hash(self.coords[0] if self.coords else Fraction(0))
        return hash((self.n, self.coords))

    def __repr__(self):
        if not any(self.coords[1:]):
            return f"Cyclo({self.coords[0] if self.coords else 0})"
        terms = []
        for i, c in enumerate(self.coords):
            if c:
                terms.append(f"{c}*z{self.n}^{i}" if i else f"{c}")
        return "Cyclo(" + " + ".join(terms) + ")"

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "coords": [[str(c.numerator), str(c.denominator)] for c in self.coords],
        }

    @staticmethod
    def from_json(obj: dict) -> "CycloNumber":
        coords = [Fraction(int(num), int(den)) for num, den in obj["coords"]]
        return CycloNumber(obj["n"], coords)


def zeta(n: int, k: int = 1) -> CycloNumber:
    dense = [Fraction(0)] * (max(k % n, 0) + 1)
    dense[k % n] = Fraction(1)
    return CycloNumber(n, dense)


def _frac_poly_divmod(a, b):
    a = a[:]
    while a and a[-1] == 0:
        a.pop()
    bb = b[:]
    while bb and bb[-1] == 0:
        bb.pop()
    if not bb:
        raise DivisionByZero("polynomial division by zero")
    if len(a) < len(bb):
        return [Fraction(0)], a
    out = [Fraction(0)] * (len(a) - len(bb) + 1)
    inv = 1 / bb[-1]
    for k in range(len(out) - 1, -1, -1):
        c = a[len(bb) - 1 + k] * inv
        out[k] = c
        if c:
            for j in range(len(bb)):
                a[k + j] -= c * bb[j]
    rem = a[: len(bb) - 1]
    while rem and rem[-1] == 0:
        rem.pop()
    return out, rem if rem else [Fraction(0)]


def _frac_poly_mul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _frac_poly_sub(a, b):
    n = max(len(a), len(b))
    out = []
    for i in range(n):
        x = a[i] if i < len(a) else Fraction(0)
        y = b[i] if i < len(b) else Fraction(0)
        out.append(x - y)
    return out
