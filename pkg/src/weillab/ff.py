"""Finite fields F_{p^e} with odd p, extension towers, and exact polynomial tools.

Elements are coordinate vectors over F_p in the power basis of a monic
irreducible modulus.  The canonical index of an element with coordinates
(c_0, ..., c_{e-1}) is sum(c_i * p^i); enumeration follows that order.
When no modulus is supplied, the lexicographically first monic irreducible
(ordered by that same index of the non-leading coefficients) is used, so
field constructions are reproducible.
"""

from __future__ import annotations

import math
import os
from functools import lru_cache

from .errors import (
    BudgetExceeded,
    DivisionByZero,
    EvenCharacteristic,
    FieldMismatch,
    NonPrime,
    NotInBaseImage,
    Reducible,
    TableLimitExceeded,
    ZeroPolynomial,
)

DLOG_TABLE_LIMIT = 1 << 20
EMBED_SEARCH_LIMIT = 1 << 20
DEFAULT_ENUM_BUDGET = 10**9


def enumeration_budget() -> int:
    """Cap on field elements any single operation may enumerate.

    Overridable through the WEILLAB_BUDGET environment variable; a bad
    value falls back to the default rather than erroring.
    """
    raw = os.environ.get("WEILLAB_BUDGET")
    if raw is None:
        return DEFAULT_ENUM_BUDGET
    try:
        return int(raw)
    except ValueError:
        return DEFAULT_ENUM_BUDGET


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


# ---------------------------------------------------------------------------
# dense polynomial arithmetic over F_p on plain int tuples (internal)

def _ptrim(c: list[int]) -> tuple[int, ...]:
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _pmulmod(a, b, mod, p):
    # mod is monic, given with leading 1 included
    n = len(mod) - 1
    res = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                res[i + j] = (res[i + j] + ai * bj) % p
    for i in range(len(res) - 1, n - 1, -1):
        c = res[i]
        if c:
            res[i] = 0
            for j in range(n):
                res[i - n + j] = (res[i - n + j] - c * mod[j]) % p
    return _ptrim(res[:n] if len(res) > n else res)


def _ppowmod(a, k, mod, p):
    result = (1,)
    base = a
    while k:
        if k & 1:
            result = _pmulmod(result, base, mod, p)
        base = _pmulmod(base, base, mod, p)
        k >>= 1
    return result


def _pgcd(a, b, p):
    a, b = tuple(a), tuple(b)
    while b:
        # a mod b with b made monic on the fly
        inv = pow(b[-1], p - 2, p)
        r = list(a)
        while len(r) >= len(b) and any(r):
            if r[-1] == 0:
                r.pop()
                continue
            c = (r[-1] * inv) % p
            off = len(r) - len(b)
            for j in range(len(b)):
                r[off + j] = (r[off + j] - c * b[j]) % p
            r.pop()
        a, b = b, _ptrim(r)
    return a


def _is_irreducible(mod: tuple[int, ...], p: int) -> bool:
    # mod monic of degree e >= 1 over F_p: x^(p^e) == x mod g, and
    # gcd(x^(p^(e/l)) - x, g) = 1 for every prime l | e
    e = len(mod) - 1
    if e == 1:
        return True
    x = (0, 1)
    xq = _ppowmod(x, p**e, mod, p)
    if xq != x:
        return False
    for ell in prime_factors(e):
        t = _ppowmod(x, p ** (e // ell), mod, p)
        diff = list(t) + [0] * max(0, 2 - len(t))
        diff[1] = (diff[1] - 1) % p
        g = _pgcd(mod, _ptrim(diff), p)
        if len(g) != 1:
            return False
    return True


class Fq:
    """Element of a Field, held as a coordinate tuple over F_p."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: Field, coeffs: tuple[int, ...]):
        self.field = field
        self.coeffs = coeffs

    def _check(self, other) -> Fq:
        if isinstance(other, int):
            return self.field.element(other % self.field.p)
        if not isinstance(other, Fq):
            return NotImplemented
        if other.field is not self.field:
            raise FieldMismatch(f"elements of {self.field} and {other.field}")
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return NotImplemented
        p = self.field.p
        return Fq(self.field, tuple((a + b) % p for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        p = self.field.p
        return Fq(self.field, tuple((-a) % p for a in self.coeffs))

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return NotImplemented
        p = self.field.p
        return Fq(self.field, tuple((a - b) % p for a, b in zip(self.coeffs, other.coeffs)))

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return NotImplemented
        f = self.field
        return Fq(f, f._mul(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def inverse(self) -> Fq:
        if self.is_zero():
            raise DivisionByZero("inverse of zero")
        return self ** (self.field.q - 2)

    def __truediv__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int) -> Fq:
        f = self.field
        if k < 0:
            return self.inverse() ** (-k)
        result = f.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def frobenius(self) -> Fq:
        return self**self.field.p

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def __eq__(self, other):
        if isinstance(other, int):
            return self == self.field.element(other % self.field.p)
        return isinstance(other, Fq) and self.field is other.field and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((id(self.field), self.coeffs))

    def __repr__(self):
        return f"Fq({self.field.p}^{self.field.e}:{list(self.coeffs)})"


class Field:
    """F_{p^e} = F_p[u]/(modulus).  Instances are interned on (p, e, modulus)
    so equal constructions share identity."""

    _cache: dict[tuple, "Field"] = {}

    def __new__(cls, p: int, e: int, modulus=None):
        if p == 2:
            raise EvenCharacteristic("p = 2 is excluded (odd characteristic assumed throughout)")
        if not is_prime(p):
            raise NonPrime(f"p = {p}")
        if e < 1:
            raise ValueError("e must be positive")
        if modulus is None:
            modulus = cls._search_modulus(p, e)
        else:
            modulus = tuple(c % p for c in modulus)
            if len(modulus) != e + 1 or modulus[-1] != 1:
                raise Reducible(f"modulus must be monic of degree {e}")
            if not _is_irreducible(modulus, p):
                raise Reducible(f"modulus {list(modulus)} is reducible over F_{p}")
        key = (p, e, modulus)
        if key in cls._cache:
            return cls._cache[key]
        self = super().__new__(cls)
        self.p = p
        self.e = e
        self.q = p**e
        self.modulus = modulus
        self._gen_cache = None
        cls._cache[key] = self
        return self

    def __init__(self, p: int, e: int, modulus=None):
        pass  # fully built in __new__ (interning)

    @staticmethod
    def _search_modulus(p: int, e: int) -> tuple[int, ...]:
        if e == 1:
            return (0, 1)
        for idx in range(p**e):
            low = []
            k = idx
            for _ in range(e):
                low.append(k % p)
                k //= p
            cand = tuple(low) + (1,)
            if _is_irreducible(cand, p):
                return cand
        raise Reducible(f"no irreducible of degree {e} over F_{p}")  # pragma: no cover

    def _mul(self, a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
        e, p = self.e, self.p
        if e == 1:
            return ((a[0] * b[0]) % p,)
        res = [0] * (2 * e - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    res[i + j] += ai * bj
        mod = self.modulus
        for i in range(2 * e - 2, e - 1, -1):
            c = res[i] % p
            if c:
                for j in range(e):
                    res[i - e + j] -= c * mod[j]
        return tuple(res[i] % p for i in range(e))

    @property
    def size(self) -> int:
        return self.p**self.e

    def element(self, value) -> Fq:
        if isinstance(value, Fq):
            if value.field is not self:
                raise FieldMismatch("element from another field")
            return value
        if isinstance(value, int):
            c = [0] * self.e
            c[0] = value % self.p
            return Fq(self, tuple(c))
        coeffs = tuple(int(v) % self.p for v in value)
        if len(coeffs) != self.e:
            raise ValueError(f"need {self.e} coordinates")
        return Fq(self, coeffs)

    def zero(self) -> Fq:
        return self.element(0)

    def one(self) -> Fq:
        return self.element(1)

    def gen_u(self) -> Fq:
        # the residue class of x; equals 1 in a prime field only if e = 1 is handled by callers
        c = [0] * self.e
        if self.e == 1:
            c[0] = 1
        else:
            c[1] = 1
        return Fq(self, tuple(c))

    def from_index(self, idx: int) -> Fq:
        c = []
        for _ in range(self.e):
            c.append(idx % self.p)
            idx //= self.p
        return Fq(self, tuple(c))

    def index(self, a: Fq) -> int:
        idx = 0
        for c in reversed(a.coeffs):
            idx = idx * self.p + c
        return idx

    def elements(self):
        for idx in range(self.q):
            yield self.from_index(idx)

    def random_element(self, rng) -> Fq:
        return self.from_index(rng.randrange(self.q))

    def trace_to_prime(self, a: Fq) -> int:
        acc = a
        cur = a
        for _ in range(self.e - 1):
            cur = cur.frobenius()
            acc = acc + cur
        if any(acc.coeffs[1:]):
            raise NotInBaseImage("trace left the prime field")  # pragma: no cover
        return acc.coeffs[0]

    def frobenius_matrix(self) -> list[list[int]]:
        # columns are the coordinates of (u^i)^p; rows/cols over F_p
        K, p = self.e, self.p
        cols = []
        u_p = _ppowmod((0, 1), p, self.modulus, p) if K > 1 else (1,)
        cur = (1,)
        for _ in range(K):
            cols.append(tuple(cur) + (0,) * (K - len(cur)))
            cur = _pmulmod(cur, u_p, self.modulus, p) if K > 1 else cur
        return [[cols[j][i] for j in range(K)] for i in range(K)]

    def mult_generator(self):
        """Smallest element (canonical index order) of multiplicative order q-1,
        plus a dense discrete-log table indexed by element index."""
        if self._gen_cache is not None:
            return self._gen_cache
        if self.q - 1 > DLOG_TABLE_LIMIT:
            raise TableLimitExceeded(f"q - 1 = {self.q - 1} exceeds dlog table limit")
        facs = prime_factors(self.q - 1)
        g = None
        for idx in range(1, self.q):
            cand = self.from_index(idx)
            if all((cand ** ((self.q - 1) // ell)) != self.one() for ell in facs):
                g = cand
                break
        assert g is not None
        table = [None] * self.q
        cur = self.one()
        for k in range(self.q - 1):
            table[self.index(cur)] = k
            cur = cur * g
        self._gen_cache = (g, table)
        return self._gen_cache

    def dlog(self, a: Fq) -> int:
        if a.is_zero():
            raise DivisionByZero("dlog of zero")
        _, table = self.mult_generator()
        return table[self.index(a)]

    def __repr__(self):
        return f"F_{self.p}^{self.e}"


# ---------------------------------------------------------------------------
# matrices over a Field (dense, small)

def mat_identity(field: Field, n: int):
    return [[field.one() if i == j else field.zero() for j in range(n)] for i in range(n)]


def mat_mul(A, B, field: Field):
    n, m, k = len(A), len(B[0]), len(B)
    Z = field.zero()
    out = [[Z] * m for _ in range(n)]
    for i in range(n):
        Ai = A[i]
        row = out[i]
        for t in range(k):
            a = Ai[t]
            if a.is_zero():
                continue
            Bt = B[t]
            for j in range(m):
                row[j] = row[j] + a * Bt[j]
    return out


def mat_add(A, B):
    return [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_scalar(A, c: Fq):
    return [[a * c for a in row] for row in A]


def mat_pow(A, k: int, field: Field):
    n = len(A)
    R = mat_identity(field, n)
    B = A
    while k:
        if k & 1:
            R = mat_mul(R, B, field)
        B = mat_mul(B, B, field)
        k >>= 1
    return R


def mat_trace(A, field: Field) -> Fq:
    t = field.zero()
    for i in range(len(A)):
        t = t + A[i][i]
    return t


def mat_det(A, field: Field) -> Fq:
    n = len(A)
    M = [row[:] for row in A]
    det = field.one()
    for col in range(n):
        piv = None
        for r in range(col, n):
            if not M[r][col].is_zero():
                piv = r
                break
        if piv is None:
            return field.zero()
        if piv != col:
            M[col], M[piv] = M[piv], M[col]
            det = -det
        det = det * M[col][col]
        inv = M[col][col].inverse()
        for r in range(col + 1, n):
            if M[r][col].is_zero():
                continue
            factor = M[r][col] * inv
            for c in range(col, n):
                M[r][c] = M[r][c] - factor * M[col][c]
    return det


def companion_matrix(g: Poly):
    """Companion matrix of a monic polynomial (ones on the subdiagonal,
    minus the low coefficients in the last column); its characteristic
    polynomial is g itself."""
    if g.degree < 1 or not g.is_monic():
        raise ValueError("companion matrix needs a monic polynomial of degree >= 1")
    F = g.field
    m = g.degree
    C = [[F.zero() for _ in range(m)] for _ in range(m)]
    for i in range(1, m):
        C[i][i - 1] = F.one()
    for i in range(m):
        C[i][m - 1] = -g.coeff(i)
    return C


def kronecker_product(A, B, field: Field):
    n, m = len(A), len(B)
    out = [[field.zero()] * (n * m) for _ in range(n * m)]
    for i in range(n):
        for j in range(n):
            a = A[i][j]
            if a.is_zero():
                continue
            for k in range(m):
                for l in range(m):
                    out[i * m + k][j * m + l] = a * B[k][l]
    return out


def char_poly_matrix(A, field: Field) -> "Poly":
    """Characteristic polynomial det(T*I - A), monic, by Hessenberg reduction."""
    n = len(A)
    H = [row[:] for row in A]
    for j in range(n - 2):
        piv = None
        for i in range(j + 1, n):
            if not H[i][j].is_zero():
                piv = i
                break
        if piv is None:
            continue
        if piv != j + 1:
            H[j + 1], H[piv] = H[piv], H[j + 1]
            for r in range(n):
                H[r][j + 1], H[r][piv] = H[r][piv], H[r][j + 1]
        inv = H[j + 1][j].inverse()
        for i in range(j + 2, n):
            if H[i][j].is_zero():
                continue
            factor = H[i][j] * inv
            for k in range(n):
                H[i][k] = H[i][k] - factor * H[j + 1][k]
            for k in range(n):
                H[k][j + 1] = H[k][j + 1] + factor * H[k][i]
    one = Poly(field, (field.one(),))
    T = Poly(field, (field.zero(), field.one()))
    ps = [one]
    for m in range(1, n + 1):
        term = (T - Poly.constant(field, H[m - 1][m - 1])) * ps[m - 1]
        prod = field.one()
        for i in range(m - 1, 0, -1):
            prod = prod * H[i][i - 1]
            coef = H[i - 1][m - 1] * prod
            if not coef.is_zero():
                term = term - Poly.constant(field, coef) * ps[i - 1]
        ps.append(term)
    return ps[n]


# ---------------------------------------------------------------------------
# univariate polynomials over a Field

class Poly:
    """Univariate polynomial; coeffs constant-first, trailing zeros trimmed."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: Field, coeffs):
        cs = list(coeffs)
        while cs and cs[-1].is_zero():
            cs.pop()
        self.field = field
        self.coeffs = tuple(cs)

    @staticmethod
    def from_ints(field: Field, ints) -> "Poly":
        return Poly(field, [field.element(c) for c in ints])

    @staticmethod
    def constant(field: Field, c: Fq) -> "Poly":
        return Poly(field, (c,))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    def is_zero(self) -> bool:
        return not self.coeffs

    def leading(self) -> Fq:
        if self.is_zero():
            raise ZeroPolynomial("leading coefficient of 0")
        return self.coeffs[-1]

    def coeff(self, i: int) -> Fq:
        return self.coeffs[i] if i < len(self.coeffs) else self.field.zero()

    def is_monic(self) -> bool:
        return not self.is_zero() and self.leading() == self.field.one()

    def monic(self) -> "Poly":
        if self.is_zero():
            raise ZeroPolynomial("cannot normalize 0")
        inv = self.leading().inverse()
        return Poly(self.field, [c * inv for c in self.coeffs])

    def __eq__(self, other):
        return isinstance(other, Poly) and self.field is other.field and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((id(self.field), self.coeffs))

    def __add__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(self.field, [self.coeff(i) + other.coeff(i) for i in range(n)])

    def __sub__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(self.field, [self.coeff(i) - other.coeff(i) for i in range(n)])

    def __neg__(self):
        return Poly(self.field, [-c for c in self.coeffs])

    def __mul__(self, other):
        if self.is_zero() or other.is_zero():
            return Poly(self.field, ())
        Z = self.field.zero()
        res = [Z] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                res[i + j] = res[i + j] + a * b
        return Poly(self.field, res)

    def __divmod__(self, other: "Poly"):
        if other.is_zero():
            raise ZeroPolynomial("division by the zero polynomial")
        rem = list(self.coeffs)
        qd = self.degree - other.degree
        if qd < 0:
            return Poly(self.field, ()), self
        inv = other.leading().inverse()
        quo = [self.field.zero()] * (qd + 1)
        for k in range(qd, -1, -1):
            c = rem[other.degree + k] * inv
            quo[k] = c
            if not c.is_zero():
                for j, b in enumerate(other.coeffs):
                    rem[k + j] = rem[k + j] - c * b
        return Poly(self.field, quo), Poly(self.field, rem)

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def evaluate(self, x: Fq) -> Fq:
        acc = self.field.zero()
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def evaluate_matrix(self, A):
        n = len(A)
        acc = [[self.field.zero()] * n for _ in range(n)]
        for c in reversed(self.coeffs):
            acc = mat_mul(acc, A, self.field)
            for i in range(n):
                acc[i][i] = acc[i][i] + c
        return acc

    def derivative(self) -> "Poly":
        return Poly(self.field, [self.coeffs[i] * i for i in range(1, len(self.coeffs))])

    def compose(self, inner: "Poly") -> "Poly":
        acc = Poly(self.field, ())
        for c in reversed(self.coeffs):
            acc = acc * inner + Poly.constant(self.field, c)
        return acc

    def gcd(self, other: "Poly") -> "Poly":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        if a.is_zero():
            return a
        return a.monic()

    def is_squarefree(self) -> bool:
        d = self.derivative()
        if d.is_zero():
            return self.degree <= 0
        return self.gcd(d).degree == 0

    def to_ints(self) -> list[list[int]]:
        return [list(c.coeffs) for c in self.coeffs]

    def __repr__(self):
        return f"Poly({self.field}, {self.to_ints()})"


def poly_pow_mod(base: Poly, k: int, mod: Poly) -> Poly:
    field = base.field
    result = Poly(field, (field.one(),))
    b = base % mod
    while k:
        if k & 1:
            result = (result * b) % mod
        b = (b * b) % mod
        k >>= 1
    return result


def resultant(f: Poly, g: Poly) -> Fq:
    """Sylvester-matrix resultant over the coefficient field."""
    field = f.field
    if f.is_zero() or g.is_zero():
        raise ZeroPolynomial("resultant with the zero polynomial")
    m, n = f.degree, g.degree
    if m == 0:
        return f.coeffs[0] ** n
    if n == 0:
        return g.coeffs[0] ** m
    size = m + n
    Z = field.zero()
    rows = []
    fc = list(reversed(f.coeffs))
    gc = list(reversed(g.coeffs))
    for i in range(n):
        rows.append([Z] * i + fc + [Z] * (size - m - 1 - i))
    for i in range(m):
        rows.append([Z] * i + gc + [Z] * (size - n - 1 - i))
    return mat_det(rows, field)


def discriminant(g: Poly) -> Fq:
    field = g.field
    n = g.degree
    if n <= 0:
        return field.one()  # vacuous: no root pairs
    d = g.derivative()
    if d.is_zero():
        return field.zero()
    sign = field.element(-1) ** ((n * (n - 1)) // 2)
    return sign * resultant(g, d) / g.leading()


# ---------------------------------------------------------------------------
# towers F_q subset F_{q^s}

class Tower:
    """F_{q^s} realized as the F_p-extension of degree e*s with an explicit
    embedding of the base field (image of the base modulus root)."""

    _cache: dict[tuple, "Tower"] = {}

    def __new__(cls, base: Field, s: int, top: Field | None = None):
        key = (id(base), s, id(top) if top is not None else None)
        if key in cls._cache:
            return cls._cache[key]
        self = super().__new__(cls)
        cls._cache[key] = self
        return self

    def __init__(self, base: Field, s: int, top: Field | None = None):
        if getattr(self, "_ready", False):
            return
        self.base = base
        self.s = s
        self.top = top if top is not None else Field(base.p, base.e * s)
        if self.top.p != base.p or self.top.e != base.e * s:
            raise FieldMismatch("top field has the wrong degree")
        K, e, p = self.top.e, base.e, base.p
        if e == 1:
            root = self.top.one()
        else:
            if self.top.q > EMBED_SEARCH_LIMIT:
                raise BudgetExceeded("embedding root search beyond cap")
            basemod = Poly.from_ints(self.top, [c for c in base.modulus])
            root = None
            for cand in self.top.elements():
                if basemod.evaluate(cand).is_zero():
                    root = cand
                    break
            if root is None:  # pragma: no cover - e | K guarantees a root
                raise NotInBaseImage("no root of base modulus in top field")
        self.root = root
        cols = []
        cur = self.top.one()
        for _ in range(e):
            cols.append(cur.coeffs)
            cur = cur * root
        self._emb_cols = cols  # e columns of length K
        self._section = self._left_inverse(cols, K, e, p)
        self._frob = None
        self._ready = True

    @staticmethod
    def _left_inverse(cols, K, e, p):
        # rows of R (e x K) with R * E = I_e, by Gauss-Jordan on [E | I]
        aug = [[cols[j][i] for j in range(e)] + [0] * K for i in range(K)]
        for i in range(K):
            aug[i][e + i] = 1
        row = 0
        pivots = []
        for col in range(e):
            piv = None
            for r in range(row, K):
                if aug[r][col] % p:
                    piv = r
                    break
            assert piv is not None
            aug[row], aug[piv] = aug[piv], aug[row]
            inv = pow(aug[row][col], p - 2, p)
            aug[row] = [(v * inv) % p for v in aug[row]]
            for r in range(K):
                if r != row and aug[r][col] % p:
                    c = aug[r][col]
                    aug[r] = [(aug[r][j] - c * aug[row][j]) % p for j in range(e + K)]
            pivots.append(row)
            row += 1
        return [aug[pivots[i]][e:] for i in range(e)]

    def embed(self, a: Fq) -> Fq:
        if a.field is not self.base:
            raise FieldMismatch("element not in the tower base")
        p, K = self.base.p, self.top.e
        out = [0] * K
        for j, aj in enumerate(a.coeffs):
            if aj:
                col = self._emb_cols[j]
                for i in range(K):
                    out[i] = (out[i] + aj * col[i]) % p
        return Fq(self.top, tuple(out))

    def base_coords(self, a: Fq) -> Fq:
        """Pull an element of the embedded base field back to base coordinates."""
        if a.field is not self.top:
            raise FieldMismatch("element not in the tower top")
        p, e = self.base.p, self.base.e
        c = tuple(sum(r * x for r, x in zip(row, a.coeffs)) % p for row in self._section)
        back = self.embed(Fq(self.base, c))
        if back.coeffs != a.coeffs:
            raise NotInBaseImage("element lies outside the embedded base field")
        return Fq(self.base, c)

    def frobenius_matrix(self):
        if self._frob is None:
            self._frob = self.top.frobenius_matrix()
        return self._frob

    def _trace_matrix(self, step: int, count: int):
        # sum of Frobenius^(step*j) for j < count, as a K x K matrix over F_p
        p, K = self.base.p, self.top.e
        F = self.frobenius_matrix()
        Fs = _int_mat_pow(F, step, p)
        acc = [[1 if i == j else 0 for j in range(K)] for i in range(K)]
        total = [row[:] for row in acc]
        for _ in range(count - 1):
            acc = _int_mat_mul(acc, Fs, p)
            total = [[(a + b) % p for a, b in zip(ra, rb)] for ra, rb in zip(total, acc)]
        return total

    def trace(self, a: Fq) -> Fq:
        """Tr_{F_{q^s}/F_q}(a) = a + a^q + ... + a^{q^{s-1}}, in base coordinates."""
        if a.field is not self.top:
            raise FieldMismatch("element not in the tower top")
        acc = a
        cur = a
        for _ in range(self.s - 1):
            cur = cur**self.base.q
            acc = acc + cur
        return self.base_coords(acc)

    def trace_rows_to_base(self):
        """e x K matrix over F_p sending top coordinates to the base coordinates
        of the relative trace.  Row i gives base coordinate c_i."""
        T = self._trace_matrix(self.base.e, self.s)
        p = self.base.p
        K = self.top.e
        rows = []
        for srow in self._section:
            rows.append(tuple(sum(srow[k] * T[k][j] for k in range(K)) % p for j in range(K)))
        return rows

    def subfield_trace_rows(self, m: int):
        """Row basis (over F_p) of the map y -> Tr_{F_{q^s}/F_{q^m}}(y); the
        kernel test 'all rows vanish' decides trace-zero.  Requires m | s."""
        if self.s % m:
            raise FieldMismatch("m must divide s")
        T = self._trace_matrix(self.base.e * m, self.s // m)
        return _row_reduce_int(T, self.base.p)


def _int_mat_mul(A, B, p):
    n = len(A)
    m = len(B[0])
    k = len(B)
    out = [[0] * m for _ in range(n)]
    for i in range(n):
        Ai = A[i]
        row = out[i]
        for t in range(k):
            a = Ai[t]
            if a:
                Bt = B[t]
                for j in range(m):
                    row[j] = (row[j] + a * Bt[j]) % p
    return out


def _int_mat_pow(A, k, p):
    n = len(A)
    R = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    B = [row[:] for row in A]
    while k:
        if k & 1:
            R = _int_mat_mul(R, B, p)
        B = _int_mat_mul(B, B, p)
        k >>= 1
    return R


def _row_reduce_int(M, p):
    rows = [list(r) for r in M]
    n = len(rows)
    cols = len(rows[0]) if n else 0
    rank_rows = []
    r = 0
    for c in range(cols):
        piv = None
        for i in range(r, n):
            if rows[i][c] % p:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][c], p - 2, p)
        rows[r] = [(v * inv) % p for v in rows[r]]
        for i in range(n):
            if i != r and rows[i][c] % p:
                f = rows[i][c]
                rows[i] = [(rows[i][j] - f * rows[r][j]) % p for j in range(cols)]
        r += 1
        if r == n:
            break
    return [tuple(rows[i]) for i in range(r)]


# ---------------------------------------------------------------------------
# multivariate polynomials (small, dense-enough dict form)

class MPoly:
    """Polynomial in n variables: {exponent tuple: coefficient}."""

    __slots__ = ("field", "n", "terms")

    def __init__(self, field: Field, n: int, terms: dict):
        self.field = field
        self.n = n
        self.terms = {tuple(k): v for k, v in terms.items() if not v.is_zero()}

    @staticmethod
    def from_ints(field: Field, n: int, terms: dict) -> "MPoly":
        return MPoly(field, n, {tuple(k): field.element(v) for k, v in terms.items()})

    @property
    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(k) for k in self.terms)

    def evaluate(self, point) -> Fq:
        field = self.field
        acc = field.zero()
        pows = []
        for i, x in enumerate(point):
            di = max((k[i] for k in self.terms), default=0)
            col = [field.one()]
            for _ in range(di):
                col.append(col[-1] * x)
            pows.append(col)
        for k, c in self.terms.items():
            t = c
            for i, ki in enumerate(k):
                if ki:
                    t = t * pows[i][ki]
            acc = acc + t
        return acc

    def partial(self, i: int) -> "MPoly":
        out = {}
        for k, c in self.terms.items():
            if k[i] == 0:
                continue
            nk = list(k)
            nk[i] -= 1
            nc = c * k[i]
            if not nc.is_zero():
                out[tuple(nk)] = out.get(tuple(nk), self.field.zero()) + nc
        return MPoly(self.field, self.n, out)

    def leading_form(self) -> "MPoly":
        d = self.total_degree
        return MPoly(self.field, self.n, {k: c for k, c in self.terms.items() if sum(k) == d})

    def binary_dehomogenize(self) -> Poly:
        """For n = 2: the univariate h(x) = F(x, 1) of the leading form F."""
        if self.n != 2:
            raise ValueError("binary form check needs n = 2")
        F = self.leading_form()
        d = F.total_degree
        coeffs = [self.field.zero()] * (d + 1)
        for (a, b), c in F.terms.items():
            coeffs[a] = coeffs[a] + c
        return Poly(self.field, coeffs)

    def __repr__(self):
        return f"MPoly({self.field}, n={self.n}, {{{', '.join(str(k) + ': ' + str(list(v.coeffs)) for k, v in sorted(self.terms.items()))}}})"


# ---------------------------------------------------------------------------
# JSON schema: {"p": int, "e": int, "modulus": [int...], "coeffs": [[int...]...]}

def field_to_json(field: Field) -> dict:
    return {"p": field.p, "e": field.e, "modulus": list(field.modulus)}


def field_from_json(obj: dict) -> Field:
    return Field(obj["p"], obj["e"], tuple(obj["modulus"]) if obj.get("modulus") else None)


def poly_to_json(f: Poly) -> dict:
    out = field_to_json(f.field)
    out["coeffs"] = f.to_ints()
    return out


def poly_from_json(obj: dict) -> Poly:
    field = field_from_json(obj)
    return Poly(field, [field.element(c) for c in obj["coeffs"]])
