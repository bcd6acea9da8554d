"""Monodromy-hypothesis classification from the coefficients of f.

Critical values of f are the eigenvalues of B = f(A), A the companion
matrix of the monic normalization of f', so every criterion below is a
matrix computation over F_q: pairwise-difference tests use the char
poly of B (x) I - I (x) B, the r-fold sum hypersurface test uses the
determinant of a Kronecker sum, and quasi-oddness is a coefficient
identity.  No splitting fields are ever constructed on the main path.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import (
    BudgetExceeded,
    DegenerateDerivative,
    DegreeDivisibleByP,
    HypothesisViolation,
    MatrixTooLarge,
    NotQuasiOdd,
)
from .ff import (
    Field,
    Fq,
    MPoly,
    Poly,
    Tower,
    char_poly_matrix,
    companion_matrix,
    discriminant,
    enumeration_budget,
    kronecker_product,
    mat_add,
    mat_det,
    mat_identity,
    mat_trace,
)

KRONECKER_DIM_LIMIT = 4096
MULTIVARIATE_SEARCH_BOUND = 4


def _require_degree(f: Poly, minimum: int = 2) -> int:
    d = f.degree
    if d >= 1 and d % f.field.p == 0:
        raise DegreeDivisibleByP(f"degree {d} divisible by p = {f.field.p}")
    if d < minimum:
        raise ValueError(f"need degree >= {minimum}, got {d}")
    return d


@dataclass(frozen=True)
class CriticalData:
    """B = f(A_{f'}) and derived invariants of the critical locus."""

    B: tuple
    s: Fq
    char_poly_b: Poly
    squarefree_derivative: bool
    double_root_count: int


def critical_data(f: Poly) -> CriticalData:
    """Matrix whose eigenvalues are the critical values of f.

    s = trace(B) is their sum; the double-root count of f is the degree
    of gcd(f, f').
    """
    d = _require_degree(f)
    fp = f.derivative()
    if fp.is_zero():
        raise DegenerateDerivative("f' vanishes identically")
    B = f.evaluate_matrix(companion_matrix(fp.monic()))
    return CriticalData(
        B=tuple(tuple(row) for row in B),
        s=mat_trace(B, f.field),
        char_poly_b=char_poly_matrix(B, f.field),
        squarefree_derivative=fp.is_squarefree(),
        double_root_count=f.gcd(fp).degree,
    )


def _difference_char_poly(f: Poly) -> Poly:
    # char poly of B (x) I - I (x) B; eigenvalues are all s_i - s_j
    field = f.field
    B = [list(row) for row in critical_data(f).B]
    m = len(B)
    eye = mat_identity(field, m)
    M = mat_add(
        kronecker_product(B, eye, field),
        [[-c for c in row] for row in kronecker_product(eye, B, field)],
    )
    return char_poly_matrix(M, field)


def _strip_power_of_t(g: Poly, k: int) -> Poly:
    # exact division by T^k
    for i in range(k):
        if not g.coeff(i).is_zero():
            raise ArithmeticError("difference char poly lacks the forced T^k factor")
    return Poly(g.field, [g.coeff(i) for i in range(k, g.degree + 1)])


def sl_hypothesis(f: Poly) -> dict:
    """Pairwise-distinctness test for the critical-value differences.

    The char poly of the difference matrix is T^{d-1} g(T); the test is
    disc(g) != 0.  Requires p > 2d - 1, otherwise the verdict is left
    negative with an explanatory witness.
    """
    d = _require_degree(f)
    if f.field.p <= 2 * d - 1:
        return {"holds": False, "witness": "PrecondCharTooSmall"}
    g = _strip_power_of_t(_difference_char_poly(f), d - 1)
    disc = discriminant(g)
    return {
        "holds": not disc.is_zero(),
        "witness": f"disc(g) = {disc!r}",
    }


@dataclass(frozen=True)
class QuasiOddData:
    """Candidate symmetry data: f(a - x) = b - f(x) when is_quasi_odd."""

    a: Fq
    b: Fq
    is_quasi_odd: bool


def quasi_odd(f: Poly) -> QuasiOddData:
    """Detect the symmetry f(a - x) = b - f(x).

    The only possible candidates are a = -2 c_{d-1} / (d c_d) and
    b = 2 f(a/2); the identity is then verified coefficientwise.  Only
    odd degrees can succeed.
    """
    d = _require_degree(f, minimum=1)
    field = f.field
    dk = field.element(d % field.p)
    a = -(field.element(2) * f.coeff(d - 1)) / (dk * f.leading())
    b = field.element(2) * f.evaluate(a / field.element(2))
    lhs = f.compose(Poly(field, [a, -field.one()]))
    rhs = Poly.constant(field, b) - f
    return QuasiOddData(a=a, b=b, is_quasi_odd=(lhs == rhs))


def _monic_sqrt(Q: Poly) -> Poly | None:
    """Exact monic square root of a monic polynomial, or None."""
    field = Q.field
    if Q.degree % 2:
        return None
    m = Q.degree // 2
    half = (field.element(2)).inverse()
    g = Poly(field, [field.zero()] * m + [field.one()])
    for k in range(m - 1, -1, -1):
        cur = g * g
        delta = Q.coeff(m + k) - cur.coeff(m + k)
        if not delta.is_zero():
            mono = Poly(field, [field.zero()] * k + [delta * half])
            g = g + mono
    return g if g * g == Q else None


def sp_hypothesis(f: Poly) -> dict:
    """Symplectic-type distinctness test for quasi-odd f.

    After centering f by b/2 the difference char poly factors as
    T^{d-1} htilde(T) g(T)^2 with htilde(T) = 2^{d-1} h(T/2) the char
    poly of 2B'; the test is disc(htilde * g) != 0.
    """
    d = _require_degree(f)
    qo = quasi_odd(f)
    if not qo.is_quasi_odd:
        raise NotQuasiOdd("f is not quasi-odd")
    field = f.field
    if field.p <= 2 * d - 1:
        return {
            "holds": False,
            "bIsZero": qo.b.is_zero(),
            "witness": "PrecondCharTooSmall",
        }
    half = field.element(2).inverse()
    f0 = f - Poly.constant(field, qo.b * half)
    cd0 = critical_data(f0)
    h = cd0.char_poly_b
    # htilde = 2^{d-1} h(T/2): scale coefficient i by 2^{d-1-i}
    two = field.element(2)
    htilde = Poly(
        field, [h.coeff(i) * two ** (d - 1 - i) for i in range(d)]
    )
    chm = _strip_power_of_t(_difference_char_poly(f0), d - 1)
    quot, rem = divmod(chm, htilde)
    if not rem.is_zero():
        raise ArithmeticError("forced factor 2^{d-1} h(T/2) does not divide")
    g = _monic_sqrt(quot)
    if g is None:
        raise ArithmeticError("paired-difference factor is not a perfect square")
    disc = discriminant(htilde * g)
    return {
        "holds": not disc.is_zero(),
        "bIsZero": qo.b.is_zero(),
        "witness": f"disc(htilde*g) = {disc!r}",
    }


def sum_hypersurface_nonsingular(f: Poly, r: int) -> dict:
    """Whether f(x_1) + ... + f(x_r) = 0 is non-singular.

    Singular points correspond to r-tuples of critical values summing
    to zero, i.e. to the Kronecker sum of r copies of B being singular.
    """
    d = _require_degree(f)
    if r < 1:
        raise ValueError("r must be >= 1")
    if not f.derivative().is_squarefree():
        raise HypothesisViolation("f' must be square-free")
    dim = (d - 1) ** r
    if dim > KRONECKER_DIM_LIMIT:
        raise MatrixTooLarge(f"Kronecker sum would be {dim} x {dim}")
    field = f.field
    B = [list(row) for row in critical_data(f).B]
    m = d - 1
    total = None
    for i in range(r):
        term = mat_identity(field, m**i) if i else None
        term = B if term is None else kronecker_product(term, B, field)
        tail = r - 1 - i
        if tail:
            term = kronecker_product(term, mat_identity(field, m**tail), field)
        total = term if total is None else mat_add(total, term)
    return {"holds": not mat_det(total, field).is_zero()}


# -- decision tree --------------------------------------------------------


@dataclass(frozen=True)
class ClassificationReport:
    """Verdict bundle for one (f, r): flags, group, main term, bound."""

    q: int
    d: int
    r: int
    hypothesis_flags: dict
    monodromy_class: str
    main_term: dict
    applicable_bound: str

    def to_json(self) -> dict:
        return {
            "q": self.q,
            "d": self.d,
            "r": self.r,
            "hypothesisFlags": dict(self.hypothesis_flags),
            "monodromyClass": self.monodromy_class,
            "mainTerm": dict(self.main_term),
            "applicableBound": self.applicable_bound,
        }


def _isqrt_power(q: int, r: int) -> int:
    # q^{r/2 + 1} for even r
    return q ** (r // 2 + 1)


def classify_monodromy(f: Poly, r: int) -> ClassificationReport:
    """Decision tree over the sufficient criteria.

    Order of precedence: symplectic family (quasi-odd f), then the
    special-linear family, then the bare improved bound (r odd, or the
    sum hypersurface non-singular), else Weil only.  The shifted main
    term q^r + beta q^{r/2+1} appears exactly in the two delta-cases;
    beta is +1 when d | q - 1 in the SL case and stays unresolved
    otherwise.
    """
    if r < 1:
        raise ValueError("r must be >= 1")
    field = f.field
    q = field.size
    d = f.degree
    if d >= 1 and d % field.p == 0:
        raise DegreeDivisibleByP(f"degree {d} divisible by p = {field.p}")

    flags: dict = {
        "derivSquarefree": None,
        "slCriterion": None,
        "spCriterion": None,
        "sumHypersurfaceNonsingular": None,
        "pGreaterThan2dMinus1": field.p > 2 * d - 1,
        "dDividesQMinus1": d >= 1 and (q - 1) % d == 0,
    }
    main = {"base": q**r, "shift": 0, "beta": "none", "candidates": [q**r]}

    if d < 2:
        # linear f: N_r = q^r on the nose, nothing to classify
        return ClassificationReport(
            q=q, d=d, r=r,
            hypothesis_flags=flags,
            monodromy_class="unknown",
            main_term=main,
            applicable_bound="weilOnly",
        )

    cd = critical_data(f)
    flags["derivSquarefree"] = cd.squarefree_derivative
    if cd.squarefree_derivative and (d - 1) ** r <= KRONECKER_DIM_LIMIT:
        flags["sumHypersurfaceNonsingular"] = sum_hypersurface_nonsingular(f, r)[
            "holds"
        ]

    qo = quasi_odd(f)
    sp = None
    if qo.is_quasi_odd:
        sp = sp_hypothesis(f)
        flags["spCriterion"] = sp["holds"]
    sl = sl_hypothesis(f)
    flags["slCriterion"] = sl["holds"]

    if d == 2:
        # rank-one fibers: everything is elementary.  Completing the square
        # gives fiber eigenvalue psi(ts)rho(t a_2)g(rho,psi), so the r-th
        # moments are biased exactly when r is even and rs = 0, with pole
        # q(rho(-1)q)^{r/2}; otherwise the trivial factors vanish.
        s_zero = cd.s.is_zero()
        cls = "GL_2" if s_zero else "GL_2p"
        if r % 2 == 0 and (s_zero or r % field.p == 0):
            shift = _isqrt_power(q, r)
            sigma = 1 if (q % 4 == 1 or r % 4 == 0) else -1
            main = {
                "base": q**r,
                "shift": shift,
                "beta": "pm1-unknown",
                "candidates": [q**r - sigma * shift, q**r + sigma * shift],
            }
            bound = "cor4_2"
        else:
            bound = "theorem1_1"
        return ClassificationReport(
            q=q, d=d, r=r,
            hypothesis_flags=flags,
            monodromy_class=cls,
            main_term=main,
            applicable_bound=bound,
        )

    if not flags["pGreaterThan2dMinus1"]:
        cls = "unknown"
    elif sp is not None and sp["holds"]:
        cls = "Sp" if sp["bIsZero"] else "muP_Sp"
    elif sl["holds"]:
        s_zero = cd.s.is_zero()
        if d % 2 == 1:
            cls = "SL" if s_zero else "GL_p"
        else:
            cls = "GL_2" if s_zero else "GL_2p"
    else:
        cls = "unknown"

    if cls in ("Sp", "muP_Sp"):
        bound = "cor4_5"
        if r <= d - 1 and r % 2 == 0 and (qo.b.is_zero() or r % field.p == 0):
            shift = _isqrt_power(q, r)
            main = {
                "base": q**r,
                "shift": shift,
                "beta": "plus1",
                "candidates": [q**r + shift],
            }
    elif cls in ("SL", "GL_p", "GL_2", "GL_2p"):
        bound = "cor4_2"
        if cls == "SL" and r == d - 1:
            shift = _isqrt_power(q, r)
            if flags["dDividesQMinus1"]:
                main = {
                    "base": q**r,
                    "shift": shift,
                    "beta": "plus1",
                    "candidates": [q**r + shift],
                }
            else:
                main = {
                    "base": q**r,
                    "shift": shift,
                    "beta": "pm1-unknown",
                    "candidates": [q**r + shift, q**r - shift],
                }
    elif cd.squarefree_derivative and (
        r % 2 == 1 or flags["sumHypersurfaceNonsingular"] is True
    ):
        bound = "theorem1_1"
    else:
        bound = "weilOnly"

    return ClassificationReport(
        q=q, d=d, r=r,
        hypothesis_flags=flags,
        monodromy_class=cls,
        main_term=main,
        applicable_bound=bound,
    )


# -- multivariate semi-decisions -------------------------------------------


def _partials(F: MPoly) -> list[MPoly]:
    return [F.partial(i) for i in range(F.n)]


def _common_zeros(parts, field, n):
    pts = []
    for point in itertools.product(field.elements(), repeat=n):
        if all(P.evaluate(point).is_zero() for P in parts):
            pts.append(point)
    return pts


def _hessian_det_nonzero(F: MPoly, point, field) -> bool:
    H = [
        [F.partial(i).partial(j).evaluate(point) for j in range(F.n)]
        for i in range(F.n)
    ]
    return not mat_det(H, field).is_zero()


def multivariate_checks(F: MPoly, r: int) -> dict:
    """Semi-decision of the smoothness conditions for n >= 2 variables.

    deligne tests square-freeness of the leading form exactly for
    n = 2 and searches for singular points over F_{q^m}, m <= 4, for
    n >= 3 (so smooth verdicts degrade to "unknown").  The critical
    scheme is brute-forced over the same extensions; verdicts about its
    points are only issued when all (d-1)^n of them are found inside a
    single extension field.
    """
    if F.n < 2:
        raise ValueError("multivariate checks need n >= 2")
    base = F.field
    d = F.total_degree
    if d < 1 or d % base.p == 0:
        raise DegreeDivisibleByP(f"total degree {d} divisible by p = {base.p}")
    q = base.size

    out: dict = {}

    # Deligne: smoothness of the top-degree form at infinity
    lead = F.leading_form()
    if F.n == 2:
        g = lead.binary_dehomogenize()
        # square-free as a binary form: the dehomogenized part must be
        # square-free and y may divide at most once
        out["deligne"] = g.is_squarefree() and d - g.degree <= 1
    else:
        found = False
        for m in range(1, MULTIVARIATE_SEARCH_BOUND + 1):
            if q ** (m * F.n) > enumeration_budget():
                break
            tower = Tower(base, m)
            top = tower.top
            lifted = MPoly(top, F.n, {k: tower.embed(v) for k, v in lead.terms.items()})
            parts = _partials(lifted)
            for point in itertools.product(top.elements(), repeat=F.n):
                if all(c.is_zero() for c in point):
                    continue
                if all(P.evaluate(point).is_zero() for P in parts):
                    found = True
                    break
            if found:
                break
        out["deligne"] = False if found else "unknown"

    # critical scheme over one extension level at a time
    expected = (d - 1) ** F.n
    level_points = None
    level_field = None
    overfull = False
    for m in range(1, MULTIVARIATE_SEARCH_BOUND + 1):
        if q ** (m * F.n) > enumeration_budget():
            break
        tower = Tower(base, m)
        top = tower.top
        lifted = MPoly(top, F.n, {k: tower.embed(v) for k, v in F.terms.items()})
        pts = _common_zeros(_partials(lifted), top, F.n)
        if len(pts) > expected:
            overfull = True
            break
        if len(pts) == expected:
            level_points = pts
            level_field = top
            level_lifted = lifted
            break

    if overfull:
        out["criticalEtale"] = False
        out["distinctValues"] = "unknown"
        out["sumNonsingular"] = "unknown"
    elif level_points is None:
        out["criticalEtale"] = "unknown"
        out["distinctValues"] = "unknown"
        out["sumNonsingular"] = "unknown"
    else:
        etale = all(
            _hessian_det_nonzero(level_lifted, pt, level_field)
            for pt in level_points
        )
        out["criticalEtale"] = etale
        values = [level_lifted.evaluate(pt) for pt in level_points]
        out["distinctValues"] = len({level_field.index(v) for v in values}) == len(
            values
        )
        zero_sum = any(
            sum(combo, level_field.zero()).is_zero()
            for combo in itertools.product(values, repeat=r)
        )
        out["sumNonsingular"] = not zero_sum
    return out
