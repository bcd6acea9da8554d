"""End-to-end acceptance checks for the whole workbench.

One test per numbered criterion, in order, each printing a single
summary line (visible under pytest -s; under plain pytest the test
name itself is the pass/fail line).  Bound comparisons are done on
squared integers so no float ever decides a verdict; complex
embeddings appear only where a tolerance is part of the statement.
"""

import itertools
import math
import random
import time

from weillab.bounds import c_constant, verify_bound
from weillab.charsum import (
    AdditiveCharacter,
    MultiplicativeCharacter,
    count_points,
    det_frobenius_check,
    gauss_sum,
)
from weillab.classify import sum_hypersurface_nonsingular
from weillab.errors import WeillabError
from weillab.ff import Field, MPoly, Poly
from weillab.lfunction import (
    functional_equation_check,
    hodge_multiplicities,
    lfunction_pipeline,
    local_factor_infinity,
    local_factor_zero,
    power_sum,
)

F3 = Field(3, 1)
F5 = Field(5, 1)
F7 = Field(7, 1)
F9 = Field(3, 2)
F11 = Field(11, 1)
F13 = Field(13, 1)


def _report(n: int, t0: float, detail: str) -> None:
    print(f"criterion {n:2d}: PASS ({detail}) [{time.time() - t0:.1f}s]")


def _monic_polys(field: Field, d: int):
    one = field.one()
    for tail in itertools.product(field.elements(), repeat=d):
        yield Poly(field, list(tail) + [one])


def _univariate_agreement_configs():
    # every monic f in the counting domain (degree prime to p), d <= 4,
    # over q in {3, 5}, paired with r <= 2
    for q in (3, 5):
        field = Field(q, 1)
        for d in range(2, 5):
            if d % field.p == 0:
                continue
            for f in _monic_polys(field, d):
                for r in (1, 2):
                    yield f, r


def _cubic_sweep_configs():
    # exhaustive monic cubics over F_5; r = 2 only where the two-variable
    # sum hypersurface is nonsingular (a square-free derivative is part
    # of that hypothesis, so a raise counts as not passing)
    for f in _monic_polys(F5, 3):
        for r in (1, 2, 3):
            if r == 2:
                try:
                    if not sum_hypersurface_nonsingular(f, 2)["holds"]:
                        continue
                except WeillabError:
                    continue
            yield f, r


def _symmetric_cubic_configs():
    for field in (F7, F11, F13):
        yield Poly.from_ints(field, [0, -1, 0, 1]), 2


def test_criterion_01_deviation_constant_closed_forms():
    t0 = time.time()
    for d in range(2, 11):
        assert c_constant(d, 1) == d - 1
        assert c_constant(d, 2) == (d - 1) ** 2
        assert c_constant(d, 3) == (d - 1) * (d * d - 3 * d + 3)
    _report(1, t0, "r <= 3 closed forms for d = 2..10, exact")


def test_criterion_02_first_count_is_q_times_root_number():
    t0 = time.time()
    polys = 0
    for q in (3, 5, 7, 9):
        field = F9 if q == 9 else Field(q, 1)
        elems = list(field.elements())
        for d in range(2, 6):
            if d % field.p == 0:
                continue
            for f in _monic_polys(field, d):
                N = count_points(f, 1, method="traceKernel").N
                n_f = sum(1 for x in elems if f.evaluate(x).is_zero())
                assert N == q * n_f
                assert (N - q) ** 2 <= ((d - 1) * q) ** 2
                polys += 1
    _report(2, t0, f"{polys} monic polynomials, N_1 = q n_f exhaustively")


def test_criterion_03_count_methods_agree():
    t0 = time.time()
    univariate = 0
    for f, r in _univariate_agreement_configs():
        a = count_points(f, r, method="charsum").N
        b = count_points(f, r, method="traceKernel").N
        c = count_points(f, r, method="naive").N
        assert a == b == c
        univariate += 1
    rng = random.Random(20260814)
    multivariate = 0
    while multivariate < 50:
        terms = {}
        for _ in range(rng.randrange(2, 6)):
            e1 = rng.randrange(4)
            e2 = rng.randrange(4 - e1)
            terms[(e1, e2)] = rng.randrange(3)
        F = MPoly.from_ints(F3, 2, terms)
        if not 1 <= F.total_degree <= 3 or F.total_degree % 3 == 0:
            continue
        a = count_points(F, 1, method="charsum").N
        b = count_points(F, 1, method="traceKernel").N
        c = count_points(F, 1, method="naive").N
        assert a == b == c
        multivariate += 1
    _report(3, t0, f"{univariate} univariate + {multivariate} bivariate configs")


def test_criterion_04_improved_bound_exhaustive_cubic_sweep():
    t0 = time.time()
    counterexamples = []
    checked = {1: 0, 2: 0, 3: 0}
    for f, r in _cubic_sweep_configs():
        N = count_points(f, r, method="traceKernel").N
        C = c_constant(3, r)
        if (N - 5**r) ** 2 > C * C * 5 ** (r + 1):
            counterexamples.append((f, r, N))
        checked[r] += 1
    assert counterexamples == []
    detail = ", ".join(f"r={r}: {checked[r]} polys" for r in (1, 2, 3))
    _report(4, t0, f"no counterexamples ({detail})")


def test_criterion_05_shifted_main_term_for_symmetric_cubic():
    t0 = time.time()
    findings = []
    for f, r in _symmetric_cubic_configs():
        q = f.field.size
        N = count_points(f, r, method="traceKernel").N
        C = c_constant(3, r)
        bound_sq = C * C * q ** (r + 1)
        assert (N - 2 * q**r) ** 2 <= bound_sq  # the shifted main term never fails
        plain = (N - q**r) ** 2 <= bound_sq
        findings.append(f"q={q}: plain main term {'also holds' if plain else 'fails'}")
    _report(5, t0, "; ".join(findings))


def test_criterion_06_frobenius_determinant_identity():
    t0 = time.time()
    cases = [
        Poly.from_ints(F7, [0, -1, 0, 1]),
        Poly.from_ints(F13, [0, -1, 0, 1]),
        Poly.from_ints(F5, [0, 1, 0, 0, 1]),
    ]
    checked = 0
    for f in cases:
        for t in f.field.elements():
            if t.is_zero():
                continue
            res = det_frobenius_check(f, t)
            assert res["match"] is True
            assert res["expected"] == res["actual"]
            checked += 1
    _report(6, t0, f"{checked} twists across odd and even degree, exact")


def test_criterion_07_gauss_sum_modulus_and_reflection():
    t0 = time.time()
    characters = 0
    for field in (F3, F5, F7, F9):
        q = field.size
        psi = AdditiveCharacter(field, 1)
        minus_one = field.element(-1)
        for j in range(1, q - 1):
            chi = MultiplicativeCharacter(field, q - 1, j)
            chibar = MultiplicativeCharacter(field, q - 1, q - 1 - j)
            g = gauss_sum(chi, psi)
            assert g * gauss_sum(chibar, psi) == chi(minus_one) * q
            assert abs(abs(g.embed_complex()) - math.sqrt(q)) < 1e-9
            characters += 1
    _report(7, t0, f"{characters} nontrivial characters over q in {{3,5,7,9}}")


def test_criterion_08_local_factor_degrees_and_case_split():
    t0 = time.time()
    for d in (2, 3, 4):
        for r in range(1, 7):
            assert local_factor_zero(F13, d, r).degree == math.gcd(d, r) - 1
    assert local_factor_zero(F3, 2, 2).rational() == [1, 3]

    # the infinity factor is decided by m = deg gcd(f, f'): trivial at
    # odd r, (1 - (rho(-1) q)^{r/2} T)^m at even r prime to p
    simple = {2: [0, 1, 1], 3: [0, -1, 0, 1], 4: [0, 1, 0, 0, 1]}
    double = {2: [0, 0, 1], 3: [0, 0, -1, 1], 4: [0, 0, 1, 1, 1]}
    for d in (2, 3, 4):
        fs = Poly.from_ints(F13, simple[d])
        fd = Poly.from_ints(F13, double[d])
        assert fs.gcd(fs.derivative()).degree == 0
        assert fd.gcd(fd.derivative()).degree == 1
        for r in range(1, 7):
            assert local_factor_infinity(fs, r).degree == 0
            lf = local_factor_infinity(fd, r)
            if r % 2 == 0:
                assert lf.rational() == [1, -(13 ** (r // 2))]
            else:
                assert lf.degree == 0

    # 2p | r promotes the exponent to d - 1 regardless of m
    assert local_factor_infinity(Poly.from_ints(F3, [0, 0, 1]), 2).rational() == [1, 3]
    assert local_factor_infinity(Poly.from_ints(F3, [0, 0, 1]), 6).rational() == [1, 27]
    assert local_factor_infinity(Poly.from_ints(F3, [0, 0, 1, 0, 1]), 6).rational() == [
        1,
        81,
        2187,
        19683,
    ]
    _report(8, t0, "degrees gcd(d,r)-1 on {2,3,4}x{1..6}, case split, 1+3T")


def test_criterion_09_minimal_scale_pipeline_and_purity():
    t0 = time.time()
    runs = 0
    for c in range(3):
        f = Poly.from_ints(F3, [c, 0, 1])
        for r, M in ((1, 8), (2, 8), (3, 4)):
            data = lfunction_pipeline(f, r, M=M)
            assert data.depth == M and not data.partial
            assert data.L is not None, "series reconstruction must succeed"
            assert data.Q is not None
            assert len(data.Q) - 1 <= 1
            assert data.pure is True
            target = 3.0 ** ((r + 1) / 2)
            for w in data.weights:
                assert abs(w - target) <= 1e-6 * target
            runs += 1
    _report(9, t0, f"{runs} pipelines, pure part degree <= 1, weight (r+1)/2")


def test_criterion_10_first_power_sum_equals_count_deficit():
    t0 = time.time()
    configs = itertools.chain(
        _univariate_agreement_configs(),
        _cubic_sweep_configs(),
        _symmetric_cubic_configs(),
    )
    checked = 0
    for f, r in configs:
        q = f.field.size
        N = count_points(f, r, method="traceKernel").N
        assert power_sum(f, r, 1) == q**r - N
        checked += 1
    _report(10, t0, f"S_1 = q^r - N_r on {checked} configurations, exact")


def test_criterion_11_functional_equation_relates_f_and_minus_f():
    t0 = time.time()
    assert functional_equation_check(Poly.from_ints(F3, [0, 0, 1]), 1) is True
    assert functional_equation_check(Poly.from_ints(F3, [1, 0, 1]), 1) is True
    _report(11, t0, "pure parts of f and -f match coefficientwise, exact")


def test_criterion_12_multiplicity_table_sums_and_integrality():
    t0 = time.time()
    for d in range(2, 7):
        for n in range(1, 5):
            h = hodge_multiplicities(d, n)
            assert isinstance(h["nontrivial"], int)
            assert isinstance(h["trivial"], int)
            assert h["nontrivialCount"] == d - 1
            assert h["total"] == (d - 1) ** n
            assert h["trivial"] + (d - 1) * h["nontrivial"] == h["total"]
    _report(12, t0, "integer multiplicities summing to (d-1)^n, d <= 6, n <= 4")


def test_criterion_13_results_independent_of_modulus_and_shift():
    t0 = time.time()
    alt = Field(3, 2, (2, 2, 1))
    assert alt.modulus != F9.modulus
    outcomes = {}
    for label, field, shift in (("default", F9, 1), ("altMod", alt, 1), ("psiShift", F9, 2)):
        counts = []
        verdicts = []
        for d in (2, 4):
            for tail in itertools.product(range(3), repeat=d):
                # prime-subfield coefficients transport across moduli
                f = Poly.from_ints(field, list(tail) + [1])
                for r in (1, 2):
                    counts.append(count_points(f, r, method="charsum", shift=shift).N)
                    counts.append(count_points(f, r, method="traceKernel").N)
                    counts.append(count_points(f, r, method="naive").N)
                    try:
                        rep = verify_bound(f, r)
                        verdicts.append(
                            (
                                rep.applicable,
                                rep.N,
                                rep.main_candidates,
                                rep.deviations,
                                rep.holds_improved,
                                rep.holds_required,
                                rep.weil_holds,
                                rep.beta,
                            )
                        )
                    except WeillabError as exc:
                        verdicts.append(("raise", type(exc).__name__))
        outcomes[label] = (counts, verdicts)
    assert outcomes["default"] == outcomes["altMod"]
    assert outcomes["default"] == outcomes["psiShift"]
    n_counts = len(outcomes["default"][0])
    n_verdicts = len(outcomes["default"][1])
    _report(13, t0, f"{n_counts} counts and {n_verdicts} verdicts invariant")
