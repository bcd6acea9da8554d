"""Bound constants, per-polynomial verification, sweeps, Kummer explorer.

Every inequality involving q^{1/2} is decided by comparing squares of
exact integers; floats appear only in display fields.  Sweeps
canonicalize f up to the substitution x -> x + c (which changes neither
the count nor any verdict) and persist deterministic JSON/CSV reports.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from .charsum import count_points
from .classify import ClassificationReport, classify_monodromy, multivariate_checks
from .errors import BudgetExceeded, DivisibilityViolation
from .ff import Field, MPoly, Poly, Tower, enumeration_budget


def c_constant(d: int, r: int, n: int = 1) -> int:
    """The deviation constant: sum_{a=0}^{r} |a-1| C(R+r-a-1, r-a) C(R, a)
    with R = (d-1)^n."""
    if d < 2 or r < 1 or n < 1:
        raise ValueError("need d >= 2, r >= 1, n >= 1")
    R = (d - 1) ** n
    return sum(
        abs(a - 1) * math.comb(R + r - a - 1, r - a) * math.comb(R, a)
        for a in range(r + 1)
    )


def classical_bounds(d: int, q: int, r: int) -> dict:
    """Weil, Serre, and Stohr-Voloch reference bounds as exact integers.

    weil and serre bound the deviation |N_r - q^r|; stohrVoloch bounds
    N_r itself.  All half-integer powers are floored via integer square
    roots of squares.
    """
    if d < 1 or r < 1 or q < 3:
        raise ValueError("need d >= 1, r >= 1, odd prime power q")
    weil = math.isqrt((d - 1) ** 2 * (q - 1) ** 2 * q**r)
    serre = (d - 1) * (q - 1) // 2 * math.isqrt(4 * q**r)
    D = max(d, q)
    stohr = D * (D + q**r - 1) // 2
    return {"weil": weil, "serre": serre, "stohrVoloch": stohr}


def _sq_leq(lhs: int, bound_sq: int) -> bool:
    # |lhs| <= sqrt(bound_sq), exactly
    return lhs * lhs <= bound_sq


@dataclass(frozen=True)
class BoundReport:
    """Exact bound verdicts for one (f, r)."""

    f_coeffs: tuple
    q: int
    d: int
    r: int
    n: int
    N: int
    main_candidates: tuple
    deviations: tuple
    improved_bound: int
    improved_bound_squared: int
    weil_bound: int
    serre_bound: int
    stohr_voloch_bound: int
    holds_improved: tuple
    holds_required: bool
    weil_holds: bool
    applicable: str
    beta: str
    report: ClassificationReport | None

    def to_json(self) -> dict:
        return {
            "f": [list(c) if isinstance(c, (list, tuple)) else c for c in self.f_coeffs],
            "q": self.q,
            "d": self.d,
            "r": self.r,
            "n": self.n,
            "N": str(self.N),
            "mainTermCandidates": [str(c) for c in self.main_candidates],
            "beta": self.beta,
            "deviations": [str(v) for v in self.deviations],
            "improvedBound": str(self.improved_bound),
            "weilBound": str(self.weil_bound),
            "serreBound": str(self.serre_bound),
            "stohrVolochBound": str(self.stohr_voloch_bound),
            "holdsImproved": list(self.holds_improved),
            "holdsRequired": self.holds_required,
            "weilHolds": self.weil_holds,
            "applicable": self.applicable,
            "classification": self.report.to_json() if self.report else None,
        }


def _coeff_key(f) -> tuple:
    field = f.field
    if isinstance(f, Poly):
        if field.e == 1:
            return tuple(field.index(c) for c in f.coeffs)
        return tuple(tuple(c.coeffs) for c in f.coeffs)
    items = sorted(f.terms.items())
    return tuple((k, tuple(v.coeffs)) for k, v in items)


def verify_bound(f, r: int) -> BoundReport:
    """Count (charsum route), classify, and evaluate every applicable
    inequality in exact integer arithmetic."""
    field = f.field
    q = field.size
    if isinstance(f, Poly):
        n, d = 1, f.degree
    else:
        n, d = f.n, f.total_degree
    N = count_points(f, r, method="charsum").N

    if n == 1:
        rep = classify_monodromy(f, r)
        applicable = rep.applicable_bound
        main = rep.main_term
        candidates = tuple(main["candidates"])
        beta = main["beta"]
    else:
        rep = None
        checks = multivariate_checks(f, r)
        # the n-variable corollary needs the critical scheme etale with
        # distinct values, and the nr-variable sum hypersurface smooth
        # whenever nr is even
        ok = (
            checks["deligne"] is True
            and checks["criticalEtale"] is True
            and checks["distinctValues"] is True
            and ((n * r) % 2 == 1 or checks["sumNonsingular"] is True)
        )
        applicable = "theorem1_1" if ok else "weilOnly"
        candidates = (q ** (n * r),)
        beta = "none"

    C = c_constant(d, r, n) if d >= 2 else 0
    ib_sq = C * C * q ** (n * r + 1)
    ib = math.isqrt(ib_sq)
    cb = classical_bounds(d, q, r) if n == 1 else {"weil": 0, "serre": 0, "stohrVoloch": 0}

    deviations = tuple(abs(N - c) for c in candidates)
    holds = tuple(_sq_leq(N - c, ib_sq) for c in candidates)
    # the corollaries assert existence of a valid beta, so one candidate
    # holding is what they promise
    required = any(holds) if applicable != "weilOnly" else True
    if n == 1:
        weil_holds = _sq_leq(N - q**r, (d - 1) ** 2 * (q - 1) ** 2 * q**r)
    elif checks["deligne"] is True:
        weil_holds = _sq_leq(
            N - q ** (n * r), (q - 1) ** 2 * (d - 1) ** (2 * n) * q ** (n * r)
        )
    else:
        weil_holds = True

    return BoundReport(
        f_coeffs=_coeff_key(f),
        q=q,
        d=d,
        r=r,
        n=n,
        N=N,
        main_candidates=candidates,
        deviations=deviations,
        improved_bound=ib,
        improved_bound_squared=ib_sq,
        weil_bound=cb["weil"],
        serre_bound=cb["serre"],
        stohr_voloch_bound=cb["stohrVoloch"],
        holds_improved=holds,
        holds_required=required,
        weil_holds=weil_holds,
        applicable=applicable,
        beta=beta,
        report=rep,
    )


# -- sweeps ------------------------------------------------------------------


def _depressed_monic_polys(field: Field, d: int):
    # one representative per x -> x + c orbit: coefficient of x^{d-1} is 0
    q = field.size
    for idx in range(q ** (d - 1)):
        rest = idx
        coeffs = []
        for _ in range(d - 1):
            coeffs.append(field.from_index(rest % q))
            rest //= q
        yield Poly(field, coeffs + [field.zero(), field.one()])


def _sample_depressed(field: Field, d: int, count: int, seed: int):
    q = field.size
    rng = random.Random(seed)
    seen = set()
    total = q ** (d - 1)
    count = min(count, total)
    while len(seen) < count:
        seen.add(rng.randrange(total))
    for idx in sorted(seen):
        rest = idx
        coeffs = []
        for _ in range(d - 1):
            coeffs.append(field.from_index(rest % q))
            rest //= q
        yield Poly(field, coeffs + [field.zero(), field.one()])


def _sweep_cell(args) -> list[dict]:
    (p, e, modulus, d, r, family, sample, seed) = args
    field = Field(p, e, modulus)
    if family == "random":
        polys = _sample_depressed(field, d, sample, seed)
    else:
        polys = _depressed_monic_polys(field, d)
    rows = []
    for f in polys:
        rep = verify_bound(f, r)
        rows.append(
            {
                "q": rep.q,
                "d": d,
                "r": r,
                "n": 1,
                "f": rep.f_coeffs,
                "class": rep.applicable,
                "N": rep.N,
                "main": rep.main_candidates[0],
                "deviation": rep.deviations[0],
                "bound": rep.improved_bound,
                "holds": rep.holds_required,
                "weilHolds": rep.weil_holds,
                "devSquared": (rep.N - rep.q**r) ** 2,
            }
        )
    return rows


def sweep(
    qs,
    ds,
    rs,
    n: int = 1,
    family: str = "all-monic",
    sample: int = 50,
    seed: int = 0,
    out_dir: str | None = None,
    threads: int = 1,
) -> dict:
    """Exhaustive (or seeded-random) bound verification over a grid.

    Deterministic for a fixed grid and seed regardless of thread count:
    cells are reduced in sorted order.  Writes sweep-<hash>.json and
    .csv under out_dir when given.  A non-empty counterexample list
    means an applicable corollary failed, which is a red-alert finding.
    """
    if n != 1:
        raise ValueError("sweeps cover the univariate family only")
    if family not in ("all-monic", "random"):
        raise ValueError(f"unknown family {family!r}")
    cells = []
    total_points = 0
    for q in sorted(qs):
        field = Field(*_field_shape(q))
        for d in sorted(ds):
            if d % field.p == 0 or d < 2:
                continue
            count = q ** (d - 1) if family == "all-monic" else min(sample, q ** (d - 1))
            for r in sorted(rs):
                total_points += count * q**r
                cells.append(
                    (field.p, field.e, field.modulus, d, r, family, sample, seed)
                )
    if total_points > enumeration_budget():
        raise BudgetExceeded(f"sweep would enumerate about {total_points} points")

    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_sweep_cell, cells))
    else:
        results = [_sweep_cell(c) for c in cells]

    rows = [row for cell_rows in results for row in cell_rows]
    rows.sort(key=lambda row: (row["q"], row["d"], row["r"], row["f"]))

    classes: dict = {}
    counterexamples = []
    for row in rows:
        cls = row["class"]
        agg = classes.setdefault(
            cls, {"count": 0, "maxNormalizedSquared": Fraction(0)}
        )
        agg["count"] += 1
        norm_sq = Fraction(row["devSquared"], row["q"] ** (row["r"] + 1))
        if norm_sq > agg["maxNormalizedSquared"]:
            agg["maxNormalizedSquared"] = norm_sq
        if (cls != "weilOnly" and not row["holds"]) or not row["weilHolds"]:
            counterexamples.append(row)

    report = {
        "grid": {
            "q": sorted(qs),
            "d": sorted(ds),
            "r": sorted(rs),
            "n": n,
            "family": family,
            "sample": sample if family == "random" else None,
            "seed": seed,
        },
        "classes": {
            cls: {
                "count": agg["count"],
                "maxNormalizedDeviation": math.sqrt(float(agg["maxNormalizedSquared"])),
                "maxNormalizedSquared": [
                    str(agg["maxNormalizedSquared"].numerator),
                    str(agg["maxNormalizedSquared"].denominator),
                ],
            }
            for cls, agg in sorted(classes.items())
        },
        "rows": [
            {
                "q": row["q"],
                "d": row["d"],
                "r": row["r"],
                "n": row["n"],
                "f": list(row["f"]),
                "class": row["class"],
                "N": str(row["N"]),
                "main": str(row["main"]),
                "deviation": str(row["deviation"]),
                "bound": str(row["bound"]),
                "holds": row["holds"],
            }
            for row in rows
        ],
        "counterexamples": [
            {k: str(v) if isinstance(v, int) else v for k, v in row.items()}
            for row in counterexamples
        ],
    }

    if out_dir is not None:
        os.makedirs(out_dir, exist_ok=True)
        tag = hashlib.sha256(
            json.dumps(report["grid"], sort_keys=True).encode()
        ).hexdigest()[:12]
        jpath = os.path.join(out_dir, f"sweep-{tag}.json")
        cpath = os.path.join(out_dir, f"sweep-{tag}.csv")
        with open(jpath, "w") as fh:
            json.dump(report, fh, sort_keys=True, separators=(",", ":"))
            fh.write("\n")
        with open(cpath, "w") as fh:
            fh.write("q,d,r,n,f_coeffs,class,N_r,main_term,deviation,bound,holds\n")
            for row in rows:
                fstr = ":".join(
                    str(c) if isinstance(c, int) else "[" + ".".join(map(str, c)) + "]"
                    for c in row["f"]
                )
                fh.write(
                    f'{row["q"]},{row["d"]},{row["r"]},{row["n"]},{fstr},'
                    f'{row["class"]},{row["N"]},{row["main"]},{row["deviation"]},'
                    f'{row["bound"]},{row["holds"]}\n'
                )
        report["files"] = {"json": jpath, "csv": cpath}

    return report


def _field_shape(q: int) -> tuple[int, int]:
    # factor a prime power q = p^e
    for p in range(3, q + 1, 2):
        if q % p == 0:
            e = 0
            m = q
            while m % p == 0:
                m //= p
                e += 1
            if m != 1:
                break
            return (p, e)
    raise ValueError(f"{q} is not an odd prime power")


# -- Kummer explorer ---------------------------------------------------------


def kummer_explore(f: Poly, e: int, r: int) -> dict:
    """Point count of y^{(q-1)/e} = f(x) over F_{q^r}; estimates only.

    The fiber over x has gcd(M, q^r - 1) points when f(x) is a
    (q^r-1)/g-th power residue and 0 otherwise (1 when f(x) = 0).
    """
    field = f.field
    q = field.size
    if e < 1 or (q - 1) % e:
        raise DivisibilityViolation(f"e = {e} must divide q - 1 = {q - 1}")
    if q**r > enumeration_budget():
        raise BudgetExceeded(f"Kummer count over {q ** r} elements refused")
    M = (q - 1) // e
    tower = Tower(field, r)
    top = tower.top
    qr = q**r
    g = math.gcd(M, qr - 1)
    check = (qr - 1) // g
    lifted = Poly(top, [tower.embed(c) for c in f.coeffs])
    N = 0
    one = top.one()
    for x in top.elements():
        c = lifted.evaluate(x)
        if c.is_zero():
            N += 1
        elif c**check == one:
            N += g
    dev = abs(N - qr)
    norm_sq = Fraction(dev * dev, qr * q)
    return {
        "N": N,
        "deviation": dev,
        "normalized": math.sqrt(float(norm_sq)),
        "normalizedSquared": (norm_sq.numerator, norm_sq.denominator),
    }


def kummer_sweep(field: Field, d: int, e: int, r: int) -> dict:
    """Empirical max of the normalized Kummer deviation over all monic
    degree-d polynomials; a conjecture-support number, not a verdict."""
    q = field.size
    best = Fraction(-1)
    best_f = None
    count = 0
    for idx in range(q**d):
        rest = idx
        coeffs = []
        for _ in range(d):
            coeffs.append(field.from_index(rest % q))
            rest //= q
        f = Poly(field, coeffs + [field.one()])
        res = kummer_explore(f, e, r)
        ns = Fraction(*res["normalizedSquared"])
        count += 1
        if ns > best:
            best = ns
            best_f = _coeff_key(f)
    return {
        "sEstimate": math.sqrt(float(best)),
        "sEstimateSquared": (best.numerator, best.denominator),
        "argmax": best_f,
        "polynomials": count,
    }
