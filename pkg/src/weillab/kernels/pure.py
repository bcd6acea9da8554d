"""Pure-Python enumeration kernels; same contract as the compiled core.

Both kernels walk every element x of F_{p^K} (digit odometer in the canonical
index order), Horner-evaluate a polynomial with coefficients given as digit
rows, and apply an F_p-linear map L to the value.

trace_histogram bins x by the digit vector L(f(x)) read as a base-p integer;
zero_count counts x with L(f(x)) = 0.  Histogram accumulation is order
independent, so results do not depend on how the range is split.
"""

from __future__ import annotations


def _mul_into(y, x, tmp, mod, p, K):
    # tmp <- y * x reduced mod the monic modulus (low digits in mod)
    for i in range(2 * K - 1):
        tmp[i] = 0
    for i in range(K):
        yi = y[i]
        if yi:
            for j in range(K):
                tmp[i + j] += yi * x[j]
    for i in range(2 * K - 2, K - 1, -1):
        c = tmp[i] % p
        if c:
            for j in range(K):
                tmp[i - K + j] -= c * mod[j]
    for i in range(K):
        y[i] = tmp[i] % p


def trace_histogram(p: int, K: int, mod, fdig, Lrows):
    j = len(Lrows)
    hist = [0] * (p**j)
    deg = len(fdig) - 1
    x = [0] * K
    tmp = [0] * (2 * K - 1) if K > 1 else [0]
    y = [0] * K
    for _ in range(p**K):
        top = fdig[deg]
        for t in range(K):
            y[t] = top[t]
        for ci in range(deg - 1, -1, -1):
            _mul_into(y, x, tmp, mod, p, K)
            c = fdig[ci]
            for t in range(K):
                y[t] = (y[t] + c[t]) % p
        idx = 0
        for r in range(j - 1, -1, -1):
            row = Lrows[r]
            s = 0
            for t in range(K):
                s += row[t] * y[t]
            idx = idx * p + s % p
        hist[idx] += 1
        for t in range(K):
            x[t] += 1
            if x[t] == p:
                x[t] = 0
            else:
                break
    return hist


def zero_count(p: int, K: int, mod, fdig, Lrows):
    count = 0
    deg = len(fdig) - 1
    x = [0] * K
    tmp = [0] * (2 * K - 1) if K > 1 else [0]
    y = [0] * K
    for _ in range(p**K):
        top = fdig[deg]
        for t in range(K):
            y[t] = top[t]
        for ci in range(deg - 1, -1, -1):
            _mul_into(y, x, tmp, mod, p, K)
            c = fdig[ci]
            for t in range(K):
                y[t] = (y[t] + c[t]) % p
        ok = True
        for row in Lrows:
            s = 0
            for t in range(K):
                s += row[t] * y[t]
            if s % p:
                ok = False
                break
        if ok:
            count += 1
        for t in range(K):
            x[t] += 1
            if x[t] == p:
                x[t] = 0
            else:
                break
    return count
