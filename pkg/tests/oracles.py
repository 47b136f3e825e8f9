"""Independent reference computations for the test suite.

Pure Python on nested lists and Fractions; nothing here imports frobexp.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from functools import reduce


def to_mod(q: Fraction, p: int) -> int:
    return q.numerator * pow(q.denominator, -1, p) % p


def mat_identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def mat_mul(a, b):
    n, m, k = len(a), len(b), len(b[0])
    return [[sum(a[i][l] * b[l][j] for l in range(m)) for j in range(k)] for i in range(n)]


def mat_add(a, b):
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_scale(c, a):
    return [[c * x for x in row] for row in a]


def mat_mod(a, p):
    return [[to_mod(Fraction(x), p) for x in row] for row in a]


def exp_series(x, p):
    """``sum_{i<p} x^i / i!`` over the rationals, reduced mod p at the end."""
    n = len(x)
    total = [[Fraction(0)] * n for _ in range(n)]
    power = mat_identity(n)
    for i in range(p):
        total = mat_add(total, mat_scale(Fraction(1, math.factorial(i)), power))
        power = mat_mul(power, x)
    return mat_mod(total, p)


def log_series(g, p):
    n = len(g)
    u = [[g[i][j] - (i == j) for j in range(n)] for i in range(n)]
    total = [[Fraction(0)] * n for _ in range(n)]
    power = mat_identity(n)
    for i in range(1, p):
        power = mat_mul(power, u)
        total = mat_add(total, mat_scale(Fraction((-1) ** (i + 1), i), power))
    return mat_mod(total, p)


def det_leibniz(a) -> int:
    n = len(a)
    total = 0
    for perm in itertools.permutations(range(n)):
        inversions = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = (-1) ** inversions
        for i in range(n):
            term *= a[i][perm[i]]
        total += term
    return total


def invariant_factors(a) -> list[int]:
    """``d_k = g_k / g_{k-1}`` with ``g_k`` the gcd of all k-by-k minors."""
    rows, cols = len(a), len(a[0]) if a else 0
    gcds = [1]
    for k in range(1, min(rows, cols) + 1):
        g = 0
        for ri in itertools.combinations(range(rows), k):
            for ci in itertools.combinations(range(cols), k):
                g = math.gcd(g, det_leibniz([[a[i][j] for j in ci] for i in ri]))
        if g == 0:
            break
        gcds.append(g)
    return [gcds[k] // gcds[k - 1] for k in range(1, len(gcds))]


def pascal_mod(limit: int, p: int) -> list[list[int]]:
    table = [[1]]
    for m in range(1, limit + 1):
        prev = table[-1]
        table.append([1] + [(prev[i - 1] + prev[i]) % p for i in range(1, m)] + [1])
    return table


def poly_mul(a, b, p, length):
    out = [0] * length
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            if i + j < length:
                out[i + j] = (out[i + j] + x * y) % p
    return out


def subst_sum(coeffs, p, length):
    """Expand ``a(s + t)`` term by term with math.comb; returns a dict ``(i, j) -> c``."""
    out = {}
    for m, c in enumerate(coeffs):
        if not c:
            continue
        for i in range(m + 1):
            v = c * math.comb(m, i) % p
            if v:
                out[(i, m - i)] = (out.get((i, m - i), 0) + v) % p
    return {k: v for k, v in out.items() if v}


def all_matrices(n, p):
    for entries in itertools.product(range(p), repeat=n * n):
        yield [list(entries[i * n : (i + 1) * n]) for i in range(n)]


def centralizer_size(x, p) -> int:
    n = len(x)
    count = 0
    for y in all_matrices(n, p):
        xy, yx = mat_mul(x, y), mat_mul(y, x)
        if all((xy[i][j] - yx[i][j]) % p == 0 for i in range(n) for j in range(n)):
            count += 1
    return count


def kernel_size(a, p) -> int:
    cols = len(a[0])
    return sum(
        1
        for v in itertools.product(range(p), repeat=cols)
        if all(sum(row[j] * v[j] for j in range(cols)) % p == 0 for row in a)
    )


def gcd_all(values) -> int:
    return reduce(math.gcd, values, 0)
