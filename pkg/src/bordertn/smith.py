"""Smith normal form over the integers and bounded integer solutions of ``A x = b``.

All arithmetic uses Python ints, so results are exact.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import List, Sequence, Tuple

Matrix = List[List[int]]


def _identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _copy(a) -> Matrix:
    return [[int(x) for x in row] for row in a]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))] for i in range(len(a))]


def matvec(a: Matrix, x: Sequence[int]) -> List[int]:
    return [sum(r * v for r, v in zip(row, x)) for row in a]


def smith_normal_form(a) -> Tuple[Matrix, Matrix, Matrix]:
    """Return ``(U, S, V)`` with ``U @ A @ V == S`` diagonal and ``U``, ``V`` unimodular.

    Diagonal entries are nonnegative and each divides the next.
    """
    S = _copy(a)
    m, n = len(S), len(S[0]) if S else 0
    U, V = _identity(m), _identity(n)

    def swap_rows(i, j):
        S[i], S[j] = S[j], S[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for M in (S, V):
            for row in M:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, f):
        S[dst] = [x + f * y for x, y in zip(S[dst], S[src])]
        U[dst] = [x + f * y for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, f):
        for M in (S, V):
            for row in M:
                row[dst] += f * row[src]

    for t in range(min(m, n)):
        nonzero = [(i, j) for i in range(t, m) for j in range(t, n) if S[i][j]]
        if not nonzero:
            break
        while True:
            i, j = min(((i, j) for i in range(t, m) for j in range(t, n) if S[i][j]),
                       key=lambda p: abs(S[p[0]][p[1]]))
            swap_rows(t, i)
            swap_cols(t, j)
            p = S[t][t]
            done = True
            for i in range(t + 1, m):
                q = S[i][t] // p
                add_row(i, t, -q)
                if S[i][t]:
                    done = False
            for j in range(t + 1, n):
                q = S[t][j] // p
                add_col(j, t, -q)
                if S[t][j]:
                    done = False
            if not done:
                continue
            bad = [(i, j) for i in range(t + 1, m) for j in range(t + 1, n) if S[i][j] % p]
            if bad:
                add_row(t, bad[0][0], 1)
                continue
            break
        if S[t][t] < 0:
            S[t] = [-x for x in S[t]]
            U[t] = [-x for x in U[t]]
    return U, S, V


def solve_integer(a, b) -> Tuple[List[int], List[List[int]]]:
    """Particular solution and lattice basis of integer solutions of ``A x = b``.

    Returns ``(x0, kernel)`` where every integer solution is ``x0 + kernel^T z``.
    Raises ``ValueError`` if no integer solution exists.
    """
    U, S, V = smith_normal_form(a)
    m, n = len(S), len(S[0])
    c = matvec(U, b)
    rank = sum(1 for t in range(min(m, n)) if S[t][t])
    y = [0] * n
    for t in range(rank):
        if c[t] % S[t][t]:
            raise ValueError("system has no integer solution")
        y[t] = c[t] // S[t][t]
    if any(c[t] for t in range(rank, m)):
        raise ValueError("system is inconsistent")
    x0 = matvec(V, y)
    kernel = [[V[i][t] for i in range(n)] for t in range(rank, n)]
    return x0, kernel


def _pseudo_inverse_rows(kernel: List[List[int]]) -> List[List[Fraction]]:
    """Exact left inverse of the matrix whose columns are ``kernel``."""
    K = [[Fraction(v) for v in col] for col in kernel]  # r x n, rows are kernel vectors
    r = len(K)
    G = [[sum(K[i][t] * K[j][t] for t in range(len(K[0]))) for j in range(r)] for i in range(r)]
    # invert the Gram matrix
    aug = [row + [Fraction(int(i == j)) for j in range(r)] for i, row in enumerate(G)]
    for col in range(r):
        piv = next(i for i in range(col, r) if aug[i][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        pv = aug[col][col]
        aug[col] = [x / pv for x in aug[col]]
        for i in range(r):
            if i != col and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[col])]
    Ginv = [row[r:] for row in aug]
    return [[sum(Ginv[i][j] * K[j][t] for j in range(r)) for t in range(len(K[0]))] for i in range(r)]


def box_solutions(a, b, lower: Sequence[int], upper: Sequence[int]) -> List[Tuple[int, ...]]:
    """All integer ``x`` with ``A x = b`` and ``lower <= x <= upper``, sorted.

    Uses the Smith-form parametrization; the free parameters are bounded by
    projecting the box onto the kernel lattice.
    """
    try:
        x0, kernel = solve_integer(a, b)
    except ValueError:
        return []
    n = len(x0)
    inside = lambda x: all(lo <= v <= hi for v, lo, hi in zip(x, lower, upper))  # noqa: E731
    if not kernel:
        return [tuple(x0)] if inside(x0) else []
    P = _pseudo_inverse_rows(kernel)
    ranges = []
    for row in P:
        lo = sum(w * (lower[t] if w > 0 else upper[t]) for t, w in enumerate(row)) - sum(w * x0[t] for t, w in enumerate(row))
        hi = sum(w * (upper[t] if w > 0 else lower[t]) for t, w in enumerate(row)) - sum(w * x0[t] for t, w in enumerate(row))
        ranges.append(range(int(lo.__floor__()), int(hi.__ceil__()) + 1))
    out = set()
    for z in itertools.product(*ranges):
        x = [x0[i] + sum(zj * kernel[j][i] for j, zj in enumerate(z)) for i in range(n)]
        if inside(x):
            out.add(tuple(x))
    return sorted(out)
