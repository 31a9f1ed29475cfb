"""Exact linear algebra over Q by fraction-free (Bareiss) elimination."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm


@dataclass
class SolveResult:
    rank: int
    solution: list | None  # None when the system is inconsistent
    kernel: list  # basis of the right kernel of the matrix, as Fraction vectors
    pivots: tuple


def _to_int_rows(A, b=None):
    """Scale each row (with its right-hand side) to integers."""
    rows = []
    for i, row in enumerate(A):
        vals = [Fraction(x) for x in row]
        if b is not None:
            vals.append(Fraction(b[i]))
        d = lcm(*(v.denominator for v in vals)) if vals else 1
        rows.append([int(v * d) for v in vals])
    return rows


def bareiss_echelon(rows, ncols):
    """Row echelon form in place with Bareiss updates; returns pivot columns.

    Every intermediate entry stays an integer: each update is an exact
    division of a 2x2 minor by the previous pivot.
    """
    m = len(rows)
    pivots = []
    prev = 1
    r = 0
    for c in range(ncols):
        if r == m:
            break
        p = next((i for i in range(r, m) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        piv = rows[r][c]
        for i in range(r + 1, m):
            a = rows[i][c]
            rows[i] = [(piv * x - a * y) // prev for x, y in zip(rows[i], rows[r])]
        prev = piv
        pivots.append(c)
        r += 1
    return pivots


def solve(A, b) -> SolveResult:
    """Solve A x = b exactly; report rank and a kernel basis.

    When the kernel is nonzero the returned solution sets free variables to 0.
    """
    n = len(A[0]) if A else 0
    rows = _to_int_rows(A, b)
    pivots = bareiss_echelon(rows, n)
    rank = len(pivots)
    consistent = all(rows[i][n] == 0 for i in range(rank, len(rows)))
    x = None
    if consistent:
        x = [Fraction(0)] * n
        for i in range(rank - 1, -1, -1):
            c = pivots[i]
            acc = Fraction(rows[i][n])
            for j in range(c + 1, n):
                if rows[i][j]:
                    acc -= rows[i][j] * x[j]
            x[c] = acc / rows[i][c]
    free = [c for c in range(n) if c not in set(pivots)]
    kernel = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for i in range(rank - 1, -1, -1):
            c = pivots[i]
            acc = Fraction(0)
            for j in range(c + 1, n):
                if rows[i][j]:
                    acc -= rows[i][j] * v[j]
            v[c] = acc / rows[i][c]
        kernel.append(v)
    return SolveResult(rank, x, kernel, tuple(pivots))


def rank(A) -> int:
    n = len(A[0]) if A else 0
    rows = _to_int_rows(A)
    return len(bareiss_echelon(rows, n))


def mat_vec(A, x):
    return [sum((Fraction(a) * xi for a, xi in zip(row, x)), Fraction(0)) for row in A]
