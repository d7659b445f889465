"""Smith normal form over the integers with unimodular transforms.

Everything here works on plain Python ``int`` so entries never overflow.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

Matrix = list[list[int]]


def _identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def as_int_rows(m) -> Matrix:
    """Copy an array-like integer matrix into a list of Python-int rows."""
    arr = np.asarray(m, dtype=object)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got shape {arr.shape}")
    return [[int(x) for x in row] for row in arr]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    inner = len(b)
    cols = len(b[0]) if b else 0
    return [[sum(row[t] * b[t][j] for t in range(inner)) for j in range(cols)] for row in a]


@dataclass(frozen=True)
class SnfResult:
    """``U @ M @ V == D`` with ``D`` diagonal and ``diagonal[i] | diagonal[i+1]``.

    ``diagonal`` only lists the nonzero invariant factors, so its length is the
    rank of ``M``.  ``U_inv`` and ``V_inv`` are the exact inverses of ``U`` and ``V``.
    """

    shape: tuple[int, int]
    diagonal: tuple[int, ...]
    U: Matrix
    V: Matrix
    U_inv: Matrix
    V_inv: Matrix

    @property
    def rank(self) -> int:
        return len(self.diagonal)

    @property
    def D(self) -> Matrix:
        rows, cols = self.shape
        d = [[0] * cols for _ in range(rows)]
        for i, x in enumerate(self.diagonal):
            d[i][i] = x
        return d


def smith_normal_form(m) -> SnfResult:
    """Diagonalize an integer matrix by unimodular row and column operations.

    Pivots on the smallest nonzero magnitude in the remaining block, which keeps
    entry growth modest on incidence matrices.
    """
    arr = np.asarray(m, dtype=object)
    if arr.size == 0 and arr.ndim != 2:
        arr = arr.reshape(0, 0)
    rows, cols = arr.shape
    A = [[int(x) for x in row] for row in arr]
    U, U_inv = _identity(rows), _identity(rows)
    V, V_inv = _identity(cols), _identity(cols)

    def swap_rows(i: int, j: int) -> None:
        if i == j:
            return
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]
        for row in U_inv:
            row[i], row[j] = row[j], row[i]

    def swap_cols(i: int, j: int) -> None:
        if i == j:
            return
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]
        V_inv[i], V_inv[j] = V_inv[j], V_inv[i]

    def add_row(dst: int, src: int, q: int) -> None:
        # row_dst += q * row_src
        if q == 0:
            return
        A[dst] = [a + q * b for a, b in zip(A[dst], A[src])]
        U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]
        for row in U_inv:
            row[src] -= q * row[dst]

    def add_col(dst: int, src: int, q: int) -> None:
        # col_dst += q * col_src
        if q == 0:
            return
        for row in A:
            row[dst] += q * row[src]
        for row in V:
            row[dst] += q * row[src]
        V_inv[src] = [a - q * b for a, b in zip(V_inv[src], V_inv[dst])]

    def negate_row(i: int) -> None:
        A[i] = [-a for a in A[i]]
        U[i] = [-a for a in U[i]]
        for row in U_inv:
            row[i] = -row[i]

    diagonal: list[int] = []
    t = 0
    while t < min(rows, cols):
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                x = A[i][j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
        if best is None:
            break
        _, bi, bj = best
        swap_rows(t, bi)
        swap_cols(t, bj)
        while True:
            done = True
            for i in range(t + 1, rows):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // A[t][t]))
                    if A[i][t]:
                        done = False
            for j in range(t + 1, cols):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // A[t][t]))
                    if A[t][j]:
                        done = False
            if not done:
                # a remainder survived: move the smallest one onto the pivot
                cand = [(abs(A[i][t]), i, t) for i in range(t + 1, rows) if A[i][t]]
                cand += [(abs(A[t][j]), t, j) for j in range(t + 1, cols) if A[t][j]]
                _, ci, cj = min(cand)
                swap_rows(t, ci)
                swap_cols(t, cj)
                continue
            bad = next(
                (i for i in range(t + 1, rows) for j in range(t + 1, cols) if A[i][j] % A[t][t]),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if A[t][t] < 0:
            negate_row(t)
        diagonal.append(A[t][t])
        t += 1

    return SnfResult((rows, cols), tuple(diagonal), U, V, U_inv, V_inv)


def invariant_factors(m) -> tuple[int, ...]:
    return smith_normal_form(m).diagonal


def is_smith_form(d: Sequence[Sequence[int]]) -> bool:
    rows = len(d)
    cols = len(d[0]) if rows else 0
    diag = []
    for i in range(rows):
        for j in range(cols):
            if i != j and d[i][j]:
                return False
    for i in range(min(rows, cols)):
        diag.append(d[i][i])
    seen_zero = False
    for a, b in zip(diag, diag[1:] + [0]):
        if a < 0:
            return False
        if a == 0:
            seen_zero = True
        elif seen_zero or (b and b % a):
            return False
    return True


def inverse_mod(m, d: int) -> Matrix:
    """Inverse of a square integer matrix modulo ``d``; ``ValueError`` if singular."""
    res = smith_normal_form(m)
    n = res.shape[0]
    if res.shape[0] != res.shape[1] or res.rank != n:
        raise ValueError("matrix is not invertible mod %d" % d)
    try:
        dinv = [pow(x, -1, d) for x in res.diagonal]
    except ValueError:
        raise ValueError("matrix is not invertible mod %d" % d) from None
    # M = U^-1 D V^-1  =>  M^-1 = V D^-1 U
    scaled = [[dinv[i] * res.U[i][j] for j in range(n)] for i in range(n)]
    return [[x % d for x in row] for row in matmul(res.V, scaled)]
