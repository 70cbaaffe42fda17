"""Exact integer linear algebra: Smith normal form with transforms, determinants."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import DomainError

IntMat = list[list[int]]


def as_intmat(a: Sequence[Sequence[int]]) -> IntMat:
    """Copy ``a`` into a fresh list-of-lists of Python ints (unbounded precision)."""
    rows = [[int(x) for x in row] for row in a]
    if rows and any(len(r) != len(rows[0]) for r in rows):
        raise DomainError("matrix is not rectangular")
    return rows


def identity(n: int) -> IntMat:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def zeros(m: int, n: int) -> IntMat:
    return [[0] * n for _ in range(m)]


def shape(a: IntMat) -> tuple[int, int]:
    return len(a), (len(a[0]) if a else 0)


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> IntMat:
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def transpose(a: Sequence[Sequence[int]]) -> IntMat:
    return [list(col) for col in zip(*a)]


def det(a: Sequence[Sequence[int]]) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    m = as_intmat(a)
    n = len(m)
    if any(len(row) != n for row in m):
        raise DomainError("determinant of a non-square matrix")
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


@dataclass(frozen=True)
class SnfResult:
    """``s == u @ a @ v`` with ``u``, ``v`` unimodular and ``s`` in Smith form."""

    u: IntMat
    s: IntMat
    v: IntMat

    @property
    def diagonal(self) -> list[int]:
        m, n = shape(self.s)
        return [self.s[i][i] for i in range(min(m, n))]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)


def snf(a: Sequence[Sequence[int]]) -> SnfResult:
    """Smith normal form with left/right unimodular transforms.

    Row/column reduction pivoting on the entry of least absolute value in
    the trailing block. The invariant factors come out non-negative and
    ordered by divisibility; zeros (if any) trail.
    """
    s = as_intmat(a)
    m, n = shape(s)
    u = identity(m)
    v = identity(n)

    def swap_rows(i: int, j: int) -> None:
        if i != j:
            s[i], s[j] = s[j], s[i]
            u[i], u[j] = u[j], u[i]

    def swap_cols(i: int, j: int) -> None:
        if i != j:
            for row in s:
                row[i], row[j] = row[j], row[i]
            for row in v:
                row[i], row[j] = row[j], row[i]

    def add_row(dst: int, src: int, c: int) -> None:
        # row[dst] += c * row[src]
        if c:
            sd, ss = s[dst], s[src]
            for k in range(n):
                sd[k] += c * ss[k]
            ud, us = u[dst], u[src]
            for k in range(m):
                ud[k] += c * us[k]

    def add_col(dst: int, src: int, c: int) -> None:
        if c:
            for row in s:
                row[dst] += c * row[src]
            for row in v:
                row[dst] += c * row[src]

    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                row = s[i]
                for j in range(t, n):
                    x = row[j]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, j)
                        if best[0] == 1:
                            break
                if best is not None and best[0] == 1:
                    break
            if best is None:
                break
            _, i, j = best
            swap_rows(t, i)
            swap_cols(t, j)
            pivot = s[t][t]
            dirty = False
            for i in range(t + 1, m):
                if s[i][t]:
                    add_row(i, t, -(s[i][t] // pivot))
                    dirty = dirty or s[i][t] != 0
            for j in range(t + 1, n):
                if s[t][j]:
                    add_col(j, t, -(s[t][j] // pivot))
                    dirty = dirty or s[t][j] != 0
            if dirty:
                continue
            # pivot must divide the whole trailing block
            bad = next(
                (i for i in range(t + 1, m) if any(s[i][j] % pivot for j in range(t + 1, n))),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if s[t][t] < 0:
            s[t] = [-x for x in s[t]]
            u[t] = [-x for x in u[t]]
    return SnfResult(u=u, s=s, v=v)


def invariant_factors(a: Sequence[Sequence[int]]) -> list[int]:
    return snf(a).diagonal


def inverse_unimodular(a: Sequence[Sequence[int]]) -> IntMat:
    """Inverse of a square integer matrix with determinant +-1."""
    n = len(a)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    for c in range(n):
        piv = next((r for r in range(c, n) if aug[r][c] != 0), None)
        if piv is None:
            raise DomainError("matrix is singular")
        aug[c], aug[piv] = aug[piv], aug[c]
        inv = 1 / aug[c][c]
        aug[c] = [x * inv for x in aug[c]]
        for r in range(n):
            if r != c and aug[r][c] != 0:
                f = aug[r][c]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[c])]
    out = []
    for row in aug:
        tail = row[n:]
        if any(x.denominator != 1 for x in tail):
            raise DomainError("matrix is not unimodular")
        out.append([int(x) for x in tail])
    return out


def in_column_lattice(b: Sequence[int], gens: Sequence[Sequence[int]]) -> bool:
    """True iff the column vector ``b`` is an integer combination of the columns of ``gens``."""
    if not gens or not gens[0]:
        return all(x == 0 for x in b)
    res = snf(gens)
    ub = [sum(x * y for x, y in zip(row, b)) for row in res.u]
    diag = res.diagonal
    for i, x in enumerate(ub):
        d = diag[i] if i < len(diag) else 0
        if d == 0:
            if x != 0:
                return False
        elif x % d:
            return False
    return True


def same_column_lattice(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> bool:
    """Whether the columns of ``a`` and ``b`` span the same sublattice of Z^rows."""
    return all(in_column_lattice(col, b) for col in zip(*a)) and all(
        in_column_lattice(col, a) for col in zip(*b)
    )
