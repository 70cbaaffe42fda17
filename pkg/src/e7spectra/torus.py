"""Fixed points of twisted Frobenius maps on centers of reductive subgroups.

Coordinates are additive: a torus element ``h_1(t_1)...h_7(t_7)`` of the simply
connected group is a vector ``t`` in ``(Q/Z)^7`` (only its p'-part is realized).
The extra coordinate ``t0`` in ``{0, 1/2}`` records the central twist ``z^i``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm, prod
from typing import Sequence

import numpy as np

from . import intlinalg, rootsys, weyl
from .errors import DomainError, StructuralError
from .intlinalg import IntMat
from .rootsys import RANK, SubsystemSpec

# z = h_2(-1) h_5(-1) h_7(-1) generates the center of simply connected E7
CENTER_VECTOR: tuple[int, ...] = (0, 1, 0, 0, 1, 0, 1)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    f = 2
    while f * f <= n:
        if n % f == 0:
            return False
        f += 1
    return True


def check_prime_power(q: int, p: int) -> None:
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    x = q
    while x > 1 and x % p == 0:
        x //= p
    if q < p or x != 1:
        raise DomainError(f"{q} is not a positive power of {p}")


@dataclass(frozen=True)
class TorusProblem:
    phi1: SubsystemSpec
    w: tuple[tuple[int, ...], ...]
    q: int
    p: int

    def __post_init__(self) -> None:
        check_prime_power(self.q, self.p)
        if self.p == 2:
            raise DomainError("the bordered construction needs odd characteristic")
        object.__setattr__(self, "w", weyl.to_tuple(weyl.as_matrix(self.w)))

    @property
    def matrix(self) -> np.ndarray:
        return np.array(self.w, dtype=np.int64)


@dataclass(frozen=True)
class ElementCoords:
    """Coordinates of an element in the cyclic-generator basis of an AbelianGroup."""

    coords: tuple[int, ...]
    order: int


@dataclass(frozen=True)
class AbelianGroup:
    """Finite abelian group as an invariant-factor chain.

    ``generators[i]`` is an element of ``(Q/Z)^n`` of order ``factors[i]``, and
    ``basis_change`` maps ambient coordinates to cyclic coordinates.
    """

    factors: tuple[int, ...]
    generators: tuple[tuple[Fraction, ...], ...] = ()
    basis_change: tuple[tuple[int, ...], ...] = ()
    # positions of the nontrivial factors among all diagonal entries
    positions: tuple[int, ...] = ()
    full_diagonal: tuple[int, ...] = ()

    @property
    def order(self) -> int:
        return prod(self.factors)

    @property
    def exponent(self) -> int:
        return lcm(*self.factors) if self.factors else 1

    @property
    def is_trivial(self) -> bool:
        return not self.factors

    def coordinates(self, y: Sequence[Fraction | int]) -> ElementCoords:
        """Cyclic coordinates of an element of the solution group given in ambient coordinates."""
        if not self.basis_change:
            raise DomainError("group carries no transform data")
        s = [sum(Fraction(a) * b for a, b in zip(y, col)) for col in zip(*self.basis_change)]
        coords = []
        for i, d in enumerate(self.full_diagonal):
            x = s[i] * d
            if x.denominator != 1:
                raise DomainError("element is not in the group")
            if i in self.positions:
                coords.append(int(x) % d)
        order = lcm(*(d // _gcd(c, d) for c, d in zip(coords, self.factors))) if coords else 1
        return ElementCoords(tuple(coords), order)


def _gcd(a: int, b: int) -> int:
    from math import gcd

    return gcd(a, b)


def bordered_matrix(
    m_w: Sequence[Sequence[int]],
    q: int,
    center_vector: Sequence[int],
    relation_rows: Sequence[Sequence[int]] = (),
) -> IntMat:
    """Relation matrix for ``(t_1..t_n, t0)``: ``[[qM - E, 0, R], [v, 2, 0]]``.

    ``relation_rows`` are length ``n + 1`` vectors (last slot zero) appended as columns.
    """
    n = len(m_w)
    out = []
    for i in range(n):
        row = [q * int(m_w[i][j]) - (i == j) for j in range(n)] + [0]
        row += [int(r[i]) for r in relation_rows]
        out.append(row)
    out.append([int(x) for x in center_vector] + [2] + [int(r[n]) for r in relation_rows])
    return out


def _stabilizes(spec: SubsystemSpec, m: np.ndarray) -> bool:
    if not spec.pi1:
        return True
    phi1 = rootsys.closure(spec.pi1)
    return all(tuple(int(x) for x in np.array(r) @ m) in phi1 for r in spec.pi1)


def assemble(problem: TorusProblem) -> IntMat:
    """The 8 x (8 + #relations) matrix whose solution group (mod Z^8) is H_w."""
    m = problem.matrix
    if not _stabilizes(problem.phi1, m):
        raise DomainError(f"w does not stabilize the subsystem {problem.phi1.label}")
    return bordered_matrix(m.tolist(), problem.q, CENTER_VECTOR, problem.phi1.center_rows)


def solution_group(n: Sequence[Sequence[int]], p: int | None = None) -> AbelianGroup:
    """``{y in (Q/Z)^rows : y N in Z^cols}`` as an invariant-factor chain."""
    res = intlinalg.snf(n)
    rows = len(n)
    diag = res.diagonal + [0] * (rows - len(res.diagonal))
    if any(d == 0 for d in diag):
        raise StructuralError("solution group is infinite (relation matrix is rank deficient)")
    if p is not None and any(d % p == 0 for d in diag):
        raise StructuralError(f"unexpected {p}-torsion in a torus of characteristic {p}")
    positions = tuple(i for i, d in enumerate(diag) if d > 1)
    gens = tuple(tuple(Fraction(x, diag[i]) for x in res.u[i]) for i in positions)
    u_inv = intlinalg.inverse_unimodular(res.u)
    return AbelianGroup(
        factors=tuple(diag[i] for i in positions),
        generators=gens,
        basis_change=tuple(tuple(r) for r in u_inv),
        positions=positions,
        full_diagonal=tuple(diag),
    )


def z_element(rank: int = RANK, center_vector: Sequence[int] = CENTER_VECTOR) -> tuple[Fraction, ...]:
    """The central involution as a solution vector: t = v/2, t0 = 0."""
    return tuple(Fraction(x, 2) for x in center_vector) + (Fraction(0),)


def group_structure(
    n: Sequence[Sequence[int]],
    p: int | None = None,
    center_vector: Sequence[int] = CENTER_VECTOR,
) -> tuple[AbelianGroup, ElementCoords]:
    group = solution_group(n, p)
    z = group.coordinates(z_element(len(n) - 1, center_vector))
    return group, z


def quotient_factors(group: AbelianGroup, element: ElementCoords) -> list[int]:
    """Invariant factors of ``group / <element>`` (presentation: diag(factors) plus one row)."""
    k = len(group.factors)
    if k == 0:
        return []
    rel = [[group.factors[i] if i == j else 0 for j in range(k)] for i in range(k)]
    rel.append(list(element.coords))
    return [d for d in intlinalg.snf(rel).diagonal if d > 1]


def exponent_mod_z(problem: TorusProblem) -> int:
    """Exponent of H_w/<z>, the exponent of the center of the adjoint-type group."""
    group, z = group_structure(assemble(problem), problem.p)
    if z.order not in (1, 2):
        raise StructuralError("z must have order dividing 2")
    return lcm(*quotient_factors(group, z)) if group.factors else 1


@dataclass(frozen=True)
class TorusResult:
    factors: tuple[int, ...]
    z_coords: tuple[int, ...]
    exponent_mod_z: int


def analyze(problem: TorusProblem) -> TorusResult:
    group, z = group_structure(assemble(problem), problem.p)
    qf = quotient_factors(group, z)
    return TorusResult(group.factors, z.coords, lcm(*qf) if qf else 1)


def center_component_group(phi1: SubsystemSpec) -> AbelianGroup:
    """Component group of Z(R): torsion of Z^7 modulo the relation lattice."""
    if not phi1.center_rows:
        return AbelianGroup(factors=())
    cols = [[r[i] for r in phi1.center_rows] for i in range(RANK)]
    diag = intlinalg.snf(cols).diagonal
    return AbelianGroup(factors=tuple(d for d in diag if d > 1))


# ---------------------------------------------------------------------------
# Elimination of center relations by substitution, as an independent route to |H_w|


@dataclass(frozen=True)
class ReducedSystem:
    matrix: IntMat
    variables: tuple[int, ...]  # surviving t-indices (1-based); t0 is the last row
    block_columns: int  # the leading columns that came from qM - E
    extra_columns: int  # relation columns that could not be eliminated


def eliminate_center(problem: TorusProblem) -> ReducedSystem:
    """Substitute every relation of the form ``t_i = prod t_j^{c_j}`` into the bordered system.

    Each substitution drops the variable's row, the corresponding column of the
    ``qM - E`` block (it becomes a consequence of the others) and the relation column.
    """
    n = assemble(problem)
    rank = RANK
    rows = [list(r) for r in n]
    var = list(range(1, rank + 1))  # row labels (t0 row kept separately at the end)
    block = list(range(rank))  # surviving block column indices
    rel_cols = list(range(rank + 1, rank + 1 + len(problem.phi1.center_rows)))
    changed = True
    while changed:
        changed = False
        for c in rel_cols:
            unit = next((k for k in range(len(var)) if abs(rows[k][c]) == 1), None)
            if unit is None:
                continue
            sign = rows[unit][c]
            coeffs = [rows[k][c] * sign for k in range(len(var))]
            for k in range(len(var)):
                if k != unit and coeffs[k]:
                    rows[k] = [a - coeffs[k] * b for a, b in zip(rows[k], rows[unit])]
            drop_col = var[unit] - 1
            del rows[unit]
            del var[unit]
            block.remove(drop_col)
            rel_cols.remove(c)
            changed = True
            break
    keep = block + [rank] + rel_cols
    out = [[r[j] for j in keep] for r in rows]
    return ReducedSystem(out, tuple(var), len(block), len(rel_cols))
