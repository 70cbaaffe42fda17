"""SL2(q) for small prime q: element orders by enumeration, and the rank-1 torus check."""

from __future__ import annotations

from itertools import product
from math import lcm

from . import torus
from .errors import DomainError
from .spectrum import SpectrumSet, mu

MAX_Q = 13

Mat2 = tuple[int, int, int, int]  # (a, b, c, d) for [[a, b], [c, d]]


def _mul(x: Mat2, y: Mat2, q: int) -> Mat2:
    a, b, c, d = x
    e, f, g, h = y
    return ((a * e + b * g) % q, (a * f + b * h) % q, (c * e + d * g) % q, (c * f + d * h) % q)


def _order(x: Mat2, q: int) -> int:
    one = (1, 0, 0, 1)
    k, y = 1, x
    while y != one:
        y = _mul(y, x, q)
        k += 1
    return k


def _check(q: int) -> None:
    if not torus.is_prime(q) or q == 2:
        raise DomainError(f"q = {q} must be an odd prime")


def sl2_elements(q: int) -> list[Mat2]:
    _check(q)
    if q > MAX_Q:
        raise DomainError(f"q = {q} exceeds the enumeration budget (q <= {MAX_Q})")
    return [(a, b, c, d) for a, b, c, d in product(range(q), repeat=4) if (a * d - b * c) % q == 1]


def sl2_orders(q: int) -> set[int]:
    """All element orders of SL2(q)."""
    return {_order(x, q) for x in sl2_elements(q)}


def sl2_omega(q: int) -> SpectrumSet:
    """mu of the spectrum of SL2(q)."""
    return mu(sl2_orders(q))


def sl2_torus_exponents(q: int) -> SpectrumSet:
    """Exponents of the two maximal tori of SL2(q) via the rank-1 bordered system.

    The coroot lattice is Z, the Weyl group is {1, -1} and the center is generated
    by h(-1), so v = (1). As for E7, the exponent is taken modulo the central element.
    """
    _check(q)
    out = []
    for m in ((1,), (-1,)):
        n = torus.bordered_matrix([m], q, (1,))
        group, z = torus.group_structure(n, q, (1,))
        out.append(lcm(*torus.quotient_factors(group, z), 1))
    return SpectrumSet.of(out)


def semisimple_orders(q: int) -> set[int]:
    return {k for k in sl2_orders(q) if k % q}


def check_oracle(q: int) -> tuple[bool, str]:
    """Torus exponents divide realized orders, and p'-orders divide q-1 or q+1."""
    omega = sl2_omega(q)
    tor = sl2_torus_exponents(q)
    ok_tor = tor.values == tuple(sorted({q - 1, q + 1})) and all(any(w % t == 0 for w in omega) for t in tor)
    bad = sorted(k for k in semisimple_orders(q) if (q - 1) % k and (q + 1) % k)
    ok = ok_tor and not bad
    return ok, "" if ok else f"torus {tor.values}, stray p'-orders {bad}"


def exponent(q: int) -> int:
    return lcm(*sl2_orders(q))
