"""The E7 root system in the simple-root basis and its closed subsystems.

Simple roots are numbered as in the extended Dynkin diagram

    -r0 - r1 - r3 - r4 - r5 - r6 - r7
                     |
                     r2

so a root is a 7-tuple of coefficients ``(a1, ..., a7)`` of ``a1*r1 + ... + a7*r7``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import factorial
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError

RANK = 7
RootVec = tuple[int, ...]

_EDGES = [(1, 3), (3, 4), (2, 4), (4, 5), (5, 6), (6, 7)]


def _cartan() -> tuple[tuple[int, ...], ...]:
    c = [[2 if i == j else 0 for j in range(RANK)] for i in range(RANK)]
    for a, b in _EDGES:
        c[a - 1][b - 1] = c[b - 1][a - 1] = -1
    return tuple(tuple(row) for row in c)


CARTAN = _cartan()
CARTAN_NP = np.array(CARTAN, dtype=np.int64)


def simple_root(i: int) -> RootVec:
    if not 1 <= i <= RANK:
        raise DomainError(f"no simple root r{i}")
    return tuple(int(j == i - 1) for j in range(RANK))


def add(*roots: Sequence[int]) -> RootVec:
    return tuple(int(sum(c)) for c in zip(*roots))


def neg(r: Sequence[int]) -> RootVec:
    return tuple(-x for x in r)


def height(r: Sequence[int]) -> int:
    return sum(r)


def _form(r: Sequence[int], s: Sequence[int]) -> int:
    return sum(r[i] * CARTAN[i][j] * s[j] for i in range(RANK) for j in range(RANK) if r[i] and s[j])


@lru_cache(maxsize=1)
def generate_roots() -> tuple[RootVec, ...]:
    """All 126 roots of E7, lexicographically sorted."""
    seen = {simple_root(i) for i in range(1, RANK + 1)}
    frontier = list(seen)
    while frontier:
        nxt = []
        for r in frontier:
            for i in range(RANK):
                c = sum(r[j] * CARTAN[j][i] for j in range(RANK))
                if c:
                    img = tuple(x - c * (j == i) for j, x in enumerate(r))
                    if img not in seen:
                        seen.add(img)
                        nxt.append(img)
        frontier = nxt
    return tuple(sorted(seen))


@lru_cache(maxsize=1)
def root_set() -> frozenset[RootVec]:
    return frozenset(generate_roots())


def positive_roots() -> tuple[RootVec, ...]:
    return tuple(r for r in generate_roots() if all(x >= 0 for x in r))


def is_root(r: Sequence[int]) -> bool:
    return tuple(r) in root_set()


def _require_root(r: Sequence[int]) -> RootVec:
    r = tuple(int(x) for x in r)
    if r not in root_set():
        raise DomainError(f"{r} is not a root of E7")
    return r


def pairing(r: Sequence[int], s: Sequence[int]) -> int:
    """Cartan pairing <r, s> = 2(r, s)/(s, s); the form is simply laced so (s, s) = 2."""
    return _form(_require_root(r), _require_root(s))


# Named roots used by the subsystem catalog.
R0: RootVec = (2, 2, 3, 4, 3, 2, 1)
R8: RootVec = (0, 1, 0, 1, 1, 1, 0)
R9: RootVec = (0, 1, 1, 2, 2, 1, 0)
R10: RootVec = (0, -1, -1, -2, -1, 0, 0)
R11: RootVec = (0, -1, -1, -2, -2, -2, -1)
R12: RootVec = (0, 0, 0, 0, 1, 1, 1)

NAMED_ROOTS: dict[str, RootVec] = {
    **{f"r{i}": simple_root(i) for i in range(1, RANK + 1)},
    "r0": R0,
    "r8": R8,
    "r9": R9,
    "r10": R10,
    "r11": R11,
    "r12": R12,
}
NAMED_ROOTS.update({f"-{k}": neg(v) for k, v in list(NAMED_ROOTS.items())})


def root(name: str) -> RootVec:
    return NAMED_ROOTS[name]


# ---------------------------------------------------------------------------
# Cartan types of simple systems


@dataclass(frozen=True, order=True)
class Component:
    letter: str
    rank: int

    def __str__(self) -> str:
        return f"{self.letter}{self.rank}"

    @property
    def max_height(self) -> int:
        if self.letter == "A":
            return self.rank
        if self.letter == "D":
            return 2 * self.rank - 3
        return {6: 11, 7: 17, 8: 29}[self.rank]

    @property
    def weyl_order(self) -> int:
        if self.letter == "A":
            return factorial(self.rank + 1)
        if self.letter == "D":
            return 2 ** (self.rank - 1) * factorial(self.rank)
        return {6: 51840, 7: 2903040, 8: 696729600}[self.rank]


@dataclass(frozen=True)
class CartanType:
    """A multiset of irreducible simply-laced components."""

    components: tuple[Component, ...]

    def __str__(self) -> str:
        if not self.components:
            return "0"
        parts = []
        for comp in sorted(set(self.components), key=lambda c: (c.letter, c.rank)):
            k = self.components.count(comp)
            parts.append(f"{comp}^{k}" if k > 1 else str(comp))
        return "x".join(parts)

    @property
    def max_height(self) -> int:
        return max((c.max_height for c in self.components), default=0)

    @property
    def weyl_order(self) -> int:
        out = 1
        for c in self.components:
            out *= c.weyl_order
        return out


def _pairing_matrix(roots: Sequence[RootVec]) -> list[list[int]]:
    return [[_form(a, b) for b in roots] for a in roots]


def _connected_components(adj: list[set[int]]) -> list[list[int]]:
    seen: set[int] = set()
    comps = []
    for start in range(len(adj)):
        if start in seen:
            continue
        stack, comp = [start], []
        seen.add(start)
        while stack:
            x = stack.pop()
            comp.append(x)
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        comps.append(sorted(comp))
    return comps


def _classify_tree(nodes: list[int], adj: list[set[int]]) -> Component:
    n = len(nodes)
    degrees = {x: len(adj[x]) for x in nodes}
    if sum(degrees.values()) != 2 * (n - 1):
        raise DomainError("Dynkin diagram contains a cycle")
    branch = [x for x in nodes if degrees[x] >= 3]
    if not branch:
        return Component("A", n)
    if len(branch) > 1 or degrees[branch[0]] > 3:
        raise DomainError("not a simply-laced finite type")
    b = branch[0]
    arms = []
    for start in adj[b]:
        length, prev, cur = 1, b, start
        while True:
            nxt = [y for y in adj[cur] if y != prev]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
            length += 1
        arms.append(length)
    arms.sort()
    if arms[0] == 1 and arms[1] == 1:
        return Component("D", n)
    if arms[0] == 1 and arms[1] == 2 and arms[2] in (2, 3, 4):
        return Component("E", n)
    raise DomainError(f"diagram with arms {arms} is not of finite type")


def _rank(rows: Sequence[Sequence[int]]) -> int:
    return int(np.linalg.matrix_rank(np.array(rows, dtype=float))) if rows else 0


def simple_system_graph(simple_roots: Sequence[Sequence[int]]) -> tuple[list[RootVec], list[set[int]]]:
    roots = [_require_root(r) for r in simple_roots]
    if len(set(roots)) != len(roots) or _rank(roots) != len(roots):
        raise DomainError("simple roots are not linearly independent")
    pm = _pairing_matrix(roots)
    adj: list[set[int]] = [set() for _ in roots]
    for i in range(len(roots)):
        for j in range(len(roots)):
            if i != j:
                if pm[i][j] not in (0, -1):
                    raise DomainError("pairwise pairings of a simple system must be 0 or -1")
                if pm[i][j] == -1:
                    adj[i].add(j)
    return roots, adj


def classify_type(simple_roots: Sequence[Sequence[int]]) -> CartanType:
    """Cartan type of a simple system, read off its Dynkin diagram."""
    roots, adj = simple_system_graph(simple_roots)
    comps = [_classify_tree(c, adj) for c in _connected_components(adj)]
    return CartanType(tuple(sorted(comps)))


def subsystem_components(simple_roots: Sequence[Sequence[int]]) -> list[list[RootVec]]:
    roots, adj = simple_system_graph(simple_roots)
    return [[roots[i] for i in comp] for comp in _connected_components(adj)]


def closure(simple_roots: Sequence[Sequence[int]]) -> frozenset[RootVec]:
    """The root subsystem generated by ``simple_roots`` (orbit under their reflections)."""
    gens = [tuple(r) for r in simple_roots]
    seen = set(gens)
    frontier = list(gens)
    while frontier:
        nxt = []
        for r in frontier:
            for s in gens:
                c = _form(r, s)
                if c:
                    img = tuple(a - c * b for a, b in zip(r, s))
                    if img not in seen:
                        seen.add(img)
                        nxt.append(img)
        frontier = nxt
    return frozenset(seen)


def local_max_height(simple_roots: Sequence[Sequence[int]]) -> int:
    """Maximal height of a root in the subsystem, measured in its own simple-root basis."""
    gens = [tuple(r) for r in simple_roots]
    k = len(gens)
    if k == 0:
        return 0
    # track each root together with its coordinates in the local basis
    start = {gens[i]: tuple(int(i == j) for j in range(k)) for i in range(k)}
    seen = dict(start)
    frontier = list(start.items())
    while frontier:
        nxt = []
        for r, coords in frontier:
            for i, s in enumerate(gens):
                c = _form(r, s)
                if c:
                    img = tuple(a - c * b for a, b in zip(r, s))
                    if img not in seen:
                        lc = tuple(x - c * (j == i) for j, x in enumerate(coords))
                        seen[img] = lc
                        nxt.append((img, lc))
        frontier = nxt
    return max(sum(c) for c in seen.values())


def orthogonal_system(pi1: Sequence[Sequence[int]]) -> tuple[frozenset[RootVec], list[RootVec]]:
    """Roots orthogonal to every root in ``pi1`` and a simple system for them."""
    pi1 = [_require_root(r) for r in pi1]
    phi2 = frozenset(r for r in generate_roots() if all(_form(r, s) == 0 for s in pi1))
    pos = [r for r in phi2 if all(x >= 0 for x in r)]
    posset = set(pos)
    decomposable = {add(a, b) for a in pos for b in pos} & posset
    pi2 = sorted(r for r in pos if r not in decomposable)
    return phi2, pi2


# ---------------------------------------------------------------------------
# Catalog of the closed subsystems that need to be examined


@dataclass(frozen=True)
class SubsystemSpec:
    """One closed subsystem: its fundamental system and the relations cutting out Z(R)."""

    label: str
    pi1: tuple[RootVec, ...]
    # each row (c1..c7, 0) encodes prod t_i^{c_i} = 1, i.e. sum c_i t_i = 0 in additive notation
    center_rows: tuple[tuple[int, ...], ...]
    mh: int
    cartan_type: str

    @property
    def key(self) -> str:
        return normalize_label(self.label)


def _rel(*terms: tuple[int, int]) -> tuple[int, ...]:
    out = [0] * (RANK + 1)
    for coef, idx in terms:
        out[idx - 1] += coef
    return tuple(out)


def _eq1(*idx: int) -> list[tuple[int, ...]]:
    # t_i = 1 for each listed i
    return [_rel((1, i)) for i in idx]


_N = neg(R0)
_R = NAMED_ROOTS

# label, fundamental system, relations, Cartan type
_TABLE: list[tuple[str, list[RootVec], list[tuple[int, ...]], str]] = [
    ("0", [], [], "0"),
    ("A1", [_N], _eq1(1), "A1"),
    ("A1^2", [_N, R11], _eq1(1, 6), "A1^2"),
    ("(A1^3)'", [_N, R10, R11], _eq1(1, 4, 6), "A1^3"),
    ("(A1^3)''", [_N, _R["r7"], R11], _eq1(1, 6) + [_rel((2, 7))], "A1^3"),
    ("(A1^4)'", [_N, _R["r7"], R10, R11], _eq1(1, 4, 6) + [_rel((2, 7))], "A1^4"),
    ("(A1^4)''", [_N, _R["r3"], R10, R11], _eq1(1, 4, 6) + [_rel((2, 3))], "A1^4"),
    ("A1^5", [_N, _R["r5"], _R["r7"], R10, R11], _eq1(1, 4, 6) + [_rel((2, 5)), _rel((2, 7))], "A1^5"),
    ("A3", [_N, _R["r1"], _R["r3"]], _eq1(1, 3, 4), "A3"),
    (
        "A3^2",
        [_N, _R["r1"], _R["r3"], _R["r5"], _R["r6"], _R["r7"]],
        _eq1(1, 3, 4) + [_rel((1, 5), (-3, 7)), _rel((1, 6), (-2, 7)), _rel((4, 7))],
        "A3^2",
    ),
    ("D4", [_N, _R["r1"], _R["r3"], R9], _eq1(1, 3, 4) + [_rel((1, 7), (-1, 5))], "D4"),
    (
        "(A5)'",
        [_N, _R["r1"], _R["r2"], _R["r3"], _R["r4"]],
        _eq1(1, 3, 4) + [_rel((1, 5), (1, 2)), _rel((2, 2))],
        "A5",
    ),
    (
        "(A5)''",
        [_N, _R["r1"], _R["r3"], _R["r4"], _R["r5"]],
        _eq1(1, 3, 4) + [_rel((1, 2), (1, 5)), _rel((1, 6), (-2, 5))],
        "A5",
    ),
    (
        "D5",
        [_N, _R["r1"], _R["r3"], _R["r4"], R9],
        _eq1(1, 3, 4) + [_rel((1, 5), (1, 2)), _rel((1, 7), (1, 2))],
        "D5",
    ),
    (
        "A7",
        [_N, _R["r1"], _R["r3"], _R["r4"], _R["r5"], _R["r6"], _R["r7"]],
        _eq1(1, 3, 4) + [_rel((1, 2), (-1, 7)), _rel((1, 5), (-3, 7)), _rel((1, 6), (-2, 7)), _rel((4, 7))],
        "A7",
    ),
    (
        "D6",
        [_N, _R["r1"], _R["r2"], _R["r3"], _R["r4"], _R["r5"]],
        _eq1(1, 3, 4, 6) + [_rel((1, 5), (-1, 2)), _rel((2, 2))],
        "D6",
    ),
    (
        "E6",
        [_N, _R["r1"], _R["r3"], _R["r4"], _R["r5"], R8],
        _eq1(1, 3, 4) + [_rel((1, 2), (1, 5)), _rel((1, 6), (-2, 5)), _rel((1, 7), (-1, 5))],
        "E6",
    ),
    (
        "E7",
        [simple_root(i) for i in range(1, RANK + 1)],
        _eq1(1, 3, 4, 6) + [_rel((1, 2), (-1, 5)), _rel((1, 5), (-1, 7)), _rel((2, 2))],
        "E7",
    ),
]


def normalize_label(label: str) -> str:
    """Canonical spelling of a catalog label: no parentheses, ``empty``/``∅`` mapped to ``0``."""
    s = label.strip().replace("(", "").replace(")", "").replace("′", "'").replace("″", "''")
    s = s.replace('"', "''")
    if s.lower() in ("", "empty", "∅", "none"):
        return "0"
    return s


@lru_cache(maxsize=1)
def catalog() -> tuple[SubsystemSpec, ...]:
    """The empty subsystem followed by the 17 subsystems of type alpha, in a fixed order."""
    out = []
    for label, pi1, rels, ctype in _TABLE:
        mh = CartanType(tuple(Component(c[0], int(c[1:])) for c in _expand(ctype))).max_height
        out.append(SubsystemSpec(label=label, pi1=tuple(pi1), center_rows=tuple(rels), mh=mh, cartan_type=ctype))
    return tuple(out)


def _expand(ctype: str) -> list[str]:
    if ctype == "0":
        return []
    out = []
    for part in ctype.split("x"):
        base, _, k = part.partition("^")
        out.extend([base] * int(k or 1))
    return out


def lookup(label: str) -> SubsystemSpec:
    key = normalize_label(label)
    for spec in catalog():
        if spec.key == key:
            return spec
    valid = ", ".join(s.label for s in catalog())
    raise DomainError(f"unknown subsystem {label!r}; valid labels: {valid}")


def pairing_relations(pi1: Iterable[Sequence[int]]) -> list[tuple[int, ...]]:
    """Centralizer conditions straight from the pairings: sum_i <r, r_i> t_i = 0 for r in pi1."""
    rows = []
    for r in pi1:
        rows.append(tuple(_form(r, simple_root(i)) for i in range(1, RANK + 1)) + (0,))
    return rows
