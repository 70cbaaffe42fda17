"""W(E7) as 7x7 integer matrices acting on root coordinates from the right.

Row ``i`` of the matrix of ``w`` holds the coordinates of ``r_i w``, so a root
``r`` (a row vector) maps to ``r @ M``, and ``M_{uv} = M_u @ M_v``.

Elements are keyed by the image of ``2*rho`` (the sum of positive roots);
``W`` acts simply transitively on that orbit, so the key is injective.
"""

from __future__ import annotations

import hashlib
import logging
import os
import struct
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from . import rootsys
from .errors import DomainError, StructuralError
from .rootsys import CARTAN_NP, RANK, RootVec

log = logging.getLogger(__name__)

W_ORDER = 2903040
W_CLASS_COUNT = 60

CACHE_MAGIC = b"E7WEYL\x00\x01"
CACHE_VERSION = 1
CACHE_ENV = "E7SPECTRA_CACHE"
_HEADER = struct.Struct("<8sIQ")

TWO_RHO = np.sum(np.array(rootsys.positive_roots(), dtype=np.int64), axis=0)
_KEY_OFFSET = 128  # |coordinates of any image of 2*rho| <= max(TWO_RHO) = 96
_KEY_SHIFTS = np.array([8 * k for k in range(RANK - 1, -1, -1)], dtype=np.int64)

# 2 * Cartan^{-1} is integral because det(Cartan) = 2
_TWO_CARTAN_INV = np.rint(2 * np.linalg.inv(CARTAN_NP.astype(float))).astype(np.int64)


def keys_of_vectors(vecs: np.ndarray) -> np.ndarray:
    v = np.asarray(vecs, dtype=np.int64) + _KEY_OFFSET
    return (v << _KEY_SHIFTS).sum(axis=-1)


def keys_of(mats: np.ndarray) -> np.ndarray:
    """Injective int64 key of each matrix in a (n, 7, 7) stack."""
    return keys_of_vectors(np.einsum("j,njk->nk", TWO_RHO, np.asarray(mats, dtype=np.int64)))


def as_matrix(w: Sequence[Sequence[int]] | np.ndarray) -> np.ndarray:
    m = np.asarray(w, dtype=np.int64)
    if m.shape != (RANK, RANK):
        raise DomainError(f"expected a {RANK}x{RANK} matrix, got shape {m.shape}")
    return m


def to_tuple(m: np.ndarray) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(int(x) for x in row) for row in np.asarray(m))


def identity() -> np.ndarray:
    return np.eye(RANK, dtype=np.int64)


def simple_reflection(i: int) -> np.ndarray:
    """Matrix of the reflection in ``r_i``: r -> r - <r, r_i> r_i."""
    return reflection(rootsys.simple_root(i))


def reflection(r: Sequence[int]) -> np.ndarray:
    """Matrix of the reflection in the root ``r``."""
    r = tuple(int(x) for x in r)
    if not rootsys.is_root(r):
        raise DomainError(f"{r} is not a root of E7")
    rv = np.array(r, dtype=np.int64)
    # row i is r_i - <r_i, r> r
    pair = CARTAN_NP @ rv
    return identity() - np.outer(pair, rv)


def inverse(m: np.ndarray) -> np.ndarray:
    """Inverse of Weyl group matrices (works on stacks): M^{-1} = C M^T C^{-1}."""
    m = np.asarray(m, dtype=np.int64)
    mt = np.swapaxes(m, -1, -2)
    out = CARTAN_NP @ mt @ _TWO_CARTAN_INV
    return out // 2


def permutes_roots(m: np.ndarray) -> bool:
    roots = np.array(rootsys.generate_roots(), dtype=np.int64)
    img = roots @ as_matrix(m)
    return set(map(tuple, img.tolist())) == rootsys.root_set()


def element_order(m: np.ndarray) -> int:
    m = as_matrix(m)
    acc, k = m.copy(), 1
    e = identity()
    while not np.array_equal(acc, e):
        acc = acc @ m
        k += 1
        if k > 30:
            raise StructuralError("matrix has no finite order <= 30")
    return k


def _lex_words(mats: np.ndarray) -> list[np.ndarray]:
    """Pack the 49 entries (each in [-4, 4]) into four uint64 words preserving lex order."""
    flat = np.asarray(mats, dtype=np.int64).reshape(len(mats), -1) + 4
    words = []
    for start in range(0, RANK * RANK, 16):
        chunk = flat[:, start : start + 16]
        w = np.zeros(len(mats), dtype=np.uint64)
        for k in range(chunk.shape[1]):
            w = (w << np.uint64(4)) | chunk[:, k].astype(np.uint64)
        words.append(w)
    return words


# ---------------------------------------------------------------------------
# Enumeration and caching


def _bfs(generators: Sequence[np.ndarray], start: np.ndarray | None = None) -> np.ndarray:
    """Closure of a set of matrices under right multiplication by ``generators``."""
    gens = [np.asarray(g, dtype=np.int64) for g in generators]
    start = identity()[None] if start is None else np.asarray(start, dtype=np.int64)
    frontier = start.astype(np.int8)
    layers = [frontier]
    seen_keys = [np.unique(keys_of(frontier))]
    all_keys = seen_keys[0]
    while len(frontier):
        cands = np.concatenate([(frontier.astype(np.int64) @ g).astype(np.int8) for g in gens])
        ck = keys_of(cands)
        ck, first = np.unique(ck, return_index=True)
        cands = cands[first]
        fresh = ~np.isin(ck, all_keys, assume_unique=True)
        frontier = cands[fresh]
        if len(frontier):
            layers.append(frontier)
            all_keys = np.union1d(all_keys, ck[fresh])
    return np.concatenate(layers)


def _enumerate_w() -> np.ndarray:
    """BFS over reduced-word length; neighbours of layer L lie in layers L-1 and L+1."""
    gens = [simple_reflection(i) for i in range(1, RANK + 1)]
    prev_keys = np.empty(0, dtype=np.int64)
    frontier = identity()[None].astype(np.int8)
    frontier_keys = keys_of(frontier)
    layers = [frontier]
    while len(frontier):
        cands = np.concatenate([(frontier.astype(np.int64) @ g).astype(np.int8) for g in gens])
        ck = keys_of(cands)
        ck, first = np.unique(ck, return_index=True)
        fresh = ~np.isin(ck, prev_keys, assume_unique=True)
        prev_keys = frontier_keys
        frontier = cands[first[fresh]]
        frontier_keys = ck[fresh]
        if len(frontier):
            layers.append(frontier)
    return np.concatenate(layers)


def default_cache_path() -> Path:
    env = os.environ.get(CACHE_ENV)
    if env:
        return Path(env)
    base = os.environ.get("XDG_CACHE_HOME") or os.path.join(os.path.expanduser("~"), ".cache")
    return Path(base) / "e7spectra" / f"weyl_e7_v{CACHE_VERSION}.bin"


def write_cache(path: Path, mats: np.ndarray) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(path.suffix + ".tmp")
    with open(tmp, "wb") as fh:
        fh.write(_HEADER.pack(CACHE_MAGIC, CACHE_VERSION, len(mats)))
        fh.write(np.ascontiguousarray(mats, dtype=np.int8).tobytes())
    os.replace(tmp, path)


def read_cache(path: Path) -> np.ndarray | None:
    """Cached elements, or None when the file is missing or its header/length is off."""
    try:
        with open(path, "rb") as fh:
            head = fh.read(_HEADER.size)
            if len(head) != _HEADER.size:
                return None
            magic, version, count = _HEADER.unpack(head)
            if magic != CACHE_MAGIC or version != CACHE_VERSION or count != W_ORDER:
                return None
            raw = fh.read()
    except OSError:
        return None
    if len(raw) != count * RANK * RANK:
        return None
    return np.frombuffer(raw, dtype=np.int8).reshape(count, RANK, RANK).copy()


@dataclass
class Subgroup:
    """A materialized subgroup of W, stored as sorted indices into the ambient element table."""

    ambient: "WeylGroup"
    idx: np.ndarray
    generators: list[np.ndarray] = field(default_factory=list)

    @property
    def order(self) -> int:
        return int(len(self.idx))

    @property
    def mats(self) -> np.ndarray:
        return self.ambient.mats[self.idx]

    @property
    def keys(self) -> np.ndarray:
        return self.ambient.keys[self.idx]

    def __contains__(self, m: object) -> bool:
        return self.contains_all(as_matrix(m)[None])  # type: ignore[arg-type]

    def contains_all(self, mats: np.ndarray) -> bool:
        mats = np.asarray(mats, dtype=np.int64).reshape(-1, RANK, RANK)
        ks = keys_of(mats)
        pos = np.searchsorted(self.keys, ks).clip(max=len(self.idx) - 1)
        if not np.all(self.keys[pos] == ks):
            return False
        return bool(np.all(self.ambient.mats[self.idx[pos]] == mats))


@dataclass(frozen=True)
class ConjClass:
    representative: tuple[tuple[int, ...], ...]
    size: int
    order: int
    trace: int

    @property
    def matrix(self) -> np.ndarray:
        return np.array(self.representative, dtype=np.int64)


class WeylGroup:
    """All 2,903,040 elements of W(E7), sorted by key."""

    def __init__(self, mats: np.ndarray):
        keys = keys_of(mats)
        order = np.argsort(keys, kind="stable")
        self.keys = keys[order]
        self.mats = np.ascontiguousarray(mats[order], dtype=np.int8)
        if len(self.keys) != W_ORDER or np.any(np.diff(self.keys) == 0):
            raise StructuralError("element table is not a valid enumeration of W(E7)")
        self.generators = [simple_reflection(i) for i in range(1, RANK + 1)]

    @property
    def order(self) -> int:
        return len(self.keys)

    def index_of(self, mats: np.ndarray) -> np.ndarray:
        """Positions of each matrix in the element table; -1 for non-members."""
        ks = keys_of(np.asarray(mats).reshape(-1, RANK, RANK))
        pos = np.searchsorted(self.keys, ks).clip(max=len(self.keys) - 1)
        hit = (self.keys[pos] == ks) & np.all(
            self.mats[pos].astype(np.int64) == np.asarray(mats).reshape(-1, RANK, RANK), axis=(1, 2)
        )
        return np.where(hit, pos, -1)

    def whole(self) -> Subgroup:
        return Subgroup(self, np.arange(self.order), list(self.generators))

    def subgroup(self, idx: np.ndarray, generators: Sequence[np.ndarray] | None = None) -> Subgroup:
        idx = np.unique(np.asarray(idx, dtype=np.int64))
        return Subgroup(self, idx, list(generators) if generators is not None else [])

    def generate(self, generators: Sequence[Sequence[Sequence[int]]]) -> Subgroup:
        gens = [as_matrix(g) for g in generators]
        mats = _bfs(gens) if gens else identity()[None]
        idx = self.index_of(mats)
        if np.any(idx < 0):
            raise DomainError("generators are not elements of W(E7)")
        return self.subgroup(idx, gens)


_W_SINGLETON: WeylGroup | None = None


def enumerate_w(cache: str | os.PathLike | None = None, use_cache: bool = True) -> WeylGroup:
    """Materialize W(E7); the result is memoized and optionally cached on disk."""
    global _W_SINGLETON
    if _W_SINGLETON is not None:
        return _W_SINGLETON
    path = Path(cache) if cache is not None else default_cache_path()
    mats = read_cache(path) if use_cache else None
    group = None
    if mats is not None:
        try:
            group = WeylGroup(mats)
        except StructuralError:
            log.info("discarding corrupt Weyl cache at %s", path)
            group = None
    if group is None:
        log.info("enumerating W(E7)")
        group = WeylGroup(_enumerate_w())
        if use_cache:
            try:
                write_cache(path, group.mats)
            except OSError as exc:  # cache is a convenience only
                log.warning("could not write Weyl cache %s: %s", path, exc)
    _W_SINGLETON = group
    return group


# ---------------------------------------------------------------------------
# Stabilizers


def _images(mats: np.ndarray, r: Sequence[int]) -> np.ndarray:
    """``r @ M`` for every matrix in an int8 stack, using only the rows where ``r`` is nonzero."""
    acc = np.zeros((len(mats), RANK), dtype=np.int16)
    for j, c in enumerate(r):
        if c:
            acc += np.int16(c) * mats[:, j, :].astype(np.int16)
    return acc


def _matches_any(img: np.ndarray, targets: Sequence[Sequence[int]]) -> np.ndarray:
    if len(targets) == 1:
        return np.all(img == np.array(targets[0], dtype=np.int16), axis=1)
    want = keys_of_vectors(np.array(targets, dtype=np.int64))
    return np.isin(keys_of_vectors(img.astype(np.int64)), want)


def setwise_stabilizer(roots: Iterable[Sequence[int]], within: Subgroup) -> Subgroup:
    """Elements ``w`` of ``within`` with ``roots @ w == roots`` as sets."""
    roots = [tuple(int(x) for x in r) for r in roots]
    if not roots:
        return Subgroup(within.ambient, within.idx.copy(), list(within.generators))
    idx = within.idx
    for r in roots:
        img = _images(within.ambient.mats[idx], r)
        idx = idx[_matches_any(img, roots)]
    return Subgroup(within.ambient, idx)


def subsystem_stabilizer(pi1: Sequence[Sequence[int]], within: Subgroup) -> Subgroup:
    """Elements of ``within`` stabilizing the subsystem generated by ``pi1``.

    It suffices that ``pi1`` lands inside the subsystem: the image of the subsystem
    is generated from the image of ``pi1`` by its own reflections.
    """
    pi1 = [tuple(int(x) for x in r) for r in pi1]
    if not pi1:
        return Subgroup(within.ambient, within.idx.copy(), list(within.generators))
    phi1 = sorted(rootsys.closure(pi1))
    idx = within.idx
    for r in pi1:
        img = _images(within.ambient.mats[idx], r)
        idx = idx[_matches_any(img, phi1)]
    return Subgroup(within.ambient, idx)


def pointwise_stabilizer(roots: Iterable[Sequence[int]], within: Subgroup) -> Subgroup:
    """Elements of ``within`` fixing every listed root."""
    roots = [tuple(int(x) for x in r) for r in roots]
    if not roots:
        return Subgroup(within.ambient, within.idx.copy(), list(within.generators))
    idx = within.idx
    for r in roots:
        img = _images(within.ambient.mats[idx], r)
        idx = idx[_matches_any(img, [r])]
    return Subgroup(within.ambient, idx)


def reflection_subgroup(roots: Iterable[Sequence[int]], group: WeylGroup) -> Subgroup:
    """Subgroup generated by reflections in the given roots."""
    roots = list(roots)
    return group.generate([reflection(r) for r in roots])


# ---------------------------------------------------------------------------
# Conjugacy classes


def find_generators(sub: Subgroup, seed: int = 0) -> list[np.ndarray]:
    """A small generating set for a materialized subgroup (deterministic greedy choice)."""
    if sub.generators:
        return sub.generators
    mats = sub.mats.astype(np.int64)
    if sub.order == 1:
        return []
    rng = np.random.default_rng(seed)
    gens: list[np.ndarray] = []
    covered = sub.ambient.generate([]).keys
    while len(covered) < sub.order:
        outside = np.flatnonzero(~np.isin(sub.keys, covered, assume_unique=True))
        pick = mats[outside[rng.integers(len(outside))]]
        gens.append(pick)
        covered = np.unique(keys_of(_bfs(gens)))
    sub.generators = gens
    return gens


def class_labels(sub: Subgroup) -> tuple[np.ndarray, int]:
    """Connected components of the conjugation action of the generators on ``sub``."""
    gens = find_generators(sub)
    n = sub.order
    mats = sub.mats
    keys = sub.keys
    rows, cols = [], []
    chunk = 1 << 18
    for g in gens:
        gi = inverse(g)
        left = TWO_RHO @ gi  # key of g^-1 x g is 2rho g^-1 x g
        for start in range(0, n, chunk):
            block = mats[start : start + chunk].astype(np.int64)
            img = np.einsum("j,njk->nk", left, block) @ g
            pos = np.searchsorted(keys, keys_of_vectors(img))
            if np.any(pos >= n) or np.any(keys[pos.clip(max=n - 1)] != keys_of_vectors(img)):
                raise StructuralError("conjugate left the subgroup")
            rows.append(np.arange(start, start + len(block)))
            cols.append(pos)
    if not rows:
        return np.arange(n), n
    r = np.concatenate(rows)
    c = np.concatenate(cols)
    graph = coo_matrix((np.ones(len(r), dtype=np.int8), (r, c)), shape=(n, n))
    count, labels = connected_components(graph, directed=True, connection="weak")
    return labels, count


_CLASS_MEMO: dict[tuple[int, int, bytes], list[ConjClass]] = {}


def conjugacy_classes(sub: Subgroup) -> list[ConjClass]:
    """Classes of ``sub`` with lexicographically minimal representatives, sorted by representative."""
    memo_key = (id(sub.ambient), sub.order, hashlib.sha256(sub.keys.tobytes()).digest())
    if memo_key not in _CLASS_MEMO:
        _CLASS_MEMO[memo_key] = _conjugacy_classes(sub)
    return list(_CLASS_MEMO[memo_key])


def _conjugacy_classes(sub: Subgroup) -> list[ConjClass]:
    labels, count = class_labels(sub)
    mats = sub.mats
    words = _lex_words(mats)
    order = np.lexsort(tuple(reversed(words)) + (labels,))
    sorted_labels = labels[order]
    firsts = order[np.r_[True, sorted_labels[1:] != sorted_labels[:-1]]]
    sizes = np.bincount(labels, minlength=count)
    out = []
    for pos in firsts:
        rep = mats[pos].astype(np.int64)
        out.append(
            ConjClass(
                representative=to_tuple(rep),
                size=int(sizes[labels[pos]]),
                order=element_order(rep),
                trace=int(np.trace(rep)),
            )
        )
    out.sort(key=lambda c: tuple(x for row in c.representative for x in row))
    return out


def class_index_of(classes: Sequence[ConjClass], m: np.ndarray, sub: Subgroup) -> int:
    """Position in ``classes`` of the class containing ``m``."""
    labels, _ = class_labels(sub)
    pos = np.searchsorted(sub.keys, keys_of(as_matrix(m)[None]))[0]
    if pos >= sub.order or sub.keys[pos] != keys_of(as_matrix(m)[None])[0]:
        raise DomainError("matrix is not in the subgroup")
    reps = {labels[int(np.searchsorted(sub.keys, keys_of(c.matrix[None])[0]))]: i for i, c in enumerate(classes)}
    return reps[labels[pos]]


# ---------------------------------------------------------------------------
# Longest elements


def longest_element(pi1: Sequence[Sequence[int]]) -> np.ndarray:
    """w0 of the subsystem with simple system ``pi1``: sends its positive roots to negatives.

    Walks ``2*rho_1`` down to the antidominant chamber by simple reflections of ``pi1``;
    W1 acts simply transitively on that orbit, and the endpoint is ``-2*rho_1``.
    """
    pi1 = [tuple(int(x) for x in r) for r in pi1]
    if not pi1:
        return identity()
    rootsys.simple_system_graph(pi1)
    phi1 = rootsys.closure(pi1)
    basis = np.array(pi1, dtype=np.int64)
    gram = basis @ CARTAN_NP
    x = np.zeros(RANK, dtype=np.int64)
    for r in phi1:
        rv = np.array(r, dtype=np.int64)
        if _positive_in(rv, pi1):
            x += rv
    w = identity()
    while True:
        pairings = gram @ x
        hits = np.flatnonzero(pairings > 0)
        if not len(hits):
            break
        i = int(hits[0])
        x = x - pairings[i] * basis[i]
        w = w @ reflection(pi1[i])
    return w


def _positive_in(rv: np.ndarray, pi1: list) -> bool:
    coords, *_ = np.linalg.lstsq(np.array(pi1, dtype=float).T, rv.astype(float), rcond=None)
    return bool(np.all(np.rint(coords) >= 0))


def theta_minus_one(pi1: Sequence[Sequence[int]]) -> np.ndarray:
    """The image of -1 in N_W(Pi1): -w0(Pi1)."""
    return -longest_element(pi1)


# ---------------------------------------------------------------------------
# Signed cycle types for D_n subsystems


@dataclass(frozen=True)
class SignedCycleType:
    cycles: tuple[tuple[int, int], ...]  # (length, sign) with sign in {+1, -1}, sorted

    def __str__(self) -> str:
        return "[" + ", ".join(f"{ln}" if sg > 0 else f"{ln}-" for ln, sg in self.cycles) + "]"

    @property
    def negative_count(self) -> int:
        return sum(1 for _, sg in self.cycles if sg < 0)

    @property
    def rank(self) -> int:
        return sum(ln for ln, _ in self.cycles)


def d_coordinates(pi2: Sequence[Sequence[int]]) -> list[RootVec]:
    """Vectors ``2 e_1, ..., 2 e_n`` of a D_n realization, in E7 root coordinates.

    The simple system is ordered as a D_n diagram ``a_1 - ... - a_{n-2} < a_{n-1}, a_n``
    with ``a_i = e_i - e_{i+1}`` and ``a_n = e_{n-1} + e_n``.
    """
    roots, adj = rootsys.simple_system_graph(pi2)
    ctype = rootsys.classify_type(roots)
    if len(ctype.components) != 1 or ctype.components[0].letter != "D":
        raise DomainError(f"expected a system of type D_n, got {ctype}")
    n = len(roots)
    branch = next(i for i in range(n) if len(adj[i]) == 3)
    leaves = sorted((i for i in adj[branch] if len(adj[i]) == 1), key=lambda i: roots[i])
    fork = leaves[-2:] if n > 4 else leaves[1:]
    tail_start = next(i for i in adj[branch] if i not in fork)
    chain = [branch]
    prev, cur = branch, tail_start
    while True:
        chain.append(cur)
        nxt = [y for y in adj[cur] if y != prev]
        if not nxt:
            break
        prev, cur = cur, nxt[0]
    order = list(reversed(chain)) + list(fork)  # a_1 .. a_{n-2}, a_{n-1}, a_n
    a = [np.array(roots[i], dtype=np.int64) for i in order]
    two_e = [None] * n
    two_e[n - 1] = a[n - 1] - a[n - 2]
    two_e[n - 2] = a[n - 1] + a[n - 2]
    for i in range(n - 3, -1, -1):
        two_e[i] = 2 * a[i] + two_e[i + 1]
    return [tuple(int(x) for x in v) for v in two_e]


def signed_permutation(w: np.ndarray, pi2: Sequence[Sequence[int]]) -> list[int]:
    """``w`` on the D_n coordinates as a signed permutation: e_i w = sign * e_{|perm[i]|}."""
    w = as_matrix(w)
    basis = d_coordinates(pi2)
    lookup = {}
    for j, v in enumerate(basis):
        lookup[v] = j + 1
        lookup[tuple(-x for x in v)] = -(j + 1)
    perm = []
    for v in basis:
        img = tuple(int(x) for x in np.array(v, dtype=np.int64) @ w)
        if img not in lookup:
            raise DomainError("element does not act on the D_n coordinates as a signed permutation")
        perm.append(lookup[img])
    return perm


def signed_cycle_type(w: np.ndarray, pi2: Sequence[Sequence[int]]) -> SignedCycleType:
    """Signed cycle type of ``w`` restricted to the D_n subsystem with simple system ``pi2``."""
    w = as_matrix(w)
    phi2 = rootsys.closure([tuple(r) for r in pi2])
    for r in pi2:
        if tuple(int(x) for x in np.array(r) @ w) not in phi2:
            raise DomainError("element does not stabilize the span of the subsystem")
    perm = signed_permutation(w, pi2)
    n = len(perm)
    seen = [False] * n
    cycles = []
    for i in range(n):
        if seen[i]:
            continue
        length, sign, j = 0, 1, i
        while not seen[j]:
            seen[j] = True
            length += 1
            sign *= 1 if perm[j] > 0 else -1
            j = abs(perm[j]) - 1
        cycles.append((length, sign))
    cycles.sort(key=lambda c: (-c[0], -c[1]))
    return SignedCycleType(tuple(cycles))


def class_statistics(classes: Sequence[ConjClass]) -> Counter:
    return Counter((c.order, c.trace) for c in classes)
