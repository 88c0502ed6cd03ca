"""Canonical forms, automorphism groups and orbits of word sets in Q_n.

Coordinate permutations are handled by individualization and refinement on
the word/coordinate incidence structure, with automorphism pruning and
backjumping. The full cube group adds translations: the set is moved so that
each candidate word sits at 0, and the candidates are limited to one class of
an isomorphism-invariant colouring of the words.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np
from sympy.combinatorics import Permutation, PermutationGroup

from .cube import CubeAutomorphism, as_array, bit_matrix, cube_group_order, permute_words


class GroupKind(str, enum.Enum):
    FULL_CUBE = "full_cube"
    PERM_ONLY = "perm_only"
    PERM_FIX_FIRST = "perm_fix_first"


@dataclass(frozen=True)
class GroupSpec:
    kind: GroupKind

    def order(self, n: int) -> int:
        if self.kind is GroupKind.FULL_CUBE:
            return cube_group_order(n)
        if self.kind is GroupKind.PERM_ONLY:
            return _factorial(n)
        return _factorial(n - 1)

    def __str__(self):
        return self.kind.value


FULL_CUBE = GroupSpec(GroupKind.FULL_CUBE)
PERM_ONLY = GroupSpec(GroupKind.PERM_ONLY)
PERM_FIX_FIRST = GroupSpec(GroupKind.PERM_FIX_FIRST)


def group_spec(kind: str | GroupKind | GroupSpec) -> GroupSpec:
    if isinstance(kind, GroupSpec):
        return kind
    return GroupSpec(GroupKind(kind))


def _factorial(k: int) -> int:
    out = 1
    for i in range(2, k + 1):
        out *= i
    return out


@dataclass(frozen=True, order=True)
class CanonicalKey:
    data: bytes

    def hex(self) -> str:
        return self.data.hex()


def _uf_find(parent: list[int], i: int) -> int:
    while parent[i] != i:
        parent[i] = parent[parent[i]]
        i = parent[i]
    return i


def _uf_union(parent: list[int], a: int, b: int) -> bool:
    ra, rb = _uf_find(parent, a), _uf_find(parent, b)
    if ra == rb:
        return False
    if ra < rb:
        parent[rb] = ra
    else:
        parent[ra] = rb
    return True


def _perm_group(gens: Sequence[Sequence[int]], degree: int) -> PermutationGroup:
    if not gens:
        return PermutationGroup([Permutation(list(range(degree)))])
    return PermutationGroup([Permutation(list(g)) for g in gens])


# coordinate permutations


_HASH = np.random.default_rng(0x5EED).integers(1, 2**63, size=(3, (1 << 16) + 2), dtype=np.uint64)


class PermCanon:
    """Canonical labeling of labelled words under coordinate permutations.

    ``labels`` colours the words; a permutation must preserve them.
    ``fix_first`` keeps coordinate 1 in place. After construction,
    ``labeling[j]`` is the 0-based target column of column ``j`` (column 0 is
    coordinate 1) and ``generators`` generate the automorphism group as
    0-based column maps.
    """

    def __init__(self, words: np.ndarray, n: int, labels: np.ndarray | None = None,
                 fix_first: bool = False):
        self.n = n
        self.words = np.asarray(words, dtype=np.int64)
        self.labels = (np.zeros(len(self.words), dtype=np.int64) if labels is None
                       else np.asarray(labels, dtype=np.int64))
        self.fix_first = fix_first
        self._M = bit_matrix(self.words, n).astype(np.uint64)
        self._MT = np.ascontiguousarray(self._M.T)
        self._label_hash = _HASH[2, self.labels]
        self._seen: dict[bytes, tuple[int, ...]] = {}
        self._paths: dict[bytes, tuple[int, ...]] = {}
        self.generators: list[tuple[int, ...]] = []
        self.best: bytes | None = None
        self.labeling: np.ndarray | None = None
        self.leaves = 0
        colour = np.zeros(n, dtype=np.int64)
        if fix_first and n > 1:
            colour[1:] = 1
        self._visit(self._refine(colour), ())

    def _refine(self, colour: np.ndarray) -> np.ndarray:
        """Split coordinate colours until stable.

        A word's colour hashes the multiset of its coordinates' colours; a
        coordinate's new colour is its old one plus a hash of the multiset of
        colours of the words containing it. Ids are ordered by these values
        only, so the result is isomorphism-invariant.
        """
        k = int(colour.max()) + 1
        if self.words.size == 0:
            return colour
        M, MT = self._M, self._MT
        while k < self.n:
            wkey = M @ _HASH[0, colour] + self._label_hash
            _, wcol = np.unique(wkey, return_inverse=True)
            ckey = MT @ _HASH[1, wcol.ravel()]
            pairs = sorted(set(zip(colour.tolist(), ckey.tolist())))
            if len(pairs) == k:
                break
            rank = {p: i for i, p in enumerate(pairs)}
            colour = np.array([rank[p] for p in zip(colour.tolist(), ckey.tolist())], dtype=np.int64)
            k = len(pairs)
        return colour

    @staticmethod
    def _individualize(colour: np.ndarray, v: int) -> np.ndarray:
        c = 2 * colour + (colour == colour[v])
        c[v] -= 1
        _, out = np.unique(c, return_inverse=True)
        return out.ravel()

    def _certificate(self, lab: np.ndarray) -> bytes:
        img = permute_words(self.words, lab, self.n) | (self.labels << self.n)
        img.sort()
        return img.astype(">i8").tobytes()

    def _stabilizer_orbits(self, path: tuple[int, ...]) -> list[int]:
        parent = list(range(self.n))
        for g in self.generators:
            if all(g[p] == p for p in path):
                for j in range(self.n):
                    _uf_union(parent, j, g[j])
        return [_uf_find(parent, j) for j in range(self.n)]

    def _visit(self, colour: np.ndarray, path: tuple[int, ...]) -> int:
        """Explore a node; return the depth at which the search resumes."""
        depth = len(path)
        if int(colour.max()) + 1 == self.n:
            return self._leaf(colour, path)
        counts = np.bincount(colour)
        target = int(np.flatnonzero(counts > 1)[0])
        cell = np.flatnonzero(colour == target).tolist()
        explored: list[int] = []
        ngens = -1
        orbit = None
        for v in cell:
            if explored:
                if ngens != len(self.generators):
                    orbit = self._stabilizer_orbits(path)
                    ngens = len(self.generators)
                if any(orbit[u] == orbit[v] for u in explored):
                    continue
            explored.append(v)
            r = self._visit(self._refine(self._individualize(colour, v)), path + (v,))
            if r < depth:
                return r
        return depth - 1

    def _leaf(self, lab: np.ndarray, path: tuple[int, ...]) -> int:
        self.leaves += 1
        cert = self._certificate(lab)
        lab_t = tuple(int(x) for x in lab)
        prev = self._seen.get(cert)
        if prev is None:
            self._seen[cert] = lab_t
            self._paths[cert] = path
            if self.best is None or cert < self.best:
                self.best = cert
                self.labeling = lab.copy()
            return len(path) - 1
        inv = [0] * self.n
        for j, p in enumerate(prev):
            inv[p] = j
        g = tuple(inv[lab_t[j]] for j in range(self.n))
        if any(g[j] != j for j in range(self.n)):
            self.generators.append(g)
        other = self._paths[cert]
        d = 0
        while d < min(len(path), len(other)) and path[d] == other[d]:
            d += 1
        return d

    @cached_property
    def group(self) -> PermutationGroup:
        return _perm_group(self.generators, self.n)

    @cached_property
    def order(self) -> int:
        return int(self.group.order()) if self.generators else 1

    def canonical_words(self) -> np.ndarray:
        return np.sort(permute_words(self.words, self.labeling, self.n))


def perm_canon(words: Iterable[int], n: int, fix_first: bool = False,
               marked: Iterable[int] | None = None) -> PermCanon:
    """Canonicalize ``words`` (optionally with a second ``marked`` set that
    must be preserved as well) under coordinate permutations."""
    base = as_array(words)
    if marked is None:
        return PermCanon(base, n, None, fix_first)
    mk = as_array(marked)
    allw = np.union1d(base, mk)
    labels = np.isin(allw, base).astype(np.int64) | (np.isin(allw, mk).astype(np.int64) << 1)
    return PermCanon(allw, n, labels, fix_first)


# full cube group


def word_classes(words: np.ndarray, n: int) -> np.ndarray:
    """Isomorphism-invariant colour of each word of a set.

    Weisfeiler-Leman style refinement on the graph joining words of the set at
    distance one or two. Colour ids are ordered by invariant data only.
    """
    m = len(words)
    if m == 0:
        return np.zeros(0, dtype=np.int64)
    index = np.full(1 << n, -1, dtype=np.int64)
    index[words] = np.arange(m)
    edges = []
    for d, masks in ((1, [1 << b for b in range(n)]),
                     (2, [(1 << a) | (1 << b) for a in range(n) for b in range(a + 1, n)])):
        src, dst = [], []
        for mask in masks:
            j = index[words ^ mask]
            ok = j >= 0
            src.append(np.flatnonzero(ok))
            dst.append(j[ok])
        edges.append((d, np.concatenate(src) if src else np.zeros(0, np.int64),
                      np.concatenate(dst) if dst else np.zeros(0, np.int64)))
    colour = np.zeros(m, dtype=np.int64)
    k = 1
    while True:
        cols = [colour.astype(np.uint64)]
        for d, src, dst in edges:
            acc = np.zeros(m, dtype=np.uint64)
            np.add.at(acc, src, _HASH[d, colour[dst]])
            cols.append(acc)
        _, new = np.unique(np.column_stack(cols), axis=0, return_inverse=True)
        new = new.ravel()
        k_new = int(new.max()) + 1
        if k_new == k:
            return colour
        colour, k = new, k_new


@dataclass(frozen=True)
class AffineMap:
    """``x -> permute(x) ^ translation`` with a 0-based column map."""

    perm: tuple[int, ...]
    translation: int

    def apply(self, words: np.ndarray, n: int) -> np.ndarray:
        return permute_words(words, self.perm, n) ^ self.translation

    def to_automorphism(self, n: int) -> CubeAutomorphism:
        return CubeAutomorphism(n, self.translation, tuple(p + 1 for p in self.perm))


class CubeCanon:
    """Canonical form and automorphism group of a set under the full cube group."""

    def __init__(self, words: Iterable[int], n: int):
        self.n = n
        self.words = as_array(words)
        m = len(self.words)
        self.generators: list[AffineMap] = []
        self._index = np.full(1 << n, -1, dtype=np.int64)
        self._index[self.words] = np.arange(m)
        self._parent = list(range(m))
        self.per_base: dict[int, PermCanon] = {}
        if m == 0:
            self.key_bytes = b""
            self.base = None
            self.stabilizer = PermCanon(self.words, n)
            return
        colour = word_classes(self.words, n)
        sizes = np.bincount(colour)
        # smallest class, ties by colour id
        target = min(range(len(sizes)), key=lambda c: (sizes[c], c))
        candidates = self.words[colour == target]
        found: dict[bytes, tuple[int, PermCanon]] = {}
        best = None
        self.base = int(candidates[0])
        for t in candidates.tolist():
            if any(_uf_find(self._parent, self._index[t]) == _uf_find(self._parent, self._index[s])
                   for s in self.per_base):
                continue
            pc = PermCanon(np.sort(self.words ^ t), n)
            self.per_base[t] = pc
            for g in pc.generators:
                # conjugate back: x -> g(x ^ t) ^ t
                self._add(AffineMap(g, t ^ _perm_word(t, g, n)))
            hit = found.get(pc.best)
            if hit is None:
                found[pc.best] = (t, pc)
                if best is None or pc.best < best:
                    best = pc.best
            else:
                s, ps = hit
                # C^t and C^s share a canonical image: x -> lab_s^-1 lab_t (x ^ t) ^ s
                inv_s = np.argsort(ps.labeling)
                perm = tuple(int(inv_s[pc.labeling[j]]) for j in range(n))
                self._add(AffineMap(perm, _perm_word(t, perm, n) ^ s))
        self.key_bytes = best
        self.stabilizer = self.per_base[self.base]

    def _add(self, g: AffineMap) -> None:
        img = g.apply(self.words, self.n)
        j = self._index[img]
        if np.any(j < 0):
            raise AssertionError("generator does not preserve the set")
        if np.array_equal(j, np.arange(len(self.words))):
            return
        self.generators.append(g)
        for a, b in enumerate(j.tolist()):
            _uf_union(self._parent, a, b)

    def orbit_labels(self) -> np.ndarray:
        return np.array([_uf_find(self._parent, i) for i in range(len(self.words))], dtype=np.int64)

    def orbits(self) -> list[np.ndarray]:
        lab = self.orbit_labels()
        return [self.words[lab == r] for r in np.unique(lab)]

    @cached_property
    def order(self) -> int:
        if self.base is None:
            return cube_group_order(self.n)
        lab = self.orbit_labels()
        orbit = int(np.count_nonzero(lab == lab[self._index[self.base]]))
        return orbit * self.stabilizer.order

    def key(self) -> CanonicalKey:
        return CanonicalKey(bytes([self.n]) + b"C" + self.key_bytes)


def _perm_word(x: int, perm: Sequence[int], n: int) -> int:
    y = 0
    for j, p in enumerate(perm):
        if x >> (n - 1 - j) & 1:
            y |= 1 << (n - 1 - p)
    return y


# public operations


def canonical_key(C: Iterable[int], n: int, group: GroupSpec | str = FULL_CUBE,
                  marked: Iterable[int] | None = None) -> CanonicalKey:
    """Key equal for two sets iff they lie in one orbit of ``group``.

    ``marked`` (permutation groups only) restricts the group to the
    permutations that also preserve that set.
    """
    g = group_spec(group)
    if g.kind is GroupKind.FULL_CUBE:
        if marked is not None:
            raise ValueError("marked sets are supported for permutation groups only")
        return CubeCanon(C, n).key()
    pc = perm_canon(C, n, g.kind is GroupKind.PERM_FIX_FIRST, marked)
    tag = b"F" if g.kind is GroupKind.PERM_FIX_FIRST else b"P"
    return CanonicalKey(bytes([n]) + tag + (pc.best or b""))


def canonical_form(C: Iterable[int], n: int, group: GroupSpec | str = FULL_CUBE) -> frozenset[int]:
    """A fixed member of the orbit of ``C``, equal for equivalent sets."""
    g = group_spec(group)
    if g.kind is GroupKind.FULL_CUBE:
        cc = CubeCanon(C, n)
        if cc.base is None:
            return frozenset()
        t, pc = min(((t, pc) for t, pc in cc.per_base.items()), key=lambda item: item[1].best)
        return frozenset(pc.canonical_words().tolist())
    pc = perm_canon(C, n, g.kind is GroupKind.PERM_FIX_FIRST)
    return frozenset(pc.canonical_words().tolist())


def aut_group_order(C: Iterable[int], n: int, group: GroupSpec | str = FULL_CUBE,
                    marked: Iterable[int] | None = None) -> int:
    g = group_spec(group)
    if g.kind is GroupKind.FULL_CUBE:
        return CubeCanon(C, n).order
    return perm_canon(C, n, g.kind is GroupKind.PERM_FIX_FIRST, marked).order


def automorphism_generators(C: Iterable[int], n: int) -> list[CubeAutomorphism]:
    return [g.to_automorphism(n) for g in CubeCanon(C, n).generators]


def are_equivalent(A: Iterable[int], B: Iterable[int], n: int, group: GroupSpec | str = FULL_CUBE) -> bool:
    return canonical_key(A, n, group) == canonical_key(B, n, group)


def translational_periods(C: Iterable[int], n: int) -> frozenset[int]:
    """All ``x`` with ``C + x = C``."""
    words = as_array(C)
    if words.size == 0:
        return frozenset(range(1 << n))
    mask = np.zeros(1 << n, dtype=bool)
    mask[words] = True
    out = []
    for x in (words ^ words[0]).tolist():
        if mask[words ^ x].all():
            out.append(x)
    return frozenset(out)


def orbit_count(C: Iterable[int], n: int) -> int:
    """Number of orbits of the automorphism group on ``C`` itself."""
    cc = CubeCanon(C, n)
    return len(np.unique(cc.orbit_labels())) if cc.words.size else 0


def class_size(C: Iterable[int], n: int) -> int:
    total = cube_group_order(n)
    order = aut_group_order(C, n)
    if total % order:
        raise AssertionError("automorphism group order does not divide the cube group order")
    return total // order


# lexicographically least representative


@dataclass
class _State:
    t: int
    seq: tuple[int, ...]
    base: np.ndarray = field(repr=False)


def lexicographic_min_cell(C: Iterable[int], n: int) -> frozenset[int]:
    """The image of ``C`` under the full cube group whose ascending word list is least.

    Equivalently the image whose indicator, read in ascending word order, is
    largest. The image is built from the least significant coordinate
    upwards: after placing ``k`` coordinates, the indicator on the words below
    ``2**k`` is fixed, and only states attaining its maximum survive. States
    related by automorphisms of the set are merged.
    """
    words = as_array(C)
    if words.size == 0:
        return frozenset()
    mask = np.zeros(1 << n, dtype=bool)
    mask[words] = True
    cc = CubeCanon(words, n)
    lab = cc.orbit_labels()
    reps = sorted({int(words[np.flatnonzero(lab == r)[0]]) for r in np.unique(lab)})
    groups: dict[int, PermutationGroup] = {}
    for t in reps:
        pc = cc.per_base.get(t) or PermCanon(np.sort(words ^ t), n)
        groups[t] = pc.group
    states = [_State(t, (), np.zeros(1, dtype=np.int64)) for t in reps]
    for k in range(n):
        best_half = None
        nxt: list[_State] = []
        for st in states:
            used = set(st.seq)
            free = [c for c in range(n) if c not in used]
            G = groups[st.t]
            if G.order() > 1:
                stab = G.pointwise_stabilizer(list(st.seq)) if st.seq else G
                orbit_of = {}
                for orb in stab.orbits():
                    r = min(orb)
                    for c in orb:
                        orbit_of[c] = r
                free = sorted({orbit_of.get(c, c) for c in free})
            for c in free:
                bit = 1 << (n - 1 - c)
                half = mask[(st.base | bit) ^ st.t]
                hb = half.tobytes()
                if best_half is None or hb > best_half:
                    best_half = hb
                    nxt = []
                if hb == best_half:
                    nxt.append(_State(st.t, st.seq + (c,), np.concatenate([st.base, st.base | bit])))
        states = _dedupe(nxt, groups)
    st = states[0]
    # column seq[i] goes to column n-1-i
    perm = [0] * n
    for i, c in enumerate(st.seq):
        perm[c] = n - 1 - i
    img = permute_words(words ^ st.t, perm, n)
    return frozenset(img.tolist())


def _dedupe(states: list[_State], groups: dict[int, PermutationGroup]) -> list[_State]:
    seen = set()
    out = []
    for st in states:
        key = (st.t, st.seq)
        if key not in seen:
            seen.add(key)
            out.append(st)
    return out
