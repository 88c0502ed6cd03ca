"""Words, subcubes and automorphisms of the binary n-cube.

A word is a plain ``int``. Coordinate 1 is the most significant of the ``n``
used bits, so ``word_to_str`` prints coordinate 1 first and numeric order on
words is the lexicographic order of their 0/1 strings.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

MAX_N = 16


def check_dimension(n: int) -> None:
    if not 1 <= n <= MAX_N:
        raise ValueError(f"dimension must be in 1..{MAX_N}, got {n}")


def unit(i: int, n: int) -> int:
    """The word with a single one at coordinate ``i`` (1-based)."""
    return 1 << (n - i)


def weight(x: int) -> int:
    return x.bit_count()


def complement(x: int, n: int) -> int:
    return x ^ ((1 << n) - 1)


def starts_with_one(x: int, n: int) -> bool:
    return bool(x >> (n - 1) & 1)


def neighbors(x: int, n: int) -> list[int]:
    """Words at distance one from ``x``, ordered by flipped coordinate."""
    return [x ^ (1 << (n - i)) for i in range(1, n + 1)]


def orthogonal(x: int, y: int) -> bool:
    """True iff ``x`` and ``y`` have no ones in the same position."""
    return x & y == 0


def distance(x: int, y: int) -> int:
    return (x ^ y).bit_count()


def word_from_str(s: str) -> int:
    s = s.strip()
    if not s or set(s) - {"0", "1"}:
        raise ValueError(f"not a 0/1 word: {s!r}")
    return int(s, 2)


def word_to_str(x: int, n: int) -> str:
    return format(x, f"0{n}b")


def words_of_weight(n: int, w: int) -> list[int]:
    """All words of weight ``w`` in ascending (lexicographic) order."""
    out = []
    for ones in itertools.combinations(range(n), w):
        out.append(sum(1 << b for b in ones))
    out.sort()
    return out


_POPCOUNT_CACHE: dict[int, np.ndarray] = {}


def popcount_table(n: int) -> np.ndarray:
    """Weights of all ``2**n`` words, indexed by word."""
    tab = _POPCOUNT_CACHE.get(n)
    if tab is None:
        tab = np.zeros(1 << n, dtype=np.int8)
        for b in range(n):
            tab[1 << b: 1 << (b + 1)] = tab[: 1 << b] + 1
        _POPCOUNT_CACHE[n] = tab
    return tab


def as_array(words: Iterable[int]) -> np.ndarray:
    """Sorted ``int64`` array of distinct words."""
    if isinstance(words, np.ndarray):
        return np.unique(words.astype(np.int64))
    return np.array(sorted(set(words)), dtype=np.int64)


def indicator(words: Iterable[int], n: int) -> np.ndarray:
    chi = np.zeros(1 << n, dtype=bool)
    arr = as_array(words)
    if arr.size:
        chi[arr] = True
    return chi


def bit_matrix(words: np.ndarray, n: int) -> np.ndarray:
    """``len(words) x n`` 0/1 matrix; column ``j`` is coordinate ``j + 1``."""
    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)
    return ((np.asarray(words, dtype=np.int64)[:, None] >> shifts) & 1).astype(np.uint8)


def permute_words(words: np.ndarray, perm: Sequence[int], n: int) -> np.ndarray:
    """Move coordinate ``j + 1`` of every word to coordinate ``perm[j] + 1``.

    ``perm`` is 0-based here; see :class:`CubeAutomorphism` for the 1-based form.
    """
    words = np.asarray(words, dtype=np.int64)
    out = np.zeros_like(words)
    for j, pj in enumerate(perm):
        out |= ((words >> (n - 1 - j)) & 1) << (n - 1 - pj)
    return out


@dataclass(frozen=True)
class Subcube:
    """The words agreeing with ``fixed_values`` on ``fixed_positions``."""

    n: int
    fixed_positions: tuple[int, ...]
    fixed_values: tuple[int, ...]

    def __post_init__(self):
        if len(self.fixed_positions) != len(self.fixed_values):
            raise ValueError("fixed_values must assign exactly the fixed_positions")
        if any(not 1 <= p <= self.n for p in self.fixed_positions):
            raise ValueError("fixed position out of range")
        if len(set(self.fixed_positions)) != len(self.fixed_positions):
            raise ValueError("repeated fixed position")

    @property
    def dimension(self) -> int:
        return self.n - len(self.fixed_positions)

    @property
    def mask(self) -> int:
        return sum(unit(p, self.n) for p in self.fixed_positions)

    @property
    def base(self) -> int:
        return sum(unit(p, self.n) for p, v in zip(self.fixed_positions, self.fixed_values) if v)

    def __contains__(self, x: int) -> bool:
        return x & self.mask == self.base

    def members(self) -> list[int]:
        free = [p for p in range(1, self.n + 1) if p not in self.fixed_positions]
        out = []
        for bits in itertools.product((0, 1), repeat=len(free)):
            x = self.base
            for p, b in zip(free, bits):
                if b:
                    x |= unit(p, self.n)
            out.append(x)
        out.sort()
        return out


def enumerate_subcubes(n: int, k: int) -> Iterator[Subcube]:
    """All ``k``-dimensional subcubes of the ``n``-cube, each once."""
    if not 0 <= k <= n:
        raise ValueError("need 0 <= k <= n")
    for positions in itertools.combinations(range(1, n + 1), n - k):
        for values in itertools.product((0, 1), repeat=n - k):
            yield Subcube(n, positions, values)


def subcube_counts(words: Iterable[int], n: int, k: int) -> Iterator[tuple[tuple[int, ...], np.ndarray]]:
    """For every choice of ``k`` free coordinates, count words per subcube.

    Yields ``(free_positions, counts)`` where ``counts`` has one entry for each
    of the ``2**(n-k)`` subcubes with those free coordinates.
    """
    arr = as_array(words)
    full = (1 << n) - 1
    for free in itertools.combinations(range(1, n + 1), k):
        fmask = sum(unit(p, n) for p in free)
        fixed = arr & (full ^ fmask)
        counts = np.bincount(_compress(fixed, full ^ fmask, n), minlength=1 << (n - k))
        yield free, counts


def _compress(values: np.ndarray, mask: int, n: int) -> np.ndarray:
    """Gather the bits of ``values`` selected by ``mask`` into low-order bits."""
    out = np.zeros_like(values)
    pos = 0
    for b in range(n):
        if mask >> b & 1:
            out |= ((values >> b) & 1) << pos
            pos += 1
    return out


def cube_group_order(n: int) -> int:
    return (1 << n) * math.factorial(n)


@dataclass(frozen=True)
class CubeAutomorphism:
    """``x -> permute(x) + translation``.

    ``permutation[i - 1]`` is the (1-based) coordinate that coordinate ``i``
    is sent to.
    """

    n: int
    translation: int
    permutation: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.permutation) != list(range(1, self.n + 1)):
            raise ValueError("permutation must be a bijection on 1..n")
        if not 0 <= self.translation < 1 << self.n:
            raise ValueError("translation is not an n-bit word")

    @classmethod
    def identity(cls, n: int) -> "CubeAutomorphism":
        return cls(n, 0, tuple(range(1, n + 1)))

    @classmethod
    def random(cls, n: int, rng: random.Random) -> "CubeAutomorphism":
        perm = list(range(1, n + 1))
        rng.shuffle(perm)
        return cls(n, rng.randrange(1 << n), tuple(perm))

    def permute(self, x: int) -> int:
        n = self.n
        y = 0
        for i, pi in enumerate(self.permutation, start=1):
            if x >> (n - i) & 1:
                y |= 1 << (n - pi)
        return y

    def __call__(self, x: int) -> int:
        return self.permute(x) ^ self.translation

    def compose(self, other: "CubeAutomorphism") -> "CubeAutomorphism":
        """``self ∘ other``: apply ``other`` first."""
        perm = tuple(self.permutation[other.permutation[i] - 1] for i in range(self.n))
        return CubeAutomorphism(self.n, self.permute(other.translation) ^ self.translation, perm)

    def inverse(self) -> "CubeAutomorphism":
        inv = [0] * self.n
        for i, pi in enumerate(self.permutation, start=1):
            inv[pi - 1] = i
        p_inv = CubeAutomorphism(self.n, 0, tuple(inv))
        return CubeAutomorphism(self.n, p_inv.permute(self.translation), tuple(inv))

    def apply_array(self, words: np.ndarray) -> np.ndarray:
        perm0 = [p - 1 for p in self.permutation]
        return permute_words(words, perm0, self.n) ^ self.translation


def apply_automorphism(a: CubeAutomorphism, words: Iterable[int]) -> frozenset[int]:
    return frozenset(a(x) for x in words)
