"""Equitable 2-partitions, local partitions and structural predicates."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np

from .cube import (
    as_array,
    check_dimension,
    indicator,
    popcount_table,
    subcube_counts,
    unit,
    word_to_str,
)
from .kernels import neighbor_counts


class InfeasibleQuotient(ValueError):
    pass


@dataclass(frozen=True, order=True)
class QuotientMatrix:
    """``[[s_pp, s_pm], [s_mp, s_mm]]``: neighbour counts between the cells."""

    s_pp: int
    s_pm: int
    s_mp: int
    s_mm: int

    def __post_init__(self):
        if min(self.s_pp, self.s_pm, self.s_mp, self.s_mm) < 0:
            raise ValueError("quotient entries must be non-negative")
        if self.s_pp + self.s_pm != self.s_mp + self.s_mm:
            raise ValueError(f"row sums differ in {self}")

    @classmethod
    def parse(cls, text: str) -> "QuotientMatrix":
        """Parse ``"a,b,c,d"`` (brackets and spaces are ignored)."""
        cleaned = text.replace("[", " ").replace("]", " ").replace(",", " ").split()
        if len(cleaned) != 4:
            raise ValueError(f"expected four entries, got {text!r}")
        return cls(*(int(v) for v in cleaned))

    @property
    def n(self) -> int:
        return self.s_pp + self.s_pm

    @property
    def fourier_weight(self) -> int:
        """The only weight carrying non-zero Fourier coefficients."""
        if (self.s_pm + self.s_mp) % 2:
            raise InfeasibleQuotient(f"{self}: s_pm + s_mp is odd")
        return (self.s_pm + self.s_mp) // 2

    @property
    def ci_order(self) -> int:
        """Correlation-immunity order of the first cell's indicator."""
        return self.fourier_weight - 1

    @property
    def density(self) -> Fraction:
        return Fraction(self.s_mp, self.s_pm + self.s_mp)

    def row(self, plus: bool) -> tuple[int, int]:
        return (self.s_pp, self.s_pm) if plus else (self.s_mp, self.s_mm)

    def as_text(self) -> str:
        return f"{self.s_pp},{self.s_pm},{self.s_mp},{self.s_mm}"

    def __str__(self):
        return f"[[{self.s_pp},{self.s_pm}],[{self.s_mp},{self.s_mm}]]"


TARGET = QuotientMatrix(2, 10, 6, 6)


def expected_ones(S: QuotientMatrix, n: int) -> int:
    """Size of the first cell of any equitable ``S``-partition of Q_n."""
    if S.n != n:
        raise InfeasibleQuotient(f"{S} has row sum {S.n}, not {n}")
    num = (1 << n) * S.s_mp
    den = S.s_pm + S.s_mp
    if den == 0 or num % den:
        raise InfeasibleQuotient(f"{S}: 2^{n}*{S.s_mp}/{den} is not an integer")
    return num // den


@dataclass(frozen=True)
class Partition:
    """A 2-partition of Q_n stored by its first cell."""

    n: int
    cell_plus: frozenset[int]

    def __post_init__(self):
        check_dimension(self.n)
        object.__setattr__(self, "cell_plus", frozenset(int(x) for x in self.cell_plus))
        if any(not 0 <= x < 1 << self.n for x in self.cell_plus):
            raise ValueError("word outside the cube")

    @classmethod
    def from_indicator(cls, chi: np.ndarray, n: int) -> "Partition":
        return cls(n, frozenset(np.flatnonzero(chi).tolist()))

    @property
    def cell_minus(self) -> frozenset[int]:
        return frozenset(range(1 << self.n)) - self.cell_plus

    def indicator(self) -> np.ndarray:
        return indicator(self.cell_plus, self.n)

    def words(self) -> np.ndarray:
        return as_array(self.cell_plus)

    def __len__(self):
        return len(self.cell_plus)


def equitable_violation(P: Partition, S: QuotientMatrix) -> int | None:
    """First vertex whose neighbour counts disagree with ``S``, or None."""
    if S.n != P.n:
        raise ValueError(f"{S} does not have row sum {P.n}")
    chi = P.indicator()
    plus_nbrs = neighbor_counts(chi.astype(np.uint8), P.n)
    want = np.where(chi, S.s_pp, S.s_mp)
    bad = np.flatnonzero(plus_nbrs != want)
    return int(bad[0]) if bad.size else None


def verify_equitable(P: Partition, S: QuotientMatrix) -> bool:
    return equitable_violation(P, S) is None


def is_orthogonal_array(C: Iterable[int], n: int, t: int) -> bool:
    """Every (n-t)-subcube holds exactly ``|C| / 2**t`` words of ``C``."""
    arr = as_array(C)
    if t == 0:
        return True
    if arr.size % (1 << t):
        return False
    want = arr.size >> t
    return all(np.all(counts == want) for _, counts in subcube_counts(arr, n, n - t))


def strength(C: Iterable[int], n: int) -> int:
    """Largest ``t`` for which ``C`` is an orthogonal array of strength ``t``."""
    arr = as_array(C)
    if arr.size == 0:
        raise ValueError("strength of an empty set is undefined")
    t = 0
    while t < n and is_orthogonal_array(arr, n, t + 1):
        t += 1
    return t


def strength_plus(C: Iterable[int], n: int, t: int) -> bool:
    """Whether every (n-t-1)-subcube count is within one of ``|C| / 2**(t+1)``."""
    arr = as_array(C)
    if t + 1 > n:
        return True
    mean = Fraction(int(arr.size), 1 << (t + 1))
    for _, counts in subcube_counts(arr, n, n - t - 1):
        lo, hi = int(counts.min()), int(counts.max())
        if lo < mean - 1 or hi > mean + 1:
            return False
    return True


def _infer_n(arr: np.ndarray) -> int:
    return max(1, int(arr.max()).bit_length()) if arr.size else 1


def contains_square(C: Iterable[int], n: int | None = None) -> bool:
    """True iff four words of ``C`` span a 2-dimensional subcube."""
    arr = as_array(C)
    if arr.size < 4:
        return False
    n = n or _infer_n(arr)
    chi = indicator(arr, n)
    for i in range(n):
        bi = 1 << i
        with_i = chi[arr ^ bi]
        for j in range(i + 1, n):
            bj = 1 << j
            if np.any(with_i & chi[arr ^ bj] & chi[arr ^ bi ^ bj]):
                return True
    return False


def is_heavy(C: Iterable[int], n: int) -> bool:
    """True iff some 3-dimensional subcube holds at least five words of ``C``."""
    arr = as_array(C)
    if n < 3:
        return False
    return any(int(counts.max()) >= 5 for _, counts in subcube_counts(arr, n, 3))


# local partitions


def local_domain(n: int, r0: int, r1: int) -> np.ndarray:
    """Words starting with 0 of weight <= r0 and starting with 1 of weight <= r1."""
    pc = popcount_table(n).astype(np.int64)
    words = np.arange(1 << n, dtype=np.int64)
    first = (words >> (n - 1)) & 1
    keep = np.where(first == 0, pc <= r0, pc <= r1)
    return words[keep]


@dataclass(frozen=True)
class LocalPartition:
    """A partial partition on the ``(r0, r1)`` ball described by :func:`local_domain`."""

    n: int
    r0: int
    r1: int
    p_plus: frozenset[int]
    p_minus: frozenset[int]

    @classmethod
    def from_plus(cls, n: int, r0: int, r1: int, p_plus: Iterable[int]) -> "LocalPartition":
        plus = frozenset(int(x) for x in p_plus)
        dom = frozenset(local_domain(n, r0, r1).tolist())
        return cls(n, r0, r1, plus, dom - plus)

    @property
    def level(self) -> tuple[int, int]:
        return (self.r0, self.r1)

    def describe(self) -> str:
        words = " ".join(word_to_str(x, self.n) for x in sorted(self.p_plus))
        return f"({self.r0},{self.r1}) P+ = {{{words}}}"


def local_violation(L: LocalPartition, S: QuotientMatrix) -> str | None:
    """Name of the first failed local condition ("I" .. "V"), or None."""
    n = L.n
    dom = set(local_domain(n, L.r0, L.r1).tolist())
    if L.p_plus & L.p_minus or (L.p_plus | L.p_minus) != dom:
        return "I"
    if 0 not in L.p_plus:
        return "II"
    if unit(1, n) not in L.p_minus:
        return "III"
    plus = L.p_plus
    minus = L.p_minus
    for v in sorted(dom):
        radius = L.r1 if v >> (n - 1) & 1 else L.r0
        if v.bit_count() >= radius:
            continue
        nb = [v ^ (1 << b) for b in range(n)]
        k_plus = sum(1 for y in nb if y in plus)
        k_minus = sum(1 for y in nb if y in minus)
        if (k_plus, k_minus) != S.row(v in plus):
            return "IV"
    for v in plus:
        if sum(1 for b in range(n) if v ^ (1 << b) in plus) > S.s_pp:
            return "V"
    return None


def validate_local(L: LocalPartition, S: QuotientMatrix) -> bool:
    return local_violation(L, S) is None
