"""Invariants of equitable partitions: induced cycles, Fourier spectrum,
subcube distributions, and per-partition reports."""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .canon import CubeCanon, translational_periods
from .cube import popcount_table, subcube_counts
from .partition import (
    Partition,
    QuotientMatrix,
    contains_square,
    equitable_violation,
    is_heavy,
    strength,
    strength_plus,
)


class IdentityViolation(AssertionError):
    """A spectral identity failed; the input cannot have been equitable."""


# cycles


@dataclass(frozen=True)
class Cycle:
    words: tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.words)

    def directions(self) -> frozenset[int]:
        """1-based coordinates along which the cycle has edges."""
        n_edges = zip(self.words, self.words[1:] + self.words[:1])
        return frozenset((a ^ b).bit_length() for a, b in n_edges)

    def translation_form(self) -> tuple[int, ...]:
        """Equal for two cycles iff one is a translate of the other."""
        return min(tuple(sorted(y ^ x for y in self.words)) for x in self.words)


@dataclass(frozen=True)
class CycleFormula:
    """Cycle length -> number of cycles."""

    counts: tuple[tuple[int, int], ...]

    @classmethod
    def from_lengths(cls, lengths: Iterable[int]) -> "CycleFormula":
        return cls(tuple(sorted(Counter(lengths).items())))

    @classmethod
    def parse(cls, text: str) -> "CycleFormula":
        """``"4^64 40^8 120^8"`` (``*`` and ``·`` also separate terms)."""
        out: Counter[int] = Counter()
        for tok in text.replace("*", " ").replace("·", " ").split():
            base, _, exp = tok.partition("^")
            out[int(base)] += int(exp or 1)
        return cls(tuple(sorted(out.items())))

    def as_dict(self) -> dict[int, int]:
        return dict(self.counts)

    @property
    def total(self) -> int:
        return sum(a * b for a, b in self.counts)

    def __str__(self):
        return " ".join(f"{a}^{b}" for a, b in self.counts)


def induced_cycles(C: Iterable[int], n: int) -> list[Cycle]:
    """Cycles of the subgraph induced by ``C``; each must be 2-regular.

    Every cycle starts at its least word and continues to the lesser of the
    two neighbours.
    """
    words = sorted(set(int(x) for x in C))
    member = set(words)
    adj = {}
    for x in words:
        nb = [x ^ (1 << b) for b in range(n) if x ^ (1 << b) in member]
        if len(nb) != 2:
            raise ValueError(f"word {x} has {len(nb)} neighbours in the set, need 2")
        adj[x] = sorted(nb)
    seen: set[int] = set()
    cycles = []
    for x in words:
        if x in seen:
            continue
        path = [x]
        seen.add(x)
        prev, cur = x, adj[x][0]
        while cur != x:
            path.append(cur)
            seen.add(cur)
            a, b = adj[cur]
            prev, cur = cur, (b if a == prev else a)
        cycles.append(Cycle(tuple(path)))
    return cycles


def cycle_formula(C: Iterable[int], n: int) -> CycleFormula:
    return CycleFormula.from_lengths(c.length for c in induced_cycles(C, n))


@dataclass(frozen=True)
class CycleStatistics:
    formula: CycleFormula
    direction_sizes: tuple[tuple[int, int], ...]
    translation_classes: int


def cycle_statistics(C: Iterable[int], n: int) -> CycleStatistics:
    """Cycle formula plus direction-set sizes (size -> number of cycles) and
    the number of cycles up to translation."""
    cyc = induced_cycles(C, n)
    dirs = Counter(len(c.directions()) for c in cyc)
    forms = {c.translation_form() for c in cyc}
    return CycleStatistics(CycleFormula.from_lengths(c.length for c in cyc),
                           tuple(sorted(dirs.items())), len(forms))


# Fourier


@dataclass(frozen=True)
class FourierSpectrum:
    """Coefficients of ``f = s_pm`` on the first cell, ``-s_mp`` on the second,
    in the expansion ``f(x) = sum_y c(y) (-1)^(x.y)``. Only the support
    weight layer is stored; every other coefficient is zero."""

    n: int
    weight: int
    coefficients: dict[int, Fraction] = field(hash=False)

    def __getitem__(self, y: int) -> Fraction:
        return self.coefficients.get(y, Fraction(0)) if y.bit_count() == self.weight else Fraction(0)

    def nonzero(self) -> dict[int, Fraction]:
        return {y: v for y, v in self.coefficients.items() if v}

    def values(self) -> set[Fraction]:
        return set(self.coefficients.values())

    def histogram(self) -> dict[Fraction, int]:
        return dict(sorted(Counter(self.coefficients.values()).items()))

    def sum_of_squares(self) -> Fraction:
        return sum((v * v for v in self.coefficients.values()), Fraction(0))

    def is_integral(self) -> bool:
        return all(v.denominator == 1 for v in self.coefficients.values())

    def dense(self) -> np.ndarray:
        out = np.zeros(1 << self.n, dtype=object)
        out[:] = Fraction(0)
        for y, v in self.coefficients.items():
            out[y] = v
        return out

    def inverse(self) -> np.ndarray:
        """Values of f recovered from the coefficients, as Fractions."""
        x = np.arange(1 << self.n)
        f = np.zeros(1 << self.n, dtype=object)
        f[:] = Fraction(0)
        for y, v in self.nonzero().items():
            sign = 1 - 2 * (popcount_table(self.n)[x & y] & 1)
            f = f + v * sign
        return f


def _f_values(P: Partition, S: QuotientMatrix) -> np.ndarray:
    chi = P.indicator().astype(np.int64)
    return np.where(chi == 1, S.s_pm, -S.s_mp)


def walsh_hadamard(values: np.ndarray) -> np.ndarray:
    """Unnormalised transform ``F(y) = sum_x v(x) (-1)^(x.y)`` (integer input)."""
    a = np.array(values, dtype=np.int64)
    h = 1
    while h < len(a):
        a = a.reshape(-1, 2, h)
        a = np.stack([a[:, 0] + a[:, 1], a[:, 0] - a[:, 1]], axis=1).reshape(-1)
        h *= 2
    return a


def fourier_dense(P: Partition, S: QuotientMatrix) -> list[Fraction]:
    """All ``2^n`` coefficients by a fast transform; for cross-checks."""
    F = walsh_hadamard(_f_values(P, S))
    return [Fraction(int(v), 1 << P.n) for v in F]


def fourier(P: Partition, S: QuotientMatrix, check: bool = True) -> FourierSpectrum:
    """Coefficients on the support layer from sums over the complementary subcubes.

    With ``check`` the identities are asserted: zero mean; each coefficient
    plus ``s_mp`` a multiple of ``2^(w-n)(s_pm+s_mp)``; squares summing to
    ``s_pm*s_mp``. (Vanishing off the layer is checked by
    :func:`check_vanishing`, which needs the full transform.)
    """
    n = P.n
    w = S.fourier_weight
    chi = P.indicator().astype(np.int64)
    f = np.where(chi == 1, S.s_pm, -S.s_mp)
    full = (1 << n) - 1
    scale = Fraction(2) ** (w - n)
    coeffs = {}
    pc = popcount_table(n)
    for y in np.flatnonzero(pc == w).tolist():
        free = full ^ y
        sub = _submasks(free)
        coeffs[y] = scale * int(f[sub].sum())
    spec = FourierSpectrum(n, w, coeffs)
    if check:
        mean = Fraction(int(f.sum()), 1 << n)
        if mean != 0:
            raise IdentityViolation(f"mean of f is {mean}, not 0")
        modulus = scale * (S.s_pm + S.s_mp)
        for y, v in coeffs.items():
            if ((v + S.s_mp) / modulus).denominator != 1:
                raise IdentityViolation(f"coefficient {v} at {y} breaks the divisibility identity")
        if spec.sum_of_squares() != S.s_pm * S.s_mp:
            raise IdentityViolation(f"sum of squares {spec.sum_of_squares()} != {S.s_pm * S.s_mp}")
    return spec


def check_vanishing(P: Partition, S: QuotientMatrix) -> bool:
    """Full-transform cross-check: zero off the support layer and equal to
    :func:`fourier` on it."""
    dense = fourier_dense(P, S)
    spec = fourier(P, S, check=False)
    w = S.fourier_weight
    for y, v in enumerate(dense):
        if y.bit_count() != w:
            if v:
                return False
        elif v != spec.coefficients[y]:
            return False
    return True


_SUBMASK_CACHE: dict[int, np.ndarray] = {}


def _submasks(mask: int) -> np.ndarray:
    out = _SUBMASK_CACHE.get(mask)
    if out is None:
        subs = [0]
        for b in range(mask.bit_length()):
            if mask >> b & 1:
                subs += [s | 1 << b for s in subs]
        out = np.array(sorted(subs), dtype=np.int64)
        if len(_SUBMASK_CACHE) < 8192:
            _SUBMASK_CACHE[mask] = out
    return out


# subcubes


def subcube_distribution(C: Iterable[int], n: int, k: int) -> dict[int, int]:
    """Histogram ``|subcube & C| -> number of k-subcubes``."""
    total: Counter[int] = Counter()
    for _, counts in subcube_counts(C, n, k):
        vals, mult = np.unique(counts, return_counts=True)
        for v, m in zip(vals.tolist(), mult.tolist()):
            total[v] += m
    return dict(sorted(total.items()))


# reports


@dataclass
class PropertyReport:
    class_id: str
    n: int
    cardinality: int
    strength: int
    strength_plus: bool
    square: bool
    heavy: bool
    cycle_formula: str
    aut_order: int
    periods: int
    odd_weight_period: bool
    orbits: int
    fourier_histogram: dict[str, int]
    subcube_histogram: dict[int, int]
    extra: dict[str, object] = field(default_factory=dict)

    def as_text(self) -> str:
        fh = ",".join(f"{k}:{v}" for k, v in self.fourier_histogram.items())
        sh = ",".join(f"{k}:{v}" for k, v in self.subcube_histogram.items())
        parts = [
            f"class={self.class_id}", f"size={self.cardinality}", f"strength={self.strength}",
            f"plus={'yes' if self.strength_plus else 'no'}", f"square={'yes' if self.square else 'no'}",
            f"heavy={'yes' if self.heavy else 'no'}", f"cycles={self.cycle_formula.replace(' ', '*')}",
            f"aut={self.aut_order}", f"periods={self.periods}",
            f"odd_period={'yes' if self.odd_weight_period else 'no'}", f"orbits={self.orbits}",
            f"fourier={fh}", f"subcubes={sh}",
        ]
        parts += [f"{k}={v}" for k, v in self.extra.items()]
        return " ".join(parts)

    def as_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)


def full_report(P: Partition, S: QuotientMatrix, class_id: str = "", subcube_dim: int = 4,
                extended: bool = False) -> PropertyReport:
    """Every invariant of an equitable partition (deterministic)."""
    bad = equitable_violation(P, S)
    if bad is not None:
        raise ValueError(f"partition is not {S}-equitable (word {bad})")
    n = P.n
    C = P.cell_plus
    t = strength(C, n)
    cc = CubeCanon(C, n)
    periods = translational_periods(C, n)
    spec = fourier(P, S)
    extra: dict[str, object] = {}
    if extended and S.s_pp == 2:
        st = cycle_statistics(C, n)
        extra["directions"] = ",".join(f"{a}:{b}" for a, b in st.direction_sizes)
        extra["translation_classes"] = st.translation_classes
    return PropertyReport(
        class_id=class_id,
        n=n,
        cardinality=len(C),
        strength=t,
        strength_plus=strength_plus(C, n, t),
        square=contains_square(C, n),
        heavy=is_heavy(C, n),
        cycle_formula=str(cycle_formula(C, n)) if S.s_pp == 2 else "",
        aut_order=cc.order,
        periods=len(periods),
        odd_weight_period=any(x.bit_count() % 2 for x in periods),
        orbits=len(np.unique(cc.orbit_labels())),
        fourier_histogram={str(k): v for k, v in spec.histogram().items()},
        subcube_histogram=subcube_distribution(C, n, subcube_dim) if subcube_dim <= n else {},
        extra=extra,
    )


def group_table(reports: Sequence[PropertyReport]) -> str:
    """Classes grouped by cycle formula, then by automorphism group order."""
    lines = ["# by cycle formula"]
    by_cycles: dict[str, list[str]] = {}
    for r in reports:
        by_cycles.setdefault(r.cycle_formula, []).append(r.class_id)
    for formula, ids in sorted(by_cycles.items(), key=lambda kv: (len(kv[1]), kv[0])):
        lines.append(f"{formula}: {' '.join(ids)}")
    lines.append("# by automorphism group order")
    by_aut: dict[int, list[str]] = {}
    for r in reports:
        by_aut.setdefault(r.aut_order, []).append(r.class_id)
    for order in sorted(by_aut, reverse=True):
        lines.append(f"{order}: {' '.join(by_aut[order])}")
    return "\n".join(lines) + "\n"
