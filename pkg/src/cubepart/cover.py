"""Exact multiple cover: row subsets of a 0/1 matrix with prescribed column sums."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterator, Sequence

from . import kernels


@dataclass(frozen=True)
class CoverInstance:
    """Rows are stored sparsely as tuples of column indices."""

    ncols: int
    rows: tuple[tuple[int, ...], ...]
    targets: tuple[int, ...]
    row_labels: tuple[Any, ...] = field(default=(), compare=False)

    def __post_init__(self):
        if len(self.targets) != self.ncols:
            raise ValueError(f"need {self.ncols} targets, got {len(self.targets)}")
        if any(t < 0 for t in self.targets):
            raise ValueError("targets must be non-negative")
        for r in self.rows:
            if any(not 0 <= c < self.ncols for c in r) or len(set(r)) != len(r):
                raise ValueError(f"bad row {r}")
        if self.row_labels and len(self.row_labels) != len(self.rows):
            raise ValueError("one label per row")

    @classmethod
    def from_dense(cls, matrix: Sequence[Sequence[int]], targets: Sequence[int],
                   row_labels: Sequence[Any] = ()) -> "CoverInstance":
        m = len(targets)
        rows = []
        for r in matrix:
            if len(r) != m:
                raise ValueError("every row needs one entry per column")
            rows.append(tuple(c for c, v in enumerate(r) if v))
        return cls(m, tuple(rows), tuple(targets), tuple(row_labels))

    @classmethod
    def infeasible(cls) -> "CoverInstance":
        """An instance with no solutions."""
        return cls(1, (), (1,))

    @property
    def nrows(self) -> int:
        return len(self.rows)

    def dense(self) -> list[list[int]]:
        out = []
        for r in self.rows:
            line = [0] * self.ncols
            for c in r:
                line[c] = 1
            out.append(line)
        return out

    def column_sums(self, chosen: Sequence[int]) -> list[int]:
        sums = [0] * self.ncols
        for i in chosen:
            for c in self.rows[i]:
                sums[c] += 1
        return sums

    def to_text(self) -> str:
        """``m k`` / targets / one 0/1 string per row."""
        lines = [f"{self.ncols} {self.nrows}", " ".join(map(str, self.targets))]
        lines += ["".join(map(str, r)) for r in self.dense()]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "CoverInstance":
        lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
        if not lines:
            raise ValueError("empty instance")
        m, k = map(int, lines[0].split())
        targets = [int(v) for v in lines[1].split()] if m else []
        body = lines[2:] if m else lines[1:]
        if len(body) != k:
            raise ValueError(f"expected {k} rows, got {len(body)}")
        matrix = []
        for ln in body:
            if len(ln) != m or set(ln) - {"0", "1"}:
                raise ValueError(f"bad row {ln!r}")
            matrix.append([int(ch) for ch in ln])
        return cls.from_dense(matrix, targets)


@dataclass(frozen=True)
class CoverSolution:
    chosen_rows: tuple[int, ...]

    def labels(self, inst: CoverInstance) -> list[Any]:
        return [inst.row_labels[i] for i in self.chosen_rows]


def _backend(name: str | None):
    if name is None:
        return kernels
    try:
        return kernels.BACKENDS[name]
    except KeyError:
        raise ValueError(f"unknown or unavailable backend {name!r}") from None


def solve(inst: CoverInstance, backend: str | None = None) -> Iterator[CoverSolution]:
    """Every solution exactly once, in a fixed order."""
    search = _backend(backend).CoverSearch([list(r) for r in inst.rows], inst.ncols, list(inst.targets))
    for chosen in search:
        yield CoverSolution(chosen)


def count_solutions(inst: CoverInstance, backend: str | None = None) -> int:
    return _backend(backend).count_cover([list(r) for r in inst.rows], inst.ncols, list(inst.targets))
