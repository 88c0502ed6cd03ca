"""Serialization: the 103-record hex listing and a plain partition file format.

Appendix records store ``chi`` of the first cell on the 495 weight-4 words of
Q_12 (ascending order). The first hex symbol carries 3 bits, the others 4,
most significant bit first. Lower layers are rebuilt top-down (a word is in
the cell iff at most two of its upper neighbours are) and higher layers by the
downset rule that correlation immunity imposes.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable

import numpy as np

from .cube import popcount_table, word_from_str, word_to_str, words_of_weight
from .kernels import complete_upward
from .partition import TARGET, Partition, QuotientMatrix, equitable_violation

APPENDIX_N = 12
APPENDIX_LAYER = 4
NUM_RECORDS = 103
HEX_LENGTH = 124


class CorruptRecord(ValueError):
    pass


@dataclass(frozen=True)
class AppendixRecord:
    index: int
    hex: str

    def __post_init__(self):
        if len(self.hex) != HEX_LENGTH or not re.fullmatch(r"[0-9a-f]+", self.hex):
            raise CorruptRecord(f"record {self.index}: need {HEX_LENGTH} lowercase hex symbols")
        if int(self.hex[0], 16) > 7:
            raise CorruptRecord(f"record {self.index}: leading symbol carries only 3 bits")

    def bits(self) -> list[int]:
        out = [int(b) for b in format(int(self.hex[0], 16), "03b")]
        for ch in self.hex[1:]:
            out.extend(int(b) for b in format(int(ch, 16), "04b"))
        return out


def parse_appendix(text: str) -> dict[int, AppendixRecord]:
    """Parse a listing of numbered records, each possibly spread over several lines."""
    chunks: dict[int, list[str]] = {}
    current = None
    for line in text.splitlines():
        if not line.strip():
            continue
        m = re.match(r"\s*(\d+)\.\s+([0-9a-f]+)\s*$", line)
        if m:
            current = int(m.group(1))
            if current in chunks:
                raise CorruptRecord(f"record {current} appears twice")
            chunks[current] = [m.group(2)]
        elif current is not None and re.fullmatch(r"\s*[0-9a-f]+\s*", line):
            chunks[current].append(line.strip())
        else:
            raise CorruptRecord(f"unparsable line: {line!r}")
    return {k: AppendixRecord(k, "".join(v)) for k, v in chunks.items()}


def format_appendix(records: Iterable[AppendixRecord]) -> str:
    lines = []
    for rec in records:
        half = HEX_LENGTH // 2
        lines.append(f"{rec.index:3d}. {rec.hex[:half]}")
        lines.append(f"     {rec.hex[half:]}")
    return "\n".join(lines) + "\n"


_APPENDIX_CACHE: dict[int, AppendixRecord] = {}


def load_appendix(path: str | Path | None = None) -> dict[int, AppendixRecord]:
    """The shipped 103-record fixture, or the listing at ``path``."""
    if path is not None:
        return parse_appendix(Path(path).read_text())
    if not _APPENDIX_CACHE:
        text = resources.files("cubepart").joinpath("data/appendix.txt").read_text()
        _APPENDIX_CACHE.update(parse_appendix(text))
    return dict(_APPENDIX_CACHE)


def _rebuild_lower_layers(chi: np.ndarray, n: int, top: int, limit: int) -> None:
    pc = popcount_table(n)
    for w in range(top - 1, -1, -1):
        for x in np.flatnonzero(pc == w):
            x = int(x)
            ups = sum(int(chi[x | 1 << b]) for b in range(n) if not x >> b & 1)
            chi[x] = ups <= limit


def reconstruct(layer_words: Iterable[int], n: int = APPENDIX_N, S: QuotientMatrix = TARGET,
                layer: int = APPENDIX_LAYER) -> np.ndarray:
    """Full indicator from the cell's words of weight ``layer``.

    Raises :class:`CorruptRecord` if the downset rule cannot be met.
    """
    chi = np.zeros(1 << n, dtype=np.uint8)
    words = np.fromiter(layer_words, dtype=np.int64)
    pc = popcount_table(n)
    if words.size and np.any(pc[words] != layer):
        raise ValueError(f"all words must have weight {layer}")
    chi[words] = 1
    _rebuild_lower_layers(chi, n, layer, S.s_pp)
    ok, chi = complete_upward(chi, n, layer + 1, S.s_mp, S.s_pm + S.s_mp)
    if not ok:
        raise CorruptRecord("downset deficit outside {0, 1}")
    return chi.astype(bool)


def decode_appendix(rec: AppendixRecord) -> Partition:
    layer = words_of_weight(APPENDIX_N, APPENDIX_LAYER)
    bits = rec.bits()
    chosen = [w for w, b in zip(layer, bits) if b]
    try:
        chi = reconstruct(chosen)
    except CorruptRecord as exc:
        raise CorruptRecord(f"record {rec.index}: {exc}") from None
    P = Partition.from_indicator(chi, APPENDIX_N)
    bad = equitable_violation(P, TARGET)
    if bad is not None:
        raise CorruptRecord(f"record {rec.index}: not equitable at {word_to_str(bad, APPENDIX_N)}")
    return P


def decode_all(records: dict[int, AppendixRecord] | None = None) -> dict[int, Partition]:
    records = records if records is not None else load_appendix()
    return {k: decode_appendix(r) for k, r in sorted(records.items())}


def encode_appendix(P: Partition, index: int = 0) -> AppendixRecord:
    if P.n != APPENDIX_N:
        raise ValueError(f"appendix records describe Q_{APPENDIX_N}, got n={P.n}")
    if equitable_violation(P, TARGET) is not None:
        raise ValueError(f"partition is not {TARGET}-equitable")
    chi = P.indicator()
    bits = "".join("1" if chi[w] else "0" for w in words_of_weight(APPENDIX_N, APPENDIX_LAYER))
    symbols = [format(int(bits[:3], 2), "x")]
    symbols += [format(int(bits[i:i + 4], 2), "x") for i in range(3, len(bits), 4)]
    return AppendixRecord(index, "".join(symbols))


# plain partition files


@dataclass
class PartitionFile:
    """One record: a header line ``n=<n> quotient=a,b,c,d [key=value ...]``
    followed by the first cell, one 0/1 word per line, ascending."""

    n: int
    quotient: QuotientMatrix | None
    words: tuple[int, ...]
    meta: dict[str, str] = field(default_factory=dict)

    @classmethod
    def from_partition(cls, P: Partition, S: QuotientMatrix | None = None, **meta) -> "PartitionFile":
        return cls(P.n, S, tuple(sorted(P.cell_plus)), {k: str(v) for k, v in meta.items()})

    def partition(self) -> Partition:
        return Partition(self.n, frozenset(self.words))

    def format(self) -> str:
        head = [f"n={self.n}"]
        if self.quotient is not None:
            head.append(f"quotient={self.quotient.as_text()}")
        head += [f"{k}={v}" for k, v in self.meta.items()]
        body = [word_to_str(x, self.n) for x in self.words]
        return "\n".join([" ".join(head)] + body) + "\n"


def _parse_header(line: str, lineno: int) -> tuple[int, QuotientMatrix | None, dict[str, str]]:
    fields = {}
    for tok in line.split():
        if "=" not in tok:
            raise ValueError(f"line {lineno}: bad header token {tok!r}")
        k, v = tok.split("=", 1)
        fields[k] = v
    if "n" not in fields:
        raise ValueError(f"line {lineno}: header lacks n=")
    n = int(fields.pop("n"))
    q = fields.pop("quotient", None)
    S = QuotientMatrix.parse(q) if q else None
    if S is not None and S.n != n:
        raise ValueError(f"line {lineno}: quotient {S} does not have row sum {n}")
    return n, S, fields


def parse_partition_files(text: str) -> list[PartitionFile]:
    """Parse one or more concatenated records. Raises ValueError on bad input."""
    out: list[PartitionFile] = []
    cur = None
    seen: set[int] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("n="):
            n, S, meta = _parse_header(line, lineno)
            cur = PartitionFile(n, S, (), meta)
            out.append(cur)
            seen = set()
            continue
        if cur is None:
            raise ValueError(f"line {lineno}: word before header")
        if len(line) != cur.n:
            raise ValueError(f"line {lineno}: expected {cur.n} symbols, got {len(line)}")
        x = word_from_str(line)
        if x in seen:
            raise ValueError(f"line {lineno}: duplicate word {line}")
        seen.add(x)
        cur.words += (x,)
    for rec in out:
        rec.words = tuple(sorted(rec.words))
    return out


def read_partition_file(path: str | Path) -> PartitionFile:
    recs = parse_partition_files(Path(path).read_text())
    if len(recs) != 1:
        raise ValueError(f"{path}: expected one record, found {len(recs)}")
    return recs[0]


def write_partition_files(path: str | Path, records: Iterable[PartitionFile]) -> None:
    Path(path).write_text("".join(r.format() for r in records))


def lexicographic_min(P: Partition, **kwargs) -> Partition:
    """The equivalent partition whose sorted first cell is lexicographically least."""
    from .canon import lexicographic_min_cell

    return Partition(P.n, lexicographic_min_cell(P.cell_plus, P.n, **kwargs))
