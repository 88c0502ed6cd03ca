"""Classification by local extension.

A run starts from one or more local partitions (by default the ``(0, 1)`` root
``P+ = {0}``, ``P- = {e_1}``) and grows one radius at a time. Every step is a
multiple cover problem per parent; solutions are sorted into classes under
coordinate permutations fixing coordinate 1, and the number of raw solutions
is checked against the orbit-stabilizer count. From level ``(r, r)`` with
``r = n - (s_pm + s_mp) / 2`` every remaining word is forced by correlation
immunity, and the completed partitions are classified under the full cube
group.
"""

from __future__ import annotations

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from fractions import Fraction
from pathlib import Path
from typing import Callable, Iterable, Sequence

import numpy as np

from .canon import CanonicalKey, CubeCanon, PermCanon, perm_canon
from .codec import PartitionFile, parse_partition_files
from .cover import CoverInstance, solve
from .cube import unit
from .kernels import complete_upward
from .partition import (
    InfeasibleQuotient,
    LocalPartition,
    Partition,
    QuotientMatrix,
    contains_square,
    expected_ones,
    is_heavy,
    local_violation,
    verify_equitable,
)

log = logging.getLogger(__name__)

FILTERS = ("none", "square", "square_free", "light", "square_free_and_light")


class ValidationError(RuntimeError):
    """A count identity failed; this indicates a bug, never a data condition."""


def completion_radius(n: int, S: QuotientMatrix) -> int:
    """Radius from which correlation immunity forces every remaining word."""
    r = n - S.fourier_weight
    if r < 0:
        raise InfeasibleQuotient(f"{S} has no partitions of Q_{n}")
    return r


@dataclass(frozen=True)
class LevelSchedule:
    """Levels ``(r0, r1)`` visited in order, ending with ``(n, n)``."""

    n: int
    levels: tuple[tuple[int, int], ...]

    def __post_init__(self):
        lv = self.levels
        if len(lv) < 2 or lv[-1] != (self.n, self.n):
            raise ValueError(f"schedule must end with ({self.n},{self.n})")
        for (a0, a1), (b0, b1) in zip(lv[:-2], lv[1:-1]):
            if (b0 - a0, b1 - a1) not in ((1, 0), (0, 1)):
                raise ValueError(f"step ({a0},{a1}) -> ({b0},{b1}) must grow one radius by one")
            if b0 == a0 + 1 and b0 > a1:
                raise ValueError(f"cannot grow r0 past r1 at ({a0},{a1})")
            if b1 == a1 + 1 and a1 > a0 + 1:
                raise ValueError(f"cannot grow r1 past r0 + 2 at ({a0},{a1})")
        last = lv[-2]
        if last[0] != last[1]:
            raise ValueError("the completion step must start from a level (r, r)")

    @classmethod
    def standard(cls, n: int, S: QuotientMatrix, start: tuple[int, int] = (0, 1)) -> "LevelSchedule":
        r = completion_radius(n, S)
        r0, r1 = start
        out = [start]
        while (r0, r1) != (max(r, r0, r1), max(r, r0, r1)) or r0 != r1:
            if r0 < r1:
                r0 += 1
            else:
                r1 += 1
            out.append((r0, r1))
        if (r0, r1) != (n, n):
            out.append((n, n))
        return cls(n, tuple(out))

    @classmethod
    def parse(cls, n: int, text: str) -> "LevelSchedule":
        """``"2,2 2,3 3,3 12,12"``."""
        levels = []
        for tok in text.replace(";", " ").split():
            a, b = tok.split(",")
            levels.append((int(a), int(b)))
        return cls(n, tuple(levels))

    def steps(self) -> list[tuple[tuple[int, int], tuple[int, int]]]:
        return list(zip(self.levels[:-1], self.levels[1:]))


def in_domain(x: int, n: int, level: tuple[int, int]) -> bool:
    return x.bit_count() <= level[x >> (n - 1) & 1]


def seed_complete(seed: Iterable[int], n: int, level: tuple[int, int]) -> bool:
    return all(in_domain(x, n, level) for x in seed)


def passes_filter(plus: Iterable[int], n: int, filt: str) -> bool:
    """Structural filter on the first cell. ``square`` is checked on final
    partitions only, since a square may appear late."""
    if filt in ("none", "square"):
        return True
    if filt in ("square_free", "square_free_and_light") and contains_square(plus, n):
        return False
    if filt in ("light", "square_free_and_light") and is_heavy(plus, n):
        return False
    return True


def passes_final_filter(P: Partition, filt: str) -> bool:
    if filt == "square":
        return contains_square(P.cell_plus, P.n)
    return passes_filter(P.cell_plus, P.n, filt)


@dataclass
class SearchConfig:
    n: int
    S: QuotientMatrix
    seed: frozenset[int] = frozenset()
    filter: str = "none"
    schedule: LevelSchedule | None = None
    start: list[LocalPartition] | None = None
    leading_radius: int | None = None
    validate: bool = True
    threads: int = 1
    checkpoint_dir: Path | None = None
    stop_after_level: tuple[int, int] | None = None
    label: str = ""

    def __post_init__(self):
        if self.S.n != self.n:
            raise ValueError(f"{self.S} does not have row sum {self.n}")
        expected_ones(self.S, self.n)
        if self.filter not in FILTERS:
            raise ValueError(f"unknown filter {self.filter!r}")
        self.seed = frozenset(int(x) for x in self.seed)
        if self.start is None:
            self.start = [root_partition(self.n)]
        if self.schedule is None:
            self.schedule = LevelSchedule.standard(self.n, self.S, self.start[0].level)
        lv = self.schedule.levels
        if any(L.level != lv[0] for L in self.start):
            raise ValueError("start partitions must sit at the first scheduled level")
        if lv[-2][0] < completion_radius(self.n, self.S):
            raise ValueError(f"completion needs level ({completion_radius(self.n, self.S)},"
                             f"{completion_radius(self.n, self.S)}) at least")
        if self.checkpoint_dir is not None:
            self.checkpoint_dir = Path(self.checkpoint_dir)

    @property
    def unrestricted(self) -> bool:
        """True if every local partition is searched (needed for the final count check)."""
        return (not self.seed and self.filter == "none" and self.leading_radius is None
                and len(self.start) == 1 and self.start[0] == root_partition(self.n))


def root_partition(n: int) -> LocalPartition:
    return LocalPartition(n, 0, 1, frozenset({0}), frozenset({unit(1, n)}))


# extension step


@dataclass(frozen=True)
class ExtensionInstance(CoverInstance):
    """Cover instance for one step; row labels are candidate words."""

    forced: tuple[int, ...] = ()
    level: tuple[int, int] = (0, 0)


def _grow_side(parent: tuple[int, int], child: tuple[int, int]) -> int:
    if child == (parent[0] + 1, parent[1]):
        return 0
    if child == (parent[0], parent[1] + 1):
        return 1
    raise ValueError(f"{parent} -> {child} is not a single growth step")


def build_extension_instance(L: LocalPartition, grow: int | str, S: QuotientMatrix,
                             seed: Iterable[int] = ()) -> ExtensionInstance:
    """Instance whose solutions are the one-step extensions of ``L``.

    ``grow`` is 0 / ``"r0"`` or 1 / ``"r1"``. Seed words of the new layer are
    forced into the first cell.
    """
    side = {"r0": 0, "r1": 1}.get(grow, grow)
    if side not in (0, 1):
        raise ValueError(f"grow must be r0 or r1, got {grow!r}")
    n = L.n
    old = (L.r0, L.r1)
    new = (L.r0 + 1, L.r1) if side == 0 else (L.r0, L.r1 + 1)
    r = new[side]
    if side == 0 and r > L.r1:
        raise ValueError(f"cannot grow r0 beyond r1 at {old}")
    if side == 1 and L.r1 > L.r0 + 1:
        raise ValueError(f"cannot grow r1 beyond r0 + 2 at {old}")
    if r > n:
        raise ValueError("radius exceeds n")
    top = unit(1, n) if side else 0
    layer = [x for x in _side_layer(n, side, r)]
    columns = [x for x in _side_layer(n, side, r - 1)]
    forced = tuple(x for x in layer if x in seed)
    plus = set(L.p_plus) | set(forced)
    dom = set(L.p_plus) | set(L.p_minus) | set(layer)

    def deg(x):
        return sum(1 for b in range(n) if (x ^ (1 << b)) in plus)

    infeasible = ExtensionInstance(1, (), (1,), (), forced, new)
    for x in forced:
        if deg(x) > S.s_pp or any(deg(y) > S.s_pp for y in _nbrs(x, n) if y in plus):
            return infeasible
    candidates = []
    for x in layer:
        if x in plus:
            continue
        if deg(x) > S.s_pp:
            continue
        if any(deg(y) + 1 > S.s_pp for y in _nbrs(x, n) if y in plus):
            continue
        candidates.append(x)
    col_index = {v: i for i, v in enumerate(columns)}
    targets = []
    for v in columns:
        a = (S.s_pp if v in plus else S.s_mp) - deg(v)
        if a < 0:
            return infeasible
        targets.append(a)
    rows = []
    for x in candidates:
        rows.append(tuple(sorted(col_index[y] for y in _nbrs(x, n) if y in col_index)))
    del top, dom
    return ExtensionInstance(len(columns), tuple(rows), tuple(targets), tuple(candidates), forced, new)


def _nbrs(x: int, n: int) -> list[int]:
    return [x ^ (1 << b) for b in range(n - 1, -1, -1)]


_LAYER_CACHE: dict[tuple[int, int, int], tuple[int, ...]] = {}


def _side_layer(n: int, side: int, w: int) -> tuple[int, ...]:
    """Words of weight ``w`` whose first coordinate is ``side``, ascending."""
    key = (n, side, w)
    out = _LAYER_CACHE.get(key)
    if out is None:
        top = unit(1, n)
        out = tuple(x for x in range(1 << n) if x.bit_count() == w and bool(x & top) == bool(side))
        _LAYER_CACHE[key] = out
    return out


def extension_child(L: LocalPartition, inst: ExtensionInstance, chosen: Sequence[int]) -> LocalPartition:
    plus = set(L.p_plus) | set(inst.forced) | {inst.row_labels[i] for i in chosen}
    r0, r1 = inst.level
    return LocalPartition.from_plus(L.n, r0, r1, plus)


# classes


def level_canon(plus: Iterable[int], n: int, level: tuple[int, int], seed: frozenset[int]) -> PermCanon:
    """Canonical data under permutations fixing coordinate 1 (and the seed
    while it is not yet inside the domain)."""
    marked = None if seed_complete(seed, n, level) else seed
    return perm_canon(plus, n, fix_first=True, marked=marked)


def level_key(pc: PermCanon, n: int) -> CanonicalKey:
    return CanonicalKey(bytes([n]) + b"F" + (pc.best or b""))


@dataclass
class ParentOutcome:
    raw: int
    children: list[tuple[bytes, frozenset[int], int]]
    parent_order: int


def _extend_one(args) -> ParentOutcome:
    L, side, S, seed, filt, validate = args
    n = L.n
    inst = build_extension_instance(L, side, S, seed)
    level = inst.level
    found: dict[bytes, tuple[frozenset[int], PermCanon]] = {}
    raw = 0
    for sol in solve(inst):
        plus = frozenset(L.p_plus | set(inst.forced) | {inst.row_labels[i] for i in sol.chosen_rows})
        if not passes_filter(plus, n, filt):
            continue
        raw += 1
        pc = level_canon(plus, n, level, seed)
        key = level_key(pc, n).data
        if key not in found:
            found[key] = (plus, pc)
    children = []
    parent_order = 0
    if validate:
        parent_order = level_canon(L.p_plus, n, level, seed).order
        total = 0
        for key, (plus, pc) in found.items():
            q, rem = divmod(parent_order, pc.order)
            if rem:
                raise ValidationError(f"stabilizer order {pc.order} does not divide {parent_order}")
            total += q
        if total != raw:
            raise ValidationError(
                f"{L.describe()}: {raw} raw extensions but orbit-stabilizer sum {total}")
    for key, (plus, pc) in found.items():
        children.append((key, plus, pc.order if validate else 0))
    return ParentOutcome(raw, children, parent_order)


@dataclass
class LevelResult:
    level: tuple[int, int]
    raw: int
    classes: list[LocalPartition]
    orders: list[int]
    leading: list[bool]
    validated: bool
    seconds: float = 0.0
    pending_groups: int | None = None

    @property
    def count(self) -> int:
        return len(self.classes)

    @property
    def leading_count(self) -> int:
        if self.pending_groups is not None:
            return self.pending_groups
        return sum(self.leading)


def extend_level(reps: Sequence[LocalPartition], grow: int | str, S: QuotientMatrix,
                 filter: str = "none", seed: Iterable[int] = (), validate: bool = True,
                 threads: int = 1) -> LevelResult:
    """All inequivalent one-step extensions of ``reps`` passing ``filter``.

    Children of different (inequivalent) parents can only coincide while the
    group changes, so classes are merged across parents by key.
    """
    t0 = time.perf_counter()
    seed = frozenset(seed)
    if not reps:
        side = {"r0": 0, "r1": 1}.get(grow, grow)
        return LevelResult((0, 0), 0, [], [], [], validate)
    side = {"r0": 0, "r1": 1}.get(grow, grow)
    jobs = [(L, side, S, seed, filter, validate) for L in reps]
    if threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=threads) as ex:
            outcomes = list(ex.map(_extend_one, jobs, chunksize=max(1, len(jobs) // (4 * threads))))
    else:
        outcomes = [_extend_one(j) for j in jobs]
    merged: dict[bytes, tuple[frozenset[int], int]] = {}
    raw = 0
    for out in outcomes:
        raw += out.raw
        for key, plus, order in out.children:
            merged.setdefault(key, (plus, order))
    L0 = reps[0]
    level = (L0.r0 + 1, L0.r1) if side == 0 else (L0.r0, L0.r1 + 1)
    classes, orders = [], []
    for key in sorted(merged):
        plus, order = merged[key]
        child = LocalPartition.from_plus(L0.n, level[0], level[1], plus)
        classes.append(child)
        orders.append(order)
    if validate:
        for child in classes:
            bad = local_violation(child, S)
            if bad is not None:
                raise ValidationError(f"emitted {child.describe()} violates ({bad})")
    return LevelResult(level, raw, classes, orders, [True] * len(classes), validate,
                       time.perf_counter() - t0)


# completion


def complete_partition(L: LocalPartition, S: QuotientMatrix) -> list[Partition]:
    """All equitable partitions extending ``L`` (at most one).

    Needs ``L`` at a level ``(r, r)`` with ``r`` at least the completion
    radius; the downset identity then decides every word of weight above
    ``r``.
    """
    n = L.n
    if L.r0 != L.r1:
        raise ValueError("completion starts from a level (r, r)")
    r = L.r0
    if r < completion_radius(n, S):
        raise ValueError(f"radius {r} is below the completion radius {completion_radius(n, S)}")
    chi = np.zeros(1 << n, dtype=np.uint8)
    chi[list(L.p_plus)] = 1
    if r >= n:
        ok = True
    else:
        ok, chi = complete_upward(chi, n, r + 1, S.s_mp, S.s_pm + S.s_mp)
    if not ok:
        return []
    P = Partition.from_indicator(chi, n)
    return [P] if verify_equitable(P, S) else []


# representative selection


def select_representatives(subclasses: Sequence, continuation_counts: Callable[[int, int], int],
                           keys: Sequence, max_depth: int = 0) -> int:
    """Index of the chosen subclass.

    Least ``continuation_counts(i, 0)``; ties go to depth 1, 2, ... up to
    ``max_depth``, then to the least key.
    """
    alive = list(range(len(subclasses)))
    if not alive:
        raise ValueError("no subclasses to choose from")
    for depth in range(max_depth + 1):
        if len(alive) == 1:
            break
        counts = {i: continuation_counts(i, depth) for i in alive}
        low = min(counts.values())
        alive = [i for i in alive if counts[i] == low]
    return min(alive, key=lambda i: keys[i])


# pipeline


@dataclass
class FinalClass:
    partition: Partition
    aut_order: int
    key: CanonicalKey
    leading: bool = True


@dataclass
class ClassificationResult:
    config: SearchConfig
    levels: list[LevelResult] = field(default_factory=list)
    final: list[FinalClass] = field(default_factory=list)
    completable: int = 0
    final_validated: bool | None = None
    stopped_at: tuple[int, int] | None = None

    @property
    def final_partitions(self) -> list[Partition]:
        return [f.partition for f in self.final]

    def level(self, lv: tuple[int, int]) -> LevelResult:
        for res in self.levels:
            if res.level == lv:
                return res
        raise KeyError(lv)

    def summary_lines(self) -> list[str]:
        out = []
        for res in self.levels:
            out.append(f"level {res.level[0]},{res.level[1]} raw={res.raw} classes={res.count} "
                       f"leading={res.leading_count}")
        if self.stopped_at is None:
            out.append(f"final classes={len(self.final)} completable={self.completable}")
        return out


def _checkpoint_path(d: Path, level: tuple[int, int]) -> Path:
    return d / f"level_{level[0]}_{level[1]}.parts"


def _read_counts(d: Path) -> dict[tuple[int, int], tuple[int, int, int]]:
    p = d / "counts.txt"
    out = {}
    if p.exists():
        for line in p.read_text().splitlines():
            if not line.strip() or line.startswith("#"):
                continue
            lv, raw, cls, lead = line.split()
            a, b = lv.split(",")
            out[(int(a), int(b))] = (int(raw), int(cls), int(lead))
    return out


def _write_level(d: Path, cfg: SearchConfig, res: LevelResult) -> None:
    d.mkdir(parents=True, exist_ok=True)
    recs = []
    for i, (L, order, lead) in enumerate(zip(res.classes, res.orders, res.leading)):
        recs.append(PartitionFile(L.n, cfg.S, tuple(sorted(L.p_plus)),
                                  {"level": f"{L.r0},{L.r1}", "class": str(i), "stabilizer": str(order),
                                   "leading": str(int(lead))}).format())
    _checkpoint_path(d, res.level).write_text("".join(recs))
    counts = _read_counts(d)
    counts[res.level] = (res.raw, res.count, res.leading_count)
    lines = ["# level raw classes leading"]
    lines += [f"{a},{b} {raw} {c} {l}" for (a, b), (raw, c, l) in counts.items()]
    (d / "counts.txt").write_text("\n".join(lines) + "\n")


def _load_level(d: Path, level: tuple[int, int]) -> LevelResult | None:
    counts = _read_counts(d)
    path = _checkpoint_path(d, level)
    if level not in counts or not path.exists():
        return None
    raw, _, _ = counts[level]
    classes, orders, leading = [], [], []
    for rec in parse_partition_files(path.read_text()):
        r0, r1 = (int(v) for v in rec.meta["level"].split(","))
        classes.append(LocalPartition.from_plus(rec.n, r0, r1, rec.words))
        orders.append(int(rec.meta.get("stabilizer", 0)))
        leading.append(rec.meta.get("leading", "1") == "1")
    return LevelResult(level, raw, classes, orders, leading, False)


def _select_leading(cfg: SearchConfig, res: LevelResult, next_level: tuple[int, int] | None,
                    later: list[tuple[tuple[int, int], tuple[int, int]]]) -> tuple[LevelResult, LevelResult | None]:
    """Pick one (r, r)-class per r-class; returns the marked level and the
    next level restricted to the continuations of the chosen classes."""
    n = cfg.n
    groups: dict[bytes, list[int]] = {}
    for i, L in enumerate(res.classes):
        groups.setdefault(perm_canon(L.p_plus, n).best, []).append(i)
    children: dict[int, list[LevelResult]] = {}

    def descend(i: int, depth: int) -> int:
        hist = children.setdefault(i, [])
        while len(hist) <= depth:
            reps = [res.classes[i]] if not hist else hist[-1].classes
            step = later[len(hist)]
            if step[1][0] == n:
                hist.append(LevelResult(step[1], 0, [], [], [], False))
                done = [P for L in reps for P in complete_partition(L, cfg.S)]
                hist[-1].raw = len(done)
                hist[-1].classes = []
                hist[-1].orders = [len({CubeCanon(P.cell_plus, n).key() for P in done})]
                return hist[-1].orders[0]
            hist.append(extend_level(reps, _grow_side(*step), cfg.S, cfg.filter, cfg.seed,
                                     cfg.validate, cfg.threads))
        h = hist[depth]
        return h.orders[0] if h.level[0] == n else h.count

    keys = [level_key(level_canon(L.p_plus, n, res.level, cfg.seed), n) for L in res.classes]
    chosen = set()
    for members in groups.values():
        pick = select_representatives(members, lambda j, d: descend(members[j], d),
                                      [keys[i] for i in members], max_depth=len(later) - 1)
        chosen.add(members[pick])
    res.leading = [i in chosen for i in range(res.count)]
    if next_level is None:
        return res, None
    nxt_classes, nxt_orders, nxt_leading, raw = [], [], [], 0
    for i in sorted(range(res.count), key=lambda i: keys[i]):
        descend(i, 0)
        h = children[i][0]
        nxt_classes += h.classes
        nxt_orders += h.orders
        nxt_leading += [i in chosen] * h.count
        raw += h.raw
    nxt = LevelResult(next_level, raw, nxt_classes, nxt_orders, nxt_leading, cfg.validate)
    return res, nxt


def run_pipeline(cfg: SearchConfig, progress: Callable[[str], None] | None = None) -> ClassificationResult:
    """Run the schedule of ``cfg`` and classify the completed partitions."""
    n, S = cfg.n, cfg.S
    result = ClassificationResult(cfg)
    say = progress or (lambda msg: log.info(msg))
    for L in cfg.start:
        bad = local_violation(L, S)
        if bad is not None:
            raise ValueError(f"start partition violates ({bad}): {L.describe()}")
    reps = list(cfg.start)
    levels = cfg.schedule.levels
    pending: LevelResult | None = None
    for idx, lv in enumerate(levels[:-1]):
        if idx == 0:
            res = LevelResult(lv, len(reps), reps, [0] * len(reps), [True] * len(reps), False)
        elif pending is not None and pending.level == lv:
            res, pending = pending, None
        else:
            res = _load_level(cfg.checkpoint_dir, lv) if cfg.checkpoint_dir else None
            if res is None:
                res = extend_level(reps, _grow_side(levels[idx - 1], lv), S, cfg.filter, cfg.seed,
                                   cfg.validate, cfg.threads)
                res.level = lv
        if (cfg.leading_radius is not None and lv == (cfg.leading_radius, cfg.leading_radius)
                and all(res.leading) and res.count):
            if cfg.stop_after_level == lv:
                # the choice needs the next level; report how many will lead
                res.pending_groups = len({perm_canon(L.p_plus, n).best for L in res.classes})
            else:
                nxt = levels[idx + 1] if levels[idx + 1] != (n, n) else None
                res, pending = _select_leading(cfg, res, nxt, cfg.schedule.steps()[idx:])
        if cfg.checkpoint_dir and idx > 0:
            _write_level(cfg.checkpoint_dir, cfg, res)
        result.levels.append(res)
        say(f"level {lv[0]},{lv[1]}: raw={res.raw} classes={res.count} leading={res.leading_count}")
        reps = [L for L, lead in zip(res.classes, res.leading) if lead]
        if cfg.stop_after_level == lv:
            result.stopped_at = lv
            return result
    _finish(cfg, result, reps, say)
    return result


def _finish(cfg: SearchConfig, result: ClassificationResult, reps: list[LocalPartition], say) -> None:
    n, S = cfg.n, cfg.S
    found: dict[CanonicalKey, FinalClass] = {}
    completable_weight = Fraction(0)
    for L in reps:
        done = complete_partition(L, S)
        if not done:
            continue
        P = done[0]
        if not passes_final_filter(P, cfg.filter):
            continue
        result.completable += 1
        if cfg.validate and cfg.unrestricted:
            completable_weight += Fraction(1, level_canon(L.p_plus, n, (L.r0, L.r1), cfg.seed).order)
        cc = CubeCanon(P.cell_plus, n)
        key = cc.key()
        if key not in found:
            found[key] = FinalClass(P, cc.order, key)
    result.final = [found[k] for k in sorted(found)]
    if cfg.validate and cfg.unrestricted:
        lhs = sum((Fraction(len(f.partition) * S.s_pm, f.aut_order) for f in result.final), Fraction(0))
        if lhs != completable_weight:
            raise ValidationError(f"final count mismatch: {lhs} != {completable_weight}")
        result.final_validated = True
    for f in result.final:
        if not verify_equitable(f.partition, S):
            raise ValidationError("completed partition is not equitable")
    if cfg.checkpoint_dir:
        d = cfg.checkpoint_dir
        recs = [PartitionFile.from_partition(f.partition, S, aut=f.aut_order).format() for f in result.final]
        _checkpoint_path(d, (n, n)).write_text("".join(recs))
        counts = _read_counts(d)
        counts[(n, n)] = (result.completable, len(result.final), len(result.final))
        lines = ["# level raw classes leading"]
        lines += [f"{a},{b} {raw} {c} {l}" for (a, b), (raw, c, l) in counts.items()]
        (d / "counts.txt").write_text("\n".join(lines) + "\n")
    say(f"final: {len(result.final)} classes from {result.completable} completable local classes")


# square family start: 5-regular graphs on ten vertices


@dataclass
class SquareRoots:
    """(2,2)-local partitions of Q_12 containing the square on coordinates
    11, 12. ``classes[i]`` comes from graph ``graph_of[i]`` with vertex
    ``vertex_of[i]`` placed on coordinate 1."""

    graphs: list[frozenset[tuple[int, int]]]
    graph_orders: list[int]
    classes: list[LocalPartition]
    graph_of: list[int]
    vertex_of: list[int]

    @property
    def labelled_count(self) -> int:
        f = 1
        for k in range(2, 11):
            f *= k
        return sum(f // a for a in self.graph_orders)


def _edge_word(i: int, j: int, n: int) -> int:
    return 1 << (n - 1 - i) | 1 << (n - 1 - j)


@lru_cache(maxsize=1)
def regular_graphs_10_5() -> list[tuple[frozenset[tuple[int, int]], PermCanon]]:
    """All 5-regular graphs on vertices 0..9 up to isomorphism, with their
    canonical data (as sets of weight-2 words of Q_10)."""
    nv, deg = 10, 5
    found: dict[bytes, tuple[frozenset[tuple[int, int]], PermCanon]] = {}
    for a in range(0, 5):
        fixed = {(0, j) for j in range(1, 6)}
        fixed |= {(1, j) for j in range(2, 2 + a)}
        fixed |= {(1, j) for j in range(6, 6 + 4 - a)}
        have = [0] * nv
        for i, j in fixed:
            have[i] += 1
            have[j] += 1
        free = [(i, j) for i in range(2, nv) for j in range(i + 1, nv)]
        cols = list(range(2, nv))
        inst = CoverInstance(len(cols), tuple((i - 2, j - 2) for i, j in free),
                             tuple(deg - have[v] for v in cols), tuple(free))
        for sol in solve(inst):
            edges = frozenset(fixed | set(sol.labels(inst)))
            words = [_edge_word(i, j, nv) for i, j in edges]
            pc = perm_canon(words, nv)
            found.setdefault(pc.best, (edges, pc))
    return [found[k] for k in sorted(found)]


def enumerate_square_roots(n: int = 12, S: QuotientMatrix | None = None) -> SquareRoots:
    """Square-seeded (2,2)-local partitions via the 5-regular-graph bijection:
    a weight-2 word on coordinates 1..10 is in the first cell iff it is an
    edge."""
    from .partition import TARGET

    S = S or TARGET
    if n != 12 or S != TARGET:
        raise ValueError("the graph bijection applies to n=12, [[2,10],[6,6]] only")
    graphs, orders, classes, graph_of, vertex_of = [], [], [], [], []
    sq = {0, unit(11, n), unit(12, n), unit(11, n) | unit(12, n)}
    for g, (edges, pc) in enumerate(regular_graphs_10_5()):
        graphs.append(edges)
        orders.append(pc.order)
        parent = list(range(10))
        for gen in pc.generators:
            for i in range(10):
                ri, rj = _find(parent, i), _find(parent, gen[i])
                if ri != rj:
                    parent[max(ri, rj)] = min(ri, rj)
        reps = sorted({_find(parent, i) for i in range(10)})
        for v in reps:
            order = [v] + [u for u in range(10) if u != v]
            col = {u: c for c, u in enumerate(order)}
            plus = set(sq) | {_edge_word(col[i], col[j], n) for i, j in edges}
            classes.append(LocalPartition.from_plus(n, 2, 2, plus))
            graph_of.append(g)
            vertex_of.append(v)
    return SquareRoots(graphs, orders, classes, graph_of, vertex_of)


def _find(parent: list[int], i: int) -> int:
    while parent[i] != i:
        parent[i] = parent[parent[i]]
        i = parent[i]
    return i


# families


FAMILIES = ("all", "square", "heavy", "square-free")


def heavy_start(n: int = 12) -> LocalPartition:
    """The (1,2)-local partition every heavy partition contains up to equivalence."""
    e = lambda *cs: sum(unit(c, n) for c in cs)  # noqa: E731
    plus = {e(1, 2), e(2), 0, e(3), e(1, 3), e(1, 4), e(1, 5), e(1, 6)}
    return LocalPartition.from_plus(n, 1, 2, plus)


def family_config(family: str, n: int = 12, S: QuotientMatrix | None = None,
                  leading: bool = True, **kw) -> SearchConfig:
    """Configuration for one subfamily run; ``kw`` goes to :class:`SearchConfig`."""
    from .partition import TARGET

    S = S or TARGET
    if family == "all":
        return SearchConfig(n, S, **kw)
    if S.s_pp != 2 or n < 6:
        raise ValueError(f"family {family!r} needs s_pp = 2 and n >= 6")
    if family == "square":
        seed = frozenset({0, unit(n - 1, n), unit(n, n), unit(n - 1, n) | unit(n, n)})
        kw.setdefault("filter", "square")
        if n == 12 and S == TARGET and "start" not in kw:
            roots = enumerate_square_roots(n, S)
            kw["start"] = roots.classes
            kw.setdefault("schedule", LevelSchedule.standard(n, S, (2, 2)))
        return SearchConfig(n, S, seed=seed, leading_radius=2 if leading else None, **kw)
    if family == "heavy":
        start = heavy_start(n)
        if local_violation(start, S) is not None:
            raise ValueError(f"the heavy start is not valid for {S}")
        kw.setdefault("filter", "square_free")
        kw.setdefault("schedule", LevelSchedule.standard(n, S, (1, 2)))
        return SearchConfig(n, S, start=[start], **kw)
    if family == "square-free":
        e = lambda *cs: sum(unit(c, n) for c in cs)  # noqa: E731
        seed = frozenset({e(1, 2), e(2), 0, e(3), e(3, 4)})
        kw.setdefault("filter", "square_free_and_light")
        return SearchConfig(n, S, seed=seed, leading_radius=2 if leading else None, **kw)
    raise ValueError(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")
