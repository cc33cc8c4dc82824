"""Finite orbit dynamics: factor language, array blocks, witnesses, obstructions.

A *seed* pins a point of the system by a finite tower of choices: for each
level below some top circuit, which block of the level map the orbit sits in,
plus an offset inside the base block.  A seed determines all rows of the
array picture inside the time span of its top block and nothing outside —
windows beyond that span raise :class:`~proxrank2.errors.WindowUndetermined`
rather than silently extending.

Row conventions: the level-``n`` row assigns one symbol per time step (``E``
on the loop, ``C`` on a circuit edge) and a *cut* before each time where the
walk sits at the central vertex — exactly the block structure of the
level-``n`` expansion.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass

import numpy as np

from .covering import (
    CoveringSpec,
    circuit_length,
    expansion_cap,
    level_map,
)
from .errors import (
    ExpansionTooLarge,
    MissingStageMetadata,
    UsageError,
    WindowUndetermined,
)
from .expansion import (
    _occurrence_gap_mask,
    _walk_array,
    cumulative_runs,
    d_word,
    realized_gap_table,
    time_word,
)
from .families import TAG_WEAKMIX_NOT_MIX, extend_family


# --------------------------------------------------------------------------
# Seeds and positions
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class PointSeed:
    """A point pinned inside the level-``top_level`` circuit block.

    ``slot_path[i]`` is the block index chosen at level ``base_level + i``
    inside the expansion of the level-``base_level + i + 1`` block above it;
    ``offset`` is the time offset inside the base-level block (0 for a loop
    block, ``0 .. l_base - 1`` for a circuit block).
    """

    top_level: int
    slot_path: tuple[int, ...]
    offset: int
    base_level: int = 1

    def slot_at(self, level: int) -> int:
        if not self.base_level <= level < self.top_level:
            raise UsageError(f"no slot at level {level} (base {self.base_level}, top {self.top_level})")
        return self.slot_path[level - self.base_level]

    def to_dict(self) -> dict:
        return {
            "top_level": self.top_level,
            "slot_path": list(self.slot_path),
            "offset": self.offset,
            "base_level": self.base_level,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "PointSeed":
        try:
            return cls(
                top_level=d["top_level"],
                slot_path=tuple(d["slot_path"]),
                offset=d["offset"],
                base_level=d.get("base_level", 1),
            )
        except (KeyError, TypeError) as exc:
            raise UsageError(f"seed dict needs top_level/slot_path/offset, got {d!r}") from exc


def _descend(spec: CoveringSpec, seed: PointSeed) -> tuple[int, str]:
    """Validate a seed and return (absolute position, base block kind)."""
    if not 1 <= seed.base_level <= seed.top_level <= spec.depth + 1:
        raise UsageError(
            f"need 1 <= base {seed.base_level} <= top {seed.top_level} <= {spec.depth + 1}"
        )
    if len(seed.slot_path) != seed.top_level - seed.base_level:
        raise UsageError(
            f"slot_path length {len(seed.slot_path)} != top-base = "
            f"{seed.top_level - seed.base_level}"
        )
    pos = 0
    kind = "C"
    for k in range(seed.top_level - 1, seed.base_level - 1, -1):
        slot = seed.slot_at(k)
        if kind == "E":
            if slot != 0:
                raise UsageError(f"level-{k} slot must be 0 under a loop block, got {slot}")
            continue
        word = level_map(spec, k).word()
        if not 0 <= slot < len(word):
            raise UsageError(f"level-{k} slot {slot} outside 0..{len(word) - 1}")
        l_k = circuit_length(spec, k)
        prefix = word[:slot]
        n_c = prefix.count("C")
        pos += (len(prefix) - n_c) + n_c * l_k
        kind = word[slot]
    base_span = circuit_length(spec, seed.base_level) if kind == "C" else 1
    if not 0 <= seed.offset < base_span:
        raise UsageError(
            f"offset {seed.offset} outside the base {kind}-block span 0..{base_span - 1}"
        )
    return pos + seed.offset, kind


def validate_seed(spec: CoveringSpec, seed: PointSeed) -> None:
    _descend(spec, seed)


def position_of_seed(spec: CoveringSpec, seed: PointSeed) -> int:
    """Absolute time of the seed's time 0 inside its top-level circuit block."""
    return _descend(spec, seed)[0]


def seed_from_position(
    spec: CoveringSpec, top_level: int, position: int, base_level: int = 1
) -> PointSeed:
    """Inverse of :func:`position_of_seed` (block indices of an absolute time)."""
    if not 1 <= base_level <= top_level <= spec.depth + 1:
        raise UsageError(f"need 1 <= base {base_level} <= top {top_level} <= {spec.depth + 1}")
    if not 0 <= position < circuit_length(spec, top_level):
        raise UsageError(
            f"position {position} outside circuit {top_level} "
            f"(0..{circuit_length(spec, top_level) - 1})"
        )
    slots: list[int] = []
    kind = "C"
    rem = position
    for k in range(top_level - 1, base_level - 1, -1):
        if kind == "E":
            slots.append(0)
            continue
        word = level_map(spec, k).word()
        l_k = circuit_length(spec, k)
        for slot, ch in enumerate(word):
            span = l_k if ch == "C" else 1
            if rem < span:
                slots.append(slot)
                kind = ch
                break
            rem -= span
    slots.reverse()
    return PointSeed(top_level=top_level, slot_path=tuple(slots), offset=rem, base_level=base_level)


def stable_point(spec: CoveringSpec, top_level: int) -> PointSeed:
    """The seed whose time 0 is the last circuit edge: forward rows turn all-``E``.

    Located by descent search (last circuit block at every level), not by a
    closed formula.
    """
    slots = []
    for k in range(1, top_level):
        lm = level_map(spec, k)
        slots.append(sum(lm.a[:-1]) + lm.b - 1)  # symbol index of the last C
    return PointSeed(
        top_level=top_level,
        slot_path=tuple(slots),
        offset=circuit_length(spec, 1) - 1,
        base_level=1,
    )


def unstable_point(spec: CoveringSpec, top_level: int) -> PointSeed:
    """The seed whose time 0 is the first circuit edge of every level."""
    slots = [level_map(spec, k).a[0] for k in range(1, top_level)]  # first C
    return PointSeed(top_level=top_level, slot_path=tuple(slots), offset=0, base_level=1)


def level_walks(
    spec: CoveringSpec, top_level: int, base_level: int = 1, cap: int | None = None
) -> dict[int, np.ndarray]:
    """Vertex walks of the top circuit through every graph ``base..top``."""
    return {
        k: _walk_array(spec, top_level, k, cap=cap)
        for k in range(base_level, top_level + 1)
    }


# --------------------------------------------------------------------------
# Factor language and complexity
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class LanguageResult:
    words: frozenset
    length: int
    level: int
    stabilized: bool
    stabilized_at: int | None
    top_level_used: int

    def sorted_words(self) -> list[str]:
        return sorted(self.words)


_MAX_LANGUAGE_LEVELS = 4096


def _windows(word: str, length: int) -> set[str]:
    """All length-``length`` windows of a word (empty set if it is shorter)."""
    return {word[i: i + length] for i in range(len(word) - length + 1)}


def language(
    spec: CoveringSpec,
    n: int,
    length: int,
    stabilize_window: int = 2,
    cap: int | None = None,
) -> LanguageResult:
    """Length-``length`` factors of the level-``n`` rows, with stabilization proof.

    Takes unions of the factor sets of the level-``n`` time rows of deeper
    and deeper circuits until the union is unchanged for ``stabilize_window``
    consecutive levels.  Rows short enough are materialized; deeper rows are
    tracked exactly by their first/last ``length`` characters plus the
    factors contributed at each concatenation junction, so the scan stays
    cheap at any depth.  Family-generated specs are extended on demand; a
    hand-entered spec that runs out of levels returns the partial set
    flagged unstabilized.
    """
    if length < 1:
        raise UsageError(f"factor length must be >= 1, got {length}")
    if length > 65536:
        raise UsageError(f"factor length {length} is too large for the window engine")
    if stabilize_window < 1:
        raise UsageError(f"stabilize_window must be >= 1, got {stabilize_window}")
    if not 1 <= n <= spec.depth:
        raise UsageError(f"need 1 <= n <= {spec.depth}, got {n}")
    limit = expansion_cap(cap)
    materialize_below = min(max(1 << 20, 8 * length), limit)
    current = spec
    words: set[str] = set()
    prev_size: int | None = None
    agree = 0
    # State of the previous row: exact string, or (prefix, suffix) of length
    # up to `length`.  The factor union is cumulative, so only junctions of
    # the next level contribute new words once rows stop being materialized.
    prev_exact: str | None = None
    prev_ends: tuple[str, str] | None = None
    m = n + 1
    while m - n <= _MAX_LANGUAGE_LEVELS:
        if m > current.depth + 1:
            deeper = extend_family(current, current.depth * 2)
            if deeper is None:
                break
            current = deeper
            continue
        l_m = circuit_length(current, m)
        if l_m <= materialize_below:
            row = time_word(current, m, n, cap=materialize_below + 1)
            words |= _windows(row, length)
            prev_exact, prev_ends = row, None
        else:
            a = level_map(current, m - 1).a
            if m == n + 1:
                # First row: the level word with every circuit symbol read as
                # a block of l_n circuit steps.
                prev_exact, prev_ends = "C" * circuit_length(current, n), None
            if prev_exact is not None:
                head, tail = prev_exact[:length], prev_exact[-length:]
                short_prev = len(prev_exact) < 2 * length
            else:
                assert prev_ends is not None
                head, tail = prev_ends
                short_prev = False  # abstracted rows are always long
            if short_prev:
                # The previous row is shorter than a window, so windows can
                # chain across several copies: build the whole next row with
                # every loop run capped at `length` (exact for window
                # factors, since a window inside a longer-than-`length` run
                # reads the same in the capped copy).
                pieces = ["E" * min(a[0], length)]
                for j in range(1, len(a)):
                    pieces.append(prev_exact)
                    pieces.append("E" * min(a[j], length))
                capped = "".join(pieces)
                words |= _windows(capped, length)
                new_head, new_tail = capped[:length], capped[-length:]
            else:
                # A window crosses at most one junction: union the junction
                # strings, one per distinct loop-run exponent.
                for a_j in {min(v, length) for v in a[1:-1]}:
                    words |= _windows(tail + "E" * a_j + head, length)
                words |= _windows("E" * min(a[0], length) + head, length)
                words |= _windows(tail + "E" * min(a[-1], length), length)
                new_head = ("E" * min(a[0], length) + head)[:length]
                new_tail = (tail + "E" * min(a[-1], length))[-length:]
            prev_exact, prev_ends = None, (new_head, new_tail)
        if l_m >= length:
            if prev_size is not None and len(words) == prev_size:
                agree += 1
                if agree >= stabilize_window:
                    return LanguageResult(
                        words=frozenset(words),
                        length=length,
                        level=n,
                        stabilized=True,
                        stabilized_at=m - stabilize_window,
                        top_level_used=m,
                    )
            else:
                agree = 0
            prev_size = len(words)
        m += 1
    return LanguageResult(
        words=frozenset(words),
        length=length,
        level=n,
        stabilized=False,
        stabilized_at=None,
        top_level_used=m - 1,
    )


@dataclass(frozen=True)
class ComplexityRow:
    length: int
    count: int
    stabilized: bool

    @property
    def ratio(self) -> float:
        return math.log2(self.count) / self.length if self.count > 0 else float("-inf")

    def to_dict(self) -> dict:
        return {
            "length": self.length,
            "count": self.count,
            "log2_count_over_length": self.ratio,
            "stabilized": self.stabilized,
        }


def complexity_profile(
    spec: CoveringSpec, max_length: int, cap: int | None = None
) -> tuple[ComplexityRow, ...]:
    """Word counts ``p(L)`` of the level-1 language for ``L = 1 .. max_length``."""
    if max_length < 1:
        raise UsageError(f"max_length must be >= 1, got {max_length}")
    rows = []
    for length in range(1, max_length + 1):
        res = language(spec, 1, length, cap=cap)
        rows.append(
            ComplexityRow(length=length, count=len(res.words), stabilized=res.stabilized)
        )
    return tuple(rows)


# --------------------------------------------------------------------------
# Array blocks
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class ArrayRow:
    level: int
    symbols: str
    cuts: tuple[int, ...]
    end_cut: bool

    def to_dict(self) -> dict:
        return {
            "level": self.level,
            "symbols": self.symbols,
            "cuts": list(self.cuts),
            "end_cut": self.end_cut,
        }


@dataclass(frozen=True)
class ArrayBlock:
    seed: PointSeed
    window: tuple[int, int]
    rows: tuple[ArrayRow, ...]  # ordered top level first

    def row(self, level: int) -> ArrayRow:
        for r in self.rows:
            if r.level == level:
                return r
        raise UsageError(f"no row at level {level}")

    def to_dict(self) -> dict:
        return {
            "seed": self.seed.to_dict(),
            "window": list(self.window),
            "rows": [r.to_dict() for r in self.rows],
        }


def array_block(
    spec: CoveringSpec,
    seed: PointSeed,
    window: tuple[int, int],
    cap: int | None = None,
) -> ArrayBlock:
    """All rows ``base..top`` of the array picture over an inclusive time window.

    Relative time 0 is the seed position; a window reaching outside the span
    of the seed's top block raises :class:`WindowUndetermined` naming the
    first undetermined time.
    """
    t0, t1 = window
    if t0 > t1:
        raise UsageError(f"window must have t0 <= t1, got {window}")
    pos, _ = _descend(spec, seed)
    l_top = circuit_length(spec, seed.top_level)
    if pos + t0 < 0:
        raise WindowUndetermined(t0)
    if pos + t1 > l_top - 1:
        raise WindowUndetermined(l_top - 1 - pos + 1)
    walks = level_walks(spec, seed.top_level, seed.base_level, cap=cap)
    rows = []
    lo, hi = pos + t0, pos + t1
    for k in sorted(walks, reverse=True):
        walk = walks[k]
        w0 = walk[lo: hi + 1]
        w1 = walk[lo + 1: hi + 2]
        chars = np.where((w0 == 0) & (w1 == 0), np.uint8(ord("E")), np.uint8(ord("C")))
        cuts = tuple(int(t0 + i) for i in np.flatnonzero(w0 == 0))
        rows.append(
            ArrayRow(
                level=k,
                symbols=chars.astype(np.uint8).tobytes().decode("ascii"),
                cuts=cuts,
                end_cut=bool(walk[hi + 1] == 0),
            )
        )
    return ArrayBlock(seed=seed, window=(t0, t1), rows=tuple(rows))


def render_array_text(block: ArrayBlock) -> str:
    """Plain-text rendering: one line per level, ``|`` before each block start."""
    t0, t1 = block.window
    lines = [f"window [{t0}, {t1}] at seed {block.seed.to_dict()}"]
    for row in block.rows:
        cells = []
        cuts = set(row.cuts)
        for i, ch in enumerate(row.symbols):
            cells.append(("|" if t0 + i in cuts else "") + ch)
        tail = "|" if row.end_cut else ""
        lines.append(f"n={row.level:<3}" + " " + "".join(cells) + tail)
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# Li-Yorke witnesses
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class LiYorkeWitness:
    seed_a: PointSeed
    seed_b: PointSeed
    horizon: int
    direction: str
    k_target: int
    proximal_events: tuple[tuple[int, int], ...]  # (time, deepest shared level)
    separation_events: tuple[int, ...]
    best_k: int

    def to_dict(self) -> dict:
        return {
            "seed_a": self.seed_a.to_dict(),
            "seed_b": self.seed_b.to_dict(),
            "horizon": self.horizon,
            "direction": self.direction,
            "k_target": self.k_target,
            "proximal_events": [list(e) for e in self.proximal_events],
            "separation_events": list(self.separation_events),
            "best_k": self.best_k,
        }


def li_yorke_witness(
    spec: CoveringSpec,
    seed_a: PointSeed,
    seed_b: PointSeed,
    horizon: int,
    k_target: int,
    direction: str = "forward",
    cap: int | None = None,
) -> LiYorkeWitness:
    """Scan a window for proximal events and level-1 separations.

    A proximal event at time ``t`` records the deepest level ``k <= k_target``
    whose walk puts both orbits on the same level-``k`` vertex; a separation
    event is a time with differing level-1 symbols.  Events are reported,
    never asserted — the caller decides what they prove.
    """
    if horizon < 0:
        raise UsageError(f"horizon must be >= 0, got {horizon}")
    if k_target < 1:
        raise UsageError(f"k_target must be >= 1, got {k_target}")
    if direction not in ("forward", "backward"):
        raise UsageError(f"direction must be forward or backward, got {direction!r}")
    pos_a, _ = _descend(spec, seed_a)
    pos_b, _ = _descend(spec, seed_b)
    t_lo, t_hi = (0, horizon) if direction == "forward" else (-horizon, 0)
    for name, pos, top in (("a", pos_a, seed_a.top_level), ("b", pos_b, seed_b.top_level)):
        if pos + t_lo < 0:
            raise WindowUndetermined(t_lo)
        if pos + t_hi > circuit_length(spec, top) - 1:
            raise WindowUndetermined(circuit_length(spec, top) - 1 - pos + 1)
    k_max = min(k_target, seed_a.top_level, seed_b.top_level)
    walks: dict[int, dict[int, np.ndarray]] = {}
    for top in {seed_a.top_level, seed_b.top_level}:
        walks[top] = {
            k: _walk_array(spec, top, k, cap=cap) for k in range(1, k_max + 1)
        }
    span = t_hi - t_lo + 1
    best = np.zeros(span, dtype=np.int32)
    for k in range(1, k_max + 1):
        wa = walks[seed_a.top_level][k]
        wb = walks[seed_b.top_level][k]
        eq = (
            wa[pos_a + t_lo: pos_a + t_hi + 1] == wb[pos_b + t_lo: pos_b + t_hi + 1]
        )
        best[eq] = k
    wa1 = walks[seed_a.top_level][1]
    wb1 = walks[seed_b.top_level][1]
    sym_a = _step_symbols(wa1, pos_a + t_lo, span)
    sym_b = _step_symbols(wb1, pos_b + t_lo, span)
    sep = np.flatnonzero(sym_a != sym_b)
    proximal = tuple(
        (int(t_lo + i), int(best[i])) for i in np.flatnonzero(best >= 1)
    )
    return LiYorkeWitness(
        seed_a=seed_a,
        seed_b=seed_b,
        horizon=horizon,
        direction=direction,
        k_target=k_target,
        proximal_events=proximal,
        separation_events=tuple(int(t_lo + i) for i in sep),
        best_k=int(best.max()) if span else 0,
    )


def _step_symbols(walk: np.ndarray, start: int, span: int) -> np.ndarray:
    w0 = walk[start: start + span]
    w1 = walk[start + 1: start + span + 1]
    return np.where((w0 == 0) & (w1 == 0), np.uint8(ord("E")), np.uint8(ord("C")))


# --------------------------------------------------------------------------
# Mixing-window check
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class MixingWindowReport:
    m: int
    n: int
    window: tuple[int, int]
    ok: bool
    precondition_violations: tuple[str, ...]
    failures: tuple[tuple[int, int, tuple[int, ...]], ...]
    pairs_checked: int
    engine: str

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "n": self.n,
            "window": list(self.window),
            "ok": self.ok,
            "precondition_violations": list(self.precondition_violations),
            "failures": [
                {"u": u, "v": v, "missing": list(miss)} for (u, v, miss) in self.failures
            ],
            "pairs_checked": self.pairs_checked,
            "engine": self.engine,
        }


def mixing_window_check(
    spec: CoveringSpec, m: int, n: int, cap: int | None = None, threads: int = 1
) -> MixingWindowReport:
    """Verify the gap window ``[3 l_n, 2(m - n)]`` is full for every vertex pair.

    Preconditions of the underlying statement (unit margins and odd circuit
    lengths on ``[n, m)``, window nonempty) are reported as violations but do
    not stop the scan.  Exact at any depth via the strip engine.
    """
    if not 1 <= n < m <= spec.depth + 1:
        raise UsageError(f"need 1 <= n < m <= {spec.depth + 1}, got n={n}, m={m}")
    violations = []
    for k in range(n, m):
        lm = level_map(spec, k)
        if lm.a[0] != 1 or lm.a[-1] != 1:
            violations.append(f"level {k}: margins ({lm.a[0]}, {lm.a[-1]}) are not (1, 1)")
        if circuit_length(spec, k) % 2 == 0:
            violations.append(f"level {k}: circuit length {circuit_length(spec, k)} is even")
    l_n = circuit_length(spec, n)
    hi = 2 * (m - n)
    lo = 3 * l_n
    if lo > hi:
        violations.append(f"window [3*l_n, 2(m-n)] = [{lo}, {hi}] is empty")
    table, engine = realized_gap_table(spec, m, n, max(hi, 1), cap=cap)

    def scan_row(u: int) -> list[tuple[int, int, tuple[int, ...]]]:
        row_failures = []
        for v in range(l_n):
            if lo <= hi:
                missing = np.flatnonzero(~table[u, v, lo: hi + 1])
                if missing.size:
                    row_failures.append((u, v, tuple(int(lo + g) for g in missing)))
        return row_failures

    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = pool.map(scan_row, range(l_n))
    else:
        rows = map(scan_row, range(l_n))
    failures = [f for row in rows for f in row]
    return MixingWindowReport(
        m=m,
        n=n,
        window=(lo, hi),
        ok=not failures and lo <= hi,
        precondition_violations=tuple(violations),
        failures=tuple(failures),
        pairs_checked=l_n * l_n,
        engine=engine,
    )


# --------------------------------------------------------------------------
# Residue obstruction
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class ResidueReport:
    n: int
    m: int
    p: int
    passed: bool
    classes_v1: tuple[int, ...]
    classes_v2: tuple[int, ...]
    scan_max_gap: int
    scanned_v1v1: int
    scanned_v1v2: int
    violations_v1v1: tuple[int, ...]
    violations_v1v2: tuple[int, ...]
    witnesses: tuple[str, ...]

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "p": self.p,
            "passed": self.passed,
            "classes_v1": list(self.classes_v1),
            "classes_v2": list(self.classes_v2),
            "scan_max_gap": self.scan_max_gap,
            "scanned_v1v1": self.scanned_v1v1,
            "scanned_v1v2": self.scanned_v1v2,
            "violations_v1v1": list(self.violations_v1v1),
            "violations_v1v2": list(self.violations_v1v2),
            "witnesses": list(self.witnesses),
        }


def residue_obstruction(
    spec: CoveringSpec,
    n: int,
    p: int,
    m: int,
    max_gap: int = 100_000,
    cap: int | None = None,
) -> ResidueReport:
    """Check that vertex gaps are trapped mod ``p``: v1->v1 in 0, v1->v2 in 1.

    Proves the claim for *all* gaps by occurrence residue classes (every
    occurrence of ``v1`` in one class, every occurrence of ``v2`` in the
    next), then scans the realized gaps up to ``max_gap`` literally.  On
    failure, concrete witness gaps are reported.
    """
    if p < 1:
        raise UsageError(f"p must be >= 1, got {p}")
    if not 1 <= n <= m <= spec.depth + 1:
        raise UsageError(f"need 1 <= n <= m <= {spec.depth + 1}, got n={n}, m={m}")
    if circuit_length(spec, n) < 3:
        raise UsageError("need l_n >= 3 so that the vertices v1 and v2 exist")
    walk = _walk_array(spec, m, n, cap=cap)
    occ1 = np.flatnonzero(walk == 1).astype(np.int64)
    occ2 = np.flatnonzero(walk == 2).astype(np.int64)
    classes1 = tuple(int(x) for x in np.unique(occ1 % p))
    classes2 = tuple(int(x) for x in np.unique(occ2 % p))
    class_ok = (
        len(classes1) == 1
        and len(classes2) == 1
        and (classes2[0] - classes1[0]) % p == 1 % p
    )
    witnesses = []
    if len(classes1) > 1:
        diffs = np.diff(occ1) % p
        bad = np.flatnonzero(diffs != 0)
        if bad.size:
            i = int(bad[0])
            witnesses.append(
                f"v1 at {int(occ1[i])} and {int(occ1[i + 1])}: gap "
                f"{int(occ1[i + 1] - occ1[i])} != 0 mod {p}"
            )
    if not class_ok and occ1.size and occ2.size:
        j = np.searchsorted(occ2, occ1[0] + 1)
        if j < occ2.size and (occ2[j] - occ1[0]) % p != 1 % p:
            witnesses.append(
                f"v1 at {int(occ1[0])}, v2 at {int(occ2[j])}: gap "
                f"{int(occ2[j] - occ1[0])} != 1 mod {p}"
            )
    mask11 = _occurrence_gap_mask(walk, 1, 1, max_gap)
    mask12 = _occurrence_gap_mask(walk, 1, 2, max_gap)
    gaps11 = np.flatnonzero(mask11)
    gaps12 = np.flatnonzero(mask12)
    bad11 = tuple(int(g) for g in gaps11 if g % p != 0)[:8]
    bad12 = tuple(int(g) for g in gaps12 if g % p != 1 % p)[:8]
    for g in bad11[:1]:
        witnesses.append(f"realized v1->v1 gap {g} != 0 mod {p}")
    for g in bad12[:1]:
        witnesses.append(f"realized v1->v2 gap {g} != 1 mod {p}")
    return ResidueReport(
        n=n,
        m=m,
        p=p,
        passed=class_ok and not bad11 and not bad12,
        classes_v1=classes1,
        classes_v2=classes2,
        scan_max_gap=max_gap,
        scanned_v1v1=int(gaps11.size),
        scanned_v1v2=int(gaps12.size),
        violations_v1v1=bad11,
        violations_v1v2=bad12,
        witnesses=tuple(witnesses),
    )


# --------------------------------------------------------------------------
# Forbidden-window report (staged family)
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class ForbiddenWindowReport:
    m: int
    n: int
    top_level: int
    len_arith: int
    len_measured: int
    lengths_agree: bool
    window_start: int
    first_realized: int | None
    width: int | None
    all_pairs_empty: bool
    per_pair: tuple[tuple[int, int, int | None], ...]
    noncenter_pairs: int

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "n": self.n,
            "top_level": self.top_level,
            "len_arith": self.len_arith,
            "len_measured": self.len_measured,
            "lengths_agree": self.lengths_agree,
            "window_start": self.window_start,
            "first_realized": self.first_realized,
            "width": self.width,
            "all_pairs_empty": self.all_pairs_empty,
            "per_pair": [
                {"u": u, "v": v, "first_realized": f} for (u, v, f) in self.per_pair
            ],
            "noncenter_pairs": self.noncenter_pairs,
        }


def _first_gap_above(pos_u: np.ndarray, pos_v: np.ndarray, floor: int) -> int | None:
    """Smallest realized gap ``> floor`` from positions ``pos_u`` to ``pos_v``."""
    if pos_u.size == 0 or pos_v.size == 0:
        return None
    idx = np.searchsorted(pos_v, pos_u + floor + 1)
    valid = idx < pos_v.size
    if not valid.any():
        return None
    gaps = pos_v[idx[valid]] - pos_u[valid]
    return int(gaps.min())


def forbidden_window_report(
    spec: CoveringSpec, m: int, n: int | None = None, cap: int | None = None
) -> ForbiddenWindowReport:
    """Empty gap window of a staged-family boundary level, measured two ways.

    The stripped-word length ``len(d(m+1, n))`` is computed once by recursion
    arithmetic (``t_bar(m) * l_m - tau(m-1, n)``) and once by expanding the
    d-word, then the top presented circuit is scanned: for non-central vertex
    pairs no gap in ``[len+1, ...]`` is realized until the copies separate.
    Central pairs sit inside loop runs and realize every small gap, so the
    window statement quantifies over the non-central pairs.
    """
    fam = spec.family
    if fam is None or fam.tag != TAG_WEAKMIX_NOT_MIX:
        raise MissingStageMetadata("forbidden-window analysis needs a staged-family spec")
    stages = fam.params.get("stages") or []
    stage = next((st for st in stages if st["m"] == m), None)
    if stage is None:
        raise MissingStageMetadata(f"level {m} is not a recorded stage boundary")
    if n is None:
        n = stage["n"]
    elif n != stage["n"]:
        raise UsageError(f"stage boundary {m} has base level {stage['n']}, got n={n}")
    rm = level_map(spec, m).restricted
    if rm is None:
        raise MissingStageMetadata(f"level {m} lacks restricted-form data")
    tau_below = cumulative_runs(spec, m - 1, n).tau
    len_arith = rm.t_bar * circuit_length(spec, m) - tau_below
    dw = d_word(spec, m + 1, n, cap=cap)
    n_c = dw.count("C")
    len_measured = (len(dw) - n_c) + n_c * circuit_length(spec, n)
    top = spec.depth + 1
    walk = _walk_array(spec, top, n, cap=cap)
    noncenter = np.flatnonzero(walk != 0).astype(np.int64)
    first = _first_gap_above(noncenter, noncenter, len_arith)
    width = None if first is None else first - len_arith - 1
    l_n = circuit_length(spec, n)
    per_pair: list[tuple[int, int, int | None]] = []
    if (l_n - 1) ** 2 <= 36:
        occ = {
            u: np.flatnonzero(walk == u).astype(np.int64) for u in range(1, l_n)
        }
        for u in range(1, l_n):
            for v in range(1, l_n):
                per_pair.append((u, v, _first_gap_above(occ[u], occ[v], len_arith)))
    all_empty = first is None or first > len_arith + 1
    return ForbiddenWindowReport(
        m=m,
        n=n,
        top_level=top,
        len_arith=len_arith,
        len_measured=len_measured,
        lengths_agree=len_arith == len_measured,
        window_start=len_arith + 1,
        first_realized=first,
        width=width,
        all_pairs_empty=all_empty,
        per_pair=tuple(per_pair),
        noncenter_pairs=(l_n - 1) ** 2,
    )


# --------------------------------------------------------------------------
# Level-1 separation of distinct segments
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class SeparationReport:
    n: int
    length: int
    top_level: int
    samples: int
    max_padding: int
    failures: tuple[tuple[int, int], ...]
    skipped_identical: int

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "length": self.length,
            "top_level": self.top_level,
            "samples": self.samples,
            "max_padding": self.max_padding,
            "failures": [list(f) for f in self.failures],
            "skipped_identical": self.skipped_identical,
        }


def level1_separation_check(
    spec: CoveringSpec,
    n: int,
    length: int,
    samples: int = 200,
    rng_seed: int = 0,
    top_level: int | None = None,
    pad_max: int | None = None,
    cap: int | None = None,
) -> SeparationReport:
    """Distinct level-``n`` segments must separate at level 1 after bounded padding.

    Samples pairs of positions whose decorated level-``n`` segments (symbols
    plus cut pattern) differ, then finds the least symmetric padding of the
    level-1 rows that exhibits a difference.  Failures (no difference within
    ``pad_max``) are reported, not raised.
    """
    if n < 2:
        raise UsageError(f"need n >= 2, got {n}")
    if length < 1:
        raise UsageError(f"length must be >= 1, got {length}")
    if not 2 <= n <= spec.depth:
        raise UsageError(f"need 2 <= n <= {spec.depth}, got {n}")
    top = spec.depth + 1 if top_level is None else top_level
    if not n < top <= spec.depth + 1:
        raise UsageError(f"need n < top_level <= {spec.depth + 1}, got {top}")
    pad = circuit_length(spec, n) if pad_max is None else pad_max
    l_top = circuit_length(spec, top)
    if l_top < length + 2 * pad + 2:
        raise UsageError("top circuit too short for the requested length and padding")
    walk_n = _walk_array(spec, top, n, cap=cap)
    row1 = np.frombuffer(time_word(spec, top, 1, cap=cap).encode("ascii"), dtype=np.uint8)
    row_n = _step_symbols(walk_n, 0, l_top)
    rng = random.Random(rng_seed)
    skipped = 0
    max_padding = 0
    failures: list[tuple[int, int]] = []
    done = 0
    attempts = 0
    while done < samples and attempts < 50 * samples:
        attempts += 1
        t1 = rng.randrange(pad, l_top - length - pad)
        t2 = rng.randrange(pad, l_top - length - pad)
        seg1 = (row_n[t1: t1 + length].tobytes(), walk_n[t1: t1 + length + 1].tobytes())
        seg2 = (row_n[t2: t2 + length].tobytes(), walk_n[t2: t2 + length + 1].tobytes())
        if seg1 == seg2:
            skipped += 1
            continue
        done += 1
        a = row1[t1 - pad: t1 + length + pad]
        b = row1[t2 - pad: t2 + length + pad]
        diffs = np.flatnonzero(a != b)
        if diffs.size == 0:
            failures.append((t1, t2))
            continue
        rel = diffs - pad
        need = np.where(rel < 0, -rel, np.maximum(rel - (length - 1), 0))
        max_padding = max(max_padding, int(need.min()))
    return SeparationReport(
        n=n,
        length=length,
        top_level=top,
        samples=done,
        max_padding=max_padding,
        failures=tuple(failures),
        skipped_identical=skipped,
    )
