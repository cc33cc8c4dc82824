"""Expansion calculus: circuit words, vertex walks, d-words, margins, gap sets.

Granularity conventions
-----------------------

* A *symbol word* has one letter per traversal: ``E`` is one loop traversal,
  ``C`` one full circuit traversal of the target level.
* A *time word* has one letter per edge (time step): a ``C`` traversal of the
  level-``n`` circuit contributes ``l_n`` time steps.
* A *vertex walk* lists the visited level-``n`` vertices, one more entry than
  time steps.  Vertices are integers ``0 .. l_n - 1`` with ``0`` the central
  vertex (where the loop sits); a circuit traversal visits ``0, 1, ..,
  l_n - 1, 0``.

Gap sets ``N(u, v)`` collect the position differences ``pos(v) - pos(u) >= 1``
between occurrences of two vertices in a walk.  Two exact engines are
provided: a materialized bitset scan, and a strip engine that never
materializes the full walk (windows of width ``W`` cross at most one circuit
join once some circuit is longer than ``W``, so scanning one full copy plus
short join/margin strips is exhaustive).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .covering import (
    CoveringSpec,
    circuit_length,
    compose_word,
    expansion_cap,
    level_map,
    symbol_count,
    winding_product,
)
from .errors import ExpansionTooLarge, RestrictedFormRequired, UsageError


@dataclass(frozen=True)
class CircuitWord:
    """Symbol word of circuit ``m`` over graph ``level`` (one letter per traversal)."""

    level: int
    m: int
    symbols: str


@dataclass(frozen=True, eq=False)
class VertexWalk:
    """Vertex walk of circuit ``m`` through graph ``level`` (``steps + 1`` entries)."""

    level: int
    m: int
    vertices: np.ndarray

    @property
    def steps(self) -> int:
        return int(self.vertices.size - 1)


@dataclass(frozen=True)
class CumulativeRuns:
    """Cumulative restricted margins over levels ``n .. m``: s, s', and tau = s + s'."""

    m: int
    n: int
    s: int
    s2: int

    @property
    def tau(self) -> int:
        return self.s + self.s2


@dataclass(frozen=True)
class GapSet:
    """Realized position gaps from ``u`` to ``v`` in the walk of circuit ``m``."""

    level: int
    m: int
    u: int
    v: int
    max_gap: int
    gaps: tuple[int, ...]
    engine: str

    def to_dict(self) -> dict:
        return {
            "level": self.level,
            "m": self.m,
            "u": self.u,
            "v": self.v,
            "max_gap": self.max_gap,
            "gaps": list(self.gaps),
            "engine": self.engine,
        }


@dataclass(frozen=True)
class GapStructureReport:
    """Which cumulative-run separations are realized between circuit blocks."""

    level: int
    m: int
    cc_present: bool
    taus: tuple[tuple[int, int, bool], ...]  # (k, tau(k, n), realized)
    interior_runs: tuple[int, ...]

    def to_dict(self) -> dict:
        return {
            "level": self.level,
            "m": self.m,
            "cc_present": self.cc_present,
            "taus": [{"k": k, "tau": t, "realized": r} for (k, t, r) in self.taus],
            "interior_runs": list(self.interior_runs),
        }


# --------------------------------------------------------------------------
# Words and walks
# --------------------------------------------------------------------------

def expand_circuit_word(spec: CoveringSpec, m: int, n: int, cap: int | None = None) -> CircuitWord:
    """Symbol word of circuit ``m`` over graph ``n`` (requires ``n < m``)."""
    if not 1 <= n < m <= spec.depth + 1:
        raise UsageError(f"need 1 <= n < m <= {spec.depth + 1}, got n={n}, m={m}")
    return CircuitWord(level=n, m=m, symbols=compose_word(spec, m, n, cap=cap))


def time_word(spec: CoveringSpec, m: int, n: int, cap: int | None = None) -> str:
    """Time word of circuit ``m`` over graph ``n``: one letter per edge, ``l_m`` total."""
    if not 1 <= n <= m <= spec.depth + 1:
        raise UsageError(f"need 1 <= n <= m <= {spec.depth + 1}, got n={n}, m={m}")
    limit = expansion_cap(cap)
    l_m = circuit_length(spec, m)
    if l_m > limit:
        raise ExpansionTooLarge(l_m, limit, what=f"time word of circuit {m} over level {n}")
    word = compose_word(spec, m, n, cap=limit)
    return word.replace("C", "C" * circuit_length(spec, n))


def _walk_dtype(l_n: int) -> np.dtype:
    if l_n <= 2**7:
        return np.dtype(np.int8)
    if l_n <= 2**15:
        return np.dtype(np.int16)
    if l_n <= 2**31:
        return np.dtype(np.int32)
    return np.dtype(np.int64)


def _walk_array(spec: CoveringSpec, m: int, n: int, cap: int | None = None) -> np.ndarray:
    """Vertex walk of circuit ``m`` through graph ``n`` (``m == n`` allowed)."""
    limit = expansion_cap(cap)
    l_m = circuit_length(spec, m)
    l_n = circuit_length(spec, n)
    if l_m + 1 > limit:
        raise ExpansionTooLarge(l_m + 1, limit, what=f"vertex walk of circuit {m} over level {n}")
    tw = time_word(spec, m, n, cap=limit)
    steps = np.frombuffer(tw.encode("ascii"), dtype=np.uint8)
    is_c = steps == ord("C")
    # Every maximal C-run has length a multiple of l_n (concatenated traversals
    # sharing the central vertex), so the vertex after step p is the offset of
    # p inside its run, plus one, mod l_n.
    idx = np.arange(l_m, dtype=np.int64)
    run_starts = is_c & ~np.concatenate(([False], is_c[:-1]))
    start_pos = np.where(run_starts, idx, -1)
    np.maximum.accumulate(start_pos, out=start_pos)
    walk = np.zeros(l_m + 1, dtype=_walk_dtype(l_n))
    offs = (idx - start_pos + 1) % l_n
    walk[1:] = np.where(is_c, offs, 0).astype(walk.dtype)
    return walk


def expand_vertex_walk(spec: CoveringSpec, m: int, n: int, cap: int | None = None) -> VertexWalk:
    """Vertex walk of circuit ``m`` through graph ``n`` (requires ``n < m``)."""
    if not 1 <= n < m <= spec.depth + 1:
        raise UsageError(f"need 1 <= n < m <= {spec.depth + 1}, got n={n}, m={m}")
    return VertexWalk(level=n, m=m, vertices=_walk_array(spec, m, n, cap=cap))


# --------------------------------------------------------------------------
# Restricted-form calculus: cumulative runs, d-words, margins
# --------------------------------------------------------------------------

def _restricted(spec: CoveringSpec, k: int):
    rm = level_map(spec, k).restricted
    if rm is None:
        raise RestrictedFormRequired(f"level {k} does not carry restricted-form data")
    return rm


def cumulative_runs(spec: CoveringSpec, m: int, n: int) -> CumulativeRuns:
    """Sums of the restricted margins over levels ``n .. m`` (``m = n - 1`` -> zeros)."""
    if not 1 <= n <= spec.depth + 1 or m > spec.depth:
        raise UsageError(f"cumulative runs need 1 <= n and m <= {spec.depth}, got n={n}, m={m}")
    s = s2 = 0
    for k in range(n, m + 1):
        rm = _restricted(spec, k)
        s += rm.s
        s2 += rm.s2
    return CumulativeRuns(m=m, n=n, s=s, s2=s2)


def d_word(spec: CoveringSpec, m: int, n: int, cap: int | None = None) -> str:
    """The stripped symbol word of circuit ``m`` over graph ``n``.

    Built by the join recursion over restricted levels, never by stripping an
    expanded word: ``d(n, n) = "C"`` and each level wraps ``t - 1`` and
    ``t' - 1`` copies (separated by the cumulative run ``tau``) around the
    image of the middle word.  The strip identity
    ``word(m, n) == E^s(m-1,n) + d(m, n) + E^s'(m-1,n)`` is an invariant.
    """
    if not 1 <= n <= m <= spec.depth + 1:
        raise UsageError(f"need 1 <= n <= m <= {spec.depth + 1}, got n={n}, m={m}")
    limit = expansion_cap(cap)
    need = symbol_count(spec, m, n)
    if need > limit:
        raise ExpansionTooLarge(need, limit, what=f"d-word of circuit {m} over level {n}")
    word = "C"
    s_cum = s2_cum = 0
    for k in range(n, m):
        rm = _restricted(spec, k)
        unit = word + "E" * (s_cum + s2_cum)
        mid_parts = [
            "E" if ch == "E" else "E" * s_cum + word + "E" * s2_cum for ch in rm.a_mid
        ]
        middle = "E" * s2_cum + "".join(mid_parts) + "E" * s_cum
        word = unit * (rm.t - 1) + word + middle + unit * (rm.t2 - 1) + word
        s_cum += rm.s
        s2_cum += rm.s2
    return word


def e_run_margins(spec: CoveringSpec, m: int, n: int) -> tuple[int, int]:
    """Leading and trailing loop exponents of the level-``n`` word of circuit ``m``."""
    if not 1 <= n < m <= spec.depth + 1:
        raise UsageError(f"need 1 <= n < m <= {spec.depth + 1}, got n={n}, m={m}")
    lead = sum(level_map(spec, k).a[0] for k in range(n, m))
    trail = sum(level_map(spec, k).a[-1] for k in range(n, m))
    return lead, trail


# --------------------------------------------------------------------------
# Gap engines
# --------------------------------------------------------------------------

def _occurrence_gap_mask(walk: np.ndarray, u: int, v: int, max_gap: int) -> np.ndarray:
    """Bool mask over 0..max_gap marking realized gaps from u to v (exact)."""
    mask = np.zeros(max_gap + 1, dtype=bool)
    w = min(max_gap, walk.size - 1)
    if w < 1:
        return mask
    occ_u = np.flatnonzero(walk == u)
    occ_v = np.flatnonzero(walk == v)
    if occ_u.size == 0 or occ_v.size == 0:
        return mask
    # Sparse path: windowed join of the occurrence lists.
    density = occ_v.size / walk.size
    expected_pairs = occ_u.size * max(1.0, density * w)
    if expected_pairs <= 2_000_000:
        occ_u = occ_u.astype(np.int64)
        occ_v = occ_v.astype(np.int64)
        lo = np.searchsorted(occ_v, occ_u + 1)
        hi = np.searchsorted(occ_v, occ_u + w, side="right")
        counts = hi - lo
        total = int(counts.sum())
        if total:
            starts = np.concatenate(([0], np.cumsum(counts)[:-1]))
            flat = np.arange(total, dtype=np.int64) + np.repeat(lo - starts, counts)
            mask[occ_v[flat] - np.repeat(occ_u, counts)] = True
        return mask
    # Dense path: packed bitset shift-AND, one pass per gap value.
    bits_u = np.packbits(walk == u)
    shifted_v = [np.packbits((walk == v)[r:]) for r in range(8)]
    for gap in range(1, w + 1):
        q, r = divmod(gap, 8)
        pb = shifted_v[r]
        nb = min(bits_u.size, pb.size - q)
        if nb > 0 and np.bitwise_and(bits_u[:nb], pb[q:q + nb]).any():
            mask[gap] = True
    return mask


def _mark_pair_table(seg: np.ndarray, table: np.ndarray, max_gap: int) -> None:
    for gap in range(1, min(max_gap, seg.size - 1) + 1):
        table[seg[:-gap], seg[gap:], gap] = True


def _strip_segments(
    spec: CoveringSpec, m: int, n: int, window: int, cap: int | None = None
) -> tuple[list[np.ndarray], str]:
    """Segments whose pair scan is exhaustive for gaps ``<= window`` in circuit ``m``.

    Picks the lowest level ``k0 >= n`` whose circuit length exceeds the
    window, materializes that one walk, and adds short strips for every
    distinct loop run separating consecutive level-``k0`` traversals (runs at
    least ``window + 1`` long are never bridged: both sides are emitted
    separately, padded by enough central vertices) plus the two margin strips.
    """
    l_m = circuit_length(spec, m)
    limit = expansion_cap(cap)
    if l_m + 1 <= limit and l_m < window + 1:
        return [_walk_array(spec, m, n, cap=cap)], "materialized"
    k0 = None
    for k in range(n, m + 1):
        if circuit_length(spec, k) >= window + 1:
            k0 = k
            break
    if k0 is None:
        raise ExpansionTooLarge(l_m + 1, limit, what=f"gap scan of circuit {m} over level {n}")
    core = _walk_array(spec, k0, n, cap=cap)
    w1 = window + 1
    segs = [core]
    if m == k0:
        return segs, "strips"
    dt = core.dtype
    head = core[:w1]
    tail = core[-w1:]
    runs: set[int] = set()
    overflow = False
    for k in range(m - 1, k0 - 1, -1):
        lm = level_map(spec, k)
        lifted = set()
        for g in runs:
            val = lm.a[-1] + g + lm.a[0]
            lifted.add(min(val, w1))
        runs = lifted | {min(x, w1) for x in lm.a[1:-1]}
    for g in sorted(runs):
        if g >= w1:
            overflow = True
            continue
        if g == 0:
            segs.append(np.concatenate([tail, core[1:w1 + 1]]))
        else:
            segs.append(np.concatenate([tail, np.zeros(g - 1, dtype=dt), head]))
    lead = sum(level_map(spec, k).a[0] for k in range(k0, m))
    trail = sum(level_map(spec, k).a[-1] for k in range(k0, m))
    if overflow or lead > window:
        segs.append(np.concatenate([np.zeros(w1, dtype=dt), head]))
    else:
        segs.append(np.concatenate([np.zeros(lead, dtype=dt), head]))
    if overflow or trail > window:
        segs.append(np.concatenate([tail, np.zeros(w1, dtype=dt)]))
    else:
        segs.append(np.concatenate([tail, np.zeros(trail, dtype=dt)]))
    return segs, "strips"


def gap_set(
    spec: CoveringSpec,
    m: int,
    n: int,
    u: int,
    v: int,
    max_gap: int,
    cap: int | None = None,
    include_zero: bool = False,
) -> GapSet:
    """Realized gaps from ``u`` to ``v`` in the level-``n`` walk of circuit ``m``.

    Gaps of size 0 (a vertex paired with itself at the same time) are excluded
    unless ``include_zero`` is set.  When the full walk exceeds the cap the
    exact strip engine is used instead of failing.
    """
    if not 1 <= n <= m <= spec.depth + 1:
        raise UsageError(f"need 1 <= n <= m <= {spec.depth + 1}, got n={n}, m={m}")
    l_n = circuit_length(spec, n)
    for name, x in (("u", u), ("v", v)):
        if not 0 <= x < l_n:
            raise UsageError(f"vertex {name}={x} outside 0..{l_n - 1}")
    if max_gap < 1:
        raise UsageError(f"max_gap must be >= 1, got {max_gap}")
    limit = expansion_cap(cap)
    l_m = circuit_length(spec, m)
    if l_m + 1 <= limit:
        mask = _occurrence_gap_mask(_walk_array(spec, m, n, cap=cap), u, v, max_gap)
        engine = "materialized"
    else:
        segs, engine = _strip_segments(spec, m, n, max_gap, cap=cap)
        mask = np.zeros(max_gap + 1, dtype=bool)
        for seg in segs:
            mask |= _occurrence_gap_mask(seg, u, v, max_gap)
    gaps = [int(g) for g in np.flatnonzero(mask) if g >= 1]
    if include_zero and u == v:
        gaps = [0] + gaps
    return GapSet(level=n, m=m, u=u, v=v, max_gap=max_gap, gaps=tuple(gaps), engine=engine)


def realized_gap_table(
    spec: CoveringSpec, m: int, n: int, max_gap: int, cap: int | None = None
) -> tuple[np.ndarray, str]:
    """All-pairs realized-gap table ``T[u, v, gap]`` for gaps ``1 .. max_gap``."""
    l_n = circuit_length(spec, n)
    if l_n > 2048:
        raise UsageError(f"all-pairs table only supported for l_n <= 2048, got {l_n}")
    limit = expansion_cap(cap)
    l_m = circuit_length(spec, m)
    table = np.zeros((l_n, l_n, max_gap + 1), dtype=bool)
    if l_m + 1 <= limit:
        _mark_pair_table(_walk_array(spec, m, n, cap=cap), table, max_gap)
        return table, "materialized"
    segs, engine = _strip_segments(spec, m, n, max_gap, cap=cap)
    for seg in segs:
        _mark_pair_table(seg, table, max_gap)
    return table, engine


def gap_structure_report(spec: CoveringSpec, m: int, n: int, cap: int | None = None) -> GapStructureReport:
    """Scan which cumulative-run separations occur between circuit blocks.

    Reports, for each ``k`` in ``n .. m-2``, whether the loop run of length
    ``tau(k, n)`` (sum of both margins over levels ``n .. k``) is realized
    between consecutive ``C`` blocks of the level-``n`` symbol word, plus
    whether adjacent traversals (``CC``) occur at the top expansion level.
    """
    if not 1 <= n < m <= spec.depth + 1:
        raise UsageError(f"need 1 <= n < m <= {spec.depth + 1}, got n={n}, m={m}")
    word = compose_word(spec, m, n, cap=cap)
    first = word.index("C")
    last = word.rindex("C")
    pieces = word[first:last + 1].split("C")[1:-1]
    interior = sorted({len(p) for p in pieces})
    realized = set(interior)
    taus = []
    for k in range(n, m - 1):
        lead = sum(level_map(spec, i).a[0] for i in range(n, k + 1))
        trail = sum(level_map(spec, i).a[-1] for i in range(n, k + 1))
        tau = lead + trail
        taus.append((k, tau, tau in realized))
    cc_present = "CC" in compose_word(spec, m, m - 1, cap=cap)
    return GapStructureReport(
        level=n,
        m=m,
        cc_present=cc_present,
        taus=tuple(taus),
        interior_runs=tuple(interior),
    )
