"""Data model for rank-2 proximal graph coverings.

A covering is presented by the length of the base circuit (``l1``) together
with one *level map* per level.  The level-``n`` map describes how the circuit
of level ``n+1`` winds through the level-``n`` graph: it is a word over
``{E, C}`` that starts and ends with ``E``, where ``E`` is one traversal of
the level-``n`` loop and ``C`` is one full traversal of the level-``n``
circuit.  Equivalently, the map is the exponent vector ``a = (a0, ..., ab)``
(loop powers) interleaved with ``b`` circuit traversals.

This module holds the spec types, validation, the circuit-length calculus,
telescoping (composing consecutive level maps), and JSON (de)serialization.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

from .errors import ExpansionTooLarge, UsageError

#: Default cap on materialized symbols / walk entries for any single expansion.
DEFAULT_EXPANSION_CAP = 10**8

#: Environment variable that overrides the default cap.
CAP_ENV_VAR = "PROXRANK2_CAP"


def expansion_cap(override: int | None = None) -> int:
    """Resolve the effective materialization cap.

    Precedence: explicit ``override`` argument, then ``PROXRANK2_CAP`` in the
    environment, then :data:`DEFAULT_EXPANSION_CAP`.
    """
    if override is not None:
        if override < 1:
            raise UsageError(f"cap must be positive, got {override}")
        return override
    env = os.environ.get(CAP_ENV_VAR)
    if env:
        try:
            val = int(env)
        except ValueError as exc:
            raise UsageError(f"{CAP_ENV_VAR} must be an integer, got {env!r}") from exc
        if val < 1:
            raise UsageError(f"{CAP_ENV_VAR} must be positive, got {val}")
        return val
    return DEFAULT_EXPANSION_CAP


@dataclass(frozen=True)
class RestrictedLevelMap:
    """A level map in the restricted shape ``E^s C^t a_mid C^t2 E^s2``.

    ``s``/``s2`` are the leading/trailing loop powers, ``t``/``t2`` the sizes
    of the two circuit bursts bracketing the middle word ``a_mid`` (itself a
    word over ``{E, C}``, possibly empty).  The d-word calculus and the
    forbidden-window analysis only apply to maps carrying this shape.
    """

    s: int
    t: int
    a_mid: str
    t2: int
    s2: int

    def word(self) -> str:
        return "E" * self.s + "C" * self.t + self.a_mid + "C" * self.t2 + "E" * self.s2

    def to_level_map(self) -> "LevelMap":
        """The same map in run-length form, carrying the restricted fields.

        Assembled run-by-run, so huge ``s``/``t`` exponents never materialize
        a word.
        """
        runs: list[list] = []

        def push(sym: str, cnt: int) -> None:
            if cnt <= 0:
                return
            if runs and runs[-1][0] == sym:
                runs[-1][1] += cnt
            else:
                runs.append([sym, cnt])

        push("E", self.s)
        push("C", self.t)
        prev = ""
        cnt = 0
        for ch in self.a_mid:
            if ch == prev:
                cnt += 1
            else:
                push(prev, cnt)
                prev, cnt = ch, 1
        push(prev, cnt)
        push("C", self.t2)
        push("E", self.s2)
        a = [0]
        b = 0
        for sym, count in runs:
            if sym == "E":
                a[-1] += count
            else:
                b += count
                a.extend([0] * count)
        return LevelMap(a=tuple(a), b=b, restricted=self)

    @property
    def s_bar(self) -> int:
        """Total loop power of the map (``s + s2`` plus loops inside ``a_mid``)."""
        return self.s + self.s2 + self.a_mid.count("E")

    @property
    def t_bar(self) -> int:
        """Total winding number of the map (``t + t2`` plus circuits inside ``a_mid``)."""
        return self.t + self.t2 + self.a_mid.count("C")

    def problems(self) -> list[str]:
        out = []
        for name in ("s", "t", "t2", "s2"):
            v = getattr(self, name)
            if not isinstance(v, int) or isinstance(v, bool):
                out.append(f"restricted field {name} must be an int, got {v!r}")
        if not out:
            if self.s < 1 or self.s2 < 1:
                out.append("restricted form needs s >= 1 and s' >= 1")
            if self.t < 2 or self.t2 < 2:
                out.append("restricted form needs t >= 2 and t' >= 2")
        if not isinstance(self.a_mid, str) or any(ch not in "EC" for ch in self.a_mid):
            out.append(f"a_mid must be a word over {{E, C}}, got {self.a_mid!r}")
        return out


def _word_to_runs(word: str) -> tuple[tuple[int, ...], int]:
    """Run-length parse an {E, C} word into (loop exponents a, winding b)."""
    if not word or any(ch not in "EC" for ch in word):
        raise UsageError(f"level-map word must be a nonempty word over {{E, C}}, got {word!r}")
    a = [0]
    b = 0
    for ch in word:
        if ch == "E":
            a[-1] += 1
        else:
            b += 1
            a.append(0)
    return tuple(a), b


@dataclass(frozen=True)
class LevelMap:
    """One level of the presentation: loop exponents ``a`` around ``b`` windings.

    ``a`` has ``b + 1`` entries; ``a[0]`` and ``a[-1]`` are the margins of the
    map and must be positive for the presentation to be in reduced form.  The
    constructor is permissive (it only freezes the data); use
    :meth:`problems` or :func:`validate` to check the invariants.
    """

    a: tuple[int, ...]
    b: int
    restricted: RestrictedLevelMap | None = None

    @classmethod
    def from_word(cls, word: str, restricted: RestrictedLevelMap | None = None) -> "LevelMap":
        a, b = _word_to_runs(word)
        return cls(a=a, b=b, restricted=restricted)

    def word(self) -> str:
        parts = ["E" * self.a[0]]
        for j in range(1, self.b + 1):
            parts.append("C")
            parts.append("E" * self.a[j])
        return "".join(parts)

    @property
    def a_total(self) -> int:
        return sum(self.a)

    def next_length(self, l_n: int) -> int:
        """Circuit length one level up: ``l_{n+1} = sum(a) + b * l_n``."""
        return self.a_total + self.b * l_n

    def problems(self) -> list[str]:
        out = []
        if not isinstance(self.b, int) or isinstance(self.b, bool) or self.b < 1:
            out.append(f"winding number b must be an int >= 1, got {self.b!r}")
            return out
        if not isinstance(self.a, tuple) or len(self.a) != self.b + 1:
            out.append(f"a must be a tuple of b+1={self.b + 1} entries, got {self.a!r}")
            return out
        for j, v in enumerate(self.a):
            if not isinstance(v, int) or isinstance(v, bool) or v < 0:
                out.append(f"a[{j}] must be a nonnegative int, got {v!r}")
        if not out:
            if self.a[0] < 1:
                out.append("leading margin a[0] must be >= 1 (reduced form)")
            if self.a[-1] < 1:
                out.append(f"trailing margin a[{self.b}] must be >= 1 (reduced form)")
        if self.restricted is not None:
            out.extend(self.restricted.problems())
            if not out:
                rform = self.restricted.to_level_map()
                if (rform.a, rform.b) != (self.a, self.b):
                    out.append("restricted fields disagree with the (a, b) data")
        return out


@dataclass(frozen=True)
class FamilyInfo:
    """Optional provenance of a generated spec: a tag plus generator parameters.

    ``params`` may carry machine-checkable per-level constraint records and a
    certified bound on the loop mass ``1 - r(n)`` that the ergodicity
    classifier can verify and extend.
    """

    tag: str
    params: dict = field(default_factory=dict)


@dataclass(frozen=True)
class CoveringSpec:
    """A finite presentation: base circuit length plus one map per level.

    ``levels[k]`` is the map of level ``k+1`` (1-based level ``n`` has map
    ``levels[n-1]``, describing circuit ``n+1`` over graph ``n``).  A spec of
    depth ``D`` presents circuit lengths for levels ``1 .. D+1``.
    """

    l1: int
    levels: tuple[LevelMap, ...]
    family: FamilyInfo | None = None

    @property
    def depth(self) -> int:
        return len(self.levels)


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    problems: tuple[str, ...]
    warnings: tuple[str, ...]
    level_summaries: tuple[str, ...]

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "problems": list(self.problems),
            "warnings": list(self.warnings),
            "levels": list(self.level_summaries),
        }


def validate(spec: CoveringSpec) -> ValidationReport:
    """Check every presentation invariant and collect warnings.

    Invalid data never raises here: all failures are reported.  A winding
    number of 1 at some level yields a warning (such a level does not refine
    the partition into a Cantor set on its own), not an error.
    """
    problems: list[str] = []
    warnings: list[str] = []
    summaries: list[str] = []
    if not isinstance(spec.l1, int) or isinstance(spec.l1, bool) or spec.l1 < 2:
        problems.append(f"l1 must be an int >= 2, got {spec.l1!r}")
    for idx, lm in enumerate(spec.levels, start=1):
        lp = lm.problems()
        for p in lp:
            problems.append(f"level {idx}: {p}")
        if not lp:
            if lm.b == 1:
                warnings.append(
                    f"level {idx}: b=1 (a single winding refines no partition; "
                    "the system is Cantor only if b >= 2 at infinitely many levels)"
                )
            shape = "restricted" if lm.restricted is not None else "general"
            summaries.append(f"level {idx}: ok ({shape}, b={lm.b}, sum(a)={lm.a_total})")
        else:
            summaries.append(f"level {idx}: INVALID ({len(lp)} problem(s))")
    return ValidationReport(
        ok=not problems,
        problems=tuple(problems),
        warnings=tuple(warnings),
        level_summaries=tuple(summaries),
    )


def level_map(spec: CoveringSpec, n: int) -> LevelMap:
    """The map of level ``n`` (the word of circuit ``n+1`` over graph ``n``)."""
    if not 1 <= n <= spec.depth:
        raise UsageError(f"level map index {n} outside presented range 1..{spec.depth}")
    return spec.levels[n - 1]


def circuit_length(spec: CoveringSpec, n: int) -> int:
    """Length of the level-``n`` circuit; presented levels are ``1 .. depth+1``."""
    if not 1 <= n <= spec.depth + 1:
        raise UsageError(f"circuit level {n} outside presented range 1..{spec.depth + 1}")
    length = spec.l1
    for k in range(1, n):
        length = spec.levels[k - 1].next_length(length)
    return length


def winding_product(spec: CoveringSpec, m: int, n: int) -> int:
    """Number of level-``n`` circuit traversals inside one level-``m`` circuit."""
    if not 1 <= n <= m <= spec.depth + 1:
        raise UsageError(f"need 1 <= n <= m <= {spec.depth + 1}, got n={n}, m={m}")
    prod = 1
    for k in range(n, m):
        prod *= spec.levels[k - 1].b
    return prod


def symbol_count(spec: CoveringSpec, m: int, n: int) -> int:
    """Symbols in the level-``n`` word of the level-``m`` circuit (E's plus C's)."""
    big_b = winding_product(spec, m, n)
    return big_b + (circuit_length(spec, m) - big_b * circuit_length(spec, n))


def compose_word(spec: CoveringSpec, m: int, n: int, cap: int | None = None) -> str:
    """Word of the level-``m`` circuit over graph ``n`` (allows ``m == n`` -> "C")."""
    if not 1 <= n <= m <= spec.depth + 1:
        raise UsageError(f"need 1 <= n <= m <= {spec.depth + 1}, got n={n}, m={m}")
    limit = expansion_cap(cap)
    need = symbol_count(spec, m, n)
    if need > limit:
        raise ExpansionTooLarge(need, limit, what=f"word of circuit {m} over level {n}")
    word = "C"
    for k in range(m - 1, n - 1, -1):
        word = word.replace("C", spec.levels[k - 1].word())
    return word


def telescope(spec: CoveringSpec, keep_levels: Sequence[int], cap: int | None = None) -> CoveringSpec:
    """Compose consecutive level maps, retaining only the listed levels.

    ``keep_levels`` must be strictly increasing presented levels; the result
    presents the same circuits at the retained levels (the composed map
    between retained neighbors is the run-length parse of the composed word).
    Keeping every presented level returns the spec unchanged.
    """
    keep = list(keep_levels)
    if not keep:
        raise UsageError("keep_levels must be nonempty")
    if any(keep[i] >= keep[i + 1] for i in range(len(keep) - 1)):
        raise UsageError(f"keep_levels must be strictly increasing, got {keep}")
    if keep[0] < 1 or keep[-1] > spec.depth + 1:
        raise UsageError(
            f"keep_levels must lie in the presented range 1..{spec.depth + 1}, got {keep}"
        )
    if keep == list(range(1, spec.depth + 2)):
        return spec
    new_levels: list[LevelMap] = []
    for lo, hi in zip(keep, keep[1:]):
        if hi == lo + 1:
            new_levels.append(spec.levels[lo - 1])
        else:
            new_levels.append(LevelMap.from_word(compose_word(spec, hi, lo, cap=cap)))
    family = spec.family
    if family is not None:
        original = family.params.get("original_levels")
        if original is None:
            original = list(range(1, spec.depth + 2))
        params = dict(family.params)
        params["original_levels"] = [original[k - 1] for k in keep]
        family = FamilyInfo(tag=family.tag, params=params)
    return CoveringSpec(l1=circuit_length(spec, keep[0]), levels=tuple(new_levels), family=family)


# --------------------------------------------------------------------------
# JSON (de)serialization
# --------------------------------------------------------------------------

def level_map_to_dict(lm: LevelMap) -> dict:
    if lm.restricted is not None:
        r = lm.restricted
        return {"s": r.s, "t": r.t, "a_mid": r.a_mid, "t'": r.t2, "s'": r.s2}
    return {"a": list(lm.a), "b": lm.b}


def level_map_from_dict(d: dict) -> LevelMap:
    if "s" in d:
        r = RestrictedLevelMap(
            s=d["s"], t=d["t"], a_mid=d.get("a_mid", ""), t2=d["t'"], s2=d["s'"]
        )
        bad = r.problems()
        if bad:
            raise UsageError("; ".join(bad))
        return LevelMap.from_word(r.word(), restricted=r)
    try:
        return LevelMap(a=tuple(d["a"]), b=d["b"])
    except (KeyError, TypeError) as exc:
        raise UsageError(f"level map dict needs 'a'/'b' or restricted keys, got {d!r}") from exc


def spec_to_dict(spec: CoveringSpec) -> dict:
    out: dict[str, Any] = {
        "l1": spec.l1,
        "levels": [level_map_to_dict(lm) for lm in spec.levels],
        "family": None,
    }
    if spec.family is not None:
        out["family"] = {"tag": spec.family.tag, "params": spec.family.params}
    return out


def spec_from_dict(d: dict) -> CoveringSpec:
    try:
        l1 = d["l1"]
        raw_levels = d["levels"]
    except (KeyError, TypeError) as exc:
        raise UsageError(f"spec dict needs 'l1' and 'levels', got {d!r}") from exc
    levels = tuple(level_map_from_dict(x) for x in raw_levels)
    family = None
    fam = d.get("family")
    if fam:
        family = FamilyInfo(tag=fam["tag"], params=dict(fam.get("params") or {}))
    return CoveringSpec(l1=l1, levels=levels, family=family)


def spec_to_json(spec: CoveringSpec) -> str:
    return json.dumps(spec_to_dict(spec), sort_keys=True, separators=(",", ":"))


def spec_from_json(text: str) -> CoveringSpec:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"invalid spec JSON: {exc}") from exc
    return spec_from_dict(data)
