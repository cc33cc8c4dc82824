"""Invariant-measure calculus: exact rationals throughout.

``r(n)`` is the fraction of time a level-``n+1`` circuit traversal spends on
level-``n`` circuit edges: ``r(n) = b(n) * l_n / l_{n+1}``; the loop mass is
``1 - r(n) = sum(a(n)) / l_{n+1}``.  Products ``r(m, n)`` telescope, and the
convergence or divergence of ``sum(1 - r(i))`` decides between two ergodic
measures and unique ergodicity.  Everything here uses ``fractions.Fraction``
with zero tolerance; floats appear only in rendered output.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .covering import (
    CoveringSpec,
    circuit_length,
    level_map,
    winding_product,
)
from .errors import UsageError


def rat_to_json(x: Fraction) -> dict:
    return {"num": str(x.numerator), "den": str(x.denominator)}


def rat_from_json(d: dict) -> Fraction:
    return Fraction(int(d["num"]), int(d["den"]))


@dataclass(frozen=True)
class SimplexPoint:
    """Barycentric weights of the two extreme measures seen at level ``n``."""

    level: int
    w_e: Fraction
    w_c: Fraction

    def problems(self) -> list[str]:
        out = []
        if self.w_e < 0 or self.w_c < 0:
            out.append("weights must be nonnegative")
        if self.w_e + self.w_c != 1:
            out.append(f"weights must sum to 1, got {self.w_e + self.w_c}")
        return out

    def to_dict(self) -> dict:
        return {"level": self.level, "w_e": rat_to_json(self.w_e), "w_c": rat_to_json(self.w_c)}


@dataclass(frozen=True)
class MeasureVector:
    """Per-edge weights on the level-``n`` graph: one loop edge, ``l_n`` circuit edges.

    Conservation on this graph shape means constant flow along the circuit
    (each interior vertex has a unique in/out edge); the central vertex then
    balances automatically.  The same check applies to any one-circuit-plus-
    loop graph, which is all the diagram layers used elsewhere need.
    """

    level: int
    loop: Fraction
    circuit: tuple[Fraction, ...]

    @property
    def mass(self) -> Fraction:
        return self.loop + sum(self.circuit, Fraction(0))

    @property
    def conserved(self) -> bool:
        return all(w == self.circuit[0] for w in self.circuit[1:])

    def to_dict(self) -> dict:
        return {
            "level": self.level,
            "loop": rat_to_json(self.loop),
            "circuit": [rat_to_json(w) for w in self.circuit],
        }


def r_value(spec: CoveringSpec, n: int) -> Fraction:
    """Circuit mass of one refinement step: ``r(n) = b(n) l_n / l_{n+1}``."""
    lm = level_map(spec, n)
    l_n = circuit_length(spec, n)
    return Fraction(lm.b * l_n, lm.next_length(l_n))


def one_minus_r(spec: CoveringSpec, n: int) -> Fraction:
    """Loop mass of one refinement step: ``sum(a(n)) / l_{n+1}``."""
    return 1 - r_value(spec, n)


def r_product(spec: CoveringSpec, m: int, n: int) -> Fraction:
    """Telescoped circuit mass ``r(m, n) = prod_{i=n}^{m-1} r(i)``.

    Equals the exact fraction of circuit time steps in the level-``n``
    expansion of the level-``m`` circuit: ``B(m, n) * l_n / l_m``.
    """
    if not 1 <= n <= m <= spec.depth + 1:
        raise UsageError(f"need 1 <= n <= m <= {spec.depth + 1}, got n={n}, m={m}")
    prod = Fraction(1)
    for i in range(n, m):
        prod *= r_value(spec, i)
    return prod


def xi_project(spec: CoveringSpec, m: int, n: int, point: SimplexPoint) -> SimplexPoint:
    """Project level-``m`` simplex coordinates down to level ``n``.

    The loop extreme maps to the loop extreme; the circuit extreme splits as
    ``(1 - r(m, n))`` loop plus ``r(m, n)`` circuit.
    """
    if not 1 <= n < m <= spec.depth + 1:
        raise UsageError(f"need 1 <= n < m <= {spec.depth + 1}, got n={n}, m={m}")
    if point.level != m:
        raise UsageError(f"point is at level {point.level}, expected {m}")
    rr = r_product(spec, m, n)
    return SimplexPoint(level=n, w_e=point.w_e + point.w_c * (1 - rr), w_c=point.w_c * rr)


def vertex_measure(
    spec: CoveringSpec, n: int, m_horizon: int, which: str = "nonatomic"
) -> MeasureVector:
    """Edge weights at level ``n`` of either extreme measure.

    ``fixed``: the point mass of the orbit trapped on the loop (weight 1 on
    the loop edge).  ``nonatomic``: occurrence frequencies in the level-``n``
    expansion of the level-``m_horizon`` circuit — the loop edge carries
    ``(l_m - B l_n) / l_m`` and every circuit edge ``B / l_m``, where ``B`` is
    the winding product.
    """
    if not 1 <= n <= m_horizon <= spec.depth + 1:
        raise UsageError(
            f"need 1 <= n <= m_horizon <= {spec.depth + 1}, got n={n}, m={m_horizon}"
        )
    l_n = circuit_length(spec, n)
    if which == "fixed":
        return MeasureVector(
            level=n, loop=Fraction(1), circuit=tuple(Fraction(0) for _ in range(l_n))
        )
    if which != "nonatomic":
        raise UsageError(f"which must be 'fixed' or 'nonatomic', got {which!r}")
    l_m = circuit_length(spec, m_horizon)
    big_b = winding_product(spec, m_horizon, n)
    loop = Fraction(l_m - big_b * l_n, l_m)
    edge = Fraction(big_b, l_m)
    return MeasureVector(level=n, loop=loop, circuit=tuple(edge for _ in range(l_n)))


def push_measure_down(spec: CoveringSpec, vec: MeasureVector) -> MeasureVector:
    """Refine a level-``n+1`` edge measure to level ``n`` by edge preimages.

    The loop covers the loop; each circuit time step of the level-``n+1``
    circuit lands on the loop or on a circuit edge according to the level
    map.  Summing weights over preimages is exact and needs no constancy.
    """
    n = vec.level - 1
    if n < 1:
        raise UsageError("cannot push below level 1")
    lm = level_map(spec, n)
    l_n = circuit_length(spec, n)
    if len(vec.circuit) != lm.next_length(l_n):
        raise UsageError(
            f"vector has {len(vec.circuit)} circuit edges, level {n + 1} has {lm.next_length(l_n)}"
        )
    loop = vec.loop
    circ = [Fraction(0) for _ in range(l_n)]
    pos = 0
    for ch in lm.word():
        if ch == "E":
            loop += vec.circuit[pos]
            pos += 1
        else:
            for i in range(l_n):
                circ[i] += vec.circuit[pos + i]
            pos += l_n
    return MeasureVector(level=n, loop=loop, circuit=tuple(circ))


# --------------------------------------------------------------------------
# Ergodicity classification
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class ErgodicityRow:
    i: int
    one_minus_r: Fraction
    partial_sum: Fraction
    partial_product: Fraction

    def to_dict(self) -> dict:
        return {
            "i": self.i,
            "one_minus_r": rat_to_json(self.one_minus_r),
            "partial_sum": rat_to_json(self.partial_sum),
            "partial_product": rat_to_json(self.partial_product),
        }


@dataclass(frozen=True)
class ErgodicityReport:
    verdict: str  # "UniquelyErgodic" | "TwoErgodic" | "Undetermined"
    certified: bool
    certificate: str
    rows: tuple[ErgodicityRow, ...]

    @property
    def label(self) -> str:
        return f"{self.verdict}(certified)" if self.certified else self.verdict

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "certified": self.certified,
            "label": self.label,
            "certificate": self.certificate,
            "rows": [row.to_dict() for row in self.rows],
        }

    def to_csv(self) -> str:
        lines = ["i,one_minus_r,partial_sum,partial_product"]
        for row in self.rows:
            lines.append(
                f"{row.i},{row.one_minus_r},{row.partial_sum},{row.partial_product}"
            )
        return "\n".join(lines) + "\n"


def _kept_intervals(spec: CoveringSpec) -> list[tuple[int, int]] | None:
    """For a telescoped family spec, the original-level interval of each map."""
    fam = spec.family
    if fam is None:
        return None
    kept = fam.params.get("original_levels")
    if kept is None:
        return None
    return [(kept[j], kept[j + 1]) for j in range(len(kept) - 1)]


def classify_ergodicity(spec: CoveringSpec, depth: int | None = None) -> ErgodicityReport:
    """Tabulate the loop-mass series and give a verdict.

    A certified verdict needs a generator bound in the family metadata:

    * divergence (``1 - r(i) >= delta`` everywhere, or on recorded boundary
      levels) certifies unique ergodicity;
    * geometric convergence (``1 - r(i) <= scale * ratio^i``) certifies two
      ergodic measures.

    The bound is re-verified on every presented level (for telescoped specs,
    through the kept-level intervals).  Finite data alone never certifies:
    without a bound the verdict is ``Undetermined``.
    """
    top = spec.depth if depth is None else min(depth, spec.depth)
    if top < 1:
        raise UsageError("need at least one presented level")
    rows = []
    psum = Fraction(0)
    pprod = Fraction(1)
    for i in range(1, top + 1):
        x = one_minus_r(spec, i)
        psum += x
        pprod *= 1 - x
        rows.append(ErgodicityRow(i=i, one_minus_r=x, partial_sum=psum, partial_product=pprod))
    rows = tuple(rows)

    fam = spec.family
    bound = fam.params.get("bound") if fam is not None else None
    if not bound:
        return ErgodicityReport(
            verdict="Undetermined",
            certified=False,
            certificate=(
                "no generator bound: a finite prefix cannot decide whether the "
                "loop-mass series converges"
            ),
            rows=rows,
        )
    intervals = _kept_intervals(spec)
    kind = bound.get("type")

    if kind == "divergence":
        delta = rat_from_json(bound["delta"])
        ok = all(row.one_minus_r >= delta for row in rows)
        if ok:
            return ErgodicityReport(
                verdict="UniquelyErgodic",
                certified=True,
                certificate=(
                    f"generator divergence bound 1-r(i) >= {delta} verified on all "
                    f"{top} presented levels; the construction extends it to every "
                    "level, so the loop-mass series diverges"
                ),
                rows=rows,
            )
        return _bound_failed(rows, "divergence")

    if kind == "divergence_on_levels":
        delta = rat_from_json(bound["delta"])
        marked = list(bound.get("levels", []))
        checked = 0
        ok = True
        if intervals is None:
            for m in marked:
                if m <= top:
                    checked += 1
                    ok = ok and rows[m - 1].one_minus_r >= delta
        else:
            for j, (p, q) in enumerate(intervals[:top], start=1):
                if any(p <= m < q for m in marked):
                    checked += 1
                    ok = ok and rows[j - 1].one_minus_r >= delta
        if ok and checked:
            return ErgodicityReport(
                verdict="UniquelyErgodic",
                certified=True,
                certificate=(
                    f"generator boundary bound 1-r >= {delta} verified on {checked} "
                    "presented boundary level(s); the staged construction repeats "
                    "boundaries forever, so the loop-mass series diverges"
                ),
                rows=rows,
            )
        if ok:
            return ErgodicityReport(
                verdict="Undetermined",
                certified=False,
                certificate="no recorded boundary level is presented; cannot verify the bound",
                rows=rows,
            )
        return _bound_failed(rows, "boundary divergence")

    if kind == "convergence":
        scale = rat_from_json(bound["scale"])
        ratio = rat_from_json(bound["ratio"])
        if not 0 < ratio < 1:
            return _bound_failed(rows, "convergence (ratio outside (0,1))")
        ok = True
        for j, row in enumerate(rows, start=1):
            if intervals is None:
                limit = scale * ratio**j
            else:
                p, q = intervals[j - 1]
                limit = scale * (ratio**p - ratio**q) / (1 - ratio)
            ok = ok and row.one_minus_r <= limit
        if ok:
            return ErgodicityReport(
                verdict="TwoErgodic",
                certified=True,
                certificate=(
                    f"generator geometric bound 1-r(i) <= {scale} * {ratio}^i verified "
                    f"on all {top} presented levels; the construction extends it, so "
                    "the loop-mass series converges and both extreme measures survive"
                ),
                rows=rows,
            )
        return _bound_failed(rows, "convergence")

    return ErgodicityReport(
        verdict="Undetermined",
        certified=False,
        certificate=f"unknown bound type {kind!r}",
        rows=rows,
    )


def _bound_failed(rows, what: str) -> ErgodicityReport:
    return ErgodicityReport(
        verdict="Undetermined",
        certified=False,
        certificate=f"recorded {what} bound FAILED verification on the presented levels",
        rows=rows,
    )
