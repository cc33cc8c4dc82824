"""Acceptance suite: sixteen verification criteria, one printed line each.

Run ``pytest tests/test_acceptance.py -s`` to see a ``PASS``/``FAIL`` line
per criterion.  Every check is exact — big-integer lengths, ``Fraction``
measures, literal word equality — except where a wall-clock budget is part
of the criterion itself, in which case the budget is asserted too.
"""
from __future__ import annotations

import functools
import random
import time
from fractions import Fraction

import pytest

from proxrank2 import (
    ALPHA,
    BETA,
    TAU,
    CoveringSpec,
    LevelMap,
    apply_word,
    array_block,
    circuit_length,
    classify_ergodicity,
    commute_check,
    compose,
    conjugation_identity,
    covering_to_diagram,
    complexity_profile,
    cumulative_runs,
    d_word,
    diagram_to_covering,
    e_run_margins,
    expand_circuit_word,
    factor_language,
    forbidden_window_report,
    gen_mixing_family,
    gen_not_weakmix_family,
    gen_substitution_family,
    gen_uniquely_ergodic_family,
    gen_weakmix_not_mix_family,
    iterate,
    languages_equal,
    level1_separation_check,
    li_yorke_witness,
    minimal_path,
    mixing_window_check,
    one_minus_r,
    path_to_seed,
    position_of_path,
    position_of_seed,
    push_measure_down,
    r_product,
    residue_obstruction,
    seed_from_position,
    stable_point,
    substitution_bridge,
    validate_diagram,
    vershik_successor,
    vertex_measure,
)

from _corpus import random_plain_spec, random_restricted_spec

BASE = gen_substitution_family(depth=6)


def criterion(num: int, label: str):
    """Print one PASS/FAIL line per criterion, then let pytest record it."""

    def deco(fn):
        @functools.wraps(fn)
        def wrapper(*args, **kwargs):
            try:
                fn(*args, **kwargs)
            except BaseException:
                print(f"FAIL  criterion {num:2d}: {label}")
                raise
            print(f"PASS  criterion {num:2d}: {label}")

        return wrapper

    return deco


# ---------------------------------------------------------------------------
# 1. Substitution identities (exact, < 1 s)
# ---------------------------------------------------------------------------

@criterion(1, "substitution identities: tau^2(0), commutation, conjugation")
def test_criterion_01_substitution_identities():
    t0 = time.perf_counter()
    assert apply_word(compose(TAU, TAU), "0") == "0010011"
    assert apply_word(ALPHA, "0") == "0010011"
    assert commute_check(ALPHA, BETA) is True
    for k in range(1, 5):
        for ell in range(k + 1, k + 6):
            assert conjugation_identity(k, ell) is True, (k, ell)
    assert time.perf_counter() - t0 < 1.0


# ---------------------------------------------------------------------------
# 2. Language equality of the two seeded substitutions up to L = 24
# ---------------------------------------------------------------------------

@criterion(2, "stabilized factor sets of alpha and beta agree for all L <= 24")
def test_criterion_02_language_equality():
    t0 = time.perf_counter()
    depths: dict[int, tuple[int, int]] = {}
    for length in range(1, 25):
        cmp = languages_equal(ALPHA, "0", BETA, "0", length)
        assert cmp.equal, (length, cmp.only_left, cmp.only_right)
        # stabilization depth must be recorded on both sides
        assert cmp.left_stabilized_at is not None
        assert cmp.right_stabilized_at is not None
        depths[length] = (cmp.left_stabilized_at, cmp.right_stabilized_at)
    assert depths[24][0] >= 1 and depths[24][1] >= 1
    assert time.perf_counter() - t0 < 30.0


# ---------------------------------------------------------------------------
# 3. Covering language == substitution language, letter for letter
# ---------------------------------------------------------------------------

@criterion(3, "level-1 covering language (E->1, C->0) equals beta's factors, L <= 24")
def test_criterion_03_covering_substitution_bridge():
    for length in range(1, 25):
        report = substitution_bridge(length)
        assert report.equal, (length, report.only_covering, report.only_substitution)
        assert report.covering_size == report.substitution_size
        assert report.substitution_stabilized_at is not None


# ---------------------------------------------------------------------------
# 4. Length calculus of the base family
# ---------------------------------------------------------------------------

@criterion(4, "circuit lengths 2,7,31,...: quadrupling recurrence + iterate sizes")
def test_criterion_04_length_calculus():
    lengths = [circuit_length(BASE, n) for n in range(1, 8)]
    assert lengths == [2, 7, 31, 127, 511, 2047, 8191]
    # the first level winds its circuit twice, so the steady recurrence
    # l_{n+1} = 3 + 4 l_n starts one level up
    assert lengths[1] == 3 + 2 * lengths[0]
    for n in range(2, 7):
        assert lengths[n] == 3 + 4 * lengths[n - 1]
    # cross-check against the substitution iterate sizes on the same range
    for n in range(2, 8):
        assert len(iterate(BETA, "0", n - 1)) == circuit_length(BASE, n)


# ---------------------------------------------------------------------------
# 5. Strip identity on a random restricted corpus
# ---------------------------------------------------------------------------

@criterion(5, "E^s . d_word . E^s' reassembles the expansion on 25 random specs")
def test_criterion_05_strip_identity():
    rng = random.Random(0xACC5)
    for _ in range(25):
        spec = random_restricted_spec(rng, max_depth=6, max_length=10**6)
        n = rng.randint(2, max(2, spec.depth - 1))
        m = rng.randint(n + 2, spec.depth + 1)
        runs = cumulative_runs(spec, m - 1, n)
        word = expand_circuit_word(spec, m, n).symbols
        assert word == "E" * runs.s + d_word(spec, m, n) + "E" * runs.s2, (m, n)


# ---------------------------------------------------------------------------
# 6. Margin growth on the same corpus class
# ---------------------------------------------------------------------------

@criterion(6, "e-run margins >= (m-n, m-n) on 25 random restricted specs")
def test_criterion_06_margins():
    rng = random.Random(0xACC6)
    failures = []
    for _ in range(25):
        spec = random_restricted_spec(rng, max_depth=6, max_length=10**6)
        for n in range(1, spec.depth + 1):
            for m in range(n + 1, spec.depth + 2):
                left, right = e_run_margins(spec, m, n)
                if left < m - n or right < m - n:
                    failures.append((spec.l1, m, n, left, right))
    assert failures == []


# ---------------------------------------------------------------------------
# 7. Measure calculus: exact rational, zero tolerance
# ---------------------------------------------------------------------------

@criterion(7, "r-products, flow conservation, mass 1, refinement — exact rationals")
def test_criterion_07_measure_calculus():
    rng = random.Random(0xACC7)
    for _ in range(15):
        spec = random_restricted_spec(rng, max_depth=5, max_length=10**5)
        n = rng.randint(1, spec.depth)
        m = rng.randint(n + 1, spec.depth + 1)
        sym = expand_circuit_word(spec, m, n).symbols
        frac = Fraction(sym.count("C") * circuit_length(spec, n), circuit_length(spec, m))
        assert r_product(spec, m, n) == frac, (m, n)
    for _ in range(10):
        spec = random_restricted_spec(rng, max_depth=5, max_length=10**5)
        top = spec.depth + 1
        for n in range(1, top):
            vec = vertex_measure(spec, n, top)
            assert vec.mass == 1
            assert vec.conserved
        n = rng.randint(2, spec.depth)
        down = push_measure_down(spec, vertex_measure(spec, n, top))
        assert down.mass == 1 and down.conserved
        assert down.circuit == vertex_measure(spec, n - 1, top).circuit
        assert down.loop == vertex_measure(spec, n - 1, top).loop


# ---------------------------------------------------------------------------
# 8. Ergodicity classification with certificates
# ---------------------------------------------------------------------------

@criterion(8, "classifier: TwoErgodic / UniquelyErgodic certified, hand spec open")
def test_criterion_08_ergodicity_classification():
    report = classify_ergodicity(BASE)
    assert report.verdict == "TwoErgodic" and report.certified
    by_i = {row.i: row for row in report.rows}
    lengths = [circuit_length(BASE, n) for n in range(1, 8)]
    for i in range(1, 7):
        assert by_i[i].one_minus_r == Fraction(3, lengths[i])  # == 3 / l_{i+1}
    for i in range(2, 7):
        assert lengths[i] >= 4 * lengths[i - 1]  # convergent regime
    ue = gen_uniquely_ergodic_family(depth=5)
    ue_report = classify_ergodicity(ue)
    assert ue_report.verdict == "UniquelyErgodic" and ue_report.certified
    for n in range(1, ue.depth + 1):
        assert one_minus_r(ue, n) >= Fraction(1, 2)  # divergent regime
    hand = CoveringSpec(
        l1=3,
        levels=(LevelMap(a=(1, 0, 1), b=2), LevelMap(a=(2, 1, 2), b=2)),
    )
    assert classify_ergodicity(hand).verdict == "Undetermined"


# ---------------------------------------------------------------------------
# 9. Mixing evidence: full gap window on all 121 vertex pairs, < 60 s
# ---------------------------------------------------------------------------

@criterion(9, "mixing family: [33, 2(m-1)] realized for all 121 vertex pairs")
def test_criterion_09_mixing_window():
    t0 = time.perf_counter()
    mix = gen_mixing_family(depth=20)
    assert circuit_length(mix, 1) == 11
    report = mixing_window_check(mix, 21, 1, cap=10**7)
    assert report.ok, (report.precondition_violations, report.failures[:3])
    assert report.window == (33, 40)
    assert report.pairs_checked == 121
    assert report.failures == () and report.precondition_violations == ()
    assert report.engine.startswith("strip")  # never materializes 10^7 symbols
    assert time.perf_counter() - t0 < 60.0


# ---------------------------------------------------------------------------
# 10. Non-weak-mixing evidence: gaps trapped mod 3
# ---------------------------------------------------------------------------

@criterion(10, "p=3 family: v1->v1 gaps = 0 mod 3, v1->v2 gaps = 1 mod 3, to 10^5")
def test_criterion_10_residue_obstruction():
    nw = gen_not_weakmix_family(3, depth=15)
    report = residue_obstruction(nw, 1, 3, 16, max_gap=100_000)
    assert report.passed
    # every occurrence of v1 sits in one residue class and v2 in the next,
    # which traps *all* gaps, not just the scanned ones
    assert len(report.classes_v1) == 1 and len(report.classes_v2) == 1
    assert (report.classes_v2[0] - report.classes_v1[0]) % 3 == 1
    assert report.scan_max_gap == 100_000
    assert report.violations_v1v1 == () and report.violations_v1v2 == ()
    assert report.scanned_v1v1 > 0 and report.scanned_v1v2 > 0


# ---------------------------------------------------------------------------
# 11. Weak-mix-not-mix evidence: empty window past each stage boundary
# ---------------------------------------------------------------------------

@criterion(11, "staged family: empty gap window after l(d)+1 at both boundaries")
def test_criterion_11_forbidden_window():
    wm = gen_weakmix_not_mix_family(depth=7)
    for m, want_len in ((3, 431), (6, 216181)):
        rep = forbidden_window_report(wm, m)
        assert rep.lengths_agree, m
        assert rep.len_arith == rep.len_measured == want_len
        assert rep.window_start == rep.len_arith + 1
        assert rep.width is not None and rep.width >= 1
        assert rep.first_realized == rep.window_start + rep.width
        assert rep.all_pairs_empty


# ---------------------------------------------------------------------------
# 12. Entropy trend: complexity growth rate strictly decreasing
# ---------------------------------------------------------------------------

@criterion(12, "log2 p(L)/L strictly decreasing over L in {8,16,24}; p(24) < 2^12")
def test_criterion_12_complexity_trend():
    profile = complexity_profile(BASE, 24)
    by_len = {row.length: row for row in profile}
    for length in (8, 16, 24):
        assert by_len[length].stabilized
    r8, r16, r24 = (by_len[L].ratio for L in (8, 16, 24))
    assert r8 > r16 > r24
    assert by_len[24].count < 2**12


# ---------------------------------------------------------------------------
# 13. Bratteli round trip on random normalized specs
# ---------------------------------------------------------------------------

@criterion(13, "diagram round trip + diagram validation on 10 random specs")
def test_criterion_13_bratteli_round_trip():
    rng = random.Random(0xACC13)
    for _ in range(10):
        spec = random_plain_spec(rng, depth=5, max_length=3000)
        diagram = covering_to_diagram(spec)
        report = validate_diagram(diagram)
        assert report.ok, report.problems
        back = diagram_to_covering(diagram)
        assert back.l1 == spec.l1
        assert [lm.a for lm in back.levels] == [lm.a for lm in spec.levels]
        assert [lm.b for lm in back.levels] == [lm.b for lm in spec.levels]


# ---------------------------------------------------------------------------
# 14. Vershik successor == left shift on the array rendering
# ---------------------------------------------------------------------------

@criterion(14, "100 Vershik steps from the minimal path match array left-shifts")
def test_criterion_14_vershik_array_consistency():
    diagram = covering_to_diagram(BASE, rows=4)
    path = minimal_path(diagram, 4, "c")
    assert position_of_path(diagram, path) == 0
    window = (0, 8)
    base_block = array_block(BASE, path_to_seed(diagram, path), window)
    for i in range(1, 101):
        path = vershik_successor(diagram, path)
        assert position_of_path(diagram, path) == i
        seed = path_to_seed(diagram, path)
        assert seed == seed_from_position(BASE, 4, i)
        block = array_block(BASE, seed, (window[0] - i, window[1] - i))
        for row_a, row_b in zip(base_block.rows, block.rows):
            assert row_a.symbols == row_b.symbols, i
            assert row_a.cuts == tuple(c + i for c in row_b.cuts), i


# ---------------------------------------------------------------------------
# 15. Li-Yorke witnesses on the mixing family
# ---------------------------------------------------------------------------

@criterion(15, "10 random pairs: proximal at k=3 and separated within 10*l_3")
def test_criterion_15_li_yorke_witnesses():
    mix = gen_mixing_family(depth=6)
    horizon = 10 * circuit_length(mix, 3)
    top = 6
    l_top = circuit_length(mix, top)
    rng = random.Random(0xACC15)
    for _ in range(10):
        pos = rng.randrange(l_top - horizon - 3)
        delta = rng.choice((1, 2))
        a = seed_from_position(mix, top, pos)
        b = seed_from_position(mix, top, pos + delta)
        wit = li_yorke_witness(mix, a, b, horizon, 3)
        assert any(k >= 3 for _, k in wit.proximal_events), pos
        assert wit.separation_events and min(wit.separation_events) <= horizon
    # a stable point against a generic nearby point still separates; the
    # stable point sits near the right edge of the top circuit, so the
    # forward horizon is capped by the room that remains
    stable = stable_point(mix, top)
    stable_pos = position_of_seed(mix, stable)
    generic = seed_from_position(mix, top, stable_pos - 1)
    wit = li_yorke_witness(mix, stable, generic, l_top - 1 - stable_pos, 1)
    assert wit.separation_events
    # identical seeds never separate
    same = seed_from_position(mix, top, 5)
    assert li_yorke_witness(mix, same, same, horizon, 3).separation_events == ()


# ---------------------------------------------------------------------------
# 16. Level-1 separation of distinct level-3 segments
# ---------------------------------------------------------------------------

@criterion(16, "200 distinct level-3 segment pairs separate at level 1 within l_3")
def test_criterion_16_level1_separation():
    report = level1_separation_check(BASE, 3, 6, samples=200, rng_seed=11)
    assert report.samples == 200
    assert report.failures == ()
    assert report.max_padding <= circuit_length(BASE, 3)
