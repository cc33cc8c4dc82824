"""Spec model: validation, lengths, telescoping, serialization, families."""
from __future__ import annotations

import json
import random

import pytest

from proxrank2 import (
    CoveringSpec,
    LevelMap,
    RestrictedLevelMap,
    UsageError,
    circuit_length,
    classify_ergodicity,
    compose_word,
    gen_mixing_family,
    gen_not_weakmix_family,
    gen_substitution_family,
    gen_uniquely_ergodic_family,
    gen_weakmix_not_mix_family,
    spec_from_json,
    spec_to_json,
    symbol_count,
    telescope,
    validate,
    winding_product,
)

from _corpus import random_plain_spec, random_restricted_spec


def test_base_family_lengths_follow_recurrence():
    spec = gen_substitution_family(depth=6)
    lengths = [circuit_length(spec, i) for i in range(1, 8)]
    assert lengths == [2, 7, 31, 127, 511, 2047, 8191]
    # level 1 winds twice (ECECE); every deeper level winds four times
    assert lengths[1] == 3 + 2 * lengths[0]
    for prev, nxt in zip(lengths[1:], lengths[2:]):
        assert nxt == 3 + 4 * prev


def test_validate_accepts_generated_families():
    for spec in (
        gen_substitution_family(depth=5),
        gen_mixing_family(depth=5),
        gen_weakmix_not_mix_family(depth=7),
        gen_not_weakmix_family(3, depth=5),
        gen_uniquely_ergodic_family(depth=4),
    ):
        report = validate(spec)
        assert report.ok, report.problems
        assert report.problems == ()


def test_validate_flags_broken_margins():
    bad = CoveringSpec(l1=2, levels=(LevelMap(a=(0, 1, 1), b=2),))
    report = validate(bad)
    assert not report.ok
    assert any("margin" in p for p in report.problems)


def test_validate_flags_short_base_circuit():
    bad = CoveringSpec(l1=1, levels=(LevelMap(a=(1, 1), b=1),))
    report = validate(bad)
    assert not report.ok


def test_validate_warns_on_single_winding():
    spec = CoveringSpec(l1=2, levels=(LevelMap(a=(1, 1), b=1),))
    report = validate(spec)
    assert report.ok
    assert any("b = 1" in w or "winding" in w for w in report.warnings)


def test_restricted_run_form_matches_word_parse():
    rng = random.Random(0xC0FFEE)
    for _ in range(50):
        rm = RestrictedLevelMap(
            s=rng.randint(1, 5),
            t=rng.randint(2, 5),
            a_mid="".join(rng.choice("EC") for _ in range(rng.randint(0, 6))),
            t2=rng.randint(2, 5),
            s2=rng.randint(1, 5),
        )
        assert rm.to_level_map() == LevelMap.from_word(rm.word(), restricted=rm)


def test_restricted_run_form_handles_huge_exponents_symbolically():
    rm = RestrictedLevelMap(s=10**15, t=2, a_mid="", t2=3, s2=10**15)
    lm = rm.to_level_map()
    assert lm.b == 5
    assert lm.a[0] == 10**15 and lm.a[-1] == 10**15
    assert sum(lm.a) == 2 * 10**15


def test_winding_product_and_symbol_count():
    spec = gen_substitution_family(depth=4)
    assert winding_product(spec, 3, 1) == 2 * 4
    assert symbol_count(spec, 3, 1) == len(compose_word(spec, 3, 1))


def test_telescope_two_levels_of_base_family():
    spec = gen_substitution_family(depth=6)
    tel = telescope(spec, (1, 3))
    assert tel.l1 == 2
    assert tel.levels[0].a == (2, 1, 2, 1, 3, 1, 2, 1, 2)
    assert tel.levels[0].b == 8
    assert sum(tel.levels[0].a) == 15
    assert circuit_length(tel, 2) == 31


def test_telescope_composes_loop_exponents():
    spec = CoveringSpec(
        l1=2,
        levels=(LevelMap(a=(1, 0, 1), b=2), LevelMap(a=(1, 0, 1), b=2)),
    )
    tel = telescope(spec, (1, 3))
    assert tel.levels[0].a == (2, 0, 2, 0, 2)
    assert tel.levels[0].b == 4
    assert circuit_length(tel, 2) == circuit_length(spec, 3) == 14


def test_telescope_keep_all_is_identity():
    spec = gen_substitution_family(depth=5)
    tel = telescope(spec, tuple(range(1, spec.depth + 2)))
    assert [lm.a for lm in tel.levels] == [lm.a for lm in spec.levels]
    assert [lm.b for lm in tel.levels] == [lm.b for lm in spec.levels]


def test_telescope_preserves_kept_lengths_and_records_levels():
    spec = gen_substitution_family(depth=6)
    tel = telescope(spec, (2, 5, 7))
    assert tel.l1 == circuit_length(spec, 2) == 7
    assert circuit_length(tel, 2) == circuit_length(spec, 5) == 511
    assert circuit_length(tel, 3) == circuit_length(spec, 7) == 8191
    assert tel.family is not None
    assert tel.family.params["original_levels"] == [2, 5, 7]


def test_telescope_keeps_certified_classification():
    spec = gen_substitution_family(depth=6)
    tel = telescope(spec, (2, 5, 7))
    report = classify_ergodicity(tel)
    assert report.verdict == "TwoErgodic"
    assert report.certified


def test_telescope_rejects_bad_keep_lists():
    spec = gen_substitution_family(depth=4)
    with pytest.raises(UsageError):
        telescope(spec, ())
    with pytest.raises(UsageError):
        telescope(spec, (3, 1))
    with pytest.raises(UsageError):
        telescope(spec, (1, 99))


def test_random_specs_length_calculus_matches_composed_words(seed=0x51DE):
    rng = random.Random(seed)
    for _ in range(10):
        spec = random_restricted_spec(rng, max_depth=4, max_length=20_000)
        for m in range(2, spec.depth + 2):
            word = compose_word(spec, m, 1)
            expected = word.count("E") + word.count("C") * spec.l1
            assert circuit_length(spec, m) == expected


def test_json_round_trip_plain_and_family_specs():
    rng = random.Random(0xBEEF)
    specs = [random_plain_spec(rng, depth=4) for _ in range(5)]
    specs.append(gen_substitution_family(depth=5))
    specs.append(gen_weakmix_not_mix_family(depth=7))
    for spec in specs:
        text = spec_to_json(spec)
        back = spec_from_json(text)
        assert back == spec
        assert spec_to_json(back) == text


def test_weakmix_family_records_stage_numbers():
    spec = gen_weakmix_not_mix_family(depth=7)
    stages = spec.family.params["stages"]
    assert [st["m"] for st in stages] == [3, 6]
    assert stages[0]["len_d"] == "431" and stages[0]["s"] == "647"
    assert stages[1]["len_d"] == "216181" and stages[1]["s"] == "324272"
    lengths = [circuit_length(spec, i) for i in range(1, 9)]
    assert lengths == [3, 17, 87, 1729, 8647, 43237, 864729, 4323647]


def test_weakmix_family_extends_without_materializing_margins():
    from proxrank2 import extend_family

    spec = gen_weakmix_not_mix_family(depth=7)
    ext = extend_family(spec, 14)
    assert ext is not None and ext.depth == 14
    assert [st["m"] for st in ext.family.params["stages"]] == [3, 6, 9, 12]
    assert circuit_length(ext, 15) > 10**12


def test_mixing_family_lengths_are_odd_with_unit_margins():
    spec = gen_mixing_family(depth=8)
    lengths = [circuit_length(spec, i) for i in range(1, 9)]
    assert lengths[:4] == [11, 47, 191, 767]
    assert all(l % 2 == 1 for l in lengths)
    for lm in spec.levels:
        assert lm.a[0] == 1 and lm.a[-1] == 1


def test_uniquely_ergodic_family_margins_dominate():
    spec = gen_uniquely_ergodic_family(depth=5)
    for k, lm in enumerate(spec.levels, start=1):
        l_k = circuit_length(spec, k)
        s_bar = sum(lm.a)
        t_bar = lm.b
        assert s_bar >= t_bar * l_k


def test_generated_specs_json_keeps_family_metadata():
    spec = gen_weakmix_not_mix_family(depth=7)
    back = spec_from_json(spec_to_json(spec))
    assert back.family is not None
    assert back.family.tag == spec.family.tag
    assert back.family.params["stages"] == spec.family.params["stages"]
