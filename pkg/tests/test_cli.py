"""Command-line surface: exit codes, output shapes, error payloads."""
from __future__ import annotations

import json

import pytest

from proxrank2 import cli, gen_substitution_family, spec_to_json


@pytest.fixture
def base_spec_file(tmp_path):
    path = tmp_path / "base.json"
    path.write_text(spec_to_json(gen_substitution_family(depth=6)))
    return str(path)


def run(capsys, argv):
    code = cli.main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_family_gen_then_validate(tmp_path, capsys):
    out_file = tmp_path / "mix.json"
    code, _, _ = run(capsys, ["family", "gen", "mixing", "--depth", "6", "-o", str(out_file)])
    assert code == 0
    code, out, _ = run(capsys, ["validate", "--spec", str(out_file)])
    assert code == 0
    assert "ok" in out


def test_length_command(base_spec_file, capsys):
    code, out, _ = run(capsys, ["length", "--spec", base_spec_file])
    assert code == 0
    assert "8191" in out
    code, out, _ = run(capsys, ["length", "3", "--spec", base_spec_file])
    assert code == 0
    assert out.strip().endswith("31")


def test_gaps_command_lists_realized_gaps(base_spec_file, capsys):
    code, out, _ = run(capsys, ["gaps", "3", "2", "1", "1", "--max-gap", "20", "--spec", base_spec_file])
    assert code == 0
    assert "7" in out and "8" in out and "15" in out


def test_ergodic_command_prints_label(base_spec_file, capsys):
    code, out, _ = run(capsys, ["ergodic", "--spec", base_spec_file])
    assert code == 0
    assert "TwoErgodic(certified)" in out


def test_ergodic_json_mode(base_spec_file, capsys):
    code, out, _ = run(capsys, ["ergodic", "--spec", base_spec_file, "--json"])
    assert code == 0
    payload = json.loads(out)
    assert payload["verdict"] == "TwoErgodic"


def test_array_accepts_equals_window_syntax(base_spec_file, capsys):
    code, out, _ = run(
        capsys,
        ["array", "--position", "2:2", "--window=-2:4", "--spec", base_spec_file],
    )
    assert code == 0
    assert "n=1" in out
    assert "|" in out


def test_array_window_out_of_range_exits_one(base_spec_file, capsys):
    code, _, err = run(
        capsys,
        ["array", "--position", "2:2", "--window=0:10", "--spec", base_spec_file,
         "--json-errors"],
    )
    assert code == 1
    payload = json.loads(err)
    assert payload["error"] == "WindowUndetermined"
    assert payload["first_time"] == 5


def test_expansion_cap_exits_three(base_spec_file, capsys):
    code, _, err = run(
        capsys,
        ["expand", "6", "1", "--what", "time", "--cap", "100", "--spec", base_spec_file,
         "--json-errors"],
    )
    assert code == 3
    payload = json.loads(err)
    assert payload["error"] == "ExpansionTooLarge"
    assert payload["needed"] == 2047
    assert payload["cap"] == 100


def test_usage_error_exits_two(base_spec_file, capsys):
    code, _, _ = run(capsys, ["length", "99", "--spec", base_spec_file])
    assert code == 2


def test_argparse_error_exits_two(capsys):
    assert cli.main(["no-such-command"]) == 2
    capsys.readouterr()


def test_telescope_reads_stdin(base_spec_file, capsys, monkeypatch, tmp_path):
    import io

    text = spec_to_json(gen_substitution_family(depth=6))
    monkeypatch.setattr("sys.stdin", io.StringIO(text))
    out_file = tmp_path / "tel.json"
    code, _, _ = run(capsys, ["telescope", "--spec", "-", "--keep", "1,3", "-o", str(out_file)])
    assert code == 0
    code, out, _ = run(capsys, ["length", "--spec", str(out_file)])
    assert code == 0
    assert "31" in out


def test_subst_commands(capsys):
    code, out, _ = run(capsys, ["subst", "apply", "tau", "0"])
    assert code == 0 and out.strip() == "001"
    code, out, _ = run(capsys, ["subst", "equal", "alpha", "0", "beta", "0", "7"])
    assert code == 0
    code, out, _ = run(capsys, ["subst", "bridge", "7"])
    assert code == 0
    assert "22" in out


def test_mixcheck_command(capsys, tmp_path):
    mix_file = tmp_path / "mix.json"
    run(capsys, ["family", "gen", "mixing", "--depth", "20", "-o", str(mix_file)])
    code, out, _ = run(capsys, ["mixcheck", "21", "1", "--spec", str(mix_file)])
    assert code == 0
    assert "ok" in out.lower()


def test_bratteli_roundtrip_command(base_spec_file, capsys):
    code, out, _ = run(capsys, ["bratteli", "roundtrip", "--rows", "4", "--spec", base_spec_file])
    assert code == 0


def test_bratteli_vershik_command(base_spec_file, capsys):
    code, out, _ = run(
        capsys,
        ["bratteli", "vershik", "--rows", "4", "--position", "27", "--steps", "3",
         "--spec", base_spec_file],
    )
    assert code == 0
    assert "30" in out


def test_language_command_exit_reflects_stabilization(base_spec_file, capsys, tmp_path):
    code, out, _ = run(capsys, ["language", "1", "3", "--words", "--spec", base_spec_file])
    assert code == 0
    assert "CCE" in out
    hand = tmp_path / "hand.json"
    hand.write_text(json.dumps({"l1": 2, "levels": [{"a": [1, 1, 1], "b": 2}]}))
    code, _, _ = run(capsys, ["language", "1", "4", "--spec", str(hand)])
    assert code == 1
