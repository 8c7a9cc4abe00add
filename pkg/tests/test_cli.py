"""CLI: subcommands, module specs, JSON mode, exit codes."""

import json
import subprocess
import sys

from homlab.cli import main, parse_module
from homlab import parse_ring

XY = "p=32003; vars x,y; ci: x*y"
SQ = "p=32003; vars x,y; ci: x^2, y^2"


def run(args, capsys):
    code = main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_module_specs(tmp_path):
    ring = parse_ring(XY)
    assert parse_module("k", ring).name == "k"
    assert parse_module("ring", ring).twists == (0,)
    assert parse_module("free:0,2", ring).twists == (0, 2)
    cyc = parse_module("cyclic:x", ring)
    assert cyc.twists == (0,)
    rnd = parse_module("random:5", ring)
    assert rnd.twists == parse_module("random:5", ring).twists
    syz = parse_module("syzygy:1:k", ring)
    assert syz.twists == (1, 1)
    path = tmp_path / "m.json"
    path.write_text(json.dumps(cyc.to_json()))
    assert parse_module(f"@{path}", ring).twists == cyc.twists


def test_example_paper_exit_clean(capsys):
    code, out, _ = run(["example-paper"], capsys)
    assert code == 0
    assert "even-gap" in out


def test_betti_json(capsys):
    code, out, _ = run(
        ["--json", "betti", "--ring", SQ, "--module", "k", "--bound", "9"],
        capsys,
    )
    assert code == 0
    data = json.loads(out)
    assert data["totals"] == [n + 1 for n in range(10)]


def test_tor_text(capsys):
    code, out, _ = run(
        ["tor", "--ring", XY, "--module", "cyclic:x",
         "--against", "cyclic:y", "--range", "0:4"],
        capsys,
    )
    assert code == 0
    assert "Tor: * 0 * 0 *" in out


def test_check_verified_exit_zero(capsys):
    code, out, _ = run(
        ["check", "t31", "--ring", XY, "--module", "cyclic:x",
         "--against", "ring", "--n", "1", "--q", "1"],
        capsys,
    )
    assert code == 0
    assert "verified" in out


def test_even_gap_is_usage_error(capsys):
    code, _, err = run(
        ["check", "t31", "--ring", XY, "--module", "cyclic:x",
         "--against", "cyclic:y", "--n", "2", "--q", "2"],
        capsys,
    )
    assert code == 1
    assert "even" in err


def test_unknown_command_exit_one(capsys):
    code, _, _ = run(["frobnicate"], capsys)
    assert code == 1


def test_bad_ring_exit_one(capsys):
    code, _, err = run(["depth", "--ring", "gibberish", "--module", "k"],
                       capsys)
    assert code == 1


def test_resource_cap_exit_two(capsys):
    # an impossible complexity window forces the resource-cap path
    code, _, err = run(
        ["cx", "--ring", SQ, "--module", "k", "--bound", "3"], capsys
    )
    assert code == 2
    assert "resource" in err or "window" in err.lower() or err


def test_cx_json(capsys):
    code, out, _ = run(
        ["--json", "cx", "--ring", SQ, "--module", "k"], capsys
    )
    assert code == 0
    data = json.loads(out)
    assert data["value"] == 2 and data["confidence"] == "fitted"


def test_reduce_chain_cli(capsys):
    code, out, _ = run(
        ["reduce-chain", "--ring", XY, "--module", "cyclic:x"], capsys
    )
    assert code == 0
    assert "1 step" in out


def test_keta_cli(capsys):
    code, out, _ = run(
        ["keta", "--ring", SQ, "--module", "k", "--coeffs", "1,1"], capsys
    )
    assert code == 0
    assert "hilbert additive: True" in out


def test_corpus_cli_json(capsys):
    code, out, _ = run(
        ["--json", "corpus", "--count", "2", "--rings", XY], capsys
    )
    assert code == 0
    data = json.loads(out)
    assert data["ok"] and data["counterexamples"] == []


def test_console_script_installed():
    proc = subprocess.run(
        [sys.executable, "-m", "homlab.cli", "example-paper"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert "betti totals" in proc.stdout
