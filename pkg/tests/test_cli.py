"""End-to-end runs of the command-line front end via main(), plus one
subprocess check of the installed entry point."""

import json
import subprocess
import sys

import pytest

from mge.cli import main
from mge.verify import Certificate, Claim


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_construct_dense(capsys):
    code, out, _ = run(capsys, "construct", "D(4) x C(3)")
    assert code == 0
    assert "order 24" in out
    assert "abelian False" in out


def test_construct_twisted(capsys):
    code, out, _ = run(capsys, "construct", "named(BIG12_SOL)")
    assert code == 0
    assert "order 665280" in out
    assert "twist rank" in out


def test_construct_parse_error(capsys):
    code, _, err = run(capsys, "construct", "F(3)")
    assert code == 2
    assert "error" in err.lower() or err


def test_iso_exit_codes(capsys):
    code, out, _ = run(capsys, "iso", "C(6)", "C(2) x C(3)")
    assert code == 0 and "isomorphic" in out
    code, out, _ = run(capsys, "iso", "D(4)", "Q(2)")
    assert code == 1 and "not isomorphic" in out


def test_embed_exit_codes(capsys):
    code, out, _ = run(capsys, "embed", "C(4)", "D(4)")
    assert code == 0 and "embeds via" in out
    code, out, _ = run(capsys, "embed", "Q(2)", "S(4)")
    assert code == 1 and out.strip() == "no embedding"


def test_embed_twisted_is_inconclusive(capsys):
    code, out, _ = run(
        capsys, "embed", "C(4)", "named(C5xC7xC9xD3xH1)", "--support", "C(5)"
    )
    assert code == 1
    assert "inconclusive" in out


def test_enumerate_and_out_file(capsys, tmp_path):
    code, out, _ = run(capsys, "enumerate", "8")
    assert code == 0
    assert out.startswith("5 groups of order 8")

    path = tmp_path / "cat.json"
    code, out, _ = run(capsys, "enumerate", "8", "--out", str(path))
    assert code == 0
    doc = json.loads(path.read_text())
    assert doc["order"] == 8 and len(doc["entries"]) == 5


def test_enumerate_tier_error(capsys):
    code, _, err = run(capsys, "enumerate", "81", "--tier", "2")
    assert code == 2
    assert "tier" in err.lower()


def test_minimal_search(capsys, tmp_path):
    path = tmp_path / "outcome.json"
    code, out, _ = run(capsys, "minimal", "--order", "4", "--max", "16",
                       "--json", str(path))
    assert code == 0
    assert "minimal order 8" in out
    doc = json.loads(path.read_text())
    assert doc["found_order"] == 8 and len(doc["groups"]) == 2


def test_minimal_requires_exactly_one_mode(capsys):
    code, _, err = run(capsys, "minimal", "--max", "16")
    assert code == 2
    code, _, err = run(capsys, "minimal", "--order", "4", "--upto", "4", "--max", "16")
    assert code == 2


def test_minimal_negative_result(capsys):
    code, out, _ = run(capsys, "minimal", "--order", "8", "--max", "16")
    assert code == 1
    assert out.startswith("exhausted(16)")


def test_bounds(capsys):
    code, out, _ = run(capsys, "bounds", "--pbound", "2", "3")
    assert code == 0 and out.strip() == "32"
    code, out, _ = run(capsys, "bounds", "--nbound", "12")
    assert code == 0 and out.strip() == "332640"
    code, out, _ = run(capsys, "bounds", "--collection", "8")
    assert code == 0 and out.strip() == "32"
    code, _, _ = run(capsys, "bounds")
    assert code == 2


def test_verify_certificate_file(capsys, tmp_path):
    cert = Certificate("S(4)", "ambient for spot checks",
                       [Claim("C(4)", ("(1234)",))])
    path = tmp_path / "cert.json"
    path.write_text(cert.dumps())
    report_path = tmp_path / "report.json"
    code, out, _ = run(capsys, "verify", str(path), "--json", str(report_path))
    assert code == 0
    assert "[PASS]" in out
    doc = json.loads(report_path.read_text())
    assert doc["passed"] is True

    bad = Certificate("S(4)", "", [Claim("C(8)", ("(1234)",))])
    path.write_text(bad.dumps())
    code, out, _ = run(capsys, "verify", str(path))
    assert code == 1
    assert "[FAIL]" in out


def test_verify_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "verify", str(tmp_path / "absent.json"))
    assert code == 2


def test_reproduce_scenario(capsys, tmp_path):
    path = tmp_path / "rep.json"
    code, out, _ = run(capsys, "reproduce", "table1", "--json", str(path))
    assert code == 0
    assert "table1: PASS" in out
    doc = json.loads(path.read_text())
    assert doc["scenario"] == "table1" and doc["passed"] is True


def test_reproduce_rejects_unknown(capsys):
    # argparse choices guard the scenario name; usage errors come back as 2
    code, _, err = run(capsys, "reproduce", "nope")
    assert code == 2
    assert "invalid choice" in err


def test_version_flag(capsys):
    code, out, _ = run(capsys, "--version")
    assert code == 0
    assert out.startswith("mge ")


def test_installed_entry_point():
    proc = subprocess.run(
        [sys.executable, "-c",
         "import sys; from mge.cli import main; sys.exit(main(['bounds', '--nbound', '15']))"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout.strip() == "4324320"
