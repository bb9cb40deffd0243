from __future__ import annotations

import json
import subprocess
import sys

import pytest

from ggraph.cli import (
    EXIT_FAIL,
    EXIT_OK,
    EXIT_USAGE,
    default_manifest,
    format_results,
    load_manifest,
    main,
    run_manifest,
)


def _run(capsys, *argv) -> tuple[int, str]:
    rc = main(list(argv))
    return rc, capsys.readouterr().out


def test_analyze_json(capsys):
    rc, out = _run(capsys, "analyze", "--group", "m11", "--p", "3", "--class", "3A")
    assert rc == EXIT_OK
    (d,) = json.loads(out)
    assert d["lambda_size"] == 8
    assert d["delta"]["order"] == 9 and d["delta"]["invariants"] == [3, 3]
    assert d["stabilizer_order"] == 144 and d["connected"] == "no"


def test_analyze_tsv_all_classes_with_oracle(capsys):
    rc, out = _run(capsys, "analyze", "--group", "alt:6", "--p", "3", "--all-classes", "--format", "tsv", "--oracle")
    assert rc == EXIT_OK
    lines = out.strip().splitlines()
    assert lines[0].split("\t")[:3] == ["group", "class", "rational"]
    assert len(lines) == 3


def test_analyze_oracle_json(capsys):
    rc, out = _run(capsys, "analyze", "--group", "psl2:7", "--p", "2", "--all-classes", "--oracle", "--rational")
    assert rc == EXIT_OK
    assert all(d["oracle"]["agrees"] for d in json.loads(out))


def test_analyze_unknown_class(capsys):
    rc = main(["analyze", "--group", "m11", "--p", "3", "--class", "9Z"])
    assert rc == EXIT_USAGE
    assert "no class" in capsys.readouterr().err


def test_missing_group_file(capsys):
    assert main(["analyze", "--group", "nosuchgroup", "--p", "3"]) == EXIT_FAIL


def test_spe(capsys):
    assert _run(capsys, "spe", "--group", "alt:5", "--p", "2") == (EXIT_OK, "true\n")
    assert _run(capsys, "spe", "--group", "alt:7", "--p", "3") == (EXIT_OK, "false\n")


def test_coeff(capsys):
    assert _run(capsys, "coeff", "--table", "sym3", "--classes", "2a,2a,1a") == (EXIT_OK, "3\n")
    assert _run(capsys, "coeff", "--table", "2m12", "--classes", "2b,2b,2b") == (EXIT_OK, "24\n")
    assert _run(capsys, "coeff", "--table", "2j2", "--edge", "2c") == (EXIT_OK, "false\n")
    assert main(["coeff", "--table", "sym3", "--classes", "2a,2a"]) == EXIT_USAGE


def test_bad_arguments():
    with pytest.raises(SystemExit) as exc:
        main(["analyze", "--p", "3"])
    assert exc.value.code == 2


def test_shipped_manifest_is_well_formed():
    entries = load_manifest(default_manifest())
    ids = [e["id"] for e in entries]
    assert len(ids) == len(set(ids))
    assert {e["tier"] for e in entries} == {"mandatory", "extended"}
    assert all(e["cite"] for e in entries)


def test_manifest_self_test(tmp_path):
    m = {
        "entries": [
            {"id": "ok", "tier": "mandatory", "kind": "coeff", "table": "sym3", "classes": ["2a", "2a", "1a"],
             "expect": {"coeff": 3}, "cite": "derived: hand count"},
            {"id": "wrong", "tier": "mandatory", "kind": "coeff", "table": "sym3", "classes": ["2a", "2a", "1a"],
             "expect": {"coeff": 4}, "cite": "planted failure"},
            {"id": "absent", "tier": "mandatory", "kind": "edge", "table": "no_such_table", "class": "2A",
             "expect": {"edge": False}, "cite": "missing data"},
            {"id": "ext", "tier": "extended", "kind": "spe", "group": "alt:5", "p": 2,
             "expect": {"spe": True}, "cite": "derived"},
            {"id": "broken", "tier": "mandatory", "kind": "coeff", "table": "sym3", "classes": ["2a", "2a", "9z"],
             "expect": {"coeff": 0}, "cite": "bad label"},
        ]
    }
    path = tmp_path / "m.json"
    path.write_text(json.dumps(m))
    res = {r.id: r for r in run_manifest(path)}
    assert res["ok"].status == "pass"
    assert res["wrong"].status == "fail" and "expected 4" in res["wrong"].message
    assert res["absent"].status == "skipped"
    assert res["broken"].status == "error"
    assert "ext" not in res
    both = run_manifest(path, tier="extended", jobs=2)
    assert [r.id for r in both] == ["ok", "wrong", "absent", "ext", "broken"]
    text = format_results(both)
    assert "pass=2 fail=1 error=1 skipped=1" in text
    assert "[planted failure]" in text


def test_manifest_rejects_missing_fields(tmp_path):
    path = tmp_path / "m.json"
    path.write_text(json.dumps([{"id": "x", "kind": "coeff", "tier": "mandatory", "expect": {}}]))
    with pytest.raises(ValueError):
        load_manifest(path)


def test_console_entry_point():
    out = subprocess.run(
        [sys.executable, "-m", "ggraph.cli", "coeff", "--table", "a5", "--classes", "2A,2A,3A"],
        capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "3"
