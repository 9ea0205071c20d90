import json

import pytest
from hypothesis import given, strategies as st

from liouville_lab.cli import parse_and_dispatch
from liouville_lab.golden import GoldenMismatch, ParamsMismatch, golden_dir, golden_record, normalize, params_hash


def test_first_write_then_match(tmp_path):
    assert golden_record("x", {"a": 1.5}, {"p": 1}, tmp_path) == "written"
    snap = json.loads((tmp_path / "x.json").read_text())
    assert set(snap) == {"name", "params", "params_hash", "payload", "tolerances"}
    assert golden_record("x", {"a": 1.5}, {"p": 1}, tmp_path) == "match"


def test_params_change_refused(tmp_path):
    golden_record("x", {"a": 1}, {"h": 1}, tmp_path)
    with pytest.raises(ParamsMismatch):
        golden_record("x", {"a": 1}, {"h": 2}, tmp_path)


def test_mismatch_reports_diff(tmp_path):
    golden_record("x", {"a": [1, 2]}, {}, tmp_path)
    with pytest.raises(GoldenMismatch) as e:
        golden_record("x", {"a": [1, 3]}, {}, tmp_path)
    assert "a[1]" in str(e.value)


def test_declared_tolerance(tmp_path):
    golden_record("x", {"v": 1.0}, {}, tmp_path, tolerances={"v": 1e-3})
    assert golden_record("x", {"v": 1.0005}, {}, tmp_path) == "match"
    with pytest.raises(GoldenMismatch):
        golden_record("x", {"v": 1.01}, {}, tmp_path)


@given(x=st.floats(allow_nan=False, allow_infinity=False))
def test_normalize_is_idempotent_at_12_digits(x):
    y = normalize(x)
    assert normalize(y) == y
    assert y == float(f"{x:.12g}")


def test_params_hash_ignores_key_order():
    assert params_hash({"a": 1, "b": 2}) == params_hash({"b": 2, "a": 1})


def test_env_overrides_flag(tmp_path, monkeypatch):
    monkeypatch.setenv("LIOUVILLE_LAB_GOLDEN", str(tmp_path / "env"))
    assert golden_dir(tmp_path / "flag") == tmp_path / "env"
    monkeypatch.delenv("LIOUVILLE_LAB_GOLDEN")
    assert golden_dir(tmp_path / "flag") == tmp_path / "flag"


def test_cli_golden_flow(tmp_path, capsys, monkeypatch):
    monkeypatch.delenv("LIOUVILLE_LAB_GOLDEN", raising=False)
    argv = ["patterns", "--n", "100000", "--k", "2", "--golden-dir", str(tmp_path)]
    assert parse_and_dispatch(argv) == 0
    first = capsys.readouterr().out
    assert (tmp_path / "patterns.json").exists()
    assert parse_and_dispatch(argv + ["--threads", "4"]) == 0
    assert capsys.readouterr().out == first
    assert parse_and_dispatch(["patterns", "--n", "100000", "--k", "3", "--golden-dir", str(tmp_path)]) == 1
    assert "parameter hash" in capsys.readouterr().err


def test_cli_golden_detects_tampering(tmp_path, capsys, monkeypatch):
    monkeypatch.delenv("LIOUVILLE_LAB_GOLDEN", raising=False)
    argv = ["correlate", "--n", "1000", "--shifts", "0,1", "--golden-dir", str(tmp_path)]
    parse_and_dispatch(argv)
    snap = json.loads((tmp_path / "correlate.json").read_text())
    snap["payload"]["sum"] += 2
    (tmp_path / "correlate.json").write_text(json.dumps(snap))
    capsys.readouterr()
    assert parse_and_dispatch(argv) == 1
    assert "sum" in capsys.readouterr().err
