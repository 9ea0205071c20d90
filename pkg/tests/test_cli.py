import json

import pytest

from liouville_lab.cli import RunConfig, build_parser, parse_and_dispatch


def run(argv, capsys):
    code = parse_and_dispatch(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_correlate_json(capsys):
    code, out, _ = run(["correlate", "--n", "8", "--shifts", "0,1"], capsys)
    data = json.loads(out)
    assert code == 0 and data["sum"] == -4 and data["normalized"] == -0.5


def test_correlate_duplicate_shifts(capsys):
    code, _, err = run(["correlate", "--shifts", "0,0", "--n", "10"], capsys)
    assert code == 2 and "distinct" in err


def test_variance_csv_header(capsys):
    code, out, _ = run(["variance", "--x", "1000000", "--h", "100"], capsys)
    assert code == 0
    assert out.splitlines()[0] == "x_start,h,count,mean_sq,normalized_variance,max_abs"


def test_variance_csv_file_and_json(tmp_path, capsys):
    target = tmp_path / "v.csv"
    code, out, _ = run(["variance", "--x", "10000", "--h", "10", "--thresholds", "0.2", "--csv", str(target), "--format", "json"], capsys)
    assert code == 0
    assert target.read_text().splitlines()[0].endswith("max_abs,exc_0.2")
    assert json.loads(out)["exc_0.2"] >= 0


@pytest.mark.parametrize(
    "argv",
    [["nope"], ["correlate", "--n", "x", "--shifts", "0"], ["variance", "--x", "100"], ["variance", "--x", "100", "--h", "100"]],
)
def test_usage_errors_exit_2(argv, capsys):
    assert run(argv, capsys)[0] == 2


def test_unwritable_output_exits_1(tmp_path, capsys):
    code, _, err = run(["sieve", "--lo", "1", "--hi", "10", "--output", str(tmp_path / "missing" / "o.json")], capsys)
    assert code == 1 and "runtime error" in err


def test_output_file_and_format(tmp_path, capsys):
    target = tmp_path / "o.csv"
    assert run(["patterns", "--n", "1000", "--k", "1", "--format", "csv", "--output", str(target)], capsys)[0] == 0
    assert target.read_text().startswith("N,k,")


def test_floats_at_twelve_digits(capsys):
    _, out, _ = run(["log-chowla", "--x", "8"], capsys)
    assert '"value": -0.688715132615' in out


@pytest.mark.parametrize(
    "argv",
    [
        ["sieve", "--lo", "1", "--hi", "1000"],
        ["avg-chowla", "--x", "1000", "--h", "3", "--k", "2"],
        ["discrepancy", "--n", "1000"],
        ["plancherel", "--liouville-range", "100,200", "--t", "5"],
        ["plancherel", "--random", "50", "--trials", "2", "--t", "1"],
        ["meanvalue", "--n", "32", "--t", "32", "--trials", "2"],
        ["large-values", "--p", "100", "--t", "100", "--v", "3"],
        ["hm-ratio", "--n", "64", "--t", "100", "--points", "5", "--trials", "2"],
        ["decompose", "--layers", "2:10", "--x", "1000", "--verify", "--turan", "--restricted"],
        ["twisted", "--kind", "liouville", "--x", "1000", "--t", "0,1"],
        ["wirsing", "--f", "mu2", "--n", "10000"],
        ["signchanges", "--f", "mu", "--n", "1000"],
        ["smooth", "--n", "1000", "--eps", "0.5", "--c", "1"],
        ["smooth", "--n", "10000", "--eps", "0.5", "--c", "5", "--samples", "20"],
        ["shortlong", "--f", "lambda", "--x", "10000", "--h", "100"],
    ],
)
def test_every_subcommand_runs(argv, capsys):
    code, out, err = run(argv, capsys)
    assert code == 0, err
    json.loads(out)


def test_dirichlet_checks_emit_common_fields(capsys):
    _, out, _ = run(["plancherel", "--liouville-range", "10,20", "--t", "2", "--seed", "7"], capsys)
    data = json.loads(out)
    assert {"lhs", "rhs", "rel_err", "params", "seed"} <= set(data) and data["seed"] == 7


def test_spec_file_flag(tmp_path, capsys):
    spec = tmp_path / "f.json"
    spec.write_text('{"kind": "completely_multiplicative", "default": -1}')
    _, a, _ = run(["wirsing", "--f", str(spec), "--n", "1000"], capsys)
    _, b, _ = run(["wirsing", "--f", "lambda", "--n", "1000"], capsys)
    assert json.loads(a)["empirical_mean"] == json.loads(b)["empirical_mean"]


def test_discrepancy_rejects_vanishing_function(capsys):
    assert run(["discrepancy", "--n", "100", "--f", "mu"], capsys)[0] == 2


def test_run_config_excludes_threads_from_hash():
    p = build_parser()
    a = RunConfig.from_args(p.parse_args(["patterns", "--n", "100", "--k", "2", "--threads", "1"]))
    b = RunConfig.from_args(p.parse_args(["patterns", "--n", "100", "--k", "2", "--threads", "auto"]))
    assert a.golden_params == b.golden_params


def test_seed_determines_trials(capsys):
    argv = ["hm-ratio", "--n", "64", "--t", "100", "--points", "5", "--trials", "3"]
    a = run(argv + ["--seed", "1"], capsys)[1]
    b = run(argv + ["--seed", "1"], capsys)[1]
    c = run(argv + ["--seed", "2"], capsys)[1]
    assert a == b != c
