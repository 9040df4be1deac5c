import json
import shutil
import subprocess

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from hsgibbs import DataError, GlmData, NumericalError, RegressionData, cli
from hsgibbs.io import CsvParseError, git_blob_hash, load_csv, read_draws, write_draws


def _write(tmp_path, text, name="data.csv"):
    p = tmp_path / name
    p.write_text(text)
    return p


def _linear_csv(tmp_path, n=30, p=3, seed=0):
    r = np.random.default_rng(seed)
    X = r.standard_normal((n, p))
    y = X @ np.arange(1.0, p + 1) + r.standard_normal(n)
    lines = [",".join([f"x{j}" for j in range(p)] + ["y"])]
    lines += [",".join(f"{v:.6f}" for v in row) for row in np.column_stack([X, y])]
    return _write(tmp_path, "\n".join(lines) + "\n")


# -- CSV ingestion ----------------------------------------------------------------


def test_small_csv_standardised(tmp_path):
    d = load_csv(_write(tmp_path, "x,y\n1,2\n2,4\n3,6"))
    assert isinstance(d, RegressionData)
    assert (d.n, d.p) == (3, 1)
    assert d.names == ["x"]
    assert d.X[:, 0].mean() == pytest.approx(0, abs=1e-15)
    assert np.sum(d.X[:, 0] ** 2) == pytest.approx(1.0)
    assert d.y.mean() == pytest.approx(0, abs=1e-15)


def test_glm_csv_gets_intercept(tmp_path):
    d = load_csv(_write(tmp_path, "a,b,y\n1,5,0\n2,3,1\n4,1,1\n"), "logistic")
    assert isinstance(d, GlmData)
    assert d.names == ["intercept", "a", "b"]
    assert np.array_equal(d.X[:, 0], np.ones(3))
    assert np.array_equal(d.X[:, 1], [1, 2, 4])


@pytest.mark.parametrize(
    "text,match,row,column",
    [
        ("x,y\n", "no data rows", None, None),
        ("", "empty file", None, None),
        ("x,y\n1,2\n3\n", "ragged", 3, None),
        ("x,y\n1,2\nabc,4\n", "non-numeric", 3, "x"),
        ("x,y\n1,2\n2,\n", "missing value", 3, "y"),
        ("x,y\n1,nan\n", "non-finite", 2, "y"),
    ],
)
def test_csv_errors_carry_location(tmp_path, text, match, row, column):
    with pytest.raises(CsvParseError, match=match) as info:
        load_csv(_write(tmp_path, text))
    assert info.value.row == row
    assert info.value.column == column


def test_missing_file_is_data_error(tmp_path):
    with pytest.raises(DataError):
        load_csv(tmp_path / "nope.csv")


def test_git_blob_hash_matches_git(tmp_path):
    p = _write(tmp_path, "x,y\n1,2\n")
    if shutil.which("git") is None:
        pytest.skip("git not installed")
    ref = subprocess.run(["git", "hash-object", str(p)], capture_output=True, text=True, check=True).stdout.strip()
    assert git_blob_hash(p) == ref


# -- draws persistence ----------------------------------------------------------------


@settings(max_examples=40, deadline=None)
@given(
    m=arrays(np.float64, st.tuples(st.integers(1, 20), st.integers(1, 5)), elements=st.floats(allow_nan=False, allow_infinity=False)),
    fmt=st.sampled_from(["csv", "binary"]),
)
def test_draws_round_trip_bit_identical(tmp_path_factory, m, fmt):
    path = tmp_path_factory.mktemp("rt") / f"d.{fmt}"
    names = [f"c{j}" for j in range(m.shape[1])]
    write_draws(path, m, names, fmt)
    got_names, got = read_draws(path)
    assert got_names == names
    assert got.tobytes() == np.ascontiguousarray(m).tobytes()


def test_binary_header_layout(tmp_path):
    path = tmp_path / "d.bin"
    write_draws(path, np.arange(6.0).reshape(3, 2), ["a", "b"], "binary")
    raw = path.read_bytes()
    assert raw[:8] == b"HSDRAWS1"
    assert int.from_bytes(raw[8:12], "little") == 3
    assert int.from_bytes(raw[12:16], "little") == 2


def test_truncated_binary_rejected(tmp_path):
    path = tmp_path / "d.bin"
    write_draws(path, np.ones((4, 2)), ["a", "b"], "binary")
    path.write_bytes(path.read_bytes()[:-8])
    with pytest.raises(DataError):
        read_draws(path)


# -- CLI ------------------------------------------------------------------------------


def _run(argv, capsys=None):
    code = cli.main([str(a) for a in argv])
    err = capsys.readouterr().err if capsys is not None else ""
    return code, err


def test_cli_run_writes_three_files_and_is_deterministic(tmp_path):
    data = _linear_csv(tmp_path)
    args = ["run", "--input", data, "--burn", 50, "--keep", 120, "--seed", 3]
    assert _run(args + ["--out", tmp_path / "a"])[0] == 0
    assert _run(args + ["--out", tmp_path / "b"])[0] == 0
    for name in ("draws.csv", "diagnostics.json", "metadata.json"):
        assert (tmp_path / "a" / name).exists()
    names, draws = read_draws(tmp_path / "a" / "draws.csv")
    assert draws.shape == (120, 3)
    assert names == ["x0", "x1", "x2"]
    assert (tmp_path / "a" / "draws.csv").read_bytes() == (tmp_path / "b" / "draws.csv").read_bytes()
    meta = json.loads((tmp_path / "a" / "metadata.json").read_text())
    assert meta["input_git_blob_sha1"] == git_blob_hash(data)
    assert meta["config"]["seed"] == 3
    diag = json.loads((tmp_path / "a" / "diagnostics.json").read_text())
    assert [c["name"] for c in diag["coefficients"]] == names


def test_cli_binary_and_destandardize(tmp_path):
    data = _linear_csv(tmp_path)
    out = tmp_path / "o"
    code, _ = _run(["run", "--input", data, "--burn", 20, "--keep", 40, "--format", "binary", "--destandardize", "--out", out])
    assert code == 0
    names, draws = read_draws(out / "draws.bin")
    assert names[0] == "intercept"
    assert draws.shape == (40, 4)


def test_cli_glm_families(tmp_path):
    r = np.random.default_rng(1)
    x = r.standard_normal(30)
    counts = r.poisson(np.exp(0.5 + 0.5 * x))
    rows = "\n".join(f"{a:.5f},{b}" for a, b in zip(x, counts))
    nb = _write(tmp_path, "x,y\n" + rows + "\n", "nb.csv")
    assert _run(["run", "--input", nb, "--family", "negbin", "--h", 2, "--burn", 20, "--keep", 30, "--out", tmp_path / "nb"])[0] == 0
    bins = _write(tmp_path, "x,y\n" + "\n".join(f"{a:.5f},{int(b > 1)}" for a, b in zip(x, counts)) + "\n", "lg.csv")
    assert _run(["run", "--input", bins, "--family", "logistic", "--burn", 20, "--keep", 30, "--out", tmp_path / "lg"])[0] == 0
    names, draws = read_draws(tmp_path / "lg" / "draws.csv")
    assert names == ["intercept", "x"]


def test_cli_invalid_family_is_usage_error(tmp_path, capsys):
    code, err = _run(["run", "--input", _linear_csv(tmp_path), "--family", "poisson", "--out", tmp_path / "o"], capsys)
    assert code == 2
    assert json.loads(err)["error"] == "usage"


def test_cli_negbin_requires_h(tmp_path, capsys):
    code, _ = _run(["run", "--input", _linear_csv(tmp_path), "--family", "negbin", "--out", tmp_path / "o"], capsys)
    assert code == 2


def test_cli_data_error_exit_code(tmp_path, capsys):
    bad = _write(tmp_path, "x,y\n1,2\n3,oops\n")
    code, err = _run(["run", "--input", bad, "--out", tmp_path / "o"], capsys)
    assert code == 3
    payload = json.loads(err)
    assert payload["exit_code"] == 3
    assert "row 3" in payload["message"]


def test_cli_numerical_error_exit_code(tmp_path, capsys, monkeypatch):
    def boom(*a, **k):
        raise NumericalError("Cholesky failed at every jitter level")

    monkeypatch.setattr(cli, "run_chain", boom)
    code, err = _run(["run", "--input", _linear_csv(tmp_path), "--out", tmp_path / "o"], capsys)
    assert code == 4
    assert json.loads(err)["error"] == "numerical"


def test_cli_missing_subcommand_is_usage_error(capsys):
    assert _run([], capsys)[0] == 2


def test_cli_config_precedence(tmp_path):
    data = _linear_csv(tmp_path)
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"keep": 70, "burn": 10, "seed": 9}))
    assert _run(["run", "--input", data, "--config", cfg, "--out", tmp_path / "c"])[0] == 0
    assert read_draws(tmp_path / "c" / "draws.csv")[1].shape[0] == 70
    assert _run(["run", "--input", data, "--config", cfg, "--keep", 30, "--out", tmp_path / "f"])[0] == 0
    assert read_draws(tmp_path / "f" / "draws.csv")[1].shape[0] == 30
    meta = json.loads((tmp_path / "f" / "metadata.json").read_text())
    assert meta["config"]["seed"] == 9
    cfg.write_text(json.dumps({"kepe": 3}))
    assert _run(["run", "--input", data, "--config", cfg, "--out", tmp_path / "g"])[0] == 2


def test_cli_ess_table(tmp_path):
    draws = np.random.default_rng(2).standard_normal((1600, 2))
    write_draws(tmp_path / "d.csv", draws, ["a", "b"])
    out = tmp_path / "ess.csv"
    assert _run(["ess", "--draws", tmp_path / "d.csv", "--thin", "1,2,4,8,16", "--out", out])[0] == 0
    rows = out.read_text().strip().splitlines()
    assert rows[0] == "coefficient,thin,n_draws,ess,ess_proportion"
    assert len(rows) == 1 + 2 * 5
    props = np.array([float(r.split(",")[4]) for r in rows[1:]])
    assert np.all(np.abs(props - 1) < 0.4)


def test_cli_ess_bad_thin_list(tmp_path, capsys):
    write_draws(tmp_path / "d.csv", np.ones((5, 1)), ["a"])
    assert _run(["ess", "--draws", tmp_path / "d.csv", "--thin", "1,x", "--out", tmp_path / "e.csv"], capsys)[0] == 2


def test_cli_evidence(tmp_path):
    out = tmp_path / "ev.json"
    code, _ = _run(["evidence", "--input", _linear_csv(tmp_path, n=20, p=2), "--burn", 100, "--keep", 400, "--out", out])
    assert code == 0
    res = json.loads(out.read_text())
    assert np.isfinite(res["log_marginal"])
    assert sum(res["ordinate_breakdown"].values()) == pytest.approx(res["log_marginal"], abs=1e-9)


def test_cli_evidence_rejects_glm(tmp_path, capsys):
    code, _ = _run(["evidence", "--input", _linear_csv(tmp_path), "--family", "logistic", "--out", tmp_path / "e.json"], capsys)
    assert code == 2


def test_cli_bench_small_grid(tmp_path):
    out = tmp_path / "t.csv"
    assert _run(["bench", "--n", "10,20", "--p", "5,10", "--iterations", 20, "--reps", 1, "--out", out])[0] == 0
    rows = out.read_text().strip().splitlines()
    assert rows[0] == "n,p=5,p=10"
    assert len(rows) == 3


def test_console_script_entry_point(tmp_path):
    exe = shutil.which("hs")
    if exe is None:
        pytest.skip("package not installed with console scripts")
    res = subprocess.run([exe, "--version"], capture_output=True, text=True)
    assert res.returncode == 0
    assert "hs" in res.stdout
