import io
import json

import pytest

from rabigvm.cli import main


def run(*argv):
    buf = io.StringIO()
    code = main(list(argv), out=buf)
    return code, buf.getvalue()


def test_ground_all_methods_on_exact_line():
    code, text = run("ground", "--Omega", "0", "--g", "0.5", "--method", "all", "--format", "json")
    assert code == 0
    report = json.loads(text)
    for m in ("exact", "gvm", "gvm-closed", "grwa"):
        assert report[m]["energy"] == pytest.approx(0.25, abs=1e-8)


def test_ground_closed_form_text():
    code, text = run("ground", "--Omega", "1", "--g", "0.2", "--method", "gvm-closed")
    assert code == 0
    assert "E0 = -0.02009933665 omega" in text


def test_ground_uncoupled_default_method():
    code, text = run("ground", "--g", "0", "--Omega", "1.5", "--method", "exact", "--format", "json")
    assert code == 0
    assert json.loads(text)["exact"]["energy"] == pytest.approx(-0.25, abs=1e-12)


def test_ground_reports_series_metadata():
    code, text = run("ground", "--Omega", "1", "--g", "0.6", "--method", "gvm")
    assert code == 0
    for key in ("lambda", "F_lambda", "E0_unperturbed", "E0_second", "series_terms_used"):
        assert key in text


def test_ground_absolute_units():
    _, a = run("ground", "--Omega", "1", "--g", "0.3", "--format", "json", "--method", "exact")
    _, b = run("ground", "--omega", "2", "--Omega", "2", "--g", "0.6", "--absolute", "--format", "json", "--method", "exact")
    assert json.loads(b)["exact"]["energy"] == pytest.approx(2 * json.loads(a)["exact"]["energy"], abs=1e-10)


def test_invalid_input_exit_code(capsys):
    assert run("ground", "--g", "-1")[0] == 1
    assert "symmetric" in capsys.readouterr().err
    assert run("ground", "--method", "bogus")[0] == 1
    assert run("figure", "--id", "7")[0] == 1
    assert run("sweep", "--axis", "g", "--stop", "5", "--fixed", "1")[0] == 1


def test_non_convergence_exit_code():
    code, _ = run("ground", "--Omega", "0.5", "--g", "1.0", "--nmax", "4", "--method", "exact")
    assert code == 2


def test_sweep_csv_is_reproducible(tmp_path):
    args = ("sweep", "--axis", "g", "--stop", "0.8", "--count", "5", "--fixed", "1.5", "--format", "csv")
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run(*args, "--out", str(a))[0] == 0
    assert run(*args, "--out", str(b), "--workers", "2")[0] == 0
    assert a.read_bytes() == b.read_bytes()
    assert len(a.read_text().splitlines()) == 6


def test_figure_writes_named_file(tmp_path):
    code, text = run("figure", "--id", "1a", "--out", str(tmp_path))
    assert code == 0
    path = tmp_path / "figure_1a.csv"
    assert len(path.read_text().splitlines()) == 42
    assert "max |err_gvm|" in text and "max |err_grwa|" in text


def test_figure_json(tmp_path):
    code, _ = run("figure", "--id", "4", "--format", "json", "--out", str(tmp_path))
    assert code == 0
    rows = json.loads((tmp_path / "figure_4.json").read_text())
    assert len(rows) == 41
    col = [r["GVM_closed"] for r in rows]
    assert all(b <= a for a, b in zip(col, col[1:]))


def test_check_restricted_point():
    code, text = run("check", "--g", "0")
    assert code == 0
    assert "decouples at the root" in text


@pytest.mark.slow
def test_check_default_passes():
    code, text = run("check")
    assert code == 0
    assert "FAIL" not in text


def test_check_under_truncated_fails_convergence():
    code, text = run("check", "--nmax", "8")
    assert code == 1
    line = next(l for l in text.splitlines() if "converged in truncation" in l)
    assert line.startswith("FAIL")
