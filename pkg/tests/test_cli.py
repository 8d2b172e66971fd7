import csv
import io
import json
import os
import subprocess
import sys

import pytest

from bergfock.cli import ConfigError, main, parse_window, resolve_config


def _csvs(path):
    return sorted(f for f in os.listdir(path) if f.endswith(".csv"))


def _read(path):
    with open(path, encoding="utf-8") as fh:
        return fh.read()


class TestResolveConfig:
    def test_defaults(self):
        cfg = resolve_config("limits", {}, None, None)
        assert cfg["seed"] == 0
        assert cfg["parameters"]["r_list"] == [2.0, 4.0, 8.0, 16.0, 32.0]

    def test_ini_then_flags(self, tmp_path):
        ini = tmp_path / "c.ini"
        ini.write_text("[run]\nseed = 7\n[limits]\nbeta = 2.0\nsigma = 1.0\n")
        cfg = resolve_config("limits", {"sigma": "0.5"}, str(ini), None)
        assert cfg["seed"] == 7
        assert cfg["parameters"]["beta"] == 2.0
        assert cfg["parameters"]["sigma"] == 0.5

    def test_unknown_key(self, tmp_path):
        ini = tmp_path / "c.ini"
        ini.write_text("[limits]\nbogus = 1\n")
        with pytest.raises(ConfigError, match="limits.bogus"):
            resolve_config("limits", {}, str(ini), None)

    @pytest.mark.parametrize("raw", ["", "4,2", "2,2"])
    def test_r_list_message(self, raw):
        with pytest.raises(ConfigError, match="limits.r_list: r_list must be nonempty increasing"):
            resolve_config("limits", {"r_list": raw}, None, None)

    def test_bad_window(self):
        with pytest.raises(ConfigError):
            resolve_config("szego", {"window": "x,y"}, None, None)

    def test_parse_window(self):
        assert list(parse_window("e1")) == [0, 1]
        assert abs(sum(abs(c) ** 2 for c in parse_window("mixed")) - 1) < 1e-15


class TestMain:
    def test_orthogonality_degree_zero(self, tmp_path, capsys):
        code = main(["run", "orthogonality", "--space", "bergman", "--alpha", "0", "--degree", "0",
                     "--n-random", "0", "--out", str(tmp_path)])
        assert code == 0
        (name,) = _csvs(tmp_path)
        lines = _read(tmp_path / name).splitlines()
        assert lines[0].startswith("# config: ")
        rows = list(csv.DictReader(io.StringIO("\n".join(lines[1:]))))
        assert [r["theorem_tag"] for r in rows] == ["orthogonality_trivial"]
        assert float(rows[0]["error"]) < 1e-9 and rows[0]["verdict"] == "pass"

    def test_empty_r_list(self, tmp_path, capsys):
        assert main(["run", "limits", "--r-list", "", "--out", str(tmp_path)]) == 2
        assert "r_list must be nonempty increasing" in capsys.readouterr().err
        assert not os.listdir(tmp_path)

    def test_failing_checks_exit_one(self, tmp_path, capsys):
        # a tolerance far below the attainable error must fail the closed-form norm sweep
        code = main(["run", "limits", "--norm-tol", "1e-12", "--out", str(tmp_path)])
        assert code == 1
        assert "FAIL limit_toeplitz_norm" in capsys.readouterr().out

    def test_szego_rows(self, tmp_path, capsys):
        code = main(["run", "szego", "--rho", "0.5", "--alpha", "100,500,1000", "--window", "1",
                     "--out", str(tmp_path)])
        assert code == 0
        (name,) = _csvs(tmp_path)
        rows = list(csv.DictReader(io.StringIO("\n".join(_read(tmp_path / name).splitlines()[1:]))))
        traces = [(r["h"], r["sweep_value"]) for r in rows if r["theorem_tag"] == "szego_trace"]
        assert len(traces) == 12 and ("x", "1000") in traces

    def test_toeplitz_spectrum_artifacts(self, tmp_path, capsys):
        assert main(["run", "toeplitz-spectrum", "--N", "20", "--out", str(tmp_path)]) == 0
        names = os.listdir(tmp_path)
        assert any(n.endswith("-spectrum.xy") for n in names)
        xy = [n for n in names if n.endswith(".xy")][0]
        assert _read(tmp_path / xy).startswith("# config: ")

    def test_localization_matrix_json(self, tmp_path, capsys):
        assert main(["run", "localization-matrix", "--N", "10", "--window", "e1", "--out", str(tmp_path)]) == 0
        (name,) = [n for n in os.listdir(tmp_path) if n.endswith("-matrix.json")]
        payload = json.loads(_read(tmp_path / name))
        assert payload["config"]["command"] == "localization-matrix"


class TestDeterminism:
    def test_repeated_runs_identical(self, tmp_path, monkeypatch, capsys):
        args = ["run", "sharp-bounds", "--alpha", "0,2", "--seed", "3"]
        a, b, c = tmp_path / "a", tmp_path / "b", tmp_path / "c"
        assert main([*args, "--out", str(a)]) == 0
        assert main([*args, "--out", str(b)]) == 0
        monkeypatch.setenv("BERGFOCK_WORKERS", "4")
        assert main([*args, "--out", str(c)]) == 0
        (name,) = _csvs(a)
        assert _csvs(b) == _csvs(c) == [name]
        assert _read(a / name) == _read(b / name) == _read(c / name)

    def test_module_entry_point(self, tmp_path):
        proc = subprocess.run([sys.executable, "-m", "bergfock", "run", "limits", "--r-list", "4,2",
                               "--out", str(tmp_path)], capture_output=True, text=True)
        assert proc.returncode == 2
        assert "r_list must be nonempty increasing" in proc.stderr
