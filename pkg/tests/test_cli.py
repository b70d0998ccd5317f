from __future__ import annotations

import json
import math
import subprocess
import sys
from fractions import Fraction

import numpy as np
import pytest

from revival_lab import GridFunction, PiecewiseConstant, RationalTime, analyze
from revival_lab.cli import main
from revival_lab.config import ConfigError, load_config_text, parse_number, parse_polynomial, parse_theta, parse_time
from revival_lab.core import sample
from revival_lab.io import read_coeffs_csv, read_grid_csv, write_coeffs_csv, write_grid_csv
from revival_lab.svg import Panel, render_svg

AIRY_QUARTER = {"boundary": {"type": "quasi_periodic_airy", "theta": "1/4"},
                "initial": {"type": "step"}, "time": {"p": 1, "q": 3}, "truncation": {"M": 256}}


def write(tmp_path, name, obj) -> str:
    p = tmp_path / name
    p.write_text(obj if isinstance(obj, str) else json.dumps(obj, indent=2))
    return str(p)


class TestConfigParsing:
    @pytest.mark.parametrize("text,value", [("2*pi/3", 2 * math.pi / 3), ("sqrt(2)/3", math.sqrt(2) / 3),
                                            ("1e-3", 1e-3), ("2^3", 8), ("exp(1)", math.e)])
    def test_numbers(self, text, value):
        assert float(parse_number(text)) == pytest.approx(value)

    def test_complex_numbers(self):
        from revival_lab.config import parse_complex
        assert parse_complex("exp(I*pi/2)") == pytest.approx(1j)
        assert parse_complex("0.5 - i") == 0.5 - 1j

    def test_time(self):
        assert parse_time({"t": "2*pi/3"}) == RationalTime(1, 3)
        assert parse_time({"p": 2, "q": 4}) == RationalTime(1, 2)
        assert parse_time({"t": 1.0}) == 1.0
        with pytest.raises(ConfigError):
            parse_time({"t": -1})

    def test_theta(self):
        assert parse_theta("1/4") == Fraction(1, 4)
        assert parse_theta(0.25) == Fraction(1, 4)
        assert isinstance(parse_theta("sqrt(2)/3"), float)

    def test_polynomial(self):
        assert parse_polynomial("m^3 + 2*m").coeffs == (0, 2, 0, 1)
        with pytest.raises(ConfigError):
            parse_polynomial("m^2/2")
        with pytest.raises(ConfigError):
            parse_polynomial("m^2 + k")

    def test_errors_are_line_anchored(self):
        text = '{\n  "boundary": {\n    "type": "robin"\n  },\n  "time": {"p": 1, "q": 2}\n}\n'
        with pytest.raises(ConfigError) as exc:
            load_config_text(text)
        assert exc.value.line == 2
        assert "'b' is a required property" in str(exc.value)

    def test_bad_json(self):
        with pytest.raises(ConfigError) as exc:
            load_config_text('{"time": {"p": 1,, }}')
        assert exc.value.line == 1

    def test_defaults(self):
        cfg = load_config_text(json.dumps({"boundary": {"type": "robin", "b": 0.35}, "initial": {"type": "step"}}))
        assert cfg.N == 2048 and cfg.M == 256
        assert cfg.initial.breakpoints.tolist() == [0.0, math.pi / 2]
        assert cfg.reading == "printed"


class TestIO:
    def test_grid_round_trip_is_exact(self, tmp_path):
        u = sample(PiecewiseConstant([1.0, 2.5], [0.1 + 0.3j, -1 / 3]), 64)
        write_grid_csv(tmp_path / "u.csv", u)
        v = read_grid_csv(tmp_path / "u.csv")
        assert v.domain_length == 2 * math.pi
        assert np.array_equal(u.samples, v.samples)
        half = GridFunction(math.pi, np.arange(16.0))
        write_grid_csv(tmp_path / "h.csv", half)
        assert read_grid_csv(tmp_path / "h.csv").domain_length == math.pi

    def test_coeffs_round_trip(self, tmp_path):
        c = analyze(PiecewiseConstant.step(math.pi), 16)
        write_coeffs_csv(tmp_path / "c.csv", c)
        assert np.array_equal(read_coeffs_csv(tmp_path / "c.csv").values, c.values)

    def test_bad_header(self, tmp_path):
        from revival_lab import ParameterError
        (tmp_path / "x.csv").write_text("a,b,c\n1,2,3\n")
        with pytest.raises(ParameterError):
            read_grid_csv(tmp_path / "x.csv")


def test_svg_layout():
    x = np.linspace(0, 2 * math.pi, 100, endpoint=False)
    svg = render_svg([Panel("t = 2π/3", x, np.exp(1j * x)), Panel("b", x, np.cos(x))], "demo")
    assert svg.startswith("<svg") and 'viewBox="0 0 1280 480"' in svg
    assert svg.count("<polyline") == 4
    assert 'stroke="blue"' in svg and 'stroke="red"' in svg
    assert ">π<" in svg and ">3π/2<" in svg


class TestCommands:
    def test_solve_writes_solution_coeffs_and_sidecar(self, tmp_path):
        cfg = write(tmp_path, "a.json", AIRY_QUARTER)
        out = tmp_path / "u.csv"
        assert main(["solve", "--config", cfg, "--out", str(out), "--coeffs", str(tmp_path / "c.csv")]) == 0
        u = read_grid_csv(out)
        assert u.N == 4096
        side = json.loads((tmp_path / "u.csv.json").read_text())
        assert side["boundary"]["theta_exact"] == "1/4"
        assert side["time"] == {"p": 1, "q": 3, "t": 2 * math.pi / 3}
        assert (tmp_path / "c.csv").read_text().startswith("m,re,im\n")
        assert json.loads((tmp_path / "a.json").read_text()) == AIRY_QUARTER

    def test_solve_is_deterministic(self, tmp_path):
        cfg = write(tmp_path, "a.json", AIRY_QUARTER)
        for name in ("1.csv", "2.csv"):
            assert main(["solve", "--config", cfg, "--out", str(tmp_path / name)]) == 0
        assert (tmp_path / "1.csv").read_bytes() == (tmp_path / "2.csv").read_bytes()

    def test_revival_engine_matches_series(self, tmp_path):
        cfg = write(tmp_path, "a.json", {**AIRY_QUARTER, "truncation": {"M": 1024}})
        main(["solve", "--config", cfg, "--out", str(tmp_path / "s.csv")])
        main(["solve", "--config", cfg, "--out", str(tmp_path / "r.csv"), "--engine", "revival"])
        from revival_lab import compare
        err = compare(read_grid_csv(tmp_path / "s.csv"), read_grid_csv(tmp_path / "r.csv")).l2_rel_err
        assert err < 3e-2  # pointwise revival vs Gibbs-limited series

    def test_sidecar_cannot_overwrite_config(self, tmp_path):
        cfg = write(tmp_path, "a.json", AIRY_QUARTER)
        assert main(["solve", "--config", cfg, "--out", str(tmp_path / "u.csv"), "--sidecar", cfg]) == 2

    @pytest.mark.parametrize("boundary,code", [
        ({"type": "pseudo_periodic", "beta0": 1, "beta1": -1}, 2),
        ({"type": "pseudo_periodic", "beta0": 1.5, "beta1": 1.5}, 2),
        ({"type": "robin", "b": 0.9999}, 3),
    ])
    def test_solve_error_codes(self, tmp_path, boundary, code, capsys):
        cfg = write(tmp_path, "bad.json", {"boundary": boundary, "initial": {"type": "step"}, "time": {"p": 1, "q": 3}})
        assert main(["solve", "--config", cfg, "--out", str(tmp_path / "u.csv")]) == code
        assert "revival-lab:" in capsys.readouterr().err

    def test_zero_denominator(self, tmp_path):
        cfg = write(tmp_path, "q0.json", {**AIRY_QUARTER, "time": {"p": 1, "q": 0}})
        assert main(["solve", "--config", cfg, "--out", str(tmp_path / "u.csv")]) == 2

    @pytest.mark.parametrize("theorem,extra,code", [
        ("thm11", {}, 0),
        ("cor42", {}, 0),
        ("prop43", {"truncation": {"M": 128}}, 1),
        ("prop43", {"truncation": {"M": 128}, "reading": "consistent"}, 0),
    ])
    def test_verify(self, tmp_path, theorem, extra, code):
        cfg = write(tmp_path, "v.json", {**AIRY_QUARTER, **extra})
        out = tmp_path / "rep.json"
        assert main(["verify", "--theorem", theorem, "--config", cfg, "--out", str(out)]) == code
        rep = json.loads(out.read_text())
        assert rep["theorem"] == theorem and rep["passed"] == (code == 0)
        if theorem == "prop43":
            assert rep["untruncated"]["consistent"]["rel_l2_err"] < 1e-8

    def test_verify_theta_out_of_range(self, tmp_path):
        cfg = write(tmp_path, "v.json", {**AIRY_QUARTER, "boundary": {"type": "quasi_periodic_airy", "theta": "3/2"}})
        assert main(["verify", "--theorem", "cor42", "--config", cfg]) == 2

    def test_unknown_theorem(self, tmp_path):
        cfg = write(tmp_path, "v.json", AIRY_QUARTER)
        with pytest.raises(SystemExit) as exc:
            main(["verify", "--theorem", "thm99", "--config", cfg])
        assert exc.value.code == 2

    def test_robin_verify(self, tmp_path):
        cfg = write(tmp_path, "r.json", {"boundary": {"type": "robin", "b": 0.35}, "initial": {"type": "step"},
                                         "time": {"p": 1, "q": 3}, "truncation": {"M": 512}})
        assert main(["verify", "--theorem", "thm12", "--config", cfg, "--out", str(tmp_path / "o.json")]) == 0
        assert main(["verify", "--theorem", "prop51", "--config", cfg, "--out", str(tmp_path / "o.json")]) == 0

    def test_gauss(self, capsys):
        assert main(["gauss", "--poly", "m^2", "--p", "1", "--q", "2"]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["weights"] == [[0.0, 0.0], [2.0, 0.0]]
        assert out["poly"] == "m^2"

    def test_jumps_and_dimension(self, tmp_path, capsys):
        write_grid_csv(tmp_path / "u.csv", sample(PiecewiseConstant.step(math.pi), 2**14))
        assert main(["jumps", "--in", str(tmp_path / "u.csv")]) == 0
        jumps = json.loads(capsys.readouterr().out)
        assert len(jumps) == 1 and abs(jumps[0]["location"] - math.pi) < 1e-3
        assert main(["dimension", "--in", str(tmp_path / "u.csv"), "--out", str(tmp_path / "d.json")]) == 0
        rep = json.loads((tmp_path / "d.json").read_text())
        assert rep["estimate"] == pytest.approx(1.0, abs=0.1)
        assert rep["warnings"] == []

    def test_figures_single(self, tmp_path, capsys):
        assert main(["figures", "airy_rt_quarter", "--outdir", str(tmp_path), "--M", "512", "--N", "2048"]) == 0
        svg = (tmp_path / "airy_rt_quarter.svg").read_text()
        assert svg.count("<polyline") == 6
        rep = json.loads((tmp_path / "airy_rt_quarter.json").read_text())
        assert all(p["ok"] for p in rep["panels"])
        assert sorted(f.name for f in tmp_path.glob("airy_rt_quarter_*.csv")) == [
            "airy_rt_quarter_0.csv", "airy_rt_quarter_1.csv", "airy_rt_quarter_2.csv"]

    def test_sweep_ordering_and_workers(self, tmp_path, monkeypatch):
        sweep = {"sweep": {"boundary": [{"type": "quasi_periodic_airy", "theta": t} for t in ("0", "1/4", "sqrt(2)/3")],
                           "times": [{"p": 1, "q": 2}, {"t": 1.0}]},
                 "truncation": {"M": 256}, "grid": {"N": 1024}}
        cfg = write(tmp_path, "s.json", sweep)
        outs = []
        for workers in ("1", "3"):
            monkeypatch.setenv("REVIVAL_LAB_WORKERS", workers)
            out = tmp_path / f"s{workers}.jsonl"
            assert main(["sweep", "--config", cfg, "--out", str(out)]) == 0
            outs.append(out.read_bytes())
        assert outs[0] == outs[1]
        rows = [json.loads(line) for line in outs[0].decode().splitlines()]
        assert [r["cell"] for r in rows] == list(range(6))
        # cells run over boundaries (theta = 0, 1/4, sqrt2/3) then times (pi, 1)
        counts = [r["jump_count"] for r in rows]
        assert counts[0] > 0 and counts[2] > 0
        assert counts[4] == 0 and counts[3] == 0

    def test_empty_sweep(self, tmp_path, capsys):
        cfg = write(tmp_path, "e.json", {"sweep": {"boundary": [], "times": []}})
        assert main(["sweep", "--config", cfg]) == 0
        assert capsys.readouterr().out == ""

    def test_bad_workers(self, tmp_path, monkeypatch):
        monkeypatch.setenv("REVIVAL_LAB_WORKERS", "zero")
        cfg = write(tmp_path, "s.json", {"sweep": {"boundary": [{"type": "robin", "b": 0.5}], "times": [{"t": 1}]}})
        assert main(["sweep", "--config", cfg]) == 2


def test_console_entry_point(tmp_path):
    res = subprocess.run([sys.executable, "-m", "revival_lab.cli", "gauss", "--poly", "m^3", "--p", "1", "--q", "3"],
                         capture_output=True, text=True, check=True)
    w = json.loads(res.stdout)["weights"]
    assert np.allclose(np.array(w), [[0, 0], [3, 0], [0, 0]], atol=1e-15)
