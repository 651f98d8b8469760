import csv
import json

import numpy as np
import pytest

from aircomp.cli import CSV_HEADER, FIGURES, RunConfig, cmd_reproduce, main, parse_config


def write(tmp_path, data, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(data), encoding="utf-8")
    return str(path)


SMALL = {"n": 3, "m": 2, "r": 4, "K": 3, "T": 2, "Z": 5}


class TestConfig:
    def test_defaults(self):
        rc = parse_config({})
        assert (rc.n, rc.p0, rc.rho_data, rc.rho_noise, rc.T, rc.Z) == (8, 10.0, 0.8, 0.5, 10, 100)

    def test_unknown_key(self):
        with pytest.raises(ValueError, match="frobnicate"):
            parse_config({"frobnicate": 1})
        with pytest.raises(ValueError, match="sweep.step"):
            parse_config({"sweep": {"step": 1}})

    def test_dotted_and_nested_sweep(self):
        a = parse_config({"sweep": {"variable": "K", "values": [1, 2]}})
        b = parse_config({"sweep.variable": "K", "sweep.values": [1, 2]})
        assert a == b and a.sweep_values == (1, 2)

    def test_round_trip(self):
        rc = parse_config({**SMALL, "methods": ["random"], "sweep": {"variable": "r", "values": [2, 3]}})
        assert parse_config(json.loads(json.dumps(rc.to_dict()))) == rc

    @pytest.mark.parametrize("bad", [{"sweep": {"variable": "n"}}, {"methods": ["huh"]}, {"T": 0}, {"m": 0}])
    def test_invalid_values(self, bad):
        with pytest.raises(ValueError):
            parse_config(bad)


class TestSweep:
    def test_csv(self, tmp_path):
        cfg = write(tmp_path, {**SMALL, "sweep": {"variable": "K", "values": [1, 2]}})
        out = tmp_path / "out.csv"
        assert main(["sweep", "--config", cfg, "--out", str(out)]) == 0
        text = out.read_bytes().decode()
        assert text.splitlines()[0] == "sweep_var,sweep_value,method,normalized_mse,trials,std_error"
        assert "\r" not in text
        rows = list(csv.DictReader(text.splitlines()))
        assert len(rows) == 8 and tuple(rows[0]) == CSV_HEADER
        assert all(len(r["normalized_mse"].replace(".", "").lstrip("0")) <= 10 for r in rows)

    def test_empty_values_header_only(self, tmp_path):
        cfg = write(tmp_path, {**SMALL, "sweep": {"variable": "K", "values": []}})
        out = tmp_path / "out.csv"
        assert main(["sweep", "--config", cfg, "--out", str(out)]) == 0
        assert out.read_text() == ",".join(CSV_HEADER) + "\n"

    def test_rerun_identical(self, tmp_path):
        cfg = write(tmp_path, {**SMALL, "sweep": {"variable": "snr_db", "values": [0, 20]}})
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        main(["sweep", "--config", cfg, "--out", str(a)])
        main(["sweep", "--config", cfg, "--out", str(b), "--workers", "2"])
        assert a.read_bytes() == b.read_bytes()

    def test_partial_failure_empty_cell(self, tmp_path, capsys):
        cfg = write(tmp_path, {**SMALL, "sweep": {"variable": "m", "values": [0, 1]}})
        out = tmp_path / "out.csv"
        assert main(["sweep", "--config", cfg, "--out", str(out)]) == 0
        rows = list(csv.DictReader(out.read_text().splitlines()))
        assert all(r["normalized_mse"] == "" for r in rows if r["sweep_value"] == "0")
        assert "warning" in capsys.readouterr().err

    def test_missing_sweep(self, tmp_path):
        assert main(["sweep", "--config", write(tmp_path, SMALL)]) == 1


class TestDesign:
    def test_scalar_dump(self, tmp_path, capsys):
        cfg = write(tmp_path, {"n": 1, "m": 1, "r": 1, "K": 1, "methods": ["proposed"]})
        out = tmp_path / "d.json"
        assert main(["design", "--config", cfg, "--out", str(out), "--seed", "3"]) == 0
        dump = json.loads(out.read_text())
        (pre,) = dump["precoders"]
        block = np.array(pre["blocks"][0]["real"]) + 1j * np.array(pre["blocks"][0]["imag"])
        assert block.shape == (1, 1) and abs(block[0, 0]) == pytest.approx(np.sqrt(10))
        assert pre["design_tag"] == "proposed" and pre["power_error"] < 1e-9
        assert capsys.readouterr().out.startswith("proposed\t")

    def test_byte_identical(self, tmp_path):
        cfg = write(tmp_path, SMALL)
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        main(["design", "--config", cfg, "--out", str(a), "--seed", "11"])
        main(["design", "--config", cfg, "--out", str(b), "--seed", "11"])
        assert a.read_bytes() == b.read_bytes()

    def test_invalid_key_exit_code(self, tmp_path, capsys):
        assert main(["design", "--config", write(tmp_path, {"bogus": 1})]) == 1
        assert "bogus" in capsys.readouterr().err

    def test_io_failure(self, tmp_path):
        assert main(["design", "--config", str(tmp_path / "missing.json")]) == 3

    def test_numerical_failure(self, tmp_path, monkeypatch):
        import aircomp.cli as cli

        monkeypatch.setattr(cli, "sample_channel", lambda r, mK, rng: np.zeros((r, mK), complex))
        cfg = write(tmp_path, {**SMALL, "methods": ["proposed"]})
        assert main(["design", "--config", cfg, "--out", str(tmp_path / "d.json")]) == 2


class TestReproduce:
    def test_presets(self):
        assert FIGURES["fig2"][1:3] == ("m", tuple(range(1, 9)))
        ratios = [r / 60 for r in FIGURES["fig3"][2]]
        assert min(ratios) < 1 < max(ratios)
        assert FIGURES["fig5"][2][0] == 0 and FIGURES["fig5"][2][-1] == 30

    def test_fig2_locks_r(self, monkeypatch):
        import aircomp.cli as cli

        seen = []
        real = cli.run_sweep

        def spy(plan, variable, values, workers=1, adjust=None):
            seen.extend(adjust(plan.config.__class__(**{**plan.config.__dict__, "m": v})) for v in values)
            return real(plan, variable, (), workers, adjust)

        monkeypatch.setattr(cli, "run_sweep", spy)
        cmd_reproduce("fig2", out=None)
        assert [(c.m, c.r) for c in seen] == [(m, 5 * m) for m in range(1, 9)]

    def test_unknown_figure_exit_code(self):
        assert main(["reproduce", "fig9"]) == 1

    def test_unknown_figure(self):
        with pytest.raises(ValueError):
            cmd_reproduce("fig9")

    def test_small_run(self, tmp_path):
        out = tmp_path / "f5.csv"
        rc = RunConfig(Z=2)
        table = cmd_reproduce("fig5", seed=1, trials=1, out=str(out), base=rc)
        assert len(table) == 7 * 4
        assert out.read_text().count("\n") == 29
