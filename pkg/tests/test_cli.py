import json

import numpy as np
import pytest

from quasicrit import cli
from quasicrit.errors import ConfigError
from quasicrit.io import config_hash, read_csv, recorded_hash

SMALL = {"family": "minimal", "n": 9, "V_in_J": 2.0, "t_v_in_J": 0.1}


def run(tmp_path, task, cfg, name="cfg.json", threads=1):
    p = tmp_path / name
    p.write_text(json.dumps(cfg))
    out = tmp_path / "out"
    code = cli.main([task, "--config", str(p), "--out", str(out), "--threads", str(threads)])
    return code, out


class TestValidation:
    def test_negative_sigma(self, tmp_path, capsys):
        cfg = {"model": SMALL, "dynamics": {"sigma": -1.0, "chain": 1}}
        code, _ = run(tmp_path, "dynamics", cfg)
        assert code != 0
        err = json.loads(capsys.readouterr().err)
        assert err["path"] == "dynamics.sigma"

    @pytest.mark.parametrize(
        "cfg,path",
        [
            ({"model": {**SMALL, "bogus": 1}}, "model.bogus"),
            ({"model": {**SMALL, "family": "ladder"}}, "model.family"),
            ({"model": {"family": "minimal", "n": 9, "V_in_J": 2.0}}, "model.t_v_in_J"),
            ({"model": {**SMALL, "n": 40}}, "model.n"),
            ({"model": SMALL, "extra": {}}, "extra"),
            ({"model": {**SMALL, "V_in_J": "2"}}, "model.V_in_J"),
        ],
    )
    def test_paths(self, cfg, path):
        with pytest.raises(ConfigError) as exc:
            cli.validate_config(cfg, "spectrum")
        assert exc.value.path == path

    def test_missing_section(self):
        with pytest.raises(ConfigError) as exc:
            cli.validate_config({"model": SMALL}, "dynamics")
        assert exc.value.path == "dynamics"

    def test_random_needs_seed(self):
        cfg = {
            "greens": {"energies_in_J": [3.0], "d_max": 2, "L_chain": 21},
            "self_energy": {"E_in_J": 0.5, "V_in_J": 1.0, "n": 8, "potential": "random"},
        }
        with pytest.raises(ConfigError) as exc:
            cli.validate_config(cfg, "greens")
        assert exc.value.path == "self_energy.seed"

    def test_task_mismatch(self):
        with pytest.raises(ConfigError):
            cli.validate_config({"task": "spectrum", "model": SMALL}, "multifractal")

    def test_unreadable_config(self, tmp_path, capsys):
        p = tmp_path / "bad.json"
        p.write_text("{not json")
        assert cli.main(["spectrum", "--config", str(p)]) == 2
        assert json.loads(capsys.readouterr().err)["path"] == "--config"

    def test_sweep_axis_missing(self):
        cfg = {"model": SMALL, "sweep": {"task": "spectrum", "axis": "model.W_in_J", "values": [1.0]}}
        with pytest.raises(ConfigError) as exc:
            cli.validate_config(cfg, "sweep")
        assert exc.value.path == "sweep.axis"

    def test_sweep_axis_not_numeric(self):
        cfg = {"model": SMALL, "sweep": {"task": "spectrum", "axis": "model.family", "values": [1.0]}}
        with pytest.raises(ConfigError):
            cli.validate_config(cfg, "sweep")


class TestTasks:
    def test_multifractal_output(self, tmp_path):
        cfg = {"model": SMALL, "analysis": {"q": [1.0, 2.0]}}
        code, out = run(tmp_path, "multifractal", cfg)
        assert code == 0
        prov, header, rows = read_csv(out / "states.csv")
        assert header == ["n", "L", "j", "E", "tau2", "alpha_min", "ipr", "npr", "P_1", "P_2"]
        assert len(rows) == 68 and rows[0][2] == "1"
        assert recorded_hash(out / "states.csv") == config_hash(cfg)
        assert all(abs(float(r[8]) - 1) < 1e-10 for r in rows)
        raw = (out / "states.csv").read_bytes()
        assert b"\r\n" not in raw

    def test_deterministic(self, tmp_path):
        cfg = {"model": SMALL, "scaling": {"ns": [7, 8, 9], "quantity": "alpha_min", "windows": cli._ABC}}
        _, out1 = run(tmp_path, "scaling", cfg)
        first = {p.name: p.read_bytes() for p in out1.iterdir()}
        _, out2 = run(tmp_path, "scaling", cfg)
        assert first == {p.name: p.read_bytes() for p in out2.iterdir()}

    def test_distribution(self, tmp_path):
        cfg = {"model": {**SMALL, "n": 12}, "distribution": {"window": {"name": "C", "E_in_J": [0, 0.67]}}}
        code, out = run(tmp_path, "distribution", cfg)
        _, header, rows = read_csv(out / "histogram.csv")
        assert header == ["bin_left", "bin_right", "count", "f_L"]
        assert len(rows) == 51
        _, _, modes = read_csv(out / "histogram_modes.csv")
        assert sum(int(r[2]) for r in rows) == int(modes[0][0])

    def test_empty_window_exit(self, tmp_path, capsys):
        cfg = {"model": SMALL, "distribution": {"window": {"name": "far", "E_in_J": [50, 60]}}}
        code, _ = run(tmp_path, "distribution", cfg)
        assert code == 3
        assert json.loads(capsys.readouterr().err)["path"] == "distribution.window"

    def test_dynamics(self, tmp_path):
        cfg = {
            "model": {"family": "dual", "n": 10, "J_in_J": 1.0, "V_in_J": 1.0, "t_v_in_J": 0.5},
            "dynamics": {"sigma": 2.0, "chain": 1, "t_max": 30.0, "points": 20},
        }
        code, out = run(tmp_path, "dynamics", cfg)
        assert code == 0
        _, header, rows = read_csv(out / "dynamics_fit.csv")
        assert header[0] == "kappa" and float(rows[0][2]) == 1.0

    def test_fidelity(self, tmp_path):
        cfg = {"model": SMALL, "fidelity": {"ns": [7, 8, 9], "windows": cli._ABC}}
        code, out = run(tmp_path, "fidelity", cfg)
        assert code == 0
        for name in "ABC":
            _, header, rows = read_csv(out / f"fidelity_{name}.csv")
            assert header == ["n", "L", "mean_max_overlap"] and len(rows) == 3

    def test_greens(self, tmp_path):
        cfg = {
            "greens": {"energies_in_J": [1.0, 3.0], "d_max": 3, "L_chain": 987},
            "self_energy": {"E_in_J": 0.5, "V_in_J": 1.0, "n": 10, "potential": "random", "seed": 1},
        }
        code, out = run(tmp_path, "greens", cfg)
        assert code == 0
        _, _, rows = read_csv(out / "greens.csv")
        analytic = {(r[0], r[1]): complex(float(r[2]), float(r[3])) for r in rows if r[4] == "analytic"}
        assert abs(analytic[("3", "0")]) == pytest.approx(5**-0.5, rel=1e-9)
        assert (out / "self_energy_summary.csv").exists()

    def test_continuum(self, tmp_path):
        cfg = {
            "continuum": {
                "V1_in_ER": 8.0,
                "V2_in_ER": 0.25,
                "Omega_in_ER": 0.01,
                "L_cells": 13,
                "windows": [{"name": "mid", "E_in_ER": [2.48, 2.60]}],
            }
        }
        code, out = run(tmp_path, "continuum", cfg)
        assert code == 0
        _, header, rows = read_csv(out / "continuum.csv")
        assert header == ["j", "E", "tau2", "window"] and len(rows) == 52
        assert any(r[3] == "mid" for r in rows)


class TestSweep:
    def test_sorted_and_combined(self, tmp_path):
        cfg = {"model": SMALL, "sweep": {"task": "spectrum", "axis": "model.V_in_J", "values": [3.0, 0.5, 1.5]}}
        code, out = run(tmp_path, "sweep", cfg, threads=2)
        assert code == 0
        _, header, rows = read_csv(out / "sweep.csv")
        assert header == ["V_in_J", "j", "E"]
        vals = [float(r[0]) for r in rows]
        assert vals == sorted(vals) and len(rows) == 3 * 68
        assert sorted(p.name for p in out.iterdir()) == ["point_000", "point_001", "point_002", "sweep.csv"]

    def test_point_matches_direct_run(self, tmp_path):
        cfg = {"model": SMALL, "sweep": {"task": "spectrum", "axis": "model.V_in_J", "values": [1.5]}}
        _, out = run(tmp_path, "sweep", cfg)
        direct = cli.task_spectrum({"model": {**SMALL, "V_in_J": 1.5}})["spectrum.csv"][1]
        _, _, rows = read_csv(out / "point_000" / "spectrum.csv")
        np.testing.assert_allclose([float(r[1]) for r in rows], [e for _, e in direct], rtol=1e-11)

    def test_empty_axis(self, tmp_path):
        cfg = {"model": SMALL, "sweep": {"task": "spectrum", "axis": "model.V_in_J", "values": []}}
        with pytest.warns(UserWarning):
            assert cli.run_task("sweep", cfg, tmp_path / "o") == []

    def test_integer_axis(self, tmp_path):
        cfg = {"model": SMALL, "sweep": {"task": "spectrum", "axis": "model.n", "values": [5, 6]}}
        _, out = run(tmp_path, "sweep", cfg)
        _, _, rows = read_csv(out / "sweep.csv")
        assert len(rows) == 2 * 5 + 2 * 8


class TestRecipes:
    def test_list(self, capsys):
        assert cli.main(["recipes"]) == 0
        ids = [line.split("\t")[0] for line in capsys.readouterr().out.splitlines()]
        assert {"fig3a", "fig3c", "fig9e", "fig14a"} <= set(ids)

    @pytest.mark.parametrize("rid", sorted(cli.RECIPES))
    def test_recipes_validate(self, rid):
        cfg = cli.RECIPES[rid]
        cli.validate_config(cfg, cfg["task"])

    def test_recipe_to_file(self, tmp_path):
        p = tmp_path / "r.json"
        assert cli.main(["recipe", "fig3c", "--out", str(p)]) == 0
        assert json.loads(p.read_text())["model"]["V_in_J"] == 2.0

    def test_unknown_recipe(self, capsys):
        assert cli.main(["recipe", "fig99"]) == 2

    @pytest.mark.parametrize("fig", ["fig3a", "fig3c", "fig4b", "fig5", "fig8c", "fig9e", "fig10b", "fig14a"])
    def test_plot_scripts_compile(self, fig):
        text = cli.emit_plot_script(fig, "results")
        compile(text, fig, "exec")
        assert "matplotlib" in text

    def test_fig8c_guides(self):
        text = cli.emit_plot_script("fig8c")
        assert "0.43" in text and "1.0" in text

    def test_unknown_figure(self):
        with pytest.raises(ConfigError):
            cli.emit_plot_script("fig42")
