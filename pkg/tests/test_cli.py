import csv
import json

import numpy as np
import pytest

from torusqubit.cli import main, parse_range, load_config, PRESETS, ConfigError


def run(args, tmp_path, sub=None):
    out = tmp_path if sub is None else tmp_path / sub
    return main(args + ["--output-dir", str(out)]), out


def read_csv(path):
    with open(path) as fh:
        rows = [r for r in csv.reader(fh) if r and not r[0].startswith("#")]
    header, data = rows[0], rows[1:]
    return header, data


class TestConfigHandling:
    def test_presets_defined(self):
        assert PRESETS["fig3a"]["r_minor"] == pytest.approx(3.5e-8)
        assert PRESETS["fig3b"]["R_major"] == pytest.approx(3.6e-7)
        assert PRESETS["fig5"]["B"] == 0.45
        assert PRESETS["fig5"]["E0"] == 100.0

    def test_invalid_geometry_lists_violation(self, tmp_path, capsys):
        code = main(
            ["--r", "9e-8", "--R", "3.5e-8", "--output-dir", str(tmp_path), "potential"]
        )
        assert code == 2
        err = capsys.readouterr().err
        assert "r_minor < R_major" in err

    def test_multiple_violations_all_listed(self, tmp_path, capsys):
        code = main(
            ["--r", "9e-8", "--R", "3.5e-8", "--n-points", "10",
             "--output-dir", str(tmp_path), "potential"]
        )
        assert code == 2
        err = capsys.readouterr().err
        assert "r_minor < R_major" in err
        assert "n_points" in err

    def test_unknown_config_key_rejected(self, tmp_path):
        config = tmp_path / "config.json"
        config.write_text(json.dumps({"preset": "fig5", "nonsense": 1}))
        code = main(["--config", str(config), "--output-dir", str(tmp_path), "potential"])
        assert code == 2

    def test_config_file_and_flag_override(self, tmp_path):
        config = tmp_path / "config.json"
        config.write_text(json.dumps({"preset": "fig5", "E0": 200.0}))

        class Args:
            preset = None
            r = None
            R = None
            mass_ratio = None
            B = None
            E0 = None
            n_points = None
            stencil_order = None
            seed = None
            source = None
            loc_threshold = None

        args = Args()
        args.config = str(config)
        resolved = load_config(args)
        assert resolved.B == 0.45  # from preset
        assert resolved.E0 == 200.0  # file overrides preset
        args.E0 = 300.0
        assert load_config(args).E0 == 300.0  # flag overrides file

    def test_parse_range(self):
        np.testing.assert_allclose(parse_range("0:1:5"), [0, 0.25, 0.5, 0.75, 1.0])
        with pytest.raises(ConfigError):
            parse_range("0:1")
        with pytest.raises(ConfigError):
            parse_range("0:1:1")


class TestArtifacts:
    def test_potential_profile_symmetric(self, tmp_path):
        code, out = run(["--preset", "fig3a", "--n-points", "64", "potential"], tmp_path)
        assert code == 0
        header, data = read_csv(out / "potential.csv")
        assert header == ["theta", "V_bare", "V_E", "V_B", "V_total"]
        totals = [float(r[4]) for r in data]
        assert totals[1:] == pytest.approx(totals[1:][::-1], rel=1e-12)
        assert (out / "potential.csv.manifest.json").exists()

    def test_manifest_contents(self, tmp_path):
        code, out = run(["--preset", "fig3a", "--n-points", "64", "potential"], tmp_path)
        manifest = json.loads((out / "potential.csv.manifest.json").read_text())
        assert manifest["command"] == "potential"
        assert manifest["config"]["r_minor"] == pytest.approx(3.5e-8)
        assert "energy_J" in manifest["unit_scales"]
        assert "created" in manifest
        assert manifest["software_version"]

    def test_qubit_params_reports_both_sources(self, tmp_path):
        code, out = run(["--preset", "fig5", "qubit-params"], tmp_path)
        assert code == 0
        payload = json.loads((out / "qubit_params.json").read_text())
        assert payload["default_source"] == "numerical_taylor"
        assert set(payload["sources"]) == {"numerical_taylor", "closed_form"}
        assert payload["Omega_rad_per_s"] == pytest.approx(3.282384272e9, rel=1e-6)
        ratio = (
            payload["sources"]["closed_form"]["beta_sq"]
            / payload["sources"]["numerical_taylor"]["beta_sq"]
        )
        assert abs(ratio - 1.0) > 0.5  # the two routes genuinely disagree

    def test_gate_hadamard(self, tmp_path):
        code, out = run(["--preset", "fig5", "gate", "--gate", "hadamard"], tmp_path)
        assert code == 0
        payload = json.loads((out / "gate.json").read_text())
        assert payload["fidelity_to_ideal"] >= 1.0 - 1e-9
        assert len(payload["sequence"]["pulses"]) == 1

    def test_gate_prep(self, tmp_path):
        code, out = run(["--preset", "fig5", "gate", "--gate", "prep:1.2,0.7"], tmp_path)
        assert code == 0
        payload = json.loads((out / "gate.json").read_text())
        assert payload["fidelity_to_ideal"] >= 1.0 - 1e-9

    def test_evolve_trajectory(self, tmp_path):
        code, out = run(
            ["--preset", "fig5", "evolve", "--samples", "20", "--phase", "0.5"], tmp_path
        )
        assert code == 0
        header, data = read_csv(out / "trajectory.csv")
        assert header == ["t", "x", "y", "z", "p0", "p1"]
        assert len(data) == 20
        first = [float(x) for x in data[0]]
        assert first[1:4] == pytest.approx([0.0, 0.0, 1.0], abs=1e-12)
        last = [float(x) for x in data[-1]]
        assert abs(last[3]) < 1e-9  # default duration pi/(2 Omega) lands on equator

    def test_spectrum_bound_count(self, tmp_path):
        code, out = run(["--preset", "fig3a", "spectrum", "--m", "0"], tmp_path)
        assert code == 0
        header, data = read_csv(out / "spectrum.csv")
        bound = [r for r in data if r[4] == "true"]
        assert len(bound) == 1

    def test_sweep_b(self, tmp_path):
        code, out = run(
            ["--preset", "fig3a", "--n-points", "256", "sweep-b",
             "--b-range", "0:0.1:3", "--m-list", "0,1", "--levels", "2"],
            tmp_path,
        )
        assert code == 0
        header, data = read_csv(out / "sweep_b.csv")
        assert header == ["B", "m", "n", "energy", "bound", "localization"]
        assert len(data) == 3 * 2 * 2

    def test_window_fig3a(self, tmp_path):
        code, out = run(["--preset", "fig3a", "--n-points", "512", "window"], tmp_path)
        assert code == 0
        payload = json.loads((out / "window.json").read_text())
        assert payload["B_min_T"] < 0.45 < payload["B_max_T"]

    def test_fidelity_scan_shape(self, tmp_path):
        code, out = run(
            ["--preset", "fig5", "fidelity", "--scan", "dB",
             "--range", "0:0.01:3", "--samples", "400"],
            tmp_path,
        )
        assert code == 0
        header, data = read_csv(out / "fidelity.csv")
        assert header == ["delta", "mean_infidelity", "max_infidelity"]
        means = [float(r[1]) for r in data]
        assert means[0] == pytest.approx(0.0, abs=1e-12)
        assert means[2] > means[1] > 0.0

    def test_mitigate(self, tmp_path):
        code, out = run(
            ["--preset", "fig5", "mitigate", "--e0-range", "100:10000:3",
             "--samples", "400"],
            tmp_path,
        )
        assert code == 0
        header, data = read_csv(out / "mitigate.csv")
        means = [float(r[1]) for r in data]
        assert means[-1] <= means[0]
        manifest = json.loads((out / "mitigate.csv.manifest.json").read_text())
        assert manifest["results"]["argmin_E0"] == pytest.approx(float(data[-1][0]))


class TestReproducibility:
    def test_identical_config_identical_bytes(self, tmp_path):
        args = ["--preset", "fig5", "--seed", "42", "fidelity",
                "--scan", "dB", "--range", "0:0.005:3", "--samples", "500"]
        _, out_a = run(args, tmp_path, "a")
        _, out_b = run(args, tmp_path, "b")
        assert (out_a / "fidelity.csv").read_bytes() == (out_b / "fidelity.csv").read_bytes()

    def test_every_artifact_has_manifest(self, tmp_path):
        run(["--preset", "fig5", "qubit-params"], tmp_path)
        run(["--preset", "fig5", "gate"], tmp_path)
        artifacts = [
            p for p in tmp_path.iterdir()
            if p.suffix in (".csv", ".json") and not p.name.endswith(".manifest.json")
        ]
        assert artifacts
        for artifact in artifacts:
            assert artifact.with_suffix(artifact.suffix + ".manifest.json").exists()


class TestNewSurfaces:
    def test_evolve_three_level(self, tmp_path):
        code, out = run(
            ["--preset", "fig5", "evolve", "--three-level", "--samples", "25"], tmp_path
        )
        assert code == 0
        header, data = read_csv(out / "trajectory.csv")
        assert header == ["t", "x", "y", "z", "p0", "p1", "p2"]
        assert len(data) == 25
        p2 = [float(r[6]) for r in data]
        assert max(p2) < 1e-3  # leakage stays small at the operating point

    def test_mitigate_b0_sweep(self, tmp_path):
        code, out = run(
            ["--preset", "fig5", "--E0", "1000", "mitigate", "--sweep", "B0",
             "--b0-range", "0.4:0.6:3", "--delta-b", "0", "--delta-e", "0.005",
             "--samples", "300"],
            tmp_path,
        )
        assert code == 0
        header, data = read_csv(out / "mitigate.csv")
        assert header == ["B0", "mean_infidelity", "max_infidelity"]
        means = [float(r[1]) for r in data]
        assert means[0] == pytest.approx(means[-1], rel=1e-9)

    def test_sweep_b_parallel_workers_match_serial(self, tmp_path, monkeypatch):
        args = ["--preset", "fig3a", "--n-points", "128", "sweep-b",
                "--b-range", "0:0.2:3", "--m-list", "0", "--levels", "2"]
        _, out_serial = run(args, tmp_path, "serial")
        monkeypatch.setenv("TORUSQUBIT_WORKERS", "2")
        _, out_parallel = run(args, tmp_path, "parallel")
        assert (out_serial / "sweep_b.csv").read_bytes() == (
            out_parallel / "sweep_b.csv"
        ).read_bytes()
