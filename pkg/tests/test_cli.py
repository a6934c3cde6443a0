"""Command-line front end: parsing, validation exit codes, output
formats, determinism."""

import json
import math

import pytest

from abx import cli

PI = math.pi

MIXING_ARGS = ["--alpha", "0.5", "--eta", "0", "--a", "0,0", "--b", "1,0"]


class TestParse:
    def test_mixing_spectrum_run(self):
        cfg = cli.parse_config(MIXING_ARGS + ["spectrum"])
        assert cfg.task == "spectrum"
        assert cfg.alpha.alpha == 0.5
        assert cfg.params.b == 1.0 + 0j
        from abx.extension import ExtensionKind, classify

        assert classify(cfg.params).kind is ExtensionKind.MIXING

    def test_norm_violation_rejected(self):
        with pytest.raises(ValueError, match="0.82"):
            cli.parse_config(["--alpha", "0.5", "--a", "0.9,0", "--b", "0.1,0",
                              "spectrum"])

    def test_alpha_out_of_range_rejected(self):
        with pytest.raises(ValueError):
            cli.parse_config(["--alpha", "1.5", "spectrum"])

    def test_config_file_with_flag_override(self, tmp_path):
        cfgfile = tmp_path / "run.cfg"
        cfgfile.write_text("alpha=0.5\nk=1\nangles=360\nformat=csv\n")
        cfg = cli.parse_config(["--config", str(cfgfile), "xsection"])
        assert cfg.task == "xsection"
        assert cfg.k_values == (1.0,)
        assert cfg.angle_count == 360
        assert cfg.fmt == "csv"
        # defaults still applied for unspecified fields
        assert cfg.params.a == -1.0 + 0j and cfg.params.b == 0j
        assert cfg.theta == 0.0
        # flags override the file
        cfg2 = cli.parse_config(["--config", str(cfgfile), "--angles", "8", "xsection"])
        assert cfg2.angle_count == 8


class TestRun:
    def test_spectrum_json_values(self, capsys):
        assert cli.main(MIXING_ARGS + ["spectrum"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["task"] == "spectrum"
        assert doc["results"]["zero_resonance"] is True
        assert len(doc["results"]["bound_states"]) == 1
        assert doc["results"]["bound_states"][0] == pytest.approx(-2.0, abs=1e-10)
        assert doc["params"]["alpha"] == 0.5
        assert doc["params"]["b"] == [1.0, 0.0]
        assert "provenance" in doc and "diagnostics" in doc

    def test_validation_error_exit_code(self, capsys):
        rc = cli.main(["--alpha", "0.5", "--a", "0.9,0", "--b", "0.1,0", "spectrum"])
        assert rc == 2
        err = capsys.readouterr().err
        assert "|a|^2 + |b|^2" in err and "0.82" in err

    def test_near_eigenvalue_exit_code(self, capsys):
        # resolvent evaluated essentially at the bound-state wavenumber
        rc = cli.main(MIXING_ARGS + [
            "--k", "1e-13", "--k-imag", repr(math.sqrt(2.0)),
            "--angles", "2", "--radii", "1.0", "resolvent"])
        assert rc == 3
        assert "eigenvalue" in capsys.readouterr().err

    def test_xsection_csv_matches_classical(self, capsys):
        # note the --a=-1,0 form: a leading dash needs the = syntax
        rc = cli.main(["--alpha", "0.3", "--eta", "0", "--a=-1,0", "--b", "0,0",
                       "--k", "2.0", "--angles", "16", "--format", "csv", "xsection"])
        assert rc == 0
        out = capsys.readouterr().out
        lines = [ln for ln in out.splitlines() if ln and not ln.startswith("#")]
        header = lines[0].split(",")
        assert header[:6] == ["alpha", "eta", "a_re", "a_im", "b_re", "b_im"]
        rows = [ln.split(",") for ln in lines[1:]]
        assert len(rows) == 16
        icol = {name: i for i, name in enumerate(header)}
        for row in rows:
            assert float(row[icol["alpha"]]) == 0.3  # provenance on every row
            phi = float(row[icol["phi"]])
            want = math.sin(PI * 0.3) ** 2 / (2 * PI * 2.0 * math.sin(phi / 2) ** 2)
            assert float(row[icol["dsigma_dphi"]]) == pytest.approx(want, rel=1e-10)
            assert row[icol["in_forward_cone"]] == "False"

    def test_forward_cone_marker_in_csv(self, capsys):
        # theta centered on a grid point puts that point inside the cone
        rc = cli.main(["--alpha", "0.3", "--k", "1.0", "--angles", "8",
                       "--theta", repr((0.5) * (2 * PI / 8)),
                       "--format", "csv", "xsection"])
        assert rc == 0
        out = capsys.readouterr().out
        rows = [ln.split(",") for ln in out.splitlines()
                if ln and not ln.startswith("#")][1:]
        flags = [row[-1] for row in rows]
        assert flags.count("True") == 1
        excluded = rows[flags.index("True")]
        assert excluded[-2] == ""  # no value inside the cone

    def test_mixing_task(self, capsys):
        assert cli.main(MIXING_ARGS + ["--k", "0.5,1.0", "mixing"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert len(doc["results"]) == 2
        for row in doc["results"]:
            assert row["prob_0_to_m1"] == pytest.approx(row["prob_m1_to_0"], rel=1e-12)
            assert row["constant"] == pytest.approx(8.0 * row["k"], rel=1e-12)

    def test_eigenfunction_task_matches_library(self, capsys):
        assert cli.main(MIXING_ARGS + ["--k", "1.0", "--angles", "4",
                                       "--radii", "1.5", "eigenfunction"]) == 0
        doc = json.loads(capsys.readouterr().out)
        from abx.extension import ExtensionParams
        from abx.scattering import PlaneWaveChannel, psi_u

        chan = PlaneWaveChannel(1.0, 0.0)
        params = ExtensionParams.mixing(0.0)
        block = doc["results"][0]
        for (r, phi), (re, im) in zip(block["points"], block["psi"]):
            want = psi_u(params, 0.5, chan, r, phi)
            assert complex(re, im) == pytest.approx(want, rel=1e-12)

    def test_validate_task(self, capsys):
        assert cli.main(MIXING_ARGS + ["validate"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["results"]["limit_oracle_ok"] is True
        assert doc["results"]["limit_oracle_rel_error"] < 2e-2

    def test_output_file_and_determinism(self, tmp_path):
        out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
        args = MIXING_ARGS + ["--k", "1.0", "--angles", "12", "--out"]
        assert cli.main(args + [str(out1), "amplitude"]) == 0
        assert cli.main(args + [str(out2), "amplitude"]) == 0
        assert out1.read_bytes() == out2.read_bytes()

    def test_parallel_matches_serial(self, tmp_path, monkeypatch):
        out1, out2 = tmp_path / "s.csv", tmp_path / "p.csv"
        args = ["--alpha", "0.4", "--k", "1.0", "--angles", "32",
                "--format", "csv", "--out"]
        monkeypatch.setenv("ABX_THREADS", "1")
        assert cli.main(args + [str(out1), "xsection"]) == 0
        monkeypatch.setenv("ABX_THREADS", "4")
        assert cli.main(args + [str(out2), "xsection"]) == 0
        assert out1.read_bytes() == out2.read_bytes()
