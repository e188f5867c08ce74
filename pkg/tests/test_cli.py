import json
import math

import pytest

from dcqdlab import cli, serialize


def run(args, capsys):
    code = cli.main(args)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestCharacterize:
    def test_bit_flip_report(self, tmp_path, capsys):
        out = tmp_path / "chi.json"
        code, _, _ = run(
            ["characterize", "--channel", "bit_flip:0.25", "--n", "1", "--output", str(out)],
            capsys,
        )
        assert code == 0
        report = json.loads(out.read_text())
        chi = serialize.chi_from_report(report)
        assert chi[0, 0].real == pytest.approx(0.75, abs=1e-10)
        assert chi[1, 1].real == pytest.approx(0.25, abs=1e-10)
        assert report["method"] == "dcqd"
        assert report["n_configurations"] == 4
        assert report["validation"]["all_ok"] is True
        assert report["closed_form_residual"] < 1e-10

    def test_sampled_run_is_deterministic(self, capsys):
        args = ["characterize", "--channel", "depolarizing:0.2", "--shots", "5000", "--seed", "9"]
        code1, out1, _ = run(args, capsys)
        code2, out2, _ = run(args, capsys)
        assert code1 == code2 == 0
        assert out1 == out2
        assert json.loads(out1)["method"] == "dcqd_sampled"

    def test_csv_format(self, capsys):
        code, out, _ = run(
            ["characterize", "--channel", "identity", "--format", "csv"], capsys
        )
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "row,col,real,imag"
        assert len(lines) == 17

    def test_optics_mode(self, capsys):
        code, out, _ = run(
            ["characterize", "--channel", "bit_flip:0.25", "--optics"], capsys
        )
        assert code == 0
        report = json.loads(out)
        assert report["method"] == "dcqd_optics"
        assert report["n_configurations"] == 8

    def test_optics_needs_single_qubit(self, capsys):
        code, _, err = run(
            ["characterize", "--channel", "bit_flip:0.25", "--n", "2", "--optics"], capsys
        )
        assert code == 3
        assert "n=1" in err

    def test_output_dir_env(self, tmp_path, capsys, monkeypatch):
        monkeypatch.setenv(cli.OUTPUT_DIR_ENV, str(tmp_path))
        code, _, _ = run(
            ["characterize", "--channel", "identity", "--output", "report.json"], capsys
        )
        assert code == 0
        assert (tmp_path / "report.json").exists()


class TestExitCodes:
    def test_unknown_channel_kind(self, capsys):
        code, _, err = run(["characterize", "--channel", "nonsense:1"], capsys)
        assert code == 2
        assert "nonsense" in err

    def test_bad_parameter_value(self, capsys):
        code, _, _ = run(["characterize", "--channel", "bit_flip:1.5"], capsys)
        assert code == 2

    def test_missing_required_flag(self, capsys):
        assert cli.main(["characterize"]) == 2

    def test_ill_posed_amplitudes(self, capsys):
        s2 = repr(1 / math.sqrt(2))
        code, _, err = run(
            ["characterize", "--channel", "identity", "--alpha", s2, "--beta", s2], capsys
        )
        assert code == 3
        assert "alpha" in err

    def test_unknown_subcommand(self, capsys):
        assert cli.main(["frobnicate"]) == 2


class TestSqptAndCompare:
    def test_sqpt_report(self, capsys):
        code, out, _ = run(["sqpt", "--channel", "bit_flip:0.25"], capsys)
        assert code == 0
        report = json.loads(out)
        assert report["method"] == "sqpt"
        assert report["n_configurations"] == 16
        chi = serialize.chi_from_report(report)
        assert chi[1, 1].real == pytest.approx(0.25, abs=1e-9)

    def test_compare_reports_both_methods(self, capsys):
        code, out, _ = run(["compare", "--channel", "amplitude_damping:0.4"], capsys)
        assert code == 0
        report = json.loads(out)
        assert report["dcqd"]["n_experiments"] == 4
        assert report["sqpt"]["n_experiments"] == 16
        assert report["max_entry_difference"] < 1e-8
        assert report["resources"]["dcqd"]["n_experiments"] == 4

    def test_compare_rejects_shots_flag(self, capsys):
        assert cli.main(["compare", "--channel", "identity", "--shots", "100"]) == 2


class TestPartial:
    def test_exact_estimates(self, capsys):
        code, out, _ = run(
            ["partial", "--T1", "2", "--T2", "1", "--t1", "1", "--t2", "1"], capsys
        )
        assert code == 0
        report = json.loads(out)
        assert report["estimates"]["T1"] == pytest.approx(2.0, abs=1e-9)
        assert report["estimates"]["T2"] == pytest.approx(1.0, abs=1e-9)
        assert report["n_configurations"] == 1

    def test_sampled_estimates(self, capsys):
        code, out, _ = run(
            [
                "partial", "--T1", "2", "--T2", "1", "--t1", "1", "--t2", "1",
                "--shots", "1000000", "--seed", "4",
            ],
            capsys,
        )
        assert code == 0
        report = json.loads(out)
        assert report["relative_errors"]["T1"] < 0.05
        assert report["relative_errors"]["T2"] < 0.05


class TestResources:
    def test_single_n_text(self, capsys):
        code, out, _ = run(["resources", "--n", "3"], capsys)
        assert code == 0
        assert "4096" in out
        assert " 64" in out

    def test_range_json(self, capsys):
        code, out, _ = run(["resources", "--n-min", "1", "--n-max", "4", "--format", "json"], capsys)
        assert code == 0
        rows = json.loads(out)["rows"]
        by_key = {(r["n"], r["scheme"]): r["n_experiments"] for r in rows}
        assert by_key[(1, "sqpt")] == 16
        assert by_key[(1, "aapt_nonseparable")] == 5
        assert by_key[(1, "dcqd")] == 4
        assert by_key[(4, "sqpt")] == 65536
        assert by_key[(4, "dcqd")] == 256

    def test_csv(self, capsys):
        code, out, _ = run(["resources", "--n", "2", "--format", "csv"], capsys)
        assert code == 0
        assert out.splitlines()[0].startswith("n,scheme,")
        assert any("256" in line for line in out.splitlines())


class TestSweep:
    def test_sweep_rows(self, capsys):
        code, out, _ = run(
            [
                "sample-sweep", "--channel", "amplitude_damping:0.35",
                "--shots", "1000", "100000", "--repeats", "3", "--seed", "0",
            ],
            capsys,
        )
        assert code == 0
        rows = json.loads(out)["rows"]
        assert [r["shots"] for r in rows] == [1000, 100000]
        assert rows[1]["median_frobenius_error"] < rows[0]["median_frobenius_error"]

    def test_seeded_identical_output(self, capsys):
        args = [
            "sample-sweep", "--channel", "bit_flip:0.3",
            "--shots", "2000", "--repeats", "2", "--seed", "5",
        ]
        _, out1, _ = run(args, capsys)
        _, out2, _ = run(args, capsys)
        assert out1 == out2


def test_explicit_kraus_file(tmp_path, capsys):
    doc = {
        "kind": "explicit_kraus",
        "operators": [
            [[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [math.sqrt(0.5), 0.0]]],
            [[[0.0, 0.0], [math.sqrt(0.5), 0.0]], [[0.0, 0.0], [0.0, 0.0]]],
        ],
    }
    path = tmp_path / "ad.json"
    path.write_text(json.dumps(doc))
    code = cli.main(["characterize", "--channel", f"@{path}"])
    assert code == 0


def test_unphysical_kraus_file_rejected(tmp_path, capsys):
    doc = {"kind": "explicit_kraus", "operators": [[[[2.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [2.0, 0.0]]]]}
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    code, _, err = run(["characterize", "--channel", f"@{path}"], capsys)
    assert code == 2
    assert "trace" in err
