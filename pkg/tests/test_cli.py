import json
import math

import pytest

from splopo import cli
from splopo.detection import MeasurementRecord, analyze, linear_to_db
from splopo.opo import OpoParams, output_covariance

RECORD = {
    "squeezed_plus_db": -4.7,
    "squeezed_minus_db": -4.9,
    "individual_noise_db": 8.2,
    "quantum_efficiency": 0.95,
    "visibility": 0.97,
    "propagation": 0.99,
}

BENCHMARK_FLAGS = [
    "--sigma", "0.9", "--coupling", "1.5", "--omega", "0",
    "--kappa", "0.025", "--kappa-prime", "0.025",
]


@pytest.fixture
def record_file(tmp_path):
    path = tmp_path / "record.json"
    path.write_text(json.dumps(RECORD))
    return str(path)


def run(capsys, argv):
    code = cli.main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestSpectrum:
    def test_csv_structure(self, capsys):
        code, out, _ = run(capsys, ["spectrum", "--points", "3"])
        lines = out.strip().splitlines()
        assert code == 0
        assert lines[0] == "# schema: 1"
        assert lines[1] == "phi_rad,variance,variance_db"
        assert len(lines) == 5

    def test_values_match_library(self, capsys):
        code, out, _ = run(capsys, ["spectrum", "--points", "2", "--phi-max", "90"])
        rows = [line.split(",") for line in out.strip().splitlines()[2:]]
        # default operating point, minus mode: squeezed at 0, antisqueezed at 90
        from splopo.opo import diff_mode_spectra

        p = OpoParams(sigma=0.9, coupling=0.0, omega=0.1, kappa=0.025, kappa_prime=0.03)
        s = diff_mode_spectra(p)
        assert float(rows[0][0]) == 0.0
        assert float(rows[0][1]) == pytest.approx(s.s_p_diff, rel=1e-9)
        assert float(rows[1][0]) == pytest.approx(math.pi / 2.0, rel=1e-9)
        assert float(rows[1][1]) == pytest.approx(s.s_q_diff, rel=1e-9)

    def test_json_structure(self, capsys):
        code, out, _ = run(capsys, ["spectrum", "--points", "3", "--format", "json"])
        doc = json.loads(out)
        assert code == 0
        assert doc["schema"] == "1"
        assert doc["columns"] == ["phi_rad", "variance", "variance_db"]
        assert len(doc["rows"]) == 3

    def test_mode_selection(self, capsys):
        _, plus_out, _ = run(capsys, ["spectrum", "--points", "2", "--mode", "plus"])
        _, single_out, _ = run(capsys, ["spectrum", "--points", "2", "--mode", "single"])
        assert plus_out != single_out

    def test_rejects_single_point(self, capsys):
        code, _, err = run(capsys, ["spectrum", "--points", "1"])
        assert code == 3
        assert "two sample points" in err


class TestScanCoupling:
    def test_header_and_shape(self, capsys):
        code, out, _ = run(capsys, ["scan-coupling", "--steps", "4"])
        lines = out.strip().splitlines()
        assert code == 0
        assert lines[1] == (
            "c,theta_rad,theta_deg,s_min_minus,s_min_minus_db,"
            "s_min_signal,E_N_raw,E_N_std"
        )
        assert len(lines) == 6

    def test_zero_coupling_row_has_no_tilt(self, capsys):
        _, out, _ = run(capsys, ["scan-coupling", "--steps", "2", "--c-max", "1"])
        first = out.strip().splitlines()[2].split(",")
        assert float(first[0]) == 0.0
        assert float(first[1]) == 0.0
        # untreated and standardised negativity coincide without coupling
        assert float(first[6]) == pytest.approx(float(first[7]), abs=1e-9)

    def test_rejects_reversed_range(self, capsys):
        code, _, err = run(capsys, ["scan-coupling", "--c-min", "2", "--c-max", "1"])
        assert code == 3
        assert "c-min" in err


class TestCovariance:
    def test_json_matches_library(self, capsys):
        code, out, _ = run(capsys, ["covariance", *BENCHMARK_FLAGS, "--format", "json"])
        doc = json.loads(out)
        assert code == 0
        assert doc["schema"] == "1"
        p = OpoParams(0.9, 1.5, 0.0, 0.025, 0.025)
        expected = output_covariance(p).to_json_dict()
        assert doc["ordering"] == expected["ordering"]
        assert doc["labels"] == expected["labels"]
        assert doc["matrix"] == expected["matrix"]

    def test_standardize_flag(self, capsys):
        _, raw, _ = run(capsys, ["covariance", *BENCHMARK_FLAGS, "--format", "json"])
        _, std, _ = run(
            capsys,
            ["covariance", *BENCHMARK_FLAGS, "--standardize", "--format", "json"],
        )
        raw_m = json.loads(raw)["matrix"]
        std_m = json.loads(std)["matrix"]
        assert raw_m != std_m
        assert abs(std_m[0][1]) < 1e-9  # tilt removed

    def test_csv_matrix(self, capsys):
        code, out, _ = run(capsys, ["covariance", "--format", "csv"])
        lines = out.strip().splitlines()
        assert code == 0
        assert lines[1] == "XA,YA,XB,YB"
        assert len(lines) == 6


class TestAnalyze:
    def test_report_matches_library(self, capsys, record_file):
        code, out, _ = run(capsys, ["analyze", "--record", record_file, "--format", "json"])
        doc = json.loads(out)
        assert code == 0
        report = analyze(MeasurementRecord.from_dict(RECORD))
        assert doc["duan_delta"] == pytest.approx(report.duan_delta, rel=1e-8)
        assert doc["eof"] == pytest.approx(report.eof, rel=1e-8)
        assert doc["reid_product"] == pytest.approx(report.reid_product, rel=1e-8)
        assert doc["overall_efficiency"] == pytest.approx(0.88491645, rel=1e-8)

    def test_budget_prediction(self, capsys, record_file):
        code, out, _ = run(
            capsys, ["analyze", "--record", record_file, "--budget", "--format", "json"]
        )
        doc = json.loads(out)
        assert code == 0
        assert doc["theory_db"] == pytest.approx(-7.493795078136193, rel=1e-8)
        assert doc["predicted_db"] == pytest.approx(-5.643603945617349, rel=1e-8)

    def test_csv_report(self, capsys, record_file):
        code, out, _ = run(capsys, ["analyze", "--record", record_file])
        lines = out.strip().splitlines()
        assert code == 0
        assert lines[0] == "# schema: 1"
        header, values = lines[1].split(","), lines[2].split(",")
        assert "duan_delta" in header
        assert len(header) == len(values)


class TestConfigAndPrecedence:
    def test_config_file_applies(self, capsys, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("sigma = 0.5\nomega = 0  # resonant\n")
        _, out_cfg, _ = run(
            capsys, ["spectrum", "--points", "2", "--config", str(cfg)]
        )
        _, out_flags, _ = run(
            capsys, ["spectrum", "--points", "2", "--sigma", "0.5", "--omega", "0"]
        )
        assert out_cfg == out_flags

    def test_flags_override_config(self, capsys, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("sigma=0.5\n")
        _, out, _ = run(
            capsys,
            ["spectrum", "--points", "2", "--config", str(cfg), "--sigma", "0.9"],
        )
        _, expected, _ = run(capsys, ["spectrum", "--points", "2", "--sigma", "0.9"])
        assert out == expected

    def test_unknown_key_rejected(self, capsys, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("sigm = 0.5\n")
        code, _, err = run(capsys, ["spectrum", "--config", str(cfg)])
        assert code == 3
        assert "unknown key" in err

    def test_non_numeric_value_rejected(self, capsys, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("sigma = strong\n")
        code, _, err = run(capsys, ["spectrum", "--config", str(cfg)])
        assert code == 3
        assert "not a number" in err


class TestOutputHandling:
    def test_out_writes_file(self, capsys, tmp_path):
        target = tmp_path / "spec.csv"
        code, out, _ = run(capsys, ["spectrum", "--points", "3", "--out", str(target)])
        assert code == 0
        assert out == ""
        assert target.read_text().startswith("# schema: 1\n")

    def test_byte_identical_reruns(self, capsys):
        argv = ["scan-coupling", "--steps", "5", "--format", "json"]
        _, first, _ = run(capsys, argv)
        _, second, _ = run(capsys, argv)
        assert first == second


class TestExitCodes:
    def test_missing_record_file(self, capsys, tmp_path):
        code, _, err = run(capsys, ["analyze", "--record", str(tmp_path / "no.json")])
        assert code == 2
        assert "file not found" in err

    def test_invalid_record_json(self, capsys, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text('{"squeezed_plus_db": -4.7,')
        code, _, err = run(capsys, ["analyze", "--record", str(bad)])
        assert code == 3
        assert "invalid JSON" in err

    def test_record_with_unknown_keys(self, capsys, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps({**RECORD, "detector_id": 7}))
        code, _, err = run(capsys, ["analyze", "--record", str(bad)])
        assert code == 3
        assert "unknown record keys" in err

    def test_domain_error(self, capsys):
        code, _, err = run(capsys, ["spectrum", "--sigma", "1.5"])
        assert code == 3
        assert "sigma" in err

    def test_unknown_flag(self, capsys):
        code, _, _ = run(capsys, ["spectrum", "--bogus"])
        assert code == 2

    def test_missing_subcommand(self, capsys):
        code, _, _ = run(capsys, [])
        assert code == 2

    def test_missing_config_file(self, capsys, tmp_path):
        code, _, err = run(capsys, ["spectrum", "--config", str(tmp_path / "no.cfg")])
        assert code == 2
        assert "file not found" in err
