import csv
import io
import json

import numpy as np
import pytest

from cyclosense.cli import load_settings, main
from cyclosense.montecarlo import trial_stream
from cyclosense.samplefile import SampleFileError, read_samples, write_samples
from cyclosense.signals import NoiseUncertaintyModel, OfdmParams, synthesize_observation


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


class TestCalibrate:
    def test_schema_with_few_trials(self, capsys):
        code, out, _ = run(capsys, "calibrate", "--trials", "100", "--thresholds", "1,9")
        assert code == 0
        assert out.splitlines()[0] == "threshold,pf_theory,pf_sim_single,pf_sim_multi,ci_low,ci_high"
        table = rows(out)
        assert [r["threshold"] for r in table] == ["1", "9"]
        assert float(table[1]["pf_theory"]) == 0.1

    def test_default_row_at_nine(self, capsys):
        code, out, _ = run(capsys, "calibrate", "--trials", "20000", "--thresholds", "9")
        assert code == 0
        (row,) = rows(out)
        assert float(row["pf_theory"]) == 0.1
        lo, hi = float(row["ci_low"]), float(row["ci_high"])
        assert lo <= 0.1 <= hi
        assert abs(float(row["pf_sim_single"]) - 0.1) <= 0.01

    def test_empty_thresholds_is_error(self, capsys):
        code, _, err = run(capsys, "calibrate", "--thresholds", "")
        assert code != 0
        assert "thresholds" in err


class TestSweeps:
    def test_compare_schema_and_detectors(self, capsys):
        code, out, _ = run(capsys, "compare", "--trials", "40", "--snr-grid=-40", "--modulations", "QPSK", "--n-ofdm-grid", "4")
        assert code == 0
        assert out.splitlines()[0] == "snr_db,modulation,detector,pd,ci_low,ci_high"
        assert {r["detector"] for r in rows(out)} == {"multi5", "single1", "baseline-ratio", "energy"}

    def test_cp_sweep_schema(self, capsys):
        code, out, _ = run(capsys, "cp-sweep", "--trials", "20", "--n-ofdm-grid", "2", "--detectors", "multi5")
        assert code == 0
        table = rows(out)
        assert out.splitlines()[0] == "cp_ratio,delta_db,detector,pd,ci_low,ci_high"
        assert [r["cp_ratio"] for r in table] == ["1/32", "1/32", "1/16", "1/16", "1/8", "1/8", "1/4", "1/4"]

    def test_non_integer_cp_rejected(self, capsys):
        code, _, err = run(capsys, "cp-sweep", "--cp-ratios", "1/3", "--trials", "5")
        assert code != 0
        assert "not an integer" in err

    def test_symbols_sweep_zero_symbols_rejected(self, capsys):
        code, _, err = run(capsys, "symbols-sweep", "--n-ofdm-grid", "0", "--trials", "5")
        assert code != 0

    def test_symbols_sweep_schema(self, capsys):
        code, out, _ = run(capsys, "symbols-sweep", "--trials", "10", "--n-ofdm-grid", "2,3", "--delta-grid", "1", "--detectors", "energy")
        assert code == 0
        assert out.splitlines()[0] == "n_ofdm,delta_db,detector,pd,ci_low,ci_high"
        assert [r["n_ofdm"] for r in rows(out)] == ["2", "3"]

    def test_output_file_and_thread_independence(self, capsys, tmp_path):
        args = ["compare", "--trials", "60", "--snr-grid=-8,-4", "--n-ofdm-grid", "4", "--seed", "5"]
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert main(args + ["--threads", "1", "--output", str(a)]) == 0
        assert main(args + ["--threads", "3", "--output", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()
        assert main(args + ["--seed", "6", "--output", str(b)]) == 0
        assert a.read_bytes() != b.read_bytes()


class TestConfig:
    def test_sections_and_precedence(self, tmp_path):
        cfg = tmp_path / "run.ini"
        cfg.write_text("[common]\ntrials = 77\nbeta = 0.3\n\n[compare]\ntrials = 88\nsnr_grid = -6, -3\n")
        s = load_settings("compare", str(cfg), {"trials": None})
        assert s["trials"] == 88 and s["beta"] == 0.3 and s["snr_grid"] == (-6.0, -3.0)
        s = load_settings("compare", str(cfg), {"trials": 5})
        assert s["trials"] == 5
        s = load_settings("calibrate", str(cfg), {})
        assert s["trials"] == 77 and s["n_fft"] == 128

    def test_unknown_key(self, tmp_path):
        cfg = tmp_path / "bad.ini"
        cfg.write_text("[common]\ntrails = 5\n")
        with pytest.raises(ValueError, match="unknown config key"):
            load_settings("compare", str(cfg), {})

    def test_beta_on_cyclic_frequency_rejected(self):
        # alpha = 1/576 for k = 1
        with pytest.raises(ValueError):
            load_settings("compare", None, {"beta": 1 / 576})

    def test_equal_lags_rejected(self):
        with pytest.raises(ValueError):
            load_settings("compare", None, {"tau": 300, "tau_bar": 300})

    def test_default_geometry_and_detector_settings(self):
        s = load_settings("compare", None, {})
        assert s["n_fft"] == 512 and s["cp_ratios"] == (__import__("fractions").Fraction(1, 8),)
        assert s["trials"] == 20000 and s["target_pf"] == 0.1
        assert s["k_list"] == (-2, -1, 0, 1, 2) and s["beta"] == 0.412


class TestSampleFiles:
    @pytest.mark.parametrize("name", ["x.iq", "x.csv"])
    def test_round_trip(self, tmp_path, name):
        x = np.array([1 + 2j, -0.5 + 1e-9j, 3.25 - 4j])
        write_samples(tmp_path / name, x)
        np.testing.assert_array_equal(read_samples(tmp_path / name), x)

    def test_raw_layout_is_interleaved_little_endian(self, tmp_path):
        np.array([1.0, 2.0, 3.0, 4.0], dtype="<f8").tofile(tmp_path / "s.bin")
        np.testing.assert_array_equal(read_samples(tmp_path / "s.bin"), [1 + 2j, 3 + 4j])

    def test_odd_raw_length(self, tmp_path):
        np.array([1.0, 2.0, 3.0], dtype="<f8").tofile(tmp_path / "s.bin")
        with pytest.raises(SampleFileError):
            read_samples(tmp_path / "s.bin")

    def test_bad_csv(self, tmp_path):
        (tmp_path / "s.csv").write_text("i,q\n1,2\n3\n")
        with pytest.raises(SampleFileError):
            read_samples(tmp_path / "s.csv")


class TestDetect:
    def _write(self, tmp_path, snr_db, hypothesis, seed, n_sym=32):
        obs = synthesize_observation(
            hypothesis, OfdmParams(n_ofdm_symbols=n_sym), snr_db, NoiseUncertaintyModel(1.0, 1.0), trial_stream(seed, 0)
        )
        path = tmp_path / f"obs{seed}.iq"
        write_samples(path, obs.samples)
        return path

    def test_high_snr_frame_is_h1(self, capsys, tmp_path):
        path = self._write(tmp_path, 0.0, "H1", 1)
        code, out, _ = run(capsys, "detect", str(path))
        assert code == 0
        report = json.loads(out)
        assert report["decision"] == "H1"
        assert report["threshold"] == pytest.approx(9.0)
        assert report["n_samples"] == 18432

    def test_noise_files_false_alarm_rate(self, capsys, tmp_path):
        decisions = []
        for seed in range(200):
            path = self._write(tmp_path, 0.0, "H0", seed, n_sym=4)
            code, out, _ = run(capsys, "detect", str(path), "--target-pf", "0.1")
            assert code == 0
            decisions.append(json.loads(out)["decision"])
            path.unlink()
        # 200 Bernoulli(0.9) draws: 3 sd ~ 0.064
        assert abs(decisions.count("H0") / 200 - 0.9) < 0.065

    def test_energy_detector_option(self, capsys, tmp_path):
        path = self._write(tmp_path, 0.0, "H1", 2, n_sym=2)
        code, out, _ = run(capsys, "detect", str(path), "--detector", "energy")
        assert code == 0 and json.loads(out)["detector"] == "energy"

    def test_short_file_is_length_error(self, capsys, tmp_path):
        write_samples(tmp_path / "short.csv", np.ones(10, complex))
        code, _, err = run(capsys, "detect", str(tmp_path / "short.csv"))
        assert code != 0
        assert "too short" in err

    def test_missing_file(self, capsys, tmp_path):
        code, _, err = run(capsys, "detect", str(tmp_path / "nope.iq"))
        assert code != 0
