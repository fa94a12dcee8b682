"""Experiment harness: EOC arithmetic, study tables, emission, config, CLI."""

import json
import math
import subprocess
import sys

import numpy as np
import pytest

from tevsolve.beyn import BeynConfig, ContourSpec
from tevsolve.errors import ConfigError, TrackingLost
from tevsolve.materials import MaterialParams
from tevsolve.studies import (
    BieSettings,
    DeterminantSettings,
    StudyConfig,
    compute_eoc,
    config_from_dict,
    converge_table,
    display,
    grid_table,
    read_table_csv,
    run_contour_grid,
    run_convergence_study,
    run_monotonicity_sweep,
    run_spectrum,
    spectrum_table,
    sweep_table,
    write_table,
)

EX34 = MaterialParams(4.0, -0.01, 2.0)


def disk_cfg(**kw):
    det = kw.pop("determinant", DeterminantSettings(m_max=5, k_range=(0.5, 4.0)))
    return StudyConfig(material=kw.pop("material", EX34), method="determinant",
                       determinant=det, **kw)


class TestComputeEoc:
    def test_exact_halving(self):
        assert compute_eoc([0.4, 0.2, 0.1]) == pytest.approx([1.0, 1.0])

    def test_no_improvement(self):
        assert compute_eoc([0.1, 0.1]) == pytest.approx([0.0])

    def test_nonpositive_gives_na(self):
        assert compute_eoc([0.1, 0.0, 0.2]) == [None, None]

    def test_disk_first_column_entry(self):
        # EOC of |k1(lambda_p) - 2.7741| across p = 1, 2 for the eta = 1, n = 4
        # disk: the published tables measure errors against the 4-decimal limit
        from tevsolve.disk import real_roots

        k = []
        for lam in (0.5, 0.75):
            eigs = real_roots(MaterialParams(4.0, 1.0, lam), m_max=4, k_range=(2.5, 3.5))
            k.append(eigs[0].k.real)
        eoc = compute_eoc([abs(v - 2.7741) for v in k])[0]
        assert eoc == pytest.approx(2.0346, abs=0.02)


class TestConvergenceStudy:
    def test_disk_below_first_row(self):
        cfg = disk_cfg(material=MaterialParams(4.0, 1.0, 1.0),
                       determinant=DeterminantSettings(m_max=5, k_range=(2.0, 4.0)))
        study = run_convergence_study(cfg, side="below", p_max=2)
        assert study.limits == pytest.approx([2.7741, 3.2908, 3.3122], abs=5e-5)
        row1 = study.rows[0]
        assert (row1.p, row1.lam) == (1, 0.5)
        assert row1.ks == pytest.approx([3.0394, 3.0561, 3.2494], abs=5e-5)
        assert row1.eocs == (None, None, None)
        # the k1/k2 branches cross between p = 1 and 2; the rows stay
        # rank-sorted and the crossing is noted
        assert "crossing" in study.rows[1].note

    def test_disk_above_last_row(self):
        cfg = disk_cfg(material=MaterialParams(1.0 / 3.0, -1.0, 1.0),
                       determinant=DeterminantSettings(m_max=5, k_range=(6.0, 8.5)))
        study = run_convergence_study(cfg, side="above", p_max=10)
        last = study.rows[-1]
        assert last.ks[0] == pytest.approx(6.9886, abs=5e-5)

    def test_tracking_lost_when_window_too_small(self):
        cfg = disk_cfg(determinant=DeterminantSettings(m_max=2, k_range=(0.6, 0.8)))
        with pytest.raises(TrackingLost):
            run_convergence_study(cfg, side="below", p_max=2)


class TestMonotonicitySweep:
    def test_disk_regime_a_n_sweep(self):
        cfg = disk_cfg(
            material=MaterialParams(0.25, -3.0, 2.0),
            determinant=DeterminantSettings(m_max=8, k_range=(3.0, 8.0)),
            sweep_field="n",
            sweep_values=(1 / 6, 1 / 5, 1 / 4, 1 / 3),
        )
        result = run_monotonicity_sweep(cfg)
        k1 = [r.ks[0] for r in result.rows]
        k2 = [r.ks[1] for r in result.rows]
        assert k1 == pytest.approx([4.8387, 4.9935, 5.6504, 6.5592], abs=5e-5)
        assert k2 == pytest.approx([4.8893, 5.6474, 6.0112, 7.3299], abs=5e-5)
        assert result.verdicts[0] == "ascending"
        assert result.verdicts[1] == "ascending"

    def test_outside_regime_warns(self, caplog):
        cfg = disk_cfg(sweep_field="eta", sweep_values=(-0.01, -0.02),
                       determinant=DeterminantSettings(m_max=3, k_range=(0.5, 2.5)))
        with caplog.at_level("WARNING"):
            run_monotonicity_sweep(cfg)
        assert any("outside regimes" in r.message for r in caplog.records)

    def test_incomplete_row(self):
        cfg = disk_cfg(
            material=MaterialParams(0.25, -3.0, 2.0),
            determinant=DeterminantSettings(m_max=8, k_range=(4.8, 5.0)),
            sweep_field="n", sweep_values=(1 / 6, 1 / 5),
        )
        result = run_monotonicity_sweep(cfg)
        assert not result.rows[1].complete

    def test_monotone_value_validation(self):
        with pytest.raises(ConfigError):
            disk_cfg(sweep_field="n", sweep_values=(0.3, 0.1, 0.2))


class TestSpectrum:
    def test_determinant_with_complex_region(self):
        cfg = disk_cfg(determinant=DeterminantSettings(
            m_max=0, k_range=(0.01, 10.0), complex_region=(0.0, 10.0, -1.0, 1.0)))
        rows = run_spectrum(cfg)
        assert len(rows) == 10
        assert rows[1].re_k == pytest.approx(2.203160, abs=5e-6)
        assert rows[1].im_k == pytest.approx(-0.290468, abs=5e-6)
        assert {r.source for r in rows} == {"determinant"}

    def test_disk_first_nine_with_multiplicity(self):
        cfg = disk_cfg(determinant=DeterminantSettings(m_max=8, k_range=(0.01, 2.5)))
        rows = run_spectrum(cfg)
        flat = []
        for r in rows:
            flat.extend([round(r.re_k, 4)] * r.multiplicity)
        assert flat[:9] == [0.0534, 0.7208, 0.7208, 1.2131, 1.2131, 1.6864, 1.6864,
                            2.1516, 2.1516]

    def test_bie_path_records_contour(self):
        cfg = StudyConfig(
            shape="circle:r=1", material=EX34, method="bie",
            bie=BieSettings(nodes=64, contours=(ContourSpec(3.5, 0.5, 24),),
                            beyn=BeynConfig()),
        )
        rows = run_spectrum(cfg)
        assert any(abs(r.re_k - 3.4567) < 2e-3 for r in rows)
        assert all(r.source.startswith("beyn:mu=") and r.mode_m == -1 for r in rows)


class TestEmission:
    def test_spectrum_csv_round_trip(self):
        cfg = disk_cfg(determinant=DeterminantSettings(m_max=3, k_range=(0.01, 2.5)))
        rows = run_spectrum(cfg)
        text = write_table(spectrum_table(rows), out=None, fmt="csv")
        parsed = read_table_csv(text)
        assert parsed[0] == ["re_k", "im_k", "multiplicity", "residual", "mode_m", "source"]
        for rec, row in zip(parsed[1:], rows):
            assert float(rec[0]) == row.re_k
            assert float(rec[1]) == row.im_k
            assert int(rec[2]) == row.multiplicity
            assert float(rec[3]) == row.residual
            assert int(rec[4]) == row.mode_m

    def test_converge_header_and_na(self):
        cfg = disk_cfg(material=MaterialParams(4.0, 1.0, 1.0),
                       determinant=DeterminantSettings(m_max=4, k_range=(2.0, 4.0)))
        study = run_convergence_study(cfg, side="below", p_max=2)
        table = converge_table(study)
        assert table[0] == ["p", "lambda", "k1", "eoc1", "k2", "eoc2", "k3", "eoc3"]
        assert table[1][3] == "N/A"
        assert float(table[1][2]) == study.rows[0].ks[0]

    def test_sweep_header(self):
        cfg = disk_cfg(
            material=MaterialParams(0.25, -3.0, 2.0),
            determinant=DeterminantSettings(m_max=6, k_range=(3.0, 7.0)),
            sweep_field="n", sweep_values=(1 / 6, 1 / 5),
        )
        table = sweep_table(run_monotonicity_sweep(cfg))
        assert table[0] == ["param", "k1", "k2", "k3", "verdict1", "verdict2", "verdict3"]

    def test_grid_table_and_json(self, tmp_path):
        cfg = disk_cfg(grid_region=(0.0, 1.0, -0.5, 0.5), grid_shape=(2, 2), grid_m=0)
        table = grid_table(run_contour_grid(cfg))
        assert table[0] == ["re_k", "im_k", "abs_dm"]
        assert len(table) == 5
        # |d0(0)| = |eta| at the origin corner
        corner = [row for row in table[1:] if float(row[0]) == 0.0 and float(row[1]) == -0.5]
        assert corner
        out = tmp_path / "g.json"
        write_table(table, str(out), "json")
        data = json.loads(out.read_text())
        assert data[0]["re_k"] == "0"

    def test_display_rounds_to_four_decimals(self):
        table = [["k1"], ["3.45670412345"]]
        assert "3.4567" in display(table)


class TestConfig:
    def test_full_document(self):
        cfg = config_from_dict(
            {
                "shape": "ellipse:a=1,b=1.2",
                "material": {"n": 4, "eta": -0.01, "lambda": 2},
                "method": "bie",
                "bie": {
                    "nodes": 240,
                    "contours": [{"mu": 0.5}, {"mu": "2.2+0.6i", "radius": 0.5,
                                               "quad_points": 48}],
                    "beyn": {"probe_columns": 24, "seed": 3},
                },
                "out": "x.csv",
                "format": "csv",
                "jobs": 2,
            }
        )
        assert cfg.bie.contours[1].center == 2.2 + 0.6j
        assert cfg.bie.contours[1].quad_points == 48
        assert cfg.bie.beyn.probe_columns == 24
        assert cfg.material.lam == 2.0

    def test_unknown_keys_rejected(self):
        with pytest.raises(ConfigError):
            config_from_dict({"shaep": "kite"})

    def test_determinant_requires_disk(self):
        with pytest.raises(ConfigError):
            StudyConfig(shape="kite", method="determinant")

    def test_material_requires_all_fields(self):
        with pytest.raises(ConfigError):
            config_from_dict({"material": {"n": 4, "eta": 1}})


class TestCli:
    def run_cli(self, *args):
        return subprocess.run(
            [sys.executable, "-m", "tevsolve.cli", *args],
            capture_output=True, text=True, timeout=600,
        )

    def test_spectrum_writes_csv(self, tmp_path):
        out = tmp_path / "spec.csv"
        proc = self.run_cli(
            "spectrum", "--method", "determinant", "--n", "4", "--eta", "-0.01",
            "--lambda", "2", "--m-max", "0", "--k-range", "0.01,10",
            "--out", str(out), "--format", "csv",
        )
        assert proc.returncode == 0, proc.stderr
        rows = read_table_csv(out.read_text())
        assert rows[0][0] == "re_k"
        assert float(rows[1][0]) == pytest.approx(0.053410, abs=1e-5)

    def test_config_file_and_override(self, tmp_path):
        cfg = tmp_path / "c.json"
        cfg.write_text(json.dumps({
            "shape": "circle:r=1",
            "material": {"n": 4, "eta": -0.01, "lambda": 2},
            "method": "determinant",
            "determinant": {"m_max": 0, "k_range": [0.01, 10]},
        }))
        out = tmp_path / "o.csv"
        proc = self.run_cli("spectrum", "--config", str(cfg), "--k-range", "3,7",
                            "--out", str(out))
        assert proc.returncode == 0, proc.stderr
        rows = read_table_csv(out.read_text())
        assert len(rows) == 1 + 2  # 3.4567 and 6.6065 only

    def test_config_error_exit_code(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text('{"method": "magic"}')
        proc = self.run_cli("spectrum", "--config", str(bad))
        assert proc.returncode == 2

    def test_numerical_failure_exit_code(self):
        proc = self.run_cli(
            "converge", "--method", "determinant", "--n", "4", "--eta", "1",
            "--lambda", "1", "--k-range", "0.6,0.8", "--m-max", "2", "--pmax", "2",
            "--side", "below",
        )
        assert proc.returncode == 3

    def test_partial_results_exit_code(self, tmp_path):
        proc = self.run_cli(
            "sweep", "--method", "determinant", "--n", "0.25", "--eta", "-3",
            "--lambda", "2", "--k-range", "4.8,5.0", "--m-max", "8",
            "--sweep-field", "n", "--sweep-values", "0.1667,0.2",
            "--out", str(tmp_path / "s.csv"),
        )
        assert proc.returncode == 4

    def test_selftest_runs(self):
        proc = self.run_cli("selftest")
        assert proc.returncode == 0, proc.stdout + proc.stderr
        assert "[PASS]" in proc.stdout and "[FAIL]" not in proc.stdout
