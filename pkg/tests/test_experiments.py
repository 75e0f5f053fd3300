"""Experiment configuration, runs, reports, and reproducibility."""

import numpy as np
import pytest

from dirac_automaton import LatticeConfig
from dirac_automaton.experiments import (
    ExperimentConfig,
    inspect_field,
    parse_config,
    run_experiment,
    tapered_gaussian,
)


def small_config(**overrides):
    base = dict(m_x=100, m_t=80, n_t_block=20, n_x_block=20,
                counts_row=[3, 1, 4, 1, 5], steps=80, snapshot_every=40,
                center=30, sigma=8, support_blocks=(1, 2), trajectories=50,
                coarse_width=10, seed=4)
    base.update(overrides)
    return ExperimentConfig(**base)


class TestConfigText:
    def test_echo_parse_round_trip(self):
        cfg = small_config()
        back = parse_config(cfg.echo())
        assert back.echo() == cfg.echo()

    def test_parse_mean_count_form(self):
        text = """
[lattice]
m_x = 100
m_t = 200

[disorder]
n_t_block = 100
n_x_block = 20
mean_count = 20
v_over_m = -0.05 0.2 -0.05 0.2 0.0

[initial]
type = delta-basis

[run]
steps = 200
"""
        cfg = parse_config(text)
        assert list(cfg.counts_row) == [19, 24, 19, 24, 20]

    def test_validate_rejects_bad_geometry(self):
        with pytest.raises(Exception):
            small_config(m_x=90).validate()  # 90 not divisible by 20

    def test_unknown_initial_type_rejected(self):
        with pytest.raises(Exception):
            small_config(initial_type="bogus").validate()


class TestInitialState:
    def test_tapered_gaussian_support_is_exact(self):
        lattice = LatticeConfig(1.0, 100, 80)
        wave = tapered_gaussian(lattice, center=30.0, sigma=8.0, momentum=0.05,
                                support=(0, 40))
        chi = wave.chi
        assert np.sum(np.abs(chi) ** 2) == pytest.approx(1.0, abs=1e-12)
        assert np.all(chi[40:] == 0)
        assert np.any(np.abs(chi[:40]) > 0)

    def test_taper_is_continuous(self):
        lattice = LatticeConfig(1.0, 100, 80)
        wave = tapered_gaussian(lattice, center=30.0, sigma=8.0, momentum=0.0,
                                support=(0, 40))
        chi = wave.chi
        jumps = np.abs(np.diff(np.abs(chi)))
        assert np.max(jumps) < 0.2 * np.max(np.abs(chi))


class TestRunExperiment:
    def test_deterministic_at_fixed_seed(self, tmp_path):
        out_a = tmp_path / "a"
        out_b = tmp_path / "b"
        rep_a, _, _ = run_experiment(small_config(), out_dir=out_a)
        rep_b, _, _ = run_experiment(small_config(), out_dir=out_b)
        assert (out_a / "snapshots.csv").read_text() == \
               (out_b / "snapshots.csv").read_text()
        assert (out_a / "disorder.txt").read_text() == \
               (out_b / "disorder.txt").read_text()
        pairs_a = dict(rep_a.snapshots[-1][1])
        pairs_b = dict(rep_b.snapshots[-1][1])
        for key in pairs_a:
            assert pairs_a[key].l1 == pairs_b[key].l1

    def test_seed_override_changes_disorder(self, tmp_path):
        rep_a, field_a, _ = run_experiment(small_config(), out_dir=tmp_path / "a")
        rep_b, field_b, _ = run_experiment(small_config(), seed=5,
                                           out_dir=tmp_path / "b")
        assert rep_a.seed != rep_b.seed
        layout_a = [tuple(field_a.events(t)) for t in range(80)]
        layout_b = [tuple(field_b.events(t)) for t in range(80)]
        assert layout_a != layout_b

    def test_threads_flag_does_not_change_results(self, tmp_path):
        rep_a, _, tables_a = run_experiment(small_config(), threads=1)
        rep_b, _, tables_b = run_experiment(small_config(), threads=4)
        pa = tables_a["automaton"][80].p
        pb = tables_b["automaton"][80].p
        assert np.array_equal(pa, pb)

    def test_trajectories_track_wave(self):
        rep, _, _ = run_experiment(small_config())
        assert rep.trajectory_max_dev is not None
        assert rep.trajectory_max_dev < 1e-9

    def test_report_files_written(self, tmp_path):
        rep, _, _ = run_experiment(small_config(), out_dir=tmp_path)
        for name in ("report.txt", "report.csv", "snapshots.csv", "disorder.txt"):
            assert (tmp_path / name).exists(), name
        text = (tmp_path / "report.txt").read_text()
        assert "run-report v1" in text
        assert "[config]" in text

    def test_snapshot_times_cover_requested_grid(self):
        rep, _, tables = run_experiment(small_config())
        times = [t for t, _ in rep.snapshots]
        assert times == [0, 40, 80]


class TestInspect:
    def test_inspect_reports_density_and_strength(self):
        _, field, _ = run_experiment(small_config())
        text = inspect_field(field, 20, 20)
        assert "eps_m" in text and "dt_m" in text
        assert "total events: 56" in text
