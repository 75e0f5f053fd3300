"""Command line round trips.

Each subcommand is driven through ``main(argv)`` so the tests exercise the
same argument parsing users see, and everything runs against temporary
directories so repeated runs cannot contaminate each other.
"""

import numpy as np
import pytest

from dirac_automaton.automaton import RealWave, save_wave
from dirac_automaton.cli import build_parser, main
from dirac_automaton.disorder import DisorderPlan, load_field, synthesize_disorder
from dirac_automaton.experiments import ExperimentConfig
from dirac_automaton.lattice import LatticeConfig


def parse_kv(text):
    fields = {}
    for line in text.splitlines():
        key, sep, value = line.partition(" = ")
        if sep:
            fields[key.strip()] = value.strip()
    return fields


def write_config(tmp_path, **overrides):
    config = ExperimentConfig(
        m_x=100,
        m_t=80,
        n_t_block=20,
        n_x_block=20,
        counts_row=[3, 1, 4, 1, 5],
        seed=4,
        initial_type="gaussian-schrodinger",
        center=30.0,
        sigma=8.0,
        momentum_over_m=0.05,
        support_blocks=(1, 2),
        solvers=("automaton", "schrodinger"),
        steps=80,
        snapshot_every=40,
        coarse_width=10,
        regions=5,
        trajectories=0,
        out_dir=str(tmp_path / "out"),
    )
    for key, value in overrides.items():
        setattr(config, key, value)
    path = tmp_path / "experiment.ini"
    path.write_text(config.echo())
    return path, config


class TestParser:
    def test_requires_subcommand(self):
        with pytest.raises(SystemExit):
            build_parser().parse_args([])

    def test_unknown_subcommand_rejected(self):
        with pytest.raises(SystemExit):
            build_parser().parse_args(["frobnicate"])

    def test_run_accepts_all_documented_flags(self, tmp_path):
        args = build_parser().parse_args(
            ["run", "--config", "a.ini", "--seed", "7", "--out", "o",
             "--threads", "4", "--snapshot-every", "25"])
        assert args.seed == 7
        assert args.threads == 4
        assert args.snapshot_every == 25


class TestGenerateDisorder:
    def test_writes_loadable_field(self, tmp_path, capsys):
        config_path, config = write_config(tmp_path)
        assert main(["generate-disorder", "--config", str(config_path)]) == 0
        out = capsys.readouterr().out
        field_path = tmp_path / "out" / "disorder.txt"
        assert field_path.exists()
        assert str(field_path) in out

        field = load_field(field_path)
        cfg = LatticeConfig(eps=1.0, m_x=config.m_x, m_t=config.m_t)
        plan = DisorderPlan.static(config.n_t_block, config.n_x_block,
                                   config.counts_row,
                                   config.m_t // config.n_t_block,
                                   config.seed)
        expected = synthesize_disorder(plan, cfg)
        assert field.total_events == expected.total_events
        for t in range(config.m_t):
            assert np.array_equal(field.events(t), expected.events(t))

    def test_seed_flag_changes_layout(self, tmp_path, capsys):
        config_path, _ = write_config(tmp_path)
        main(["generate-disorder", "--config", str(config_path)])
        baseline = (tmp_path / "out" / "disorder.txt").read_text()
        main(["generate-disorder", "--config", str(config_path),
              "--seed", "99"])
        reseeded = (tmp_path / "out" / "disorder.txt").read_text()
        assert baseline != reseeded
        capsys.readouterr()

    def test_out_flag_redirects(self, tmp_path, capsys):
        config_path, _ = write_config(tmp_path)
        target = tmp_path / "elsewhere"
        main(["generate-disorder", "--config", str(config_path),
              "--out", str(target)])
        assert (target / "disorder.txt").exists()
        capsys.readouterr()


class TestInspect:
    def test_summarizes_saved_field(self, tmp_path, capsys):
        config_path, _ = write_config(tmp_path)
        main(["generate-disorder", "--config", str(config_path)])
        capsys.readouterr()
        assert main(["inspect", str(tmp_path / "out" / "disorder.txt"),
                     "--n-t-block", "20", "--n-x-block", "20"]) == 0
        out = capsys.readouterr().out
        assert "total events: 56" in out
        assert "eps_m" in out and "dt_m" in out


class TestRun:
    def test_reports_files_and_l1(self, tmp_path, capsys):
        config_path, _ = write_config(tmp_path)
        assert main(["run", "--config", str(config_path)]) == 0
        out = capsys.readouterr().out
        assert "steps/s" in out
        assert "l1=" in out
        out_dir = tmp_path / "out"
        for name in ("report.txt", "report.csv", "snapshots.csv",
                     "disorder.txt"):
            assert (out_dir / name).exists()

    def test_byte_identical_reruns(self, tmp_path, capsys):
        config_path, _ = write_config(tmp_path)
        main(["run", "--config", str(config_path),
              "--out", str(tmp_path / "a")])
        main(["run", "--config", str(config_path),
              "--out", str(tmp_path / "b")])
        capsys.readouterr()
        csv_a = (tmp_path / "a" / "report.csv").read_bytes()
        csv_b = (tmp_path / "b" / "report.csv").read_bytes()
        assert csv_a == csv_b

    def test_thread_count_does_not_change_results(self, tmp_path, capsys):
        config_path, _ = write_config(tmp_path, trajectories=40)
        main(["run", "--config", str(config_path),
              "--out", str(tmp_path / "serial"), "--threads", "1"])
        main(["run", "--config", str(config_path),
              "--out", str(tmp_path / "pooled"), "--threads", "4"])
        capsys.readouterr()
        csv_a = (tmp_path / "serial" / "report.csv").read_bytes()
        csv_b = (tmp_path / "pooled" / "report.csv").read_bytes()
        assert csv_a == csv_b

    def test_seed_flag_changes_disorder(self, tmp_path, capsys):
        config_path, _ = write_config(tmp_path)
        main(["run", "--config", str(config_path),
              "--out", str(tmp_path / "a")])
        main(["run", "--config", str(config_path),
              "--out", str(tmp_path / "b"), "--seed", "77"])
        capsys.readouterr()
        assert ((tmp_path / "a" / "disorder.txt").read_text()
                != (tmp_path / "b" / "disorder.txt").read_text())

    def test_snapshot_cadence_override(self, tmp_path, capsys):
        config_path, _ = write_config(tmp_path)
        main(["run", "--config", str(config_path),
              "--out", str(tmp_path / "dense"), "--snapshot-every", "20"])
        capsys.readouterr()
        rows = (tmp_path / "dense" / "snapshots.csv").read_text().splitlines()
        times = sorted({int(line.split(",")[0]) for line in rows[1:]})
        assert times == [0, 20, 40, 60, 80]


class TestCompare:
    def make_wave_file(self, tmp_path, name, x_index):
        cfg = LatticeConfig(eps=1.0, m_x=40, m_t=16)
        wave = RealWave.delta(cfg, gamma=0, eta=0, x_index=x_index)
        path = tmp_path / name
        save_wave(wave, path)
        return path

    def test_self_comparison_is_zero(self, tmp_path, capsys):
        path = self.make_wave_file(tmp_path, "a.txt", 10)
        assert main(["compare", str(path), str(path)]) == 0
        out = capsys.readouterr().out
        fields = parse_kv(out)
        assert float(fields["l1"]) == 0.0

    def test_disjoint_deltas_have_l1_two(self, tmp_path, capsys):
        a = self.make_wave_file(tmp_path, "a.txt", 5)
        b = self.make_wave_file(tmp_path, "b.txt", 25)
        main(["compare", str(a), str(b), "--regions", "4"])
        out = capsys.readouterr().out
        fields = parse_kv(out)
        assert float(fields["l1"]) == pytest.approx(2.0)

    def test_coarse_width_reduces_l1_of_neighbours(self, tmp_path, capsys):
        a = self.make_wave_file(tmp_path, "a.txt", 10)
        b = self.make_wave_file(tmp_path, "b.txt", 12)
        main(["compare", str(a), str(b)])
        sharp = capsys.readouterr().out
        main(["compare", str(a), str(b), "--coarse-width", "8"])
        smoothed = capsys.readouterr().out
        assert (float(parse_kv(smoothed)["l1"])
                < float(parse_kv(sharp)["l1"]))
