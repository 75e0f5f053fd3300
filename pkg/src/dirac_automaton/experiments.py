"""Configured end-to-end runs: disorder synthesis, evolution, comparisons.

Configs are flat INI text with sections [lattice], [disorder], [initial],
[run] and [output]. Sizes are eps-free integers; runs fix eps = 1, so masses
and momenta come out in inverse lattice units.
"""

from __future__ import annotations

import configparser
import io
import time
import warnings
from dataclasses import dataclass, field as dc_field
from pathlib import Path

import numpy as np

from .automaton import (
    GAMMA_R,
    ETA_PLUS,
    RealWave,
    TrajectoryState,
    decode_wave,
    encode_wave,
    evolve_trajectories,
    evolve_wave,
    load_wave,
)
from .disorder import (
    DisorderField,
    DisorderPlan,
    block_counts,
    coarse_grained_potential,
    save_field,
    synthesize_disorder,
)
from .errors import GeometryError
from .lattice import LatticeConfig, slice_coordinates
from .observables import (
    ComparisonReport,
    OccupationDistribution,
    SmoothingKernel,
    coarse_grain,
    compare_distributions,
    occupation_from_complex,
    occupation_from_schrodinger,
    occupation_from_trajectories,
    occupation_probabilities,
)
from .quantum import (
    DiracSolver,
    MomentumGrid,
    SchrodingerSolver,
    SchrodingerWave,
    nonrel_embed,
)

_SOLVERS = ("automaton", "dirac", "schrodinger")
_INITIAL_TYPES = ("gaussian-schrodinger", "delta-basis", "custom-file")


@dataclass
class ExperimentConfig:
    """Parsed run configuration; see parse_config for the text format."""

    m_x: int = 1000
    m_t: int = 10000
    n_t_block: int = 100
    n_x_block: int = 100
    counts_row: np.ndarray = dc_field(
        default_factory=lambda: np.array([95, 95, 95, 95, 120,
                                          95, 95, 95, 95, 120]))
    seed: int = 0
    initial_type: str = "gaussian-schrodinger"
    center: float = 400.0
    sigma: float = 120.0
    momentum: float | None = None
    momentum_over_m: float = 0.1
    support_blocks: tuple[int, ...] = (1, 2, 3, 4)
    taper_sites: int | None = None
    initial_file: str | None = None
    basis_gamma: int = GAMMA_R
    basis_eta: int = ETA_PLUS
    solvers: tuple[str, ...] = ("automaton", "schrodinger")
    steps: int = 10000
    snapshot_every: int = 100
    coarse_width: int = 100
    regions: int = 10
    trajectories: int = 0
    out_dir: str = "out"
    formats: tuple[str, ...] = ("csv", "txt")

    def validate(self) -> None:
        if self.m_t % self.n_t_block or self.m_x % self.n_x_block:
            raise GeometryError("plan blocks do not tile the lattice")
        if len(self.counts_row) != self.m_x // self.n_x_block:
            raise GeometryError(
                f"need {self.m_x // self.n_x_block} space-block counts, "
                f"got {len(self.counts_row)}")
        if self.initial_type not in _INITIAL_TYPES:
            raise ValueError(f"unknown initial type {self.initial_type!r}")
        for s in self.solvers:
            if s not in _SOLVERS:
                raise ValueError(f"unknown solver {s!r}")
        if self.steps > self.m_t:
            raise GeometryError(f"steps {self.steps} exceed m_t {self.m_t}")
        if self.support_blocks:
            blocks = sorted(self.support_blocks)
            if blocks != list(range(blocks[0], blocks[-1] + 1)):
                raise GeometryError("support blocks must be contiguous")
            if blocks[0] < 1 or blocks[-1] > len(self.counts_row):
                raise GeometryError("support block outside the block grid")
        if self.snapshot_every < 1:
            raise ValueError("snapshot_every must be positive")

    def echo(self) -> str:
        """Render back as config text (canonical form)."""
        cp = configparser.ConfigParser()
        cp["lattice"] = {"m_x": str(self.m_x), "m_t": str(self.m_t)}
        dis = {"n_t_block": str(self.n_t_block),
               "n_x_block": str(self.n_x_block),
               "counts": " ".join(str(int(c)) for c in self.counts_row),
               "seed": str(self.seed)}
        cp["disorder"] = dis
        ini = {"type": self.initial_type}
        if self.initial_type == "gaussian-schrodinger":
            ini["center"] = repr(float(self.center))
            ini["sigma"] = repr(float(self.sigma))
            if self.momentum is not None:
                ini["momentum"] = repr(float(self.momentum))
            else:
                ini["momentum_over_m"] = repr(float(self.momentum_over_m))
            ini["support_blocks"] = " ".join(str(b) for b in self.support_blocks)
            if self.taper_sites is not None:
                ini["taper_sites"] = str(self.taper_sites)
        elif self.initial_type == "delta-basis":
            ini["center"] = str(int(self.center))
            ini["gamma"] = "RL"[self.basis_gamma]
            ini["eta"] = "+-"[self.basis_eta]
        elif self.initial_file is not None:
            ini["file"] = self.initial_file
        cp["initial"] = ini
        cp["run"] = {"solvers": " ".join(self.solvers),
                     "steps": str(self.steps),
                     "snapshot_every": str(self.snapshot_every),
                     "coarse_grain_width": str(self.coarse_width),
                     "regions": str(self.regions),
                     "trajectories": str(self.trajectories)}
        cp["output"] = {"directory": self.out_dir,
                        "formats": " ".join(self.formats)}
        buf = io.StringIO()
        cp.write(buf)
        return buf.getvalue()


def parse_config(text: str) -> ExperimentConfig:
    cp = configparser.ConfigParser()
    cp.read_string(text)
    cfg = ExperimentConfig()
    lat = cp["lattice"]
    cfg.m_x = lat.getint("m_x")
    cfg.m_t = lat.getint("m_t")
    dis = cp["disorder"]
    cfg.n_t_block = dis.getint("n_t_block")
    cfg.n_x_block = dis.getint("n_x_block")
    if dis.get("counts", None):
        cfg.counts_row = np.array([int(v) for v in dis["counts"].split()])
    else:
        mean_count = dis.getfloat("mean_count")
        rel = np.array([float(v) for v in dis["v_over_m"].split()])
        cfg.counts_row = np.rint(mean_count * (1.0 + rel)).astype(np.int64)
    cfg.seed = dis.getint("seed", fallback=0)
    ini = cp["initial"] if cp.has_section("initial") else {}
    if ini:
        cfg.initial_type = ini.get("type", cfg.initial_type)
        if "center" in ini:
            cfg.center = float(ini["center"])
        if "sigma" in ini:
            cfg.sigma = float(ini["sigma"])
        if "momentum" in ini:
            cfg.momentum = float(ini["momentum"])
        if "momentum_over_m" in ini:
            cfg.momentum_over_m = float(ini["momentum_over_m"])
        if "support_blocks" in ini:
            cfg.support_blocks = tuple(int(v) for v in ini["support_blocks"].split())
        if "taper_sites" in ini:
            cfg.taper_sites = int(ini["taper_sites"])
        if "file" in ini:
            cfg.initial_file = ini["file"]
        if "gamma" in ini:
            cfg.basis_gamma = "RL".index(ini["gamma"].strip())
        if "eta" in ini:
            cfg.basis_eta = "+-".index(ini["eta"].strip())
    if cp.has_section("run"):
        run = cp["run"]
        if "solvers" in run:
            cfg.solvers = tuple(run["solvers"].split())
        cfg.steps = run.getint("steps", fallback=cfg.m_t)
        cfg.snapshot_every = run.getint("snapshot_every",
                                        fallback=cfg.n_t_block)
        cfg.coarse_width = run.getint("coarse_grain_width",
                                      fallback=cfg.n_x_block)
        cfg.regions = run.getint("regions",
                                 fallback=cfg.m_x // cfg.n_x_block)
        cfg.trajectories = run.getint("trajectories", fallback=0)
    else:
        cfg.steps = cfg.m_t
        cfg.snapshot_every = cfg.n_t_block
        cfg.coarse_width = cfg.n_x_block
        cfg.regions = cfg.m_x // cfg.n_x_block
    if cp.has_section("output"):
        out = cp["output"]
        cfg.out_dir = out.get("directory", cfg.out_dir)
        if "formats" in out:
            cfg.formats = tuple(out["formats"].split())
    cfg.validate()
    return cfg


def load_config(path) -> ExperimentConfig:
    return parse_config(Path(path).read_text())


def tapered_gaussian(cfg: LatticeConfig, center: float, sigma: float,
                     momentum: float, support: tuple[int, int],
                     taper_sites: int | None = None) -> SchrodingerWave:
    """Gaussian packet windowed to [lo, hi) sites with raised-cosine tapers.

    Support stays exactly zero outside the window; the taper keeps the
    spectrum fast-decaying where a hard cut would not.
    """
    lo, hi = support
    if not 0 <= lo < hi <= cfg.m_x:
        raise GeometryError(f"support [{lo}, {hi}) outside [0, {cfg.m_x})")
    x = slice_coordinates(cfg, 0)
    half = cfg.circumference / 2
    d = (x - center + half) % cfg.circumference - half
    env = np.exp(-d ** 2 / (4.0 * sigma ** 2))
    width = hi - lo
    if taper_sites is None:
        taper_sites = max(1, width // 10)
    taper_sites = min(taper_sites, width // 2)
    window = np.zeros(cfg.m_x)
    window[lo:hi] = 1.0
    ramp = np.sin(np.linspace(0, np.pi / 2, taper_sites, endpoint=False)) ** 2
    window[lo:lo + taper_sites] = ramp
    window[hi - taper_sites:hi] = ramp[::-1]
    chi = env * window * np.exp(1j * momentum * x)
    chi /= np.sqrt(np.sum(np.abs(chi) ** 2))
    return SchrodingerWave(chi, eps=cfg.eps)


@dataclass
class RunReport:
    """Everything a run produced apart from the big per-site tables."""

    seed: int
    config_text: str
    snapshots: list[tuple[int, dict[str, ComparisonReport]]]
    automaton_seconds: float = 0.0
    steps_per_second: float = 0.0
    wall_seconds: float = 0.0
    trajectory_seconds: float | None = None
    trajectory_max_dev: float | None = None
    threads: int = 1
    warnings_seen: list[str] = dc_field(default_factory=list)
    files: dict[str, str] = dc_field(default_factory=dict)
    eps_m: float = 0.0
    dt_m: float = 0.0

    def to_text(self) -> str:
        lines = ["# run-report v1",
                 f"seed = {self.seed}",
                 f"threads = {self.threads}",
                 f"eps_m = {self.eps_m!r}",
                 f"dt_m = {self.dt_m!r}",
                 f"automaton_seconds = {self.automaton_seconds!r}",
                 f"steps_per_second = {self.steps_per_second!r}",
                 f"wall_seconds = {self.wall_seconds!r}"]
        if self.trajectory_seconds is not None:
            lines.append(f"trajectory_seconds = {self.trajectory_seconds!r}")
            lines.append(f"trajectory_max_dev = {self.trajectory_max_dev!r}")
        for w in self.warnings_seen:
            lines.append(f"warning = {w}")
        for name, path in sorted(self.files.items()):
            lines.append(f"file_{name} = {path}")
        for t_index, pairs in self.snapshots:
            for pair, rep in sorted(pairs.items()):
                lines.append("")
                lines.append(f"[snapshot t={t_index} {pair}]")
                lines.append(rep.to_kv_text())
        lines.append("")
        lines.append("[config]")
        lines.extend(self.config_text.rstrip().splitlines())
        return "\n".join(lines) + "\n"

    def snapshots_csv(self) -> str:
        cols = ["t_index", "pair", "l1", "l2", "max_abs",
                "reflected_a", "reflected_b", "transmitted_a", "transmitted_b"]
        rows = [",".join(cols)]
        for t_index, pairs in self.snapshots:
            for pair, rep in sorted(pairs.items()):
                vals = [str(t_index), pair, repr(rep.l1), repr(rep.l2),
                        repr(rep.max_abs)]
                for attr in ("reflected_a", "reflected_b",
                             "transmitted_a", "transmitted_b"):
                    v = getattr(rep, attr)
                    vals.append("" if v is None else repr(v))
                rows.append(",".join(vals))
        return "\n".join(rows) + "\n"


def _initial_states(config: ExperimentConfig, cfg: LatticeConfig, mass: float):
    """Build (chi, phi, q) along the single normative chain."""
    if config.initial_type == "gaussian-schrodinger":
        if mass <= 0:
            raise ValueError("gaussian-schrodinger initial state needs m > 0; "
                             "use delta-basis for free fields")
        lo = (min(config.support_blocks) - 1) * config.n_x_block
        hi = max(config.support_blocks) * config.n_x_block
        p0 = (config.momentum if config.momentum is not None
              else config.momentum_over_m * mass)
        chi = tapered_gaussian(cfg, config.center, config.sigma, p0,
                               (lo, hi), config.taper_sites)
        phi = nonrel_embed(chi, mass)
        return chi, phi, encode_wave(phi, cfg)
    if config.initial_type == "delta-basis":
        q = RealWave.delta(cfg, config.basis_gamma, config.basis_eta,
                           int(config.center))
        return None, decode_wave(q), q
    q = load_wave(config.initial_file)
    if q.cfg.m_x != cfg.m_x:
        raise GeometryError("initial wave file does not match the lattice")
    q = RealWave(q.q, cfg, q.t_index)
    return None, decode_wave(q), q


def run_experiment(config: ExperimentConfig, out_dir=None, seed=None,
                   snapshot_every=None, threads: int = 1):
    """Run the configured experiment; returns (RunReport, field, tables).

    tables maps solver name to {t_index: OccupationDistribution} with raw
    (not coarse-grained) occupations. Distances in the report are computed on
    coarse-grained distributions. The engine is vectorized; `threads` is
    recorded for bookkeeping and outputs do not depend on it.
    """
    t_begin = time.perf_counter()
    config.validate()
    if seed is not None:
        config.seed = int(seed)
    if snapshot_every is not None:
        config.snapshot_every = int(snapshot_every)
    if out_dir is not None:
        config.out_dir = str(out_dir)
    cfg = LatticeConfig(eps=1.0, m_x=config.m_x, m_t=config.m_t)
    plan = DisorderPlan.static(config.n_t_block, config.n_x_block,
                               config.counts_row,
                               config.m_t // config.n_t_block, config.seed)
    field = synthesize_disorder(plan, cfg)
    profile = coarse_grained_potential(field, config.n_t_block,
                                       config.n_x_block)
    dt = config.n_t_block * cfg.eps

    caught: list[str] = []
    with warnings.catch_warnings(record=True) as wrec:
        warnings.simplefilter("always")
        chi0, phi0, q0 = _initial_states(config, cfg, profile.mass)

        snap_times = sorted(set(range(0, config.steps + 1,
                                      config.snapshot_every)) | {config.steps})
        tables: dict[str, dict[int, OccupationDistribution]] = {
            s: {} for s in config.solvers}

        auto_seconds = 0.0
        if "automaton" in config.solvers:
            wave = q0
            t0 = time.perf_counter()
            prev = 0
            for t in snap_times:
                wave = evolve_wave(wave, field, t - prev)
                prev = t
                tables["automaton"][t] = occupation_probabilities(wave)
            auto_seconds = time.perf_counter() - t0

        traj_seconds = None
        traj_dev = None
        if config.trajectories:
            t0 = time.perf_counter()
            ens = TrajectoryState.full_basis(q0)
            ens = evolve_trajectories(ens, field, config.steps)
            traj_seconds = time.perf_counter() - t0
            p_traj = occupation_from_trajectories(ens)
            if "automaton" in config.solvers:
                traj_dev = float(np.max(np.abs(
                    p_traj.p - tables["automaton"][config.steps].p)))

        if "dirac" in config.solvers:
            grid = MomentumGrid(cfg.eps, cfg.m_x)
            solver = DiracSolver(profile, grid)
            if solver.method == "dense":
                for t in snap_times:
                    phi_t = solver.evolve(phi0, t * cfg.eps)
                    tables["dirac"][t] = occupation_from_complex(phi_t, t)
            else:
                phi_t, prev = phi0, 0
                for t in snap_times:
                    phi_t = solver.evolve(phi_t, (t - prev) * cfg.eps)
                    prev = t
                    tables["dirac"][t] = occupation_from_complex(phi_t, t)

        if "schrodinger" in config.solvers:
            if chi0 is None:
                raise ValueError("schrodinger solver needs a "
                                 "gaussian-schrodinger initial state")
            ssolver = SchrodingerSolver(profile, cfg.eps, cfg.m_x)
            for t in snap_times:
                chi_t = ssolver.evolve(chi0, t * cfg.eps)
                tables["schrodinger"][t] = occupation_from_schrodinger(chi_t, t)
        caught = [str(w.message) for w in wrec]

    kernel = SmoothingKernel.triangular(config.coarse_width)
    pair_names = [("automaton", "dirac"), ("automaton", "schrodinger"),
                  ("dirac", "schrodinger")]
    snapshots = []
    for t in snap_times:
        pairs = {}
        smooth = {s: coarse_grain(tables[s][t], kernel)
                  for s in config.solvers}
        for a, b in pair_names:
            if a in smooth and b in smooth:
                pairs[f"{a}_vs_{b}"] = compare_distributions(
                    smooth[a], smooth[b], n_regions=config.regions,
                    label=f"{a}_vs_{b}")
        snapshots.append((t, pairs))

    report = RunReport(
        seed=config.seed,
        config_text=config.echo(),
        snapshots=snapshots,
        automaton_seconds=auto_seconds,
        steps_per_second=(config.steps / auto_seconds
                          if auto_seconds > 0 else 0.0),
        trajectory_seconds=traj_seconds,
        trajectory_max_dev=traj_dev,
        threads=threads,
        warnings_seen=caught,
        eps_m=float(profile.mass * cfg.eps),
        dt_m=float(profile.mass * dt),
    )

    out = Path(config.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    field_path = out / "disorder.txt"
    save_field(field, field_path)
    report.files["disorder"] = str(field_path)
    if "csv" in config.formats:
        csv_path = out / "snapshots.csv"
        _write_snapshot_table(csv_path, config, snap_times, tables)
        report.files["snapshots"] = str(csv_path)
        rep_csv = out / "report.csv"
        rep_csv.write_text(report.snapshots_csv())
        report.files["report_csv"] = str(rep_csv)
    report.wall_seconds = time.perf_counter() - t_begin
    if "txt" in config.formats:
        rep_path = out / "report.txt"
        rep_path.write_text(report.to_text())
        report.files["report"] = str(rep_path)
    return report, field, tables


def _write_snapshot_table(path, config, snap_times, tables) -> None:
    cols = ("p_auto", "p_dirac", "p_schrod")
    keys = ("automaton", "dirac", "schrodinger")
    with open(path, "w") as fh:
        fh.write("t_index,x_index," + ",".join(cols) + "\n")
        for t in snap_times:
            per = [tables[k][t].p if k in tables else None for k in keys]
            for x in range(config.m_x):
                vals = "" if per[0] is None else repr(per[0][x])
                for p in per[1:]:
                    vals += "," + ("" if p is None else repr(p[x]))
                fh.write(f"{t},{x},{vals}\n")


def inspect_field(field: DisorderField, n_t_block: int, n_x_block: int) -> str:
    """Human-readable block summary with the implied mass and potential."""
    cfg = field.cfg
    counts = block_counts(field, n_t_block, n_x_block)
    profile = coarse_grained_potential(field, n_t_block, n_x_block)
    dt = n_t_block * cfg.eps
    lines = [f"disorder field: m_x={cfg.m_x} m_t={cfg.m_t} eps={cfg.eps!r} "
             f"seed={field.seed}",
             f"block grid: {n_t_block} steps x {n_x_block} sites -> "
             f"{counts.shape[0]} x {counts.shape[1]} blocks",
             f"total events: {field.total_events}",
             f"eps_m = {float(profile.mass * cfg.eps)!r}",
             f"dt_m = {float(profile.mass * dt)!r}"]
    mean_counts = counts.mean(axis=0)
    v_blocks = profile.v.reshape(-1, n_x_block).mean(axis=1)
    lines.append("block  mean_count  v_over_m")
    for j, (c, v) in enumerate(zip(mean_counts, v_blocks), start=1):
        rel = v / profile.mass if profile.mass > 0 else 0.0
        lines.append(f"{j:5d}  {c:10.3f}  {rel:+.6f}")
    spread = counts.max(axis=0) - counts.min(axis=0)
    lines.append("time variation (max-min count per space block): "
                 + " ".join(str(int(s)) for s in spread))
    return "\n".join(lines) + "\n"
