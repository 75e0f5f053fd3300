"""Random scattering-event fields and their dictionary to mass and potential.

A disorder field is a fixed set of spacetime points, at most one per site.
Per block of n_t_block steps times n_x_block sites, the time-averaged event
count per site nhat fixes the coarse potential v_bar = pi * nhat / (2 * dt)
with dt = n_t_block * eps. The mass is the spatial mean of v_bar and
V = v_bar - m, so per-block counts and the (m, V) pair are two views of the
same data.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    GeometryError,
    InfeasiblePlanError,
    InvalidSiteError,
)
from .lattice import LatticeConfig

_FIELD_MAGIC = "# disorder-field v1"


@dataclass(frozen=True)
class DisorderPlan:
    """Target event counts on a block grid, plus the placement seed."""

    n_t_block: int
    n_x_block: int
    counts: np.ndarray   # shape (time blocks, space blocks), integers
    seed: int = 0

    def __post_init__(self):
        if self.n_t_block < 1 or self.n_x_block < 1:
            raise ValueError("block sizes must be positive")
        counts = np.asarray(self.counts, dtype=np.int64)
        if counts.ndim != 2:
            raise ValueError("counts must be a 2d array (time x space blocks)")
        if np.any(counts < 0):
            raise InfeasiblePlanError("negative event count")
        if np.any(counts > self.n_t_block * self.n_x_block):
            raise InfeasiblePlanError(
                "count exceeds block capacity "
                f"{self.n_t_block * self.n_x_block}")
        counts.flags.writeable = False
        object.__setattr__(self, "counts", counts)

    @classmethod
    def static(cls, n_t_block: int, n_x_block: int, counts_per_space_block,
               n_time_blocks: int, seed: int = 0) -> "DisorderPlan":
        """Plan with the same space-block counts in every time block."""
        row = np.asarray(counts_per_space_block, dtype=np.int64)
        return cls(n_t_block, n_x_block,
                   np.tile(row, (n_time_blocks, 1)), seed)


class DisorderField:
    """Immutable set of scattering points, stored per time slice.

    Events at slice t act on the step from t to t+1, so a field over a
    lattice with m_t steps holds m_t slices (0..m_t-1).
    """

    def __init__(self, cfg: LatticeConfig, events_by_slice, seed: int | None = None):
        self.cfg = cfg
        self.seed = seed
        slices = []
        if len(events_by_slice) != cfg.m_t:
            raise GeometryError(
                f"need {cfg.m_t} event slices, got {len(events_by_slice)}")
        for t, ev in enumerate(events_by_slice):
            arr = np.unique(np.asarray(ev, dtype=np.int64))
            if len(arr) != len(np.asarray(ev)):
                raise InvalidSiteError(f"duplicate event in slice {t}")
            if arr.size and (arr.min() < 0 or arr.max() >= cfg.m_x):
                raise InvalidSiteError(f"event index out of range in slice {t}")
            arr.flags.writeable = False
            slices.append(arr)
        self._slices = tuple(slices)

    @classmethod
    def empty(cls, cfg: LatticeConfig) -> "DisorderField":
        return cls(cfg, [[] for _ in range(cfg.m_t)])

    def events(self, t_index: int) -> np.ndarray:
        """Sorted event positions on slice t_index."""
        if not 0 <= t_index < self.cfg.m_t:
            raise InvalidSiteError(
                f"t_index {t_index} outside [0, {self.cfg.m_t})")
        return self._slices[t_index]

    def mask(self, t_index: int) -> np.ndarray:
        """Boolean occupation of slice t_index, length m_x."""
        m = np.zeros(self.cfg.m_x, dtype=bool)
        m[self.events(t_index)] = True
        return m

    @property
    def total_events(self) -> int:
        return int(sum(s.size for s in self._slices))

    def __eq__(self, other):
        if not isinstance(other, DisorderField):
            return NotImplemented
        return (self.cfg == other.cfg and self.seed == other.seed
                and all(np.array_equal(a, b)
                        for a, b in zip(self._slices, other._slices)))


@dataclass(frozen=True)
class PotentialProfile:
    """Mass plus per-site potential; v_bar = mass + v must stay nonnegative."""

    mass: float
    v: np.ndarray   # per-site potential, length m_x

    def __post_init__(self):
        v = np.asarray(self.v, dtype=np.float64)
        v.flags.writeable = False
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "mass", float(self.mass))
        if self.mass < 0:
            raise ValueError("mass must be nonnegative")
        if np.any(self.mass + v < -1e-12):
            raise ValueError("v_bar = mass + v must be nonnegative")

    @property
    def m_x(self) -> int:
        return self.v.size

    @property
    def v_bar(self) -> np.ndarray:
        return self.mass + self.v

    @property
    def density(self) -> np.ndarray:
        """Mean scattering events per unit time at each site."""
        return self.v_bar / np.pi

    @classmethod
    def homogeneous(cls, mass: float, m_x: int) -> "PotentialProfile":
        return cls(mass, np.zeros(m_x))

    @classmethod
    def from_v_bar(cls, v_bar) -> "PotentialProfile":
        """Split a nonnegative v_bar(x) into its spatial mean and remainder."""
        v_bar = np.asarray(v_bar, dtype=np.float64)
        m = float(v_bar.mean())
        return cls(m, v_bar - m)


def block_counts(field: DisorderField, n_t_block: int, n_x_block: int) -> np.ndarray:
    """Event counts per (time block, space block); blocks must tile exactly."""
    cfg = field.cfg
    if cfg.m_t % n_t_block or cfg.m_x % n_x_block:
        raise GeometryError(
            f"blocks {n_t_block}x{n_x_block} do not tile "
            f"{cfg.m_t}x{cfg.m_x}")
    nt, nx = cfg.m_t // n_t_block, cfg.m_x // n_x_block
    out = np.zeros((nt, nx), dtype=np.int64)
    for t in range(cfg.m_t):
        ev = field.events(t)
        if ev.size:
            np.add.at(out[t // n_t_block], ev // n_x_block, 1)
    return out


def synthesize_disorder(plan: DisorderPlan, cfg: LatticeConfig) -> DisorderField:
    """Place the planned counts uniformly without replacement per block.

    Deterministic for a given seed: blocks are visited in row-major order with
    a single generator, and slot draws are sorted before being committed.
    """
    nt_blocks = cfg.m_t // plan.n_t_block
    nx_blocks = cfg.m_x // plan.n_x_block
    if (cfg.m_t % plan.n_t_block or cfg.m_x % plan.n_x_block
            or plan.counts.shape != (nt_blocks, nx_blocks)):
        raise GeometryError(
            f"plan grid {plan.counts.shape} with blocks "
            f"{plan.n_t_block}x{plan.n_x_block} does not tile lattice "
            f"{cfg.m_t}x{cfg.m_x}")
    rng = np.random.default_rng(plan.seed)
    slots = plan.n_t_block * plan.n_x_block
    per_slice: list[list[int]] = [[] for _ in range(cfg.m_t)]
    for bi in range(nt_blocks):
        for bj in range(nx_blocks):
            n = int(plan.counts[bi, bj])
            if n == 0:
                continue
            chosen = np.sort(rng.choice(slots, size=n, replace=False))
            t_local, x_local = np.divmod(chosen, plan.n_x_block)
            for tl, xl in zip(t_local, x_local):
                per_slice[bi * plan.n_t_block + int(tl)].append(
                    bj * plan.n_x_block + int(xl))
    return DisorderField(cfg, per_slice, seed=plan.seed)


def coarse_grained_potential(field: DisorderField, interval_steps: int,
                             block_width: int) -> PotentialProfile:
    """Potential implied by per-block event counts, averaged over the field.

    nhat(x), the mean events per site per interval of interval_steps steps,
    fixes v_bar(x) = pi * nhat(x) / (2 * dt) with dt = interval_steps * eps.
    The profile is constant within each block of block_width sites.
    """
    cfg = field.cfg
    if interval_steps < 1 or cfg.m_t % interval_steps:
        raise GeometryError(
            f"interval of {interval_steps} steps does not divide m_t={cfg.m_t}")
    if block_width < 1 or cfg.m_x % block_width:
        raise GeometryError(
            f"block width {block_width} does not divide m_x={cfg.m_x}")
    counts = block_counts(field, interval_steps, block_width)
    n_intervals = cfg.m_t // interval_steps
    dt = interval_steps * cfg.eps
    nhat = counts.sum(axis=0) / (n_intervals * block_width)
    v_bar_blocks = np.pi * nhat / (2.0 * dt)
    v_bar = np.repeat(v_bar_blocks, block_width)
    return PotentialProfile.from_v_bar(v_bar)


def plan_from_potential(profile: PotentialProfile, cfg: LatticeConfig,
                        n_t_block: int, n_x_block: int,
                        seed: int = 0) -> DisorderPlan:
    """Invert the dictionary: per-block counts realizing a target potential.

    Counts are rounded to integers, so the realized v_bar is quantized with
    granularity pi / (2 * dt * n_x_block); constant across time blocks.
    """
    if cfg.m_t % n_t_block or cfg.m_x % n_x_block:
        raise GeometryError(
            f"blocks {n_t_block}x{n_x_block} do not tile "
            f"{cfg.m_t}x{cfg.m_x}")
    if profile.m_x != cfg.m_x:
        raise GeometryError(
            f"profile has {profile.m_x} sites, lattice {cfg.m_x}")
    if np.any(profile.v_bar < -1e-12):
        raise InfeasiblePlanError("negative v_bar")
    dt = n_t_block * cfg.eps
    v_bar_blocks = profile.v_bar.reshape(-1, n_x_block).mean(axis=1)
    counts_row = np.rint(2.0 * n_x_block * dt * v_bar_blocks / np.pi).astype(np.int64)
    if np.any(counts_row > n_t_block * n_x_block):
        raise InfeasiblePlanError("potential too large for block capacity")
    return DisorderPlan.static(n_t_block, n_x_block, counts_row,
                               cfg.m_t // n_t_block, seed)


def save_field(field: DisorderField, path) -> None:
    """Write a field as line-oriented text, one 't x' pair per event."""
    cfg = field.cfg
    lines = [_FIELD_MAGIC,
             f"# eps {cfg.eps!r} m_x {cfg.m_x} m_t {cfg.m_t}",
             f"# seed {field.seed if field.seed is not None else 'none'}"]
    for t in range(cfg.m_t):
        for x in field.events(t):
            lines.append(f"{t} {x}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def load_field(path) -> DisorderField:
    """Read a field written by save_field; round trips bit exactly."""
    with open(path) as fh:
        lines = [ln.rstrip("\n") for ln in fh if ln.strip()]
    if not lines or lines[0] != _FIELD_MAGIC:
        raise ValueError(f"{path}: not a disorder-field file")
    head = lines[1].split()
    if head[:2] != ["#", "eps"]:
        raise ValueError(f"{path}: malformed header")
    eps, m_x, m_t = float(head[2]), int(head[4]), int(head[6])
    seed_tok = lines[2].split()[2]
    seed = None if seed_tok == "none" else int(seed_tok)
    cfg = LatticeConfig(eps=eps, m_x=m_x, m_t=m_t)
    per_slice: list[list[int]] = [[] for _ in range(m_t)]
    for ln in lines[3:]:
        t_s, x_s = ln.split()
        per_slice[int(t_s)].append(int(x_s))
    return DisorderField(cfg, per_slice, seed=seed)
