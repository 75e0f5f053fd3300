"""Occupation distributions, coarse graining and distribution comparisons.

Position occupations are probabilities per site, summed over species. The
momentum expectation is computed from the wave through the complex pairing of
the eta components; it is a wave-level observable and is deliberately not
offered per trajectory.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .automaton import RealWave, ComplexWave, TrajectoryState, decode_wave
from .errors import DimensionMismatchError, GeometryError, OversizedKernelError
from .quantum import MomentumGrid, SchrodingerWave, momentum_operator

_SUM_TOL = 1e-10


@dataclass(frozen=True)
class OccupationDistribution:
    """Nonnegative per-site probabilities that sum to one."""

    p: np.ndarray
    t_index: int = 0

    def __post_init__(self):
        p = np.ascontiguousarray(self.p, dtype=np.float64)
        if p.ndim != 1:
            raise DimensionMismatchError("distribution must be one-dimensional")
        if np.any(p < -1e-12):
            raise ValueError("negative probability")
        total = float(p.sum())
        if abs(total - 1.0) > _SUM_TOL:
            raise ValueError(f"probabilities sum to {total}, not 1")
        p.flags.writeable = False
        object.__setattr__(self, "p", p)

    @property
    def m_x(self) -> int:
        return self.p.size


def occupation_probabilities(wave: RealWave) -> OccupationDistribution:
    return OccupationDistribution(wave.probabilities(), wave.t_index)


def occupation_from_complex(phi: ComplexWave,
                            t_index: int = 0) -> OccupationDistribution:
    return OccupationDistribution(phi.probabilities(), t_index)


def occupation_from_schrodinger(chi: SchrodingerWave,
                                t_index: int = 0) -> OccupationDistribution:
    return OccupationDistribution(chi.probabilities(), t_index)


def occupation_from_trajectories(state: TrajectoryState) -> OccupationDistribution:
    return OccupationDistribution(state.site_probabilities(), state.t_index)


def momentum_expectation(wave: RealWave, grid: MomentumGrid) -> float:
    """<P> of the real wave, evaluated through the complex pairing.

    Equals the real quadratic form with the momentum operator represented on
    the eta blocks as [[S, A], [-A, S]] (S, A the symmetric and antisymmetric
    real parts); the plain per-component form would miss the cross-eta piece.
    """
    if grid.m_x != wave.cfg.m_x or grid.eps != wave.cfg.eps:
        raise DimensionMismatchError("wave and grid disagree")
    phi = decode_wave(wave).phi
    op = momentum_operator(grid)
    return float(sum(np.real(np.vdot(phi[g], op @ phi[g])) for g in (0, 1)))


@dataclass(frozen=True)
class SmoothingKernel:
    """Nonnegative normalized window with explicit integer offsets."""

    offsets: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        off = np.ascontiguousarray(self.offsets, dtype=np.int64)
        w = np.ascontiguousarray(self.weights, dtype=np.float64)
        if off.shape != w.shape or off.ndim != 1:
            raise DimensionMismatchError("kernel arrays disagree")
        if np.any(w < 0):
            raise ValueError("kernel weights must be nonnegative")
        total = w.sum()
        if not total > 0:
            raise ValueError("kernel must have positive mass")
        w = w / total
        off.flags.writeable = False
        w.flags.writeable = False
        object.__setattr__(self, "offsets", off)
        object.__setattr__(self, "weights", w)

    @property
    def support(self) -> int:
        return int(self.offsets.max() - self.offsets.min() + 1)

    @classmethod
    def delta(cls) -> "SmoothingKernel":
        return cls(np.array([0]), np.array([1.0]))

    @classmethod
    def triangular(cls, width: int) -> "SmoothingKernel":
        """Triangular window whose base spans about `width` sites."""
        if width < 1:
            raise ValueError("width must be positive")
        h = max(1, width // 2)
        off = np.arange(-h + 1, h)
        return cls(off, (h - np.abs(off)).astype(float))

    @classmethod
    def uniform(cls, width: int) -> "SmoothingKernel":
        """Flat window of exactly `width` sites (right-heavy when even)."""
        if width < 1:
            raise ValueError("width must be positive")
        off = np.arange(width) - (width - 1) // 2
        return cls(off, np.ones(width))


def coarse_grain(dist: OccupationDistribution,
                 kernel: SmoothingKernel) -> OccupationDistribution:
    """Circular convolution with the kernel; total probability is preserved."""
    if kernel.support > dist.m_x:
        raise OversizedKernelError(
            f"kernel support {kernel.support} exceeds circle of {dist.m_x}")
    out = np.zeros_like(dist.p)
    for off, w in zip(kernel.offsets, kernel.weights):
        out += w * np.roll(dist.p, off)
    return OccupationDistribution(out, dist.t_index)


@dataclass
class ComparisonReport:
    """Distances and region summaries between two distributions."""

    l1: float
    l2: float
    max_abs: float
    t_index: int = 0
    label: str = ""
    regions_a: np.ndarray | None = None
    regions_b: np.ndarray | None = None
    reflected_a: float | None = None
    reflected_b: float | None = None
    transmitted_a: float | None = None
    transmitted_b: float | None = None

    def to_kv_text(self) -> str:
        lines = []
        if self.label:
            lines.append(f"label = {self.label}")
        lines.append(f"t_index = {self.t_index}")
        lines.append(f"l1 = {self.l1!r}")
        lines.append(f"l2 = {self.l2!r}")
        lines.append(f"max_abs = {self.max_abs!r}")
        if self.regions_a is not None:
            lines.append("regions_a = " + " ".join(repr(v) for v in self.regions_a))
            lines.append("regions_b = " + " ".join(repr(v) for v in self.regions_b))
        for name in ("reflected_a", "reflected_b",
                     "transmitted_a", "transmitted_b"):
            val = getattr(self, name)
            if val is not None:
                lines.append(f"{name} = {val!r}")
        return "\n".join(lines)


def compare_distributions(a: OccupationDistribution, b: OccupationDistribution,
                          n_regions: int | None = 10,
                          reflected_regions=None,
                          transmitted_regions=None,
                          label: str = "") -> ComparisonReport:
    """Distances between two distributions on the same grid.

    With n_regions set, also integrate both over that many equal blocks; the
    default reflected/transmitted split follows the ten-block layout of the
    tunneling experiment (regions 1..4 and 6..9, one-based).
    """
    if a.m_x != b.m_x:
        raise DimensionMismatchError(
            f"distributions on {a.m_x} and {b.m_x} sites")
    diff = a.p - b.p
    report = ComparisonReport(
        l1=float(np.abs(diff).sum()),
        l2=float(np.sqrt(np.sum(diff ** 2))),
        max_abs=float(np.max(np.abs(diff))),
        t_index=a.t_index,
        label=label,
    )
    if n_regions:
        if a.m_x % n_regions:
            raise GeometryError(
                f"{n_regions} regions do not tile {a.m_x} sites")
        ra = a.p.reshape(n_regions, -1).sum(axis=1)
        rb = b.p.reshape(n_regions, -1).sum(axis=1)
        report.regions_a, report.regions_b = ra, rb
        if reflected_regions is None and n_regions == 10:
            reflected_regions = (0, 1, 2, 3)
        if transmitted_regions is None and n_regions == 10:
            transmitted_regions = (5, 6, 7, 8)
        if reflected_regions is not None:
            report.reflected_a = float(ra[list(reflected_regions)].sum())
            report.reflected_b = float(rb[list(reflected_regions)].sum())
        if transmitted_regions is not None:
            report.transmitted_a = float(ra[list(transmitted_regions)].sum())
            report.transmitted_b = float(rb[list(transmitted_regions)].sum())
    return report
