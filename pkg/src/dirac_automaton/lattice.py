"""Spacetime lattice geometry: a checkerboard sublattice on a periodic circle.

Sites of time slice t sit at even multiples of the spacing eps for even t and
at odd multiples for odd t. Each slice holds m_x sites spaced 2*eps apart on a
circle of circumference 2*m_x*eps. Indices are stored as integers; physical
coordinates are always derived, never stored.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidSiteError

RIGHT = "right"
LEFT = "left"


@dataclass(frozen=True)
class LatticeConfig:
    """Geometry of the spacetime lattice."""

    eps: float = 1.0   # lattice spacing, shared by time and space
    m_x: int = 2       # spatial sites per time slice
    m_t: int = 1       # number of time steps (slices 0..m_t)

    def __post_init__(self):
        # normalize numpy scalars so reprs in text outputs stay plain decimals
        object.__setattr__(self, "eps", float(self.eps))
        object.__setattr__(self, "m_x", int(self.m_x))
        object.__setattr__(self, "m_t", int(self.m_t))
        if not self.eps > 0:
            raise ValueError(f"eps must be positive, got {self.eps}")
        if self.m_x < 2:
            raise ValueError(f"m_x must be at least 2, got {self.m_x}")
        if self.m_t < 1:
            raise ValueError(f"m_t must be at least 1, got {self.m_t}")

    @property
    def circumference(self) -> float:
        return 2.0 * self.m_x * self.eps

    def parity(self, t_index: int) -> int:
        return t_index & 1


@dataclass(frozen=True)
class SitePosition:
    """One site, addressed by time step and spatial index on its slice."""

    t_index: int
    x_index: int


def _check_site(site: SitePosition, cfg: LatticeConfig) -> None:
    if not 0 <= site.t_index <= cfg.m_t:
        raise InvalidSiteError(
            f"t_index {site.t_index} outside [0, {cfg.m_t}]")
    if not 0 <= site.x_index < cfg.m_x:
        raise InvalidSiteError(
            f"x_index {site.x_index} outside [0, {cfg.m_x})")


def physical_coordinate(site: SitePosition, cfg: LatticeConfig) -> float:
    """Physical position of a site, wrapped into [0, circumference).

    Even slices occupy even multiples of eps, odd slices odd multiples.
    """
    _check_site(site, cfg)
    par = cfg.parity(site.t_index)
    return ((2 * site.x_index + par) * cfg.eps) % cfg.circumference


def slice_coordinates(cfg: LatticeConfig, t_index: int) -> np.ndarray:
    """Physical coordinates of all m_x sites of one time slice."""
    if not 0 <= t_index <= cfg.m_t:
        raise InvalidSiteError(f"t_index {t_index} outside [0, {cfg.m_t}]")
    par = cfg.parity(t_index)
    return (2 * np.arange(cfg.m_x) + par) * cfg.eps


def shift(site: SitePosition, direction: str, cfg: LatticeConfig) -> SitePosition:
    """Advance one time step while moving one eps right or left.

    The index offset depends on the source slice parity: moving right from an
    even slice keeps the index (the target slice is offset by +eps already),
    moving right from an odd slice increments it, and mirrored for left.
    """
    _check_site(site, cfg)
    if site.t_index + 1 > cfg.m_t:
        raise InvalidSiteError(
            f"shift from t_index {site.t_index} leaves the time range")
    par = cfg.parity(site.t_index)
    if direction == RIGHT:
        dx = par
    elif direction == LEFT:
        dx = par - 1
    else:
        raise ValueError(f"direction must be {RIGHT!r} or {LEFT!r}")
    return SitePosition(site.t_index + 1, (site.x_index + dx) % cfg.m_x)
