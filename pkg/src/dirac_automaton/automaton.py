"""Exact automaton engine: signed-permutation steps on the four-species wave.

Species are labeled (gamma, eta): gamma 0/1 for right/left movers, eta 0/1 for
the particle/hole pair that carries the complex structure. The flat basis
index is (gamma * 2 + eta) * m_x + x.

One step is scatter-then-shift. At a site holding a disorder point the two
directions swap before shifting, with a single sign flip:

    source (R, eta, y) -> (L, eta, y - eps)   sign +1
    source (L, eta, y) -> (R, eta, y + eps)   sign -1

and at empty sites movers keep their direction, sign +1. The eta components
never mix; pairing them as phi = (1+i)/sqrt2 * q_plus + (1-i)/sqrt2 * q_minus
makes the same step act as a complex unitary on phi.

Step operators are built per source slice because the index offset of a shift
depends on the slice parity (see lattice module).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatchError,
    NormalizationError,
    RangeOverflowError,
)
from .disorder import DisorderField
from .lattice import LatticeConfig

GAMMA_R, GAMMA_L = 0, 1
ETA_PLUS, ETA_MINUS = 0, 1

_GAMMA_CHARS = ("R", "L")
_ETA_CHARS = ("+", "-")

_WAVE_MAGIC = "# wave-snapshot v1"

_NORM_TOL = 1e-12
_ENCODE_TOL = 1e-8


@dataclass(frozen=True)
class RealWave:
    """Unit real wave q[gamma, eta, x] on one time slice."""

    q: np.ndarray
    cfg: LatticeConfig
    t_index: int = 0

    def __post_init__(self):
        q = np.ascontiguousarray(self.q, dtype=np.float64)
        if q.shape != (2, 2, self.cfg.m_x):
            raise DimensionMismatchError(
                f"wave shape {q.shape} != (2, 2, {self.cfg.m_x})")
        if not 0 <= self.t_index <= self.cfg.m_t:
            raise ValueError(f"t_index {self.t_index} outside lattice range")
        norm = float(np.sum(q * q))
        if abs(norm - 1.0) > _NORM_TOL:
            raise NormalizationError(f"wave norm {norm} != 1")
        q.flags.writeable = False
        object.__setattr__(self, "q", q)

    @classmethod
    def delta(cls, cfg: LatticeConfig, gamma: int, eta: int, x_index: int,
              t_index: int = 0, sign: int = 1) -> "RealWave":
        q = np.zeros((2, 2, cfg.m_x))
        q[gamma, eta, x_index] = float(sign)
        return cls(q, cfg, t_index)

    @classmethod
    def from_amplitudes(cls, q, cfg: LatticeConfig, t_index: int = 0,
                        normalize: bool = False) -> "RealWave":
        q = np.asarray(q, dtype=np.float64)
        if normalize:
            q = q / np.sqrt(np.sum(q * q))
        return cls(q, cfg, t_index)

    def norm(self) -> float:
        return float(np.sum(self.q * self.q))

    def probabilities(self) -> np.ndarray:
        """Per-site probability, summed over species."""
        return np.sum(self.q * self.q, axis=(0, 1))


@dataclass(frozen=True)
class ComplexWave:
    """Two-component complex wave phi[gamma, x] on the slice grid."""

    phi: np.ndarray
    eps: float = 1.0

    def __post_init__(self):
        phi = np.ascontiguousarray(self.phi, dtype=np.complex128)
        if phi.ndim != 2 or phi.shape[0] != 2:
            raise DimensionMismatchError(
                f"complex wave shape {phi.shape} != (2, m_x)")
        norm = float(np.sum(np.abs(phi) ** 2))
        if abs(norm - 1.0) > 1e-10:
            raise NormalizationError(f"complex wave norm {norm} != 1")
        phi.flags.writeable = False
        object.__setattr__(self, "phi", phi)

    @property
    def m_x(self) -> int:
        return self.phi.shape[1]

    def probabilities(self) -> np.ndarray:
        return np.sum(np.abs(self.phi) ** 2, axis=0)


@dataclass(frozen=True)
class SignedPermutation:
    """Unique-jump step operator for one source slice.

    target[s] is the flat destination index of source basis index s and
    sign[s] the carried sign; exactly one source feeds each destination.
    """

    m_x: int
    t_index: int
    target: np.ndarray
    sign: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "target",
                           np.ascontiguousarray(self.target, dtype=np.int64))
        object.__setattr__(self, "sign",
                           np.ascontiguousarray(self.sign, dtype=np.int8))
        self.target.flags.writeable = False
        self.sign.flags.writeable = False

    def validate(self) -> None:
        n = 4 * self.m_x
        if self.target.shape != (n,) or self.sign.shape != (n,):
            raise DimensionMismatchError("operator arrays have wrong length")
        if not np.array_equal(np.sort(self.target), np.arange(n)):
            raise ValueError("target is not a permutation")
        if not np.all(np.abs(self.sign) == 1):
            raise ValueError("signs must be +-1")
        src_eta = (np.arange(n) // self.m_x) % 2
        if not np.array_equal((self.target // self.m_x) % 2, src_eta):
            raise ValueError("operator mixes eta species")

    def inverse(self) -> "SignedPermutation":
        inv = np.empty_like(self.target)
        inv[self.target] = np.arange(self.target.size)
        return SignedPermutation(self.m_x, self.t_index, inv,
                                 self.sign[inv])


def build_step_operator(field: DisorderField, t_index: int) -> SignedPermutation:
    """Step operator for the move from slice t_index to t_index + 1."""
    cfg = field.cfg
    m_x = cfg.m_x
    par = cfg.parity(t_index)
    x = np.arange(m_x)
    to_right = (x + par) % m_x        # index shift of a right-mover
    to_left = (x + par - 1) % m_x     # index shift of a left-mover
    scat = field.mask(t_index)

    # per (gamma, x) source: destination direction, site and sign
    dest_gamma = np.empty((2, m_x), dtype=np.int64)
    dest_x = np.empty((2, m_x), dtype=np.int64)
    sgn = np.ones((2, m_x), dtype=np.int8)
    dest_gamma[GAMMA_R] = np.where(scat, GAMMA_L, GAMMA_R)
    dest_x[GAMMA_R] = np.where(scat, to_left, to_right)
    dest_gamma[GAMMA_L] = np.where(scat, GAMMA_R, GAMMA_L)
    dest_x[GAMMA_L] = np.where(scat, to_right, to_left)
    sgn[GAMMA_L] = np.where(scat, -1, 1)

    target = np.empty(4 * m_x, dtype=np.int64)
    sign = np.empty(4 * m_x, dtype=np.int8)
    for gamma in (GAMMA_R, GAMMA_L):
        for eta in (ETA_PLUS, ETA_MINUS):
            s = (gamma * 2 + eta) * m_x
            target[s:s + m_x] = (dest_gamma[gamma] * 2 + eta) * m_x + dest_x[gamma]
            sign[s:s + m_x] = sgn[gamma]
    return SignedPermutation(m_x, t_index, target, sign)


def apply_step(wave: RealWave, op: SignedPermutation) -> RealWave:
    if wave.cfg.m_x != op.m_x:
        raise DimensionMismatchError(
            f"wave on {wave.cfg.m_x} sites, operator on {op.m_x}")
    if wave.t_index != op.t_index:
        raise DimensionMismatchError(
            f"wave at slice {wave.t_index}, operator for slice {op.t_index}")
    flat = wave.q.reshape(-1)
    out = np.empty_like(flat)
    out[op.target] = op.sign * flat
    return RealWave(out.reshape(2, 2, op.m_x), wave.cfg, wave.t_index + 1)


def evolve_wave(wave: RealWave, field: DisorderField, steps: int) -> RealWave:
    """Apply `steps` consecutive step operators starting at the wave's slice."""
    if wave.cfg != field.cfg:
        raise DimensionMismatchError("wave and field on different lattices")
    if steps < 0:
        raise ValueError("steps must be nonnegative")
    if wave.t_index + steps > field.cfg.m_t:
        raise RangeOverflowError(
            f"{steps} steps from slice {wave.t_index} leave the field range "
            f"(m_t={field.cfg.m_t})")
    q = wave.q.reshape(-1).copy()
    out = np.empty_like(q)
    for t in range(wave.t_index, wave.t_index + steps):
        op = build_step_operator(field, t)
        out[op.target] = op.sign * q
        q, out = out, q
    return RealWave(q.reshape(2, 2, wave.cfg.m_x), wave.cfg,
                    wave.t_index + steps)


@dataclass(frozen=True)
class TrajectoryState:
    """Ensemble of basis trajectories carrying frozen initial probabilities.

    position[i] is the current flat basis index of trajectory i, sign[i] the
    accumulated sign, weight[i] the probability assigned at launch. With one
    trajectory per basis state the map stays a bijection at all times.
    """

    cfg: LatticeConfig
    t_index: int
    position: np.ndarray
    sign: np.ndarray
    weight: np.ndarray

    def __post_init__(self):
        pos = np.ascontiguousarray(self.position, dtype=np.int64)
        sgn = np.ascontiguousarray(self.sign, dtype=np.int8)
        wgt = np.ascontiguousarray(self.weight, dtype=np.float64)
        if not (pos.shape == sgn.shape == wgt.shape):
            raise DimensionMismatchError("trajectory arrays differ in shape")
        for a in (pos, sgn, wgt):
            a.flags.writeable = False
        object.__setattr__(self, "position", pos)
        object.__setattr__(self, "sign", sgn)
        object.__setattr__(self, "weight", wgt)

    @classmethod
    def full_basis(cls, wave: RealWave) -> "TrajectoryState":
        """One trajectory per basis state, weighted by the wave probabilities."""
        n = 4 * wave.cfg.m_x
        return cls(wave.cfg, wave.t_index, np.arange(n),
                   np.ones(n, dtype=np.int8), wave.q.reshape(-1) ** 2)

    def site_probabilities(self) -> np.ndarray:
        """Transported probability per site, summed over species."""
        return np.bincount(self.position % self.cfg.m_x,
                           weights=self.weight, minlength=self.cfg.m_x)


def evolve_trajectories(state: TrajectoryState, field: DisorderField,
                        steps: int) -> TrajectoryState:
    if state.cfg != field.cfg:
        raise DimensionMismatchError("trajectories and field on different lattices")
    if state.t_index + steps > field.cfg.m_t:
        raise RangeOverflowError(
            f"{steps} steps from slice {state.t_index} leave the field range")
    pos = state.position.copy()
    sgn = state.sign.astype(np.int8).copy()
    for t in range(state.t_index, state.t_index + steps):
        op = build_step_operator(field, t)
        sgn *= op.sign[pos]
        pos = op.target[pos]
    return TrajectoryState(state.cfg, state.t_index + steps, pos, sgn,
                           state.weight)


# -- complex structure ------------------------------------------------------

def decode_wave(wave: RealWave) -> ComplexWave:
    """Pair the eta components into the complex wave.

    phi_gamma = (1+i)/sqrt2 * q_(gamma,+) + (1-i)/sqrt2 * q_(gamma,-);
    the squared norm carries over exactly.
    """
    q = wave.q
    re = (q[:, ETA_PLUS] + q[:, ETA_MINUS]) / np.sqrt(2.0)
    im = (q[:, ETA_PLUS] - q[:, ETA_MINUS]) / np.sqrt(2.0)
    return ComplexWave(re + 1j * im, eps=wave.cfg.eps)


def encode_wave(phi, cfg: LatticeConfig | None = None,
                t_index: int = 0) -> RealWave:
    """Inverse pairing: q_+ = (Re + Im)/sqrt2, q_- = (Re - Im)/sqrt2.

    Accepts a ComplexWave or a unit-norm complex array of shape (2, m_x).
    """
    if not isinstance(phi, ComplexWave):
        eps = cfg.eps if cfg is not None else 1.0
        phi = ComplexWave(np.asarray(phi, dtype=np.complex128), eps=eps)
    norm = float(np.sum(np.abs(phi.phi) ** 2))
    if abs(norm - 1.0) > _ENCODE_TOL:
        raise NormalizationError(f"complex wave norm {norm} != 1")
    if cfg is None:
        cfg = LatticeConfig(eps=phi.eps, m_x=phi.m_x, m_t=1)
    elif cfg.m_x != phi.m_x:
        raise DimensionMismatchError(
            f"wave on {phi.m_x} sites, lattice with {cfg.m_x}")
    q = np.empty((2, 2, cfg.m_x))
    q[:, ETA_PLUS] = (phi.phi.real + phi.phi.imag) / np.sqrt(2.0)
    q[:, ETA_MINUS] = (phi.phi.real - phi.phi.imag) / np.sqrt(2.0)
    q /= np.sqrt(np.sum(q * q))   # remove rounding drift within tolerance
    return RealWave(q, cfg, t_index)


# -- snapshot serialization -------------------------------------------------

def save_wave(wave: RealWave, path) -> None:
    """Write a wave as a text table with a norm checksum; round trips bitwise."""
    cfg = wave.cfg
    lines = [_WAVE_MAGIC,
             f"# eps {cfg.eps!r} m_x {cfg.m_x} m_t {cfg.m_t}",
             f"# norm {float(np.sum(wave.q * wave.q))!r}",
             "t_index,gamma,eta,x_index,q"]
    for gamma in (GAMMA_R, GAMMA_L):
        for eta in (ETA_PLUS, ETA_MINUS):
            for x in range(cfg.m_x):
                lines.append(f"{wave.t_index},{_GAMMA_CHARS[gamma]},"
                             f"{_ETA_CHARS[eta]},{x},"
                             f"{float(wave.q[gamma, eta, x])!r}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def load_wave(path) -> RealWave:
    with open(path) as fh:
        lines = [ln.rstrip("\n") for ln in fh if ln.strip()]
    if not lines or lines[0] != _WAVE_MAGIC:
        raise ValueError(f"{path}: not a wave-snapshot file")
    head = lines[1].split()
    eps, m_x, m_t = float(head[2]), int(head[4]), int(head[6])
    stored_norm = float(lines[2].split()[2])
    cfg = LatticeConfig(eps=eps, m_x=m_x, m_t=m_t)
    q = np.zeros((2, 2, m_x))
    t_index = 0
    for ln in lines[4:]:
        t_s, g_s, e_s, x_s, q_s = ln.split(",")
        t_index = int(t_s)
        q[_GAMMA_CHARS.index(g_s), _ETA_CHARS.index(e_s), int(x_s)] = float(q_s)
    if float(np.sum(q * q)) != stored_norm:
        raise NormalizationError(f"{path}: checksum mismatch")
    return RealWave(q, cfg, t_index)
