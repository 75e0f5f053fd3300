"""Reference solvers and Hamiltonian analysis on the complex wave.

Dense linear algebra on one slice grid: the discrete momentum operator built
from the DFT, the leading Hamiltonian P~ tau3 + v_bar(x) tau2, the effective
Hamiltonian i*log(U)/dt of a step product, and Dirac and Schrodinger
propagators used as continuum references for the automaton.

Conventions. Momenta live on p = pi * k / (eps * m_x) with integer k in
fft order (for even m_x the single Nyquist mode carries k = -m_x/2). The DFT
attaches phases to the physical coordinates of a slice, so operators mapping
between slices of different parity pick up a spectral half-site translation;
see effective_hamiltonian.
"""

from __future__ import annotations

import functools
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.linalg import schur

from .automaton import ComplexWave, build_step_operator, GAMMA_R, GAMMA_L
from .disorder import DisorderField, PotentialProfile
from .errors import DimensionMismatchError, NonUnitaryError, NormalizationError

_HERM_TOL = 1e-10
_BRANCH_TOL = 1e-6
_TAIL_TOL = 1e-6


class SmoothnessWarning(UserWarning):
    """Input wave has non-negligible amplitude near the grid momentum edge."""


class MomentumContentWarning(UserWarning):
    """Wave momentum content too large for the requested approximation."""


class BranchFoldWarning(UserWarning):
    """Eigenphase at the principal-branch edge; log is ambiguous there."""


@dataclass(frozen=True)
class MomentumGrid:
    """Discrete momentum grid of one slice: m_x modes, spacing pi/(eps*m_x)."""

    eps: float
    m_x: int

    @property
    def momenta(self) -> np.ndarray:
        k = np.rint(np.fft.fftfreq(self.m_x) * self.m_x).astype(np.int64)
        return np.pi * k / (self.eps * self.m_x)

    def dft(self, parity: int = 0) -> np.ndarray:
        """DFT matrix D[p, x] = exp(-i p x)/sqrt(m_x) on slice coordinates."""
        x = (2 * np.arange(self.m_x) + parity) * self.eps
        return np.exp(-1j * np.outer(self.momenta, x)) / np.sqrt(self.m_x)

    def translation(self, shift: float) -> np.ndarray:
        """Spectral translation by `shift` (in units of eps), even-slice basis."""
        d = self.dft(0)
        return d.conj().T @ (np.exp(-1j * self.momenta * shift * self.eps)[:, None] * d)


@functools.lru_cache(maxsize=32)
def _momentum_operator_cached(eps: float, m_x: int) -> np.ndarray:
    grid = MomentumGrid(eps, m_x)
    d = grid.dft(0)
    op = d.conj().T @ (grid.momenta[:, None] * d)
    op = (op + op.conj().T) / 2
    op.flags.writeable = False
    return op


def momentum_operator(grid: MomentumGrid) -> np.ndarray:
    """Dense hermitian momentum operator; independent of slice parity."""
    return _momentum_operator_cached(grid.eps, grid.m_x)


@dataclass
class HamiltonianMatrix:
    """Dense hermitian operator on the two-component slice basis."""

    matrix: np.ndarray
    label: str
    grid: MomentumGrid
    branch_ambiguous: bool = False

    def __post_init__(self):
        m = np.ascontiguousarray(self.matrix, dtype=np.complex128)
        n = 2 * self.grid.m_x
        if m.shape != (n, n):
            raise DimensionMismatchError(
                f"{self.label}: shape {m.shape} != ({n}, {n})")
        herm = np.max(np.abs(m - m.conj().T))
        if herm > _HERM_TOL:
            raise ValueError(f"{self.label}: hermiticity defect {herm:.2e}")
        self.matrix = m

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix)


def _two_block(upper_left, lower_right, upper_right=None, lower_left=None):
    m_x = upper_left.shape[0]
    out = np.zeros((2 * m_x, 2 * m_x), dtype=np.complex128)
    out[:m_x, :m_x] = upper_left
    out[m_x:, m_x:] = lower_right
    if upper_right is not None:
        out[:m_x, m_x:] = upper_right
    if lower_left is not None:
        out[m_x:, :m_x] = lower_left
    return out


def free_hamiltonian(grid: MomentumGrid) -> HamiltonianMatrix:
    """H_f = P~ tau3: +P~ on right-movers, -P~ on left-movers."""
    p = momentum_operator(grid)
    return HamiltonianMatrix(_two_block(p, -p), "H_f", grid)


def scatter_hamiltonian(field: DisorderField, t_index: int) -> HamiltonianMatrix:
    """H_V of one slice: pi/(2 eps) tau2 at each disorder site."""
    cfg = field.cfg
    grid = MomentumGrid(cfg.eps, cfg.m_x)
    c = (np.pi / (2.0 * cfg.eps)) * field.mask(t_index).astype(float)
    zeros = np.zeros((cfg.m_x, cfg.m_x))
    return HamiltonianMatrix(
        _two_block(zeros, zeros,
                   upper_right=-1j * np.diag(c), lower_left=1j * np.diag(c)),
        "H_V", grid)


def leading_hamiltonian(profile: PotentialProfile,
                        grid: MomentumGrid) -> HamiltonianMatrix:
    """H0 = P~ tau3 + v_bar(x) tau2, the continuum-limit generator."""
    if profile.m_x != grid.m_x:
        raise DimensionMismatchError(
            f"profile on {profile.m_x} sites, grid on {grid.m_x}")
    p = momentum_operator(grid)
    vb = np.diag(profile.v_bar)
    return HamiltonianMatrix(
        _two_block(p, -p, upper_right=-1j * vb, lower_left=1j * vb),
        "H0", grid)


# -- step matrices in the complex representation ----------------------------

def free_step_matrix(grid: MomentumGrid, parity: int) -> np.ndarray:
    """Index-space free step for a source slice of given parity.

    Right-movers map x -> x + parity, left-movers x -> x + parity - 1
    (the physical move is always +-eps; the offset bookkeeping sits in the
    parity change of the slice).
    """
    m_x = grid.m_x
    eye = np.eye(m_x)
    to_right = np.roll(eye, parity, axis=0)       # rows: destination
    to_left = np.roll(eye, parity - 1, axis=0)
    return _two_block(to_right, to_left)


def scatter_step_matrix(field: DisorderField, t_index: int) -> np.ndarray:
    """Same-slice scatter: at disorder sites (phi_R, phi_L) -> (-phi_L, phi_R)."""
    m_x = field.cfg.m_x
    scat = field.mask(t_index)
    keep = np.diag((~scat).astype(float))
    swap = np.diag(scat.astype(float))
    return _two_block(keep, keep, upper_right=-swap, lower_left=swap)


def complex_step_matrix(field: DisorderField, t_index: int) -> np.ndarray:
    """Full one-step unitary (scatter then shift) as a dense complex matrix."""
    op = build_step_operator(field, t_index)
    m_x = op.m_x
    # collapse to the eta = + sector; both sectors carry the same real matrix
    idx = np.concatenate([np.arange(m_x), 2 * m_x + np.arange(m_x)])
    tgt = op.target[idx]
    dest = np.where(tgt >= 2 * m_x, tgt - m_x, tgt)   # flat (gamma, x) index
    out = np.zeros((2 * m_x, 2 * m_x), dtype=np.complex128)
    out[dest, np.arange(2 * m_x)] = op.sign[idx]
    return out


def effective_hamiltonian(field: DisorderField, t_start: int,
                          n_steps: int) -> HamiltonianMatrix:
    """Hbar = i log(U) / dt for the ordered product of n_steps step matrices.

    Later steps multiply from the left. When the start and end slice parities
    differ, the product is conjugated onto the even-coordinate basis with the
    spectral half-site translation before taking the principal log. Eigenvalue
    phases within 1e-6 of +-pi are flagged (branch folding), not silently
    unwrapped; size runs so that |Hbar| dt < pi when that matters.
    """
    cfg = field.cfg
    if cfg.m_x > 256:
        raise ValueError("dense effective Hamiltonian limited to m_x <= 256")
    if n_steps < 1:
        raise ValueError("n_steps must be positive")
    if t_start < 0 or t_start + n_steps > cfg.m_t:
        raise ValueError("step range outside the field")
    grid = MomentumGrid(cfg.eps, cfg.m_x)
    u = complex_step_matrix(field, t_start)
    for t in range(t_start + 1, t_start + n_steps):
        u = complex_step_matrix(field, t) @ u
    par_in = cfg.parity(t_start)
    par_out = cfg.parity(t_start + n_steps)
    if par_in != par_out:
        t_block = np.kron(np.eye(2), grid.translation(1.0))
        if par_out == 1:
            u = t_block @ u
        else:
            u = u @ t_block.conj().T
    defect = np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0])))
    if defect > 1e-8:
        raise NonUnitaryError(f"step product unitarity defect {defect:.2e}")
    tri, vecs = schur(u, output="complex")
    phases = np.angle(np.diag(tri))
    ambiguous = bool(np.any(np.abs(np.abs(phases) - np.pi) < _BRANCH_TOL))
    if ambiguous:
        warnings.warn("eigenphase at the principal-branch edge",
                      BranchFoldWarning)
    dt = n_steps * cfg.eps
    h = vecs @ np.diag(-phases / dt) @ vecs.conj().T
    h = (h + h.conj().T) / 2
    return HamiltonianMatrix(h, "Hbar", grid, branch_ambiguous=ambiguous)


# -- Dirac solver ------------------------------------------------------------

def _spectral_tail(phi: np.ndarray) -> tuple[float, int]:
    """Largest relative mode amplitude in the upper quarter of the band."""
    spec = np.abs(np.fft.fft(phi, axis=-1))
    m_x = phi.shape[-1]
    k = np.abs(np.rint(np.fft.fftfreq(m_x) * m_x).astype(np.int64))
    band = k >= (3 * m_x) // 8
    peak = float(spec.max())
    if peak == 0 or not np.any(band):
        return 0.0, 0
    tail = spec[..., band].reshape(-1, int(np.sum(band))).max(axis=0)
    worst = int(np.argmax(tail))
    return float(tail[worst] / peak), int(k[band][worst])


def _warn_if_rough(phi: np.ndarray, who: str) -> None:
    rel, k = _spectral_tail(phi)
    if rel > _TAIL_TOL:
        warnings.warn(
            f"{who}: spectral tail {rel:.2e} at |k|={k} exceeds {_TAIL_TOL}",
            SmoothnessWarning)


class DiracSolver:
    """Propagator for i d_t phi = (P~ tau3 + v_bar tau2) phi on one grid.

    method 'dense' diagonalizes H0 once and is exact in time; 'splitstep'
    alternates exact kinetic moves in momentum space with exact potential
    rotations in position space (second-order splitting).
    """

    def __init__(self, profile: PotentialProfile, grid: MomentumGrid,
                 method: str = "auto"):
        if method == "auto":
            method = "dense" if grid.m_x <= 256 else "splitstep"
        if method not in ("dense", "splitstep"):
            raise ValueError(f"unknown method {method!r}")
        self.profile = profile
        self.grid = grid
        self.method = method
        self._eig = None
        if method == "dense":
            h0 = leading_hamiltonian(profile, grid)
            self._eig = np.linalg.eigh(h0.matrix)

    def evolve(self, phi: ComplexWave, duration: float,
               substeps: int | None = None) -> ComplexWave:
        if phi.m_x != self.grid.m_x:
            raise DimensionMismatchError(
                f"wave on {phi.m_x} sites, solver on {self.grid.m_x}")
        _warn_if_rough(phi.phi, "dirac_evolve")
        if self.method == "dense":
            energies, vecs = self._eig
            amp = vecs.conj().T @ phi.phi.reshape(-1)
            out = vecs @ (np.exp(-1j * energies * duration) * amp)
            return ComplexWave(out.reshape(2, self.grid.m_x), eps=self.grid.eps)
        return self._split_step(phi, duration, substeps)

    def _split_step(self, phi: ComplexWave, duration: float,
                    substeps: int | None) -> ComplexWave:
        vb = self.profile.v_bar
        if substeps is None:
            scale = max(float(np.max(np.abs(vb))), 1.0)
            substeps = max(64, int(np.ceil(64.0 * abs(duration) * scale)))
        dt = duration / substeps
        p = self.grid.momenta
        half_r = np.exp(-1j * p * dt / 2)
        half_l = np.conj(half_r)
        cos_v = np.cos(vb * dt)
        sin_v = np.sin(vb * dt)
        f = np.fft.fft(phi.phi, axis=-1)
        for _ in range(substeps):
            f[GAMMA_R] *= half_r
            f[GAMMA_L] *= half_l
            w = np.fft.ifft(f, axis=-1)
            wr = cos_v * w[GAMMA_R] - sin_v * w[GAMMA_L]
            wl = sin_v * w[GAMMA_R] + cos_v * w[GAMMA_L]
            f = np.fft.fft(np.stack([wr, wl]), axis=-1)
            f[GAMMA_R] *= half_r
            f[GAMMA_L] *= half_l
        out = np.fft.ifft(f, axis=-1)
        out /= np.sqrt(np.sum(np.abs(out) ** 2))
        return ComplexWave(out, eps=self.grid.eps)


def dirac_evolve(phi: ComplexWave, profile: PotentialProfile, duration: float,
                 method: str = "auto", substeps: int | None = None) -> ComplexWave:
    grid = MomentumGrid(phi.eps, phi.m_x)
    return DiracSolver(profile, grid, method).evolve(phi, duration, substeps)


# -- Schrodinger solver ------------------------------------------------------

@dataclass(frozen=True)
class SchrodingerWave:
    """Single-component complex wave chi(x) on the slice grid."""

    chi: np.ndarray
    eps: float = 1.0

    def __post_init__(self):
        chi = np.ascontiguousarray(self.chi, dtype=np.complex128)
        if chi.ndim != 1:
            raise DimensionMismatchError("chi must be one-dimensional")
        norm = float(np.sum(np.abs(chi) ** 2))
        if abs(norm - 1.0) > 1e-10:
            raise NormalizationError(f"chi norm {norm} != 1")
        chi.flags.writeable = False
        object.__setattr__(self, "chi", chi)

    @property
    def m_x(self) -> int:
        return self.chi.size

    def probabilities(self) -> np.ndarray:
        return np.abs(self.chi) ** 2


class SchrodingerSolver:
    """Exact propagator for i d_t chi = -chi''/(2m) + V(x) chi.

    The Laplacian is the three-point stencil on the slice grid (spacing
    2*eps); the propagator comes from one dense diagonalization.
    """

    def __init__(self, profile: PotentialProfile, eps: float, m_x: int):
        if profile.mass <= 0:
            raise ValueError("Schrodinger evolution needs a positive mass")
        if profile.m_x != m_x:
            raise DimensionMismatchError(
                f"profile on {profile.m_x} sites, grid on {m_x}")
        self.eps = eps
        a = 2.0 * eps
        lap = (np.roll(np.eye(m_x), 1, axis=0) - 2 * np.eye(m_x)
               + np.roll(np.eye(m_x), -1, axis=0)) / a ** 2
        h = -lap / (2.0 * profile.mass) + np.diag(profile.v)
        self._energies, self._vecs = np.linalg.eigh(h)

    def evolve(self, chi: SchrodingerWave, duration: float) -> SchrodingerWave:
        amp = self._vecs.T @ chi.chi
        out = self._vecs @ (np.exp(-1j * self._energies * duration) * amp)
        return SchrodingerWave(out, eps=self.eps)


def schrodinger_evolve(chi: SchrodingerWave, profile: PotentialProfile,
                       duration: float) -> SchrodingerWave:
    return SchrodingerSolver(profile, chi.eps, chi.m_x).evolve(chi, duration)


def nonrel_embed(chi: SchrodingerWave, mass: float,
                 t: float = 0.0) -> ComplexWave:
    """Embed a Schrodinger wave into the two-component wave.

    phi = exp(-i m t)/sqrt2 * (chi - i chi'/(2m), i chi - chi'/(2m)) with the
    spectral derivative; the output is normalized. Warns when the rms momentum
    of chi exceeds 0.2 * mass, the documented validity threshold.
    """
    if mass <= 0:
        raise ValueError("embedding needs a positive mass")
    grid = MomentumGrid(chi.eps, chi.m_x)
    spec = np.fft.fft(chi.chi)
    power = np.abs(spec) ** 2
    p_rms = float(np.sqrt(np.sum(power * grid.momenta ** 2) / np.sum(power)))
    if p_rms > 0.2 * mass:
        warnings.warn(
            f"rms momentum {p_rms:.3g} exceeds 0.2*m = {0.2 * mass:.3g}",
            MomentumContentWarning)
    dchi = np.fft.ifft(1j * grid.momenta * spec)
    phase = np.exp(-1j * mass * t)
    phi = np.stack([chi.chi - 1j * dchi / (2 * mass),
                    1j * chi.chi - dchi / (2 * mass)]) * (phase / np.sqrt(2.0))
    phi /= np.sqrt(np.sum(np.abs(phi) ** 2))
    return ComplexWave(phi, eps=chi.eps)
