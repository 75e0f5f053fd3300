"""Shared fixtures and independent oracles.

The dense step matrices built here are written straight from the published
update rules with their own index arithmetic, so the engine and the oracle
can only agree if both implement the rules correctly.
"""

import numpy as np
import pytest

from dirac_automaton import DisorderField, LatticeConfig


def oracle_complex_step(field: DisorderField, t: int) -> np.ndarray:
    """Dense one-step matrix on the (gamma, x) complex basis.

    Free right-movers advance one eps (index offset equals the source slice
    parity on the checkerboard), free left-movers retreat one eps. A site
    holding a scattering event swaps the two directions before the move and
    flips the sign of the left-to-right branch.
    """
    cfg = field.cfg
    m_x = cfg.m_x
    par = t % 2
    scat = np.zeros(m_x, dtype=bool)
    scat[list(field.events(t))] = True
    u = np.zeros((2 * m_x, 2 * m_x))
    for y in range(m_x):
        right_to = (y + par) % m_x
        left_to = (y + par - 1) % m_x
        if scat[y]:
            u[m_x + left_to, y] = 1.0        # incoming right-mover turns left
            u[right_to, m_x + y] = -1.0      # incoming left-mover turns right
        else:
            u[right_to, y] = 1.0
            u[m_x + left_to, m_x + y] = 1.0
    return u


def oracle_real_step(field: DisorderField, t: int) -> np.ndarray:
    """Dense one-step matrix on the flat (gamma, eta, x) real basis.

    The eta components never mix and see identical signs, so the real matrix
    is the complex-basis matrix spread over both eta blocks.
    """
    m_x = field.cfg.m_x
    uc = oracle_complex_step(field, t)
    u = np.zeros((4 * m_x, 4 * m_x))
    for eta in (0, 1):
        for gb in (0, 1):
            for ga in (0, 1):
                block = uc[gb * m_x:(gb + 1) * m_x, ga * m_x:(ga + 1) * m_x]
                u[(gb * 2 + eta) * m_x:(gb * 2 + eta + 1) * m_x,
                  (ga * 2 + eta) * m_x:(ga * 2 + eta + 1) * m_x] = block
    return u


def random_field(cfg: LatticeConfig, rng, density: float = 0.1) -> DisorderField:
    events = []
    for _ in range(cfg.m_t):
        mask = rng.random(cfg.m_x) < density
        events.append(np.flatnonzero(mask).tolist())
    return DisorderField(cfg, events)


def random_real_wave(cfg: LatticeConfig, rng, t_index: int = 0):
    from dirac_automaton import RealWave
    q = rng.standard_normal((2, 2, cfg.m_x))
    q /= np.sqrt(np.sum(q * q))
    return RealWave.from_amplitudes(q, cfg, t_index)


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "acceptance_lines", None)
    if lines:
        terminalreporter.section("acceptance scorecard")
        for line in lines:
            terminalreporter.line(line)
