import math
from pathlib import Path

import numpy as np
import pytest

ROOT = Path(__file__).resolve().parents[1]
STATES = ROOT / "states"
GOLDEN = Path(__file__).resolve().parent / "golden"


def gaussian_schmidt_oracle(cov):
    """Schmidt entropy (bits) and purity of a real two-photon Gaussian amplitude.

    The reduced-state purity is a 4-dimensional Gaussian integral of four
    copies of psi = sqrt(N(0, cov)); a pure two-mode Gaussian has a geometric
    Schmidt spectrum (1 - mu) mu^k with mu = (1 - purity) / (1 + purity).
    """
    cov = np.asarray(cov, dtype=float)
    prec = np.linalg.inv(cov)
    m = np.zeros((4, 4))
    for a, b in ((0, 2), (1, 2), (0, 3), (1, 3)):
        m[np.ix_([a, b], [a, b])] += 0.5 * prec
    purity = 1.0 / (np.linalg.det(cov) * math.sqrt(np.linalg.det(m)))
    mu = (1 - purity) / (1 + purity)
    if mu <= 0:
        return 0.0, purity
    entropy = -math.log2(1 - mu) - mu / (1 - mu) * math.log2(mu)
    return entropy, purity


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import VERDICTS
    except ImportError:
        return
    if VERDICTS:
        terminalreporter.section("acceptance criteria")
        for k in sorted(VERDICTS):
            terminalreporter.write_line(VERDICTS[k])
