"""Shared fixtures.

The paper-parameter water sweep and its refined peaks are expensive, so
they are computed once per session and shared between the module tests and
the acceptance suite.
"""

import numpy as np
import pytest

from resonance import (
    SweepPlan,
    detect_peaks,
    oracle_spectrum,
    refine_peak,
    run_sweep,
    water_model,
)

WATER_EIGENVALUES_PAPER = np.array([-83.9731, -83.4010, -82.6604, -82.3763])
E0 = -84.20
PAPER_C = 0.006
PAPER_TAU = 1000.0


@pytest.fixture(scope="session")
def water():
    return water_model()


@pytest.fixture(scope="session")
def water_oracle(water):
    return oracle_spectrum(water.system)


@pytest.fixture(scope="session")
def paper_plan():
    # E0 = -84.20, omega in [0, 2] split into 100 intervals, c = 0.006, tau = 1000
    return SweepPlan(
        omega_min=0.0, omega_max=2.0, n_points=101, tau=PAPER_TAU, coupling_c=PAPER_C
    )


@pytest.fixture(scope="session")
def paper_sweep(water, paper_plan):
    return run_sweep(water, paper_plan)


@pytest.fixture(scope="session")
def paper_peaks(paper_sweep):
    return detect_peaks(paper_sweep, threshold=0.1)


@pytest.fixture(scope="session")
def refined_traces(water, paper_peaks):
    """All four water peaks refined to eps = 1e-4."""
    return [
        refine_peak(water, peak, 1e-4, tau=PAPER_TAU) for peak in paper_peaks
    ]


@pytest.fixture()
def rng():
    return np.random.default_rng(20260810)


def random_hermitian(rng, n, scale=1.0, real=False):
    x = rng.normal(size=(n, n))
    if not real:
        x = x + 1j * rng.normal(size=(n, n))
    return scale * (x + x.conj().T) / 2.0
