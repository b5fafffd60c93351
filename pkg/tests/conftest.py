import pytest

from optional_pgg.sweep import SweepConfig, run_sweep

#: Grid spacing of the default 41-cell axis over [-1, 1].
GRID_STEP = 2.0 / 40


@pytest.fixture(scope="session")
def rare_mutation_sweep():
    """Full 41x41 rare-mutation phase diagram (shared across test modules)."""
    return run_sweep(SweepConfig(mu=1e-8), jobs=2)


@pytest.fixture(scope="session")
def large_mutation_sweep():
    """Full 41x41 large-mutation phase diagram."""
    return run_sweep(SweepConfig(mu=1e-2), jobs=2)
