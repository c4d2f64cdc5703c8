import pytest

from noisycfb.sweep import SweepConfig, run_sweep


@pytest.fixture(scope="session")
def default_sweep_rows():
    """The full default grid (500 points); shared because several
    acceptance criteria read different columns of the same sweep."""
    return run_sweep(SweepConfig())
