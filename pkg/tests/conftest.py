import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from starnls.fields import Grid
from starnls.params import ModelParams

# make the sibling oracle module importable from every test file
sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile(
    "ci",
    max_examples=25,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("ci")


@pytest.fixture(scope="session")
def ref_params() -> ModelParams:
    """Reference model: three edges, unit vertex strength, cubic NLS."""
    return ModelParams(N=3, alpha=1.0, mu=1.0)


@pytest.fixture(scope="session")
def coarse_grid() -> Grid:
    """Grid that keeps unit tests fast while staying spectrally honest."""
    return Grid(L=30.0, dx=0.02)
