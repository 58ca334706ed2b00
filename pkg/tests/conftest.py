import numpy as np
import pytest
from hypothesis import HealthCheck
from hypothesis import settings as hsettings

from bures_geom.io.schema import load_algebra, load_form
from bures_geom.settings import SAMPLES_DIR, settings

hsettings.register_profile(
    "bures",
    max_examples=30,
    deadline=None,
    suppress_health_check=[HealthCheck.function_scoped_fixture, HealthCheck.too_slow],
)
hsettings.load_profile("bures")


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def samples():
    return SAMPLES_DIR


@pytest.fixture(autouse=True)
def isolated_run_log(tmp_path, monkeypatch):
    path = tmp_path / "run_log.csv"
    monkeypatch.setattr(settings, "RUN_LOG_PATH", path)
    return path


@pytest.fixture
def qubit(samples):
    """ν = diag(1, 0), ρ = diag(½, ½) on M_2."""
    algebra = load_algebra(samples / "algebra_qubit.json")
    return algebra, load_form(samples / "nu_qubit.json", algebra), load_form(samples / "rho_qubit.json", algebra)
