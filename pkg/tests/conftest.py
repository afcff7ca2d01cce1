import pytest
from hypothesis import HealthCheck, settings

from intentmerge import load_default_domain
from intentmerge.simgen import similarity_tables

settings.register_profile(
    "suite",
    max_examples=50,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")


@pytest.fixture(scope="session")
def domain():
    return load_default_domain()


@pytest.fixture(scope="session")
def tables(domain):
    # similarity tables are deterministic; build once for the whole run
    return similarity_tables(domain)
