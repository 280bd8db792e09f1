import pytest
from hypothesis import HealthCheck, settings

from monochain import corpus

settings.register_profile(
    "suite",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")


@pytest.fixture(scope="session")
def fixed_corpus():
    return corpus()
