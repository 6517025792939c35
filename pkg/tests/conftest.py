import os

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from hml.gaussian import GaussianInt, decompose

settings.register_profile(
    "default",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def gaussian(bound=10**3):
    return st.builds(GaussianInt, st.integers(-bound, bound), st.integers(-bound, bound))


def nonzero(bound=10**3):
    return gaussian(bound).filter(lambda z: not z.is_zero())


def odd(bound=10**3):
    return gaussian(bound).filter(lambda z: z.is_odd())


def primary(bound=10**3):
    return odd(bound).map(lambda z: decompose(z).core)


@pytest.fixture(autouse=True)
def _isolated_state(tmp_path, monkeypatch):
    # keep the residue-constant cache and prime cache out of the user's environment
    monkeypatch.delenv("HML_STATE_DIR", raising=False)
    monkeypatch.delenv("HML_PRIME_CACHE", raising=False)
