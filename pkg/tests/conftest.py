import hypothesis
import pytest

from autratio.primes import PrimeStream

hypothesis.settings.register_profile(
    "default", max_examples=50, deadline=None
)
hypothesis.settings.load_profile("default")


@pytest.fixture(scope="session")
def stream():
    """One shared sieve for the whole test session."""
    return PrimeStream()
