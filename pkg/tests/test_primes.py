import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from autratio.errors import SieveCapacityError
from autratio.primes import PrimeStream, estimate_sieve_limit


def trial_division_primes(limit):
    found = []
    for n in range(2, limit + 1):
        r = math.isqrt(n)
        if all(n % p for p in found if p <= r):
            found.append(n)
    return found


def test_sieve_matches_trial_division(stream):
    ref = trial_division_primes(100_000)
    got = stream.primes_slice(1, len(ref))
    assert got.tolist() == ref
    assert stream.nth_prime(len(ref)) == ref[-1]


def test_nth_prime_examples(stream):
    assert stream.nth_prime(1) == 2
    assert stream.nth_prime(2) == 3
    assert stream.nth_prime(25) == 97


def test_nth_prime_extends_on_demand():
    s = PrimeStream()
    n = s.count + 1000
    p = s.nth_prime(n)
    assert s.count >= n and p > 2


def test_nth_prime_rejects_bad_index(stream):
    with pytest.raises(ValueError):
        stream.nth_prime(0)


def test_capacity_error():
    s = PrimeStream(ceiling=10_000)
    with pytest.raises(SieveCapacityError):
        s.nth_prime(10**6)


def test_ceiling_env_override(monkeypatch):
    monkeypatch.setenv("AUTRATIO_SIEVE_CEILING", "70000")
    s = PrimeStream()
    assert s.ceiling == 70000
    with pytest.raises(SieveCapacityError):
        s.nth_prime(10**5)


def test_estimate_examples():
    assert estimate_sieve_limit(0) == 1000
    x = estimate_sieve_limit(0.75)
    assert math.log(math.log(x)) >= 1.68
    assert 200 <= x <= 300
    x = estimate_sieve_limit(2.5)
    assert 10**6 <= x <= 10**8


def test_estimate_unreachable():
    with pytest.raises(SieveCapacityError):
        estimate_sieve_limit(2.5, ceiling=10_000)
    with pytest.raises(ValueError):
        estimate_sieve_limit(-0.1)


def odd_log_sum_upto(stream, x: float) -> float:
    stream.extend_to(int(x))
    ps = stream.primes_slice(2, stream.count).astype(float)
    ps = ps[ps <= x]
    return float(np.sum(np.log(ps) - np.log(ps - 1.0)))


@settings(max_examples=25)
@given(target=st.floats(min_value=0.0, max_value=2.5, allow_nan=False))
def test_estimate_is_conservative(stream, target):
    # whenever no capacity error is raised, the odd primes below the
    # returned limit must actually carry the requested log-sum budget
    x = estimate_sieve_limit(target)
    assert odd_log_sum_upto(stream, x) >= target
