import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from autratio.autorder import (
    LogValue,
    aut_order,
    aut_order_local,
    euler_phi_of_order,
    f_exact,
    f_log,
    f_prime_exact,
    two_rank_ratio,
)
from autratio.errors import OracleCapExceeded
from autratio.groups import (
    TRIVIAL,
    AbelianGroup,
    SymbolicGroup,
    cyclic,
    direct_product,
    parse_group,
)
from autratio.oracle import OracleCaps, aut_order_bruteforce, aut_order_bruteforce_naive
from autratio.search import SearchBounds, enumerate_groups

BIG_CAPS = OracleCaps(order_cap=200, work_cap=10**12)


def test_local_formula_pinned_values():
    assert aut_order_local(7, [1]) == 6
    assert aut_order_local(2, [1, 1]) == 6  # |GL_2(2)|
    assert aut_order_local(2, [1, 2]) == 8
    assert aut_order_local(2, [1, 1, 1]) == 168  # (8-1)(8-2)(8-4)


def test_local_formula_rejects_bad_partitions():
    with pytest.raises(ValueError):
        aut_order_local(2, [2, 1])
    with pytest.raises(ValueError):
        aut_order_local(2, [])


def test_aut_order_examples():
    assert aut_order(TRIVIAL) == 1
    assert aut_order(parse_group("C2^3")) == 168
    assert aut_order(parse_group("C6")) == 2  # = phi(6)


def test_f_exact_examples():
    assert f_exact(TRIVIAL) == 1
    assert f_exact(parse_group("C2")) == Fraction(1, 2)
    assert f_exact(parse_group("C2^2")) == Fraction(3, 2)
    assert f_exact(parse_group("C2^3")) == 21


def test_f_prime_examples():
    for p in (2, 3, 5, 7, 11):
        assert f_prime_exact(cyclic(p)) == 1
    assert f_prime_exact(parse_group("C2 x C4")) == 2
    assert f_prime_exact(parse_group("C2^3")) == 42
    assert f_prime_exact(TRIVIAL) == 1


def trial_phi(n: int) -> int:
    out = n
    m, p = n, 2
    while p * p <= m:
        if m % p == 0:
            out -= out // p
            while m % p == 0:
                m //= p
        p += 1
    if m > 1:
        out -= out // m
    return out


def test_phi_of_order_matches_trial_division():
    for n in range(1, 500):
        assert euler_phi_of_order(cyclic(n)) == trial_phi(n)


def test_cyclic_aut_is_phi_sample():
    for n in range(1, 1000):
        assert aut_order(cyclic(n)) == trial_phi(n)


def test_oracle_equivalence_small():
    for g in enumerate_groups(SearchBounds(max_order=48)):
        assert aut_order(g) == aut_order_bruteforce(g, BIG_CAPS), g


def test_naive_and_fast_oracle_agree():
    for lit in ["C1", "C2", "C4", "C2 x C2", "C2 x C4", "C3 x C3", "C8",
                "C2 x C2 x C2", "C12", "C2 x C6", "C9 x C3", "C2 x C4 x C3"]:
        g = parse_group(lit)
        assert aut_order_bruteforce(g, BIG_CAPS) == aut_order_bruteforce_naive(
            g, BIG_CAPS
        ), lit


def test_oracle_caps_refused():
    with pytest.raises(OracleCapExceeded):
        aut_order_bruteforce(cyclic(211))  # order above the default cap
    with pytest.raises(OracleCapExceeded):
        aut_order_bruteforce(parse_group("C2^6"))  # 64**6 beyond default work cap


coprime_left = st.dictionaries(
    st.sampled_from([2, 3, 5]),
    st.lists(st.integers(1, 3), min_size=1, max_size=2).map(sorted),
    max_size=2,
).map(AbelianGroup.from_primary)
coprime_right = st.dictionaries(
    st.sampled_from([7, 11, 13]),
    st.lists(st.integers(1, 3), min_size=1, max_size=2).map(sorted),
    max_size=2,
).map(AbelianGroup.from_primary)


@given(coprime_left, coprime_right)
def test_f_multiplicative_over_coprime_orders(g1, g2):
    assert f_exact(direct_product(g1, g2)) == f_exact(g1) * f_exact(g2)


def test_two_rank_ratio_growth():
    # strict growth past any bound, against the closed-form product
    prev = Fraction(0)
    for n in range(1, 21):
        closed = Fraction(1, 2**n)
        for k in range(n):
            closed *= 2**n - 2**k
        assert two_rank_ratio(n) == closed
        assert closed > prev
        prev = closed
    assert two_rank_ratio(20) > 10**50
    assert two_rank_ratio(0) == 1


def test_f_log_examples(stream):
    lv = f_log(SymbolicGroup(0, ()), stream=stream)
    assert lv.log_value == 0.0 and lv.abs_error == 0.0

    lv = f_log(SymbolicGroup(1, ()), stream=stream)
    assert abs(lv.log_value - math.log(0.5)) <= lv.abs_error + 1e-15

    lv = f_log(SymbolicGroup.from_indices(0, [2]), stream=stream)  # C3, f = 2/3
    assert abs(lv.log_value - math.log(2 / 3)) <= lv.abs_error + 1e-15


@settings(max_examples=20)
@given(
    n=st.integers(0, 4),
    idx=st.lists(st.integers(2, 40), min_size=0, max_size=6, unique=True),
)
def test_f_log_agrees_with_exact(stream, n, idx):
    s = SymbolicGroup.from_indices(n, sorted(idx))
    lv = f_log(s, stream=stream)
    f = f_exact(s.materialize(stream))
    # |log_value - ln f| <= abs_error, verified through exact rationals
    err = Fraction(lv.abs_error)
    mid = Fraction(lv.log_value)
    # exp(mid - err) <= f <= exp(mid + err)  <=>  containment of ln f
    assert math.exp(float(mid - err)) <= float(f) * (1 + 1e-12)
    assert float(f) <= math.exp(float(mid + err)) * (1 + 1e-12)


def test_f_log_doubled_precision_pass(stream):
    s = SymbolicGroup.from_indices(2, [2, 3, 5, 8, 13])
    first = f_log(s, stream=stream)
    second = f_log(s, stream=stream, prec=384)
    # the reported error saturates at float granularity, so only <= holds
    assert second.abs_error <= first.abs_error
    assert abs(first.log_value - second.log_value) <= (
        first.abs_error + second.abs_error
    )


def test_logvalue_contract():
    with pytest.raises(ValueError):
        LogValue(0.0, -1e-9)
    lv = LogValue.from_bounds(-10, 10, 8)
    lo, hi = lv.interval()
    assert lo <= Fraction(-10, 256) and hi >= Fraction(10, 256)
