from math import gcd

import pytest
from hypothesis import given, settings, strategies as st

from conftest import naive_tau
from tauvalues.arith import divisor_sigma, factor, omega_counts, primes_up_to, valuation
from tauvalues.tau import (
    ResourceLimitError,
    TauRangeError,
    _kronecker_square,
    expand_delta,
    is_ordinary,
    load_table,
    ordp_tau,
    save_table,
    tau_of,
    tau_prime_power,
    tau_prime_power_seq,
)


def test_matches_naive_expansion():
    assert list(expand_delta(600).coeffs) == naive_tau(600)


def test_small_values():
    assert expand_delta(1)[1] == 1
    t = expand_delta(3)
    assert t[2] == -24 and t[3] == 252
    assert expand_delta(300)[277] == -2 * 8209466002937
    with pytest.raises(TauRangeError):
        t[4]
    with pytest.raises(TauRangeError):
        t[0]


def test_cap_and_bad_input():
    with pytest.raises(ResourceLimitError):
        expand_delta(11, cap=10)
    with pytest.raises(ValueError):
        expand_delta(0)


@given(st.lists(st.integers(min_value=-(10**30), max_value=10**30), min_size=1, max_size=40))
@settings(max_examples=100)
def test_kronecker_square_matches_schoolbook(series):
    n = len(series)
    expected = [sum(series[i] * series[k - i] for i in range(k + 1)) for k in range(n)]
    assert _kronecker_square(series) == expected


def test_tau_prime_power_examples(table):
    assert tau_prime_power(12345, 7, 0) == 1
    assert tau_prime_power(-24, 2, 2) == -1472 == table[4]
    assert tau_prime_power(252, 3, 3) == 252 * (63504 - 354294) == table[27]
    assert tau_prime_power_seq(-24, 2, 3) == [1, -24, -1472, table[8]]


def test_tau_of(table):
    assert tau_of(1, table) == 1
    assert tau_of(6, table) == -6048 == table[6]
    assert tau_of(4603, table) == 4 * 56958468932026008713
    # beyond the table, assembled from prime powers
    assert tau_of(2**20 * 3, table) == tau_prime_power(-24, 2, 20) * 252
    with pytest.raises(TauRangeError):
        tau_of(10007 * 2, table)


def test_ordinary(table):
    assert [is_ordinary(p, table) for p in (2, 3, 5, 7)] == [False] * 4
    assert is_ordinary(11, table)
    assert not is_ordinary(2411, table)
    non_ordinary = [p for p in primes_up_to(2411) if not is_ordinary(p, table)]
    assert non_ordinary == [2, 3, 5, 7, 2411]
    assert ordp_tau(2, table) == 3


def test_factor_tau_967(table):
    f = factor(table[967])
    assert f.factors == ((2, 3), (2311913038549627, 1))
    assert f.certified


def test_multiplicativity(table):
    n_max = 2000
    for m in range(2, n_max):
        for n in range(m + 1, n_max // m + 1):
            if gcd(m, n) == 1:
                assert table[m * n] == table[m] * table[n]


def test_hecke_chain(table):
    for p in primes_up_to(2000):
        k = 1
        while p ** (k + 1) <= 2000:
            k += 1
        seq = tau_prime_power_seq(table[p], p, k)
        for e in range(1, k + 1):
            assert table[p**e] == seq[e]


def test_parity_law(table):
    odd_squares = {k * k for k in range(1, 101, 2)}
    for n, v in table.items():
        assert (v % 2 == 1) == (n in odd_squares)


def test_deligne_bound(table):
    for p in primes_up_to(5000):
        assert table[p] ** 2 < 4 * p**11


def test_valuation_law(table):
    for p in primes_up_to(50):
        r = ordp_tau(p, table)
        if r > 0:
            for m in range(1, 7):
                assert valuation(tau_prime_power(table[p], p, m), p) == r * m


def test_zero_seed_law():
    for p in primes_up_to(20):
        for m in range(9):
            expected = 0 if m % 2 else (-(p**11)) ** (m // 2)
            assert tau_prime_power(0, p, m) == expected


def test_omega_inequality(table):
    # Omega(tau(n)) >= sum(sigma_0(d_i) - 1) >= omega(n) for n built from ordinary primes
    for n in range(2, 1001):
        f = factor(n)
        if any(p <= 7 for p in f.primes()):
            continue
        # n = prod p_i^(d_i - 1); the middle term counts divisors of each d_i
        middle = sum(divisor_sigma(e + 1, 0) - 1 for _, e in f.factors)
        big_omega = omega_counts(factor(table[n]))[1]
        assert big_omega >= middle >= len(f.factors)


def test_cache_roundtrip(tmp_path):
    t = expand_delta(500)
    path = tmp_path / "tau.bin"
    save_table(t, path)
    data = path.read_bytes()
    assert data[:4] == b"TAUT" and data[4] == 1
    assert int.from_bytes(data[5:13], "little") == 500
    assert load_table(path) == t
    path.write_bytes(b"NOPE" + data[4:])
    with pytest.raises(ValueError):
        load_table(path)
    path.write_bytes(data + b"\x00")
    with pytest.raises(ValueError):
        load_table(path)
