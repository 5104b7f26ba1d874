import math

import pytest
from hypothesis import given, strategies as st

from seslab.numth import factor_counts, factorize, is_prime, minimal_k, prime_power, zsigmondy_primes


def brute_zsigmondy(a, m):
    n = a**m - 1
    return [ell for ell in range(2, n + 1)
            if n % ell == 0 and all(ell % d for d in range(2, int(ell**0.5) + 1))
            and all((a**i - 1) % ell for i in range(1, m))]


@pytest.mark.parametrize("n, expected", [(63, [3, 3, 7]), (80, [2, 2, 2, 2, 5]), (1, [])])
def test_factorize_examples(n, expected):
    assert factorize(n) == expected


@given(st.integers(min_value=1, max_value=10**9))
def test_factorize_roundtrip(n):
    fs = factorize(n)
    assert math.prod(fs) == n
    assert all(is_prime(f) for f in fs)
    assert fs == sorted(fs)


def test_factorize_rejects_zero():
    with pytest.raises(ValueError):
        factorize(0)


def test_factor_counts_and_prime_power():
    assert factor_counts(720) == {2: 4, 3: 2, 5: 1}
    assert prime_power(81) == (3, 4)
    assert prime_power(7) == (7, 1)
    for bad in (1, 6, 12):
        with pytest.raises(ValueError):
            prime_power(bad)


@pytest.mark.parametrize("a, m, primes", [(2, 6, ()), (3, 4, (5,)), (2, 4, (5,))])
def test_zsigmondy_examples(a, m, primes):
    z = zsigmondy_primes(a, m)
    assert z.primes == primes
    assert z.exceptional == (primes == ())


@pytest.mark.parametrize("a", [2, 3, 4, 5, 6])
@pytest.mark.parametrize("m", [2, 3, 4, 5, 6])
def test_zsigmondy_matches_brute_force(a, m):
    assert list(zsigmondy_primes(a, m).primes) == brute_zsigmondy(a, m)


@pytest.mark.parametrize("p, a", [(2, 1), (2, 2), (2, 3), (2, 4), (3, 1), (3, 2), (5, 1), (7, 1), (11, 1), (13, 1)])
def test_zsigmondy_divides_p_a_plus_1(p, a):
    for ell in zsigmondy_primes(p, 2 * a).primes:
        assert (p**a + 1) % ell == 0


def test_zsigmondy_to_json():
    assert zsigmondy_primes(3, 4).to_json() == {"base": 3, "exponent": 4, "primes": [5], "exceptional": False}


@pytest.mark.parametrize("order, p, k", [(1, 5, 1), (4, 3, 2), (5, 2, 4)])
def test_minimal_k_examples(order, p, k):
    assert minimal_k(order, p) == k


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9, 11, 13, 16])
def test_minimal_k_of_q_plus_1(q):
    p, a = prime_power(q)
    assert minimal_k(q + 1, p) == 2 * a


@given(st.sampled_from([2, 3, 5, 7]), st.integers(min_value=1, max_value=500))
def test_minimal_k_is_least(p, order):
    if order % p == 0:
        with pytest.raises(ValueError):
            minimal_k(order, p)
        return
    k = minimal_k(order, p)
    assert (p**k - 1) % order == 0
    assert all((p**i - 1) % order for i in range(1, k))
