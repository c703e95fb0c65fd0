import math

import numpy as np
import pytest

from ecbias.classic import (chi4_bias_series, deligne_bound_ok, pi_weighted,
                            sieve_primes, tau_bias_series, tau_table)
from ecbias.errors import LimitTooLarge, NegativeExponent, NotCoprime


def test_sieve():
    assert sieve_primes(10).primes.tolist() == [2, 3, 5, 7]
    assert sieve_primes(2).primes.tolist() == [2]
    assert len(sieve_primes(10 ** 6).primes) == 78498
    with pytest.raises(LimitTooLarge):
        sieve_primes(10 ** 9 + 1)


def test_pi_weighted():
    assert pi_weighted(10, 4, 3, 0.5) == pytest.approx(
        1 / math.sqrt(3) + 1 / math.sqrt(7), abs=1e-14)
    assert pi_weighted(10, 4, 1, 0) == 1.0
    assert pi_weighted(2, 4, 1, 0.5) == 0.0
    with pytest.raises(NotCoprime):
        pi_weighted(10, 4, 2, 0.5)
    with pytest.raises(NegativeExponent):
        pi_weighted(10, 4, 1, -1.0)


def test_pi_weighted_bookkeeping():
    x = 1000
    n_primes = len(sieve_primes(x).primes)
    assert pi_weighted(x, 4, 1, 0) + pi_weighted(x, 4, 3, 0) + 1 == n_primes
    # monotone in x
    assert pi_weighted(100, 4, 3, 0.5) <= pi_weighted(1000, 4, 3, 0.5)


def test_chi4_series():
    s = chi4_bias_series(10 ** 4, 1.25)
    i5 = int(np.where(s.x == 5)[0][0])
    assert s.values[i5] == pytest.approx(1 / math.sqrt(3) - 1 / math.sqrt(5),
                                         abs=1e-14)
    i10 = int(np.where(s.x == 10)[0][0])
    assert s.values[i10] == pytest.approx(
        1 / math.sqrt(3) + 1 / math.sqrt(7) - 1 / math.sqrt(5), abs=1e-14)
    assert np.all(s.values[s.x >= 5] > 0)
    assert s.companion[i10] == pytest.approx(0.5 * math.log(math.log(10)))


def test_tau_table():
    t = tau_table(1000)
    assert t[1] == 1 and t[2] == -24 and t[3] == 252
    assert t[4] == -1472 and t[5] == 4830 and t[6] == -6048
    # multiplicativity and the Hecke recursion at p^2
    assert t[6] == t[2] * t[3] and t[10] == t[2] * t[5] and t[15] == t[3] * t[5]
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31):
        assert t[p * p] == t[p] ** 2 - p ** 11
    assert deligne_bound_ok(t, sieve_primes(997).primes)
    with pytest.raises(LimitTooLarge):
        tau_table(10 ** 6 + 1)


def test_tau_bias_series():
    s = tau_bias_series(10 ** 4, 1.25)
    i2 = int(np.where(s.x == 2)[0][0])
    assert s.values[i2] == pytest.approx(-24 / 64, abs=1e-14)
    i3 = int(np.where(s.x == 3)[0][0])
    assert s.values[i3] == pytest.approx(-0.375 + 252 / 729, abs=1e-12)
    assert s.empirical
    with pytest.raises(LimitTooLarge):
        tau_bias_series(10 ** 6)
