import cmath
import math
import random
from fractions import Fraction

import numpy as np
import pytest

from ecbias import curve as cv
from ecbias.config import RunConfig
from ecbias.curve import LocalData
from ecbias.errors import (FunctionalEquationViolation, OrderMismatch,
                           TruncationTooSmall)
from ecbias.lseries import (LPolynomial, analytic_rank, center_derivative,
                            center_report, delta_invariant,
                            functional_equation_check, l_polynomial,
                            local_factor)
from ecbias.places import Place
from ecbias import algebra as alg
from ecbias.scan import scan_curve


def _good_ld(F5, a, text="T"):
    pl = Place.finite(alg.parse_poly(text, F5))
    return LocalData(pl, "good", a, 0, cv.satake_angle(a, pl.qv))


def test_local_factor_examples(F5):
    ld = _good_ld(F5, -2)
    assert local_factor(ld, 1) == [1, 2, 5]
    split = LocalData(Place.finite(alg.parse_poly("T", F5)), "split_mult",
                      1, 1, None, True)
    assert local_factor(split, 1) == [1, -1]
    # (1 - 5T)(1 + 6T + 25T^2)
    assert local_factor(ld, 2) == [1, 1, -5, -125]
    addive = LocalData(Place.finite(alg.parse_poly("T", F5)), "additive",
                       0, 2, None, False)
    assert local_factor(addive, 2) == [1]
    add_pot_mult = LocalData(Place.finite(alg.parse_poly("T", F5)), "additive",
                             0, 2, None, True)
    assert local_factor(add_pot_mult, 2) == [1, -1]


def test_legendre_l_polynomials(legendre):
    L1 = l_polynomial(legendre, 1, 6)
    assert L1.coeffs == (1,) and L1.degree == 0
    assert L1.epsilon == 1 and L1.rank == 0
    L2 = l_polynomial(legendre, 2, 6)
    assert L2.coeffs == (1,) and L2.rank == 0
    assert delta_invariant(L2) == -1
    assert L2(Fraction(1, 25)) == 1
    rep = center_report(legendre, trunc1=4, trunc2=6)
    assert rep.m == 0 and rep.value == 1.0 and rep.delta == -1
    assert rep.gamma == 0.5772156649015329


def test_truncation_self_consistency(legendre):
    a = l_polynomial(legendre, 1, 4)
    b = l_polynomial(legendre, 1, 6)
    assert a.coeffs == b.coeffs and a.degree == b.degree


def test_truncation_too_small(battery_data):
    for c, scan, L in battery_data:
        if L.degree >= 2:
            with pytest.raises(TruncationTooSmall):
                l_polynomial(c, 1, L.degree, scan=scan)
            break


def test_functional_equation_toys():
    assert functional_equation_check(LPolynomial(1, 5, (1,), 0, 0, 0, 4)) == 1
    assert functional_equation_check(LPolynomial(1, 5, (1, -5), 1, 0, 0, 4)) == -1
    assert functional_equation_check(LPolynomial(1, 5, (1, 1, 5), 2, 0, 0, 4)) == 1
    with pytest.raises(FunctionalEquationViolation):
        functional_equation_check(LPolynomial(1, 5, (1, 3), 1, 0, 0, 4))
    with pytest.raises(FunctionalEquationViolation):
        functional_equation_check(LPolynomial(1, 5, (1, 1, -5), 2, 0, 0, 4))


def test_analytic_rank_toys():
    assert analytic_rank(LPolynomial(1, 5, (1,), 0, 1, 0, 4)) == 0
    assert analytic_rank(LPolynomial(1, 5, (1, -10, 25), 2, 1, 0, 4)) == 2
    assert analytic_rank(LPolynomial(1, 5, (1, 0, -25), 2, 1, 0, 4)) == 1
    # n = 2 over non-square q: (1 - 125 T^2) = (1 - q^{3/2}T)(1 + q^{3/2}T)
    assert analytic_rank(LPolynomial(2, 5, (1, 0, -125), 2, 1, 0, 6)) == 1
    # n = 2 over square q = 25: centre root is rational
    assert analytic_rank(LPolynomial(2, 25, (1, -125), 1, 1, 0, 6)) == 1
    assert analytic_rank(LPolynomial(2, 25, (1, -250, 15625), 2, 1, 0, 6)) == 2


def test_center_derivative():
    assert center_derivative(LPolynomial(1, 5, (1,), 0, 1, 0, 4), 0) == 1.0
    v = center_derivative(LPolynomial(1, 5, (1, -5), 1, -1, 1, 4), 1)
    assert v == pytest.approx(math.log(5), abs=1e-14)
    with pytest.raises(OrderMismatch):
        center_derivative(LPolynomial(1, 5, (1,), 0, 1, 0, 4), 1)
    with pytest.raises(OrderMismatch):
        center_derivative(LPolynomial(1, 5, (1, 0, -25), 2, 1, 1, 4), 0)


def test_sym_trace_identity():
    # sin((n+1)t)/sin(t) equals the elementary-symmetric eigenvalue sums
    rng = random.Random(5)
    for _ in range(100):
        t = rng.uniform(1e-3, math.pi - 1e-3)
        alpha = cmath.exp(1j * t)
        for n in (1, 2):
            eig = [alpha ** (n - 2 * i) for i in range(n + 1)]
            lhs = sum(eig).real
            rhs = math.sin((n + 1) * t) / math.sin(t)
            assert abs(lhs - rhs) < 1e-10


def test_root_modulus_battery(battery_data):
    checked = 0
    for c, scan, L in battery_data:
        if L.degree == 0:
            continue
        roots = np.roots(list(reversed(L.coeffs)))
        assert np.all(np.abs(np.abs(roots) * L.base_q - 1.0) < 1e-8)
        checked += 1
        if checked >= 8:
            break
    assert checked > 0


def test_degree_formula_battery(battery_data):
    for c, scan, L in battery_data[:10]:
        assert L.degree == scan.conductor_degree - 4


def test_exclude_infinite_place(legendre):
    # dropping the infinite factor multiplies the series by that local factor
    scan = scan_curve(legendre, 6, RunConfig(d_max=6))
    full = l_polynomial(legendre, 1, 4, scan=scan)
    # additive at infinity for this curve: the local factor is trivial,
    # so only the conductor bookkeeping changes, not the product
    part = l_polynomial(legendre, 1, 4, scan=scan, include_infinite=False)
    assert part.coeffs == full.coeffs
