import math
import random

import pytest

from ecbias import algebra as alg
from ecbias import curve as cv
from ecbias.errors import (HasseViolation, IsotrivialOrConstant, ParseError,
                           SingularCurve)
from ecbias.places import Place


def _poly(F, text):
    return alg.parse_poly(text, F)


def test_legendre_invariants(legendre, F5):
    c = legendre
    assert c.disc == _poly(F5, "T^2") * _poly(F5, "T+4") ** 2  # 16 = 1 mod 5
    assert c.c4 ** 3 - c.c6 ** 2 == c.disc * 1728
    cv.check_nonconstant(c)
    assert c.j_den == _poly(F5, "T^2") * _poly(F5, "T+4") ** 2


def test_constant_and_isotrivial(F5):
    zero = alg.Poly(F5)
    const = cv.CurveSpec(F5, zero, zero, zero, zero, alg.Poly.constant(F5, 1))
    assert const.disc == alg.Poly.constant(F5, -432)
    assert const.j_num.is_zero()
    with pytest.raises(IsotrivialOrConstant):
        cv.check_nonconstant(const)
    j1728 = cv.CurveSpec(F5, zero, zero, zero, _poly(F5, "T"), zero)
    with pytest.raises(IsotrivialOrConstant):
        cv.check_nonconstant(j1728)


def test_singular(F5):
    zero = alg.Poly(F5)
    with pytest.raises(SingularCurve):
        cv.CurveSpec(F5, zero, zero, zero, zero, zero)


def test_infinite_place_model(legendre, F5):
    model, m = cv.infinite_place_model(legendre)
    S = alg.Poly.x(F5)
    assert m == 1
    assert model.disc.valuation(S) == 8
    assert model.c4.valuation(S) == 2
    # constant-coefficient curve is unchanged with m = 0
    zero = alg.Poly(F5)
    const = cv.CurveSpec(F5, zero, zero, zero, alg.Poly.constant(F5, 1),
                         alg.Poly.constant(F5, 1))
    model2, m2 = cv.infinite_place_model(const)
    assert m2 == 0 and model2.coefficients() == const.coefficients()
    # y^2 = x^3 + Tx + 1 also scales with m = 1
    c3 = cv.CurveSpec(F5, zero, zero, zero, _poly(F5, "T"),
                      alg.Poly.constant(F5, 1))
    _, m3 = cv.infinite_place_model(c3)
    assert m3 == 1


def test_minimalize(F5):
    zero = alg.Poly(F5)
    u, w = _poly(F5, "T+1"), _poly(F5, "T+2")
    c = cv.CurveSpec(F5, zero, zero, zero, _poly(F5, "T^4") * u,
                     _poly(F5, "T^6") * w)
    t = cv.minimalize_at(c, Place.finite(_poly(F5, "T")))
    assert t[3] == u and t[4] == w
    # already-minimal inputs are unchanged
    leg = cv.load_curve(__import__("tests.conftest", fromlist=["x"]).LEGENDRE_PATH)
    A, B = leg.short_AB()
    t2 = cv.minimalize_at(leg, Place.finite(_poly(F5, "T")))
    assert t2[3] == A and t2[4] == B
    t3 = cv.minimalize_at(leg, Place.infinite(F5))
    model, _ = cv.infinite_place_model(leg)
    assert t3[3] == model.short_AB()[0]


def test_local_data_examples(legendre, F5):
    ld = cv.local_data(legendre, Place.finite(_poly(F5, "T+3")))   # T - 2
    assert ld.red == "good" and ld.a == -2 and ld.qv == 5
    assert abs(ld.theta - math.acos(-1 / math.sqrt(5))) < 1e-12
    assert abs(ld.a - 2 * math.sqrt(ld.qv) * math.cos(ld.theta)) < 1e-12
    ld0 = cv.local_data(legendre, Place.finite(_poly(F5, "T")))
    assert (ld0.red, ld0.a, ld0.f, ld0.j_pole) == ("split_mult", 1, 1, True)
    ldi = cv.local_data(legendre, Place.infinite(F5))
    assert (ldi.red, ldi.a, ldi.f, ldi.j_pole) == ("additive", 0, 2, True)


def test_conductor_degree(legendre):
    assert cv.conductor_degree(legendre) == 4


def test_satake_angle():
    assert cv.satake_angle(0, 25) == pytest.approx(math.pi / 2)
    assert cv.satake_angle(-2, 5) == pytest.approx(2.034443936, abs=1e-9)
    with pytest.raises(HasseViolation):
        cv.satake_angle(6, 5)


def test_shift_invariance(legendre, F5):
    # x -> x + r fixes c4, c6, disc and the classification at every place
    rng = random.Random(3)
    r = alg.Poly.from_ints(F5, [rng.randrange(5) for _ in range(3)])
    a1, a2, a3, a4, a6 = legendre.coefficients()
    shifted = cv.CurveSpec(
        F5, a1, a2 + r * 3, a3 + r * a1,
        a4 + r * a2 * 2 + r * r * 3,
        a6 + r * a4 + r * r * a2 + r * r * r)
    assert shifted.c4 == legendre.c4 and shifted.disc == legendre.disc
    for text in ("T", "T+1", "T+3", "T^2+2"):
        pl = Place.finite(_poly(F5, text))
        a = cv.local_data(legendre, pl)
        b = cv.local_data(shifted, pl)
        assert (a.red, a.a, a.f) == (b.red, b.a, b.f)


def test_curve_text_parsing(F5):
    c = cv.curve_from_text("q = 5\na = [0, 4*T+4, 0, T, 0]")
    assert c.disc == _poly(F5, "T^2") * _poly(F5, "T+4") ** 2
    c2 = cv.curve_from_text("p = 5; k = 1; a = [0, 4*T+4, 0, T, 0]")
    assert c2 == c
    for bad in ("a = [1,2,3]", "q = 6; a = [0,0,0,T,1]",
                "q = 5; a = [0,0,0,T]", "q = 25; p = 5; k = 1; a = [0,0,0,T,1]"):
        with pytest.raises(ParseError):
            cv.curve_from_text(bad)


def test_battery_weierstrass_identity(battery):
    for c in battery[:10]:
        assert c.c4 ** 3 - c.c6 ** 2 == c.disc * 1728
