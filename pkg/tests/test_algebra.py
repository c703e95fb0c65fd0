import random

import pytest

from ecbias import algebra as alg
from ecbias.errors import (NotPrime, ParseError, ReducibleModulus,
                           SmallCharacteristic, ZeroPolynomial)


def test_make_extension_field_examples():
    F5 = alg.make_extension_field(5, 1)
    assert F5.q == 5 and F5.p == 5 and F5.k == 1
    F25 = alg.make_extension_field(5, 2)
    assert F25.q == 25
    assert [c.index() for c in F25.modulus] == [2, 0, 1]  # T^2 + 2
    with pytest.raises(NotPrime):
        alg.make_extension_field(4, 1)
    with pytest.raises(SmallCharacteristic):
        alg.make_extension_field(3, 1)


def test_field_roundtrip_and_fermat():
    rng = random.Random(1)
    for (p, k) in [(5, 1), (5, 2), (5, 3), (7, 1), (7, 2), (5, 4)]:
        F = alg.make_extension_field(p, k)
        for _ in range(40):
            a = F.from_index(rng.randrange(1, F.q))
            b = F.from_index(rng.randrange(F.q))
            assert (a * b) * a ** -1 == b
        for i in range(F.q):  # exhaustive a^q = a, q <= 625
            e = F.from_index(i)
            assert e ** F.q == e


def test_sqrt():
    for (p, k) in [(5, 1), (5, 2), (7, 1), (13, 1)]:
        F = alg.make_extension_field(p, k)
        squares = 0
        for i in range(F.q):
            e = F.from_index(i)
            r = e.sqrt()
            if r is not None:
                assert r * r == e
                squares += 1
        assert squares == (F.q - 1) // 2 + 1


def test_is_irreducible_examples(F5):
    assert not alg.is_irreducible(alg.parse_poly("T^2+1", F5))
    assert alg.is_irreducible(alg.parse_poly("T^2+2", F5))
    assert alg.is_irreducible(alg.parse_poly("T", F5))
    with pytest.raises(ZeroPolynomial):
        alg.is_irreducible(alg.Poly(F5))


def test_enumerate_monic_irreducibles(F5):
    names = [alg.poly_str(f) for f in alg.enumerate_monic_irreducibles(F5, 1)]
    assert names == ["T", "T+1", "T+2", "T+3", "T+4"]
    for q, kdeg in [(5, 6), (7, 4), (25, 2)]:
        field = alg.make_extension_field(*((q, 1) if q in (5, 7) else (5, 2)))
        for d in range(1, kdeg + 1):
            got = alg.enumerate_monic_irreducibles(field, d)
            assert len(got) == alg.monic_irreducible_count(q, d)
            assert all(f.degree() == d and f.is_monic() for f in got)
            idx = [f.packed_index() for f in got]
            assert idx == sorted(idx)


def test_necklace_counts():
    assert alg.monic_irreducible_count(5, 2) == 10
    assert alg.monic_irreducible_count(5, 3) == 40
    for q in (5, 7, 25):
        for d in range(1, 7):
            n = alg.monic_irreducible_count(q, d)
            assert n > 0 and n * d <= q ** d


def _series_mul(a, b, n):
    out = [0] * n
    for i, x in enumerate(a[:n]):
        if x:
            for j, y in enumerate(b[: n - i]):
                out[i + j] += x * y
    return out


def test_zeta_euler_product_identity(F5):
    # product over places of degree <= D (infinite place included) of
    # (1 - T^deg)^(-1) agrees with 1/((1-T)(1-qT)) through degree D
    q, D = 5, 6
    n = D + 1
    series = [1] + [0] * D
    counts = {d: alg.monic_irreducible_count(q, d) for d in range(1, D + 1)}
    counts[1] += 1  # the infinite place has degree 1
    for d, cnt in counts.items():
        geo = [1 if i % d == 0 else 0 for i in range(n)]  # 1/(1 - T^d)
        for _ in range(cnt):
            series = _series_mul(series, geo, n)
    expect = [(q ** (m + 1) - 1) // (q - 1) for m in range(n)]
    assert series == expect


def test_residue_field(F5):
    rf = alg.residue_field(alg.parse_poly("T+3", F5), F5)  # T - 2
    assert rf.q == 5
    assert alg.reduce_mod(alg.parse_poly("T^3", F5), rf).index() == 3
    rf2 = alg.residue_field(alg.parse_poly("T^2+2", F5), F5)
    assert rf2.q == 25
    # the image of T generates: T^2 + 2 = 0 in rf2
    t = rf2.from_coeffs([F5.zero(), F5.one()])
    assert (t * t + rf2.element(2)).is_zero()
    # homomorphism on samples
    f = alg.parse_poly("T^3+4*T+2", F5)
    g = alg.parse_poly("2*T^2+T+3", F5)
    assert alg.reduce_mod(f * g, rf2) == alg.reduce_mod(f, rf2) * alg.reduce_mod(g, rf2)
    with pytest.raises(ReducibleModulus):
        alg.residue_field(alg.parse_poly("T^2+1", F5), F5)


def test_parse_and_format(F5):
    f = alg.parse_poly("T^3+4*T+2", F5)
    assert alg.poly_str(f) == "T^3+4*T+2"
    assert alg.parse_poly("7", F5) == alg.Poly.constant(F5, 2)
    assert alg.parse_poly("-T^2 + 2*T - 1", F5) == alg.parse_poly("4*T^2+2*T+4", F5)
    assert alg.parse_poly("(T+1)*(T+2)", F5) == alg.parse_poly("T^2+3*T+2", F5)
    for bad in ("", "T^", "x+1", "T**2", "1 +"):
        with pytest.raises(ParseError):
            alg.parse_poly(bad, F5)


def test_poly_arithmetic(F5):
    rng = random.Random(2)

    def rand_poly(d):
        return alg.Poly.from_ints(F5, [rng.randrange(5) for _ in range(d + 1)])

    for _ in range(25):
        a, b = rand_poly(rng.randrange(6)), rand_poly(rng.randrange(4))
        if b.is_zero():
            continue
        qt, r = divmod(a, b)
        assert qt * b + r == a
        assert r.degree() < b.degree() or r.is_zero()
    assert alg.Poly(F5).degree() == -1


def test_factor(F5):
    f = (alg.parse_poly("T", F5) ** 2 * alg.parse_poly("T^2+2", F5)
         * alg.parse_poly("T^3+T+1", F5))
    fac = alg.factor(f)
    rebuilt = alg.Poly.constant(F5, 1)
    for g, e in fac:
        assert alg.is_irreducible(g)
        rebuilt = rebuilt * g ** e
    assert rebuilt == f.monic()
