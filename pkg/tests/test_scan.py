import numpy as np
import pytest

from ecbias import algebra as alg
from ecbias import curve as cv
from ecbias.config import RunConfig
from ecbias.places import finite_places, place_count
from ecbias.scan import scan_curve
from ecbias.smallfield import LogField


def _generic_stratum(c, d):
    good, bad = [], []
    for pl in finite_places(c.field, d):
        ld = cv.local_data(c, pl)
        if ld.red == "good":
            good.append(ld.a)
        else:
            bad.append((ld.red, ld.a, ld.f))
    return sorted(good), sorted(bad)


def test_scan_matches_generic(legendre):
    scan = scan_curve(legendre, 3, RunConfig(d_max=3))
    for d in (1, 2, 3):
        st = scan.stratum(d)
        g, b = _generic_stratum(legendre, d)
        assert sorted(st.a_good.tolist()) == g
        assert sorted((ld.red, ld.a, ld.f) for ld in st.bad) == b
        assert st.n_good + len(st.bad) == place_count(legendre.field, d)


def test_scan_matches_generic_random(battery):
    c = battery[0]
    scan = scan_curve(c, 2, RunConfig(d_max=2))
    for d in (1, 2):
        st = scan.stratum(d)
        g, b = _generic_stratum(c, d)
        assert sorted(st.a_good.tolist()) == g
        assert sorted((ld.red, ld.a, ld.f) for ld in st.bad) == b


def test_deg1_hand_values(legendre):
    scan = scan_curve(legendre, 1, RunConfig(d_max=1))
    st = scan.stratum(1)
    assert sorted(st.a_good.tolist()) == [-2, -2, 2]
    assert [(ld.red, ld.a) for ld in st.bad] == [("split_mult", 1), ("split_mult", 1)]
    assert scan.infinite.red == "additive" and scan.conductor_degree == 4


def test_thread_count_invariance(legendre):
    from ecbias.scan import _SCAN_CACHE

    _SCAN_CACHE.clear()
    s1 = scan_curve(legendre, 6, RunConfig(d_max=6, threads=1, chunk=512))
    _SCAN_CACHE.clear()
    s2 = scan_curve(legendre, 6, RunConfig(d_max=6, threads=3, chunk=512))
    for d in range(1, 7):
        assert np.array_equal(s1.stratum(d).a_good, s2.stratum(d).a_good)
        assert np.array_equal(s1.stratum(d).reps, s2.stratum(d).reps)


def test_bsgs_on_forced_small_threshold(legendre):
    # force the BSGS path on degrees 3..4 and compare with the exhaustive path
    from ecbias.scan import _SCAN_CACHE

    _SCAN_CACHE.clear()
    lo = scan_curve(legendre, 4, RunConfig(d_max=4, threshold=24))
    _SCAN_CACHE.clear()
    hi = scan_curve(legendre, 4, RunConfig(d_max=4, threshold=1 << 16))
    for d in range(1, 5):
        assert np.array_equal(lo.stratum(d).a_good, hi.stratum(d).a_good), d


def test_conjugate_stability_trace_sums(legendre, battery):
    for c in (legendre, battery[1]):
        scan = scan_curve(c, 4, RunConfig(d_max=4))
        for d in range(1, 5):
            total = int(scan.stratum(d).a_good.sum())
            assert isinstance(total, int)
            assert abs(total) <= 2 * scan.stratum(d).n_good * (c.field.q ** d)


def test_engine_degree_reps_counts():
    for (p, k, d) in [(5, 1, 5), (7, 1, 4), (5, 2, 2)]:
        F = LogField.get(p, k * d)
        reps = F.degree_reps(p ** k, d)
        assert len(reps) == alg.monic_irreducible_count(p ** k, d)
