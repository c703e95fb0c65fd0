import os

import numpy as np
import pytest

import ecbias
from ecbias import algebra as alg
from ecbias import curve as cv
from ecbias.config import RunConfig
from ecbias.errors import EcbiasError
from ecbias.lseries import l_polynomial
from ecbias.scan import scan_curve

LEGENDRE_PATH = os.path.join(os.path.dirname(ecbias.__file__), "data",
                             "legendre5.curve")

BATTERY_SEED = 20260809
BATTERY_SIZE = 50
BATTERY_MAX_COND = 8


@pytest.fixture(scope="session")
def F5():
    return alg.make_extension_field(5)


@pytest.fixture(scope="session")
def legendre():
    return cv.load_curve(LEGENDRE_PATH)


def make_battery(field, size=BATTERY_SIZE, seed=BATTERY_SEED,
                 max_cond=BATTERY_MAX_COND, max_coeff_deg=3):
    """Accepted random curves with coefficient degrees <= 3.

    Conductor degree is capped so the exact L-polynomial (which needs
    local data at every place of degree up to its truncation order) stays
    inside the table engine's reach.
    """
    rng = np.random.default_rng(seed)

    def rand_poly():
        deg = int(rng.integers(0, max_coeff_deg + 1))
        return alg.Poly.from_ints(field,
                                  [int(x) for x in rng.integers(0, field.q, deg + 1)])

    out, tried = [], 0
    while len(out) < size and tried < 100 * size:
        tried += 1
        try:
            c = cv.CurveSpec(field, *[rand_poly() for _ in range(5)])
            cv.check_nonconstant(c)
            cond = cv.conductor_degree(c)
        except EcbiasError:
            continue
        if cond <= max_cond:
            out.append(c)
    assert len(out) == size, "battery generation fell short"
    return out


@pytest.fixture(scope="session")
def battery(F5):
    return make_battery(F5)


@pytest.fixture(scope="session")
def battery_data(battery):
    """Per curve: (curve, scan to degree 8, exact L-polynomial)."""
    cfg = RunConfig(d_max=8)
    out = []
    for c in battery:
        scan = scan_curve(c, 8, cfg)
        L = l_polynomial(c, 1, scan=scan)
        out.append((c, scan, L))
    return out


@pytest.fixture(scope="session")
def e1_scan10(legendre):
    return scan_curve(legendre, 10, RunConfig(d_max=10))


@pytest.fixture(scope="session")
def eps_minus(battery_data):
    """First battery curve with functional-equation sign -1 (so m1 >= 1)."""
    for c, scan, L in battery_data:
        if L.epsilon == -1:
            return c, L
    raise AssertionError("no sign -1 curve in the battery")


@pytest.fixture(scope="session")
def eps_minus_scan10(eps_minus):
    c, _ = eps_minus
    return scan_curve(c, 10, RunConfig(d_max=10))
