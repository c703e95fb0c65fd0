"""Partial Euler products at the central point, their limit check, and the
point-count product whose growth exponent tracks the analytic rank.

Per-place determinant at the centre: (q_v + 1 - a_v)/q_v at good places
(the normalised point count) and 1 - a_v/q_v at multiplicative places
(unitary normalisation; see :mod:`ecbias.bias` -- this is the convention
under which the product limit is the central L-value, and under which the
``log_euler`` series is exactly the log of this product).  Products are
accumulated in log space; per-degree strata are summed with compensated
summation before exponentiating.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .bias import FitResult, fit_loglog, BiasSeries, _as_scan
from .config import RunConfig
from .curve import GOOD, CurveSpec, LocalData
from .errors import ZeroLocalFactor
from .lseries import EULER_GAMMA, center_derivative, l_polynomial
from .scan import LocalScan


@dataclass(frozen=True)
class DRHReport:
    degrees: np.ndarray
    x: np.ndarray
    lhs: np.ndarray              # (d log q)^m * partial product
    rhs: float
    ratio: np.ndarray
    m: int
    delta: int
    gamma: float

    @property
    def final_ratio(self) -> float:
        return float(self.ratio[-1])


@dataclass(frozen=True)
class BSDReport:
    degrees: np.ndarray
    x: np.ndarray
    values: np.ndarray           # cumulative product of #E(k_v)/q_v, good v
    m1: int
    fitted_r: Optional[float]    # None when the grid is too short to fit

    @property
    def final_product(self) -> float:
        return float(self.values[-1]) if len(self.values) else 1.0


def _log_det_inv_stratum(st, extra: list[LocalData], good_only: bool) -> float:
    """Sum over the stratum of -log det(1 - M(v) q_v^{-1/2})."""
    parts = []
    a = st.a_good
    if len(a):
        # good det = (q_v + 1 - a_v)/q_v = 1 + (1 - a_v)/q_v
        parts.append(-float(np.sum(np.log1p((1.0 - a) / st.qv))))
    for ld in list(st.bad) + extra:
        if ld.red == GOOD:
            parts.append(-math.log1p((1.0 - ld.a) / ld.qv))
        elif not good_only:
            det = 1.0 - ld.a / ld.qv
            if det <= 0.0:
                raise ZeroLocalFactor(f"vanishing local determinant at {ld.place}")
            parts.append(-math.log(det))
    return math.fsum(parts)


def partial_euler_product(source: Union[CurveSpec, LocalScan],
                          d_max: Optional[int] = None,
                          config: Optional[RunConfig] = None, *,
                          good_only: bool = False) -> np.ndarray:
    """Cumulative product of det(1 - M(v) q_v^{-1/2})^{-1} per degree.

    Empty range (d_max = 0) is the empty product: an empty array whose
    conceptual final value is 1.
    """
    if d_max == 0:
        return np.empty(0, np.float64)
    scan = _as_scan(source, d_max, config)
    cfg = config or RunConfig(d_max=scan.d_max)
    d_max = d_max or scan.d_max
    logs = []
    running = 0.0
    for d in range(1, d_max + 1):
        extra = [scan.infinite] if (d == 1 and cfg.include_infinite) else []
        running += _log_det_inv_stratum(scan.stratum(d), extra, good_only)
        logs.append(running)
    return np.exp(np.array(logs))


def drh_check(source: Union[CurveSpec, LocalScan], d_max: Optional[int] = None,
              config: Optional[RunConfig] = None) -> DRHReport:
    """Compare (log x)^m times the partial product against its predicted
    limit sqrt(2)^delta / (e^{m gamma} m!) times the m-th central derivative."""
    scan = _as_scan(source, d_max, config)
    d_max = d_max or scan.d_max
    l1 = l_polynomial(scan.curve, 1, scan=scan, config=config)
    m = l1.rank
    delta = -1
    lm = center_derivative(l1, m)
    rhs = math.sqrt(2.0) ** delta * lm / (math.exp(m * EULER_GAMMA) * math.factorial(m))
    prod = partial_euler_product(scan, d_max, config)
    degrees = np.arange(1, d_max + 1)
    q = scan.q
    lhs = (degrees * math.log(q)) ** m * prod
    return DRHReport(degrees, q ** degrees.astype(np.int64), lhs, rhs,
                     lhs / rhs, m, delta, EULER_GAMMA)


def bsd_series(source: Union[CurveSpec, LocalScan], d_max: Optional[int] = None,
               config: Optional[RunConfig] = None) -> BSDReport:
    """Cumulative product of #E(k_v)/q_v over good places, with the growth
    exponent fitted against log log x (the rank r it tracks: r = m_1)."""
    scan = _as_scan(source, d_max, config) if d_max != 0 else None
    if d_max == 0:
        return BSDReport(np.empty(0, np.int64), np.empty(0, np.int64),
                         np.empty(0, np.float64), 0, None)
    cfg = config or RunConfig(d_max=scan.d_max)
    d_max = d_max or scan.d_max
    logs = []
    running = 0.0
    for d in range(1, d_max + 1):
        st = scan.stratum(d)
        part = float(np.sum(np.log1p((1.0 - st.a_good) / st.qv))) if len(st.a_good) else 0.0
        extras = [ld for ld in st.bad if ld.red == GOOD]
        if d == 1 and cfg.include_infinite and scan.infinite.red == GOOD:
            extras.append(scan.infinite)
        part += math.fsum(math.log1p((1.0 - ld.a) / ld.qv) for ld in extras)
        running += part
        logs.append(running)
    values = np.exp(np.array(logs))
    l1 = l_polynomial(scan.curve, 1, scan=scan, config=config)
    fitted = None
    if d_max >= 6:
        degrees = np.arange(1, d_max + 1)
        proxy = BiasSeries("log_euler", scan.q, degrees,
                           scan.q ** degrees.astype(np.int64),
                           np.log(values), 0.0, True, cfg.include_infinite)
        fitted = fit_loglog(proxy).slope
    return BSDReport(np.arange(1, d_max + 1),
                     scan.q ** np.arange(1, d_max + 1, dtype=np.int64),
                     values, l1.rank, fitted)
