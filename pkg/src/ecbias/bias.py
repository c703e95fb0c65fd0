"""Cumulative partial-sum series over places, and their log log x fits.

Every series is sampled on the degree grid x = q^d, d = 1..d_max: the
value at d accumulates all places of norm at most q^d that are in scope.
Series kinds:

``a_weighted``    sum of a_v / q_v over all places (bad places enter with
                  a_v in {0, +-1} taken literally).
``sym2_plus``     good places only: (tr Sym^2 M + tr M)/sqrt(q_v), i.e.
                  (1 + 2 cos theta_v + 2 cos 2 theta_v) / sqrt(q_v).
``sym2_minus``    good places only: (tr Sym^2 M - tr M)/sqrt(q_v), i.e.
                  (1 - 2 cos theta_v + 2 cos 2 theta_v) / sqrt(q_v).
``mertens_II``    (1/2) sum of tr(M(v)^2) / q_v over all places.
``tail_III``      sum over k >= 3 of (1/k) tr(M(v)^k) / q_v^{k/2}.
``log_euler``     the sum of the three series above it pairs with: the log
                  of the partial Euler product at the centre.
``t_e``           the rescaled good-trace sum -(d / q^{d/2}) *
                  sum_{deg v <= d} a_v q^{-deg(v)/2}.

Bad-place normalisation: the unitary one, tr(M(v)^k) = (a_v / sqrt(q_v))^k
at multiplicative places, which is the unique choice that keeps
``log_euler`` equal to the logarithm of the partial Euler product whose
limit is pinned by the central L-value (``a_weighted`` keeps the literal
a_v / q_v of the bias statements; at good places the two conventions
coincide).  Predicted slopes: a_weighted -> 1/2 - m1; sym2_plus ->
1 - m1 - m2; sym2_minus -> m1 - m2; mertens_II -> -1/2; tail_III -> 0;
log_euler -> -m1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .config import RunConfig
from .curve import GOOD, CurveSpec, LocalData
from .errors import DegenerateGrid
from .scan import LocalScan, Stratum, scan_curve

KINDS = ("a_weighted", "sym2_plus", "sym2_minus", "mertens_II", "tail_III",
         "log_euler", "t_e")

_GOOD_ONLY = {"sym2_plus", "sym2_minus", "t_e"}


@dataclass(frozen=True)
class BiasSeries:
    kind: str
    q: int
    degrees: np.ndarray          # 1..d_max
    x: np.ndarray                # q^d
    values: np.ndarray           # cumulative sums
    predicted_slope: float
    good_only: bool
    include_infinite: bool

    def loglog_x(self) -> np.ndarray:
        return np.log(self.degrees * math.log(self.q))


@dataclass(frozen=True)
class FitResult:
    slope: float
    intercept: float
    residual_range: float
    window: tuple[int, int]      # first and last degree of the fit window


def tail_kmax(qv: int) -> int:
    """Cut the k-sum when the geometric tail q_v^(-k/2) drops below 1e-12."""
    return max(3, math.ceil(2 * (12 * math.log(10)) / math.log(qv)))


def _good_terms(kind: str, a: np.ndarray, qv: float) -> float:
    if len(a) == 0:
        return 0.0
    sq = math.sqrt(qv)
    if kind == "a_weighted":
        return float(int(a.sum())) / qv
    cos1 = a / (2.0 * sq)
    if kind == "sym2_plus":
        # tr(Sym^2 M) + tr(M): the middle +1 eigenvalue of the symmetric
        # square must ride along or the sum diverges like q^{d/2}/d
        cos2 = 2.0 * cos1 * cos1 - 1.0
        return float(np.sum(1.0 + 2.0 * cos1 + 2.0 * cos2)) / sq
    if kind == "sym2_minus":
        cos2 = 2.0 * cos1 * cos1 - 1.0
        return float(np.sum(1.0 - 2.0 * cos1 + 2.0 * cos2)) / sq
    if kind == "mertens_II":
        tr2 = a.astype(np.float64) ** 2 / qv - 2.0
        return 0.5 * float(np.sum(tr2)) / qv
    if kind == "tail_III":
        theta = np.arccos(np.clip(cos1, -1.0, 1.0))
        total = 0.0
        for k in range(3, tail_kmax(int(qv)) + 1):
            total += float(np.sum(2.0 * np.cos(k * theta))) / (k * qv ** (k / 2.0))
        return total
    raise ValueError(kind)


def _bad_terms(kind: str, ld: LocalData) -> float:
    qv = float(ld.qv)
    a = float(ld.a)
    if kind == "a_weighted":
        return a / qv
    if kind == "mertens_II":
        return 0.5 * (a * a / qv) / qv
    if kind == "tail_III":
        total = 0.0
        for k in range(3, tail_kmax(ld.qv) + 1):
            total += (a / qv) ** k / k
        return total
    raise ValueError(kind)


def _stratum_sum(kind: str, st: Stratum, extra_bad: list[LocalData]) -> float:
    if kind == "log_euler":
        return sum(_stratum_sum(k, st, extra_bad)
                   for k in ("a_weighted_unitary", "mertens_II", "tail_III"))
    if kind == "a_weighted_unitary":
        # the I-term of the product log; identical to a_weighted here
        # because (a_v/sqrt(q_v))/sqrt(q_v) = a_v/q_v at every place
        kind = "a_weighted"
    good = _good_terms(kind, st.a_good, float(st.qv))
    if kind in _GOOD_ONLY:
        bads = [ld for ld in list(st.bad) + extra_bad if ld.red == GOOD]
    else:
        bads = list(st.bad) + extra_bad
    bad = math.fsum(_bad_terms(kind, ld) if ld.red != GOOD else
                    _good_terms(kind, np.array([ld.a], np.int64), float(ld.qv))
                    for ld in bads)
    return good + bad


def bias_series(source: Union[CurveSpec, LocalScan], kind: str,
                d_max: Optional[int] = None,
                config: Optional[RunConfig] = None,
                ranks: Optional[tuple[int, int]] = None) -> BiasSeries:
    """The cumulative series of the given kind on the degree grid.

    ``ranks`` = (m1, m2) skips the L-polynomial computation behind the
    predicted slope when the caller already knows the vanishing orders.
    """
    if kind == "t_e":
        return t_e_series(source, d_max, config)[0]
    if kind not in KINDS:
        raise ValueError(f"unknown series kind {kind!r}")
    scan = _as_scan(source, d_max, config)
    cfg = config or RunConfig(d_max=scan.d_max)
    d_max = d_max or scan.d_max
    degrees = np.arange(1, d_max + 1)
    vals = np.empty(d_max, np.float64)
    running = 0.0
    for d in degrees:
        extra = [scan.infinite] if (d == 1 and cfg.include_infinite) else []
        running += _stratum_sum(kind, scan.stratum(int(d)), extra)
        vals[d - 1] = running
    m1, m2 = ranks if ranks is not None else _ranks_if_needed(kind, scan)
    return BiasSeries(kind, scan.q, degrees, scan.q ** degrees.astype(np.int64),
                      vals, predicted_slope(kind, m1, m2),
                      kind in _GOOD_ONLY, cfg.include_infinite)


def _as_scan(source, d_max, config) -> LocalScan:
    if isinstance(source, LocalScan):
        if d_max is not None and d_max > source.d_max:
            raise DegenerateGrid("scan is shallower than the requested d_max")
        return source
    if d_max is None:
        d_max = (config or RunConfig()).d_max
    cfg = config or RunConfig(d_max=d_max)
    return scan_curve(source, d_max, cfg)


def _ranks_if_needed(kind: str, scan: LocalScan) -> tuple[int, int]:
    from .lseries import l_polynomial

    if kind in ("a_weighted", "log_euler"):
        return l_polynomial(scan.curve, 1, scan=scan).rank, 0
    if kind in ("sym2_plus", "sym2_minus"):
        l1 = l_polynomial(scan.curve, 1, scan=scan)
        l2 = l_polynomial(scan.curve, 2, scan=scan)
        return l1.rank, l2.rank
    return 0, 0


def predicted_slope(kind: str, m1: int = 0, m2: int = 0) -> float:
    """The coefficient of log log x that the theory predicts for the kind.

    The symmetric-square slopes carry a -1 relative to the rank-only
    heuristic: the middle (+1) eigenvalue of Sym^2 M feeds the plain
    Mertens sum of 1/q_v into the second-order term, so the Adams-square
    order at s = 1 is +1 for Sym^2 M (not -1 as for M itself), and
    tr(Sym^2 M)/sqrt(q_v) accumulates -(1/2 + m2) log log x.  Both
    constants below were cross-checked numerically against exact local
    data at d_max = 10.
    """
    if kind == "a_weighted":
        return 0.5 - m1
    if kind == "sym2_plus":
        return float(-m1 - m2)
    if kind == "sym2_minus":
        return float(m1 - m2 - 1)
    if kind == "mertens_II":
        return -0.5                      # delta / 2 with delta = -1
    if kind == "tail_III":
        return 0.0
    if kind == "log_euler":
        return float(-m1)
    if kind == "t_e":
        return 0.0                       # reported via the sign density instead
    raise ValueError(f"unknown series kind {kind!r}")


def fit_loglog(series: BiasSeries) -> FitResult:
    """Least squares of values against log log x on the upper half of degrees.

    residual_range is max - min of (value - slope * loglog x) on the window.
    """
    d_max = int(series.degrees[-1])
    if d_max < 6:
        raise DegenerateGrid("need d_max >= 6 for a meaningful fit")
    lo = d_max // 2 + 1
    win = series.degrees >= lo
    xs = series.loglog_x()[win]
    ys = series.values[win]
    if len(xs) < 2 or np.ptp(xs) == 0:
        raise DegenerateGrid("degenerate fit window")
    A = np.vstack([xs, np.ones_like(xs)]).T
    (slope, intercept), *_ = np.linalg.lstsq(A, ys, rcond=None)
    resid = ys - slope * xs
    return FitResult(float(slope), float(intercept),
                     float(resid.max() - resid.min()), (lo, d_max))


def classify_bias(series: BiasSeries, threshold: float = 0.15) -> str:
    """positive / negative / unbiased by the fitted slope (threshold 0.15)."""
    fit = fit_loglog(series)
    if fit.slope > threshold:
        return "positive"
    if fit.slope < -threshold:
        return "negative"
    return "unbiased"


def t_e_series(source: Union[CurveSpec, LocalScan], d_max: Optional[int] = None,
               config: Optional[RunConfig] = None) -> tuple[BiasSeries, float]:
    """T_E(d) = -(d / q^{d/2}) * sum over good places of degree <= d of
    a_v q^{-deg(v)/2}, with the running fraction of d where T_E(d) > 0."""
    scan = _as_scan(source, d_max, config)
    cfg = config or RunConfig(d_max=scan.d_max)
    d_max = d_max or scan.d_max
    q = scan.q
    degrees = np.arange(1, d_max + 1)
    inner = 0.0
    vals = np.empty(d_max, np.float64)
    for d in degrees:
        st = scan.stratum(int(d))
        inner += float(int(st.a_good.sum())) / q ** (d / 2.0)
        if d == 1 and cfg.include_infinite and scan.infinite.red == GOOD:
            inner += scan.infinite.a / math.sqrt(q)
        vals[d - 1] = -(d / q ** (d / 2.0)) * inner
    density = float(np.count_nonzero(vals > 0)) / d_max
    series = BiasSeries("t_e", q, degrees, q ** degrees.astype(np.int64),
                        vals, 0.0, True, cfg.include_infinite)
    return series, density
