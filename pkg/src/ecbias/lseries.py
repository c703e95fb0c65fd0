"""Exact L-polynomials of a curve and of its symmetric square.

The unnormalised L-function is the Euler product over all places
(infinite place included by default) of reciprocal local factors, viewed
as a power series in T = q^{-s}.  For the supported curve class it is a
polynomial with integer coefficients; we compute it exactly by
accumulating the integer power sums of the inverse roots degree by degree
(from the bulk scan) and exponentiating the logarithmic series over the
rationals, asserting integrality at the end.

Centre conventions, n-th symmetric power: the centre s = 1/2 sits at
T = q^{-(n+1)/2}; the vanishing order m_n is extracted by exact repeated
division, in Z[sqrt(q)] when n = 2 and q is not a perfect square.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .config import RunConfig
from .curve import ADDITIVE, GOOD, CurveSpec, LocalData, conductor_degree
from .errors import (
    DeltaCrossCheckFailed,
    FunctionalEquationViolation,
    OrderMismatch,
    TruncationTooSmall,
)
from .scan import LocalScan, scan_curve

EULER_GAMMA = 0.5772156649015329


@dataclass(frozen=True)
class LPolynomial:
    n: int                       # symmetric-power index (1 or 2)
    base_q: int
    coeffs: tuple[int, ...]      # c_0 .. c_degree in T = q^{-s}
    degree: int
    epsilon: int
    rank: int                    # vanishing order m_n at the centre
    trunc: int

    def __call__(self, x: Fraction) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc


@dataclass(frozen=True)
class CenterReport:
    m: int
    value: float                 # leading derivative at the centre
    gamma: float
    delta: int


def local_factor(ld: LocalData, n: int) -> list[int]:
    """Reciprocal local Euler factor, dense integer coefficients in T.

    Symmetric square at bad places: multiplicative reduction keeps the
    inertia-invariant line with Frobenius eigenvalue a_v^2 = 1; an additive
    place where j has a pole is a quadratic twist of a multiplicative one,
    and the symmetric square does not see quadratic twists, so the same
    1 - T^d factor survives there.  Additive places with integral j
    contribute the trivial factor.
    """
    d, qv, a = ld.place.d, ld.qv, ld.a
    if n == 1:
        if ld.red == GOOD:
            out = [0] * (2 * d + 1)
            out[0], out[d], out[2 * d] = 1, -a, qv
        else:
            out = [0] * (d + 1)
            out[0], out[d] = 1, -a
        return out
    if n == 2:
        if ld.red == GOOD:
            # eigenvalues alpha^2, alpha*beta = qv, beta^2
            f1 = [0] * (d + 1)
            f1[0], f1[d] = 1, -qv
            f2 = [0] * (2 * d + 1)
            f2[0], f2[d], f2[2 * d] = 1, -(a * a - 2 * qv), qv * qv
            out = [0] * (3 * d + 1)
            for i, x in enumerate(f1):
                if x:
                    for j, y in enumerate(f2):
                        out[i + j] += x * y
            return out
        if ld.red == ADDITIVE and not ld.j_pole:
            return [1]
        out = [0] * (d + 1)
        out[0], out[d] = 1, -1
        return out
    raise ValueError("only symmetric powers n = 1 and n = 2 are supported")


# ---------------------------------------------------------------------------
# integer power sums of inverse roots, aggregated per degree


def _single_place_powersums(ld: LocalData, qv: int, kmax: int,
                            n: int) -> list[int]:
    """Power sums of the inverse roots of one local factor, k = 1..kmax."""
    out = []
    if ld.red == GOOD:
        a = ld.a
        tp, tc = 2, a
        taus = [tc]
        for _ in range(2 * kmax):
            tp, tc = tc, a * tc - qv * tp
            taus.append(tc)
        # taus[k-1] = alpha^k + beta^k
        for k in range(1, kmax + 1):
            out.append(taus[k - 1] if n == 1 else qv ** k + taus[2 * k - 1])
    elif n == 1:
        out = [ld.a ** k for k in range(1, kmax + 1)]
    else:
        ev = 1 if ld.j_pole else 0   # see local_factor
        out = [ev] * kmax
    return out


def _log_coefficients(scan: LocalScan, n: int, trunc: int,
                      include_infinite: bool) -> list[int]:
    """A_m = m * [T^m] log L for m = 1..trunc; exact integers."""
    A = [0] * (trunc + 1)
    q = scan.q
    for d in range(1, trunc + 1):
        st = scan.stratum(d)
        qv = q ** d
        kmax = trunc // d
        a = st.a_good
        if len(a):
            # vectorised tau recursion; magnitudes stay far below 2^63
            # because the engine caps q^d at 2^24 and trunc <= d_max
            tp = np.full(len(a), 2, np.int64)
            tc = a.astype(np.int64)
            taus = [tc]
            for _ in range(2 * kmax):
                tp, tc = tc, a * tc - np.int64(qv) * tp
                taus.append(tc)
            for k in range(1, kmax + 1):
                if n == 1:
                    s = int(taus[k - 1].sum())
                else:
                    s = len(a) * qv ** k + int(taus[2 * k - 1].sum())
                A[d * k] += d * s
        for ld in st.bad:
            ps = _single_place_powersums(ld, qv, kmax, n)
            for k in range(1, kmax + 1):
                A[d * k] += d * ps[k - 1]
    if include_infinite:
        ld = scan.infinite
        ps = _single_place_powersums(ld, q, trunc, n)
        for k in range(1, trunc + 1):
            A[k] += ps[k - 1]
    return A


def _exp_series(A: list[int], trunc: int) -> list[int]:
    c = [Fraction(1)] + [Fraction(0)] * trunc
    for j in range(1, trunc + 1):
        c[j] = sum((A[m] * c[j - m] for m in range(1, j + 1)),
                   Fraction(0)) / j
    out = []
    for x in c:
        if x.denominator != 1:
            raise FunctionalEquationViolation(
                "Euler product has non-integer series coefficients; "
                "local data is inconsistent")
        out.append(int(x))
    return out


def l_polynomial(curve: CurveSpec, n: int, trunc: Optional[int] = None, *,
                 config: Optional[RunConfig] = None,
                 scan: Optional[LocalScan] = None,
                 include_infinite: bool = True) -> LPolynomial:
    """The exact L-polynomial of Sym^n (n = 1 or 2) with certified degree.

    ``trunc`` defaults to the conductor degree for n = 1 and three times it
    for n = 2; the truncated product must vanish at its last two
    coefficients, which certifies the detected degree.
    """
    if n not in (1, 2):
        raise ValueError("n must be 1 or 2")
    cap = (config or RunConfig()).table_cap
    if trunc is None:
        cond = scan.conductor_degree if scan is not None else conductor_degree(curve)
        trunc = cond if n == 1 else 3 * cond
        trunc = max(trunc, 2)
        if n == 2:
            # the detected-degree route cannot look past the engine cap
            trunc = min(trunc, _max_feasible_trunc(curve.field.q, cap))
    if scan is None or scan.d_max < trunc:
        import dataclasses

        cfg = config or RunConfig(d_max=trunc)
        if cfg.d_max < trunc:
            cfg = dataclasses.replace(cfg, d_max=trunc)
        scan = scan_curve(curve, trunc, cfg)
    A = _log_coefficients(scan, n, trunc, include_infinite)
    coeffs = _exp_series(A, trunc)
    if coeffs[trunc] != 0 or (trunc >= 1 and coeffs[trunc - 1] != 0):
        raise TruncationTooSmall(
            f"nonzero coefficient at order {trunc}; raise trunc")
    N = 0
    for j in range(trunc, -1, -1):
        if coeffs[j] != 0:
            N = j
            break
    trimmed = tuple(coeffs[: N + 1])
    stub = LPolynomial(n, scan.q, trimmed, N, 0, 0, trunc)
    if n == 1:
        eps = functional_equation_check(stub)
    else:
        # an additive place with integral j leaves an uncorrected factor
        # that can break the sign symmetry; record 0 in that case
        try:
            eps = functional_equation_check(stub)
        except FunctionalEquationViolation:
            eps = 0
    rank = analytic_rank(stub)
    return LPolynomial(n, scan.q, trimmed, N, eps, rank, trunc)


def _max_feasible_trunc(q: int, table_cap: int) -> int:
    t = 1
    while q ** (t + 1) <= table_cap:
        t += 1
    return t


# ---------------------------------------------------------------------------
# functional equation, rank, centre


def _sqrt_power(q: int, e2: int) -> int:
    """q^(e2/2) as an exact integer; e2 may be odd only when q is square."""
    if e2 % 2 == 0:
        return q ** (e2 // 2)
    s = math.isqrt(q)
    if s * s != q:
        raise FunctionalEquationViolation(
            "half-integral functional-equation exponent over a non-square q")
    return s ** e2


def functional_equation_check(L: LPolynomial) -> int:
    """Verify c_{N-j} = eps * q^{(n+1)(N-2j)/2} * c_j exactly; return eps."""
    N, q, n, c = L.degree, L.base_q, L.n, L.coeffs
    if c[0] != 1:
        raise FunctionalEquationViolation("leading coefficient c_0 != 1")
    if N == 0:
        return 1
    top = _sqrt_power(q, (n + 1) * N)
    if c[N] not in (top, -top):
        raise FunctionalEquationViolation(
            f"c_N = {c[N]} is not +-q^({n + 1}*{N}/2)")
    eps = 1 if c[N] == top else -1
    for j in range(N // 2 + 1):
        factor = _sqrt_power(q, (n + 1) * (N - 2 * j))
        if c[N - j] != eps * factor * c[j]:
            raise FunctionalEquationViolation(f"pair j={j} fails")
    return eps


def analytic_rank(L: LPolynomial) -> int:
    """Multiplicity of the central root T = q^{-(n+1)/2}, by exact division."""
    q, n = L.base_q, L.n
    if n == 1:
        c = list(L.coeffs)
        m = 0
        while True:
            # divide by (1 - qT): b_j = c_j + q b_{j-1}; exact iff b_deg = 0
            b = []
            prev = 0
            for x in c:
                prev = x + q * prev
                b.append(prev)
            if len(b) >= 1 and b[-1] == 0:
                m += 1
                c = b[:-1] if len(b) > 1 else [0]
                if c == [0]:
                    raise FunctionalEquationViolation("L-polynomial vanished")
            else:
                return m
    # n = 2: divide by (1 - q^{3/2} T)
    s = math.isqrt(q)
    if s * s == q:
        r = s ** 3
        c = list(L.coeffs)
        m = 0
        while True:
            b = []
            prev = 0
            for x in c:
                prev = x + r * prev
                b.append(prev)
            if len(b) >= 1 and b[-1] == 0:
                m += 1
                c = b[:-1] if len(b) > 1 else [0]
            else:
                return m
    # pairs (x, y) <-> x + y sqrt(q), a free Z-module since q is not a square
    c2 = [(x, 0) for x in L.coeffs]
    m = 0
    while True:
        b = []
        prev = (0, 0)
        for (x, y) in c2:
            # prev * q^{3/2} = (x + y sqrt q) * q * sqrt q = (q^2 y, q x)
            prev = (x + q * q * prev[1], y + q * prev[0])
            b.append(prev)
        if b and b[-1] == (0, 0):
            m += 1
            c2 = b[:-1] if len(b) > 1 else [(0, 0)]
        else:
            return m


def analytic_ranks(curve: CurveSpec, *, config: Optional[RunConfig] = None,
                   scan: Optional[LocalScan] = None,
                   trunc1: Optional[int] = None,
                   trunc2: Optional[int] = None) -> tuple[int, int]:
    """(m_1, m_2) from exact L-polynomials."""
    l1 = l_polynomial(curve, 1, trunc1, config=config, scan=scan)
    l2 = l_polynomial(curve, 2, trunc2, config=config, scan=scan)
    return l1.rank, l2.rank


def center_derivative(L: LPolynomial, m: int) -> float:
    """m! (log q)^m Q(1/q) with L = (1 - qT)^m Q; the m-th derivative of the
    centred, normalised L-function at its centre."""
    if L.n != 1:
        raise ValueError("centre derivatives are for the n = 1 polynomial")
    q = L.base_q
    c = list(L.coeffs)
    for _ in range(m):
        b = []
        prev = 0
        for x in c:
            prev = x + q * prev
            b.append(prev)
        if not b or b[-1] != 0:
            raise OrderMismatch("stated order exceeds the actual vanishing order")
        c = b[:-1] if len(b) > 1 else [0]
    val = Fraction(0)
    for x in reversed(c):
        val = val / q + x
    if val == 0:
        raise OrderMismatch("polynomial still vanishes at the centre; order too small")
    return math.factorial(m) * math.log(q) ** m * float(val)


def delta_invariant(l2: LPolynomial) -> int:
    """-1 for every accepted curve; cross-checked through the symmetric
    square: its polynomial must not vanish at T = q^{-2} (the point s = 1)."""
    if l2.n != 2:
        raise ValueError("delta cross-check needs the symmetric-square polynomial")
    q = l2.base_q
    if l2(Fraction(1, q * q)) == 0:
        raise DeltaCrossCheckFailed("Sym^2 L-polynomial vanishes at s = 1")
    return -1


def center_report(curve: CurveSpec, *, config: Optional[RunConfig] = None,
                  scan: Optional[LocalScan] = None,
                  trunc1: Optional[int] = None,
                  trunc2: Optional[int] = None) -> CenterReport:
    l1 = l_polynomial(curve, 1, trunc1, config=config, scan=scan)
    l2 = l_polynomial(curve, 2, trunc2, config=config, scan=scan)
    d = delta_invariant(l2)
    val = center_derivative(l1, l1.rank)
    return CenterReport(l1.rank, val, EULER_GAMMA, d)
