"""Classical rational-prime races at the square-root weighting.

Two desk-scale experiments: the mod-4 race counted with weight p^{-1/2},
and the running sum of tau(p)/p^6 for Ramanujan's tau.  Over the
rationals the Euler-product convergence behind these drifts is
conjectural, so everything here demonstrates rather than verifies;
emitted reports carry an ``empirical`` marker.

tau is computed exactly: the cube of the eta power series is the sparse
alternating series of odd numbers at triangular exponents, and two
squarings (big-integer Kronecker packing) raise it to the 24th power.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import gmpy2
import numpy as np

from .errors import LimitTooLarge, NegativeExponent, NotCoprime

SIEVE_CAP = 10 ** 9
TAU_CAP = 10 ** 6
_SEGMENT = 1 << 22


@dataclass(frozen=True)
class PrimeTable:
    limit: int
    primes: np.ndarray


@dataclass(frozen=True)
class RaceSeries:
    x: np.ndarray                # grid cutoffs
    values: np.ndarray           # running sums at the cutoffs
    companion: np.ndarray        # (1/2) log log x
    empirical: bool = True


def _small_primes(n: int) -> np.ndarray:
    sieve = np.ones(n + 1, bool)
    sieve[:2] = False
    for i in range(2, math.isqrt(n) + 1):
        if sieve[i]:
            sieve[i * i:: i] = False
    return np.nonzero(sieve)[0].astype(np.int64)


def prime_segments(x: int):
    """Yield ascending numpy arrays of the primes up to x (segmented sieve)."""
    if x < 2:
        return
    base = _small_primes(math.isqrt(x))
    yield base[base <= x]
    lo = math.isqrt(x) + 1
    while lo <= x:
        hi = min(lo + _SEGMENT, x + 1)
        seg = np.ones(hi - lo, bool)
        for p in base:
            start = (-lo) % p
            seg[start::p] = False
        yield (np.nonzero(seg)[0] + lo).astype(np.int64)
        lo = hi


def sieve_primes(x: int) -> PrimeTable:
    if x < 2:
        raise LimitTooLarge("sieve limit must be at least 2")
    if x > SIEVE_CAP:
        raise LimitTooLarge(f"sieve limit {x} exceeds {SIEVE_CAP}")
    parts = list(prime_segments(x))
    return PrimeTable(x, np.concatenate(parts) if parts else np.empty(0, np.int64))


def pi_weighted(x: int, q: int, a: int, s: float) -> float:
    """Sum of p^{-s} over primes p <= x with p = a mod q."""
    if math.gcd(a, q) != 1:
        raise NotCoprime(f"gcd({a}, {q}) != 1")
    if s < 0:
        raise NegativeExponent("the weight exponent must be >= 0")
    if x > SIEVE_CAP:
        raise LimitTooLarge(f"limit {x} exceeds {SIEVE_CAP}")
    total = []
    for seg in prime_segments(int(x)):
        sel = seg[seg % q == a % q]
        if len(sel):
            total.append(float(np.sum(sel.astype(np.float64) ** (-s))))
    return math.fsum(total)


def _grid(x_max: int, grid: float, x0: int) -> np.ndarray:
    if grid <= 1.0:
        raise LimitTooLarge("grid ratio must exceed 1")
    pts = []
    x = float(x0)
    while x < x_max:
        pts.append(int(round(x)))
        x *= grid
    pts.append(int(x_max))
    return np.unique(np.array(pts, np.int64))


def _race_over_primes(x_max: int, grid: float, x0: int, weight) -> RaceSeries:
    cuts = _grid(x_max, grid, x0)
    vals = np.zeros(len(cuts), np.float64)
    running = 0.0
    done = 0                      # cutoffs fully below the current segment
    for seg in prime_segments(int(x_max)):
        if len(seg) == 0:
            continue
        w = weight(seg)
        csum = np.cumsum(w)
        while done < len(cuts) and cuts[done] < seg[0]:
            vals[done] = running
            done += 1
        # cutoffs that fall inside this segment
        k = int(np.count_nonzero(cuts[done:] <= seg[-1]))
        if k:
            pos = np.searchsorted(seg, cuts[done:done + k], side="right")
            vals[done:done + k] = running + np.where(pos > 0, csum[np.maximum(pos - 1, 0)], 0.0)
            done += k
        running += float(csum[-1])
    vals[done:] = running
    return RaceSeries(cuts, vals, 0.5 * np.log(np.log(cuts.astype(np.float64))))


def chi4_bias_series(x_max: int, grid: float = 1.25) -> RaceSeries:
    """pi_{1/2}(x; 4, 3) - pi_{1/2}(x; 4, 1) on a geometric grid from 5."""
    if x_max > SIEVE_CAP:
        raise LimitTooLarge(f"limit {x_max} exceeds {SIEVE_CAP}")

    def weight(seg: np.ndarray) -> np.ndarray:
        r = seg % 4
        sign = np.where(r == 3, 1.0, np.where(r == 1, -1.0, 0.0))
        return sign / np.sqrt(seg.astype(np.float64))

    return _race_over_primes(x_max, grid, 5, weight)


# ---------------------------------------------------------------------------
# Ramanujan tau


@dataclass(frozen=True)
class TauTable:
    limit: int
    values: list            # values[n] = tau(n); values[0] unused

    def __getitem__(self, n: int) -> int:
        return self.values[n]


def _pack(coeffs: list[int], width_bytes: int) -> int:
    buf = b"".join(int(c).to_bytes(width_bytes, "little") for c in coeffs)
    return int.from_bytes(buf, "little")


def _square_poly(coeffs: list[int], out_len: int) -> list[int]:
    """Exact square of an integer polynomial, truncated to out_len terms.

    Packs the signed coefficients into one big integer (Kronecker
    substitution), squares it with gmpy2, and unpacks with an offset to
    recover signed digits.
    """
    n = len(coeffs)
    maxc = max((abs(c) for c in coeffs), default=0) or 1
    bits = 2 * maxc.bit_length() + n.bit_length() + 2
    width = (bits + 8) // 8 + 1
    b = width * 8
    pos = _pack([c if c > 0 else 0 for c in coeffs], width)
    neg = _pack([-c if c < 0 else 0 for c in coeffs], width)
    w = int(gmpy2.square(gmpy2.mpz(pos - neg)))
    out_terms = min(2 * n - 1, out_len)
    half = 1 << (b - 1)
    off = int.from_bytes(half.to_bytes(width, "little") * out_terms, "little")
    w = (w & ((1 << (b * out_terms)) - 1)) + off
    raw = w.to_bytes(width * out_terms + width, "little")
    out = []
    for j in range(out_terms):
        d = int.from_bytes(raw[j * width:(j + 1) * width], "little")
        out.append(d - half)
    return out


def tau_table(limit: int) -> TauTable:
    """tau(1..limit), exactly, from the 24th power of the eta series."""
    if limit > TAU_CAP:
        raise LimitTooLarge(f"tau table limit {limit} exceeds {TAU_CAP}")
    n = max(limit, 2)
    # eta^3 = sum (-1)^j (2j+1) q^{j(j+1)/2}
    eta3 = [0] * n
    j = 0
    while j * (j + 1) // 2 < n:
        eta3[j * (j + 1) // 2] = (2 * j + 1) * (1 if j % 2 == 0 else -1)
        j += 1
    eta6 = [0] * n
    support = [(e, c) for e, c in enumerate(eta3) if c]
    for i, (e1, c1) in enumerate(support):
        if 2 * e1 < n:
            eta6[2 * e1] += c1 * c1
        for (e2, c2) in support[i + 1:]:
            e = e1 + e2
            if e >= n:
                break
            eta6[e] += 2 * c1 * c2
    eta12 = _square_poly(eta6, n)
    eta24 = _square_poly(eta12, n)
    values = [0, 1] + [eta24[k] for k in range(1, limit)]
    return TauTable(limit, values[: limit + 1])


def tau_bias_series(x_max: int, grid: float = 1.25) -> RaceSeries:
    """Running sum of tau(p)/p^6 over primes, on a geometric grid from 2."""
    if x_max > 10 ** 5:
        raise LimitTooLarge("tau race is desk-scale: x_max <= 1e5")
    table = tau_table(int(x_max))
    primes = sieve_primes(int(x_max)).primes

    def weight(seg: np.ndarray) -> np.ndarray:
        return np.array([table[int(p)] / float(p) ** 6 for p in seg])

    return _race_over_primes(int(x_max), grid, 2, weight)


def deligne_bound_ok(table: TauTable, primes: np.ndarray) -> bool:
    """|tau(p)| <= 2 p^{11/2}, checked exactly as tau(p)^2 <= 4 p^11."""
    return all(table[int(p)] ** 2 <= 4 * int(p) ** 11 for p in primes)
