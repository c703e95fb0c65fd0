"""Point counting on y^2 = x^3 + Ax + B over a finite field (exact layer).

Two strategies, matching the residue-field size:

* exhaustive -- one pass over x with a precomputed table of squares
  (fields up to the configured threshold, default 2^16);
* baby-step/giant-step order finding in the Hasse interval, with
  constraints accumulated from several random points and from the
  quadratic twist until exactly one group order survives.

Both return the same number; the acceptance suite compares them place by
place.  The bulk engine in :mod:`ecbias.scan` reimplements both in
vectorised form; this module is the slow, independent reference used for
single queries and as an oracle.
"""

from __future__ import annotations

import math
import random
from typing import Optional

from .algebra import FieldElement, FieldSpec
from .errors import PointCountAmbiguous, SingularReduction

Point = Optional[tuple[FieldElement, FieldElement]]

EXHAUSTIVE_THRESHOLD = 1 << 16


def count_points(A: FieldElement, B: FieldElement, field: FieldSpec, *,
                 method: str = "auto", threshold: int = EXHAUSTIVE_THRESHOLD,
                 seed: int = 0) -> int:
    """Exact #E(F) for E: y^2 = x^3 + Ax + B, the point at infinity included."""
    if A.field != field or B.field != field:
        raise ValueError("coefficients not in the given field")
    four_a3 = A * A * A * 4
    if (four_a3 + B * B * 27).is_zero():
        raise SingularReduction("4A^3 + 27B^2 = 0: singular short model")
    if method == "exhaustive" or (method == "auto" and field.q <= threshold):
        return _count_exhaustive(A, B, field)
    if method in ("bsgs", "auto"):
        return _count_bsgs(A, B, field, random.Random(seed))
    raise ValueError(f"unknown method {method!r}")


def _count_exhaustive(A: FieldElement, B: FieldElement, F: FieldSpec) -> int:
    q = F.q
    squares = bytearray(q)
    for i in range(q):
        e = F.from_index(i)
        squares[(e * e).index()] = 1
    n = q + 1  # affine solutions counted below; +1 for infinity
    total = 0
    for i in range(q):
        x = F.from_index(i)
        w = (x * x + A) * x + B
        if w.is_zero():
            continue
        total += 1 if squares[w.index()] else -1
    return n + total


# -- group law (affine, None is the identity) --------------------------------


def ec_add(P: Point, Q: Point, A: FieldElement) -> Point:
    if P is None:
        return Q
    if Q is None:
        return P
    x1, y1 = P
    x2, y2 = Q
    if x1 == x2:
        if y1 == -y2:
            return None
        lam = (x1 * x1 * 3 + A) / (y1 * 2)
    else:
        lam = (y2 - y1) / (x2 - x1)
    x3 = lam * lam - x1 - x2
    return (x3, lam * (x1 - x3) - y1)


def ec_neg(P: Point) -> Point:
    return None if P is None else (P[0], -P[1])


def ec_mul(n: int, P: Point, A: FieldElement) -> Point:
    if n < 0:
        return ec_mul(-n, ec_neg(P), A)
    R: Point = None
    while n:
        if n & 1:
            R = ec_add(R, P, A)
        P = ec_add(P, P, A)
        n >>= 1
    return R


# -- BSGS order finding -------------------------------------------------------


def _point_key(P: Point):
    return None if P is None else (P[0].index(), P[1].index())


def _annihilators(P: Point, A: FieldElement, F: FieldSpec) -> set[int]:
    """All s in the Hasse interval with s*P = O."""
    q = F.q
    B0 = math.isqrt(4 * q)
    lo = q + 1 - B0
    span = 2 * B0
    w = math.isqrt(span) + 1
    # babies i*P; a repeated key reveals ord(P) immediately
    babies: dict = {}
    T: Point = None
    for i in range(w):
        k = _point_key(T)
        if k in babies:
            ordp = i - babies[k]
            return {s for s in range(lo, lo + span + 1) if s % ordp == 0}
        babies[k] = i
        T = ec_add(T, P, A)
    target = ec_neg(ec_mul(lo, P, A))
    W = ec_neg(ec_mul(w, P, A))
    ts = []
    G = target
    for j in range(span // w + 1):
        k = _point_key(G)
        if k in babies:
            ts.append(babies[k] + j * w)
        G = ec_add(G, W, A)
    matches = sorted(t for t in ts if t <= span)
    if not matches:
        raise PointCountAmbiguous("BSGS found no annihilator in the Hasse interval")
    if len(matches) == 1:
        return {lo + matches[0]}
    ordp = min(b - a for a, b in zip(matches, matches[1:]))
    return {s for s in range(lo, lo + span + 1) if s % ordp == 0}


def _random_x(F: FieldSpec, rng: random.Random) -> FieldElement:
    return F.from_index(rng.randrange(F.q))


def _first_nonsquare(F: FieldSpec) -> FieldElement:
    for i in range(2, F.q):
        e = F.from_index(i)
        if not e.is_zero() and not e.is_square():
            return e
    raise AssertionError("odd field has nonsquares")


def _count_bsgs(A: FieldElement, B: FieldElement, F: FieldSpec,
                rng: random.Random) -> int:
    q = F.q
    B0 = math.isqrt(4 * q)
    lo, hi = q + 1 - B0, q + 1 + B0
    S = 2 * (q + 1)
    u = _first_nonsquare(F)
    Au, Bu = A * u * u, B * u * u * u
    cand_e: Optional[set[int]] = None
    cand_t: Optional[set[int]] = None
    window = set(range(lo, hi + 1))
    for _ in range(64):
        x = _random_x(F, rng)
        wv = (x * x + A) * x + B
        if wv.is_zero():
            new = {s for s in window if s % 2 == 0}
            cand_e = new if cand_e is None else cand_e & new
        elif wv.is_square():
            P = (x, wv.sqrt())
            new = _annihilators(P, A, F)
            cand_e = new if cand_e is None else cand_e & new
        else:
            yt = (wv * u * u * u).sqrt()
            P = (x * u, yt)
            new = _annihilators(P, Au, F)
            cand_t = new if cand_t is None else cand_t & new
        ce = cand_e if cand_e is not None else window
        ct = cand_t if cand_t is not None else window
        final = [N for N in ce if (S - N) in ct]
        if len(final) == 1:
            return final[0]
        if not final:
            raise PointCountAmbiguous("contradictory order constraints")
    if q <= 1 << 20:
        return _count_exhaustive(A, B, F)
    raise PointCountAmbiguous(f"group order not pinned down over field of size {q}")
