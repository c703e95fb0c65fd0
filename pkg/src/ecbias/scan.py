"""Bulk local data: Frobenius traces at every place up to a degree bound.

For each degree d the engine works inside a single ambient field
F_{q^d} = F_p[y]/(m) driven by the log tables of :mod:`ecbias.smallfield`.
Places of degree d correspond to Frobenius orbits of ambient elements of
degree exactly d; the canonical representative (least packed value) of
each orbit is the specialisation point T = t, and the trace of the fibre
y^2 = x^3 + A(t)x + B(t) over F_{q^d} is the trace at that place.

Strategy per degree: a quadratic-character sweep when the residue field
has at most ``threshold`` elements, otherwise batched baby-step/giant-step
order finding in the Hasse interval, vectorised across all places of the
stratum, with ambiguities resolved by extra random points and the
quadratic twist.  Places dividing the discriminant are classified exactly
through the generic layer and merged back in.

All arrays are ordered by the packed value of the canonical
representative, and per-chunk random streams are keyed by (seed, degree,
chunk, round), so results are independent of the thread count.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .algebra import FieldSpec, Poly
from .config import RunConfig
from .counting import count_points
from .curve import (
    ADDITIVE,
    GOOD,
    CurveSpec,
    LocalData,
    _classify,
    _split_or_not,
    check_nonconstant,
    infinite_place_model,
    local_data,
    satake_angle,
)
from .errors import DepthLimitExceeded, HasseViolation, PointCountAmbiguous
from .places import Place
from .smallfield import LogField

from .algebra import factor, reduce_mod, residue_field


@dataclass(frozen=True)
class Stratum:
    """Local data aggregated over one degree."""

    d: int
    qv: int
    reps: np.ndarray          # packed canonical representative per good place
    a_good: np.ndarray        # int64 Frobenius traces, aligned with reps
    bad: tuple[LocalData, ...]

    @property
    def n_good(self) -> int:
        return len(self.a_good)


@dataclass(frozen=True)
class LocalScan:
    """Everything the series modules need about one curve."""

    curve: CurveSpec
    q: int
    d_max: int
    strata: tuple[Stratum, ...]          # index 0 <-> degree 1
    infinite: LocalData
    finite_bad: tuple[LocalData, ...]    # all degrees, ordered by (d, pi)
    conductor_degree: int

    def stratum(self, d: int) -> Stratum:
        return self.strata[d - 1]


# ---------------------------------------------------------------------------
# embeddings and evaluation


def _field_embedding(F: LogField, K: FieldSpec) -> Callable:
    """Scalar map: element of the constant field K -> log in the ambient F."""
    if K.base is None:
        table = [F.const_log(i) for i in range(K.p)]
        return lambda e: table[e.rep]
    q, M = K.q, F.M
    assert M % (q - 1) == 0
    s = M // (q - 1)
    m_logs = [F.const_log(c.rep) for c in K.modulus]
    root = None
    for j in range(q - 1):
        cand = j * s % M
        acc = -1
        for c in reversed(m_logs):
            acc = F.s_add(F.s_mul(acc, cand), c)
        if acc == -1:
            root = cand
            break
    if root is None:
        raise AssertionError("modulus has no root in the ambient field")

    def emb(e):
        acc = -1
        for c in reversed(e.rep):
            acc = F.s_add(F.s_mul(acc, root), F.const_log(c.rep))
        return acc

    return emb


def _coeff_logs(poly: Poly, emb: Callable) -> list[int]:
    if poly.is_zero():
        return [-1]
    return [emb(c) for c in poly.coeffs]


def _horner(F: LogField, coeff_logs: list[int], t: np.ndarray) -> np.ndarray:
    acc = np.full(t.shape, coeff_logs[-1], np.int64)
    for c in reversed(coeff_logs[:-1]):
        acc = F.add(F.mul(acc, t), np.int64(c))
    return acc


# ---------------------------------------------------------------------------
# batched elliptic-curve group law (affine coordinates, log representation)


def _ec_dbl(F: LogField, x, y, z, A):
    two_tors = (y == -1) & ~z
    num = F.add(F.mul(F.pow_s(x, 2), np.int64(F.const_log(3))), A)
    lam = F.mul(num, F.inv(F.mul(y, np.int64(F.const_log(2)))))
    x3 = F.sub(F.pow_s(lam, 2), F.mul(x, np.int64(F.const_log(2))))
    y3 = F.sub(F.mul(lam, F.sub(x, x3)), y)
    z3 = z | two_tors
    x3 = np.where(z3, -1, x3)
    y3 = np.where(z3, -1, y3)
    return x3, y3, z3


def _ec_add(F: LogField, x1, y1, z1, x2, y2, z2, A):
    sx = F.sub(x2, x1)
    finite = ~z1 & ~z2
    same = (sx == -1) & finite
    lam = F.mul(F.sub(y2, y1), F.inv(sx))
    if np.any(same):
        opp = same & (y1 == F.neg(y2))
        dbl = np.nonzero(same & ~opp)[0]
        if len(dbl):
            c3 = np.int64(F.const_log(3))
            c2 = np.int64(F.const_log(2))
            xd, yd = x1[dbl], y1[dbl]
            Ad = A[dbl] if np.ndim(A) else A
            num = F.add(F.mul(F.pow_s(xd, 2), c3), Ad)
            lam[dbl] = F.mul(num, F.inv(F.mul(yd, c2)))
    else:
        opp = same
    x3 = F.sub(F.sub(F.pow_s(lam, 2), x1), x2)
    y3 = F.sub(F.mul(lam, F.sub(x1, x3)), y1)
    z3 = opp.copy()
    x3 = np.where(z2, x1, x3)
    y3 = np.where(z2, y1, y3)
    z3 = np.where(z2, z1, z3)
    x3 = np.where(z1, x2, x3)
    y3 = np.where(z1, y2, y3)
    z3 = np.where(z1, z2, z3)
    x3 = np.where(z3, -1, x3)
    y3 = np.where(z3, -1, y3)
    return x3, y3, z3


def _ec_scalar(F: LogField, n: int, x, y, z, A):
    ax = np.full_like(x, -1)
    ay = np.full_like(x, -1)
    az = np.ones(x.shape, bool)
    for bit in bin(n)[2:]:
        ax, ay, az = _ec_dbl(F, ax, ay, az, A)
        if bit == "1":
            ax, ay, az = _ec_add(F, ax, ay, az, x, y, z, A)
    return ax, ay, az


# ---------------------------------------------------------------------------
# batched BSGS order finding


def _rng(seed: int, *parts: int) -> np.random.Generator:
    mix = 0
    for p in parts:
        mix = (mix * 1000003 + int(p)) & ((1 << 63) - 1)
    key = np.array([seed & ((1 << 63) - 1), mix], np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def _keys_for(F: LogField, x, y, z, tag: int, idx: int, paybits: int):
    M = F.M
    xv = np.where(z, M + 1, x + 1)
    yv = np.where(z, M + 1, y + 1)
    xy = xv * np.int64(M + 2) + yv
    return (xy << paybits) | np.int64((tag << (paybits - 1)) | idx)


def _bsgs_traces(F: LogField, Alog: np.ndarray, Blog: np.ndarray,
                 seed: int, degree: int, chunk_idx: int,
                 max_rounds: int = 8) -> np.ndarray:
    """Group orders #E_t for each row; curves y^2 = x^3 + A x + B over F."""
    q = F.order
    M = F.M
    B0 = math.isqrt(4 * q)
    lo, hi = q + 1 - B0, q + 1 + B0
    span = 2 * B0
    w = math.isqrt(span) + 1
    ng = span // w + 1
    paybits = max(w, ng).bit_length() + 1
    S = 2 * (q + 1)
    n_rows = len(Alog)
    N = np.zeros(n_rows, np.int64)
    LE = np.ones(n_rows, np.int64)
    LT = np.ones(n_rows, np.int64)
    g2 = np.int64(2 % M)   # log of gamma^2
    g3 = np.int64(3 % M)

    for rnd in range(max_rounds):
        act = np.nonzero(N == 0)[0]
        if len(act) == 0:
            break
        rng = _rng(seed, F.p, F.n, degree, chunk_idx, rnd)
        xs = rng.integers(0, q, len(act))
        lx = F.log_of_packed(xs)
        A_act, B_act = Alog[act], Blog[act]
        wv = F.add(F.add(F.pow_s(lx, 3), F.mul(A_act, lx)), B_act)
        # f(x) = 0: the point (x, 0) has order 2
        zero_w = wv == -1
        if np.any(zero_w):
            rows = act[zero_w]
            LE[rows] = np.lcm(LE[rows], 2)
        run = ~zero_w
        if not np.any(run):
            _resolve(N, LE, LT, act, lo, hi, S)
            continue
        sub = act[run]
        lx, wv = lx[run], wv[run]
        Asub, Bsub = Alog[sub], Blog[sub]
        on_twist = (wv & 1) == 1
        # twist by the generator (always a nonsquare): A*g^2, x*g, y^2 = g^3 f(x)
        Arow = np.where(on_twist, F.mul(Asub, g2), Asub)
        px = np.where(on_twist, F.mul(lx, np.int64(1)), lx)
        yy = np.where(on_twist, F.mul(wv, g3), wv)
        py = F.sqrt_even(yy)
        pz = np.zeros(len(sub), bool)

        keys = np.empty((len(sub), w + ng), np.int64)
        bx, by, bz = np.full(len(sub), -1, np.int64), np.full(len(sub), -1, np.int64), np.ones(len(sub), bool)
        for i in range(w):
            keys[:, i] = _keys_for(F, bx, by, bz, 0, i, paybits)
            if i < w - 1:
                bx, by, bz = _ec_add(F, bx, by, bz, px, py, pz, Arow)
        rx, ry, rz = _ec_scalar(F, lo, px, py, pz, Arow)
        gx, gy, gz = rx, F.neg(ry), rz
        wx, wy, wz = _ec_scalar(F, w, px, py, pz, Arow)
        wy = F.neg(wy)
        for j in range(ng):
            keys[:, w + j] = _keys_for(F, gx, gy, gz, 1, j, paybits)
            if j < ng - 1:
                gx, gy, gz = _ec_add(F, gx, gy, gz, wx, wy, wz, Arow)
        keys.sort(axis=1)
        xy = keys >> paybits
        ev_r, ev_p = np.nonzero(xy[:, :-1] == xy[:, 1:])
        counts = np.bincount(ev_r, minlength=len(sub))

        # fast path: exactly one adjacency, one baby + one giant
        onemask = counts[ev_r] == 1
        r1, p1 = ev_r[onemask], ev_p[onemask]
        k1 = keys[r1, p1]
        k2 = keys[r1, p1 + 1]
        paymask = (1 << (paybits - 1)) - 1
        tag1 = (k1 >> (paybits - 1)) & 1
        tag2 = (k2 >> (paybits - 1)) & 1
        clean = tag1 != tag2
        i_idx = np.where(tag1 == 0, k1 & paymask, k2 & paymask)
        j_idx = np.where(tag1 == 1, k1 & paymask, k2 & paymask)
        t = i_idx + j_idx * w
        ok = clean & (t <= span)
        srows = sub[r1[ok]]
        svals = lo + t[ok]
        tw = on_twist[r1[ok]]
        N[srows] = np.where(tw, S - svals, svals)
        # anything fancier (several matches, baby-baby collisions) in python
        messy_rows = np.unique(np.concatenate(
            [ev_r[~onemask], r1[~clean] if np.any(~clean) else np.empty(0, np.int64)]))
        for r in messy_rows:
            if N[sub[r]] != 0:
                continue
            pos = ev_p[ev_r == r]
            idxs = set()
            for p0 in pos:
                idxs.add(p0)
                idxs.add(p0 + 1)
            entries = [int(keys[r, p0]) for p0 in sorted(idxs)]
            groups: dict[int, list[tuple[int, int]]] = {}
            for k in entries:
                groups.setdefault(k >> paybits, []).append(
                    (int((k >> (paybits - 1)) & 1), int(k & paymask)))
            ts = set()
            babyord = None
            for pts in groups.values():
                bs = sorted(i for tg, i in pts if tg == 0)
                gs = sorted(j for tg, j in pts if tg == 1)
                if len(bs) >= 2:
                    babyord = min(b2 - b1 for b1, b2 in zip(bs, bs[1:]))
                for i0 in bs:
                    for j0 in gs:
                        ts.add(i0 + j0 * w)
            ts = sorted(ts)
            row = sub[r]
            cands = [lo + t0 for t0 in ts if t0 <= span]
            if babyord is None and len(ts) >= 2:
                babyord = min(b - a for a, b in zip(ts, ts[1:]))
            if len(cands) == 1:
                s0 = cands[0]
                N[row] = S - s0 if on_twist[r] else s0
            elif babyord is not None:
                if on_twist[r]:
                    LT[row] = np.lcm(LT[row], babyord)
                else:
                    LE[row] = np.lcm(LE[row], babyord)
        # multi-match rows handled above; single-match rows resolved; now
        # rows whose event count was >= 2 but all pairs decoded in python.
        _resolve(N, LE, LT, act, lo, hi, S)

    left = np.nonzero(N == 0)[0]
    if len(left) > 256:
        raise PointCountAmbiguous(
            f"{len(left)} group orders unresolved after BSGS rounds")
    for r in left:
        N[r] = _exhaustive_single(F, int(Alog[r]), int(Blog[r]))
    return np.int64(q + 1) - N


def _resolve(N, LE, LT, act, lo, hi, S):
    """Fill rows whose accumulated constraints leave a single candidate."""
    rows = act[N[act] == 0]
    if len(rows) == 0:
        return
    le, lt = LE[rows], LT[rows]
    # N = 0 mod LE and N = S mod LT, N in [lo, hi]
    fast = lt == 1
    if np.any(fast):
        r = rows[fast]
        l0 = le[fast]
        n1 = (lo + l0 - 1) // l0 * l0
        unique = (n1 <= hi) & (n1 + l0 > hi)
        N[r[unique]] = n1[unique]
    fast2 = (le == 1) & (lt > 1)
    if np.any(fast2):
        r = rows[fast2]
        l0 = lt[fast2]
        n1 = lo + (S - lo) % l0
        unique = (n1 <= hi) & (n1 + l0 > hi)
        N[r[unique]] = n1[unique]
    both = (le > 1) & (lt > 1)
    for i in np.nonzero(both)[0]:
        r = rows[i]
        a, b = int(le[i]), int(lt[i])
        first = (lo + a - 1) // a * a
        cands = [n for n in range(first, hi + 1, a) if (S - n) % b == 0]
        if len(cands) == 1:
            N[r] = cands[0]


def _exhaustive_single(F: LogField, Alog: int, Blog: int) -> int:
    xs = F.log[np.arange(F.order)].astype(np.int64)
    wv = F.add(F.add(F.pow_s(xs, 3), F.mul(xs, np.int64(Alog))), np.int64(Blog))
    nz = wv >= 0
    odd = nz & ((wv & 1) == 1)
    chi = int(np.count_nonzero(nz)) - 2 * int(np.count_nonzero(odd))
    return F.order + 1 + chi


# ---------------------------------------------------------------------------
# strata


def _exhaustive_traces(F: LogField, Alog: np.ndarray, Blog: np.ndarray,
                       xs: np.ndarray, x3: np.ndarray) -> np.ndarray:
    out = np.empty(len(Alog), np.int64)
    for i in range(len(Alog)):
        wv = F.add(F.add(x3, F.mul(xs, Alog[i])), Blog[i])
        nz = wv >= 0
        odd = nz & ((wv & 1) == 1)
        out[i] = -(int(np.count_nonzero(nz)) - 2 * int(np.count_nonzero(odd)))
    return out


def _compute_stratum(c: CurveSpec, d: int, cfg: RunConfig,
                     bad_at_d: list[tuple[Place, "object"]]) -> Stratum:
    K = c.field
    q = K.q
    qv = q ** d
    if qv > cfg.table_cap:
        raise DepthLimitExceeded(
            f"degree {d} needs residue fields of size {q}^{d}, beyond the engine cap")
    F = LogField.get(K.p, K.k * d)
    emb = _field_embedding(F, K)
    Apoly, Bpoly = c.short_AB()
    Ac = _coeff_logs(Apoly, emb)
    Bc = _coeff_logs(Bpoly, emb)
    reps = F.degree_reps(q, d)
    c4l = np.int64(F.const_log(4))
    c27l = np.int64(F.const_log(27))

    bounds = list(range(0, len(reps), cfg.chunk)) + [len(reps)]

    def work(ci: int):
        t = reps[bounds[ci]:bounds[ci + 1]]
        A = _horner(F, Ac, t)
        B = _horner(F, Bc, t)
        dsh = F.add(F.mul(F.pow_s(A, 3), c4l), F.mul(F.pow_s(B, 2), c27l))
        good = dsh != -1
        tg, Ag, Bg = t[good], A[good], B[good]
        if qv <= cfg.threshold:
            xs = F.log[np.arange(qv)].astype(np.int64)
            x3 = F.pow_s(xs, 3)
            a = _exhaustive_traces(F, Ag, Bg, xs, x3)
        else:
            a = _bsgs_traces(F, Ag, Bg, cfg.seed, d, ci)
        return tg, a, t[~good]

    n_chunks = len(bounds) - 1
    if cfg.threads > 1 and n_chunks > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            results = list(pool.map(work, range(n_chunks)))
    else:
        results = [work(ci) for ci in range(n_chunks)]

    t_good = np.concatenate([r[0] for r in results]) if results else np.empty(0, np.int64)
    a_good = np.concatenate([r[1] for r in results]) if results else np.empty(0, np.int64)
    t_sing = np.concatenate([r[2] for r in results]) if results else np.empty(0, np.int64)

    if np.any(a_good.astype(object) ** 2 > 4 * qv):
        raise HasseViolation(f"trace out of range at degree {d}")

    packed = F.packed_of_log(t_good)
    # places dividing the discriminant: classified generically; good ones
    # (non-minimal model) are merged back with their exact trace
    if len(t_sing) != len(bad_at_d):
        raise PointCountAmbiguous(
            f"degree {d}: {len(t_sing)} singular fibres vs "
            f"{len(bad_at_d)} discriminant factors")
    bad_local: list[LocalData] = []
    extra_packed: list[int] = []
    extra_a: list[int] = []
    for place, cls in bad_at_d:
        if cls.red == GOOD:
            ld = local_data(c, place, threshold=cfg.threshold, seed=cfg.seed)
            root = _match_root(F, emb, place.pi, t_sing)
            extra_packed.append(int(F.packed_of_log(np.array([root]))[0]))
            extra_a.append(ld.a)
        else:
            bad_local.append(local_data(c, place, threshold=cfg.threshold,
                                        seed=cfg.seed))
    if extra_packed:
        packed = np.concatenate([packed, np.array(extra_packed, np.int64)])
        a_good = np.concatenate([a_good, np.array(extra_a, np.int64)])
    order = np.argsort(packed, kind="stable")
    packed, a_good = packed[order], a_good[order]
    bad_local.sort(key=lambda ld: ld.place.pi.packed_index())
    return Stratum(d, qv, packed, a_good, tuple(bad_local))


def _match_root(F: LogField, emb: Callable, pi: Poly, t_sing: np.ndarray) -> int:
    coeffs = _coeff_logs(pi, emb)
    vals = _horner(F, coeffs, t_sing)
    hits = np.nonzero(vals == -1)[0]
    if len(hits) != 1:
        raise PointCountAmbiguous("could not match a place to its fibre")
    return int(t_sing[hits[0]])


# ---------------------------------------------------------------------------
# public entry point


_SCAN_CACHE: dict = {}
_SCAN_CACHE_MAX = 8


def scan_curve(c: CurveSpec, d_max: int, config: Optional[RunConfig] = None) -> LocalScan:
    cfg = config or RunConfig(d_max=d_max)
    key = (c, d_max, cfg.seed, cfg.threshold, cfg.chunk, cfg.table_cap)
    hit = _SCAN_CACHE.get(key)
    if hit is not None:
        return hit
    check_nonconstant(c)
    bad_profile: list[tuple[Place, object]] = []
    for pi, _mult in factor(c.disc):
        place = Place.finite(pi)
        bad_profile.append((place, _classify(c, pi)))
    finite_bad: list[LocalData] = []
    conductor = 0
    for place, cls in bad_profile:
        conductor += cls.f * place.d
        if cls.red != GOOD:
            finite_bad.append(local_data(c, place, threshold=cfg.threshold,
                                         seed=cfg.seed))
    inf_ld = local_data(c, Place.infinite(c.field), threshold=cfg.threshold,
                        seed=cfg.seed)
    conductor += inf_ld.f
    strata = []
    for d in range(1, d_max + 1):
        at_d = [(pl, cls) for pl, cls in bad_profile if pl.d == d]
        strata.append(_compute_stratum(c, d, cfg, at_d))
    finite_bad.sort(key=lambda ld: (ld.place.d, ld.place.pi.packed_index()))
    scan = LocalScan(c, c.field.q, d_max, tuple(strata), inf_ld,
                     tuple(finite_bad), conductor)
    if len(_SCAN_CACHE) >= _SCAN_CACHE_MAX:
        _SCAN_CACHE.pop(next(iter(_SCAN_CACHE)))
    _SCAN_CACHE[key] = scan
    return scan
