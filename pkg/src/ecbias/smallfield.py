"""Batched arithmetic in small finite fields via discrete-log tables.

For F = F_{p^n} with p^n below ``TABLE_CAP`` we fix the lexicographically
least monic irreducible modulus, a multiplicative generator g, and build
three tables: ``exp[i]`` = base-p packed value of g^i, ``log`` (its
inverse, with log[0] = -1), and the Zech table ``zech[i]`` = log(1 + g^i).

Elements are then carried around as int64 *logs* in [0, p^n - 1), with -1
as the sentinel for zero.  Multiplication, inversion, powering, square
roots and quadratic-character tests reduce to index arithmetic; addition
is one Zech lookup.  Everything is vectorised over numpy arrays, which is
what makes point counting over a million residue fields tractable.

Nothing here imports the exact-algebra layer; the scalar helpers below
work on plain base-p digit lists.
"""

from __future__ import annotations

import math
from collections import OrderedDict

import numpy as np

from .errors import DepthLimitExceeded

TABLE_CAP = 1 << 24

# ---------------------------------------------------------------------------
# scalar polynomial helpers over F_p (digit lists, ascending, trimmed)


def _sp_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _sp_mul(a: list[int], b: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _sp_trim(out)


def _sp_mod(a: list[int], m: list[int], p: int) -> list[int]:
    r = list(a)
    _sp_trim(r)
    inv_lead = pow(m[-1], p - 2, p)
    while len(r) >= len(m):
        c = r[-1] * inv_lead % p
        d = len(r) - len(m)
        for i in range(len(m)):
            r[d + i] = (r[d + i] - c * m[i]) % p
        _sp_trim(r)
    return r


def _sp_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = list(a), list(b)
    while b:
        a, b = b, _sp_mod(a, b, p)
    if a:
        inv = pow(a[-1], p - 2, p)
        a = [c * inv % p for c in a]
    return a


def _sp_powmod(a: list[int], e: int, m: list[int], p: int) -> list[int]:
    result = [1]
    b = _sp_mod(a, m, p)
    while e:
        if e & 1:
            result = _sp_mod(_sp_mul(result, b, p), m, p)
        b = _sp_mod(_sp_mul(b, b, p), m, p)
        e >>= 1
    return result


def _sp_irreducible(f: list[int], p: int) -> bool:
    d = len(f) - 1
    if d == 1:
        return True
    x = [0, 1]
    r = _sp_mod(x, f, p)
    for _ in range(d // 2):
        r = _sp_powmod(r, p, f, p)
        g = _sp_gcd(f, _sp_trim([(ri - xi) % p for ri, xi in
                                 zip(r + [0] * 2, x + [0] * len(r))]), p)
        if len(g) != 1:
            return False
    return True


def least_irreducible(p: int, n: int) -> list[int]:
    """Least monic irreducible of degree n over F_p, by packed base-p index."""
    for i in range(p ** n):
        digits = []
        v = i
        for _ in range(n):
            digits.append(v % p)
            v //= p
        f = digits + [1]
        if _sp_irreducible(f, p):
            return f
    raise AssertionError("unreachable")


def _factor_int(m: int) -> list[int]:
    out = []
    d = 2
    while d * d <= m:
        if m % d == 0:
            out.append(d)
            while m % d == 0:
                m //= d
        d += 1
    if m > 1:
        out.append(m)
    return out


# ---------------------------------------------------------------------------


class LogField:
    """Tables for F_{p^n}; all batch operations take/return int64 log arrays."""

    __slots__ = ("p", "n", "order", "M", "half", "modulus", "gen_digits",
                 "exp", "log", "zech", "_const")

    _CACHE: "OrderedDict[tuple[int, int], LogField]" = OrderedDict()
    _CACHE_SIZE = 4

    @classmethod
    def get(cls, p: int, n: int) -> "LogField":
        key = (p, n)
        hit = cls._CACHE.get(key)
        if hit is not None:
            cls._CACHE.move_to_end(key)
            return hit
        field = cls(p, n)
        cls._CACHE[key] = field
        while len(cls._CACHE) > cls._CACHE_SIZE:
            cls._CACHE.popitem(last=False)
        return field

    def __init__(self, p: int, n: int):
        order = p ** n
        if order > TABLE_CAP:
            raise DepthLimitExceeded(
                f"residue field of size {p}^{n} exceeds the table engine cap")
        self.p, self.n, self.order = p, n, order
        M = order - 1
        self.M = M
        self.half = M // 2
        self.modulus = least_irreducible(p, n)
        self.gen_digits = self._find_generator()
        self._build_tables()
        self._const = self.log[np.arange(p)].astype(np.int64)

    # -- construction -------------------------------------------------------

    def _find_generator(self) -> list[int]:
        p, n, M = self.p, self.n, self.M
        prime_factors = _factor_int(M)
        v = 2
        while True:
            digits = []
            w = v
            for _ in range(n):
                digits.append(w % p)
                w //= p
            cand = _sp_trim(digits)
            if cand:
                for r in prime_factors:
                    if _sp_powmod(cand, M // r, self.modulus, p) == [1]:
                        break
                else:
                    return cand
            v += 1

    def _element_power_digits(self, e: int) -> np.ndarray:
        cs = _sp_powmod(self.gen_digits, e, self.modulus, self.p)
        out = np.zeros(self.n, np.int64)
        out[: len(cs)] = cs
        return out

    def _mul_matrix(self, e: int) -> np.ndarray:
        """Matrix of multiplication by g^e on base-p digit vectors (row j =
        digits of g^e * X^j mod modulus).  Entries are tiny, so float64
        matmul is exact and rides on BLAS."""
        p, n = self.p, self.n
        w = _sp_powmod(self.gen_digits, e, self.modulus, p)
        W = np.zeros((n, n), np.float64)
        cur = list(w)
        for j in range(n):
            for k, c in enumerate(cur):
                W[j, k] = c
            cur = _sp_mod([0] + cur, self.modulus, p)
        return W

    def _build_tables(self) -> None:
        p, n, M = self.p, self.n, self.M
        C = np.zeros((M, n), np.int8)
        C[0, 0] = 1
        filled = 1
        block_cap = 1 << 20
        while filled < M:
            t = min(filled, M - filled, block_cap)
            W = self._mul_matrix(filled)
            nb = C[:t].astype(np.float64) @ W
            np.mod(nb, p, out=nb)
            C[filled:filled + t] = nb.astype(np.int8)
            filled += t
        # pack base p and invert
        pv = (p ** np.arange(n)).astype(np.float64)
        exp = np.empty(M, np.int32)
        step = 1 << 21
        for lo in range(0, M, step):
            hi = min(lo + step, M)
            exp[lo:hi] = (C[lo:hi].astype(np.float64) @ pv).astype(np.int32)
        del C
        log = np.full(self.order, -1, np.int32)
        log[exp] = np.arange(M, dtype=np.int32)
        # zech[k] = log(1 + g^k): adding 1 only touches the constant digit
        d0 = exp % p
        plus1 = np.where(d0 == p - 1, exp - (p - 1), exp + 1)
        zech = log[plus1]
        self.exp, self.log, self.zech = exp, log, zech

    # -- batch operations (logs as int64; -1 encodes zero) -------------------

    def mul(self, a, b):
        a = np.asarray(a, np.int64)
        b = np.asarray(b, np.int64)
        r = a + b
        r -= (r >= self.M) * np.int64(self.M)
        return np.where((a < 0) | (b < 0), -1, r)

    def pow_s(self, a, e: int):
        a = np.asarray(a, np.int64)
        return np.where(a < 0, -1, a * (e % self.M) % self.M)

    def inv(self, a):
        a = np.asarray(a, np.int64)
        r = np.int64(self.M) - a
        r = np.where(r == self.M, 0, r)
        return np.where(a < 0, -1, r)

    def neg(self, a):
        a = np.asarray(a, np.int64)
        r = a + np.int64(self.half)
        r -= (r >= self.M) * np.int64(self.M)
        return np.where(a < 0, -1, r)

    def add(self, a, b):
        a = np.asarray(a, np.int64)
        b = np.asarray(b, np.int64)
        M = np.int64(self.M)
        d = b - a
        d += (d < 0) * M
        d -= (d >= M) * M          # b - a = M exactly when a = -1, b = M - 1
        z = self.zech[d].astype(np.int64)
        r = a + z
        r -= (r >= M) * M
        r = np.where(z < 0, -1, r)
        r = np.where(a < 0, b, r)
        return np.where(b < 0, a, r)

    def sub(self, a, b):
        a = np.asarray(a, np.int64)
        b = np.asarray(b, np.int64)
        M = np.int64(self.M)
        nb = b + np.int64(self.half)
        nb -= (nb >= M) * M
        nb = np.where(b < 0, -1, nb)
        d = nb - a
        d += (d < 0) * M
        d -= (d >= M) * M
        z = self.zech[d].astype(np.int64)
        r = a + z
        r -= (r >= M) * M
        r = np.where(z < 0, -1, r)
        r = np.where(a < 0, nb, r)
        return np.where(nb < 0, a, r)

    def chi(self, a):
        """Quadratic character: +1 / -1 / 0, from log parity."""
        a = np.asarray(a, np.int64)
        return np.where(a < 0, 0, 1 - 2 * (a & 1))

    def sqrt_even(self, a):
        """Square root of elements whose log is even (callers check parity)."""
        a = np.asarray(a, np.int64)
        return np.where(a < 0, -1, a >> 1)

    def log_of_packed(self, v):
        return self.log[np.asarray(v)].astype(np.int64)

    def packed_of_log(self, a):
        a = np.asarray(a, np.int64)
        return np.where(a < 0, 0, self.exp[np.where(a < 0, 0, a)]).astype(np.int64)

    def const_log(self, c: int) -> int:
        return int(self._const[c % self.p])

    # -- scalar operations ----------------------------------------------------

    def s_mul(self, a: int, b: int) -> int:
        if a < 0 or b < 0:
            return -1
        return (a + b) % self.M

    def s_add(self, a: int, b: int) -> int:
        if a < 0:
            return b
        if b < 0:
            return a
        z = int(self.zech[(b - a) % self.M])
        if z < 0:
            return -1
        return (a + z) % self.M

    def s_neg(self, a: int) -> int:
        return -1 if a < 0 else (a + self.half) % self.M

    # -- structure ------------------------------------------------------------

    def degree_reps(self, sub_q: int, d: int) -> np.ndarray:
        """Logs of canonical representatives of Frobenius orbits of size d.

        The ambient field must be F_{sub_q^d}.  Representatives are the
        orbit members with least packed value; the returned array is sorted
        by packed value.  For d == 1 the zero element (log -1) is included,
        since every ambient element then names a place.
        """
        assert sub_q ** d == self.order
        M = self.M
        out = []
        step = 1 << 20
        for lo in range(0, M, step):
            j = np.arange(lo, min(lo + step, M), dtype=np.int64)
            cur = j.copy()
            deg = np.zeros(len(j), np.int8)
            mn = self.exp[j].astype(np.int64)
            for i in range(1, d + 1):
                cur = cur * sub_q % M
                hit = (cur == j) & (deg == 0)
                deg[hit] = i
                np.minimum(mn, self.exp[cur], out=mn)
            keep = (deg == d) & (self.exp[j] == mn)
            out.append(j[keep])
        reps = np.concatenate(out) if out else np.empty(0, np.int64)
        order = np.argsort(self.exp[reps], kind="stable")
        reps = reps[order]
        if d == 1:
            reps = np.concatenate([np.array([-1], np.int64), reps])
        return reps

    def minimal_polynomial(self, j: int, sub_q: int, d: int) -> tuple[int, ...]:
        """Min poly over F_{sub_q} of gamma^j, as base-p digits (sub_q = p only)."""
        if j < 0:
            return (0, 1)
        roots = []
        r = j
        for _ in range(d):
            roots.append(r)
            r = r * sub_q % self.M
        coeffs = [0]  # the constant polynomial 1, in log form
        for root in roots:
            negr = self.s_neg(root)
            new = [self.s_mul(negr, coeffs[0])]
            for i in range(1, len(coeffs)):
                new.append(self.s_add(coeffs[i - 1], self.s_mul(negr, coeffs[i])))
            new.append(coeffs[-1])
            coeffs = new
        digits = []
        for c in coeffs:
            v = 0 if c < 0 else int(self.exp[c])
            if v >= self.p:
                raise AssertionError("minimal polynomial not over the prime field")
            digits.append(v)
        return tuple(digits)


def monic_irreducibles(p: int, d: int) -> list[tuple[int, ...]]:
    """Digit tuples (ascending, monic) of all monic irreducibles of degree d."""
    F = LogField.get(p, d)
    reps = F.degree_reps(p, d)
    return [F.minimal_polynomial(int(j), p, d) for j in reps]
