"""Exact arithmetic in finite fields of characteristic >= 5 and their
polynomial rings, plus enumeration of monic irreducibles.

A field is described by a :class:`FieldSpec`: either the prime field F_p
or an extension ``base[y]/(modulus)`` with a monic irreducible modulus over
the base field.  Residue fields of places are built as one extra level on
top of the constant field, so a spec is a short tower whose bottom is F_p.

Element representation (``FieldElement.rep``): an integer in ``[0, p)`` for
prime fields, otherwise a tuple of base-field elements in ascending powers
of the generator, always of length equal to the extension degree.  The
integer ``index()`` of an element packs those digits in base p (constant
digit least significant); indices order elements and polynomials
"lexicographically" in the sense used throughout: comparing coefficient
sequences from the highest power down.

Polynomials (:class:`Poly`) are immutable coefficient tuples in ascending
order with no trailing zeros; the zero polynomial has degree -1.  All
arithmetic here is exact -- no floating point anywhere.
"""

from __future__ import annotations

import random
from typing import Iterator, Optional, Sequence

from .errors import (
    NotPrime,
    ParseError,
    ReducibleModulus,
    SmallCharacteristic,
    ZeroPolynomial,
)

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid far beyond any size used here."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def moebius(n: int) -> int:
    m, res = n, 1
    p = 2
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            res = -res
        p += 1
    if m > 1:
        res = -res
    return res


def monic_irreducible_count(q: int, d: int) -> int:
    """Number of monic irreducibles of degree d over F_q (necklace count)."""
    total = 0
    for e in range(1, d + 1):
        if d % e == 0:
            total += moebius(e) * q ** (d // e)
    assert total % d == 0
    return total // d


class FieldSpec:
    """A finite field: F_p, or an extension of another FieldSpec.

    Immutable.  ``p`` is the characteristic, ``k`` the degree over F_p,
    ``q = p**k`` the cardinality.  For extensions, ``modulus`` holds the
    monic defining polynomial over ``base`` as an ascending coefficient
    tuple of base elements (length ``deg + 1``).
    """

    __slots__ = ("p", "k", "q", "base", "modulus", "deg", "_key", "_hash")

    def __init__(self, p: int, base: Optional["FieldSpec"] = None,
                 modulus: Optional[tuple] = None):
        self.p = p
        self.base = base
        self.modulus = modulus
        if base is None:
            self.deg = 1
            self.k = 1
            self.q = p
            self._key = (p,)
        else:
            assert modulus is not None and len(modulus) >= 2
            self.deg = len(modulus) - 1
            self.k = base.k * self.deg
            self.q = base.q ** self.deg
            self._key = (p, base._key, tuple(c.index() for c in modulus))
        self._hash = hash(self._key)

    # -- identity ---------------------------------------------------------

    def __eq__(self, other):
        return isinstance(other, FieldSpec) and self._key == other._key

    def __hash__(self):
        return self._hash

    def __repr__(self):
        if self.base is None:
            return f"F_{self.p}"
        return f"F_{self.q}({self.base!r}[y]/deg{self.deg})"

    # -- element construction ---------------------------------------------

    def zero(self) -> "FieldElement":
        return FieldElement(self, self._zero_rep())

    def one(self) -> "FieldElement":
        return FieldElement(self, self._int_rep(1))

    def element(self, n: int) -> "FieldElement":
        """The image of the integer n (prime-subfield element)."""
        return FieldElement(self, self._int_rep(n))

    def lift(self, c: "FieldElement") -> "FieldElement":
        """Embed a base-field element as a constant of this field."""
        if self.base is None:
            raise ValueError("prime field has no base")
        if c.field != self.base:
            raise ValueError("element not in base field")
        rep = (c,) + tuple(self.base.zero() for _ in range(self.deg - 1))
        return FieldElement(self, rep)

    def from_coeffs(self, coeffs: Sequence["FieldElement"]) -> "FieldElement":
        """Element from base-field digits (ascending), padded with zeros."""
        if self.base is None:
            raise ValueError("prime field has no base")
        cs = list(coeffs)
        if len(cs) > self.deg:
            raise ValueError("too many digits")
        cs += [self.base.zero()] * (self.deg - len(cs))
        return FieldElement(self, tuple(cs))

    def from_index(self, i: int) -> "FieldElement":
        if not 0 <= i < self.q:
            raise ValueError("index out of range")
        return FieldElement(self, self._rep_from_index(i))

    def elements(self) -> Iterator["FieldElement"]:
        for i in range(self.q):
            yield self.from_index(i)

    # -- raw representation helpers ----------------------------------------

    def _zero_rep(self):
        if self.base is None:
            return 0
        return tuple(self.base.zero() for _ in range(self.deg))

    def _int_rep(self, n: int):
        if self.base is None:
            return n % self.p
        rep = [self.base.element(n)] + [self.base.zero()] * (self.deg - 1)
        return tuple(rep)

    def _rep_from_index(self, i: int):
        if self.base is None:
            return i
        bq = self.base.q
        digits = []
        for _ in range(self.deg):
            digits.append(self.base.from_index(i % bq))
            i //= bq
        return tuple(digits)

    def _index(self, rep) -> int:
        if self.base is None:
            return rep
        bq = self.base.q
        out = 0
        for c in reversed(rep):
            out = out * bq + c.index()
        return out

    # -- arithmetic on raw reps ---------------------------------------------

    def _add(self, a, b):
        if self.base is None:
            return (a + b) % self.p
        return tuple(x + y for x, y in zip(a, b))

    def _sub(self, a, b):
        if self.base is None:
            return (a - b) % self.p
        return tuple(x - y for x, y in zip(a, b))

    def _neg(self, a):
        if self.base is None:
            return (-a) % self.p
        return tuple(-x for x in a)

    def _mul(self, a, b):
        if self.base is None:
            return a * b % self.p
        base, d = self.base, self.deg
        zero = base.zero()
        full = [zero] * (2 * d - 1)
        for i, ai in enumerate(a):
            if ai.is_zero():
                continue
            for j, bj in enumerate(b):
                full[i + j] = full[i + j] + ai * bj
        # fold down by the monic modulus
        m = self.modulus
        for i in range(2 * d - 2, d - 1, -1):
            c = full[i]
            if c.is_zero():
                continue
            for j in range(d):
                full[i - d + j] = full[i - d + j] - c * m[j]
        return tuple(full[:d])

    def _is_zero(self, a) -> bool:
        if self.base is None:
            return a == 0
        return all(x.is_zero() for x in a)

    def _inv(self, a):
        if self._is_zero(a):
            raise ZeroDivisionError("inverse of zero field element")
        if self.base is None:
            return pow(a, self.p - 2, self.p)
        # extended Euclid over base[x] between rep(a) and the modulus
        base = self.base
        r0 = list(self.modulus)
        r1 = [c for c in a]
        _trim(r1)
        s0, s1 = [], [base.one()]
        while r1:
            q, r = _poly_divmod(r0, r1, base)
            r0, r1 = r1, r
            s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1, base), base)
        # r0 is a nonzero constant gcd
        c = r0[0] ** -1
        inv = [c * x for x in s0]
        inv += [base.zero()] * (self.deg - len(inv))
        return tuple(inv[: self.deg])

    def _pow(self, a, e: int):
        if e < 0:
            return self._pow(self._inv(a), -e)
        result = self._int_rep(1)
        b = a
        while e:
            if e & 1:
                result = self._mul(result, b)
            b = self._mul(b, b)
            e >>= 1
        return result


def _trim(cs: list) -> None:
    while cs and cs[-1].is_zero():
        cs.pop()


def _poly_sub(a: list, b: list, base: FieldSpec) -> list:
    n = max(len(a), len(b))
    zero = base.zero()
    out = [(a[i] if i < len(a) else zero) - (b[i] if i < len(b) else zero)
           for i in range(n)]
    _trim(out)
    return out


def _poly_mul(a: list, b: list, base: FieldSpec) -> list:
    if not a or not b:
        return []
    zero = base.zero()
    out = [zero] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai.is_zero():
            continue
        for j, bj in enumerate(b):
            out[i + j] = out[i + j] + ai * bj
    _trim(out)
    return out


def _poly_divmod(a: list, b: list, base: FieldSpec) -> tuple[list, list]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(a)
    _trim(r)
    q = [base.zero()] * max(0, len(r) - len(b) + 1)
    inv_lead = b[-1] ** -1
    while len(r) >= len(b):
        c = r[-1] * inv_lead
        d = len(r) - len(b)
        q[d] = c
        for i in range(len(b)):
            r[d + i] = r[d + i] - c * b[i]
        _trim(r)  # leading term cancels, so this always shrinks r
    return q, r


class FieldElement:
    """Immutable element of a :class:`FieldSpec`; operators are exact."""

    __slots__ = ("field", "rep")

    def __init__(self, field: FieldSpec, rep):
        self.field = field
        self.rep = rep

    def is_zero(self) -> bool:
        return self.field._is_zero(self.rep)

    def index(self) -> int:
        return self.field._index(self.rep)

    def __add__(self, other):
        return FieldElement(self.field, self.field._add(self.rep, other.rep))

    def __sub__(self, other):
        return FieldElement(self.field, self.field._sub(self.rep, other.rep))

    def __neg__(self):
        return FieldElement(self.field, self.field._neg(self.rep))

    def __mul__(self, other):
        if isinstance(other, int):
            other = self.field.element(other)
        return FieldElement(self.field, self.field._mul(self.rep, other.rep))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self * other ** -1

    def __pow__(self, e: int):
        return FieldElement(self.field, self.field._pow(self.rep, e))

    def __eq__(self, other):
        return (isinstance(other, FieldElement) and self.field == other.field
                and self.index() == other.index())

    def __hash__(self):
        return hash((self.field._hash, self.index()))

    def __repr__(self):
        return f"<{self.index()} in {self.field!r}>"

    def is_square(self) -> bool:
        if self.is_zero():
            return True
        e = (self.field.q - 1) // 2
        return (self ** e) == self.field.one()

    def sqrt(self) -> Optional["FieldElement"]:
        """A square root, or None.  Tonelli-Shanks; q is always odd here."""
        F = self.field
        if self.is_zero():
            return F.zero()
        q = F.q
        if not self.is_square():
            return None
        if q % 4 == 3:
            return self ** ((q + 1) // 4)
        # Tonelli-Shanks
        s, m = q - 1, 0
        while s % 2 == 0:
            s //= 2
            m += 1
        z = None
        for i in range(2, q):
            cand = F.from_index(i)
            if not cand.is_zero() and not cand.is_square():
                z = cand
                break
        assert z is not None
        c = z ** s
        t = self ** s
        r = self ** ((s + 1) // 2)
        while t != F.one():
            t2 = t
            i = 0
            while t2 != F.one():
                t2 = t2 * t2
                i += 1
            b = c ** (1 << (m - i - 1))
            m = i
            c = b * b
            t = t * c
            r = r * b
        return r


# ---------------------------------------------------------------------------
# field construction


_PRIME_FIELDS: dict[int, FieldSpec] = {}


def prime_field(p: int) -> FieldSpec:
    if p not in _PRIME_FIELDS:
        if not is_prime(p):
            raise NotPrime(f"{p} is not prime")
        if p < 5:
            raise SmallCharacteristic(f"characteristic {p} < 5 is unsupported")
        _PRIME_FIELDS[p] = FieldSpec(p)
    return _PRIME_FIELDS[p]


def make_extension_field(p: int, k: int = 1,
                         modulus: Optional["Poly"] = None) -> FieldSpec:
    """F_{p^k}, with a deterministic modulus when none is supplied.

    The generated modulus is the least monic irreducible of degree k over
    F_p, comparing coefficient sequences from the top power down (i.e. by
    packed base-p index).
    """
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if p < 5:
        raise SmallCharacteristic(f"characteristic {p} < 5 is unsupported")
    if k < 1:
        raise ParseError("extension degree must be >= 1")
    base = prime_field(p)
    if k == 1:
        if modulus is not None:
            raise ParseError("prime field takes no modulus")
        return base
    if modulus is None:
        modulus = _least_monic_irreducible(base, k)
    else:
        if modulus.field != base or modulus.degree() != k or not modulus.is_monic():
            raise ReducibleModulus("modulus must be monic of degree k over F_p")
        if not is_irreducible(modulus):
            raise ReducibleModulus("modulus is reducible")
    return FieldSpec(p, base, tuple(modulus.coeffs))


def _least_monic_irreducible(field: FieldSpec, d: int) -> "Poly":
    q = field.q
    for i in range(q ** d):
        f = _monic_from_index(field, d, i)
        if is_irreducible(f):
            return f
    raise AssertionError("unreachable: irreducibles of every degree exist")


def _monic_from_index(field: FieldSpec, d: int, i: int) -> "Poly":
    digits = []
    for _ in range(d):
        digits.append(field.from_index(i % field.q))
        i //= field.q
    return Poly(field, tuple(digits) + (field.one(),))


def residue_field(pi: "Poly", base: FieldSpec) -> FieldSpec:
    """The residue field F_q[T]/(pi) at a finite place.

    Reduction of polynomials into it is :meth:`reduce_mod`; the image of T
    is the canonical generator (``from_coeffs([0, 1])``).
    """
    if pi.field != base:
        raise ParseError("place polynomial not over the given field")
    if pi.degree() < 1 or not pi.is_monic() or not is_irreducible(pi):
        raise ReducibleModulus(f"not a monic irreducible: {pi}")
    return FieldSpec(base.p, base, tuple(pi.coeffs))


def reduce_mod(poly: "Poly", rf: FieldSpec) -> FieldElement:
    """Image of ``poly`` in the residue field ``rf`` built over its field."""
    if rf.base != poly.field:
        raise ParseError("residue field does not lie over the polynomial ring")
    rem = poly % Poly(poly.field, rf.modulus)
    return rf.from_coeffs(rem.coeffs)


# ---------------------------------------------------------------------------
# polynomials


class Poly:
    """Univariate polynomial over a FieldSpec; canonical (trimmed), immutable."""

    __slots__ = ("field", "coeffs", "_hash")

    def __init__(self, field: FieldSpec, coeffs: Sequence[FieldElement] = ()):
        cs = list(coeffs)
        while cs and cs[-1].is_zero():
            cs.pop()
        self.field = field
        self.coeffs = tuple(cs)
        self._hash = None

    @classmethod
    def from_ints(cls, field: FieldSpec, ints: Sequence[int]) -> "Poly":
        return cls(field, [field.element(n) for n in ints])

    @classmethod
    def constant(cls, field: FieldSpec, n: int) -> "Poly":
        return cls.from_ints(field, [n])

    @classmethod
    def x(cls, field: FieldSpec) -> "Poly":
        return cls.from_ints(field, [0, 1])

    def degree(self) -> int:
        """Degree; -1 for the zero polynomial (the distinguished sentinel)."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == self.field.one()

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def leading(self) -> FieldElement:
        if not self.coeffs:
            raise ZeroPolynomial("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def packed_index(self) -> int:
        out = 0
        for c in reversed(self.coeffs):
            out = out * self.field.q + c.index()
        return out

    def __eq__(self, other):
        return (isinstance(other, Poly) and self.field == other.field
                and len(self.coeffs) == len(other.coeffs)
                and all(a == b for a, b in zip(self.coeffs, other.coeffs)))

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.field._hash, self.packed_index()))
        return self._hash

    def __add__(self, other):
        other = self._coerce(other)
        return Poly(self.field, _pad_zip(self.coeffs, other.coeffs,
                                         self.field, lambda a, b: a + b))

    def __sub__(self, other):
        other = self._coerce(other)
        return Poly(self.field, _pad_zip(self.coeffs, other.coeffs,
                                         self.field, lambda a, b: a - b))

    def __neg__(self):
        return Poly(self.field, [-c for c in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, FieldElement):
            return Poly(self.field, [c * other for c in self.coeffs])
        other = self._coerce(other)
        if self.is_zero() or other.is_zero():
            return Poly(self.field)
        zero = self.field.zero()
        out = [zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return Poly(self.field, out)

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            return other
        if isinstance(other, int):
            return Poly.constant(self.field, other)
        raise TypeError(f"cannot combine Poly with {type(other)!r}")

    def __divmod__(self, other):
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroPolynomial("division by the zero polynomial")
        q, r = _poly_divmod(list(self.coeffs), list(other.coeffs), self.field)
        return Poly(self.field, q), Poly(self.field, r)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __pow__(self, e: int):
        result = Poly.constant(self.field, 1)
        b = self
        while e:
            if e & 1:
                result = result * b
            b = b * b
            e >>= 1
        return result

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        return self * self.leading() ** -1

    def derivative(self) -> "Poly":
        return Poly(self.field,
                    [c * i for i, c in enumerate(self.coeffs)][1:])

    def evaluate(self, x: FieldElement) -> FieldElement:
        """Horner evaluation; x may live in this field or an extension of it."""
        F = x.field
        if F == self.field:
            lift = lambda c: c
        elif F.base == self.field:
            lift = F.lift
        else:
            raise ParseError("evaluation point does not extend the coefficient field")
        acc = F.zero()
        for c in reversed(self.coeffs):
            acc = acc * x + lift(c)
        return acc

    def reverse(self) -> "Poly":
        return Poly(self.field, tuple(reversed(self.coeffs)))

    def shift(self, n: int) -> "Poly":
        """Multiply by T^n."""
        if self.is_zero():
            return self
        return Poly(self.field, (self.field.zero(),) * n + self.coeffs)

    def valuation(self, pi: "Poly") -> int:
        """Exact order of pi in self; raises on the zero polynomial."""
        if self.is_zero():
            raise ZeroPolynomial("zero polynomial has infinite valuation")
        v, cur = 0, self
        while True:
            q, r = divmod(cur, pi)
            if not r.is_zero():
                return v
            v += 1
            cur = q

    def powmod(self, e: int, mod: "Poly") -> "Poly":
        result = Poly.constant(self.field, 1) % mod
        b = self % mod
        while e:
            if e & 1:
                result = (result * b) % mod
            b = (b * b) % mod
            e >>= 1
        return result

    def __repr__(self):
        return f"Poly({poly_str(self)})"


def _pad_zip(a, b, field, op):
    zero = field.zero()
    n = max(len(a), len(b))
    return [op(a[i] if i < len(a) else zero, b[i] if i < len(b) else zero)
            for i in range(n)]


def poly_gcd(a: Poly, b: Poly) -> Poly:
    while not b.is_zero():
        a, b = b, a % b
    return a.monic() if not a.is_zero() else a


# ---------------------------------------------------------------------------
# irreducibility, enumeration, factorisation


def is_irreducible(f: Poly) -> bool:
    """True iff f is irreducible over its coefficient field.

    Deterministic: f of degree d has no factor of degree <= d/2 iff
    gcd(f, X^(q^i) - X) is constant for every i <= d/2, with the Frobenius
    powers taken mod f.
    """
    if f.is_zero():
        raise ZeroPolynomial("the zero polynomial is not classifiable")
    d = f.degree()
    if d == 0:
        return False
    if d == 1:
        return True
    field = f.field
    x = Poly.x(field)
    r = x % f
    for _ in range(d // 2):
        r = r.powmod(field.q, f)
        g = poly_gcd(f, r - x)
        if g.degree() != 0:
            return False
    return True


def enumerate_monic_irreducibles(field: FieldSpec, d: int) -> list[Poly]:
    """All monic irreducibles of degree exactly d, by ascending packed index."""
    if d < 1:
        raise ParseError("degree must be >= 1")
    if field.base is None:
        try:
            from . import smallfield

            if field.p ** d <= smallfield.TABLE_CAP:
                out = [Poly.from_ints(field, cs)
                       for cs in smallfield.monic_irreducibles(field.p, d)]
                out.sort(key=Poly.packed_index)
                return out
        except ImportError:  # pragma: no cover - numpy always present
            pass
    out = []
    for i in range(field.q ** d):
        f = _monic_from_index(field, d, i)
        if is_irreducible(f):
            out.append(f)
    return out


def squarefree_part_factors(f: Poly) -> list[tuple[Poly, int]]:
    """Squarefree decomposition [(g_i, e_i)] with f = lc * prod g_i^e_i."""
    field = f.field
    p = field.p
    f = f.monic()
    out: list[tuple[Poly, int]] = []

    def rec(h: Poly, mult: int):
        if h.degree() < 1:
            return
        dh = h.derivative()
        if dh.is_zero():
            # h = g(T^p); take p-th roots of coefficients
            cs = [h.coeffs[i] ** (field.q // p) for i in range(0, len(h.coeffs), p)]
            rec(Poly(field, cs), mult * p)
            return
        g = poly_gcd(h, dh)
        w = h // g
        i = 1
        while w.degree() >= 1:
            y = poly_gcd(w, g)
            z = w // y
            if z.degree() >= 1:
                out.append((z, mult * i))
            w = y
            g = g // y
            i += 1
        if g.degree() >= 1:
            rec(g, mult * p)

    rec(f, 1)
    return out


def factor(f: Poly, seed: int = 0xEC) -> list[tuple[Poly, int]]:
    """Full factorisation into monic irreducibles, sorted by (degree, index).

    Distinct-degree splitting followed by Cantor-Zassenhaus with a seeded
    generator, so results are reproducible.
    """
    if f.is_zero():
        raise ZeroPolynomial("cannot factor the zero polynomial")
    rng = random.Random(seed)
    field = f.field
    result: list[tuple[Poly, int]] = []
    for g, e in squarefree_part_factors(f):
        for h, d in _distinct_degree(g):
            for irr in _equal_degree(h, d, rng):
                result.append((irr, e))
    result.sort(key=lambda t: (t[0].degree(), t[0].packed_index()))
    return result


def _distinct_degree(f: Poly) -> list[tuple[Poly, int]]:
    field = f.field
    x = Poly.x(field)
    out = []
    r = x % f
    d = 0
    rest = f
    while rest.degree() > 2 * (d + 1) - 1 and rest.degree() >= 1:
        d += 1
        r = r.powmod(field.q, rest)
        g = poly_gcd(rest, r - x)
        if g.degree() >= 1:
            out.append((g, d))
            rest = rest // g
            r = r % rest
    if rest.degree() >= 1:
        out.append((rest, rest.degree()))
    return out


def _equal_degree(f: Poly, d: int, rng: random.Random) -> list[Poly]:
    field = f.field
    n = f.degree()
    if n == d:
        return [f.monic()]
    exp = (field.q ** d - 1) // 2
    while True:
        r = Poly(field, [field.from_index(rng.randrange(field.q))
                         for _ in range(n)])
        if r.degree() < 1:
            continue
        g = poly_gcd(f, r)
        if 1 <= g.degree() < n:
            return _equal_degree(g, d, rng) + _equal_degree(f // g, d, rng)
        h = r.powmod(exp, f) - Poly.constant(field, 1)
        g = poly_gcd(f, h)
        if 1 <= g.degree() < n:
            return _equal_degree(g, d, rng) + _equal_degree(f // g, d, rng)


# ---------------------------------------------------------------------------
# text grammar: integer coefficients, variable T, operators + - * ^


def parse_poly(text: str, field: FieldSpec, var: str = "T") -> Poly:
    """Parse e.g. ``T^3+4*T+2``; coefficients reduce mod p on the way in."""
    toks = _tokenize(text, var)
    pos = 0

    def peek():
        return toks[pos] if pos < len(toks) else None

    def take():
        nonlocal pos
        if pos >= len(toks):
            raise ParseError(f"unexpected end of polynomial {text!r}")
        t = toks[pos]
        pos += 1
        return t

    def parse_expr() -> Poly:
        sign = 1
        if peek() in ("+", "-"):
            sign = -1 if take() == "-" else 1
        acc = parse_term() * field.element(sign)
        while peek() in ("+", "-"):
            op = take()
            t = parse_term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def parse_term() -> Poly:
        acc = parse_factor()
        while peek() == "*":
            take()
            acc = acc * parse_factor()
        return acc

    def parse_factor() -> Poly:
        t = peek()
        if t == "(":
            take()
            inner = parse_expr()
            if take() != ")":
                raise ParseError(f"unbalanced parentheses in {text!r}")
            return inner
        if t == "VAR":
            take()
            e = 1
            if peek() == "^":
                take()
                nxt = take()
                if not isinstance(nxt, int):
                    raise ParseError(f"expected integer exponent in {text!r}")
                e = nxt
            return Poly.x(field) ** e
        if isinstance(t, int):
            take()
            return Poly.constant(field, t)
        raise ParseError(f"unexpected token {t!r} in {text!r}")

    out = parse_expr()
    if pos != len(toks):
        raise ParseError(f"trailing input in {text!r}")
    return out


def _tokenize(text: str, var: str) -> list:
    toks: list = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch in "+-*^()":
            toks.append(ch)
            i += 1
        elif ch == var:
            toks.append("VAR")
            i += 1
        elif ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            toks.append(int(text[i:j]))
            i = j
        else:
            raise ParseError(f"bad character {ch!r} in polynomial {text!r}")
    if not toks:
        raise ParseError("empty polynomial text")
    return toks


def poly_str(f: Poly, var: str = "T") -> str:
    """Inverse-ish of parse_poly: descending terms, integer digit coefficients."""
    if f.is_zero():
        return "0"
    parts = []
    for i in range(f.degree(), -1, -1):
        c = f.coeffs[i]
        if c.is_zero():
            continue
        ci = c.index()
        if i == 0:
            parts.append(str(ci))
        elif i == 1:
            parts.append(f"{ci}*{var}" if ci != 1 else var)
        else:
            parts.append(f"{ci}*{var}^{i}" if ci != 1 else f"{var}^{i}")
    return "+".join(parts)
