"""Elliptic curves over F_q(T): invariants, reduction types, local data.

Curves are given by five Weierstrass coefficient polynomials over the
constant field.  Characteristic >= 5 throughout, so every curve has a
short model y^2 = x^3 + Ax + B with A = -c4/48, B = -c6/864 (exactly the
same c4, c6 and discriminant), reduction at every place is tame, and the
conductor exponent is 0/1/2 for good/multiplicative/additive.

Local data at a finite place pi: minimalise the short model (divide (A, B)
by (pi^4, pi^6) while v(c4) >= 4, v(c6) >= 6, v(disc) >= 12), then read
the reduction type off the minimal valuations.  The infinite place is
handled through the substitution T = 1/S with the least (x, y) rescaling
that clears denominators; its local data is the data of that model at S.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from . import counting
from .algebra import (
    FieldElement,
    FieldSpec,
    Poly,
    factor,
    is_prime,
    make_extension_field,
    parse_poly,
    poly_str,
    reduce_mod,
    residue_field,
)
from .errors import (
    HasseViolation,
    IsotrivialOrConstant,
    ParseError,
    SingularCurve,
)
from .places import Place

GOOD = "good"
SPLIT = "split_mult"
NONSPLIT = "nonsplit_mult"
ADDITIVE = "additive"


class CurveSpec:
    """An elliptic curve over F_q(T) with its derived invariants.

    Attributes b2..b8, c4, c6, disc are exact polynomials; j is kept as a
    reduced fraction (j_num, j_den) with monic denominator.
    """

    __slots__ = ("field", "a1", "a2", "a3", "a4", "a6", "b2", "b4", "b6",
                 "b8", "c4", "c6", "disc", "j_num", "j_den", "_hash")

    def __init__(self, field: FieldSpec, a1: Poly, a2: Poly, a3: Poly,
                 a4: Poly, a6: Poly):
        self.field = field
        self.a1, self.a2, self.a3, self.a4, self.a6 = a1, a2, a3, a4, a6
        b2 = a1 * a1 + a2 * 4
        b4 = a4 * 2 + a1 * a3
        b6 = a3 * a3 + a6 * 4
        b8 = a1 * a1 * a6 + a2 * a6 * 4 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        c4 = b2 * b2 - b4 * 24
        c6 = -(b2 * b2 * b2) + b2 * b4 * 36 - b6 * 216
        disc = -(b2 * b2 * b8) - b4 * b4 * b4 * 8 - b6 * b6 * 27 + b2 * b4 * b6 * 9
        if disc.is_zero():
            raise SingularCurve("discriminant vanishes identically")
        self.b2, self.b4, self.b6, self.b8 = b2, b4, b6, b8
        self.c4, self.c6, self.disc = c4, c6, disc
        num = c4 * c4 * c4
        from .algebra import poly_gcd

        g = poly_gcd(num, disc)
        j_num, j_den = num // g, disc // g
        lead_inv = j_den.leading() ** -1
        self.j_num, self.j_den = j_num * lead_inv, j_den.monic()
        self._hash = hash((field, a1, a2, a3, a4, a6))

    def coefficients(self) -> tuple[Poly, Poly, Poly, Poly, Poly]:
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    def short_AB(self) -> tuple[Poly, Poly]:
        """(A, B) with y^2 = x^3 + Ax + B isomorphic over F_q(T)."""
        F = self.field
        inv48 = F.element(48) ** -1
        inv864 = F.element(864) ** -1
        return (-(self.c4 * inv48), -(self.c6 * inv864))

    def __eq__(self, other):
        return (isinstance(other, CurveSpec) and self.field == other.field
                and self.coefficients() == other.coefficients())

    def __hash__(self):
        return self._hash

    def __repr__(self):
        a = ", ".join(poly_str(p) for p in self.coefficients())
        return f"CurveSpec(q={self.field.q}; a=[{a}])"


def derive_invariants(c: CurveSpec):
    """(b2, b4, b6, b8, c4, c6, disc, (j_num, j_den))."""
    return (c.b2, c.b4, c.b6, c.b8, c.c4, c.c6, c.disc, (c.j_num, c.j_den))


def check_nonconstant(c: CurveSpec) -> None:
    """Reject curves whose j-invariant is constant (isotrivial or constant)."""
    if c.j_num.degree() <= 0 and c.j_den.degree() <= 0:
        raise IsotrivialOrConstant(
            "j-invariant is constant; the curve is outside the supported class")


def infinite_place_model(c: CurveSpec) -> tuple[CurveSpec, int]:
    """Model in S = 1/T that is integral at S = 0, with the scaling exponent m.

    Substitutes T = 1/S and rescales (x, y) -> (x S^{-2m}, y S^{-3m}) with
    the least m >= 0 clearing all denominators.  Only meaningful locally
    at S = 0.
    """
    weights = (1, 2, 3, 4, 6)
    m = 0
    for w, a in zip(weights, c.coefficients()):
        if not a.is_zero():
            m = max(m, -(-a.degree() // w))  # ceil(deg/w)
    new = []
    for w, a in zip(weights, c.coefficients()):
        if a.is_zero():
            new.append(a)
        else:
            new.append(a.reverse().shift(w * m - a.degree()))
    return CurveSpec(c.field, *new), m


@dataclass(frozen=True)
class LocalData:
    """Reduction data at one place.

    ``j_pole`` records whether the j-invariant has a pole at the place
    (always true at multiplicative places; at additive places it flags
    potential multiplicativity, which the symmetric square sees).
    """

    place: Place
    red: str                    # good | split_mult | nonsplit_mult | additive
    a: int
    f: int                      # conductor exponent (0, 1 or 2)
    theta: Optional[float]      # Satake angle, good places only
    j_pole: bool = False

    @property
    def qv(self) -> int:
        return self.place.qv


@dataclass(frozen=True)
class _Classification:
    red: str
    f: int
    shifts: int
    A_min: Poly
    B_min: Poly
    v_disc: int
    v_c4: int


def _valuation(f: Poly, pi: Poly) -> int:
    # zero polynomial handled as +infinity by callers
    return f.valuation(pi)


def minimalize_at(c: CurveSpec, place: Place) -> tuple[Poly, Poly, Poly, Poly, Poly]:
    """Coefficient tuple of a model minimal at the place (short form)."""
    if place.kind == "infinite":
        model, _ = infinite_place_model(c)
        cls = _classify(model, Poly.x(model.field))
    else:
        cls = _classify(c, place.pi)
    zero = Poly(c.field)
    return (zero, zero, zero, cls.A_min, cls.B_min)


def _classify(c: CurveSpec, pi: Poly) -> _Classification:
    A, B = c.short_AB()
    shifts = 0
    while True:
        vA = math.inf if A.is_zero() else A.valuation(pi)
        vB = math.inf if B.is_zero() else B.valuation(pi)
        if vA >= 4 and vB >= 6:
            A = A // pi ** 4 if not A.is_zero() else A
            B = B // pi ** 6 if not B.is_zero() else B
            shifts += 1
        else:
            break
    # disc of (0,0,0,A,B) equals the original disc scaled by pi^(12*shifts)
    dmin = -(A * A * A * 4 + B * B * 27) * c.field.element(16)
    v_disc = dmin.valuation(pi)
    v_c4 = math.inf if A.is_zero() else A.valuation(pi)
    if v_disc == 0:
        return _Classification(GOOD, 0, shifts, A, B, 0, v_c4)
    if v_c4 == 0:
        return _Classification("mult", 1, shifts, A, B, v_disc, 0)
    return _Classification(ADDITIVE, 2, shifts, A, B, v_disc, v_c4)


def _split_or_not(cls: _Classification, pi: Poly) -> str:
    """Multiplicative reduction: decide whether the node's tangents split."""
    rf = residue_field(pi, pi.field)
    Ab = reduce_mod(cls.A_min, rf)
    Bb = reduce_mod(cls.B_min, rf)
    # double root of x^3 + Ax + B: x0 = -3B / (2A)
    x0 = -(Bb * 3) / (Ab * 2)
    s = x0 * 3
    assert not s.is_zero()
    return SPLIT if s.is_square() else NONSPLIT


def local_data(c: CurveSpec, place: Place, *, threshold: int = 1 << 16,
               seed: int = 0) -> LocalData:
    """LocalData at one place (the infinite place goes through its model)."""
    if place.kind == "infinite":
        model, _ = infinite_place_model(c)
        inner = local_data(model, Place.finite(Poly.x(model.field)),
                           threshold=threshold, seed=seed)
        return LocalData(place, inner.red, inner.a, inner.f, inner.theta,
                         inner.j_pole)
    pi = place.pi
    cls = _classify(c, pi)
    if cls.red == GOOD:
        rf = residue_field(pi, pi.field)
        Ab = reduce_mod(cls.A_min, rf)
        Bb = reduce_mod(cls.B_min, rf)
        n = counting.count_points(Ab, Bb, rf, threshold=threshold, seed=seed)
        a = place.qv + 1 - n
        return LocalData(place, GOOD, a, 0, satake_angle(a, place.qv))
    j_pole = (c.j_den % pi).is_zero()
    if cls.red == "mult":
        red = _split_or_not(cls, pi)
        return LocalData(place, red, 1 if red == SPLIT else -1, 1, None, j_pole)
    return LocalData(place, ADDITIVE, 0, 2, None, j_pole)


def satake_angle(a: int, qv: int) -> float:
    """theta in [0, pi] with a = 2 sqrt(qv) cos(theta)."""
    if a * a > 4 * qv:
        raise HasseViolation(f"|a|={abs(a)} exceeds 2*sqrt({qv})")
    x = a / (2.0 * math.sqrt(qv))
    return math.acos(max(-1.0, min(1.0, x)))


def finite_bad_places(c: CurveSpec) -> list[tuple[Place, _Classification]]:
    """Every finite place dividing the discriminant, with its classification."""
    out = []
    for pi, _ in factor(c.disc):
        out.append((Place.finite(pi), _classify(c, pi)))
    return out


def conductor_degree(c: CurveSpec) -> int:
    """deg of the conductor, the infinite place included."""
    total = 0
    for place, cls in finite_bad_places(c):
        total += cls.f * place.d
    model, _ = infinite_place_model(c)
    total += _classify(model, Poly.x(model.field)).f
    return total


# ---------------------------------------------------------------------------
# curve text format: `q = 5` (or p/k/modulus) and `a = [a1, a2, a3, a4, a6]`


def _prime_power(q: int) -> tuple[int, int]:
    for p in range(2, q + 1):
        if p * p > q:
            break
        if q % p == 0:
            k = 0
            while q % p == 0:
                q //= p
                k += 1
            if q != 1:
                raise ParseError("q is not a prime power")
            return p, k
    if is_prime(q):
        return q, 1
    raise ParseError("q is not a prime power")


def curve_from_text(text: str) -> CurveSpec:
    entries: dict[str, str] = {}
    for raw in text.replace(";", "\n").splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(f"expected key = value, got {line!r}")
        key, val = line.split("=", 1)
        entries[key.strip()] = val.strip()
    if "a" not in entries:
        raise ParseError("curve spec lacks the coefficient line 'a = [...]'")
    if "p" in entries and "k" in entries:
        p, k = int(entries["p"]), int(entries["k"])
    elif "q" in entries:
        p, k = _prime_power(int(entries["q"]))
    else:
        raise ParseError("curve spec needs q (or p and k)")
    if "q" in entries and int(entries["q"]) != p ** k:
        raise ParseError("q does not match p^k")
    modulus = None
    if "modulus" in entries:
        modulus = parse_poly(entries["modulus"], make_extension_field(p))
    field = make_extension_field(p, k, modulus)
    alist = entries["a"].strip()
    if not (alist.startswith("[") and alist.endswith("]")):
        raise ParseError("coefficients must be bracketed: a = [...]")
    parts = [s.strip() for s in alist[1:-1].split(",")]
    if len(parts) != 5:
        raise ParseError("exactly five coefficients a1, a2, a3, a4, a6 required")
    coeffs = [parse_poly(s, field) for s in parts]
    return CurveSpec(field, *coeffs)


def load_curve(path: str) -> CurveSpec:
    with open(path, "r", encoding="utf-8") as fh:
        return curve_from_text(fh.read())
