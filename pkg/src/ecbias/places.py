"""Places of the rational function field F_q(T).

A finite place is a monic irreducible polynomial over the constant field;
there is one infinite place (the valuation at degree), of degree 1.  The
norm of a place of degree d is q^d.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .algebra import (
    FieldSpec,
    Poly,
    enumerate_monic_irreducibles,
    monic_irreducible_count,
    poly_str,
)


@dataclass(frozen=True)
class Place:
    kind: str               # "finite" | "infinite"
    pi: Optional[Poly]      # monic irreducible; None for the infinite place
    d: int
    qv: int

    @classmethod
    def finite(cls, pi: Poly) -> "Place":
        d = pi.degree()
        return cls("finite", pi, d, pi.field.q ** d)

    @classmethod
    def infinite(cls, field: FieldSpec) -> "Place":
        return cls("infinite", None, 1, field.q)

    def label(self) -> str:
        return "infinity" if self.kind == "infinite" else poly_str(self.pi)

    def __repr__(self):
        return f"Place({self.label()}, d={self.d})"


def finite_places(field: FieldSpec, d: int) -> list[Place]:
    """All finite places of degree d, ordered by packed coefficient index."""
    return [Place.finite(pi) for pi in enumerate_monic_irreducibles(field, d)]


def place_count(field: FieldSpec, d: int) -> int:
    return monic_irreducible_count(field.q, d)
