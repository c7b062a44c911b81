"""Polynomial maps of the plane, their Jacobian and the Keller condition."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .polyring import XY, Polynomial, parse_poly, partial_derivative, substitute


@dataclass(frozen=True)
class PolyMap:
    """Endomorphism of K[x,y] given by the images P = f(x), Q = f(y)."""

    P: Polynomial
    Q: Polynomial

    def __post_init__(self):
        if self.P.varset != XY or self.Q.varset != XY:
            raise ValueError("map images must be polynomials in x, y")

    @classmethod
    def parse(cls, P: str, Q: str) -> "PolyMap":
        return cls(parse_poly(P, XY), parse_poly(Q, XY))

    @classmethod
    def identity(cls) -> "PolyMap":
        x, y = XY.gens()
        return cls(x, y)

    def images(self) -> dict[str, Polynomial]:
        return {"x": self.P, "y": self.Q}

    def degree(self) -> int:
        return max(self.P.total_degree(), self.Q.total_degree())

    def __str__(self) -> str:
        return f"({self.P}, {self.Q})"


def compose(a: PolyMap, b: PolyMap) -> PolyMap:
    """Composite morphism a∘b: x ↦ b.P(a.P, a.Q), y ↦ b.Q(a.P, a.Q).

    As ring maps, b acts first and a is applied to the result, so
    ``compose(m, inverse)`` is the identity when ``inverse`` undoes ``m``.
    """
    images = a.images()
    return PolyMap(substitute(b.P, images), substitute(b.Q, images))


def jacobian_det(m: PolyMap) -> Polynomial:
    Px, Py = partial_derivative(m.P, "x"), partial_derivative(m.P, "y")
    Qx, Qy = partial_derivative(m.Q, "x"), partial_derivative(m.Q, "y")
    return Px * Qy - Py * Qx


@dataclass(frozen=True)
class KellerReport:
    jacobian: Polynomial
    is_keller: bool
    jacobian_constant: Optional[Fraction] = None


def keller_check(m: PolyMap) -> KellerReport:
    jac = jacobian_det(m)
    if jac and jac.is_constant():
        return KellerReport(jac, True, jac.constant_value())
    return KellerReport(jac, False, None)


def algebraic_independence(m: PolyMap) -> bool:
    # exact in characteristic zero: P, Q independent iff Jacobian is nonzero
    return not jacobian_det(m).is_zero()
