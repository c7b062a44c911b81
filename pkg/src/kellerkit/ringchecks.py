"""Regularity, normality and dimension of B = K[u,v,s]/(g), and the verdict.

B is a hypersurface, hence Cohen-Macaulay, so Serre's criterion reduces
normality to R1: the singular locus V(g, g_u, g_v, g_s) must have dimension
at most 0 inside the surface.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional

from .errors import InternalContract
from .groebner import buchberger, ideal_dimension
from .inversion import InverseResult, invert_map, verify_inverse
from .keller import KellerReport, PolyMap, algebraic_independence, keller_check
from .polyring import Polynomial, partial_derivative
from .presentation import Presentation, find_good_lambda, minimal_polynomial

NORMALITY_CITATIONS = (
    "Theorem: normality of K[P,Q][x+y] implies invertibility",
    "via: Adjamagbo equivalence, Bass unramified descent, Keller birational criterion",
)


class Status(str, enum.Enum):
    INVERTIBLE = "INVERTIBLE"
    NOT_KELLER = "NOT_KELLER"
    # kept for report compatibility; Keller maps that fail normality are JC_ALERT
    NOT_INVERTIBLE_NOT_NORMAL = "NOT_INVERTIBLE_NOT_NORMAL"
    JC_ALERT = "JC_ALERT"


@dataclass(frozen=True)
class NormalityReport:
    jacobian_ideal_gens: tuple[Polynomial, ...]
    smooth: bool
    singular_locus_dimension: int
    normal: bool


def jacobian_ideal(g: Polynomial) -> list[Polynomial]:
    if g.is_zero():
        raise ValueError("jacobian_ideal of the zero polynomial")
    return [g] + [partial_derivative(g, name) for name in g.varset.names]


def is_smooth_hypersurface(g: Polynomial) -> bool:
    return buchberger(jacobian_ideal(g)).is_unit()


def singular_locus_dimension(g: Polynomial) -> int:
    return ideal_dimension(jacobian_ideal(g))


def is_normal_presentation(p: Presentation) -> NormalityReport:
    gens = tuple(jacobian_ideal(p.g))
    dim = ideal_dimension(list(gens))
    return NormalityReport(gens, dim == -1, dim, dim <= 0)


def krull_dimension_presentation(p: Presentation) -> int:
    return ideal_dimension([p.g])


@dataclass
class Verdict:
    status: Status
    justification: list[str]
    inverse: Optional[PolyMap] = None
    keller: Optional[KellerReport] = None
    presentation: Optional[Presentation] = None
    normality: Optional[NormalityReport] = None
    krull_dimension: Optional[int] = None
    notes: list[str] = field(default_factory=list)


def decide_invertible(m: PolyMap, seed: int = 0) -> Verdict:
    """Run the Keller gate, build the presentation and apply the normality test."""
    keller = keller_check(m)
    pres = norm = dim = None
    if algebraic_independence(m):
        pres = minimal_polynomial(m, find_good_lambda(m, seed))
        norm = is_normal_presentation(pres)
        dim = krull_dimension_presentation(pres)

    if not keller.is_keller:
        return Verdict(Status.NOT_KELLER, ["Jacobian determinant is not a nonzero constant"],
                       None, keller, pres, norm, dim)

    if not norm.normal:
        return Verdict(
            Status.JC_ALERT,
            ["Keller map with non-normal K[P,Q][x+y]: the map is not invertible, "
             "which contradicts the Jacobian conjecture"],
            None, keller, pres, norm, dim,
            ["re-run with --bundle FILE to serialize every Groebner certificate"])

    inv: InverseResult = invert_map(m)
    if not inv.found:
        raise InternalContract(f"normal presentation for Keller map {m} but no inverse found")
    inverse = inv.as_map()
    if not verify_inverse(m, inverse):
        raise InternalContract(f"inverse {inverse} of {m} fails composition check")
    return Verdict(Status.INVERTIBLE, list(NORMALITY_CITATIONS), inverse, keller, pres, norm, dim)
