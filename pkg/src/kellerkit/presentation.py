"""K[P,Q][x+λy] as a hypersurface ring K[u,v,s]/(g).

``g`` is the generator of the kernel of K[u,v,s] → K[x,y] sending
u ↦ P, v ↦ Q, s ↦ x+λy, computed by eliminating x and y.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import count

from .errors import DegenerateSample, InternalContract
from .groebner import INFINITE, elimination_ideal, quotient_vs_dimension
from .keller import PolyMap
from .polyring import XY, Polynomial, VarSet, substitute

XYUVS = VarSet(("x", "y", "u", "v", "s"))

SAMPLE_RANGE = 10**4
LAMBDA_CAP = 1000


@dataclass(frozen=True)
class Presentation:
    lam: Fraction
    g: Polynomial
    s_degree: int
    normalized: bool = True


@dataclass(frozen=True)
class DegreeReport:
    extension_degree: int
    sample_points: tuple[tuple[int, int], ...]
    agreement: bool


def normalize_g(g: Polynomial) -> Polynomial:
    """Integer-primitive with a positive leading coefficient in s.

    The s-leading coefficient is a polynomial in u, v; its sign is read off
    its grlex-leading term.
    """
    g = g / g.content()
    lead = g.coefficient_in("s", g.degree("s"))
    if lead.leading_grlex()[1] < 0:
        g = -g
    return g


def primitive_element(lam) -> Polynomial:
    x, y = XY.gens()
    return x + Fraction(lam) * y


def annihilates(g: Polynomial, m: PolyMap, lam) -> bool:
    return substitute(g, {"u": m.P, "v": m.Q, "s": primitive_element(lam)}).is_zero()


@lru_cache(maxsize=512)
def _minimal_polynomial(m: PolyMap, lam: Fraction) -> Presentation:
    x, y, u, v, s = XYUVS.gens()
    gens = [u - m.P.embed(XYUVS), v - m.Q.embed(XYUVS), s - x - lam * y]
    elim = elimination_ideal(gens, ("x", "y"))
    if len(elim) != 1:
        raise InternalContract(
            f"elimination ideal has {len(elim)} generators; expected a principal nonzero ideal "
            f"(are P and Q algebraically independent?)")
    g = elim[0]
    if g.degree("s") < 1:
        raise InternalContract(f"eliminant {g} does not involve s")
    g = normalize_g(g)
    if not annihilates(g, m, lam):
        raise InternalContract(f"g = {g} does not vanish at (P, Q, x+{lam}*y)")
    return Presentation(lam, g, g.degree("s"), True)


def minimal_polynomial(m: PolyMap, lam=1) -> Presentation:
    """Presentation of K[P,Q][x+λy] with g normalized."""
    return _minimal_polynomial(m, Fraction(lam))


@lru_cache(maxsize=512)
def extension_degree(m: PolyMap, seed: int = 0) -> DegreeReport:
    """[K(x,y) : K(P,Q)] as the generic fiber size of (x,y) ↦ (P,Q).

    Fibers over random integer points are counted with multiplicity as the
    dimension of K[x,y]/(P-u0, Q-v0).  Three agreeing samples are accepted;
    otherwise five more are drawn and the smallest positive finite count is
    returned.
    """
    rng = random.Random(seed)
    points: list[tuple[int, int]] = []
    counts = []

    def draw(k):
        for _ in range(k):
            u0 = rng.randint(-SAMPLE_RANGE, SAMPLE_RANGE)
            v0 = rng.randint(-SAMPLE_RANGE, SAMPLE_RANGE)
            points.append((u0, v0))
            counts.append(quotient_vs_dimension([m.P - u0, m.Q - v0], varset=XY))

    draw(3)
    if counts[0] == counts[1] == counts[2] and counts[0] not in (INFINITE, 0):
        return DegreeReport(int(counts[0]), tuple(points), True)
    draw(5)
    finite = [c for c in counts if c not in (INFINITE, 0)]
    if not finite:
        raise DegenerateSample(f"all sampled fibers of {m} are infinite or empty")
    return DegreeReport(int(min(finite)), tuple(points), False)


def is_primitive(m: PolyMap, lam=1, seed: int = 0) -> bool:
    return minimal_polynomial(m, lam).s_degree == extension_degree(m, seed).extension_degree


def lambda_candidates():
    """1, 0, -1, 2, -2, 3, -3, ..."""
    yield Fraction(1)
    yield Fraction(0)
    for k in count(1):
        yield Fraction(-k)
        yield Fraction(k + 1)


def find_good_lambda(m: PolyMap, seed: int = 0) -> Fraction:
    target = extension_degree(m, seed).extension_degree
    for i, lam in enumerate(lambda_candidates()):
        if i >= LAMBDA_CAP:
            break
        if minimal_polynomial(m, lam).s_degree == target:
            return lam
    raise InternalContract(f"no primitive x+λy among the first {LAMBDA_CAP} candidates")

