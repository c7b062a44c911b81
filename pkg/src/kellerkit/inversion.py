"""Explicit inverses, subalgebra membership and the two easy invertibility cases."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import InternalContract
from .groebner import LEX, buchberger, elimination_basis, normal_form
from .keller import PolyMap, compose
from .polyring import UV, XY, Polynomial, VarSet, substitute
from .presentation import Presentation, primitive_element

ABUV = VarSet(("a", "b", "u", "v"))


@dataclass(frozen=True)
class InverseResult:
    found: bool
    F: Optional[Polynomial] = None
    G: Optional[Polynomial] = None

    def as_map(self) -> PolyMap:
        """The inverse as a map of K[x,y] (u ↦ x, v ↦ y)."""
        if not self.found:
            raise ValueError("no inverse was found")
        ren = {"u": "x", "v": "y"}
        return PolyMap(self.F.rename(ren, XY), self.G.rename(ren, XY))


def _solved_for(p: Polynomial, var_index: int) -> Optional[Polynomial]:
    # p == var - h(u, v) with monic var term; return h over UV
    unit = tuple(1 if i == var_index else 0 for i in range(4))
    if p.terms.get(unit) != 1:
        return None
    rest = {m: c for m, c in p.terms.items() if m != unit}
    if any(m[0] or m[1] for m in rest):
        return None
    return Polynomial(UV, {m[2:]: -c for m, c in rest.items()})


def invert_map(m: PolyMap) -> InverseResult:
    """Inverse of m read off the lex basis of (P(a,b) - u, Q(a,b) - v).

    The map is invertible exactly when the basis contains a - F(u,v) and
    b - G(u,v); the candidate is re-verified by composition.
    """
    ren = {"x": "a", "y": "b"}
    u, v = Polynomial.var(ABUV, "u"), Polynomial.var(ABUV, "v")
    basis = buchberger([m.P.rename(ren, ABUV) - u, m.Q.rename(ren, ABUV) - v], LEX, ABUV)
    F = G = None
    for p in basis.generators:
        F = F if F is not None else _solved_for(p, 0)
        G = G if G is not None else _solved_for(p, 1)
    if F is None or G is None:
        return InverseResult(False)
    result = InverseResult(True, F, G)
    x, y = XY.gens()
    images = {"u": m.P, "v": m.Q}
    if substitute(F, images) != x or substitute(G, images) != y:
        raise InternalContract(f"basis shape suggests inverse {result.as_map()} but composition fails")
    return result


def verify_inverse(m: PolyMap, inv: PolyMap) -> bool:
    identity = PolyMap.identity()
    return compose(m, inv) == identity and compose(inv, m) == identity


def tag_varset(k: int) -> VarSet:
    return VarSet(tuple(f"t{i}" for i in range(1, k + 1)))


def subalgebra_membership(p: Polynomial, gens: Sequence[Polynomial]) -> Optional[Polynomial]:
    """Decide p ∈ K[gens] using one tag variable per generator.

    Returns the representation of p as a polynomial in tags t1..tk, or None
    when p is not in the subalgebra.
    """
    if not gens:
        raise ValueError("need at least one generator")
    tags = tag_varset(len(gens))
    work = VarSet(XY.names + tags.names)
    rels = [Polynomial.var(work, t) - q.embed(work) for t, q in zip(tags.names, gens)]
    basis, _ = elimination_basis(rels, ("x", "y"), work)
    r = normal_form(p.embed(work), basis)
    if any(mon[0] or mon[1] for mon in r.terms):
        return None
    return Polynomial(tags, {mon[2:]: c for mon, c in r.terms.items()})


@dataclass(frozen=True)
class CaseReport:
    case1: bool  # K[P,Q][x+λy] = K[x,y]
    case2: bool  # x+λy ∈ K[P,Q]


def case_classify(m: PolyMap, pres: Presentation) -> CaseReport:
    x, y = XY.gens()
    gens = [m.P, m.Q, primitive_element(pres.lam)]
    case1 = (subalgebra_membership(x, gens) is not None
             and subalgebra_membership(y, gens) is not None)
    return CaseReport(case1=case1, case2=pres.s_degree == 1)
