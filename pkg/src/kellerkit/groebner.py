"""Monomial orders, Buchberger's algorithm and staircase computations.

All heavy lifting happens on integer-coefficient dictionaries: inputs are
cleared of denominators, every reduction is fraction-free, and intermediate
polynomials are made primitive with a positive leading coefficient.  The
public :class:`GroebnerBasis` carries monic rational generators.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from typing import Callable, Iterable, Sequence

from .polyring import Monomial, Polynomial, VarSet, VarSetMismatch

INFINITE = math.inf

_SIMPLE_KINDS = ("lex", "grlex", "grevlex")


@dataclass(frozen=True)
class MonomialOrder:
    """A monomial order on exponent vectors.

    ``kind`` is one of lex, grlex, grevlex or block.  A block order compares
    the first ``split`` exponents with ``front`` and breaks ties on the rest
    with ``back``; it eliminates the front variables.
    """

    kind: str
    split: int = 0
    front: str = "grevlex"
    back: str = "grevlex"

    def __post_init__(self):
        if self.kind not in _SIMPLE_KINDS + ("block",):
            raise ValueError(f"unknown monomial order {self.kind!r}")
        if self.kind == "block":
            if self.split < 1:
                raise ValueError("block order needs a nonempty front block")
            if self.front not in _SIMPLE_KINDS or self.back not in _SIMPLE_KINDS:
                raise ValueError("block inner orders must be lex, grlex or grevlex")

    def key(self, mon: Monomial) -> tuple[int, ...]:
        return _key_function(self)(mon)

    def __str__(self) -> str:
        if self.kind == "block":
            return f"block({self.split}:{self.front}|{self.back})"
        return self.kind


LEX = MonomialOrder("lex")
GRLEX = MonomialOrder("grlex")
GREVLEX = MonomialOrder("grevlex")


def block_order(split: int, front: str = "grevlex", back: str = "grevlex") -> MonomialOrder:
    return MonomialOrder("block", split, front, back)


def _simple_key(kind: str) -> Callable[[Monomial], tuple]:
    # keys are flat int tuples so that negation gives the reverse order
    if kind == "lex":
        return lambda m: m
    if kind == "grlex":
        return lambda m: (sum(m),) + m
    return lambda m: (sum(m),) + tuple([-e for e in reversed(m)])


@lru_cache(maxsize=None)
def _key_function(order: MonomialOrder) -> Callable[[Monomial], tuple]:
    if order.kind != "block":
        return _simple_key(order.kind)
    k = order.split
    kf, kb = _simple_key(order.front), _simple_key(order.back)
    return lambda m: kf(m[:k]) + kb(m[k:])


def _divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple([x if x > y else y for x, y in zip(a, b)])


def _neg(key: tuple) -> tuple:
    return tuple([-k for k in key])


# -- integer polynomial kernel ---------------------------------------------

class _IPoly:
    """Primitive integer polynomial with cached leading data."""

    __slots__ = ("terms", "lm", "lc", "lkey", "tail", "sugar")

    def __init__(self, terms: dict, keyf, sugar: int | None = None):
        self.terms = terms
        lm = max(terms, key=keyf)
        self.lm = lm
        self.lc = terms[lm]
        self.lkey = keyf(lm)
        self.tail = [(m, c) for m, c in terms.items() if m != lm]
        self.sugar = max(sum(m) for m in terms) if sugar is None else sugar


def _primitive(terms: dict, keyf) -> dict:
    g = 0
    for c in terms.values():
        g = math.gcd(g, c)
        if g == 1:
            break
    lead = terms[max(terms, key=keyf)]
    if lead < 0:
        g = -g
    if g == 1:
        return terms
    return {m: c // g for m, c in terms.items()}


def _to_integer(p: Polynomial) -> tuple[dict, int]:
    """Return (integer terms, D) with p == terms / D."""
    den = 1
    for c in p.terms.values():
        den = math.lcm(den, c.denominator)
    return {m: int(c * den) for m, c in p.terms.items()}, den


def _find_divisor(m: Monomial, basis: Sequence[_IPoly]):
    for g in basis:
        if all(x <= y for x, y in zip(g.lm, m)):
            return g
    return None


def _reduce(f: dict, basis: Sequence[_IPoly], keyf) -> tuple[dict, int]:
    """Full fraction-free reduction.

    Returns (r, a) with a*f - r in the ideal of ``basis`` and no term of r
    divisible by a leading monomial.  ``a`` is a positive integer.
    """
    if not basis or not f:
        return dict(f), 1
    p = dict(f)
    heap = [(_neg(keyf(m)), m) for m in p]
    heapq.heapify(heap)
    rem: dict = {}
    scale = 1
    pop, push = heapq.heappop, heapq.heappush
    while heap:
        _, m = pop(heap)
        c = p.pop(m, None)
        if c is None:
            continue
        g = _find_divisor(m, basis)
        if g is None:
            rem[m] = c
            continue
        d = math.gcd(c, g.lc)
        a = g.lc // d
        b = c // d
        if a != 1:
            scale *= a
            for k in p:
                p[k] *= a
            for k in rem:
                rem[k] *= a
        q = tuple([x - y for x, y in zip(m, g.lm)])
        for mg, cg in g.tail:
            mm = tuple([x + y for x, y in zip(mg, q)])
            old = p.get(mm)
            if old is None:
                p[mm] = -b * cg
                push(heap, (_neg(keyf(mm)), mm))
            else:
                new = old - b * cg
                if new:
                    p[mm] = new
                else:
                    del p[mm]
    return rem, scale


def _spoly(f: _IPoly, g: _IPoly) -> dict:
    L = _lcm(f.lm, g.lm)
    d = math.gcd(f.lc, g.lc)
    a, b = g.lc // d, f.lc // d
    qf = tuple([x - y for x, y in zip(L, f.lm)])
    qg = tuple([x - y for x, y in zip(L, g.lm)])
    out: dict = {}
    for m, c in f.tail:
        mm = tuple([x + y for x, y in zip(m, qf)])
        out[mm] = out.get(mm, 0) + a * c
    for m, c in g.tail:
        mm = tuple([x + y for x, y in zip(m, qg)])
        out[mm] = out.get(mm, 0) - b * c
    return {m: c for m, c in out.items() if c}


def _update(f: list[_IPoly], G: list[int], B: list[tuple[int, int]], ih: int):
    """Gebauer-Moeller installation of f[ih] into basis indices G and pairs B."""
    mh = f[ih].lm

    def coprime(a, b):
        return not any(x and y for x, y in zip(a, b))

    C = list(G)
    D: list[tuple[int, int]] = []
    while C:
        ig = C.pop(0)
        mg = f[ig].lm
        lhg = _lcm(mh, mg)
        keep = coprime(mh, mg)
        if not keep:
            keep = (not any(_divides(_lcm(mh, f[j].lm), lhg) for j in C)
                    and not any(_divides(_lcm(mh, f[j].lm), lhg) for _, j in D))
        if keep:
            D.append((ih, ig))

    E = [(i, j) for i, j in D if not coprime(mh, f[j].lm)]

    B_new = []
    for i1, i2 in B:
        m1, m2 = f[i1].lm, f[i2].lm
        l12 = _lcm(m1, m2)
        if (not _divides(mh, l12) or _lcm(m1, mh) == l12 or _lcm(m2, mh) == l12):
            B_new.append((i1, i2))
    B_new.extend(E)

    G_new = [ig for ig in G if not _divides(mh, f[ig].lm)]
    G_new.append(ih)
    return G_new, B_new


def _interreduce(polys: list[_IPoly], keyf) -> list[_IPoly]:
    polys = sorted(polys, key=lambda p: p.lkey)
    minimal: list[_IPoly] = []
    for p in polys:
        if not any(_divides(q.lm, p.lm) for q in minimal):
            minimal.append(p)
    out = []
    for i, p in enumerate(minimal):
        others = minimal[:i] + minimal[i + 1:]
        r, _ = _reduce(p.terms, others, keyf)
        out.append(_IPoly(_primitive(r, keyf), keyf))
    out.sort(key=lambda p: p.lkey, reverse=True)
    return out


@lru_cache(maxsize=256)
def _groebner_cached(frozen: tuple, order: MonomialOrder, nvars: int) -> tuple[_IPoly, ...]:
    keyf = _key_function(order)
    inputs = [dict(items) for items in frozen]
    return tuple(_buchberger_int(inputs, keyf, nvars))


def _buchberger_int(inputs: list[dict], keyf, nvars: int) -> list[_IPoly]:
    one = (0,) * nvars
    polys = [_IPoly(_primitive(p, keyf), keyf) for p in inputs if p]
    if any(p.lm == one for p in polys):
        return [_IPoly({one: 1}, keyf)]
    polys.sort(key=lambda p: p.lkey)

    f: list[_IPoly] = []
    G: list[int] = []
    B: list[tuple[int, int]] = []
    for p in polys:
        r, _ = _reduce(p.terms, [f[i] for i in G], keyf)
        if not r:
            continue
        h = _IPoly(_primitive(r, keyf), keyf, p.sugar)
        if h.lm == one:
            return [_IPoly({one: 1}, keyf)]
        f.append(h)
        G, B = _update(f, G, B, len(f) - 1)

    def pair_rank(pair):
        i, j = pair
        fi, fj = f[i], f[j]
        L = _lcm(fi.lm, fj.lm)
        sl = sum(L)
        sugar = max(fi.sugar + sl - sum(fi.lm), fj.sugar + sl - sum(fj.lm))
        return (sugar, keyf(L), min(i, j), max(i, j))

    while B:
        best = min(B, key=pair_rank)
        B.remove(best)
        i, j = best
        s = _spoly(f[i], f[j])
        if not s:
            continue
        r, _ = _reduce(s, [f[k] for k in G], keyf)
        if not r:
            continue
        h = _IPoly(_primitive(r, keyf), keyf, pair_rank(best)[0])
        if h.lm == one:
            return [_IPoly({one: 1}, keyf)]
        f.append(h)
        G, B = _update(f, G, B, len(f) - 1)

    return _interreduce([f[i] for i in G], keyf)


def _freeze(polys: Iterable[dict]) -> tuple:
    return tuple(sorted(tuple(sorted(p.items())) for p in polys if p))


def _ipoly_to_monic(p: _IPoly, varset: VarSet) -> Polynomial:
    lc = p.lc
    return Polynomial._raw(varset, {m: Fraction(c, lc) for m, c in p.terms.items()})


# -- public API -------------------------------------------------------------

@dataclass(frozen=True)
class GroebnerBasis:
    """Reduced Groebner basis: monic generators sorted by descending leading monomial."""

    generators: tuple[Polynomial, ...]
    order: MonomialOrder
    varset: VarSet
    reduced: bool = True
    _internal: tuple = field(default=(), repr=False, compare=False)

    def __iter__(self):
        return iter(self.generators)

    def __len__(self) -> int:
        return len(self.generators)

    def leading_monomials(self) -> list[Monomial]:
        return [p.lm for p in self._internal]

    def is_unit(self) -> bool:
        return any(not any(m) for m in self.leading_monomials())

    def normal_form(self, p: Polynomial) -> Polynomial:
        return normal_form(p, self)

    def contains(self, p: Polynomial) -> bool:
        return normal_form(p, self).is_zero()


def _common_varset(polys: Sequence[Polynomial], varset: VarSet | None) -> VarSet:
    for p in polys:
        if varset is None:
            varset = p.varset
        elif p.varset != varset:
            raise VarSetMismatch(f"variable sets differ: {varset.names} vs {p.varset.names}")
    if varset is None:
        raise ValueError("cannot infer the variable set of an empty generator list")
    return varset


def buchberger(gens: Sequence[Polynomial], order: MonomialOrder = GREVLEX,
               varset: VarSet | None = None) -> GroebnerBasis:
    """Reduced Groebner basis of the ideal generated by ``gens``.

    Uses the Gebauer-Moeller installation of pairs, the sugar selection
    strategy and fraction-free reductions.  Results are cached, so repeated
    calls with equal inputs are cheap.
    """
    varset = _common_varset(gens, varset)
    n = len(varset)
    if order.kind == "block" and order.split >= n:
        raise ValueError("block order must leave a nonempty back block")
    frozen = _freeze(_to_integer(p)[0] for p in gens)
    internal = _groebner_cached(frozen, order, n)
    gens_out = tuple(_ipoly_to_monic(p, varset) for p in internal)
    return GroebnerBasis(gens_out, order, varset, True, internal)


def _basis_internal(basis, order, varset) -> tuple[list[_IPoly], MonomialOrder]:
    if isinstance(basis, GroebnerBasis):
        return list(basis._internal), basis.order
    keyf = _key_function(order)
    polys = []
    for q in basis:
        if q.varset != varset:
            raise VarSetMismatch(f"variable sets differ: {varset.names} vs {q.varset.names}")
        if q:
            polys.append(_IPoly(_primitive(_to_integer(q)[0], keyf), keyf))
    return polys, order


def normal_form(p: Polynomial, basis, order: MonomialOrder = GREVLEX) -> Polynomial:
    """Remainder of multivariate division of ``p`` by ``basis``.

    ``basis`` is a :class:`GroebnerBasis` (its own order is used) or a plain
    sequence of polynomials divided in the given order.
    """
    if isinstance(basis, GroebnerBasis) and p.varset != basis.varset:
        raise VarSetMismatch(f"variable sets differ: {p.varset.names} vs {basis.varset.names}")
    polys, order = _basis_internal(basis, order, p.varset)
    if not p or not polys:
        return p
    terms, den = _to_integer(p)
    r, scale = _reduce(terms, polys, _key_function(order))
    total = den * scale
    return Polynomial._raw(p.varset, {m: Fraction(c, total) for m, c in r.items()})


def leading_monomial(p: Polynomial, order: MonomialOrder) -> Monomial:
    if not p:
        raise ValueError("zero polynomial has no leading monomial")
    return max(p.terms, key=_key_function(order))


def s_polynomial(f: Polynomial, g: Polynomial, order: MonomialOrder) -> Polynomial:
    """S-polynomial built from monic versions of f and g."""
    keyf = _key_function(order)
    mf = max(f.terms, key=keyf)
    mg = max(g.terms, key=keyf)
    L = _lcm(mf, mg)
    vs = f.varset

    def shifted(p, lead):
        q = tuple(a - b for a, b in zip(L, lead))
        lc = p.terms[lead]
        return Polynomial._raw(vs, {tuple(a + b for a, b in zip(m, q)): c / lc
                                    for m, c in p.terms.items()})

    return shifted(f, mf) - shifted(g, mg)


def is_groebner(basis: GroebnerBasis) -> bool:
    """Buchberger's criterion: all S-polynomials reduce to zero."""
    gens = list(basis.generators)
    for f, g in combinations(gens, 2):
        if normal_form(s_polynomial(f, g, basis.order), basis):
            return False
    return True


def ideal_membership(p: Polynomial, gens: Sequence[Polynomial],
                     order: MonomialOrder = GREVLEX) -> bool:
    return normal_form(p, buchberger(gens, order, p.varset)).is_zero()


def elimination_basis(gens: Sequence[Polynomial], eliminate: Iterable[str],
                      varset: VarSet | None = None) -> tuple[GroebnerBasis, VarSet]:
    """Groebner basis under the elimination block order.

    Variables are reordered so that the eliminated ones come first (each
    block keeps the original creation order).  Returns the basis over the
    reordered variable set together with the retained variable set.
    """
    varset = _common_varset(gens, varset)
    elim = set(eliminate)
    for name in elim:
        varset.index(name)
    front = tuple(n for n in varset.names if n in elim)
    back = tuple(n for n in varset.names if n not in elim)
    if not front:
        raise ValueError("nothing to eliminate")
    if not back:
        raise ValueError("cannot eliminate every variable")
    work = VarSet(front + back)
    basis = buchberger([p.embed(work) for p in gens], block_order(len(front)), work)
    return basis, VarSet(back)


def elimination_ideal(gens: Sequence[Polynomial], eliminate: Iterable[str],
                      varset: VarSet | None = None) -> list[Polynomial]:
    """Generators of the ideal intersected with the retained-variable subring."""
    basis, retained = elimination_basis(gens, eliminate, varset)
    k = len(basis.varset) - len(retained)
    out = []
    for p in basis.generators:
        if all(not any(m[:k]) for m in p.terms):
            out.append(Polynomial._raw(retained, {m[k:]: c for m, c in p.terms.items()}))
    return out


def _standard_monomial_count(lms: list[Monomial], n: int):
    if any(not any(m) for m in lms):
        return 0
    bounds = []
    for i in range(n):
        pure = [m[i] for m in lms if m[i] and all(e == 0 for j, e in enumerate(m) if j != i)]
        if not pure:
            return INFINITE
        bounds.append(min(pure))
    return sum(1 for mon in product(*(range(b) for b in bounds))
               if not any(_divides(m, mon) for m in lms))


def quotient_vs_dimension(gens: Sequence[Polynomial], order: MonomialOrder = GREVLEX,
                          varset: VarSet | None = None):
    """Number of standard monomials, or INFINITE if the staircase is unbounded."""
    basis = buchberger(gens, order, varset)
    return _standard_monomial_count(basis.leading_monomials(), len(basis.varset))


def ideal_dimension(gens: Sequence[Polynomial], varset: VarSet | None = None) -> int:
    """Krull dimension of the quotient ring; -1 for the unit ideal.

    Largest set U of variables such that no leading monomial of the grevlex
    basis is supported inside U.
    """
    basis = buchberger(gens, GREVLEX, varset)
    n = len(basis.varset)
    lms = basis.leading_monomials()
    if any(not any(m) for m in lms):
        return -1
    supports = [sum(1 << i for i, e in enumerate(m) if e) for m in lms]
    best = 0
    for mask in range(1 << n):
        size = bin(mask).count("1")
        if size <= best:
            continue
        if all(s & ~mask for s in supports):
            best = size
    return best
