"""Shared test utilities: sympy bridges and seeded random objects."""
from __future__ import annotations

import random
from fractions import Fraction

import sympy as sp

from kellerkit.complexes import FreeComplex, RingSpec, koszul_complex
from kellerkit.polyring import UVS, Polynomial, VarSet


def to_sympy(p: Polynomial):
    syms = sp.symbols(p.varset.names)
    expr = sp.Integer(0)
    for mon, c in p.terms.items():
        term = sp.Rational(c.numerator, c.denominator)
        for v, e in zip(syms, mon):
            term *= v ** e
        expr += term
    return expr


def from_sympy(expr, varset: VarSet) -> Polynomial:
    poly = sp.Poly(sp.expand(expr), *sp.symbols(varset.names))
    return Polynomial(varset, {m: Fraction(int(c.p), int(c.q)) for m, c in poly.terms()})


def random_poly(rng: random.Random, varset: VarSet, max_deg: int, n_terms: int = 4,
                coeffs=range(-3, 4)) -> Polynomial:
    n = len(varset)
    terms = {}
    for _ in range(n_terms):
        d = rng.randint(0, max_deg)
        mon = [0] * n
        for _ in range(d):
            mon[rng.randrange(n)] += 1
        terms[tuple(mon)] = terms.get(tuple(mon), 0) + rng.choice(list(coeffs))
    return Polynomial(varset, terms)


def random_nonzero_poly(rng, varset, max_deg, n_terms=3):
    while True:
        p = random_poly(rng, varset, max_deg, n_terms)
        if p:
            return p


def identity_matrix(n, varset):
    one, zero = Polynomial.constant(varset, 1), Polynomial.zero(varset)
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def matmul(a, b, varset):
    zero = Polynomial.zero(varset)
    if not a:
        return []
    inner = len(b)
    cols = len(b[0]) if b else 0
    out = []
    for row in a:
        out_row = []
        for k in range(cols):
            acc = zero
            for i in range(inner):
                acc = acc + row[i] * b[i][k]
            out_row.append(acc)
        out.append(out_row)
    return out


def random_unimodular(rng, n, varset, steps=2, max_deg=1):
    """Random product of elementary matrices and its exact inverse."""
    A = identity_matrix(n, varset)
    Ainv = identity_matrix(n, varset)
    if n < 2:
        return A, Ainv
    for _ in range(steps):
        i, k = rng.sample(range(n), 2)
        c = random_poly(rng, varset, max_deg, 2)
        E = identity_matrix(n, varset)
        E[i][k] = c
        Einv = identity_matrix(n, varset)
        Einv[i][k] = -c
        A = matmul(E, A, varset)
        Ainv = matmul(Ainv, Einv, varset)
    return A, Ainv


def direct_sum(a: FreeComplex, b: FreeComplex) -> FreeComplex:
    vs = a.ring.varset
    zero = Polynomial.zero(vs)
    n = max(a.length, b.length)

    def rank(c, j):
        return c.ranks[j] if j < len(c.ranks) else 0

    def mat(c, j):
        if j <= c.length:
            return [list(r) for r in c.maps[j - 1]]
        return [[] for _ in range(rank(c, j - 1))]

    maps = []
    for j in range(1, n + 1):
        ma, mb = mat(a, j), mat(b, j)
        ra, ca = rank(a, j - 1), rank(a, j)
        rb, cb = rank(b, j - 1), rank(b, j)
        rows = []
        for i in range(ra):
            rows.append((ma[i] if ca else []) + [zero] * cb)
        for i in range(rb):
            rows.append([zero] * ca + (mb[i] if cb else []))
        maps.append(rows)
    ranks = [rank(a, j) + rank(b, j) for j in range(n + 1)]
    return FreeComplex(a.ring, tuple(maps), tuple(ranks))


def conjugate(c: FreeComplex, rng) -> FreeComplex:
    """Change bases of every F_j by random unimodular matrices."""
    vs = c.ring.varset
    pairs = [random_unimodular(rng, r, vs) for r in c.ranks]
    maps = []
    for j in range(1, c.length + 1):
        A_prev, _ = pairs[j - 1]
        _, Ainv = pairs[j]
        maps.append(matmul(matmul(A_prev, [list(r) for r in c.maps[j - 1]], vs), Ainv, vs))
    return FreeComplex(c.ring, tuple(maps), c.ranks)


def random_complex(rng, varset: VarSet = UVS) -> FreeComplex:
    """Koszul complexes, direct sums and base changes thereof over K[varset]."""
    ring = RingSpec(varset)

    def kos():
        k = rng.randint(1, 3)
        return koszul_complex([random_nonzero_poly(rng, varset, 2) for _ in range(k)], ring)

    c = kos()
    if rng.random() < 0.3:
        c = direct_sum(c, kos())
    if rng.random() < 0.6:
        c = conjugate(c, rng)
    return c


def random_ideal(rng, varset: VarSet = UVS):
    return [random_nonzero_poly(rng, varset, 2) for _ in range(rng.randint(1, 2))]
