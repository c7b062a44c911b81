"""Finite free complexes over K[vars] and over quotients K[vars]/I.

A complex 0 → F_n → ... → F_1 → F_0 is stored as ``ranks = (r_0, ..., r_n)``
and ``maps = (d_1, ..., d_n)`` where d_j is an r_{j-1} × r_j matrix (the
image of the k-th basis vector of F_j is column k).

Reducing modulo I keeps every free rank and replaces each entry by its
normal form; the result is again a complex because d_j·d_{j+1} = 0 over R
already, and taking normal forms is a ring map R → R/I.

Normal forms here use grevlex with the variable order reversed, so for the
default ring K[u,v,s] we have s > v > u and a modulus such as s - u - v
rewrites s in terms of the base coordinates.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations
from typing import Optional, Sequence

from .groebner import GREVLEX, GroebnerBasis, buchberger, normal_form
from .polyring import UVS, ParseError, PolyError, Polynomial, VarSet, parse_poly

Matrix = tuple[tuple[Polynomial, ...], ...]


class ShapeMismatch(ValueError):
    pass


class UnsupportedModulus(ValueError):
    pass


class MalformedComplex(ValueError):
    pass


@dataclass(frozen=True)
class RingSpec:
    varset: VarSet
    modulus: Optional[tuple[Polynomial, ...]] = None

    def __post_init__(self):
        if self.modulus is not None:
            object.__setattr__(self, "modulus", tuple(self.modulus))
            for g in self.modulus:
                if g.varset != self.varset:
                    raise ValueError("modulus generators must live in the ring's variables")

    def basis(self) -> Optional[GroebnerBasis]:
        """Basis of the modulus over the reversed variable order."""
        if not self.modulus:
            return None
        return _reversed_basis(self.modulus, self.varset)

    def reduce(self, p: Polynomial) -> Polynomial:
        basis = self.basis()
        return p if basis is None else _reduce_with(p, basis, self.varset)


def _reversed_basis(gens: Sequence[Polynomial], varset: VarSet) -> GroebnerBasis:
    rev = VarSet(tuple(reversed(varset.names)))
    return buchberger([g.embed(rev) for g in gens], GREVLEX, rev)


def _reduce_with(p: Polynomial, basis: GroebnerBasis, varset: VarSet) -> Polynomial:
    return normal_form(p.embed(basis.varset), basis).embed(varset)


@dataclass(frozen=True)
class FreeComplex:
    ring: RingSpec
    maps: tuple[Matrix, ...]
    ranks: tuple[int, ...]

    def __post_init__(self):
        maps = tuple(tuple(tuple(row) for row in mat) for mat in self.maps)
        object.__setattr__(self, "maps", maps)
        object.__setattr__(self, "ranks", tuple(self.ranks))
        if len(self.ranks) != len(maps) + 1:
            raise ShapeMismatch(f"{len(maps)} maps need {len(maps) + 1} ranks, got {len(self.ranks)}")
        for j, mat in enumerate(maps, start=1):
            rows, cols = self.ranks[j - 1], self.ranks[j]
            if len(mat) != rows or any(len(row) != cols for row in mat):
                raise ShapeMismatch(f"map d_{j} must be {rows}x{cols}")
            for row in mat:
                for p in row:
                    if p.varset != self.ring.varset:
                        raise ShapeMismatch(f"entry {p} of d_{j} is over the wrong variables")

    @classmethod
    def from_maps(cls, ring: RingSpec, maps: Sequence[Sequence[Sequence[Polynomial]]]) -> "FreeComplex":
        """Infer ranks from nonempty matrices (d_1 first)."""
        if not maps:
            raise ShapeMismatch("need at least one map to infer ranks")
        ranks = [len(maps[0])]
        for mat in maps:
            if not mat:
                raise ShapeMismatch("cannot infer ranks from an empty matrix")
            ranks.append(len(mat[0]))
        return cls(ring, tuple(maps), tuple(ranks))

    @property
    def length(self) -> int:
        return len(self.maps)


def _matmul(a: Matrix, b: Matrix, inner: int, varset: VarSet) -> list[list[Polynomial]]:
    cols = len(b[0]) if b else 0
    zero = Polynomial.zero(varset)
    out = []
    for row in a:
        out_row = []
        for k in range(cols):
            acc = zero
            for i in range(inner):
                if row[i] and b[i][k]:
                    acc = acc + row[i] * b[i][k]
            out_row.append(acc)
        out.append(out_row)
    return out


def koszul_complex(elements: Sequence[Polynomial], ring: RingSpec) -> FreeComplex:
    """Koszul complex on 1 to 3 elements.

    F_j has basis e_S for j-subsets S (lexicographic), and
    d(e_S) = Σ_p (-1)^p a_{S[p]} e_{S minus S[p]}.
    """
    k = len(elements)
    if not 1 <= k <= 3:
        raise ValueError("koszul_complex takes between 1 and 3 elements")
    vs = ring.varset
    zero = Polynomial.zero(vs)
    bases = [list(combinations(range(k), j)) for j in range(k + 1)]
    maps = []
    for j in range(1, k + 1):
        target = {S: i for i, S in enumerate(bases[j - 1])}
        mat = [[zero] * len(bases[j]) for _ in bases[j - 1]]
        for col, S in enumerate(bases[j]):
            for pos, idx in enumerate(S):
                face = S[:pos] + S[pos + 1:]
                sign = -1 if pos % 2 else 1
                mat[target[face]][col] = sign * elements[idx]
        maps.append(mat)
    return FreeComplex(ring, tuple(maps), tuple(len(b) for b in bases))


def reduce_complex_mod_ideal(c: FreeComplex, ideal: Sequence[Polynomial]) -> FreeComplex:
    """The complex F/IF over R/I: same ranks, entries taken modulo I."""
    if c.ring.modulus is not None:
        raise ValueError("complex is already over a quotient ring")
    for g in ideal:
        if g.varset != c.ring.varset:
            raise ShapeMismatch("ideal generators must share the complex's variables")
    vs = c.ring.varset
    basis = _reversed_basis(list(ideal), vs)
    maps = tuple(tuple(tuple(_reduce_with(p, basis, vs) for p in row) for row in mat) for mat in c.maps)
    return FreeComplex(RingSpec(vs, tuple(g.embed(vs) for g in basis.generators)), maps, c.ranks)


def verify_complex(c: FreeComplex) -> bool:
    """True iff d_j·d_{j+1} vanishes (modulo the ring's modulus) for all j."""
    basis = c.ring.basis()
    vs = c.ring.varset
    for j in range(1, c.length):
        prod = _matmul(c.maps[j - 1], c.maps[j], c.ranks[j], vs)
        for row in prod:
            for p in row:
                r = p if basis is None else _reduce_with(p, basis, vs)
                if r:
                    return False
    return True


def matrix_rank(mat: Matrix, ring: RingSpec) -> int:
    """Rank over the fraction field of a domain R or R/(g).

    Fraction-free Gaussian elimination; an entry counts as zero when its
    normal form modulo g vanishes.
    """
    if ring.modulus is not None and len(ring.modulus) > 1:
        raise UnsupportedModulus("generic ranks need a principal modulus (g)")
    rows = [[ring.reduce(p) for p in row] for row in mat]
    if not rows:
        return 0
    ncols = len(rows[0])
    rank = 0
    for col in range(ncols):
        pivot = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        pr = rows[rank]
        a = pr[col]
        for i in range(rank + 1, len(rows)):
            b = rows[i][col]
            if not b:
                continue
            rows[i] = [ring.reduce(a * x - b * y) for x, y in zip(rows[i], pr)]
        rank += 1
        if rank == len(rows):
            break
    return rank


@dataclass(frozen=True)
class RankProfile:
    map_ranks: tuple[int, ...]  # rank of d_1, ..., d_n
    defects: tuple[int, ...]    # r_j - rank d_j - rank d_{j+1}, j = 0..n


def generic_rank_profile(c: FreeComplex) -> RankProfile:
    ranks = tuple(matrix_rank(mat, c.ring) for mat in c.maps)
    padded = (0,) + ranks + (0,)
    defects = tuple(c.ranks[j] - padded[j] - padded[j + 1] for j in range(len(c.ranks)))
    return RankProfile(ranks, defects)


# -- JSON -----------------------------------------------------------------

def complex_to_json(c: FreeComplex) -> dict:
    return {
        "vars": list(c.ring.varset.names),
        "modulus": None if c.ring.modulus is None else [str(g) for g in c.ring.modulus],
        "ranks": list(c.ranks),
        "maps": [[[str(p) for p in row] for row in mat] for mat in c.maps],
    }


def complex_from_json(data: dict) -> FreeComplex:
    try:
        varset = VarSet(tuple(data.get("vars", UVS.names)))
        ranks = data["ranks"]
        raw_maps = data["maps"]
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedComplex(f"complex file is missing or has bad vars/ranks/maps: {exc}") from None
    modulus = None
    if data.get("modulus") is not None:
        modulus = []
        for i, text in enumerate(data["modulus"]):
            try:
                modulus.append(parse_poly(text, varset))
            except PolyError as exc:
                raise MalformedComplex(f"modulus generator {i}: {exc}") from None
    maps = []
    for j, mat in enumerate(raw_maps, start=1):
        rows = []
        for r, row in enumerate(mat):
            out = []
            for k, text in enumerate(row):
                try:
                    out.append(parse_poly(str(text), varset))
                except (ParseError, PolyError) as exc:
                    raise MalformedComplex(f"map d_{j}, row {r}, column {k}: {exc}") from None
            rows.append(out)
        maps.append(rows)
    try:
        return FreeComplex(RingSpec(varset, modulus), tuple(maps), tuple(ranks))
    except ShapeMismatch as exc:
        raise MalformedComplex(str(exc)) from None


def load_complex(path) -> FreeComplex:
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise MalformedComplex(f"{path}: not valid JSON ({exc})") from None
    return complex_from_json(data)
