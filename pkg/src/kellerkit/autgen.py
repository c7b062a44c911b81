"""Seeded tame automorphisms of the plane with tracked inverses.

Moves are composed in the listed order with :func:`compose`, so a move list
``[m1, m2]`` yields ``compose(m1, m2)`` and the inverse
``compose(inv(m2), inv(m1))``.

Degree bound: each triangular move of payload degree d multiplies the total
degree by at most d, affine moves do not raise it, and the generator keeps
the product of payload degrees at most ``max_deg``.  Hence every forward
image (and, by Jung-van der Kulk, every inverse image) has total degree at
most ``max_deg``, independently of ``n_moves``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterable, Optional

from .errors import InternalContract
from .inversion import verify_inverse
from .keller import PolyMap, compose
from .polyring import XY, Polynomial, format_rational, parse_poly

__all__ = ["ElementaryMove", "TameAutomorphism", "SplitMix64", "compose", "random_tame",
           "tame_from_moves", "corpus_record", "read_corpus", "write_corpus", "degree_bound"]

_MASK = (1 << 64) - 1
COEFF_POOL = range(-3, 4)


class SplitMix64:
    """The splitmix64 stream; stable across platforms and Python versions."""

    def __init__(self, seed: int):
        self.state = seed & _MASK

    def next(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        return self.next() % n

    def between(self, lo: int, hi: int) -> int:
        return lo + self.below(hi - lo + 1)

    def choice(self, seq):
        return seq[self.below(len(seq))]


@dataclass(frozen=True)
class ElementaryMove:
    """addX: x ↦ x + p(y); addY: y ↦ y + q(x); affine: (x,y) ↦ M(x,y) + t."""

    kind: str
    payload: Optional[Polynomial] = None
    matrix: Optional[tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]] = None
    translation: Optional[tuple[Fraction, Fraction]] = None

    def __post_init__(self):
        if self.kind in ("addX", "addY"):
            other = "y" if self.kind == "addX" else "x"
            if self.payload is None or any(n != other for n in self.payload.variables()):
                raise ValueError(f"{self.kind} payload must be univariate in {other}")
        elif self.kind == "affine":
            if self.matrix is None or self.translation is None:
                raise ValueError("affine move needs matrix and translation")
            if self.determinant() == 0:
                raise ValueError("affine matrix is singular")
        else:
            raise ValueError(f"unknown move kind {self.kind!r}")

    @classmethod
    def affine(cls, matrix, translation=(0, 0)) -> "ElementaryMove":
        m = tuple(tuple(Fraction(c) for c in row) for row in matrix)
        return cls("affine", None, m, tuple(Fraction(c) for c in translation))

    @classmethod
    def add_x(cls, payload) -> "ElementaryMove":
        return cls("addX", parse_poly(payload, XY) if isinstance(payload, str) else payload)

    @classmethod
    def add_y(cls, payload) -> "ElementaryMove":
        return cls("addY", parse_poly(payload, XY) if isinstance(payload, str) else payload)

    def determinant(self) -> Fraction:
        if self.kind != "affine":
            return Fraction(1)
        (a, b), (c, d) = self.matrix
        return a * d - b * c

    def as_map(self) -> PolyMap:
        x, y = XY.gens()
        if self.kind == "addX":
            return PolyMap(x + self.payload, y)
        if self.kind == "addY":
            return PolyMap(x, y + self.payload)
        (a, b), (c, d) = self.matrix
        e, f = self.translation
        return PolyMap(a * x + b * y + e, c * x + d * y + f)

    def inverse(self) -> "ElementaryMove":
        if self.kind in ("addX", "addY"):
            return ElementaryMove(self.kind, -self.payload)
        (a, b), (c, d) = self.matrix
        det = self.determinant()
        inv = ((d / det, -b / det), (-c / det, a / det))
        e, f = self.translation
        t = (-(inv[0][0] * e + inv[0][1] * f), -(inv[1][0] * e + inv[1][1] * f))
        return ElementaryMove("affine", None, inv, t)

    def to_json(self) -> dict:
        if self.kind == "affine":
            return {"kind": "affine",
                    "matrix": [[format_rational(c) for c in row] for row in self.matrix],
                    "translation": [format_rational(c) for c in self.translation]}
        return {"kind": self.kind, "payload": str(self.payload)}

    @classmethod
    def from_json(cls, data: dict) -> "ElementaryMove":
        if data["kind"] == "affine":
            return cls.affine([[Fraction(c) for c in row] for row in data["matrix"]],
                              [Fraction(c) for c in data["translation"]])
        return cls(data["kind"], parse_poly(data["payload"], XY))


@dataclass(frozen=True)
class TameAutomorphism:
    moves: tuple[ElementaryMove, ...]
    forward: PolyMap
    inverse: PolyMap

    def jacobian_constant(self) -> Fraction:
        return reduce(lambda acc, mv: acc * mv.determinant(), self.moves, Fraction(1))


def tame_from_moves(moves: Iterable[ElementaryMove]) -> TameAutomorphism:
    moves = tuple(moves)
    identity = PolyMap.identity()
    forward = reduce(compose, (mv.as_map() for mv in moves), identity)
    inverse = reduce(compose, (mv.inverse().as_map() for mv in reversed(moves)), identity)
    if not verify_inverse(forward, inverse):
        raise InternalContract("tracked inverse does not invert the forward map")
    return TameAutomorphism(moves, forward, inverse)


def degree_bound(n_moves: int, max_deg: int) -> int:
    """Upper bound on the total degree of ``random_tame(_, n_moves, max_deg)`` images."""
    return max_deg


def _random_payload(rng: SplitMix64, var: str, degree: int) -> Polynomial:
    t = Polynomial.var(XY, var)
    lead = rng.choice([-3, -2, -1, 1, 2, 3])
    p = lead * t ** degree
    for k in range(degree):
        # sparse lower part: each coefficient is zero half of the time
        if rng.below(2):
            p = p + rng.choice(list(COEFF_POOL)) * t ** k
    return p


def _random_affine(rng: SplitMix64) -> ElementaryMove:
    pool = list(COEFF_POOL)
    while True:
        m = [[rng.choice(pool), rng.choice(pool)], [rng.choice(pool), rng.choice(pool)]]
        if m[0][0] * m[1][1] - m[0][1] * m[1][0]:
            break
    return ElementaryMove.affine(m, (rng.choice(pool), rng.choice(pool)))


def random_moves(seed: int, n_moves: int, max_deg: int) -> list[ElementaryMove]:
    if not 1 <= n_moves <= 5:
        raise ValueError("n_moves must be in 1..5")
    if not 2 <= max_deg <= 6:
        raise ValueError("max_deg must be in 2..6")
    rng = SplitMix64(seed)
    moves = []
    used = 1
    for _ in range(n_moves):
        kind = rng.choice(["affine", "addX", "addY"])
        room = max_deg // used
        if kind == "affine" or room < 2:
            moves.append(_random_affine(rng))
            continue
        d = rng.between(2, room)
        used *= d
        if kind == "addX":
            moves.append(ElementaryMove("addX", _random_payload(rng, "y", d)))
        else:
            moves.append(ElementaryMove("addY", _random_payload(rng, "x", d)))
    return moves


def random_tame(seed: int, n_moves: int = 3, max_deg: int = 6) -> TameAutomorphism:
    """Deterministic tame automorphism built from ``n_moves`` elementary moves."""
    return tame_from_moves(random_moves(seed, n_moves, max_deg))


def corpus_record(seed: int, tame: TameAutomorphism) -> dict:
    return {
        "seed": seed,
        "moves": [mv.to_json() for mv in tame.moves],
        "forward": [str(tame.forward.P), str(tame.forward.Q)],
        "inverse": [str(tame.inverse.P), str(tame.inverse.Q)],
    }


def write_corpus(path, seeds: Iterable[int], n_moves: int = 3, max_deg: int = 6) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for seed in seeds:
            fh.write(json.dumps(corpus_record(seed, random_tame(seed, n_moves, max_deg))) + "\n")


def read_corpus(path) -> list[tuple[int, TameAutomorphism]]:
    out = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            rec = json.loads(line)
            tame = tame_from_moves(ElementaryMove.from_json(mv) for mv in rec["moves"])
            if [str(tame.forward.P), str(tame.forward.Q)] != rec["forward"]:
                raise ValueError(f"corpus record {rec['seed']}: forward map does not match its moves")
            out.append((rec["seed"], tame))
    return out
