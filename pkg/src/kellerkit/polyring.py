"""Exact multivariate polynomials over the rationals.

A :class:`Polynomial` is an immutable map from dense exponent tuples to
nonzero :class:`~fractions.Fraction` coefficients, tied to an ordered
:class:`VarSet`.  Two polynomials can only be combined when their variable
sets agree.

    >>> xy = VarSet(("x", "y"))
    >>> p = parse_poly("(x+y)^2", xy)
    >>> str(p)
    'x^2 + 2*x*y + y^2'
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, Union

Monomial = tuple[int, ...]
Number = Union[int, Fraction]

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z_0-9]*\Z")


class PolyError(ValueError):
    """Base class for polynomial-level errors."""


class ParseError(PolyError):
    def __init__(self, message: str, text: str, position: int):
        self.text = text
        self.position = position
        self.reason = message
        super().__init__(f"{message} at position {position}: {text!r}")


class UnknownVariable(PolyError):
    pass


class VarSetMismatch(PolyError):
    pass


class MissingAssignment(PolyError):
    pass


@dataclass(frozen=True)
class VarSet:
    """Ordered variable names; position i indexes exponent slot i."""

    names: tuple[str, ...]

    def __post_init__(self):
        names = tuple(self.names)
        object.__setattr__(self, "names", names)
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        for name in names:
            if not _NAME_RE.match(name):
                raise ValueError(f"invalid variable name {name!r}")

    @classmethod
    def of(cls, *names: str) -> "VarSet":
        return cls(tuple(names))

    def __len__(self) -> int:
        return len(self.names)

    def __iter__(self) -> Iterator[str]:
        return iter(self.names)

    def __contains__(self, name) -> bool:
        return name in self.names

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise UnknownVariable(f"unknown variable {name!r} (variables: {', '.join(self.names)})") from None

    def gens(self) -> tuple["Polynomial", ...]:
        return tuple(Polynomial.var(self, n) for n in self.names)

    def __str__(self) -> str:
        return ",".join(self.names)


def _grlex_key(mon: Monomial):
    return (sum(mon), mon)


def format_rational(c: Fraction) -> str:
    c = Fraction(c)
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


class Polynomial:
    """Immutable polynomial with rational coefficients.

    ``terms`` maps exponent tuples to nonzero Fractions; the zero polynomial
    has no terms.  Arithmetic operators accept ints and Fractions on either
    side.
    """

    __slots__ = ("varset", "_terms", "_hash")

    def __init__(self, varset: VarSet, terms: Mapping[Monomial, Number] | Iterable = ()):
        n = len(varset)
        clean: dict[Monomial, Fraction] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for mon, c in items:
            mon = tuple(int(e) for e in mon)
            if len(mon) != n or any(e < 0 for e in mon):
                raise ValueError(f"bad exponent vector {mon} for variables {varset.names}")
            c = Fraction(c)
            if c:
                c = clean.get(mon, 0) + c
                if c:
                    clean[mon] = c
                else:
                    clean.pop(mon, None)
        self.varset = varset
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, varset: VarSet, terms: dict) -> "Polynomial":
        # terms must already be clean: Fraction coefficients, no zeros
        p = object.__new__(cls)
        p.varset = varset
        p._terms = terms
        p._hash = None
        return p

    def _integral(self) -> tuple[dict, int]:
        """(numerators, D) with self == numerators / D."""
        den = 1
        for c in self._terms.values():
            if c.denominator != 1:
                den = lcm(den, c.denominator)
        if den == 1:
            return {m: c.numerator for m, c in self._terms.items()}, 1
        return {m: c.numerator * (den // c.denominator) for m, c in self._terms.items()}, den

    @classmethod
    def _from_integral(cls, varset: VarSet, nums: dict, den: int) -> "Polynomial":
        if den == 1:
            return cls._raw(varset, {m: Fraction(c) for m, c in nums.items() if c})
        return cls._raw(varset, {m: Fraction(c, den) for m, c in nums.items() if c})

    @classmethod
    def zero(cls, varset: VarSet) -> "Polynomial":
        return cls._raw(varset, {})

    @classmethod
    def constant(cls, varset: VarSet, c: Number) -> "Polynomial":
        c = Fraction(c)
        return cls._raw(varset, {(0,) * len(varset): c} if c else {})

    @classmethod
    def var(cls, varset: VarSet, name: str) -> "Polynomial":
        i = varset.index(name)
        mon = tuple(1 if j == i else 0 for j in range(len(varset)))
        return cls._raw(varset, {mon: Fraction(1)})

    # -- inspection -------------------------------------------------------

    @property
    def terms(self) -> Mapping[Monomial, Fraction]:
        return MappingProxyType(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def is_constant(self) -> bool:
        return all(not any(m) for m in self._terms)

    def constant_value(self) -> Fraction:
        """Value of a constant polynomial; raises if nonconstant."""
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return next(iter(self._terms.values()), Fraction(0))

    def total_degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(m) for m in self._terms), default=-1)

    def degree(self, name: str) -> int:
        i = self.varset.index(name)
        return max((m[i] for m in self._terms), default=-1)

    def variables(self) -> tuple[str, ...]:
        used = [False] * len(self.varset)
        for m in self._terms:
            for i, e in enumerate(m):
                if e:
                    used[i] = True
        return tuple(n for n, u in zip(self.varset.names, used) if u)

    def coefficient_in(self, name: str, k: int) -> "Polynomial":
        """Coefficient of ``name^k`` viewing self as a polynomial in ``name``."""
        i = self.varset.index(name)
        out = {}
        for m, c in self._terms.items():
            if m[i] == k:
                out[m[:i] + (0,) + m[i + 1:]] = c
        return Polynomial._raw(self.varset, out)

    def leading_grlex(self) -> tuple[Monomial, Fraction]:
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        m = max(self._terms, key=_grlex_key)
        return m, self._terms[m]

    def content(self) -> Fraction:
        """Positive rational c with self/c integral and primitive."""
        if not self._terms:
            return Fraction(0)
        den = 1
        num = 0
        for c in self._terms.values():
            den = lcm(den, c.denominator)
            num = gcd(num, c.numerator)
        return Fraction(num, den)

    # -- conversion -------------------------------------------------------

    def embed(self, varset: VarSet) -> "Polynomial":
        """Same polynomial viewed over another variable set (matched by name)."""
        if varset == self.varset:
            return self
        idx = []
        for i, name in enumerate(self.varset.names):
            idx.append(varset.index(name) if name in varset else None)
        n = len(varset)
        out = {}
        for m, c in self._terms.items():
            new = [0] * n
            for i, e in enumerate(m):
                if e:
                    j = idx[i]
                    if j is None:
                        raise UnknownVariable(
                            f"variable {self.varset.names[i]!r} not in {varset.names}")
                    new[j] = e
            out[tuple(new)] = c
        return Polynomial._raw(varset, out)

    def rename(self, mapping: Mapping[str, str], varset: VarSet) -> "Polynomial":
        """Rename variables then embed into ``varset``."""
        names = tuple(mapping.get(n, n) for n in self.varset.names)
        return Polynomial._raw(VarSet(names), self._terms).embed(varset)

    # -- equality / hashing ----------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.varset == other.varset and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self._terms == Polynomial.constant(self.varset, other)._terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.varset, frozenset(self._terms.items())))
        return self._hash

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.varset != self.varset:
                raise VarSetMismatch(f"variable sets differ: {self.varset.names} vs {other.varset.names}")
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(self.varset, other)
        raise TypeError(f"cannot combine Polynomial with {type(other).__name__}")

    def __add__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        out = dict(self._terms)
        for m, c in other._terms.items():
            s = out.get(m)
            if s is None:
                out[m] = c
            else:
                s += c
                if s:
                    out[m] = s
                else:
                    del out[m]
        return Polynomial._raw(self.varset, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.varset, {m: -c for m, c in self._terms.items()})

    def __pos__(self):
        return self

    def __sub__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            if not c:
                return Polynomial.zero(self.varset)
            return Polynomial._raw(self.varset, {m: v * c for m, v in self._terms.items()})
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        na, da = self._integral()
        nb, db = other._integral()
        out: dict[Monomial, int] = {}
        get = out.get
        for ma, ca in na.items():
            for mb, cb in nb.items():
                m = tuple([a + b for a, b in zip(ma, mb)])
                out[m] = get(m, 0) + ca * cb
        return Polynomial._from_integral(self.varset, out, da * db)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = Polynomial.constant(self.varset, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # -- printing ---------------------------------------------------------

    def _format_monomial(self, mon: Monomial) -> str:
        parts = []
        for name, e in zip(self.varset.names, mon):
            if e == 1:
                parts.append(name)
            elif e > 1:
                parts.append(f"{name}^{e}")
        return "*".join(parts)

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        out = []
        for i, mon in enumerate(sorted(self._terms, key=_grlex_key, reverse=True)):
            c = self._terms[mon]
            neg = c < 0
            a = -c if neg else c
            body = self._format_monomial(mon)
            if not body:
                text = format_rational(a)
            elif a == 1:
                text = body
            else:
                text = f"{format_rational(a)}*{body}"
            if i == 0:
                out.append(f"-{text}" if neg else text)
            else:
                out.append(f" - {text}" if neg else f" + {text}")
        return "".join(out)

    def __repr__(self) -> str:
        return f"Polynomial({str(self)!r}, vars={','.join(self.varset.names)})"


# -- parsing ---------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*^()]))")


def _tokenize(text: str):
    pos = 0
    tokens = []
    # accept the typographic minus sign as "-"
    src = text.replace("−", "-")
    while True:
        while pos < len(src) and src[pos].isspace():
            pos += 1
        if pos >= len(src):
            break
        m = _TOKEN_RE.match(src, pos)
        if not m:
            raise ParseError(f"unexpected character {src[pos]!r}", text, pos)
        start = m.start(m.lastindex)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    tokens.append(("end", "", len(src)))
    return tokens


class _Parser:
    def __init__(self, text: str, varset: VarSet):
        self.text = text
        self.varset = varset
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, msg, tok=None):
        tok = tok or self.peek()
        raise ParseError(msg, self.text, tok[2])

    def parse(self) -> Polynomial:
        if self.peek()[0] == "end":
            self.fail("empty expression")
        p = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            self.fail(f"unexpected token {tok[1]!r}")
        return p

    def expr(self) -> Polynomial:
        p = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self) -> Polynomial:
        p = self.unary()
        while self.peek()[:2] == ("op", "*"):
            self.take()
            p = p * self.unary()
        return p

    def unary(self) -> Polynomial:
        tok = self.peek()
        if tok[0] == "op" and tok[1] in ("+", "-"):
            self.take()
            p = self.unary()
            return -p if tok[1] == "-" else p
        return self.power()

    def power(self) -> Polynomial:
        base = self.atom()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            tok = self.take()
            if tok[0] != "num" or "/" in tok[1] or int(tok[1]) < 1:
                self.fail("exponent must be a positive integer", tok)
            base = base ** int(tok[1])
        return base

    def atom(self) -> Polynomial:
        tok = self.take()
        kind, val, pos = tok
        if kind == "num":
            if "/" in val:
                a, b = val.split("/")
                if int(b) == 0:
                    self.fail("zero denominator", tok)
                c = Fraction(int(a), int(b))
            else:
                c = Fraction(int(val))
            return Polynomial.constant(self.varset, c)
        if kind == "name":
            if val not in self.varset:
                raise UnknownVariable(
                    f"unknown variable {val!r} at position {pos} (variables: {', '.join(self.varset.names)})")
            return Polynomial.var(self.varset, val)
        if kind == "op" and val == "(":
            p = self.expr()
            close = self.take()
            if close[:2] != ("op", ")"):
                self.fail("expected ')'", close)
            return p
        if kind == "end":
            self.fail("unexpected end of input", tok)
        self.fail(f"unexpected token {val!r}", tok)


def parse_poly(text: str, varset: VarSet) -> Polynomial:
    """Parse ``text`` over ``varset``.

    Grammar: integers, rationals ``a/b``, variable names, ``+ - * ^`` and
    parentheses.  Multiplication must be explicit (``2x`` is rejected).
    """
    return _Parser(text, varset).parse()


# -- operations ------------------------------------------------------------

def arith(op: str, a: Polynomial, b) -> Polynomial:
    if op == "add":
        return a + a._coerce(b)
    if op == "sub":
        return a - a._coerce(b)
    if op == "mul":
        return a * a._coerce(b)
    if op == "pow":
        return a ** b
    raise ValueError(f"unknown operation {op!r}")


def partial_derivative(p: Polynomial, name: str) -> Polynomial:
    i = p.varset.index(name)
    out = {}
    for m, c in p._terms.items():
        e = m[i]
        if e:
            out[m[:i] + (e - 1,) + m[i + 1:]] = c * e
    return Polynomial._raw(p.varset, out)


def substitute(p: Polynomial, assignment: Mapping[str, Polynomial]) -> Polynomial:
    """Ring-homomorphic evaluation sending each variable to a polynomial.

    Only variables that occur in ``p`` need an image; all images must share
    one variable set, which becomes the variable set of the result.
    """
    used = p.variables()
    missing = [n for n in used if n not in assignment]
    if missing:
        raise MissingAssignment(f"no image for variable(s) {', '.join(missing)}")
    images = {n: assignment[n] for n in used}
    target = None
    for img in images.values():
        if target is None:
            target = img.varset
        elif img.varset != target:
            raise VarSetMismatch("substitution images must share one variable set")
    if target is None:
        target = next((img.varset for img in assignment.values()), p.varset)
        return Polynomial.constant(target, p.constant_value() if p else 0)

    idx = [p.varset.index(n) for n in used]
    powers = {n: {0: Polynomial.constant(target, 1), 1: images[n]} for n in used}

    def power(n, e):
        cache = powers[n]
        if e not in cache:
            half = power(n, e // 2)
            sq = half * half
            cache[e] = sq * images[n] if e % 2 else sq
        return cache[e]

    # accumulate c * term over a common denominator
    pieces = []
    den = 1
    for m, c in p._terms.items():
        term = None
        for n, i in zip(used, idx):
            e = m[i]
            if e:
                f = power(n, e)
                term = f if term is None else term * f
        if term is None:
            term = Polynomial.constant(target, 1)
        nums, d = term._integral()
        d *= c.denominator
        pieces.append((c.numerator, nums, d))
        den = lcm(den, d)
    result: dict[Monomial, int] = {}
    get = result.get
    for cn, nums, d in pieces:
        k = cn * (den // d)
        for tm, tc in nums.items():
            result[tm] = get(tm, 0) + k * tc
    return Polynomial._from_integral(target, result, den)


def evaluate(p: Polynomial, point: Mapping[str, Number]) -> Fraction:
    used = p.variables()
    missing = [n for n in used if n not in point]
    if missing:
        raise MissingAssignment(f"no value for variable(s) {', '.join(missing)}")
    vals = [Fraction(point[n]) if n in point else Fraction(0) for n in p.varset.names]
    total = Fraction(0)
    for m, c in p._terms.items():
        t = c
        for v, e in zip(vals, m):
            if e:
                t *= v ** e
        total += t
    return total


XY = VarSet(("x", "y"))
UV = VarSet(("u", "v"))
UVS = VarSet(("u", "v", "s"))
