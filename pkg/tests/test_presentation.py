from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from _helpers import to_sympy
from kellerkit.autgen import random_tame
from kellerkit.errors import InternalContract
from kellerkit.keller import PolyMap
from kellerkit.polyring import UVS, parse_poly
from kellerkit.presentation import (annihilates, extension_degree, find_good_lambda,
                                    is_primitive, lambda_candidates, minimal_polynomial,
                                    normalize_g)


def M(p, q):
    return PolyMap.parse(p, q)


def G(text):
    return parse_poly(text, UVS)


def test_minimal_polynomial_examples():
    p = minimal_polynomial(M("x", "y+x^2"), 1)
    assert p.g == G("s - u - v + u^2") and p.s_degree == 1
    p = minimal_polynomial(M("x^2", "y"), 1)
    assert p.g == G("s^2 - 2*v*s + v^2 - u") and p.s_degree == 2
    p = minimal_polynomial(M("x^2", "y^2"), 1)
    assert p.g == G("(s^2-u-v)^2 - 4*u*v") and p.s_degree == 4
    assert p.lam == 1 and p.normalized


def test_minimal_polynomial_lambda_zero():
    p = minimal_polynomial(M("x^2", "y^2"), 0)
    assert p.g == G("s^2 - u")


def test_minimal_polynomial_needs_independence():
    with pytest.raises(InternalContract):
        minimal_polynomial(M("x+y", "(x+y)^2"), 1)


def test_extension_degree_examples():
    assert extension_degree(M("x", "y+x^2")).extension_degree == 1
    assert extension_degree(M("x^2", "y")).extension_degree == 2
    r = extension_degree(M("x^2", "y^2"))
    assert r.extension_degree == 4 and r.agreement and len(r.sample_points) == 3


def test_extension_degree_is_seed_stable():
    m = M("x^2 + y", "y^3")
    assert {extension_degree(m, s).extension_degree for s in range(4)} == {6}


def test_is_primitive_examples():
    assert is_primitive(M("x", "y+x^2"), 1)
    assert is_primitive(M("x^2", "y^2"), 1)
    assert not is_primitive(M("x^2", "y^2"), 0)


def test_lambda_sequence():
    it = lambda_candidates()
    assert [next(it) for _ in range(6)] == [1, 0, -1, 2, -2, 3]


def test_find_good_lambda_examples():
    assert find_good_lambda(M("x", "y+x^2")) == 1
    assert find_good_lambda(M("x^2", "y^2")) == 1
    assert find_good_lambda(M("y", "x")) == 1


def test_find_good_lambda_skips_bad_one():
    # x+y = P is not primitive; x has degree 2 over K(P, Q)
    m = M("x+y", "(x-y)^2")
    assert minimal_polynomial(m, 1).s_degree == 1
    assert extension_degree(m).extension_degree == 2
    lam = find_good_lambda(m)
    assert lam == 0
    assert minimal_polynomial(m, lam).s_degree == 2


def test_normalize_g_sign_and_content():
    assert normalize_g(G("-6*s + 4*u")) == G("3*s - 2*u")
    assert normalize_g(G("1/2*s^2 - 1/4*v")) == G("2*s^2 - v")


def _irreducible(g):
    _, factors = sp.factor_list(to_sympy(g))
    return len(factors) == 1 and factors[0][1] == 1


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2**32))
def test_tame_presentations(seed):
    m = random_tame(seed).forward
    pres = minimal_polynomial(m, 1)
    assert annihilates(pres.g, m, 1)
    assert pres.s_degree == 1
    assert pres.s_degree <= extension_degree(m).extension_degree
    assert is_primitive(m, 1)
    assert find_good_lambda(m) == 1
    assert pres.g.content() == 1


@pytest.mark.parametrize("p, q", [("x^2", "y"), ("x^2", "y^2"), ("x^2+y", "y^3"),
                                  ("x*y + x", "y")])
@pytest.mark.parametrize("lam", [1, 0, -1, 2])
def test_presentation_invariants(p, q, lam):
    m = M(p, q)
    pres = minimal_polynomial(m, lam)
    assert annihilates(pres.g, m, lam)
    assert pres.g.content() == 1
    assert pres.s_degree >= 1
    d = extension_degree(m).extension_degree
    assert pres.s_degree <= d
    assert (pres.s_degree == d) == is_primitive(m, lam)
    assert pres.lam == Fraction(lam)
    assert _irreducible(pres.g)
