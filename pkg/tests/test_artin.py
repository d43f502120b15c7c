"""Local base rings and nilpotent-coefficient vectors."""

import random
from fractions import Fraction

import pytest

from defcalc.artin import (
    ArtinAlgebra,
    ArtinVector,
    artin_multiply,
    make_artin,
    monomial_degree,
    validate_artin_vector,
)
from defcalc.graded import GradedMap, GradedSpace, GradedVector


def test_make_artin_truncation():
    a = make_artin(("t",), 3)
    assert a.monomials == {(0,), (1,), (2,)}
    assert a.unit == (0,)
    assert a.nilpotency_order == 3
    assert a.multiply_monomials((1,), (1,)) == (2,)
    assert a.multiply_monomials((1,), (2,)) is None


def test_make_artin_two_variables():
    a = make_artin(("s", "t"), 3)
    # all exponent pairs of total degree < 3
    assert len(a.monomials) == 6
    assert (1, 1) in a.monomials
    assert (2, 1) not in a.monomials


def test_make_artin_rejects_bad_input():
    with pytest.raises(ValueError):
        make_artin(("t",), 0)
    # monomial set must be closed under divisors and contain the unit
    with pytest.raises(ValueError):
        ArtinAlgebra(("t",), {(0,), (2,)})
    with pytest.raises(ValueError):
        ArtinAlgebra(("t",), {(1,), (2,)})


def test_explicit_monomial_set():
    # the "fat point" Q[s,t]/(s^2, t^2) given explicitly
    monos = {(0, 0), (1, 0), (0, 1), (1, 1)}
    a = ArtinAlgebra(("s", "t"), monos)
    assert a.multiply_monomials((1, 0), (0, 1)) == (1, 1)
    assert a.multiply_monomials((1, 0), (1, 0)) is None
    assert a.nilpotency_order == 3


def test_artin_multiply_random_ring_axioms():
    a = make_artin(("s", "t"), 4)
    rng = random.Random(9)
    monos = sorted(a.monomials)

    def random_element():
        out = {}
        for _ in range(rng.randint(1, 4)):
            m = monos[rng.randrange(len(monos))]
            out[m] = out.get(m, 0) + Fraction(rng.randint(-3, 3))
        return {m: c for m, c in out.items() if c}

    for _ in range(60):
        x, y, z = random_element(), random_element(), random_element()
        assert artin_multiply(a, x, y) == artin_multiply(a, y, x)
        lhs = artin_multiply(a, artin_multiply(a, x, y), z)
        rhs = artin_multiply(a, x, artin_multiply(a, y, z))
        assert lhs == rhs


def test_artin_vector_parts():
    x = ArtinVector(
        {
            ((1,), "a"): Fraction(2),
            ((2,), "a"): Fraction(-1),
            ((2,), "b"): Fraction(1, 3),
        }
    )
    assert x.min_order() == 1
    assert x.order_part(2).terms == {
        ((2,), "a"): Fraction(-1),
        ((2,), "b"): Fraction(1, 3),
    }
    assert x.coefficient_vector((2,)).coeffs == {
        "a": Fraction(-1),
        "b": Fraction(1, 3),
    }
    assert x.monomials_present() == [(1,), (2,)]
    assert (x - x).is_zero()
    assert x.scale(3).terms[((1,), "a")] == Fraction(6)


def test_artin_vector_apply_map():
    space = GradedSpace([("a", 0), ("b", 1)])
    d = GradedMap(space, space, 1, {"a": {"b": 2}})
    x = ArtinVector({((1,), "a"): Fraction(1, 2)})
    y = x.apply_map(d)
    assert y.terms == {((1,), "b"): Fraction(1)}


def test_validate_artin_vector():
    a = make_artin(("t",), 3)
    space = GradedSpace([("x", 1), ("y", 2)])
    good = ArtinVector({((1,), "x"): 1, ((2,), "x"): -2})
    validate_artin_vector(good, a, space, degree=1)

    with pytest.raises(ValueError):
        # unit monomial is not allowed
        validate_artin_vector(
            ArtinVector.single((0,), "x"), a, space, degree=1
        )
    with pytest.raises(ValueError):
        # monomial outside the algebra
        validate_artin_vector(
            ArtinVector.single((5,), "x"), a, space, degree=1
        )
    with pytest.raises(ValueError):
        # wrong degree
        validate_artin_vector(
            ArtinVector.single((1,), "y"), a, space, degree=1
        )
    with pytest.raises(ValueError):
        # unknown basis name
        validate_artin_vector(
            ArtinVector.single((1,), "zz"), a, space, degree=1
        )


def test_monomial_degree_and_truncation_consistency():
    rng = random.Random(31)
    for _ in range(10):
        nvars = rng.randint(1, 3)
        bound = rng.randint(1, 4)
        a = make_artin(tuple(f"x{i}" for i in range(nvars)), bound)
        for m in a.monomials:
            assert monomial_degree(m) < bound
        # products respect truncation: surviving products keep degree sums
        monos = sorted(a.monomials)
        for m1 in monos:
            for m2 in monos:
                p = a.multiply_monomials(m1, m2)
                s = monomial_degree(m1) + monomial_degree(m2)
                if p is not None:
                    assert monomial_degree(p) == s
                else:
                    assert s >= bound
