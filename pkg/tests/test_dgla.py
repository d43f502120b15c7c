"""Differential graded Lie and commutative algebras, MC calculus, gauge."""

import random
from fractions import Fraction

import pytest

from defcalc.artin import ArtinVector, make_artin
from defcalc.dgla import (
    Cdga,
    Dgla,
    bch_product,
    bracket_artin,
    check_cdga,
    check_dgla,
    gauge_act,
    gauge_equivalent,
    hom_dgla,
    is_mc,
    mc_residual,
    mc_solve,
    tensor_cdga_dgla,
    trivial_cdga,
)
from defcalc.graded import GradedMap, GradedSpace, GradedVector


# ---------------------------------------------------------------------------
# Model builders.


def two_line():
    """<e1, e2> in degrees 1, 2 with [e1, e1] = e2; the obstructed model."""
    space = GradedSpace([("e1", 1), ("e2", 2)])
    d = GradedMap(space, space, 1, {})
    return Dgla(space, d, {("e1", "e1"): {"e2": 1}})


def contractible():
    space = GradedSpace([("u", 0), ("v", 1)])
    d = GradedMap(space, space, 1, {"u": {"v": 1}})
    return Dgla(space, d, {})


def semidirect():
    """a in degree 0 acting on <x, y> in degree 1 by [a, x] = y."""
    space = GradedSpace([("a", 0), ("x", 1), ("y", 1)])
    d = GradedMap(space, space, 1, {})
    return Dgla(space, d, {("a", "x"): {"y": 1}})


def heisenberg():
    space = GradedSpace([("a", 0), ("b", 0), ("c", 0)])
    d = GradedMap(space, space, 1, {})
    return Dgla(space, d, {("a", "b"): {"c": 1}, ("b", "a"): {"c": -1}})


MATRIX_UNITS = ["E11", "E12", "E21", "E22"]


def matrix_unit_product(p, q):
    # E_ij E_kl = [j == k] E_il
    i, j = int(p[1]), int(p[2])
    k, l = int(q[1]), int(q[2])
    return f"E{i}{l}" if j == k else None


def gl2_brackets():
    table = {}
    for p in MATRIX_UNITS:
        for q in MATRIX_UNITS:
            out = {}
            left = matrix_unit_product(p, q)
            right = matrix_unit_product(q, p)
            if left:
                out[left] = out.get(left, 0) + 1
            if right:
                out[right] = out.get(right, 0) - 1
            out = {k: c for k, c in out.items() if c}
            if out:
                table[(p, q)] = out
    return table


def gl2():
    space = GradedSpace([(n, 0) for n in MATRIX_UNITS])
    d = GradedMap(space, space, 1, {})
    return Dgla(space, d, gl2_brackets())


def interval_cdga():
    space = GradedSpace([("1", 0), ("w", 1)])
    d = GradedMap(space, space, 1, {})
    return Cdga(space, d, {}, "1")


def derham_fat_point():
    """Kaehler forms of Q[x]/(x^3): basis 1, x, x2, dx, xdx."""
    space = GradedSpace([("1", 0), ("x", 0), ("x2", 0), ("dx", 1), ("xdx", 1)])
    d = GradedMap(space, space, 1, {"x": {"dx": 1}, "x2": {"xdx": 2}})
    products = {
        ("x", "x"): {"x2": 1},
        ("x", "dx"): {"xdx": 1},
    }
    return Cdga(space, d, products, "1")


# ---------------------------------------------------------------------------
# Axiom checks.


def test_check_dgla_accepts_valid_models():
    for model in (two_line(), contractible(), semidirect(), heisenberg(), gl2()):
        report = check_dgla(model)
        assert report.ok, (report.axiom, report.witness)


def test_check_dgla_catches_broken_complex():
    space = GradedSpace([("u", 0), ("v", 1), ("w", 2)])
    d = GradedMap(space, space, 1, {"u": {"v": 1}, "v": {"w": 1}})
    report = check_dgla(Dgla(space, d, {}))
    assert not report.ok
    assert report.axiom == "complex"


def test_check_dgla_catches_antisymmetry():
    space = GradedSpace([("a", 0), ("b", 0), ("c", 0)])
    d = GradedMap(space, space, 1, {})
    model = Dgla(space, d, {("a", "b"): {"c": 1}, ("b", "a"): {"c": 1}})
    report = check_dgla(model)
    assert not report.ok
    assert report.axiom == "antisymmetry"


def test_check_dgla_catches_jacobi():
    table = gl2_brackets()
    table[("E11", "E12")] = {"E12": -1}
    table[("E12", "E11")] = {"E12": 1}
    space = GradedSpace([(n, 0) for n in MATRIX_UNITS])
    model = Dgla(space, GradedMap(space, space, 1, {}), table)
    report = check_dgla(model)
    assert not report.ok
    assert report.axiom == "jacobi"


def test_check_dgla_catches_leibniz():
    space = GradedSpace([("a", 0), ("b", 0), ("c", 0), ("v", 1)])
    d = GradedMap(space, space, 1, {"c": {"v": 1}})
    model = Dgla(space, d, {("a", "b"): {"c": 1}, ("b", "a"): {"c": -1}})
    report = check_dgla(model)
    assert not report.ok
    assert report.axiom == "leibniz"
    assert set(report.witness) == {"a", "b"}


def test_check_cdga_accepts_valid_models():
    for model in (trivial_cdga(), interval_cdga(), derham_fat_point()):
        report = check_cdga(model)
        assert report.ok, (report.axiom, report.witness)


def test_check_cdga_catches_commutativity():
    space = GradedSpace([("1", 0), ("p", 1), ("q", 1), ("z", 2)])
    d = GradedMap(space, space, 1, {})
    products = {("p", "q"): {"z": 1}, ("q", "p"): {"z": 1}}
    report = check_cdga(Cdga(space, d, products, "1"))
    assert not report.ok
    assert report.axiom == "commutativity"


def test_derham_fat_point_leibniz_exactness():
    model = derham_fat_point()
    # d(x * x) = 2 x dx comes out of the product rule, not by fiat
    x = GradedVector.basis("x")
    prod = model.multiply(x, x)
    assert prod.coeffs == {"x2": Fraction(1)}
    assert model.d.apply(prod).coeffs == {"xdx": Fraction(2)}


# ---------------------------------------------------------------------------
# Tensor and Hom constructions.


def test_tensor_frozen_values():
    t = tensor_cdga_dgla(interval_cdga(), two_line())
    assert t.space.names == ("1*e1", "1*e2", "w*e1", "w*e2")
    assert t.space.degree("w*e1") == 2
    assert t.space.degree("w*e2") == 3
    # [a @ x, b @ y] = (-1)^(|b||x|) ab @ [x, y]
    assert t.bracket_basis("1*e1", "1*e1").coeffs == {"1*e2": Fraction(1)}
    assert t.bracket_basis("w*e1", "1*e1").coeffs == {"w*e2": Fraction(1)}
    assert t.bracket_basis("1*e1", "w*e1").coeffs == {"w*e2": Fraction(-1)}
    assert t.bracket_basis("w*e1", "w*e1").is_zero()
    assert check_dgla(t).ok


def test_tensor_differential_sign():
    t = tensor_cdga_dgla(derham_fat_point(), contractible())
    # d(a @ x) = da @ x + (-1)^|a| a @ dx
    assert t.d.column("x*u").coeffs == {"dx*u": Fraction(1), "x*v": Fraction(1)}
    assert t.d.column("dx*u").coeffs == {"dx*v": Fraction(-1)}
    assert check_dgla(t).ok


def test_tensor_with_gl2_satisfies_axioms():
    t = tensor_cdga_dgla(derham_fat_point(), gl2())
    assert check_dgla(t).ok


def test_hom_dgla_frozen():
    v = contractible()
    h = hom_dgla(v.space, v.d)
    deg = h.space.degree
    assert deg("E[u,v]") == -1 and deg("E[v,u]") == 1
    assert h.d.column("E[u,v]").coeffs == {
        "E[u,u]": Fraction(1),
        "E[v,v]": Fraction(1),
    }
    assert h.d.column("E[u,u]").coeffs == {"E[v,u]": Fraction(1)}
    assert h.d.column("E[v,v]").coeffs == {"E[v,u]": Fraction(-1)}
    assert h.d.column("E[v,u]").is_zero()
    assert h.bracket_basis("E[u,v]", "E[v,u]").coeffs == {
        "E[u,u]": Fraction(1),
        "E[v,v]": Fraction(1),
    }
    assert check_dgla(h).ok


def test_hom_dgla_random_complexes():
    rng = random.Random(41)
    for _ in range(10):
        n0, n1 = rng.randint(1, 2), rng.randint(1, 2)
        basis = [(f"u{i}", 0) for i in range(n0)] + [
            (f"v{i}", 1) for i in range(n1)
        ]
        space = GradedSpace(basis)
        columns = {}
        for i in range(n0):
            col = {f"v{j}": rng.randint(-2, 2) for j in range(n1)}
            col = {k: c for k, c in col.items() if c}
            if col:
                columns[f"u{i}"] = col
        h = hom_dgla(space, GradedMap(space, space, 1, columns))
        assert check_dgla(h).ok


# ---------------------------------------------------------------------------
# Maurer-Cartan calculus.


def test_mc_residual_frozen():
    model = two_line()
    algebra = make_artin(("t",), 3)
    x = ArtinVector.single((1,), "e1")
    r = mc_residual(x, model, algebra)
    assert r.terms == {((2,), "e2"): Fraction(1, 2)}
    assert not is_mc(x, model, algebra)
    # over t^2 = 0 the quadratic term dies
    small = make_artin(("t",), 2)
    assert is_mc(x, model, small)


def test_bracket_artin_bilinear_random():
    model = gl2()
    algebra = make_artin(("t",), 4)
    rng = random.Random(13)
    names = model.space.names

    def rand_vec():
        terms = {}
        for _ in range(rng.randint(1, 3)):
            key = ((rng.randint(1, 3),), names[rng.randrange(len(names))])
            terms[key] = terms.get(key, 0) + rng.randint(-2, 2)
        return ArtinVector(terms)

    for _ in range(30):
        x, y, z = rand_vec(), rand_vec(), rand_vec()
        lhs = bracket_artin(model, algebra, x + y, z)
        rhs = bracket_artin(model, algebra, x, z) + bracket_artin(
            model, algebra, y, z
        )
        assert lhs == rhs
        # graded antisymmetry in degree 0: [x, y] = -[y, x]
        assert bracket_artin(model, algebra, x, y) == bracket_artin(
            model, algebra, y, x
        ).scale(-1)


def test_bch_frozen():
    model = heisenberg()
    algebra = make_artin(("t",), 3)
    a = ArtinVector.single((1,), "a")
    b = ArtinVector.single((1,), "b")
    z = bch_product(a, b, model, algebra)
    assert z.terms == {
        ((1,), "a"): Fraction(1),
        ((1,), "b"): Fraction(1),
        ((2,), "c"): Fraction(1, 2),
    }
    # abelian: bch degenerates to the sum
    z2 = bch_product(a, a.scale(3), model, algebra)
    assert z2.terms == {((1,), "a"): Fraction(4)}


def test_gauge_act_frozen():
    model = semidirect()
    algebra = make_artin(("t",), 3)
    a = ArtinVector.single((1,), "a")
    x = ArtinVector.single((1,), "x")
    moved = gauge_act(a, x, model, algebra)
    assert moved.terms == {((1,), "x"): Fraction(1), ((2,), "y"): Fraction(1)}
    assert is_mc(moved, model, algebra)


def test_gauge_act_preserves_mc_random():
    model = semidirect()
    algebra = make_artin(("t",), 4)
    rng = random.Random(3)
    for _ in range(40):
        x = ArtinVector(
            {
                ((rng.randint(1, 3),), n): rng.randint(-2, 2)
                for n in ("x", "y")
            }
        )
        a = ArtinVector(
            {((rng.randint(1, 3),), "a"): rng.randint(-2, 2)}
        )
        assert is_mc(x, model, algebra)
        assert is_mc(gauge_act(a, x, model, algebra), model, algebra)


def test_mc_solve_obstructed_model():
    model = two_line()
    algebra = make_artin(("t",), 3)
    result = mc_solve(model, algebra)
    assert result.tangent_dimension() == 1
    assert result.obstructed_directions() == [0]
    assert result.solutions == [None]
    (event,) = result.primary_obstructions()
    assert event.order == 2
    assert event.monomial == (2,)
    assert event.coords == (Fraction(1, 2),)
    assert event.cocycle.coeffs == {"e2": Fraction(1, 2)}


def test_mc_solve_unobstructed_model():
    model = semidirect()
    algebra = make_artin(("t",), 4)
    result = mc_solve(model, algebra)
    assert result.tangent_dimension() == 2
    assert result.events == []
    assert len(result.solutions) == 2
    for x in result.solutions:
        assert x is not None
        assert is_mc(x, model, algebra)


def test_mc_solve_rejects_non_cocycle_direction():
    # a direction with nonzero first order residual is no tangent vector
    algebra = make_artin(("t",), 3)
    space = GradedSpace([("p", 1), ("q", 2)])
    d = GradedMap(space, space, 1, {"p": {"q": 1}})
    model = Dgla(space, d, {})
    with pytest.raises(ValueError):
        mc_solve(model, algebra, directions=[ArtinVector.single((1,), "p")])


def test_mc_solve_custom_directions():
    model = semidirect()
    algebra = make_artin(("t",), 3)
    x = ArtinVector.single((1,), "x", 2)
    result = mc_solve(model, algebra, directions=[x])
    assert result.solutions == [x]


def test_gauge_equivalent_positive():
    model = contractible()
    algebra = make_artin(("t",), 3)
    x = ArtinVector.single((1,), "v")
    y = ArtinVector()
    result = gauge_equivalent(x, y, model, algebra)
    assert result.equivalent
    assert gauge_act(result.witness, x, model, algebra) == y


def test_gauge_equivalent_negative_certificate():
    model = two_line()
    algebra = make_artin(("t",), 2)
    x = ArtinVector.single((1,), "e1")
    y = x.scale(-1)
    result = gauge_equivalent(x, y, model, algebra)
    assert not result.equivalent
    assert result.order == 1
    assert result.monomial == (1,)
    assert result.residual.coeffs == {"e1": Fraction(-2)}


def test_gauge_equivalent_rejects_non_mc():
    model = two_line()
    algebra = make_artin(("t",), 3)
    x = ArtinVector.single((1,), "e1")
    with pytest.raises(ValueError):
        gauge_equivalent(x, ArtinVector(), model, algebra)
