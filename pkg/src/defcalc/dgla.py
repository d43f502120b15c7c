"""Differential graded Lie algebras and the Maurer-Cartan calculus.

Brackets and products are stored as structure constants on ordered pairs of
basis names.  A presentation may give only one of [a, b], [b, a]; the mirror
value is filled in from graded antisymmetry.  check_dgla / check_cdga verify
the axioms exactly and report the first violation in basis order, so a
failing input always produces the same witness.

Over an Artinian coefficient algebra the gauge exponential and the
Campbell-Hausdorff product are finite sums; both are computed exactly with
no truncation beyond the one built into the coefficient ring.
"""

from __future__ import annotations

import math
from fractions import Fraction

from . import linalg
from .artin import ArtinVector, monomial_degree, monomial_key, validate_artin_vector
from .graded import GradedMap, GradedSpace, GradedVector

ZERO = Fraction(0)
ONE = Fraction(1)


class CheckReport:
    """Outcome of an axiom check: pass, or the first violation found."""

    def __init__(self, ok, axiom=None, witness=None, value=None):
        self.ok = ok
        self.axiom = axiom
        self.witness = witness
        self.value = value

    def __bool__(self):
        return self.ok

    @classmethod
    def passed(cls):
        return cls(True)

    @classmethod
    def failed(cls, axiom, witness, value=None):
        return cls(False, axiom, witness, value)

    def __repr__(self):
        if self.ok:
            return "CheckReport(pass)"
        return f"CheckReport(fail: {self.axiom} at {self.witness}, value={self.value!r})"


def _sign(exponent):
    return -1 if exponent % 2 else 1


def _complete_skew(space, table, sign_rule):
    """Fill missing mirror entries of a pairwise table.

    sign_rule(da, db) gives the factor relating the (b, a) entry to the
    (a, b) entry.  Explicitly given mirrors are kept as is; consistency is
    the checker's job, not the constructor's.
    """
    out = {}
    for (a, b), vec in table.items():
        if not isinstance(vec, GradedVector):
            vec = GradedVector(vec)
        if vec.is_zero():
            continue
        out[(a, b)] = vec
    for (a, b) in list(out):
        if (b, a) not in out:
            mirror = out[(a, b)].scale(sign_rule(space.degree(a), space.degree(b)))
            if not mirror.is_zero():
                out[(b, a)] = mirror
    return out


def _validate_names(space, table, label):
    """Names must exist; degree bookkeeping is left to the axiom checks so
    that broken presentations can be constructed and then reported on."""
    for (a, b), vec in table.items():
        if a not in space or b not in space:
            raise ValueError(f"{label} entry ({a!r}, {b!r}) uses unknown basis names")
        for name in vec.coeffs:
            if name not in space:
                raise ValueError(f"{label} [{a!r},{b!r}] hits unknown name {name!r}")


class Dgla:
    """Graded space, degree +1 differential and bracket structure constants.

    The constructor enforces shape (degrees additive, differential of degree
    +1) and completes the bracket table by graded antisymmetry; the axioms
    themselves are verified by check_dgla, which construction does not run
    so that deliberately broken instances can be built and inspected.
    """

    def __init__(self, space, differential, brackets):
        self.space = space
        if differential is None:
            differential = GradedMap.zero(space, space, 1)
        if differential.degree != 1:
            raise ValueError("differential must have degree +1")
        self.d = differential
        table = _complete_skew(
            space, brackets, lambda da, db: -_sign(da * db)
        )
        _validate_names(space, table, "bracket")
        self.brackets = table

    def bracket_basis(self, a, b):
        return self.brackets.get((a, b), GradedVector())

    def bracket(self, x, y):
        out = GradedVector()
        for a, ca in x.coeffs.items():
            for b, cb in y.coeffs.items():
                vec = self.brackets.get((a, b))
                if vec is not None:
                    out = out + vec.scale(ca * cb)
        return out

    def nonzero_bracket_pairs(self):
        return sorted(self.brackets)

    def dimension(self):
        return len(self.space)


class Cdga:
    """Graded commutative algebra with differential and designated unit.

    Missing mirror products are filled from graded commutativity and the
    unit's products are filled in automatically, so presentations only need
    the interesting part of the multiplication table.
    """

    def __init__(self, space, differential, products, unit):
        self.space = space
        if differential is None:
            differential = GradedMap.zero(space, space, 1)
        if differential.degree != 1:
            raise ValueError("differential must have degree +1")
        self.d = differential
        if unit not in space:
            raise ValueError(f"unit {unit!r} is not a basis name")
        if space.degree(unit) != 0:
            raise ValueError("unit must have degree 0")
        self.unit = unit
        table = dict(products or {})
        for name in space.names:
            table.setdefault((unit, name), GradedVector.basis(name))
            table.setdefault((name, unit), GradedVector.basis(name))
        table = _complete_skew(space, table, lambda da, db: _sign(da * db))
        _validate_names(space, table, "product")
        self.products = table

    def product_basis(self, a, b):
        return self.products.get((a, b), GradedVector())

    def multiply(self, x, y):
        out = GradedVector()
        for a, ca in x.coeffs.items():
            for b, cb in y.coeffs.items():
                vec = self.products.get((a, b))
                if vec is not None:
                    out = out + vec.scale(ca * cb)
        return out


def trivial_cdga(unit_name="1"):
    """The ground field as a one-element algebra in degree 0."""
    space = GradedSpace([(unit_name, 0)])
    return Cdga(space, None, {}, unit_name)


# ---------------------------------------------------------------------------
# Axiom checks.


def check_dgla(dgla):
    """Verify d*d = 0, graded antisymmetry, Jacobi and Leibniz, exactly.

    Returns a passing report or the first violation in deterministic order.
    Jacobi is only evaluated on triples where at least one pairwise bracket
    is nonzero; on fully commuting triples every term vanishes identically.
    """
    space = dgla.space
    names = space.names
    deg = space.degree

    for a in names:
        dd = dgla.d.apply(dgla.d.column(a))
        if not dd.is_zero():
            return CheckReport.failed("complex", (a,), dd)

    pairs = sorted(set(dgla.brackets))
    for a, b in pairs:
        lhs = dgla.bracket_basis(a, b)
        rhs = dgla.bracket_basis(b, a).scale(-_sign(deg(a) * deg(b)))
        if lhs != rhs:
            return CheckReport.failed("antisymmetry", (a, b), lhs - rhs)

    nonzero = dgla.nonzero_bracket_pairs()

    def jacobi_defect(a, b, c):
        lhs = dgla.bracket(GradedVector.basis(a), dgla.bracket_basis(b, c))
        t1 = dgla.bracket(dgla.bracket_basis(a, b), GradedVector.basis(c))
        t2 = dgla.bracket(GradedVector.basis(b), dgla.bracket_basis(a, c)).scale(
            _sign(deg(a) * deg(b))
        )
        return lhs - (t1 + t2)

    # On a triple with all three pairwise brackets zero every Jacobi term
    # vanishes identically, so only triples touching a nonzero pair matter.
    index = {n: i for i, n in enumerate(names)}
    candidates = set()
    for b, c in nonzero:
        for a in names:
            candidates.add((index[a], index[b], index[c]))
    for a, b in nonzero:
        for c in names:
            candidates.add((index[a], index[b], index[c]))
    for a, c in nonzero:
        for b in names:
            candidates.add((index[a], index[b], index[c]))
    for ia, ib, ic in sorted(candidates):
        a, b, c = names[ia], names[ib], names[ic]
        defect = jacobi_defect(a, b, c)
        if not defect.is_zero():
            return CheckReport.failed("jacobi", (a, b, c), defect)

    d_support = [n for n in names if not dgla.d.column(n).is_zero()]
    leibniz_pairs = set(nonzero)
    for a in d_support:
        for b in names:
            leibniz_pairs.add((a, b))
            leibniz_pairs.add((b, a))
    for a, b in sorted(leibniz_pairs):
        lhs = dgla.d.apply(dgla.bracket_basis(a, b))
        rhs = dgla.bracket(dgla.d.column(a), GradedVector.basis(b)) + dgla.bracket(
            GradedVector.basis(a), dgla.d.column(b)
        ).scale(_sign(deg(a)))
        if lhs != rhs:
            return CheckReport.failed("leibniz", (a, b), lhs - rhs)

    return CheckReport.passed()


def check_cdga(cdga):
    """Verify d*d = 0, graded commutativity, associativity, Leibniz, unit."""
    space = cdga.space
    names = space.names
    deg = space.degree

    for a in names:
        dd = cdga.d.apply(cdga.d.column(a))
        if not dd.is_zero():
            return CheckReport.failed("complex", (a,), dd)

    for name in names:
        if cdga.product_basis(cdga.unit, name) != GradedVector.basis(name):
            return CheckReport.failed("unit", (cdga.unit, name))

    pairs = sorted(set(cdga.products))
    for a, b in pairs:
        lhs = cdga.product_basis(a, b)
        rhs = cdga.product_basis(b, a).scale(_sign(deg(a) * deg(b)))
        if lhs != rhs:
            return CheckReport.failed("commutativity", (a, b), lhs - rhs)

    nonzero = sorted((k for k, v in cdga.products.items() if not v.is_zero()))
    seen = set()
    for a, b in nonzero:
        for c in names:
            for triple in ((a, b, c), (c, a, b)):
                if triple in seen:
                    continue
                seen.add(triple)
                x, y, z = triple
                lhs = cdga.multiply(cdga.product_basis(x, y), GradedVector.basis(z))
                rhs = cdga.multiply(GradedVector.basis(x), cdga.product_basis(y, z))
                if lhs != rhs:
                    return CheckReport.failed("associativity", triple, lhs - rhs)

    d_support = [n for n in names if not cdga.d.column(n).is_zero()]
    leibniz_pairs = set(nonzero)
    for a in d_support:
        for b in names:
            leibniz_pairs.add((a, b))
            leibniz_pairs.add((b, a))
    for a, b in sorted(leibniz_pairs):
        lhs = cdga.d.apply(cdga.product_basis(a, b))
        rhs = cdga.multiply(cdga.d.column(a), GradedVector.basis(b)) + cdga.multiply(
            GradedVector.basis(a), cdga.d.column(b)
        ).scale(_sign(deg(a)))
        if lhs != rhs:
            return CheckReport.failed("leibniz", (a, b), lhs - rhs)

    return CheckReport.passed()


# ---------------------------------------------------------------------------
# Constructions.


def tensor_name(a, x):
    return f"{a}*{x}"


def tensor_cdga_dgla(cdga, dgla):
    """Tensor of a commutative differential graded algebra with a dgla.

    On decomposables: d(a @ x) = da @ x + (-1)^|a| a @ dx and
    [a @ x, b @ y] = (-1)^(|b| |x|) ab @ [x, y].  The result carries
    tensor_factors / cdga / inner attributes recording the construction.
    """
    A, L = cdga, dgla
    basis = []
    factors = {}
    for a in A.space.names:
        for x in L.space.names:
            name = tensor_name(a, x)
            if name in factors:
                raise ValueError(f"tensor basis name collision at {name!r}")
            basis.append((name, A.space.degree(a) + L.space.degree(x)))
            factors[name] = (a, x)
    space = GradedSpace(basis)

    def embed(avec, xvec):
        out = GradedVector()
        for a, ca in avec.coeffs.items():
            for x, cx in xvec.coeffs.items():
                out = out + GradedVector({tensor_name(a, x): ca * cx})
        return out

    columns = {}
    for a in A.space.names:
        for x in L.space.names:
            img = embed(A.d.column(a), GradedVector.basis(x)) + embed(
                GradedVector.basis(a), L.d.column(x)
            ).scale(_sign(A.space.degree(a)))
            if not img.is_zero():
                columns[tensor_name(a, x)] = img
    differential = GradedMap(space, space, 1, columns)

    brackets = {}
    for (x, y), vec in L.brackets.items():
        for a in A.space.names:
            for b in A.space.names:
                ab = A.product_basis(a, b)
                if ab.is_zero():
                    continue
                out = embed(ab, vec).scale(
                    _sign(A.space.degree(b) * L.space.degree(x))
                )
                if not out.is_zero():
                    brackets[(tensor_name(a, x), tensor_name(b, y))] = out

    result = Dgla(space, differential, brackets)
    result.tensor_factors = factors
    result.cdga = A
    result.inner = L
    return result


def hom_name(target, source):
    return f"E[{target},{source}]"


def hom_dgla(space, differential):
    """Endomorphism dgla of a complex (V, d).

    Basis maps E[w, v] send v to w and have degree |w| - |v|; the bracket is
    the graded commutator and the differential is [d, -].
    """
    V, d = space, differential
    if d.degree != 1:
        raise ValueError("differential must have degree +1")
    basis = []
    factors = {}
    for w in V.names:
        for v in V.names:
            name = hom_name(w, v)
            basis.append((name, V.degree(w) - V.degree(v)))
            factors[name] = (w, v)
    hom_space = GradedSpace(basis)

    def compose_basis(f, g):
        """E-basis expansion of f o g for basis maps f = (w, v), g = (y, x)."""
        (w, v), (y, x) = factors[f], factors[g]
        if v == y:
            return GradedVector.basis(hom_name(w, x))
        return GradedVector()

    def map_to_vector(cols):
        """Hom-basis vector for the map with the given columns dict."""
        out = GradedVector()
        for v, image in cols.items():
            for w, c in image.coeffs.items():
                out = out + GradedVector({hom_name(w, v): c})
        return out

    brackets = {}
    for f in hom_space.names:
        df_deg = hom_space.degree(f)
        for g in hom_space.names:
            val = compose_basis(f, g) - compose_basis(g, f).scale(
                _sign(df_deg * hom_space.degree(g))
            )
            if not val.is_zero():
                brackets[(f, g)] = val

    columns = {}
    for f in hom_space.names:
        (w, v) = factors[f]
        fdeg = hom_space.degree(f)
        # d o f: columns of f composed with d; f o d: f applied to columns of d.
        left = map_to_vector({v: d.column(w)})
        right_cols = {}
        for src in V.names:
            img = d.column(src)
            if img[v] != 0:
                right_cols[src] = GradedVector({w: img[v]})
        right = map_to_vector(right_cols)
        img = left - right.scale(_sign(fdeg))
        if not img.is_zero():
            columns[f] = img
    hom_diff = GradedMap(hom_space, hom_space, 1, columns)

    result = Dgla(hom_space, hom_diff, brackets)
    result.hom_factors = factors
    result.complex_space = V
    result.complex_differential = d
    return result


# ---------------------------------------------------------------------------
# Maurer-Cartan calculus over an Artinian base.


def bracket_artin(dgla, algebra, x, y):
    """Coefficient-bilinear extension of the bracket to L (x) m_A."""
    out = ArtinVector()
    terms = {}
    for (mx, ax), cx in x.terms.items():
        for (my, ay), cy in y.terms.items():
            mono = algebra.multiply_monomials(mx, my)
            if mono is None:
                continue
            vec = dgla.brackets.get((ax, ay))
            if vec is None:
                continue
            factor = cx * cy
            for name, c in vec.coeffs.items():
                key = (mono, name)
                s = terms.get(key, ZERO) + factor * c
                if s == 0:
                    terms.pop(key, None)
                else:
                    terms[key] = s
    out.terms = terms
    return out


def mc_residual(x, dgla, algebra):
    """dx + [x, x] / 2 for a degree 1 element of L (x) m_A."""
    validate_artin_vector(x, algebra, dgla.space, degree=1)
    return x.apply_map(dgla.d) + bracket_artin(dgla, algebra, x, x).scale(
        Fraction(1, 2)
    )


def is_mc(x, dgla, algebra):
    return mc_residual(x, dgla, algebra).is_zero()


def gauge_act(a, x, dgla, algebra):
    """Action of exp(a) on x:  x + sum_n ad_a^n ([a, x] - da) / (n + 1)!.

    a has degree 0 and x degree 1, both with nilpotent coefficients, so the
    series stops on its own; the loop bound is only a safety net.
    """
    validate_artin_vector(a, algebra, dgla.space, degree=0)
    validate_artin_vector(x, algebra, dgla.space, degree=1)
    term = bracket_artin(dgla, algebra, a, x) - a.apply_map(dgla.d)
    result = x
    n = 0
    while not term.is_zero():
        result = result + term.scale(Fraction(1, math.factorial(n + 1)))
        term = bracket_artin(dgla, algebra, a, term)
        n += 1
        if n > algebra.nilpotency_order:
            raise AssertionError("gauge series failed to terminate")
    return result


def _nested_bracket(dgla, algebra, letters):
    """Right-nested bracket [w1, [w2, [... [wk-1, wk]]]] of coefficient vectors."""
    acc = letters[-1]
    for letter in reversed(letters[:-1]):
        acc = bracket_artin(dgla, algebra, letter, acc)
        if acc.is_zero():
            break
    return acc


def _block_sequences(total_budget):
    """All sequences of (p, q) blocks with p + q >= 1, total letters <= budget."""
    results = []

    def extend(seq, used):
        if seq:
            results.append(tuple(seq))
        for p in range(total_budget - used + 1):
            for q in range(total_budget - used - p + 1):
                if p + q == 0:
                    continue
                seq.append((p, q))
                extend(seq, used + p + q)
                seq.pop()

    extend([], 0)
    return results


def bch_product(a, b, dgla, algebra):
    """Campbell-Hausdorff product a * b with exp(a * b) acting as exp(a) exp(b).

    Dynkin's commutator series; every letter lies in the maximal ideal, so
    words longer than the nilpotency order vanish and the sum below is the
    whole series.
    """
    validate_artin_vector(a, algebra, dgla.space, degree=0)
    validate_artin_vector(b, algebra, dgla.space, degree=0)
    max_len = algebra.nilpotency_order - 1
    total = ArtinVector()
    for seq in _block_sequences(max_len):
        letters = []
        for p, q in seq:
            letters.extend([a] * p)
            letters.extend([b] * q)
        word_len = len(letters)
        nested = _nested_bracket(dgla, algebra, letters)
        if nested.is_zero():
            continue
        denom = len(seq) * word_len
        for p, q in seq:
            denom *= math.factorial(p) * math.factorial(q)
        coeff = Fraction(_sign(len(seq) - 1), denom)
        total = total + nested.scale(coeff)
    return total


# ---------------------------------------------------------------------------
# Order-by-order Maurer-Cartan solving and gauge equivalence.


class _DifferentialSolver:
    """Cached exact solver for d u = v restricted to one source degree."""

    def __init__(self, dgla, source_degree):
        space = dgla.space
        self.source_names = space.names_of_degree(source_degree)
        self.target_names = space.names_of_degree(source_degree + 1)
        rows = [
            [dgla.d.column(src)[tgt] for src in self.source_names]
            for tgt in self.target_names
        ]
        self.prepared = linalg.PreparedSolve(rows, len(self.source_names))

    def preimage(self, vector):
        rhs = vector.to_dense(self.target_names)
        sol = self.prepared.solve(rhs)
        if sol is None:
            return None
        return GradedVector.from_dense(self.source_names, sol)


class ObstructionEvent:
    """One projected obstruction class met during the order-by-order lift."""

    def __init__(self, direction, order, monomial, coords, cocycle):
        self.direction = direction
        self.order = order
        self.monomial = monomial
        self.coords = tuple(coords)
        self.cocycle = cocycle

    def vanishes(self):
        return all(c == 0 for c in self.coords)

    def __repr__(self):
        return (
            f"ObstructionEvent(direction={self.direction}, order={self.order}, "
            f"monomial={self.monomial}, coords={self.coords})"
        )


class McSolveResult:
    """Tangent block, obstruction history and completed lifts."""

    def __init__(self, cohomology, directions, events, solutions):
        self.cohomology = cohomology
        self.directions = directions
        self.events = events
        self.solutions = solutions

    def tangent_dimension(self):
        return self.cohomology.dimension(1)

    def obstructed_directions(self):
        return sorted({e.direction for e in self.events if not e.vanishes()})

    def primary_obstructions(self):
        """First nonvanishing obstruction event of each direction."""
        first = {}
        for e in self.events:
            if e.vanishes() or e.direction in first:
                continue
            first[e.direction] = e
        return [first[k] for k in sorted(first)]


def mc_solve(dgla, algebra, directions=None):
    """Lift tangent directions to Maurer-Cartan solutions order by order.

    Default directions: each degree 1 cohomology representative seeded along
    the first variable of the algebra.  At every order the residual
    coefficient of each monomial is a cocycle; its class in H^2 either blocks
    the direction (recorded, lift abandoned) or a particular preimage under d
    is chosen by deterministic elimination and the induction continues.
    """
    summary = _cohomology_of(dgla)
    if directions is None:
        if not algebra.variables:
            raise ValueError("algebra has no variables to seed directions with")
        t1 = tuple(1 if i == 0 else 0 for i in range(len(algebra.variables)))
        if t1 not in algebra.monomials:
            raise ValueError("first variable does not survive in the algebra")
        directions = []
        for rep in summary.representatives(1):
            directions.append(
                ArtinVector({(t1, name): c for name, c in rep.coeffs.items()})
            )
    for x in directions:
        validate_artin_vector(x, algebra, dgla.space, degree=1)
        # a seed whose linear part is not closed is no tangent vector at all
        if not mc_residual(x, dgla, algebra).order_part(1).is_zero():
            raise ValueError("direction is not a cocycle at first order")

    solver = _DifferentialSolver(dgla, 1)
    events = []
    solutions = []
    max_order = algebra.nilpotency_order - 1
    for idx, seed in enumerate(directions):
        x = seed
        blocked = False
        for order in range(2, max_order + 1):
            residual = mc_residual(x, dgla, algebra)
            part = residual.order_part(order)
            if part.is_zero():
                continue
            correction = ArtinVector()
            for mono in part.monomials_present():
                vec = part.coefficient_vector(mono)
                coords = summary.project(2, vec)
                event = ObstructionEvent(idx, order, mono, coords, vec)
                events.append(event)
                if not event.vanishes():
                    blocked = True
                    break
                pre = solver.preimage(vec)
                if pre is None:
                    raise AssertionError(
                        "vanishing obstruction class without a preimage"
                    )
                correction = correction + ArtinVector(
                    {(mono, name): -c for name, c in pre.coeffs.items()}
                )
            if blocked:
                break
            x = x + correction
        if blocked:
            solutions.append(None)
            continue
        final = mc_residual(x, dgla, algebra)
        if not final.is_zero():
            raise AssertionError("lift terminated with a nonzero residual")
        solutions.append(x)
    return McSolveResult(summary, list(directions), events, solutions)


def _cohomology_of(dgla):
    from .graded import complex_cohomology

    return complex_cohomology(dgla.space, dgla.d)


class GaugeResult:
    """Witness of gauge equivalence, or the first unsolvable order."""

    def __init__(self, equivalent, witness=None, order=None, monomial=None, residual=None):
        self.equivalent = equivalent
        self.witness = witness
        self.order = order
        self.monomial = monomial
        self.residual = residual

    def __bool__(self):
        return self.equivalent

    def __repr__(self):
        if self.equivalent:
            return f"GaugeResult(equivalent, witness={self.witness!r})"
        return (
            f"GaugeResult(not equivalent at order {self.order}, "
            f"monomial {self.monomial}, residual {self.residual!r})"
        )


def gauge_equivalent(x, y, dgla, algebra):
    """Search order by order for a with exp(a) . x = y.

    Both inputs must satisfy Maurer-Cartan.  At order k the only effect a
    fresh degree k correction a_k has is -d a_k, so each step is a linear
    solve per monomial; an unsolvable monomial stops the search and is
    reported as the failure certificate.
    """
    for label, v in (("x", x), ("y", y)):
        if not is_mc(v, dgla, algebra):
            raise ValueError(f"{label} does not satisfy the Maurer-Cartan equation")
    solver = _DifferentialSolver(dgla, 0)
    a = ArtinVector()
    max_order = algebra.nilpotency_order - 1
    for order in range(1, max_order + 1):
        diff = y - gauge_act(a, x, dgla, algebra)
        if diff.is_zero():
            break
        low = diff.min_order()
        if low > order:
            continue
        if low < order:
            raise AssertionError("gauge induction lost a settled order")
        part = diff.order_part(order)
        for mono in part.monomials_present():
            vec = part.coefficient_vector(mono)
            pre = solver.preimage(-vec)
            if pre is None:
                return GaugeResult(
                    False, order=order, monomial=mono, residual=vec
                )
            a = a + ArtinVector(
                {(mono, name): c for name, c in pre.coeffs.items()}
            )
    if gauge_act(a, x, dgla, algebra) != y:
        raise AssertionError("gauge search terminated without matching y")
    return GaugeResult(True, witness=a)
