"""Artinian coefficient rings Q[t1..tm] / monomial ideal.

An algebra is described by the set of surviving monomials (exponent tuples);
the set must contain 1 and be closed under divisors, which makes the
complement a monomial ideal and the maximal ideal nilpotent.  Ring elements
and coefficient vectors are sparse dictionaries with exact rational values.

Monomials are ordered graded lexicographically (total degree, then exponent
tuple); every routine that iterates over monomials uses that order.
"""

from __future__ import annotations

from fractions import Fraction

from .graded import GradedVector, as_fraction

ZERO = Fraction(0)

UNIT = None  # placeholder replaced per-algebra; the unit monomial is all zeros


def monomial_degree(monomial):
    return sum(monomial)


def monomial_key(monomial):
    return (sum(monomial), monomial)


def divides(a, b):
    """True when monomial a divides monomial b."""
    return all(x <= y for x, y in zip(a, b))


class ArtinAlgebra:
    """Local Artinian algebra presented by variables and surviving monomials."""

    def __init__(self, variables, monomials):
        self.variables = tuple(variables)
        if len(set(self.variables)) != len(self.variables):
            raise ValueError("duplicate variable names")
        m = len(self.variables)
        mono_set = set()
        for mono in monomials:
            mono = tuple(int(e) for e in mono)
            if len(mono) != m:
                raise ValueError(f"monomial {mono!r} has wrong arity, expected {m}")
            if any(e < 0 for e in mono):
                raise ValueError(f"negative exponent in {mono!r}")
            mono_set.add(mono)
        unit = (0,) * m
        if unit not in mono_set:
            raise ValueError("surviving monomials must contain 1")
        for mono in mono_set:
            for i in range(m):
                if mono[i] > 0:
                    lower = mono[:i] + (mono[i] - 1,) + mono[i + 1 :]
                    if lower not in mono_set:
                        raise ValueError(
                            f"monomial set is not division closed: {mono!r} survives "
                            f"but its divisor {lower!r} does not"
                        )
        self.monomials = frozenset(mono_set)
        self.unit = unit
        self.maximal_ideal = tuple(
            sorted((mo for mo in mono_set if mo != unit), key=monomial_key)
        )
        self.nilpotency_order = 1 + max(
            (monomial_degree(mo) for mo in mono_set), default=0
        )

    def __eq__(self, other):
        return (
            isinstance(other, ArtinAlgebra)
            and self.variables == other.variables
            and self.monomials == other.monomials
        )

    def dim_maximal_ideal(self):
        return len(self.maximal_ideal)

    def multiply_monomials(self, a, b):
        """Product monomial, or None when it falls in the ideal."""
        prod = tuple(x + y for x, y in zip(a, b))
        return prod if prod in self.monomials else None

    def monomial_name(self, mono):
        if mono == self.unit:
            return "1"
        parts = []
        for var, e in zip(self.variables, mono):
            if e == 1:
                parts.append(var)
            elif e > 1:
                parts.append(f"{var}^{e}")
        return "*".join(parts)

    def __repr__(self):
        monos = ", ".join(self.monomial_name(m) for m in self.maximal_ideal)
        return f"ArtinAlgebra(Q[{', '.join(self.variables)}]; ideal basis 1, {monos})"


def make_artin(variables, truncation):
    """Build an Artinian algebra.

    truncation may be an integer n, keeping all monomials of total degree
    < n (so every product of n maximal-ideal elements vanishes), or an
    explicit iterable of exponent tuples which is validated as a division
    closed set containing 1.
    """
    variables = tuple(variables)
    if isinstance(truncation, int):
        if truncation < 1:
            raise ValueError("integer truncation must be >= 1")
        monos = []

        def fill(prefix, remaining):
            if not remaining:
                monos.append(tuple(prefix))
                return
            budget = truncation - 1 - sum(prefix)
            for e in range(budget + 1):
                fill(prefix + [e], remaining - 1)

        fill([], len(variables))
        return ArtinAlgebra(variables, monos)
    return ArtinAlgebra(variables, truncation)


def artin_multiply(a, x, y):
    """Product of two ring elements; elements are dicts monomial -> rational."""
    out = {}
    for mx, cx in x.items():
        if mx not in a.monomials:
            raise ValueError(f"monomial {mx!r} is not in the algebra")
        for my, cy in y.items():
            prod = a.multiply_monomials(mx, my)
            if prod is None:
                continue
            c = out.get(prod, ZERO) + as_fraction(cx) * as_fraction(cy)
            if c == 0:
                out.pop(prod, None)
            else:
                out[prod] = c
    return out


class ArtinVector:
    """Element of (graded space) tensor (maximal ideal): terms keyed by
    (monomial, basis name) with nonzero rational coefficients.

    The unit monomial is deliberately excluded; these vectors always live in
    the nilpotent part, which is what makes every series in the calculus a
    finite sum.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        data = {}
        if terms:
            for key, value in terms.items():
                mono, name = key
                c = as_fraction(value)
                if c != 0:
                    data[(tuple(mono), name)] = c
        self.terms = data

    @classmethod
    def single(cls, mono, name, coeff=1):
        return cls({(tuple(mono), name): coeff})

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other):
        out = dict(self.terms)
        for key, c in other.terms.items():
            s = out.get(key, ZERO) + c
            if s == 0:
                out.pop(key, None)
            else:
                out[key] = s
        result = ArtinVector()
        result.terms = out
        return result

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        result = ArtinVector()
        result.terms = {k: -c for k, c in self.terms.items()}
        return result

    def scale(self, factor):
        factor = as_fraction(factor)
        result = ArtinVector()
        if factor != 0:
            result.terms = {k: factor * c for k, c in self.terms.items()}
        return result

    def __rmul__(self, factor):
        return self.scale(factor)

    def __eq__(self, other):
        return isinstance(other, ArtinVector) and self.terms == other.terms

    def order_part(self, order):
        """Terms whose monomial has the given total degree."""
        result = ArtinVector()
        result.terms = {
            k: c for k, c in self.terms.items() if monomial_degree(k[0]) == order
        }
        return result

    def min_order(self):
        """Smallest monomial degree present, or None for the zero vector."""
        if not self.terms:
            return None
        return min(monomial_degree(k[0]) for k in self.terms)

    def coefficient_vector(self, mono):
        """The graded vector multiplying a given monomial."""
        mono = tuple(mono)
        return GradedVector(
            {name: c for (m, name), c in self.terms.items() if m == mono}
        )

    def monomials_present(self):
        return sorted({k[0] for k in self.terms}, key=monomial_key)

    def apply_map(self, gmap):
        """Apply a graded map to the space factor, monomial by monomial."""
        out = {}
        for (mono, name), c in self.terms.items():
            col = gmap.columns.get(name)
            if col is None:
                continue
            for out_name, oc in col.coeffs.items():
                key = (mono, out_name)
                s = out.get(key, ZERO) + c * oc
                if s == 0:
                    out.pop(key, None)
                else:
                    out[key] = s
        result = ArtinVector()
        result.terms = out
        return result

    def __repr__(self):
        if not self.terms:
            return "ArtinVector(0)"
        keys = sorted(self.terms, key=lambda k: (monomial_key(k[0]), k[1]))
        parts = " + ".join(f"{self.terms[k]}*{k[0]}*{k[1]}" for k in keys)
        return f"ArtinVector({parts})"


def validate_artin_vector(x, algebra, space=None, degree=None):
    """Check monomials lie in the maximal ideal and optionally fix the degree."""
    for mono, name in x.terms:
        if mono not in algebra.monomials or mono == algebra.unit:
            raise ValueError(
                f"monomial {mono!r} is not in the maximal ideal of the algebra"
            )
        if space is not None and name not in space:
            raise ValueError(f"{name!r} is not a basis name of the space")
        if degree is not None and space.degree(name) != degree:
            raise ValueError(
                f"expected a vector concentrated in degree {degree}, found {name!r} "
                f"of degree {space.degree(name)}"
            )
