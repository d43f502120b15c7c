"""Graded vector spaces with named bases, sign bookkeeping and cohomology.

Everything is exact: coefficients are fractions.Fraction and all elimination
is rational with a fixed pivot order, so repeated runs give identical output.

Vectors are sparse dictionaries basis name -> coefficient.  Maps store one
column per basis name and carry a single integer degree; homogeneity is
enforced at construction time.
"""

from __future__ import annotations

from fractions import Fraction

from . import linalg

ZERO = Fraction(0)
ONE = Fraction(1)


def as_fraction(value):
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


class GradedSpace:
    """Finite graded vector space: an ordered basis of (name, degree) pairs.

    The declared basis order is the canonical order used by every
    deterministic choice downstream (pivoting, representatives, reports).
    """

    def __init__(self, basis):
        names = []
        degrees = {}
        for name, degree in basis:
            if not isinstance(name, str) or not name:
                raise ValueError(f"basis names must be nonempty strings, got {name!r}")
            if name in degrees:
                raise ValueError(f"duplicate basis name {name!r}")
            names.append(name)
            degrees[name] = int(degree)
        self.names = tuple(names)
        self.degrees = degrees

    def __len__(self):
        return len(self.names)

    def __contains__(self, name):
        return name in self.degrees

    def __eq__(self, other):
        return (
            isinstance(other, GradedSpace)
            and self.names == other.names
            and self.degrees == other.degrees
        )

    def degree(self, name):
        try:
            return self.degrees[name]
        except KeyError:
            raise KeyError(f"{name!r} is not a basis name of this space") from None

    def names_of_degree(self, degree):
        return [n for n in self.names if self.degrees[n] == degree]

    def degrees_present(self):
        return sorted(set(self.degrees.values()))

    def basis_pairs(self):
        return [(n, self.degrees[n]) for n in self.names]

    def __repr__(self):
        items = ", ".join(f"{n}:{self.degrees[n]}" for n in self.names)
        return f"GradedSpace({items})"


class GradedVector:
    """Sparse vector: mapping basis name -> nonzero rational coefficient."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        data = {}
        if coeffs:
            for name, value in coeffs.items():
                c = as_fraction(value)
                if c != 0:
                    data[name] = c
        self.coeffs = data

    @classmethod
    def basis(cls, name):
        return cls({name: ONE})

    def is_zero(self):
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __getitem__(self, name):
        return self.coeffs.get(name, ZERO)

    def __iter__(self):
        return iter(self.coeffs.items())

    def __add__(self, other):
        out = dict(self.coeffs)
        for name, c in other.coeffs.items():
            s = out.get(name, ZERO) + c
            if s == 0:
                out.pop(name, None)
            else:
                out[name] = s
        result = GradedVector()
        result.coeffs = out
        return result

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        result = GradedVector()
        result.coeffs = {n: -c for n, c in self.coeffs.items()}
        return result

    def scale(self, factor):
        factor = as_fraction(factor)
        result = GradedVector()
        if factor != 0:
            result.coeffs = {n: factor * c for n, c in self.coeffs.items()}
        return result

    def __rmul__(self, factor):
        return self.scale(factor)

    def __eq__(self, other):
        return isinstance(other, GradedVector) and self.coeffs == other.coeffs

    def support(self):
        return set(self.coeffs)

    def homogeneous_degree(self, space):
        """The common degree of the support, or None for 0 or mixed."""
        degs = {space.degree(n) for n in self.coeffs}
        if len(degs) == 1:
            return degs.pop()
        return None

    def to_dense(self, names):
        return [self.coeffs.get(n, ZERO) for n in names]

    @classmethod
    def from_dense(cls, names, values):
        return cls({n: v for n, v in zip(names, values)})

    def __repr__(self):
        if not self.coeffs:
            return "GradedVector(0)"
        parts = " + ".join(f"{c}*{n}" for n, c in sorted(self.coeffs.items()))
        return f"GradedVector({parts})"


class GradedMap:
    """Homogeneous linear map of graded spaces, stored column by column.

    degree d means a basis vector of degree i is sent into degree i + d;
    every stored column is checked against this at construction.
    """

    def __init__(self, source, target, degree, columns=None):
        self.source = source
        self.target = target
        self.degree = int(degree)
        cols = {}
        if columns:
            for name, vec in columns.items():
                if name not in source:
                    raise ValueError(f"column {name!r} is not in the source basis")
                if not isinstance(vec, GradedVector):
                    vec = GradedVector(vec)
                if vec.is_zero():
                    continue
                want = source.degree(name) + self.degree
                for out_name in vec.coeffs:
                    if out_name not in target:
                        raise ValueError(
                            f"image of {name!r} uses unknown basis name {out_name!r}"
                        )
                    if target.degree(out_name) != want:
                        raise ValueError(
                            f"map is not homogeneous of degree {self.degree}: "
                            f"{name!r} (degree {source.degree(name)}) hits "
                            f"{out_name!r} (degree {target.degree(out_name)})"
                        )
                cols[name] = vec
        self.columns = cols

    @classmethod
    def zero(cls, source, target, degree):
        return cls(source, target, degree, {})

    def column(self, name):
        return self.columns.get(name, GradedVector())

    def apply(self, vector):
        out = GradedVector()
        for name, c in vector.coeffs.items():
            col = self.columns.get(name)
            if col is not None:
                out = out + col.scale(c)
        return out

    def __call__(self, vector):
        return self.apply(vector)

    def compose(self, inner):
        """self after inner."""
        if inner.target is not self.source and inner.target != self.source:
            raise ValueError("composition mismatch: inner target is not outer source")
        cols = {}
        for name, vec in inner.columns.items():
            image = self.apply(vec)
            if not image.is_zero():
                cols[name] = image
        return GradedMap(inner.source, self.target, self.degree + inner.degree, cols)

    def __add__(self, other):
        if self.degree != other.degree:
            raise ValueError("cannot add maps of different degrees")
        cols = dict(self.columns)
        out = GradedMap(self.source, self.target, self.degree, {})
        for name, vec in other.columns.items():
            s = cols.get(name, GradedVector()) + vec
            if s.is_zero():
                cols.pop(name, None)
            else:
                cols[name] = s
        out.columns = {n: v for n, v in cols.items() if not v.is_zero()}
        return out

    def scale(self, factor):
        out = GradedMap(self.source, self.target, self.degree, {})
        factor = as_fraction(factor)
        if factor != 0:
            out.columns = {n: v.scale(factor) for n, v in self.columns.items()}
        return out

    def __neg__(self):
        return self.scale(-1)

    def is_zero(self):
        return not self.columns

    def __eq__(self, other):
        return (
            isinstance(other, GradedMap)
            and self.degree == other.degree
            and self.columns == other.columns
        )


def koszul_sign(perm, degrees):
    """Sign relating a reordered product of graded factors to the original.

    perm is a permutation of 1..n given as the reordered sequence of original
    positions; degrees[i] is the degree of the factor originally at position
    i + 1.  The sign is computed by decomposing the permutation into adjacent
    transpositions, each swap of factors of degrees p, q contributing
    (-1)^(p*q).  Composition of permutations multiplies the signs.
    """
    work = list(perm)
    n = len(work)
    if sorted(work) != list(range(1, n + 1)):
        raise ValueError(f"{perm!r} is not a permutation of 1..{n}")
    if len(degrees) != n:
        raise ValueError("degrees must match the permutation length")
    sign = 1
    for i in range(n):
        for j in range(n - 1 - i):
            if work[j] > work[j + 1]:
                if (degrees[work[j] - 1] * degrees[work[j + 1] - 1]) % 2:
                    sign = -sign
                work[j], work[j + 1] = work[j + 1], work[j]
    return sign


# ---------------------------------------------------------------------------
# Exterior algebra on a finite set of generators.
#
# Words are strictly increasing tuples of generator names (generator order =
# declared order); every generator has exterior degree 1, so reordering a word
# contributes the plain permutation sign and a repeated generator kills the
# word.  Elements are dictionaries word -> coefficient.


def wedge_word(names, order_index):
    """Canonical form of a wedge word: (sorted tuple, sign), or (None, 0)."""
    seq = list(names)
    if len(set(seq)) != len(seq):
        return None, 0
    sign = 1
    for i in range(len(seq)):
        for j in range(len(seq) - 1 - i):
            if order_index[seq[j]] > order_index[seq[j + 1]]:
                seq[j], seq[j + 1] = seq[j + 1], seq[j]
                sign = -sign
    return tuple(seq), sign


def wedge_multiply(x, y, order_index):
    """Product in the exterior algebra; x, y are dicts word -> coefficient."""
    out = {}
    for wx, cx in x.items():
        for wy, cy in y.items():
            word, sign = wedge_word(wx + wy, order_index)
            if sign == 0:
                continue
            c = out.get(word, ZERO) + sign * cx * cy
            if c == 0:
                out.pop(word, None)
            else:
                out[word] = c
    return out


def contraction(alpha, element):
    """Interior product of a linear functional with an exterior element.

    alpha maps generator names to rationals; element is a dict of canonical
    wedge words.  On a word v1 ^ ... ^ vk the result is
    sum_i (-1)^(i-1) alpha(v_i) v1 ^ ... (v_i omitted) ... ^ vk,
    which makes the operator a degree -1 derivation of the wedge product.
    """
    out = {}
    for word, coeff in element.items():
        for i, name in enumerate(word):
            a = alpha.get(name, ZERO)
            if a == 0:
                continue
            sub = word[:i] + word[i + 1 :]
            sign = -1 if i % 2 else 1
            c = out.get(sub, ZERO) + sign * a * coeff
            if c == 0:
                out.pop(sub, None)
            else:
                out[sub] = c
    return out


# ---------------------------------------------------------------------------
# Cohomology of a complex.


class NotAComplexError(ValueError):
    """Raised when d(d(v)) != 0; carries the offending basis vector."""

    def __init__(self, witness, value):
        self.witness = witness
        self.value = value
        super().__init__(f"d*d is nonzero on basis vector {witness!r}: {value!r}")


class DegreeBlock:
    """Cohomology data in a single degree."""

    def __init__(self, degree, dimension, representatives, basis_names, proj_matrix, kernel_matrix):
        self.degree = degree
        self.dimension = dimension
        self.representatives = representatives
        self._basis_names = basis_names
        self._proj_matrix = proj_matrix
        self._kernel_matrix = kernel_matrix


class CohomologySummary:
    """Per-degree dimensions, chosen representatives and class projection.

    Representatives are cocycles whose classes form a basis of cohomology in
    each degree; they are chosen greedily in basis order, so the summary is
    reproducible.  project(degree, z) returns the coordinates of the class of
    the cocycle z in the representative basis and is zero on coboundaries.
    """

    def __init__(self, space, blocks):
        self.space = space
        self.blocks = blocks

    def degrees(self):
        return sorted(self.blocks)

    def dimension(self, degree):
        block = self.blocks.get(degree)
        return block.dimension if block else 0

    def dimensions(self):
        return {d: b.dimension for d, b in sorted(self.blocks.items())}

    def representatives(self, degree):
        block = self.blocks.get(degree)
        return list(block.representatives) if block else []

    def project(self, degree, vector):
        """Coordinates of the class of a cocycle in the representative basis."""
        block = self.blocks.get(degree)
        if block is None:
            if vector.is_zero():
                return []
            raise ValueError(f"no basis in degree {degree}")
        for name in vector.coeffs:
            if self.space.degree(name) != degree:
                raise ValueError(
                    f"vector is not homogeneous of degree {degree}: contains {name!r}"
                )
        dense = vector.to_dense(block._basis_names)
        if block._proj_matrix is None:
            if any(c != 0 for c in dense):
                raise ValueError("vector outside the zero cocycle space")
            return []
        coords = linalg.solve(block._proj_matrix, dense)
        if coords is None:
            raise ValueError("vector is not a cocycle in this degree")
        return coords[: block.dimension]


def complex_cohomology(space, differential):
    """Cohomology of (space, differential) with representatives and projection.

    The differential must have degree +1 and square to zero; otherwise
    NotAComplexError reports a witness basis vector.  All elimination is
    rational with pivots in declared basis order.
    """
    if differential.degree != 1:
        raise ValueError(f"differential must have degree +1, got {differential.degree}")
    for name in space.names:
        dd = differential.apply(differential.column(name))
        if not dd.is_zero():
            raise NotAComplexError(name, dd)

    degrees = space.degrees_present()
    blocks = {}
    for deg in degrees:
        basis_here = space.names_of_degree(deg)
        basis_above = space.names_of_degree(deg + 1)
        basis_below = space.names_of_degree(deg - 1)
        n = len(basis_here)
        if n == 0:
            continue

        d_rows = [
            [differential.column(src)[tgt] for src in basis_here] for tgt in basis_above
        ]
        kernel_cols = linalg.nullspace(d_rows, n)

        image_cols = []
        for src in basis_below:
            col = differential.column(src)
            if not col.is_zero():
                image_cols.append(col.to_dense(basis_here))
        kept = linalg.extend_independent([], image_cols, n)
        image_basis = [image_cols[i] for i in kept]

        rep_idx = linalg.extend_independent(image_basis, kernel_cols, n)
        rep_cols = [kernel_cols[i] for i in rep_idx]
        representatives = [GradedVector.from_dense(basis_here, col) for col in rep_cols]

        span_cols = rep_cols + image_basis
        proj_matrix = linalg.matrix_from_columns(span_cols, n) if span_cols else None
        blocks[deg] = DegreeBlock(
            deg, len(rep_cols), representatives, basis_here, proj_matrix, kernel_cols
        )
    return CohomologySummary(space, blocks)
