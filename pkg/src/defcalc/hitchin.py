"""Hitchin pairs on finite models.

A pair is an r x r matrix theta with entries in a one-degree space L and
theta ^ theta = 0.  Out of a finite CDGA model A the module builds:

  * the deformation dgla on A (x) (gl_r (x) Lambda L), differential
    d(w (x) f) = dw (x) f + (-1)^|w| w (x) [theta, f];
  * the abelian target on A (x) Sym^k L, k = 1..r, with Sym^k placed in
    degree 1 so that first-order section data sits in degree 1;
  * the trace coefficients g^k_n and the morphism h = (g^1, ..., g^r)
    between the induced L-infinity structures, supported on the
    wedge-degree-one letters;
  * the induced map on Maurer-Cartan elements (the trace-power map on the
    deformed Higgs field) and the degree-2 class map used for the
    obstruction-kernel statement.

Matrix entries multiply with commutative Sym-algebra coefficients while
matrix noncommutativity is kept; all arithmetic is exact.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, combinations_with_replacement, permutations

from .artin import ArtinVector
from .dgla import CheckReport, Dgla, mc_residual, tensor_cdga_dgla, tensor_name
from .graded import GradedMap, GradedSpace, GradedVector, as_fraction, wedge_word
from .graded import complex_cohomology
from .linfty import LInftyMorphism, linfty_from_dgla, pushforward_mc

ZERO = Fraction(0)
ONE = Fraction(1)


class HiggsFieldError(ValueError):
    """theta ^ theta != 0; witness holds (row, col, nonzero wedge terms)."""

    def __init__(self, witness):
        self.witness = witness
        i, j, terms = witness
        super().__init__(
            f"theta ^ theta has a nonzero entry at ({i + 1}, {j + 1}): {terms}"
        )


def matrix_name(i, j):
    """Name of the elementary matrix with a 1 in row i, column j (1-based)."""
    return f"E{i}{j}"


def wedge_suffix(combo):
    return "".join("^" + name for name in combo)


def sym_name(multiset):
    return ".".join(multiset)


def _entry_vector(value, l_space):
    vec = value if isinstance(value, GradedVector) else GradedVector(value or {})
    for name in vec.coeffs:
        if name not in l_space:
            raise ValueError(f"theta entry uses unknown name {name!r}")
    return vec


class HitchinPair:
    """Rank, coefficient space L, and the matrix theta with theta^theta = 0.

    theta is given as an r x r nested sequence whose entries are vectors
    over the basis of l_space (dicts or GradedVector; None means zero).
    The wedge square is expanded entrywise at construction and any nonzero
    entry is rejected with its (row, col, terms) witness.
    """

    def __init__(self, rank, l_space, theta):
        rank = int(rank)
        if rank < 1:
            raise ValueError("rank must be a positive integer")
        if rank > 9:
            raise ValueError("rank above 9 is not supported by the naming scheme")
        if len(l_space.degrees_present()) > 1:
            raise ValueError("L must be concentrated in a single degree")
        if len(theta) != rank or any(len(row) != rank for row in theta):
            raise ValueError(f"theta must be a {rank} x {rank} matrix")
        self.rank = rank
        self.l_space = l_space
        self.theta = tuple(
            tuple(_entry_vector(v, l_space) for v in row) for row in theta
        )
        self._l_order = {name: p for p, name in enumerate(l_space.names)}
        square = self._wedge_square()
        for i in range(rank):
            for j in range(rank):
                if square[i][j]:
                    raise HiggsFieldError((i, j, square[i][j]))

    def _wedge_square(self):
        r = self.rank
        order = self._l_order
        out = [[{} for _ in range(r)] for _ in range(r)]
        for i in range(r):
            for j in range(r):
                acc = out[i][j]
                for m in range(r):
                    for a, ca in self.theta[i][m].coeffs.items():
                        for b, cb in self.theta[m][j].coeffs.items():
                            word, sign = wedge_word((a, b), order)
                            if sign == 0:
                                continue
                            value = acc.get(word, ZERO) + ca * cb * sign
                            if value == 0:
                                acc.pop(word, None)
                            else:
                                acc[word] = value
        return out

    def component_matrix(self, l_name):
        """Rational r x r matrix of the l_name coefficients of theta."""
        return tuple(
            tuple(row[q][l_name] for q in range(self.rank))
            for row in (self.theta[p] for p in range(self.rank))
        )


def make_hitchin_pair(rank, l_space, theta):
    return HitchinPair(rank, l_space, theta)


def matrix_wedge_dgla(rank, l_space, theta):
    """The dgla gl_r (x) Lambda L with differential [theta, -].

    Lambda^q sits in degree q; the bracket is
        [phi (x) h, psi (x) w] = phi psi (x) h^w - (-1)^{|h||w|} psi phi (x) w^h
    and the differential sends psi (x) w to sum_a [theta_a, psi] (x) l_a^w.
    No theta^theta check happens here: a bad theta shows up as d^2 != 0
    under check_dgla, which callers may rely on.
    """
    l_names = l_space.names
    order = {name: p for p, name in enumerate(l_names)}
    basis = []
    for q in range(len(l_names) + 1):
        for combo in combinations(l_names, q):
            for i in range(1, rank + 1):
                for j in range(1, rank + 1):
                    basis.append((matrix_name(i, j) + wedge_suffix(combo), q))
    space = GradedSpace(basis)
    parts = {}
    for q in range(len(l_names) + 1):
        for combo in combinations(l_names, q):
            for i in range(1, rank + 1):
                for j in range(1, rank + 1):
                    parts[matrix_name(i, j) + wedge_suffix(combo)] = (i, j, combo)

    entries = tuple(
        tuple(_entry_vector(theta[p][q], l_space) for q in range(rank))
        for p in range(rank)
    )
    theta_mats = {
        l: [[entries[p][q][l] for q in range(rank)] for p in range(rank)]
        for l in l_names
    }

    columns = {}
    for name, (i, j, combo) in parts.items():
        col = {}
        for l in l_names:
            word, sign = wedge_word((l,) + combo, order)
            if sign == 0:
                continue
            tmat = theta_mats[l]
            # [theta_l, E_ij] = sum_p tmat[p][i] E_pj - sum_q tmat[j][q] E_iq
            for p in range(1, rank + 1):
                c = tmat[p - 1][i - 1]
                if c:
                    key = matrix_name(p, j) + wedge_suffix(word)
                    col[key] = col.get(key, ZERO) + c * sign
            for q in range(1, rank + 1):
                c = tmat[j - 1][q - 1]
                if c:
                    key = matrix_name(i, q) + wedge_suffix(word)
                    col[key] = col.get(key, ZERO) - c * sign
        col = {k: v for k, v in col.items() if v}
        if col:
            columns[name] = col
    differential = GradedMap(space, space, 1, columns)

    brackets = {}
    for na, (i, j, h) in parts.items():
        for nb, (k, l, w) in parts.items():
            entry = {}
            if j == k:
                word, sign = wedge_word(h + w, order)
                if sign:
                    key = matrix_name(i, l) + wedge_suffix(word)
                    entry[key] = entry.get(key, ZERO) + sign
            if l == i:
                word, sign = wedge_word(w + h, order)
                if sign:
                    key = matrix_name(k, j) + wedge_suffix(word)
                    flip = -1 if (len(h) * len(w)) % 2 else 1
                    entry[key] = entry.get(key, ZERO) - flip * sign
            entry = {k2: v for k2, v in entry.items() if v}
            if entry:
                brackets[(na, nb)] = entry
    result = Dgla(space, differential, brackets)
    result.matrix_parts = parts
    return result


def build_hitchin_dgla(pair, cdga):
    """The deformation dgla A (x) (gl_r (x) Lambda L) of a validated pair."""
    inner = matrix_wedge_dgla(pair.rank, pair.l_space, pair.theta)
    total = tensor_cdga_dgla(cdga, inner)
    total.hitchin_pair = pair
    return total


def sym_space(pair):
    """Sym^k L for k = 1..rank, every monomial placed in degree 1."""
    basis = []
    for k in range(1, pair.rank + 1):
        for combo in combinations_with_replacement(pair.l_space.names, k):
            basis.append((sym_name(combo), 1))
    return GradedSpace(basis)


def hitchin_target(pair, cdga):
    """The abelian dgla A (x) Sym L with differential d_A (x) id."""
    space = sym_space(pair)
    inner = Dgla(space, GradedMap(space, space, 1, {}), {})
    total = tensor_cdga_dgla(cdga, inner)
    total.hitchin_pair = pair
    return total


def complex_C_cohomology(pair, cdga):
    """Cohomology of the deformation complex; degree 1 carries first-order
    deformations and degree 2 their obstructions."""
    dgla = build_hitchin_dgla(pair, cdga)
    return complex_cohomology(dgla.space, dgla.d)


# ---------------------------------------------------------------------------
# Trace coefficients.  Matrices are sparse dicts (row, col) -> entry, each
# entry a dict from a Sym-monomial (a tuple of L-names in basis order) to a
# rational; matrix products keep matrix order, entries multiply by merging
# monomials.


def _merge_monomials(m1, m2, order):
    return tuple(sorted(m1 + m2, key=order.get))


def _mat_mul(m1, m2, order):
    out = {}
    for (i, j), e1 in m1.items():
        for (k, l), e2 in m2.items():
            if j != k:
                continue
            dest = out.setdefault((i, l), {})
            for mono1, c1 in e1.items():
                for mono2, c2 in e2.items():
                    key = _merge_monomials(mono1, mono2, order)
                    value = dest.get(key, ZERO) + c1 * c2
                    if value == 0:
                        dest.pop(key, None)
                    else:
                        dest[key] = value
    return {k: v for k, v in out.items() if v}


def _mat_trace(m):
    out = {}
    for (i, j), entry in m.items():
        if i != j:
            continue
        for mono, c in entry.items():
            value = out.get(mono, ZERO) + c
            if value == 0:
                out.pop(mono, None)
            else:
                out[mono] = value
    return out


def _theta_sym_matrix(pair):
    out = {}
    for i in range(pair.rank):
        for j in range(pair.rank):
            entry = {(l,): c for l, c in pair.theta[i][j].coeffs.items()}
            if entry:
                out[(i, j)] = entry
    return out


def _word_trace_sum(k, fmats, theta_mat, order):
    """Sum of traces of all length-k matrix words using each f once.

    Words are built by choosing an ordered placement of the f's among the k
    slots and filling the rest with theta; this is the coefficient of
    t_1...t_n in tr((theta + sum t_i f_i)^k).
    """
    n = len(fmats)
    total = {}
    for positions in permutations(range(k), n):
        slots = [theta_mat] * k
        for t, p in enumerate(positions):
            slots[p] = fmats[t]
        prod = slots[0]
        for m in slots[1:]:
            prod = _mat_mul(prod, m, order)
            if not prod:
                break
        else:
            for mono, c in _mat_trace(prod).items():
                value = total.get(mono, ZERO) + c
                if value == 0:
                    total.pop(mono, None)
                else:
                    total[mono] = value
    return total


def _cdga_multiply(cdga, x, y):
    out = GradedVector()
    for a, ca in x.coeffs.items():
        for b, cb in y.coeffs.items():
            out = out + cdga.product_basis(a, b).scale(ca * cb)
    return out


def g_coefficient(k, args, pair, cdga):
    """The multidegree-(1,...,1) trace coefficient on n arguments.

    Each argument is a pair (omega, f): omega a vector over the CDGA basis
    and f an r x r matrix of L-vectors.  The value is the product
    omega_1 ... omega_n tensored with the coefficient of t_1...t_n in
    tr((theta + sum t_i f_i)^k); with a single argument this is
    k tr(f theta^(k-1)).
    """
    if k < 1 or k > pair.rank:
        raise ValueError(f"power {k} outside 1..{pair.rank}")
    order = pair._l_order
    omega = GradedVector({cdga.unit: 1})
    fmats = []
    for om, f in args:
        om = om if isinstance(om, GradedVector) else GradedVector(om)
        omega = _cdga_multiply(cdga, omega, om)
        mat = {}
        for i in range(pair.rank):
            for j in range(pair.rank):
                vec = _entry_vector(f[i][j], pair.l_space)
                entry = {(l,): c for l, c in vec.coeffs.items()}
                if entry:
                    mat[(i, j)] = entry
        fmats.append(mat)
    if omega.is_zero():
        return GradedVector()
    trace = _word_trace_sum(k, fmats, _theta_sym_matrix(pair), order)
    out = GradedVector()
    for mono, c in trace.items():
        for a_name, ca in omega.coeffs.items():
            out = out + GradedVector({tensor_name(a_name, sym_name(mono)): c * ca})
    return out


def build_hitchin_morphism(pair, cdga):
    """The morphism h = (g^1, ..., g^r) between the induced structures.

    Components vanish on every letter whose matrix part is not in wedge
    degree one, and h_n = 0 for n > rank; on supported letters h_n collects
    the trace coefficients for k = n..rank with the CDGA parts multiplied
    out in front in argument order.  The returned morphism carries the
    built dgla, target, and letter decomposition as attributes.
    """
    source_dgla = build_hitchin_dgla(pair, cdga)
    target_dgla = hitchin_target(pair, cdga)
    source = linfty_from_dgla(source_dgla)
    target = linfty_from_dgla(target_dgla)
    order = pair._l_order
    theta_mat = _theta_sym_matrix(pair)

    letter_parts = {}
    for a_name in cdga.space.names:
        for l in pair.l_space.names:
            for i in range(1, pair.rank + 1):
                for j in range(1, pair.rank + 1):
                    key = tensor_name(a_name, matrix_name(i, j) + "^" + l)
                    letter_parts[key] = (a_name, i, j, l)

    def component(arity, word):
        parts = [letter_parts[name] for name in word]
        omega = GradedVector({cdga.unit: 1})
        for a_name, _, _, _ in parts:
            omega = _cdga_multiply(cdga, omega, GradedVector({a_name: 1}))
            if omega.is_zero():
                return None
        fmats = [{(i - 1, j - 1): {(l,): ONE}} for _, i, j, l in parts]
        out = GradedVector()
        for k in range(arity, pair.rank + 1):
            trace = _word_trace_sum(k, fmats, theta_mat, order)
            for mono, c in trace.items():
                for a_name, ca in omega.coeffs.items():
                    out = out + GradedVector(
                        {tensor_name(a_name, sym_name(mono)): c * ca}
                    )
        return out

    morphism = LInftyMorphism(
        source, target, component,
        max_weight=pair.rank, support=frozenset(letter_parts),
    )
    morphism.pair = pair
    morphism.cdga = cdga
    morphism.source_dgla = source_dgla
    morphism.target_dgla = target_dgla
    morphism.letter_parts = letter_parts
    morphism.target_weights = {
        tensor_name(a, sym_name(combo)): k
        for a in cdga.space.names
        for k in range(1, pair.rank + 1)
        for combo in combinations_with_replacement(pair.l_space.names, k)
    }
    return morphism


def _artin_entry_mul(e1, e2, algebra, cdga, order):
    out = {}
    for (mono1, a1, sym1), c1 in e1.items():
        for (mono2, a2, sym2), c2 in e2.items():
            mono = algebra.multiply_monomials(mono1, mono2)
            if mono is None:
                continue
            avec = cdga.product_basis(a1, a2)
            if avec.is_zero():
                continue
            sym = _merge_monomials(sym1, sym2, order)
            for a_name, ca in avec.coeffs.items():
                key = (mono, a_name, sym)
                value = out.get(key, ZERO) + c1 * c2 * ca
                if value == 0:
                    out.pop(key, None)
                else:
                    out[key] = value
    return out


def hitchin_map(x, morphism, algebra):
    """Trace powers of the deformed field: component k is
    tr((theta + y)^k) - tr(theta^k), y the wedge-degree-one part of x.

    The element x must satisfy the Maurer-Cartan equation.  The tuple is
    computed directly from the matrix powers and, independently, as the
    morphism pushforward of x; the polarization identity makes the two
    agree and the agreement is asserted.
    """
    pair, cdga = morphism.pair, morphism.cdga
    if not mc_residual(x, morphism.source_dgla, algebra).is_zero():
        raise ValueError("input is not a Maurer-Cartan element")
    order = pair._l_order
    r = pair.rank

    theta = {}
    for i in range(r):
        for j in range(r):
            for l, c in pair.theta[i][j].coeffs.items():
                theta.setdefault((i, j), {})[(algebra.unit, cdga.unit, (l,))] = c
    full = {k: dict(v) for k, v in theta.items()}
    for (mono, name), c in x.terms.items():
        part = morphism.letter_parts.get(name)
        if part is None:
            continue
        a_name, i, j, l = part
        entry = full.setdefault((i - 1, j - 1), {})
        key = (mono, a_name, (l,))
        entry[key] = entry.get(key, ZERO) + c

    def trace_power(mat, k):
        prod = mat
        for _ in range(k - 1):
            nxt = {}
            for (i, j), e1 in prod.items():
                for (p, q), e2 in mat.items():
                    if j != p:
                        continue
                    dest = nxt.setdefault((i, q), {})
                    merged = _artin_entry_mul(e1, e2, algebra, cdga, order)
                    for key, c in merged.items():
                        value = dest.get(key, ZERO) + c
                        if value == 0:
                            dest.pop(key, None)
                        else:
                            dest[key] = value
            prod = {k2: v for k2, v in nxt.items() if v}
        out = {}
        for (i, j), entry in prod.items():
            if i != j:
                continue
            for key, c in entry.items():
                value = out.get(key, ZERO) + c
                if value == 0:
                    out.pop(key, None)
                else:
                    out[key] = value
        return out

    sections = []
    for k in range(1, r + 1):
        delta = trace_power(full, k)
        for key, c in trace_power(theta, k).items():
            value = delta.get(key, ZERO) - c
            if value == 0:
                delta.pop(key, None)
            else:
                delta[key] = value
        terms = {}
        for (mono, a_name, sym), c in delta.items():
            if mono == algebra.unit:
                raise AssertionError("constant term survived the subtraction")
            terms[(mono, tensor_name(a_name, sym_name(sym)))] = c
        section = ArtinVector()
        section.terms = terms
        sections.append(section)

    push = pushforward_mc(morphism, x, algebra)
    split = [dict() for _ in range(r)]
    for (mono, name), c in push.terms.items():
        split[morphism.target_weights[name] - 1][(mono, name)] = c
    for k in range(r):
        if split[k] != sections[k].terms:
            raise AssertionError(
                f"trace power {k + 1} disagrees with the morphism pushforward"
            )
    return tuple(sections)


def obstruction_kernel_map(cocycle, morphism, target_cohomology=None):
    """Class of the weight-one image of a degree-2 cocycle in the target.

    On a letter w (x) f with f in wedge degree one the weight-one component
    is (k w (x) tr(f theta^(k-1)))_k; other letters map to zero.  The image
    is projected to degree-2 cohomology of the target complex and the
    coordinate tuple in that model is returned.
    """
    source_dgla = morphism.source_dgla
    if not cocycle.is_zero():
        if cocycle.homogeneous_degree(source_dgla.space) != 2:
            raise ValueError("expected a homogeneous degree-2 element")
    if not source_dgla.d(cocycle).is_zero():
        raise ValueError("input is not a cocycle")
    image = GradedVector()
    for name, c in cocycle.coeffs.items():
        image = image + morphism.component((name,)).scale(c)
    if target_cohomology is None:
        target = morphism.target_dgla
        target_cohomology = complex_cohomology(target.space, target.d)
    return target_cohomology.project(2, image)


def _fraction_matrix(rows):
    mat = tuple(tuple(as_fraction(v) for v in row) for row in rows)
    r = len(mat)
    if any(len(row) != r for row in mat):
        raise ValueError("expected a square matrix")
    return mat, r


def _num_mat_mul(m1, m2):
    r = len(m1)
    return tuple(
        tuple(sum(m1[i][p] * m2[p][j] for p in range(r)) for j in range(r))
        for i in range(r)
    )


def _num_commutator(m1, m2):
    r = len(m1)
    ab = _num_mat_mul(m1, m2)
    ba = _num_mat_mul(m2, m1)
    return tuple(
        tuple(ab[i][j] - ba[i][j] for j in range(r)) for i in range(r)
    )


def trace_commutator_oracle(a_rows, b_rows, k):
    """First-order trace invariance of conjugation directions.

    Expands (A + t[B, A])^k with polynomial entries, takes the coefficient
    of t, and checks the matrix identity  coefficient = [B, A^k]  together
    with the vanishing of its trace.  Both checks are exact; the report
    carries the failing positions if any.
    """
    a_mat, r = _fraction_matrix(a_rows)
    b_mat, r2 = _fraction_matrix(b_rows)
    if r != r2:
        raise ValueError("matrix sizes differ")
    if k < 1:
        raise ValueError("power must be >= 1")
    c_mat = _num_commutator(b_mat, a_mat)
    poly = tuple(
        tuple({0: a_mat[i][j], 1: c_mat[i][j]} for j in range(r))
        for i in range(r)
    )

    def poly_mul(p1, p2):
        out = tuple(tuple({} for _ in range(r)) for _ in range(r))
        for i in range(r):
            for j in range(r):
                dest = out[i][j]
                for p in range(r):
                    for d1, c1 in p1[i][p].items():
                        for d2, c2 in p2[p][j].items():
                            value = dest.get(d1 + d2, ZERO) + c1 * c2
                            if value == 0:
                                dest.pop(d1 + d2, None)
                            else:
                                dest[d1 + d2] = value
        return out

    power = poly
    for _ in range(k - 1):
        power = poly_mul(power, poly)
    t_coeff = tuple(
        tuple(power[i][j].get(1, ZERO) for j in range(r)) for i in range(r)
    )

    a_power = a_mat
    for _ in range(k - 1):
        a_power = _num_mat_mul(a_power, a_mat)
    expected = _num_commutator(b_mat, a_power)
    mismatches = [
        (i, j)
        for i in range(r)
        for j in range(r)
        if t_coeff[i][j] != expected[i][j]
    ]
    if mismatches:
        return CheckReport.failed("t-coefficient", tuple(mismatches), t_coeff)
    trace = sum(t_coeff[i][i] for i in range(r))
    if trace != 0:
        return CheckReport.failed("trace", (k,), trace)
    return CheckReport.passed()
