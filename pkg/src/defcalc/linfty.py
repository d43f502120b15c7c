"""L-infinity structures as coderivations of the reduced symmetric coalgebra.

All bookkeeping happens on the shifted space: a basis vector of degree i in
the underlying space has shifted degree i - 1, words are multisets of basis
names ordered by (shifted degree, name), and reordering letters costs the
Koszul sign of the shifted degrees.  A word repeating a letter of odd
shifted degree is zero.

Brackets q_k are stored on canonical words only; the coderivation and
coalgebra-morphism extensions below spell out the unshuffle formulas, and
the Maurer-Cartan series over an Artinian base are finite sums for the same
nilpotency reason as in the dgla calculus.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, combinations_with_replacement

from .artin import ArtinAlgebra, ArtinVector, validate_artin_vector
from .dgla import CheckReport
from .graded import GradedVector, koszul_sign

ZERO = Fraction(0)
ONE = Fraction(1)


def shifted_degrees(space):
    """Mapping basis name -> degree on the shifted space."""
    return {n: space.degree(n) - 1 for n in space.names}


def word_key(sdeg):
    return lambda name: (sdeg[name], name)


def normalize_word(names, sdeg):
    """Canonical form of a symmetric word: (sorted tuple, Koszul sign).

    Returns (None, 0) when the word vanishes because a letter of odd shifted
    degree repeats.
    """
    seq = list(names)
    key = word_key(sdeg)
    sign = 1
    for i in range(1, len(seq)):
        j = i
        while j > 0 and key(seq[j - 1]) > key(seq[j]):
            if sdeg[seq[j - 1]] % 2 and sdeg[seq[j]] % 2:
                sign = -sign
            seq[j - 1], seq[j] = seq[j], seq[j - 1]
            j -= 1
    for a, b in zip(seq, seq[1:]):
        if a == b and sdeg[a] % 2:
            return None, 0
    return tuple(seq), sign


def basis_words(space, max_weight, sdeg=None):
    """All nonzero canonical words of weight 1..max_weight, in scan order."""
    if sdeg is None:
        sdeg = shifted_degrees(space)
    letters = sorted(space.names, key=word_key(sdeg))
    out = []
    for n in range(1, max_weight + 1):
        for combo in combinations_with_replacement(letters, n):
            word, sign = normalize_word(combo, sdeg)
            if sign:
                out.append(word)
    return out


def sym_coproduct(word, sdeg):
    """Reduced coproduct of a canonical word.

    Returns the list of (left word, right word, sign) over all (k, n-k)
    unshuffles, 1 <= k <= n-1; n = 1 gives the empty list.  Signs are the
    Koszul signs of the unshuffle permutations.
    """
    n = len(word)
    degrees = [sdeg[name] for name in word]
    out = []
    for k in range(1, n):
        for subset in combinations(range(n), k):
            rest = [p for p in range(n) if p not in subset]
            perm = [p + 1 for p in subset] + [p + 1 for p in rest]
            eps = koszul_sign(perm, degrees)
            left = tuple(word[p] for p in subset)
            right = tuple(word[p] for p in rest)
            out.append((left, right, eps))
    return out


class LInftyStructure:
    """Finite graded space with brackets q_k, k >= 1, on canonical words.

    brackets maps arity k to a dict canonical word -> GradedVector.  Input
    keys may be in any order; they are canonicalized with the Koszul sign,
    and conflicting or wrong-degree values are rejected.  Each q_k must
    raise the shifted degree by exactly 1.
    """

    def __init__(self, space, brackets):
        self.space = space
        self.sdeg = shifted_degrees(space)
        table = {}
        for k, entries in brackets.items():
            k = int(k)
            if k < 1:
                raise ValueError("bracket arity must be >= 1")
            canon = {}
            for word, vec in entries.items():
                if len(word) != k:
                    raise ValueError(f"arity {k} entry has word of length {len(word)}")
                for name in word:
                    if name not in space:
                        raise ValueError(f"unknown basis name {name!r} in bracket word")
                if not isinstance(vec, GradedVector):
                    vec = GradedVector(vec)
                cword, sign = normalize_word(word, self.sdeg)
                if sign == 0:
                    if not vec.is_zero():
                        raise ValueError(
                            f"bracket value on the vanishing word {word!r} must be zero"
                        )
                    continue
                cvec = vec.scale(sign)
                if cword in canon and canon[cword] != cvec:
                    raise ValueError(
                        f"inconsistent symmetric values for word {cword!r}"
                    )
                want = sum(self.sdeg[name] for name in cword) + 1
                for out_name in cvec.coeffs:
                    if out_name not in space:
                        raise ValueError(
                            f"bracket output uses unknown name {out_name!r}"
                        )
                    if self.sdeg[out_name] != want:
                        raise ValueError(
                            f"q_{k} is not homogeneous of shifted degree +1 on "
                            f"{cword!r}: output {out_name!r}"
                        )
                if not cvec.is_zero():
                    canon[cword] = cvec
            if canon:
                table[k] = canon
        self.brackets = table

    def max_arity(self):
        return max(self.brackets, default=0)

    def bracket_value(self, k, word):
        table = self.brackets.get(k)
        if table is None:
            return None
        return table.get(word)

    def apply_bracket(self, word):
        """q_n on a single canonical word of weight n (zero vector if absent)."""
        vec = self.bracket_value(len(word), word)
        return vec if vec is not None else GradedVector()


def linfty_from_dgla(dgla):
    """The structure with q_1 = -d, q_2(x . y) = (-1)^|x| [x, y], q_k = 0.

    Degrees in the sign are unshifted; the two fixed conventions make the
    codifferential condition equivalent to the dgla axioms.
    """
    space = dgla.space
    sdeg = shifted_degrees(space)
    q1 = {}
    for name in space.names:
        col = dgla.d.column(name)
        if not col.is_zero():
            q1[(name,)] = -col
    q2 = {}
    letters = sorted(space.names, key=word_key(sdeg))
    for a, b in combinations_with_replacement(letters, 2):
        word, sign = normalize_word((a, b), sdeg)
        if sign == 0:
            continue
        val = dgla.bracket_basis(a, b).scale(sign * (-1 if space.degree(a) % 2 else 1))
        if not val.is_zero():
            q2[word] = val
    brackets = {}
    if q1:
        brackets[1] = q1
    if q2:
        brackets[2] = q2
    return LInftyStructure(space, brackets)


def coderivation_extend(structure, element):
    """Coderivation determined by the brackets, applied to a coalgebra element.

    On a word v1 . ... . vn the value is the sum over k and (k, n-k)
    unshuffles of  sign . q_k(chosen k letters) . (remaining letters).
    element is a dict word -> coefficient; so is the result.
    """
    sdeg = structure.sdeg
    out = {}
    for word, coeff in element.items():
        n = len(word)
        degrees = [sdeg[name] for name in word]
        for k in structure.brackets:
            if k > n:
                continue
            for subset in combinations(range(n), k):
                block = tuple(word[p] for p in subset)
                # canonical input words have sorted blocks, found directly;
                # the fallback keeps arbitrary orderings correct too
                vec = structure.bracket_value(k, block)
                bsign = 1
                if vec is None:
                    cblock, bsign = normalize_word(block, sdeg)
                    if bsign == 0 or cblock == block:
                        continue
                    vec = structure.bracket_value(k, cblock)
                    if vec is None:
                        continue
                rest = [p for p in range(n) if p not in subset]
                perm = [p + 1 for p in subset] + [p + 1 for p in rest]
                eps = koszul_sign(perm, degrees)
                tail = tuple(word[p] for p in rest)
                for name, c in vec.coeffs.items():
                    new_word, s = normalize_word((name,) + tail, sdeg)
                    if s == 0:
                        continue
                    value = coeff * eps * bsign * c * s
                    acc = out.get(new_word, ZERO) + value
                    if acc == 0:
                        out.pop(new_word, None)
                    else:
                        out[new_word] = acc
    return out


def check_codifferential(structure, weight):
    """Q . Q = 0 on every nonzero basis word up to the given weight.

    Q . Q is itself a coderivation, so it vanishes on a word exactly when
    its weight-one corestrictions vanish on that word and on all words of
    lower weight; the scan covers those, and only the corestriction
        sum over terms v of Q(w) of  q_{|v|}(v)
    is evaluated.  Failure reports the word and the nonzero vector.
    """
    for word in basis_words(structure.space, weight, structure.sdeg):
        total = GradedVector()
        for v, c in coderivation_extend(structure, {word: ONE}).items():
            total = total + structure.apply_bracket(v).scale(c)
        if not total.is_zero():
            return CheckReport.failed("codifferential", word, total)
    return CheckReport.passed()


def _set_partitions(n):
    """Partitions of range(n) into blocks; blocks and block lists sorted."""
    if n == 0:
        return [[]]
    out = []

    def grow(pos, blocks):
        if pos == n:
            out.append([tuple(b) for b in blocks])
            return
        for b in blocks:
            b.append(pos)
            grow(pos + 1, blocks)
            b.pop()
        blocks.append([pos])
        grow(pos + 1, blocks)
        blocks.pop()

    grow(0, [])
    return out


class LInftyMorphism:
    """Weighted components f_k of a morphism between two structures.

    components is either a dict arity -> (dict canonical word -> target
    GradedVector) or a callable (arity, word) -> vector or None, evaluated
    lazily and cached.  support, when given, is the set of source letters on
    which components may be nonzero; any block containing another letter
    contributes nothing, which evaluation uses as an exact shortcut.
    """

    def __init__(self, source, target, components, max_weight=None, support=None):
        self.source = source
        self.target = target
        self.support = None if support is None else frozenset(support)
        self._cache = {}
        if callable(components):
            self._generator = components
            if max_weight is None:
                raise ValueError("generator components need an explicit max_weight")
            self.max_weight = max_weight
        else:
            self._generator = None
            table = {}
            for k, entries in components.items():
                k = int(k)
                canon = {}
                for word, vec in entries.items():
                    cword, sign = normalize_word(word, source.sdeg)
                    if sign == 0:
                        continue
                    if not isinstance(vec, GradedVector):
                        vec = GradedVector(vec)
                    canon[cword] = vec.scale(sign)
                table[k] = canon
            self._table = table
            self.max_weight = max_weight if max_weight is not None else max(
                table, default=0
            )

    def component(self, word):
        """f_k evaluated on a canonical word, k = len(word)."""
        k = len(word)
        if k > self.max_weight:
            return GradedVector()
        if self.support is not None and any(n not in self.support for n in word):
            return GradedVector()
        if self._generator is None:
            vec = self._table.get(k, {}).get(word)
            return vec if vec is not None else GradedVector()
        cached = self._cache.get(word)
        if cached is None:
            vec = self._generator(k, word)
            cached = vec if vec is not None else GradedVector()
            want = sum(self.source.sdeg[n] for n in word)
            for out_name in cached.coeffs:
                if self.target.sdeg[out_name] != want:
                    raise ValueError(
                        f"morphism component on {word!r} is not degree 0: "
                        f"output {out_name!r}"
                    )
            self._cache[word] = cached
        return cached


def _sym_multiply(element, vector, sdeg):
    """Append one target-space vector to each word of a coalgebra element."""
    out = {}
    for word, coeff in element.items():
        for name, c in vector.coeffs.items():
            new_word, s = normalize_word(word + (name,), sdeg)
            if s == 0:
                continue
            acc = out.get(new_word, ZERO) + coeff * c * s
            if acc == 0:
                out.pop(new_word, None)
            else:
                out[new_word] = acc
    return out


def _expand_partitions(morphism, word, coeff, out, block_count=None):
    """Accumulate the set-partition expansion of F on one word into out,
    optionally keeping only partitions with a fixed number of blocks."""
    if morphism.support is not None and any(
        n not in morphism.support for n in word
    ):
        return
    src_deg = morphism.source.sdeg
    tgt_deg = morphism.target.sdeg
    n = len(word)
    degrees = [src_deg[name] for name in word]
    for blocks in _set_partitions(n):
        if block_count is not None and len(blocks) != block_count:
            continue
        perm = [p + 1 for block in blocks for p in block]
        eps = koszul_sign(perm, degrees)
        partial = {(): ONE}
        for block in blocks:
            vec = morphism.component(tuple(word[p] for p in block))
            if vec.is_zero():
                partial = None
                break
            partial = _sym_multiply(partial, vec, tgt_deg)
            if not partial:
                partial = None
                break
        if partial is None:
            continue
        for new_word, c in partial.items():
            acc = out.get(new_word, ZERO) + coeff * eps * c
            if acc == 0:
                out.pop(new_word, None)
            else:
                out[new_word] = acc


def morphism_extend(morphism, element):
    """Coalgebra morphism determined by the components, on an element.

    On a word the value is the sum over unordered set partitions of the
    letters of  sign . f(block 1) . ... . f(block s), the sign being the
    Koszul reordering of the letters into the concatenated blocks; the
    weight 2 case reads f2(v1 . v2) + f1(v1) . f1(v2).
    """
    out = {}
    for word, coeff in element.items():
        _expand_partitions(morphism, word, coeff, out)
    return out


def check_linfty_morphism(morphism, weight):
    """F . Q = Q-hat . F on every source basis word up to the given weight.

    The defect F . Q - Q-hat . F is a coderivation along F, so on the words
    scanned it vanishes exactly when its weight-one corestriction does;
    per word that corestriction reads
        sum over terms v of Q(w) of  f_{|v|}(v)
          -  sum over arities j of  q-hat_j(weight-j part of F(w)),
    the per-arity identity the full coalgebra equation projects to.
    """
    source, target = morphism.source, morphism.target
    for word in basis_words(source.space, weight, source.sdeg):
        lhs = GradedVector()
        for v, c in coderivation_extend(source, {word: ONE}).items():
            lhs = lhs + morphism.component(v).scale(c)
        rhs = GradedVector()
        for j in target.brackets:
            if j > len(word):
                continue
            part = {}
            _expand_partitions(morphism, word, ONE, part, block_count=j)
            for v, c in part.items():
                rhs = rhs + target.apply_bracket(v).scale(c)
        if lhs != rhs:
            return CheckReport.failed("morphism", word, lhs - rhs)
    return CheckReport.passed()


# ---------------------------------------------------------------------------
# Maurer-Cartan theory over an Artinian base.


def _validate_mc_element(x, structure, algebra):
    validate_artin_vector(x, algebra, structure.space, degree=1)


def _power_step(power, x, sdeg, algebra):
    """One more symmetric factor of x, with coefficient multiplication."""
    out = {}
    for (word, mono), c in power.items():
        for (m2, name), c2 in x.terms.items():
            mono2 = algebra.multiply_monomials(mono, m2)
            if mono2 is None:
                continue
            new_word, s = normalize_word(word + (name,), sdeg)
            if s == 0:
                continue
            key = (new_word, mono2)
            acc = out.get(key, ZERO) + c * c2 * s
            if acc == 0:
                out.pop(key, None)
            else:
                out[key] = acc
    return out


def linfty_mc_residual(x, structure, algebra):
    """sum_n q_n(x^n) / n! for a shifted-degree-0 element with nilpotent
    coefficients; nilpotency makes the sum finite."""
    _validate_mc_element(x, structure, algebra)
    sdeg = structure.sdeg
    terms = {}
    power = {((), algebra.unit): ONE}
    n = 0
    factorial = 1
    while power:
        n += 1
        factorial *= n
        power = _power_step(power, x, sdeg, algebra)
        table = structure.brackets.get(n)
        if not table:
            continue
        inv = Fraction(1, factorial)
        for (word, mono), c in power.items():
            vec = table.get(word)
            if vec is None:
                continue
            for name, vc in vec.coeffs.items():
                key = (mono, name)
                acc = terms.get(key, ZERO) + c * vc * inv
                if acc == 0:
                    terms.pop(key, None)
                else:
                    terms[key] = acc
    out = ArtinVector()
    out.terms = terms
    return out


def pushforward_mc(morphism, x, algebra):
    """sum_n f_n(x^n) / n! for a Maurer-Cartan x; the image is checked to
    satisfy the target equation exactly and returned."""
    if not linfty_mc_residual(x, morphism.source, algebra).is_zero():
        raise ValueError("input does not satisfy the source Maurer-Cartan equation")
    sdeg = morphism.source.sdeg
    terms = {}
    power = {((), algebra.unit): ONE}
    n = 0
    factorial = 1
    while power and n < morphism.max_weight:
        n += 1
        factorial *= n
        power = _power_step(power, x, sdeg, algebra)
        inv = Fraction(1, factorial)
        for (word, mono), c in power.items():
            vec = morphism.component(word)
            if vec.is_zero():
                continue
            for name, vc in vec.coeffs.items():
                key = (mono, name)
                acc = terms.get(key, ZERO) + c * vc * inv
                if acc == 0:
                    terms.pop(key, None)
                else:
                    terms[key] = acc
    out = ArtinVector()
    out.terms = terms
    if not linfty_mc_residual(out, morphism.target, algebra).is_zero():
        raise ValueError(
            "pushforward failed the target Maurer-Cartan equation; the supplied "
            "components do not form a morphism at the required weight"
        )
    return out


# ---------------------------------------------------------------------------
# Homotopy paths: elements of V[t, dt] with polynomial coefficients.


class PolyPath:
    """Path z(t) = z0(t) + dt z1(t) with Artinian-coefficient values.

    even maps t-degree -> coefficient of t^m in z0 (shifted degree 0);
    odd maps t-degree -> coefficient of t^m in z1 (shifted degree -1).
    """

    def __init__(self, even, odd):
        self.even = {int(m): v for m, v in even.items() if not v.is_zero()}
        self.odd = {int(m): v for m, v in odd.items() if not v.is_zero()}

    def max_t_degree(self):
        return max([*self.even, *self.odd], default=0)

    def endpoint(self, at_one):
        """z0(0) or z0(1)."""
        if not at_one:
            return self.even.get(0, ArtinVector())
        total = ArtinVector()
        for v in self.even.values():
            total = total + v
        return total


def _parameter_extension(algebra, max_degree):
    """The algebra with one extra nilpotent-free polynomial variable, truncated
    far enough that no product in the verification overflows."""
    var = "t"
    while var in algebra.variables:
        var += "_"
    monos = [m + (j,) for m in algebra.monomials for j in range(max_degree + 1)]
    return ArtinAlgebra(algebra.variables + (var,), monos)


def _embed_path_part(part, algebra_ext):
    out = {}
    for tdeg, vec in part.items():
        for (mono, name), c in vec.terms.items():
            out[(mono + (tdeg,), name)] = c
    v = ArtinVector()
    v.terms = out
    return v


def _t_derivative(x):
    out = {}
    for (mono, name), c in x.terms.items():
        j = mono[-1]
        if j == 0:
            continue
        key = (mono[:-1] + (j - 1,), name)
        out[key] = out.get(key, ZERO) + j * c
    v = ArtinVector()
    v.terms = out
    return v


def verify_homotopy_witness(path, x, y, structure, algebra):
    """Check that a supplied path realizes a homotopy from x to y.

    Conditions, each exact: the endpoints are x and y; z0(t) satisfies the
    Maurer-Cartan equation identically in t; and the dt component
        dz0/dt + sum_{n >= 1} q_n(z1 . z0^(n-1)) / (n-1)!  =  0.
    The sign of the dt term is the one fixed by expanding the equation for
    two-bracket structures, where it reads dz0/dt = d z1 + [z0, z1].
    """
    _validate_mc_element(x, structure, algebra)
    _validate_mc_element(y, structure, algebra)
    sdeg = structure.sdeg
    for tdeg, vec in path.even.items():
        validate_artin_vector(vec, algebra, structure.space, degree=1)
    for tdeg, vec in path.odd.items():
        validate_artin_vector(vec, algebra, structure.space, degree=0)

    if path.endpoint(False) != x:
        return CheckReport.failed("endpoint-0", (), path.endpoint(False) - x)
    if path.endpoint(True) != y:
        return CheckReport.failed("endpoint-1", (), path.endpoint(True) - y)

    bound = max(1, path.max_t_degree()) * max(1, algebra.nilpotency_order - 1) + 1
    ext = _parameter_extension(algebra, bound)
    z0 = _embed_path_part(path.even, ext)
    z1 = _embed_path_part(path.odd, ext)

    residual = linfty_mc_residual(z0, structure, ext)
    if not residual.is_zero():
        return CheckReport.failed("path-mc", (), residual)

    dt_part = _t_derivative(z0)
    power = {((), ext.unit): ONE}
    n = 0
    factorial = 1
    while power:
        n += 1
        if n > 1:
            factorial *= n - 1
        table = structure.brackets.get(n)
        mixed = _power_step(power, z1, sdeg, ext)
        if table and mixed:
            inv = Fraction(1, factorial)
            add = {}
            for (word, mono), c in mixed.items():
                vec = table.get(word)
                if vec is None:
                    continue
                for name, vc in vec.coeffs.items():
                    key = (mono, name)
                    add[key] = add.get(key, ZERO) + c * vc * inv
            extra = ArtinVector()
            extra.terms = {k: v for k, v in add.items() if v != 0}
            dt_part = dt_part + extra
        power = _power_step(power, z0, sdeg, ext)
    if not dt_part.is_zero():
        return CheckReport.failed("path-dt", (), dt_part)
    return CheckReport.passed()


def abelian_homotopy_witness(x, y, structure, algebra):
    """Linear path construction, abelian structures only.

    The path x + t (y - x) + dt w is a homotopy witness exactly when
    q_1(w) = x - y; that equation is solved per monomial, and None is
    returned when some monomial has no solution.
    """
    if any(k >= 2 for k in structure.brackets):
        raise ValueError("linear witness construction requires an abelian structure")
    _validate_mc_element(x, structure, algebra)
    _validate_mc_element(y, structure, algebra)
    from . import linalg

    space = structure.space
    source_names = space.names_of_degree(0)
    target_names = space.names_of_degree(1)
    q1 = structure.brackets.get(1, {})
    rows = [
        [q1.get((src,), GradedVector())[tgt] for src in source_names]
        for tgt in target_names
    ]
    prepared = linalg.PreparedSolve(rows, len(source_names))
    diff = x - y
    odd_terms = {}
    for mono in diff.monomials_present():
        vec = diff.coefficient_vector(mono)
        sol = prepared.solve(vec.to_dense(target_names))
        if sol is None:
            return None
        for name, c in zip(source_names, sol):
            if c != 0:
                odd_terms[(mono, name)] = c
    w = ArtinVector()
    w.terms = odd_terms
    return PolyPath(even={0: x, 1: y - x}, odd={0: w})
