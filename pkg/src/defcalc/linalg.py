"""Exact linear algebra over the rationals.

Small dense routines backing cohomology, obstruction projection and the
order-by-order solvers.  Matrices are lists of rows of Fractions.  Pivot
selection is always the first nonzero entry in scan order, so every routine
is deterministic for a fixed input.
"""

from __future__ import annotations

from fractions import Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


def matrix_from_columns(columns, nrows):
    """Assemble a matrix from a list of length-nrows column vectors."""
    return [[col[i] for col in columns] for i in range(nrows)]


def rref(rows):
    """Reduced row echelon form.

    Returns (reduced rows, pivot column indices).  The input is not mutated.
    """
    mat = [list(row) for row in rows]
    nrows = len(mat)
    ncols = len(mat[0]) if nrows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        pivot_row = None
        for i in range(r, nrows):
            if mat[i][c] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        mat[r], mat[pivot_row] = mat[pivot_row], mat[r]
        inv = ONE / mat[r][c]
        mat[r] = [x * inv for x in mat[r]]
        for i in range(nrows):
            if i != r and mat[i][c] != 0:
                factor = mat[i][c]
                mat[i] = [a - factor * b for a, b in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return mat, pivots


def rank(rows):
    return len(rref(rows)[1])


def nullspace(rows, ncols):
    """Basis of the kernel of the matrix, as column vectors of length ncols.

    One basis vector per free column, free variable set to 1, in increasing
    column order.
    """
    if ncols == 0:
        return []
    if not rows:
        return [[ONE if i == j else ZERO for i in range(ncols)] for j in range(ncols)]
    red, pivots = rref(rows)
    pivot_set = set(pivots)
    free_cols = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    for fc in free_cols:
        vec = [ZERO] * ncols
        vec[fc] = ONE
        for r, pc in enumerate(pivots):
            vec[pc] = -red[r][fc]
        basis.append(vec)
    return basis


def solve(rows, rhs):
    """One solution of A x = b, or None if the system is inconsistent.

    Free variables are set to zero, so the solution is deterministic.
    """
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    if nrows == 0:
        return [ZERO] * ncols
    aug = [list(row) + [rhs[i]] for i, row in enumerate(rows)]
    red, pivots = rref(aug)
    if ncols in pivots:
        return None
    sol = [ZERO] * ncols
    for r, pc in enumerate(pivots):
        sol[pc] = red[r][ncols]
    return sol


class PreparedSolve:
    """Row reduction of A done once, for repeated solves of A x = b.

    Eliminates A while carrying the same row operations on an identity
    block; solving is then a single matrix-vector product plus a
    consistency scan of the zero rows.  Free variables are set to zero.
    """

    def __init__(self, rows, ncols):
        nrows = len(rows)
        mat = [
            list(row) + [ONE if j == i else ZERO for j in range(nrows)]
            for i, row in enumerate(rows)
        ]
        pivots = []
        r = 0
        for c in range(ncols):
            pivot_row = None
            for i in range(r, nrows):
                if mat[i][c] != 0:
                    pivot_row = i
                    break
            if pivot_row is None:
                continue
            mat[r], mat[pivot_row] = mat[pivot_row], mat[r]
            inv = ONE / mat[r][c]
            mat[r] = [x * inv for x in mat[r]]
            for i in range(nrows):
                if i != r and mat[i][c] != 0:
                    factor = mat[i][c]
                    mat[i] = [a - factor * b for a, b in zip(mat[i], mat[r])]
            pivots.append(c)
            r += 1
            if r == nrows:
                break
        self.nrows = nrows
        self.ncols = ncols
        self.pivots = pivots
        self.transform = [row[ncols:] for row in mat]

    def solve(self, rhs):
        sol = [ZERO] * self.ncols
        rank_ = len(self.pivots)
        support = [j for j, v in enumerate(rhs) if v != 0]
        for i in range(self.nrows):
            row = self.transform[i]
            c = sum((row[j] * rhs[j] for j in support), ZERO)
            if i < rank_:
                sol[self.pivots[i]] = c
            elif c != 0:
                return None
        return sol


def extend_independent(base_cols, candidate_cols, nrows):
    """Indices of candidates that extend base_cols to a larger independent set.

    Scans candidates in order and keeps the greedy ones; deterministic.
    """
    kept = []
    current = list(base_cols)
    current_rank = rank(matrix_from_columns(current, nrows)) if current else 0
    for idx, cand in enumerate(candidate_cols):
        trial = matrix_from_columns(current + [cand], nrows)
        if rank(trial) > current_rank:
            kept.append(idx)
            current.append(cand)
            current_rank += 1
    return kept
