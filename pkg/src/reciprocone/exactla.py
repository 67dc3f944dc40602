"""Exact arbitrary-precision linear algebra on immutable tuples.

Vectors are tuples of ints or ``fractions.Fraction``; matrices are tuples
of row tuples.  Fractions are automatically kept in lowest terms with a
positive denominator, so no extra canonicalization is needed.  Every
operation is pure and returns new values.
"""

from fractions import Fraction
from math import gcd


class LinearAlgebraError(ValueError):
    pass


# ---------------------------------------------------------------------------
# vectors

def _same_length(u, v):
    if len(u) != len(v):
        raise LinearAlgebraError(
            "dimension mismatch: %d vs %d" % (len(u), len(v)))


def vec_add(u, v):
    _same_length(u, v)
    return tuple(a + b for a, b in zip(u, v))


def vec_sub(u, v):
    _same_length(u, v)
    return tuple(a - b for a, b in zip(u, v))


def vec_neg(u):
    return tuple(-a for a in u)


def vec_scale(c, u):
    return tuple(c * a for a in u)


def vec_dot(u, v):
    _same_length(u, v)
    return sum(a * b for a, b in zip(u, v))


def vec_sum(vectors, dim):
    total = (0,) * dim
    for v in vectors:
        total = vec_add(total, v)
    return total


def is_integer_vector(v):
    return all(isinstance(x, int) or (isinstance(x, Fraction) and x.denominator == 1)
               for x in v)


def as_integer_vector(v):
    if not is_integer_vector(v):
        raise LinearAlgebraError("vector is not integral: %r" % (v,))
    return tuple(int(x) for x in v)


def primitive_vector(v):
    """Divide an integer vector by the gcd of its entries; rejects zero."""
    g = 0
    for x in v:
        g = gcd(g, int(x))
    if g == 0:
        raise LinearAlgebraError("zero vector has no primitive representative")
    return tuple(int(x) // g for x in v)


def rational_to_primitive_integer(v):
    """Smallest positive integer multiple of a rational vector, made primitive."""
    entries = [Fraction(x) for x in v]
    scale = lcm_all(x.denominator for x in entries)
    return primitive_vector(tuple(int(x * scale) for x in entries))


def lcm(a, b):
    if a == 0 or b == 0:
        return 0
    return abs(a * b) // gcd(a, b)


def lcm_all(values):
    out = 1
    for v in values:
        out = lcm(out, v)
    return out


# ---------------------------------------------------------------------------
# matrices

def check_matrix(M):
    if not M or not M[0]:
        raise LinearAlgebraError("matrix must be nonempty")
    width = len(M[0])
    for row in M:
        if len(row) != width:
            raise LinearAlgebraError("ragged matrix")
    return len(M), width


def identity_matrix(d):
    return tuple(tuple(1 if i == j else 0 for j in range(d)) for i in range(d))


def transpose(M):
    check_matrix(M)
    return tuple(zip(*M))


def matrix_columns(M):
    return transpose(M)


def columns_to_matrix(cols):
    return tuple(zip(*cols))


def mat_vec(M, v):
    check_matrix(M)
    return tuple(vec_dot(row, v) for row in M)


def mat_mul(A, B):
    check_matrix(A)
    check_matrix(B)
    if len(A[0]) != len(B):
        raise LinearAlgebraError("incompatible shapes for product")
    Bt = transpose(B)
    return tuple(tuple(vec_dot(row, col) for col in Bt) for row in A)


def _det_bareiss(M):
    # Fraction-free elimination; exact for integer input.
    n = len(M)
    a = [list(row) for row in M]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _det_gauss(M):
    n = len(M)
    a = [[Fraction(x) for x in row] for row in M]
    sign = 1
    result = Fraction(1)
    for k in range(n):
        pivot = None
        for i in range(k, n):
            if a[i][k] != 0:
                pivot = i
                break
        if pivot is None:
            return Fraction(0)
        if pivot != k:
            a[k], a[pivot] = a[pivot], a[k]
            sign = -sign
        result *= a[k][k]
        inv = 1 / a[k][k]
        for i in range(k + 1, n):
            if a[i][k] != 0:
                factor = a[i][k] * inv
                for j in range(k, n):
                    a[i][j] -= factor * a[k][j]
    return sign * result


def det(M):
    """Exact determinant: Bareiss for integer input, rational elimination else."""
    m, n = check_matrix(M)
    if m != n:
        raise LinearAlgebraError("determinant requires a square matrix")
    if all(isinstance(x, int) for row in M for x in row):
        return _det_bareiss(M)
    value = _det_gauss(M)
    return int(value) if value.denominator == 1 else value


def rref(M, rhs=None):
    """Reduced row echelon form; returns (rows, rhs, pivot_columns)."""
    m, n = check_matrix(M)
    a = [[Fraction(x) for x in row] for row in M]
    b = [Fraction(x) for x in rhs] if rhs is not None else None
    pivots = []
    r = 0
    for c in range(n):
        pivot = None
        for i in range(r, m):
            if a[i][c] != 0:
                pivot = i
                break
        if pivot is None:
            continue
        a[r], a[pivot] = a[pivot], a[r]
        if b is not None:
            b[r], b[pivot] = b[pivot], b[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        if b is not None:
            b[r] *= inv
        for i in range(m):
            if i != r and a[i][c] != 0:
                factor = a[i][c]
                a[i] = [x - factor * y for x, y in zip(a[i], a[r])]
                if b is not None:
                    b[i] -= factor * b[r]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return a, b, pivots


def matrix_rank(M):
    _, _, pivots = rref(M)
    return len(pivots)


def solve_rational(M, b):
    """Solve M·x = b exactly.

    Returns the unique solution as a tuple of Fractions, or the string
    "no solution" / "underdetermined" when the system is inconsistent or
    rank-deficient.
    """
    m, n = check_matrix(M)
    if len(b) != m:
        raise LinearAlgebraError("right-hand side has wrong length")
    a, rhs, pivots = rref(M, b)
    rank = len(pivots)
    for i in range(rank, m):
        if rhs[i] != 0:
            return "no solution"
    if rank < n:
        return "underdetermined"
    x = [Fraction(0)] * n
    for i, c in enumerate(pivots):
        x[c] = rhs[i]
    return tuple(x)


def kernel_basis(M):
    """Basis of the rational right kernel of M, as Fraction tuples."""
    m, n = check_matrix(M)
    a, _, pivots = rref(M)
    pivot_set = set(pivots)
    free = [c for c in range(n) if c not in pivot_set]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for i, c in enumerate(pivots):
            v[c] = -a[i][f]
        basis.append(tuple(v))
    return tuple(basis)


def primitive_kernel_vector(M):
    """Primitive integer spanning vector of a one-dimensional kernel."""
    basis = kernel_basis(M)
    if len(basis) != 1:
        raise LinearAlgebraError("kernel is not one-dimensional (dim %d)" % len(basis))
    return rational_to_primitive_integer(basis[0])


# ---------------------------------------------------------------------------
# unimodular integer reductions

def row_reduce_unimodular(M):
    """Integer row echelon form H of M with unimodular L such that L·M = H."""
    m, n = check_matrix(M)
    rows = [list(as_integer_vector(r)) for r in M]
    L = [list(r) for r in identity_matrix(m)]
    r = 0
    for c in range(n):
        if r == m:
            break
        while True:
            pivot = None
            best = None
            for i in range(r, m):
                if rows[i][c] != 0 and (best is None or abs(rows[i][c]) < best):
                    pivot, best = i, abs(rows[i][c])
            if pivot is None:
                break
            if pivot != r:
                rows[r], rows[pivot] = rows[pivot], rows[r]
                L[r], L[pivot] = L[pivot], L[r]
            remainder = False
            for i in range(r + 1, m):
                if rows[i][c] != 0:
                    q = rows[i][c] // rows[r][c]
                    rows[i] = [x - q * y for x, y in zip(rows[i], rows[r])]
                    L[i] = [x - q * y for x, y in zip(L[i], L[r])]
                    if rows[i][c] != 0:
                        remainder = True
            if not remainder:
                break
        if rows[r][c] != 0:
            r += 1
    return (tuple(tuple(row) for row in L),
            tuple(tuple(row) for row in rows))


def int_inverse(U):
    """Exact inverse of an integer matrix with determinant ±1."""
    m, n = check_matrix(U)
    if m != n:
        raise LinearAlgebraError("inverse requires a square matrix")
    if abs(det(U)) != 1:
        raise LinearAlgebraError("matrix is not unimodular")
    cols = []
    for j in range(n):
        e = tuple(1 if i == j else 0 for i in range(n))
        x = solve_rational(U, e)
        cols.append(as_integer_vector(x))
    return columns_to_matrix(cols)


def extend_to_unimodular(vectors):
    """Complete independent primitive columns spanning a saturated sublattice
    to a unimodular matrix.

    The result U has the input vectors as its first k columns; when a
    completion column exists the determinant is fixed to +1.
    """
    if not vectors:
        raise LinearAlgebraError("need at least one vector")
    d = len(vectors[0])
    k = len(vectors)
    if k > d:
        raise LinearAlgebraError("more vectors than the ambient dimension")
    cleaned = []
    for v in vectors:
        iv = as_integer_vector(v)
        g = 0
        for x in iv:
            g = gcd(g, x)
        if g != 1:
            raise LinearAlgebraError("non-primitive vector: %r" % (v,))
        cleaned.append(iv)
    B = columns_to_matrix(cleaned)
    L, H = row_reduce_unimodular(B)
    index = 1
    for i in range(k):
        if H[i][i] == 0:
            raise LinearAlgebraError("vectors are linearly dependent")
        index *= abs(H[i][i])
    if index != 1:
        raise LinearAlgebraError(
            "vectors span a non-saturated sublattice (index %d)" % index)
    Linv = int_inverse(L)
    completion = [tuple(Linv[i][j] for i in range(d)) for j in range(k, d)]
    cols = cleaned + completion
    if k < d and det(columns_to_matrix(cols)) == -1:
        if d - k >= 2:
            cols[-1], cols[-2] = cols[-2], cols[-1]
        else:
            cols[-1] = vec_neg(cols[-1])
    U = columns_to_matrix(cols)
    if abs(det(U)) != 1:
        raise LinearAlgebraError("internal error: completion is not unimodular")
    return U


def integer_diagonal_form(M):
    """Unimodular L, R with L·M·R diagonal (nonnegative diagonal entries).

    The divisibility chain of the Smith form is not enforced; only
    diagonality, which is what lattice-index computations need.
    """
    m, n = check_matrix(M)
    a = [list(as_integer_vector(row)) for row in M]
    L = [list(r) for r in identity_matrix(m)]
    R = [list(r) for r in identity_matrix(n)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        L[i], L[j] = L[j], L[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in R:
            row[i], row[j] = row[j], row[i]

    def row_op(i, j, q):  # row_i -= q * row_j
        a[i] = [x - q * y for x, y in zip(a[i], a[j])]
        L[i] = [x - q * y for x, y in zip(L[i], L[j])]

    def col_op(i, j, q):  # col_i -= q * col_j
        for row in a:
            row[i] -= q * row[j]
        for row in R:
            row[i] -= q * row[j]

    t = 0
    while t < min(m, n):
        pivot = None
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if a[i][j] != 0 and (best is None or abs(a[i][j]) < best):
                    pivot, best = (i, j), abs(a[i][j])
        if pivot is None:
            break
        swap_rows(t, pivot[0])
        swap_cols(t, pivot[1])
        while True:
            dirty = False
            for i in range(t + 1, m):
                if a[i][t] != 0:
                    q = a[i][t] // a[t][t]
                    row_op(i, t, q)
                    if a[i][t] != 0:
                        swap_rows(i, t)
                        dirty = True
            for j in range(t + 1, n):
                if a[t][j] != 0:
                    q = a[t][j] // a[t][t]
                    col_op(j, t, q)
                    if a[t][j] != 0:
                        swap_cols(j, t)
                        dirty = True
            if not dirty:
                break
        t += 1
    for i in range(min(m, n)):
        if a[i][i] < 0:
            a[i] = [-x for x in a[i]]
            L[i] = [-x for x in L[i]]
    Lt = tuple(tuple(r) for r in L)
    Rt = tuple(tuple(r) for r in R)
    S = tuple(tuple(r) for r in a)
    if mat_mul(mat_mul(Lt, M), Rt) != S:
        raise LinearAlgebraError("internal error: diagonal form does not verify")
    return Lt, S, Rt
