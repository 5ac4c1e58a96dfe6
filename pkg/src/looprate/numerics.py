"""Two numeric backends and the dense linear algebra the rest of the package needs.

Exact matrices are plain ``list[list[Fraction]]``; float matrices are 2-D
``numpy`` arrays.  The backend is read off the container type, and an exact
matrix must not contain floats (mixing is rejected at the boundary rather
than silently promoted).

Exact determinants and solves use Bareiss fraction-free elimination on an
integer-scaled copy, so intermediate values stay integral.
"""
from fractions import Fraction
from math import lcm

import numpy as np
import scipy.sparse.linalg as spla

from .errors import IndexOutOfRange, NonSquare, Singular

EXACT = "exact"
FLOAT = "float"

# switch-over size for automatic backend selection
EXACT_MAX_VERTICES = 64
FLOAT_TOL = 1e-9


def backend_of(M):
    if isinstance(M, np.ndarray):
        return FLOAT
    return EXACT


def choose_backend(n_vertices, backend=None):
    if backend is not None:
        if backend not in (EXACT, FLOAT):
            raise ValueError(f"unknown backend {backend!r}")
        return backend
    return EXACT if n_vertices <= EXACT_MAX_VERTICES else FLOAT


def to_scalar(x, backend):
    """Convert a weight or entry to the scalar type of ``backend``."""
    if backend == FLOAT:
        return float(x)
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, float, str)):
        return Fraction(x)
    # sympy rationals and similar expose p/q
    return Fraction(int(x.p), int(x.q))


def exact_matrix(rows):
    out = []
    for row in rows:
        new = []
        for x in row:
            if isinstance(x, (float, np.floating)):
                raise TypeError("float entry in exact matrix")
            new.append(x if isinstance(x, Fraction) else Fraction(x))
        out.append(new)
    return out


def shape(M):
    if isinstance(M, np.ndarray):
        return M.shape
    return (len(M), len(M[0]) if M else 0)


def _integer_rows(rows):
    """Scale each row to integers; returns (int rows, per-row scale)."""
    out, scales = [], []
    for row in rows:
        m = lcm(*(x.denominator for x in row)) if row else 1
        out.append([int(x * m) for x in row])
        scales.append(m)
    return out, scales


def _bareiss(a, n):
    """In-place Bareiss forward elimination on the first ``n`` columns.

    ``a`` may carry extra augmented columns.  Returns the sign of the row
    permutation, or 0 if the leading block is singular.
    """
    sign = 1
    prev = 1
    width = len(a[0]) if a else 0
    for k in range(n):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        pk = a[k][k]
        rowk = a[k]
        for i in range(k + 1, n):
            rowi = a[i]
            aik = rowi[k]
            for j in range(k + 1, width):
                rowi[j] = (rowi[j] * pk - aik * rowk[j]) // prev
            rowi[k] = 0
        prev = pk
    return sign


def determinant(M):
    """Determinant of a square matrix.  The 0x0 determinant is 1."""
    rows, cols = shape(M)
    if rows != cols:
        raise NonSquare(f"{rows}x{cols} matrix has no determinant")
    if rows == 0:
        return 1.0 if backend_of(M) == FLOAT else Fraction(1)
    if backend_of(M) == FLOAT:
        return float(np.linalg.det(M))
    a, scales = _integer_rows(exact_matrix(M))
    sign = _bareiss(a, rows)
    if sign == 0:
        return Fraction(0)
    scale = 1
    for s in scales:
        scale *= s
    return Fraction(sign * a[rows - 1][rows - 1], scale)


def integer_determinant(a):
    """Determinant of a square integer matrix (list of lists), as an int."""
    n = len(a)
    if n == 0:
        return 1
    if n == 1:
        return a[0][0]
    if n == 2:
        return a[0][0] * a[1][1] - a[0][1] * a[1][0]
    work = [list(r) for r in a]
    sign = _bareiss(work, n)
    return sign * work[n - 1][n - 1] if sign else 0


def solve(M, b):
    """Solve ``M x = b``.

    ``b`` is a column (flat sequence) or a matrix of right-hand sides; the
    result has the same layout.
    """
    n, m = shape(M)
    if n != m:
        raise NonSquare(f"{n}x{m} system")
    if backend_of(M) == FLOAT:
        B = np.asarray(b, dtype=float)
        if n == 0:
            return B.copy()
        try:
            x = np.linalg.solve(M, B)
        except np.linalg.LinAlgError as exc:
            raise Singular(str(exc)) from None
        resid = np.linalg.norm(M @ x - B)
        if not np.isfinite(resid) or resid > 1e-10 * max(np.linalg.norm(B), 1.0):
            raise Singular(f"residual {resid:.3g} too large")
        return x

    flat = bool(b) and not isinstance(b[0], (list, tuple))
    B = [[x] for x in b] if flat else [list(r) for r in b]
    if len(B) != n:
        raise IndexOutOfRange("right-hand side has wrong length")
    A = exact_matrix(M)
    B = exact_matrix(B)
    k = len(B[0]) if B else 0
    aug, _ = _integer_rows([A[i] + B[i] for i in range(n)])
    if n and _bareiss(aug, n) == 0:
        raise Singular("matrix is singular")
    X = [[Fraction(0)] * k for _ in range(n)]
    for i in range(n - 1, -1, -1):
        row = aug[i]
        piv = row[i]
        for c in range(k):
            acc = Fraction(row[n + c])
            for j in range(i + 1, n):
                if row[j]:
                    acc -= row[j] * X[j][c]
            X[i][c] = acc / piv
    if flat:
        return [r[0] for r in X]
    return X


def inverse(M):
    n, m = shape(M)
    if n != m:
        raise NonSquare(f"{n}x{m} matrix has no inverse")
    if backend_of(M) == FLOAT:
        return solve(M, np.eye(n))
    ident = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    return solve(M, ident)


def submatrix_minor(M, rows=(), cols=()):
    """Copy of ``M`` with the listed rows and columns deleted."""
    nr, nc = shape(M)
    rows, cols = set(rows), set(cols)
    for r in rows:
        if not 0 <= r < nr:
            raise IndexOutOfRange(f"row {r} not in 0..{nr - 1}")
    for c in cols:
        if not 0 <= c < nc:
            raise IndexOutOfRange(f"column {c} not in 0..{nc - 1}")
    keep_r = [i for i in range(nr) if i not in rows]
    keep_c = [j for j in range(nc) if j not in cols]
    if backend_of(M) == FLOAT:
        return M[np.ix_(keep_r, keep_c)].copy()
    return [[M[i][j] for j in keep_c] for i in keep_r]


def principal(M, idx):
    """Principal submatrix on the index list ``idx`` (rows and columns kept)."""
    if backend_of(M) == FLOAT:
        return M[np.ix_(idx, idx)]
    return [[M[i][j] for j in idx] for i in idx]


def pcg(A, b, tol=1e-10, maxiter=None, diag=None):
    """Jacobi-preconditioned conjugate gradients for SPD ``A`` (scipy's cg).

    ``A`` is anything supporting ``A @ x`` (dense or scipy sparse).  Stops
    when ``||r|| < tol * ||b||``.
    """
    b = np.asarray(b, dtype=float)
    n = b.shape[0]
    if diag is None:
        diag = np.asarray(A.diagonal(), dtype=float)
    inv_d = 1.0 / diag
    M = spla.LinearOperator((n, n), matvec=lambda r: inv_d * r)
    maxiter = maxiter or 10 * n
    x, info = spla.cg(A, b, rtol=tol, atol=0.0, maxiter=maxiter, M=M)
    if info != 0:
        raise Singular(f"conjugate gradients did not converge in {maxiter} iterations")
    return x
