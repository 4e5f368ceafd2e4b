"""Exact linear algebra over a :class:`~skewclifford.field.Field`.

Small systems use plain lists of codes; large or batched systems go through
numpy with the field's vectorised operations.  Every reduction uses the same
pivot policy: leftmost column first, first eligible row within a column.
"""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np

from .field import Field, enumerate_projective, normalize_projective, projective_count


def rref(rows: Sequence[Sequence[int]], F: Field) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form; zero rows dropped.  Returns (rows, pivot columns)."""
    R = [list(r) for r in rows]
    if not R:
        return [], []
    ncols = len(R[0])
    pivots: list[int] = []
    top = 0
    for col in range(ncols):
        piv = next((i for i in range(top, len(R)) if R[i][col]), None)
        if piv is None:
            continue
        R[top], R[piv] = R[piv], R[top]
        inv = F.inv(R[top][col])
        row = [F.mul(inv, x) for x in R[top]]
        R[top] = row
        for i in range(len(R)):
            if i != top and R[i][col]:
                c = R[i][col]
                R[i] = [F.sub(x, F.mul(c, y)) for x, y in zip(R[i], row)]
        pivots.append(col)
        top += 1
        if top == len(R):
            break
    return R[:top], pivots


def rank(rows: Sequence[Sequence[int]], F: Field) -> int:
    return len(rref(rows, F)[1])


def nullspace(rows: Sequence[Sequence[int]], F: Field, ncols: int) -> list[list[int]]:
    """Basis of {x : A x = 0}, one vector per free column, in column order."""
    R, pivots = rref(rows, F) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [0] * ncols
        x[f] = 1
        for r, pc in zip(R, pivots):
            x[pc] = F.neg(r[f])
        basis.append(x)
    return basis


def left_nullspace(columns_matrix: Sequence[Sequence[int]], F: Field) -> list[list[int]]:
    """Basis (row-reduced) of {y : y^T A = 0} for an m x n matrix A given by rows."""
    m = len(columns_matrix)
    if m == 0:
        return []
    n = len(columns_matrix[0])
    transposed = [[columns_matrix[i][j] for i in range(m)] for j in range(n)]
    basis = nullspace(transposed, F, m)
    return rref(basis, F)[0] if basis else []


def solve(rows: Sequence[Sequence[int]], rhs: Sequence[int], F: Field) -> list[int] | None:
    """One solution of A x = rhs (free variables set to zero), or None."""
    if not rows:
        return None if any(rhs) else []
    ncols = len(rows[0])
    R, pivots = rref([list(r) + [b] for r, b in zip(rows, rhs)], F)
    if pivots and pivots[-1] == ncols:
        return None
    x = [0] * ncols
    for r, pc in zip(R, pivots):
        x[pc] = r[ncols]
    return x


def projective_points_of_span(basis: Sequence[Sequence[int]], F: Field):
    """All points of P(span(basis)), normalised, sorted lexicographically."""
    d = len(basis)
    if d == 0:
        return []
    n = len(basis[0])
    pts = set()
    for coeffs in enumerate_projective(F, d):
        v = [0] * n
        for c, b in zip(coeffs, basis):
            if c:
                v = [F.add(x, F.mul(c, y)) for x, y in zip(v, b)]
        pts.add(normalize_projective(F, v)[0])
    return sorted(pts)


# -- numpy ----------------------------------------------------------------

def np_rref(M: np.ndarray, F: Field) -> tuple[np.ndarray, list[int]]:
    """RREF of a 2-d int64 array of codes (returns a copy, zero rows kept at bottom)."""
    M = np.array(M, dtype=np.int64, copy=True)
    nrows, ncols = M.shape
    pivots: list[int] = []
    top = 0
    for col in range(ncols):
        if top == nrows:
            break
        nz = np.nonzero(M[top:, col])[0]
        if len(nz) == 0:
            continue
        piv = top + int(nz[0])
        if piv != top:
            M[[top, piv]] = M[[piv, top]]
        M[top] = F.vmul(M[top], F.inv(int(M[top, col])))
        factors = M[:, col].copy()
        factors[top] = 0
        rows = np.nonzero(factors)[0]
        if len(rows):
            M[rows] = F.vsub(M[rows], F.vmul(factors[rows, None], M[top][None, :]))
        pivots.append(col)
        top += 1
    return M, pivots


def np_rank(M: np.ndarray, F: Field) -> int:
    if M.size == 0:
        return 0
    return len(np_rref(M, F)[1])


def batched_rref(M: np.ndarray, F: Field) -> tuple[np.ndarray, np.ndarray]:
    """Row-reduce a stack of matrices of shape (B, R, C) independently.

    Returns the reduced stack and the per-matrix rank.
    """
    M = np.array(M, dtype=np.int64, copy=True)
    B, R, C = M.shape
    rank = np.zeros(B, dtype=np.int64)
    rows = np.arange(R)
    for col in range(C):
        eligible = (M[:, :, col] != 0) & (rows[None, :] >= rank[:, None])
        has = eligible.any(axis=1)
        idx = np.nonzero(has)[0]
        if len(idx) == 0:
            continue
        piv = eligible[idx].argmax(axis=1)
        top = rank[idx]
        prow = M[idx, piv].copy()
        M[idx, piv] = M[idx, top]
        inv = F.vinv(prow[:, col])
        prow = F.vmul(prow, inv[:, None])
        M[idx, top] = prow
        sub = M[idx]
        factors = sub[:, :, col].copy()
        factors[np.arange(len(idx)), top] = 0
        sub = F.vsub(sub, F.vmul(factors[:, :, None], prow[:, None, :]))
        M[idx] = sub
        rank[idx] += 1
    return M, rank


def apply_linear_tensor(T: np.ndarray, A: np.ndarray, F: Field) -> np.ndarray:
    """Stack of matrices L[b, r, c] = sum_i T[r, c, i] * A[b, i] over F."""
    T = np.asarray(T, dtype=np.int64)
    if F.k == 1:
        return np.einsum("rci,bi->brc", T, A) % F.p
    out = np.zeros((A.shape[0],) + T.shape[:2], dtype=np.int64)
    for i in range(T.shape[2]):
        if T[:, :, i].any():
            out = F.vadd(out, F.vmul(T[None, :, :, i], A[:, i, None, None]))
    return out


def kernel_points(rows: Sequence[Sequence[int]], F: Field, ncols: int, limit: int | None = None):
    """Normalised projective points of the kernel of a small matrix.

    Raises ValueError when there are more than ``limit`` points.
    """
    basis = nullspace(rows, F, ncols)
    if not basis:
        return []
    if limit is not None and projective_count(F.q, len(basis)) > limit:
        raise ValueError(f"kernel of dimension {len(basis)} has too many points")
    if len(basis) == 1:
        return [normalize_projective(F, basis[0])[0]]
    return projective_points_of_span(basis, F)


def batched_det(M: np.ndarray, F: Field) -> np.ndarray:
    """Determinants of a stack of square matrices (B, n, n), by expansion over column subsets."""
    B, n, _ = M.shape
    minors = {0: np.ones(B, dtype=np.int64)}
    for r in range(n):
        nxt = {}
        for S, d in minors.items():
            for j in range(n):
                if S >> j & 1:
                    continue
                sign_neg = bin(S >> j).count("1") % 2 == 1
                term = F.vmul(M[:, r, j], d)
                if sign_neg:
                    term = F.vneg(term)
                T = S | (1 << j)
                nxt[T] = F.vadd(nxt[T], term) if T in nxt else term
        minors = nxt
    return minors[(1 << n) - 1]


def square_projection(R: int, C: int, F: Field, seed: int = 0) -> np.ndarray:
    """Fixed C x R matrix [I | random]; composing with it keeps every singular stack singular."""
    rng = np.random.default_rng(seed)
    P = np.zeros((C, R), dtype=np.int64)
    P[:, :C] = np.eye(C, dtype=np.int64)
    P[:, C:] = rng.integers(0, F.q, size=(C, R - C))
    return P


def project_tensor(P: np.ndarray, T: np.ndarray, F: Field) -> np.ndarray:
    """Contract T[r, c, i] with P[s, r] to a tensor of shape (S, C, n)."""
    S, R = P.shape
    out = np.zeros((S,) + T.shape[1:], dtype=np.int64)
    for s in range(S):
        for r in range(R):
            if P[s, r]:
                out[s] = F.vadd(out[s], F.vmul(T[r], int(P[s, r])))
    return out


def rank_deficient(T: np.ndarray, A: np.ndarray, F: Field, Tp: np.ndarray | None = None):
    """Indices b with rank(sum_i T[:, :, i] A[b, i]) < C, plus those matrices.

    When there are at least as many rows as columns, a cheap determinant of a
    projected square system discards most points first; survivors are
    row-reduced exactly.
    """
    R, C, _ = T.shape
    idx = np.arange(A.shape[0])
    if Tp is not None and R >= C:
        det = batched_det(apply_linear_tensor(Tp, A, F), F)
        idx = np.nonzero(det == 0)[0]
    if len(idx) == 0:
        return idx, np.zeros((0, R, C), dtype=np.int64)
    L = apply_linear_tensor(T, A[idx], F)
    _, rk = batched_rref(L, F)
    keep = rk < C
    return idx[keep], L[keep]
