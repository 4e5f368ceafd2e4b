from __future__ import annotations

import numpy as np
import pytest

from skewclifford import linalg
from skewclifford.field import make_field, projective_chunks


def test_rref_rank_nullspace():
    F = make_field(5)
    rows = [[1, 2, 3], [2, 4, 2], [0, 0, 0]]
    R, piv = linalg.rref(rows, F)
    assert piv == [0, 2]
    assert linalg.rank(rows, F) == 2
    ns = linalg.nullspace(rows, F, 3)
    assert len(ns) == 1
    for r in rows:
        assert sum(a * b for a, b in zip(r, ns[0])) % 5 == 0


def test_solve():
    F = make_field(7)
    assert linalg.solve([[1, 1], [1, 6]], [3, 1], F) == [2, 1]
    assert linalg.solve([[1, 1], [2, 2]], [1, 3], F) is None


def test_left_nullspace_dimension():
    F = make_field(13)
    C = [[1, 0], [0, 0], [0, 1]]
    ln = linalg.left_nullspace(C, F)
    assert ln == [[0, 1, 0]]


@pytest.mark.parametrize("p,k", [(5, 1), (3, 2)])
def test_np_rref_matches_list_rref(p, k):
    F = make_field(p, k)
    rng = np.random.default_rng(1)
    for _ in range(30):
        M = rng.integers(0, F.q, size=(4, 5))
        M[rng.random(M.shape) < 0.4] = 0
        R, piv = linalg.np_rref(M, F)
        R2, piv2 = linalg.rref(M.tolist(), F)
        assert piv == piv2
        assert R[: len(piv)].tolist() == R2


@pytest.mark.parametrize("p,k", [(3, 1), (5, 1), (3, 2), (5, 2), (7, 2)])
def test_filtered_kernel_detection_matches_plain_reduction(p, k):
    F = make_field(p, k)
    rng = np.random.default_rng(p * 10 + k)
    for _ in range(15):
        n = int(rng.integers(2, 4))
        R = int(rng.integers(n, n + 4))
        T = rng.integers(0, F.q, size=(R, n, n))
        T[rng.random(T.shape) < 0.5] = 0
        Tp = linalg.project_tensor(linalg.square_projection(R, n, F), T, F)
        for A in projective_chunks(F.q, n, 1 << 12):
            idx, _ = linalg.rank_deficient(T, A, F, Tp)
            L = linalg.apply_linear_tensor(T, A, F)
            _, rk = linalg.batched_rref(L, F)
            assert idx.tolist() == np.nonzero(rk < n)[0].tolist()


@pytest.mark.parametrize("p,k", [(7, 1), (3, 2)])
def test_batched_det_vanishes_iff_singular(p, k):
    F = make_field(p, k)
    rng = np.random.default_rng(3)
    for n in (1, 2, 3, 4):
        M = rng.integers(0, F.q, size=(300, n, n))
        M[rng.random(M.shape) < 0.3] = 0
        d = linalg.batched_det(M, F)
        _, rk = linalg.batched_rref(M, F)
        assert ((d == 0) == (rk < n)).all()


def test_batched_det_prime_field_value():
    F = make_field(101)
    M = np.array([[[2, 3], [5, 7]]])
    assert linalg.batched_det(M, F).tolist() == [(14 - 15) % 101]


def test_kernel_points():
    F = make_field(3)
    pts = linalg.kernel_points([[1, 0, 0]], F, 3)
    assert pts == [(0, 0, 1), (0, 1, 0), (0, 1, 1), (0, 1, 2)]
    with pytest.raises(ValueError):
        linalg.kernel_points([[1, 0, 0]], F, 3, limit=2)
