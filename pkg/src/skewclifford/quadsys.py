"""Quadric systems: linear independence, normalizing property, base points.

The zero locus V(U) lives in P^{n-1} x P^{n-1}; a pair (a, b) evaluates the
word z_i z_j to a_i * b_j.  For a fixed ``a`` every condition used here is
linear in ``b``, so searches solve one small linear system per point ``a``
instead of enumerating pairs.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field as dc_field

import numpy as np

from .errors import BudgetExceeded, NotMuSymmetric
from .field import projective_chunks, projective_count
from .quadforms import Matrix, mu_symmetric_violation, tau, tau_inv, upper_coords
from .skewring import NormalizingReport, SkewPoly, SkewRing, check_normalizing_sequence
from . import linalg

DEFAULT_BUDGET = 10_000_000


class QuadricSystem:
    """mu together with n mu-symmetric matrices M_1..M_n and their forms q_k."""

    def __init__(self, ring: SkewRing, matrices: Sequence[Sequence[Sequence[int]]]):
        F = ring.field
        mats = tuple(tuple(tuple(F.coerce(x) for x in row) for row in M) for M in matrices)
        if len(mats) != ring.n:
            raise ValueError(f"expected {ring.n} matrices, got {len(mats)}")
        for k, M in enumerate(mats):
            if len(M) != ring.n or any(len(r) != ring.n for r in M):
                raise NotMuSymmetric(f"matrix {k+1} is not {ring.n}x{ring.n}", f"/matrices/{k}")
            bad = mu_symmetric_violation(M, ring)
            if bad is not None:
                i, j = bad
                raise NotMuSymmetric(
                    f"M_{k+1}[{i+1}][{j+1}] != mu_{i+1}{j+1} * M_{k+1}[{j+1}][{i+1}]",
                    f"/matrices/{k}/{i}/{j}",
                )
        self.ring = ring
        self.matrices: tuple[Matrix, ...] = mats
        self.forms: tuple[SkewPoly, ...] = tuple(tau(M, ring) for M in mats)

    @classmethod
    def from_forms(cls, ring: SkewRing, forms: Sequence[SkewPoly]) -> QuadricSystem:
        return cls(ring, [tau_inv(q) for q in forms])

    @property
    def n(self) -> int:
        return self.ring.n

    @property
    def field(self):
        return self.ring.field

    def extend(self, m: int) -> QuadricSystem:
        """The same system viewed over the degree-m extension field."""
        if m == 1:
            return self
        ring, emb = self.ring.extend(m)
        return QuadricSystem(ring, [[[emb[x] for x in row] for row in M] for M in self.matrices])

    def coordinate_matrix(self) -> list[list[int]]:
        """n(n+1)/2 x n matrix whose k-th column holds the coordinates of M_k."""
        cols = [upper_coords(M) for M in self.matrices]
        return [list(r) for r in zip(*cols)]

    def span_element(self, beta: Sequence[int]) -> SkewPoly:
        F = self.field
        out = self.ring.zero()
        for c, q in zip(beta, self.forms):
            if c:
                out = out + q.scale(c)
        return out

    def __repr__(self) -> str:
        return f"QuadricSystem({[str(q) for q in self.forms]})"


def check_independence(sys: QuadricSystem) -> bool:
    rows = [upper_coords(M) for M in sys.matrices]
    return linalg.rank(rows, sys.field) == sys.n


def vu_contains(a: Sequence[int], b: Sequence[int], ring: SkewRing) -> bool:
    """Does (a, b) satisfy a_j b_i = mu_ij a_i b_j for every i < j?"""
    F, mu, n = ring.field, ring.mu, ring.n
    return all(
        F.mul(a[j], b[i]) == F.mul(mu[i][j], F.mul(a[i], b[j]))
        for i in range(n)
        for j in range(i + 1, n)
    )


def lift_eval(q: SkewPoly, a: Sequence[int], b: Sequence[int]) -> int:
    """Value at (a, b) of the lift sending z_i z_j (i <= j) to x_i x_j."""
    F = q.field
    acc = 0
    for (i, j), c in q.quadratic_coeffs().items():
        acc = F.add(acc, F.mul(c, F.mul(a[i], b[j])))
    return acc


def base_point_tensor(sys: QuadricSystem) -> np.ndarray:
    """Coefficient tensor T[row, l, i]: the conditions on b at a are sum_i T a_i.

    Rows are the n lifted forms followed by the n(n-1)/2 relations of S.
    """
    F, mu, n = sys.field, sys.ring.mu, sys.n
    rows = []
    for q in sys.forms:
        T = np.zeros((n, n), dtype=np.int64)
        for (i, l), c in q.quadratic_coeffs().items():
            T[l, i] = F.add(int(T[l, i]), c)
        rows.append(T)
    for i in range(n):
        for j in range(i + 1, n):
            T = np.zeros((n, n), dtype=np.int64)
            T[i, j] = 1
            T[j, i] = F.neg(mu[i][j])
            rows.append(T)
    return np.array(rows, dtype=np.int64)


def solve_per_point(T: np.ndarray, F, n: int, chunk: int = 1 << 16):
    """Yield (a, kernel rows) for every a in P^{n-1}(F) whose system has a nonzero kernel."""
    Tp = None
    if T.shape[0] >= n:
        Tp = linalg.project_tensor(linalg.square_projection(T.shape[0], n, F), T, F)
    for A in projective_chunks(F.q, n, chunk):
        idx, Ls = linalg.rank_deficient(T, A, F, Tp)
        for i, L in zip(idx, Ls):
            yield tuple(int(x) for x in A[i]), L.tolist()


@dataclass
class BasePointReport:
    searched_extensions: list[int]
    base_points: list[tuple[int, tuple, tuple]] = dc_field(default_factory=list)
    max_listed: int = 20
    found: int = 0

    @property
    def free(self) -> bool:
        return self.found == 0

    @property
    def verdict(self) -> str:
        if self.found:
            return "base-point-found"
        return f"free-up-to-degree-{max(self.searched_extensions)}"

    def to_json(self, base_field) -> dict:
        pts = []
        for m, a, b in self.base_points:
            E = base_field.extension(m)[0]
            pts.append(
                {"degree": m, "a": [E.to_json(x) for x in a], "b": [E.to_json(x) for x in b]}
            )
        return {
            "verdict": self.verdict,
            "searched_extensions": list(self.searched_extensions),
            "base_point_count": self.found,
            "base_points": pts,
        }


def find_base_points(
    sys: QuadricSystem, max_ext: int = 2, *, budget: int = DEFAULT_BUDGET, stop_early: bool = True
) -> BasePointReport:
    """Search V(U) for common zeros of the lifted forms over F_{q^m}, m <= max_ext.

    A clean report certifies freeness only over the searched fields.
    """
    q, n = sys.field.q, sys.n
    total = sum(projective_count(q**m, n) for m in range(1, max_ext + 1))
    if total > budget:
        raise BudgetExceeded(f"base-point search needs {total} linear solves (budget {budget})")
    report = BasePointReport(searched_extensions=[])
    for m in range(1, max_ext + 1):
        ext = sys.extend(m)
        F = ext.field
        report.searched_extensions.append(m)
        for a, rows in solve_per_point(base_point_tensor(ext), F, n):
            for b in linalg.kernel_points(rows, F, n, limit=None if F.q < 50 else 10_000):
                assert vu_contains(a, b, ext.ring)
                assert all(lift_eval(qk, a, b) == 0 for qk in ext.forms)
                report.found += 1
                if len(report.base_points) < report.max_listed:
                    report.base_points.append((m, a, b))
        if report.found and stop_early:
            break
    return report


@dataclass
class SystemVerdict:
    independent: bool
    normalizing: NormalizingReport | None = None
    base_points: BasePointReport | None = None

    @property
    def base_point_free(self) -> bool | None:
        return None if self.base_points is None else self.base_points.free

    @property
    def ok(self) -> bool:
        return bool(
            self.independent
            and self.normalizing is not None
            and self.normalizing.normalizing
            and self.base_point_free
        )

    def to_json(self, base_field) -> dict:
        return {
            "independent": self.independent,
            "normalizing": self.normalizing.normalizing if self.normalizing else None,
            "base_point_free": self.base_point_free,
            "ok": self.ok,
            "certificates": {
                "normalizing": self.normalizing.to_json() if self.normalizing else None,
                "base_points": self.base_points.to_json(base_field) if self.base_points else None,
            },
        }


def validate_system(
    sys: QuadricSystem,
    max_ext: int = 2,
    policy: str = "given",
    *,
    budget: int = DEFAULT_BUDGET,
) -> SystemVerdict:
    """Independence, normalizing sequence and base-point freeness, failing fast."""
    if not check_independence(sys):
        return SystemVerdict(independent=False)
    verdict = SystemVerdict(True, check_normalizing_sequence(sys.forms, policy))
    if not verdict.normalizing.normalizing:
        return verdict
    verdict.base_points = find_base_points(sys, max_ext, budget=budget)
    return verdict
