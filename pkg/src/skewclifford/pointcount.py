"""Counting point modules: by factoring the span of the forms, and from Gamma.

``count_by_factorization`` walks P(span{q_k}) and factors every element;
each element with j factorizations contributes j points, so N = 2 f2 + f1
when no element factors more than twice.  ``enumerate_gamma`` solves the
relations of the presentation for b at every a.  Both are field-relative;
``stabilized_count`` repeats them over a tower of extensions.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field as dc_field

import numpy as np

from .errors import BudgetExceeded, HypothesisWarning
from .field import Field, enumerate_projective, normalize_projective, projective_chunks, projective_count
from .gsca import GscaPresentation, build_presentation, relation_tensor, relator_value
from .quadforms import FactorizationSet, factorizations, phi, upper_coords
from .quadsys import DEFAULT_BUDGET, QuadricSystem
from .skewring import SkewPoly
from . import linalg


@dataclass(frozen=True, order=True)
class PointPair:
    a: tuple[int, ...]
    b: tuple[int, ...]


@dataclass
class GammaSet:
    field: Field
    extension_degree: int
    pairs: list[PointPair]

    def __len__(self) -> int:
        return len(self.pairs)

    def __contains__(self, pair) -> bool:
        if not isinstance(pair, PointPair):
            pair = PointPair(tuple(pair[0]), tuple(pair[1]))
        return pair in set(self.pairs)

    def to_json(self) -> dict:
        F = self.field
        return {
            "extension_degree": self.extension_degree,
            "gamma_count": len(self.pairs),
            "pairs": [
                {"a": [F.to_json(x) for x in p.a], "b": [F.to_json(x) for x in p.b]} for p in self.pairs
            ],
        }


@dataclass
class Stratum:
    beta: tuple[int, ...]
    form: SkewPoly
    factorizations: FactorizationSet

    @property
    def delta_mu(self) -> bool:
        return len(self.factorizations) == 1

    def to_json(self) -> dict:
        F = self.form.field
        return {
            "beta": [F.to_json(x) for x in self.beta],
            "form": str(self.form),
            "factorizations": [f.to_json(F) for f in self.factorizations],
            "delta_mu": self.delta_mu,
        }


@dataclass
class PointCountReport:
    f1: int
    f2: int
    extension_degree: int
    strata: list[Stratum]
    f_more: int = 0
    gamma_count: int | None = None
    match: bool | None = None
    diagnostics: dict = dc_field(default_factory=dict)

    @property
    def N(self) -> int:
        return 2 * self.f2 + self.f1

    def to_json(self) -> dict:
        return {
            "f1": self.f1,
            "f2": self.f2,
            "N": self.N,
            "gamma_count": self.gamma_count,
            "match": self.match,
            "extension_degree": self.extension_degree,
            "more_than_two": self.f_more,
            "strata": [s.to_json() for s in self.strata],
        }


def _check_budget(cost: int, budget: int, what: str) -> None:
    if cost > budget:
        raise BudgetExceeded(f"{what} needs {cost} linear solves (budget {budget})")


def in_span(M, sys: QuadricSystem) -> bool:
    F = sys.field
    rows = [upper_coords(Mk) for Mk in sys.matrices]
    return linalg.rank(rows + [upper_coords(M)], F) == linalg.rank(rows, F)


def enumerate_gamma(
    pres: GscaPresentation,
    sys: QuadricSystem | None = None,
    *,
    extension_degree: int = 1,
    budget: int = DEFAULT_BUDGET,
) -> GammaSet:
    """All (a, b) killed by every relator, over the presentation's field.

    With ``sys`` given, each pair is also checked to have Phi(a, b) in the span
    of the system's matrices.
    """
    F, n = pres.field, pres.n
    _check_budget(projective_count(F.q, n), budget, "Gamma enumeration")
    T = relation_tensor(pres)
    Tp = None
    if T.shape[0] >= n:
        Tp = linalg.project_tensor(linalg.square_projection(T.shape[0], n, F), T, F)
    pairs: list[PointPair] = []
    remaining = budget
    for A in projective_chunks(F.q, n, 1 << 16):
        if T.shape[0] == 0:
            idx, Ls = np.arange(len(A)), np.zeros((len(A), 0, n), dtype=np.int64)
        else:
            idx, Ls = linalg.rank_deficient(T, A, F, Tp)
        for i, L in zip(idx, Ls):
            a = tuple(int(x) for x in A[i])
            basis_dim = n - linalg.rank(L.tolist(), F) if len(L) else n
            remaining -= projective_count(F.q, basis_dim)
            if remaining < 0:
                raise BudgetExceeded(f"Gamma has more than {budget} points")
            for b in linalg.kernel_points(L.tolist(), F, n) if len(L) else _all_points(F, n):
                pairs.append(PointPair(a, tuple(b)))
    for p in pairs:
        assert all(relator_value(r, p.a, p.b, F, n) == 0 for r in pres.relators)
        if sys is not None:
            assert in_span(phi(p.a, p.b, sys.ring), sys), f"Phi{p} outside the span"
    return GammaSet(F, extension_degree, sorted(pairs))


def _all_points(F: Field, n: int):
    return enumerate_projective(F, n)


def _form_tensor(sys: QuadricSystem) -> tuple[list[tuple[int, int]], np.ndarray]:
    """Coefficient tensor T[c, 0, k] of monomial c = z_i z_j (i <= j) in q_k."""
    n = sys.n
    keys = [(i, j) for i in range(n) for j in range(i, n)]
    T = np.zeros((len(keys), 1, n), dtype=np.int64)
    for k, q in enumerate(sys.forms):
        qc = q.quadratic_coeffs()
        for c, key in enumerate(keys):
            T[c, 0, k] = qc.get(key, 0)
    return keys, T


def factorable_mask(coefs: np.ndarray, keys, sys: QuadricSystem) -> np.ndarray:
    """Necessary condition for factoring, checked on every two-variable restriction.

    Killing all generators but z_i, z_j maps a factorization to one of
    c_ii z_i^2 + c_ij z_i z_j + c_jj z_j^2, which exists iff c_ii c_jj = 0 or
    c_ij^2 - 4 mu_ij c_ii c_jj is a square.
    """
    F, mu, n = sys.field, sys.ring.mu, sys.n
    pos = {key: c for c, key in enumerate(keys)}
    ok = np.ones(coefs.shape[0], dtype=bool)
    four = F.from_int(4)
    squares = F.square_mask()
    for i in range(n):
        for j in range(i + 1, n):
            cii, cjj, cij = coefs[:, pos[i, i]], coefs[:, pos[j, j]], coefs[:, pos[i, j]]
            prod = F.vmul(F.vmul(cii, cjj), F.mul(four, mu[i][j]))
            disc = F.vsub(F.vmul(cij, cij), prod)
            ok &= (cii == 0) | (cjj == 0) | squares[disc]
    return ok


def count_by_factorization(
    sys: QuadricSystem,
    *,
    extension_degree: int = 1,
    budget: int = DEFAULT_BUDGET,
    strict: bool = True,
) -> PointCountReport:
    """f1, f2 and the factorable strata of P(span{q_k}) over the system's field.

    ``sys`` is taken as already lifted to the field of interest.  With
    ``strict`` an element with more than two factorizations raises
    TheoremViolation; otherwise such elements are tallied in ``f_more``.
    """
    F, n = sys.field, sys.n
    _check_budget(projective_count(F.q, n), budget, "span enumeration")
    keys, T = _form_tensor(sys)
    ring = sys.ring
    strata: list[Stratum] = []
    f1 = f2 = more = 0
    for B in projective_chunks(F.q, n, 1 << 16):
        coefs = linalg.apply_linear_tensor(T, B, F)[:, :, 0]
        for idx in np.nonzero(factorable_mask(coefs, keys, sys))[0]:
            row = coefs[idx].tolist()
            Q = ring.quadratic({key: c for key, c in zip(keys, row) if c})
            fs = factorizations(Q, strict=strict)
            if not len(fs):
                continue
            strata.append(Stratum(tuple(int(x) for x in B[idx]), Q, fs))
            if len(fs) == 1:
                f1 += 1
            elif len(fs) == 2:
                f2 += 1
            else:
                more += 1
    return PointCountReport(f1, f2, extension_degree, strata, f_more=more)


def factorization_pairs(report: PointCountReport) -> set[PointPair]:
    out = set()
    for s in report.strata:
        F = s.form.field
        for f in s.factorizations:
            out.add(PointPair(f.left, normalize_projective(F, f.right)[0]))
    return out


def cross_validate(
    report: PointCountReport, gamma: GammaSet, sys: QuadricSystem | None = None
) -> tuple[bool, dict]:
    """N = |Gamma| plus the extensional bijection between factorizations and Gamma."""
    if report.extension_degree != gamma.extension_degree:
        raise ValueError("report and Gamma computed over different fields")
    fac = factorization_pairs(report)
    gam = set(gamma.pairs)
    diag = {
        "N": report.N,
        "gamma_count": len(gamma),
        "missing_from_gamma": [[list(p.a), list(p.b)] for p in sorted(fac - gam)],
        "missing_from_factorizations": [[list(p.a), list(p.b)] for p in sorted(gam - fac)],
    }
    if sys is not None:
        diag["outside_span"] = [
            [list(p.a), list(p.b)] for p in gamma.pairs if not in_span(phi(p.a, p.b, sys.ring), sys)
        ]
    ok = (
        report.N == len(gamma)
        and fac == gam
        and report.f_more == 0
        and not diag.get("outside_span")
    )
    report.gamma_count = len(gamma)
    report.match = ok
    report.diagnostics = diag
    return ok, diag


@dataclass
class StabilizedCount:
    history: list[PointCountReport]

    @property
    def N(self) -> int:
        return self.history[-1].N

    @property
    def stable(self) -> bool:
        """True only if the last escalation step left N unchanged."""
        return len(self.history) >= 2 and self.history[-1].N == self.history[-2].N

    @property
    def stabilization_degree(self) -> int:
        m = self.history[-1].extension_degree
        for r in reversed(self.history):
            if r.N != self.N:
                break
            m = r.extension_degree
        return m

    @property
    def final(self) -> PointCountReport:
        return self.history[-1]

    def to_json(self) -> dict:
        return {
            "N": self.N,
            "stable": self.stable,
            "stabilization_degree": self.stabilization_degree,
            "history": [
                {"extension_degree": r.extension_degree, "N": r.N, "gamma_count": r.gamma_count, "match": r.match}
                for r in self.history
            ],
            "report": self.final.to_json(),
        }


def count_over(
    sys: QuadricSystem, m: int, *, budget: int = DEFAULT_BUDGET, strict: bool = True
) -> tuple[PointCountReport, GammaSet]:
    """Both counts over the degree-m extension, cross-validated."""
    ext = sys.extend(m)
    report = count_by_factorization(ext, extension_degree=m, budget=budget, strict=strict)
    gamma = enumerate_gamma(build_presentation(ext), ext, extension_degree=m, budget=budget)
    cross_validate(report, gamma, ext)
    return report, gamma


def stabilized_count(
    sys: QuadricSystem,
    max_ext: int = 2,
    *,
    budget: int = DEFAULT_BUDGET,
    strict: bool = True,
    verified: bool | None = None,
) -> StabilizedCount:
    """Counts over F_{q^m}, m = 1..max_ext; ``stable`` says whether the last step changed N."""
    if verified is False:
        warnings.warn("counting a system that has not passed validation", HypothesisWarning, stacklevel=2)
    q, n = sys.field.q, sys.n
    cost = sum(projective_count(q**m, n) for m in range(1, max_ext + 1))
    _check_budget(cost, budget, "stabilized count")
    history = [count_over(sys, m, budget=budget, strict=strict)[0] for m in range(1, max_ext + 1)]
    return StabilizedCount(history)
