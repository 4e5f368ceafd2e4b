"""mu-symmetric matrices, the tau / Phi correspondences, and factorization of
noncommutative quadratic forms into products of linear forms."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

from .errors import BudgetExceeded, NotMuSymmetric, TheoremViolation
from .field import Field, enumerate_projective, normalize_projective, projective_count
from .skewring import SkewPoly, SkewRing
from . import linalg

Matrix = tuple[tuple[int, ...], ...]
Vector = tuple[int, ...]

NOT_AT_MOST_TWO = "not<=2"

DEFAULT_SWEEP_BUDGET = 100_000


def is_mu_symmetric(M: Sequence[Sequence[int]], ring: SkewRing) -> bool:
    F, mu, n = ring.field, ring.mu, ring.n
    if len(M) != n or any(len(row) != n for row in M):
        return False
    return all(M[i][j] == F.mul(mu[i][j], M[j][i]) for i in range(n) for j in range(n))


def mu_symmetric_violation(M: Sequence[Sequence[int]], ring: SkewRing) -> tuple[int, int] | None:
    """First (i, j) with M_ij != mu_ij M_ji, or None."""
    F, mu, n = ring.field, ring.mu, ring.n
    for i in range(n):
        for j in range(n):
            if M[i][j] != F.mul(mu[i][j], M[j][i]):
                return i, j
    return None


def upper_coords(M: Sequence[Sequence[int]]) -> list[int]:
    """Entries M_ij, i <= j, row-major: the coordinates of a mu-symmetric matrix."""
    n = len(M)
    return [M[i][j] for i in range(n) for j in range(i, n)]


def from_upper_coords(v: Sequence[int], ring: SkewRing) -> Matrix:
    F, mu, n = ring.field, ring.mu, ring.n
    M = [[0] * n for _ in range(n)]
    it = iter(v)
    for i in range(n):
        for j in range(i, n):
            M[i][j] = next(it)
            M[j][i] = F.mul(mu[j][i], M[i][j])
    return tuple(tuple(r) for r in M)


def tau(M: Sequence[Sequence[int]], ring: SkewRing) -> SkewPoly:
    """z^T M z, in normal form."""
    bad = mu_symmetric_violation(M, ring)
    if bad is not None:
        i, j = bad
        raise NotMuSymmetric(f"M[{i+1}][{j+1}] != mu_{i+1}{j+1} * M[{j+1}][{i+1}]")
    F, mu, n = ring.field, ring.mu, ring.n
    coeffs = {}
    for i in range(n):
        coeffs[(i, i)] = M[i][i]
        for j in range(i + 1, n):
            coeffs[(i, j)] = F.add(M[i][j], F.mul(mu[i][j], M[j][i]))
    return ring.quadratic(coeffs)


def tau_inv(Q: SkewPoly) -> Matrix:
    ring = Q.ring
    F, mu, n = ring.field, ring.mu, ring.n
    half = F.inv(2 % F.p)
    M = [[0] * n for _ in range(n)]
    for (i, j), c in Q.quadratic_coeffs().items():
        if i == j:
            M[i][i] = c
        else:
            M[i][j] = F.mul(c, half)
            M[j][i] = F.mul(mu[j][i], M[i][j])
    return tuple(tuple(r) for r in M)


def phi(a: Sequence[int], b: Sequence[int], ring: SkewRing) -> Matrix:
    """The mu-symmetric matrix (a_i b_j + mu_ij a_j b_i)."""
    F, mu, n = ring.field, ring.mu, ring.n
    return tuple(
        tuple(F.add(F.mul(a[i], b[j]), F.mul(mu[i][j], F.mul(a[j], b[i]))) for j in range(n))
        for i in range(n)
    )


def classical_rank(M: Sequence[Sequence[int]], F: Field) -> int:
    return linalg.rank(M, F) if M else 0


def projectively_equal(u: Sequence[int], v: Sequence[int], F: Field) -> bool:
    if not any(u) or not any(v):
        return not any(u) and not any(v)
    return normalize_projective(F, u)[0] == normalize_projective(F, v)[0]


def embed_poly(Q: SkewPoly, ring: SkewRing, table: Sequence[int]) -> SkewPoly:
    return SkewPoly(ring, {m: table[c] for m, c in Q.terms.items()})


@dataclass(frozen=True, order=True)
class Factorization:
    """Q = left * right with ``left`` normalised (first nonzero coefficient 1)."""

    left: Vector
    right: Vector

    def to_json(self, F: Field) -> dict:
        return {"left": [F.to_json(x) for x in self.left], "right": [F.to_json(x) for x in self.right]}


@dataclass(frozen=True)
class FactorizationSet:
    factorizations: tuple[Factorization, ...]
    mu_rank_label: int | str

    def __len__(self) -> int:
        return len(self.factorizations)

    def __iter__(self):
        return iter(self.factorizations)

    def pairs(self) -> set[tuple[Vector, Vector]]:
        return {(f.left, f.right) for f in self.factorizations}


def _dense(Q: SkewPoly) -> list[list[int]]:
    n = Q.ring.n
    c = [[0] * n for _ in range(n)]
    for (i, j), v in Q.quadratic_coeffs().items():
        c[i][j] = v
    return c


def _lift(u, v, col, cll, F: Field) -> list[tuple[int, int]]:
    """Solutions (s, t) of t*u + s*v = col, s*t = cll."""
    m = len(u)
    i0 = next(i for i in range(m) if u[i])
    kappa = F.div(v[i0], u[i0])
    if all(v[i] == F.mul(kappa, u[i]) for i in range(m)):
        # v is a nonzero multiple of u: col must be too, and s solves a quadratic.
        rho = F.div(col[i0], u[i0])
        if any(col[i] != F.mul(rho, u[i]) for i in range(m)):
            return []
        disc = F.sub(F.mul(rho, rho), F.mul(F.from_int(4), F.mul(kappa, cll)))
        inv2k = F.inv(F.mul(F.from_int(2), kappa))
        out = set()
        for r in F.square_roots(disc):
            s = F.mul(F.add(rho, r), inv2k)
            out.add((s, F.sub(rho, F.mul(kappa, s))))
        return sorted(out)
    for i in range(m):
        for j in range(i + 1, m):
            det = F.sub(F.mul(u[i], v[j]), F.mul(u[j], v[i]))
            if det:
                dinv = F.inv(det)
                t = F.mul(F.sub(F.mul(col[i], v[j]), F.mul(col[j], v[i])), dinv)
                s = F.mul(F.sub(F.mul(u[i], col[j]), F.mul(u[j], col[i])), dinv)
                ok = all(F.add(F.mul(t, u[k]), F.mul(s, v[k])) == col[k] for k in range(m))
                return [(s, t)] if ok and F.mul(s, t) == cll else []
    raise AssertionError("unreachable: u, v independent but every 2x2 minor vanishes")


def _factor(c, mu, F: Field, m: int) -> list[tuple[list[int], list[int]]]:
    """All factorizations of the form restricted to z_1..z_m (exact, left normalised)."""
    if m == 1:
        return [([1], [c[0][0]])] if c[0][0] else []
    last = m - 1
    col = [c[i][last] for i in range(last)]
    cll = c[last][last]
    if all(c[i][j] == 0 for i in range(last) for j in range(i, last)):
        # The image modulo z_m vanishes, so one factor is a multiple of z_m.
        if cll == 0 and not any(col):
            return []
        e = [0] * last + [1]
        a, lam = normalize_projective(F, col + [cll])
        out = {(a, tuple(F.mul(lam, x) for x in e))}
        b = [F.div(col[i], mu[i][last]) for i in range(last)] + [cll]
        out.add((tuple(e), tuple(b)))
        return [(list(a), list(b)) for a, b in sorted(out)]
    out = []
    for abar, bbar in _factor(c, mu, F, last):
        v = [F.mul(mu[i][last], bbar[i]) for i in range(last)]
        for s, t in _lift(abar, v, col, cll, F):
            out.append((abar + [s], bbar + [t]))
    return out


def _label(pairs, F: Field) -> int | str:
    if not pairs:
        return NOT_AT_MOST_TWO
    for a, b in pairs:
        lead = next(i for i, x in enumerate(a) if x)
        lam = b[lead]
        if all(y == F.mul(lam, x) for x, y in zip(a, b)) and F.is_square(lam):
            return 1
    return 2


def _make_set(Q: SkewPoly, pairs, verify: bool, strict: bool) -> FactorizationSet:
    ring, F = Q.ring, Q.field
    pairs = sorted(set(pairs))
    if verify:
        for a, b in pairs:
            if ring.linear(a) * ring.linear(b) != Q:
                raise TheoremViolation(f"factorization {a} * {b} does not multiply to {Q}")
    label = 0 if Q.is_zero() else _label(pairs, F)
    result = FactorizationSet(tuple(Factorization(a, b) for a, b in pairs), label)
    if strict and len(pairs) > 2:
        raise TheoremViolation(
            f"{Q} has {len(pairs)} distinct factorizations", factorizations=result
        )
    return result


def factorizations(
    Q: SkewPoly, *, strict: bool = True, verify: bool = True
) -> FactorizationSet:
    """Every factorization Q = a * b into linear forms over Q's field.

    Recurses on the image of Q modulo the last generator and lifts each
    factorization of the image (a linear system plus one product condition).
    With ``strict`` a result with more than two distinct factorizations
    raises :class:`TheoremViolation` carrying the complete set; such forms do
    exist once n >= 3 (e.g. z1^2 + z2^2 + z3^2 with every mu_ij = -1 is
    (z1 +- z2 +- z3)^2 four ways).
    """
    if Q.degree() not in (2, None) or (Q.degree() is None and not Q.is_zero()):
        raise ValueError("factorizations expects a homogeneous quadratic form")
    if Q.is_zero():
        return FactorizationSet((), 0)
    ring = Q.ring
    found = _factor(_dense(Q), ring.mu, ring.field, ring.n)
    return _make_set(Q, [(tuple(a), tuple(b)) for a, b in found], verify, strict)


def factorizations_sweep(Q: SkewPoly, *, budget: int = DEFAULT_SWEEP_BUDGET) -> FactorizationSet:
    """Brute-force oracle: for every left factor a in P^{n-1}(F), solve a * b = Q for b.

    Never asserts a bound on the number of factorizations.
    """
    ring = Q.ring
    F, mu, n = ring.field, ring.mu, ring.n
    if projective_count(F.q, n) > budget:
        raise BudgetExceeded(f"|P^{n-1}(F_{F.q})| exceeds sweep budget {budget}")
    if Q.is_zero():
        return FactorizationSet((), 0)
    c = _dense(Q)
    rhs = [c[i][j] for i in range(n) for j in range(i, n)]
    found = []
    for a in enumerate_projective(F, n):
        rows = []
        for i in range(n):
            for j in range(i, n):
                row = [0] * n
                if i == j:
                    row[i] = a[i]
                else:
                    row[j] = a[i]
                    row[i] = F.add(row[i], F.mul(mu[i][j], a[j]))
                rows.append(row)
        b = linalg.solve(rows, rhs, F)
        if b is not None:
            found.append((tuple(a), tuple(b)))
    return _make_set(Q, found, verify=True, strict=False)


def mu_rank(Q: SkewPoly, max_ext: int = 2) -> int | str:
    """mu-rank searched over the base field and its extensions of degree <= max_ext.

    Returns 0, 1, 2, or ``NOT_AT_MOST_TWO`` when no factorization exists in any
    searched field.
    """
    if max_ext < 1:
        raise ValueError("max_ext must be >= 1")
    if Q.is_zero():
        return 0
    factorable = False
    for m in range(1, max_ext + 1):
        ring, table = Q.ring.extend(m)
        fs = factorizations(embed_poly(Q, ring, table), strict=False)
        if fs.mu_rank_label == 1:
            return 1
        factorable = factorable or len(fs) > 0
    return 2 if factorable else NOT_AT_MOST_TWO
