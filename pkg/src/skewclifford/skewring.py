"""Normal-form arithmetic in the quantum polynomial ring S.

S is generated by z_1..z_n subject to ``z_j z_i = mu_ij z_i z_j``.  Monomials
are stored as exponent tuples in the normal order z_1^e1 ... z_n^en; indices
are 0-based internally and rendered 1-based (``z1``).
"""

from __future__ import annotations

import itertools
import re
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field as dc_field

from .errors import FieldMismatch, MuConstraintViolation
from .field import Element, Field
from . import linalg

Monomial = tuple[int, ...]


class SkewRing:
    """The ring S determined by a field and a multiplicative matrix mu."""

    def __init__(self, field: Field, mu: Sequence[Sequence[int]]):
        n = len(mu)
        mu = tuple(tuple(field.coerce(x) for x in row) for row in mu)
        for i, row in enumerate(mu):
            if len(row) != n:
                raise MuConstraintViolation("mu must be square", f"/mu/{i}")
        for i in range(n):
            if mu[i][i] != 1:
                raise MuConstraintViolation(f"mu_{i+1}{i+1} must be 1", f"/mu/{i}/{i}")
            for j in range(n):
                if mu[i][j] == 0:
                    raise MuConstraintViolation(f"mu_{i+1}{j+1} is zero", f"/mu/{i}/{j}")
                if field.mul(mu[i][j], mu[j][i]) != 1:
                    raise MuConstraintViolation(
                        f"mu_{i+1}{j+1} * mu_{j+1}{i+1} != 1", f"/mu/{i}/{j}"
                    )
        self.field = field
        self.mu = mu
        self.n = n
        self._basis_cache: dict[int, list[Monomial]] = {}

    @classmethod
    def from_upper(cls, field: Field, n: int, upper: dict[tuple[int, int], int]) -> SkewRing:
        """Build from mu_ij for i < j (1-based keys); unspecified entries are 1."""
        mu = [[1] * n for _ in range(n)]
        for (i, j), v in upper.items():
            v = field.coerce(v)
            mu[i - 1][j - 1] = v
            mu[j - 1][i - 1] = field.inv(v)
        return cls(field, mu)

    def extend(self, m: int) -> tuple[SkewRing, list[int]]:
        """The same mu over the degree-m extension field, and the embedding table."""
        E, emb = self.field.extension(m)
        if m == 1:
            return self, emb
        return SkewRing(E, [[emb[x] for x in row] for row in self.mu]), emb

    def __eq__(self, other) -> bool:
        return isinstance(other, SkewRing) and self.field == other.field and self.mu == other.mu

    def __hash__(self) -> int:
        return hash((self.field, self.mu))

    def __repr__(self) -> str:
        return f"SkewRing({self.field!r}, n={self.n})"

    # -- bases ----------------------------------------------------------------

    def monomials(self, d: int) -> list[Monomial]:
        """Degree-d normal monomials, lexicographically decreasing exponent vectors."""
        if d not in self._basis_cache:
            out = []
            for word in itertools.combinations_with_replacement(range(self.n), d):
                e = [0] * self.n
                for i in word:
                    e[i] += 1
                out.append(tuple(e))
            self._basis_cache[d] = out
        return self._basis_cache[d]

    def monomial_index(self, d: int) -> dict[Monomial, int]:
        return {m: i for i, m in enumerate(self.monomials(d))}

    # -- constructors ---------------------------------------------------------

    def zero(self) -> SkewPoly:
        return SkewPoly(self, {})

    def one(self) -> SkewPoly:
        return SkewPoly(self, {(0,) * self.n: 1})

    def gen(self, i: int) -> SkewPoly:
        e = [0] * self.n
        e[i] = 1
        return SkewPoly(self, {tuple(e): 1})

    def gens(self) -> list[SkewPoly]:
        return [self.gen(i) for i in range(self.n)]

    def linear(self, coeffs: Sequence[int]) -> SkewPoly:
        terms = {}
        for i, c in enumerate(coeffs):
            if c:
                e = [0] * self.n
                e[i] = 1
                terms[tuple(e)] = c
        return SkewPoly(self, terms)

    def quadratic(self, coeffs: dict[tuple[int, int], int]) -> SkewPoly:
        """Form with coefficient ``c`` on z_i z_j for each 0-based key (i, j), i <= j."""
        terms = {}
        for (i, j), c in coeffs.items():
            if i > j:
                raise ValueError("quadratic coefficients are keyed by i <= j")
            if c:
                e = [0] * self.n
                e[i] += 1
                e[j] += 1
                terms[tuple(e)] = c
        return SkewPoly(self, terms)

    def from_vector(self, vec: Sequence[int], d: int) -> SkewPoly:
        return SkewPoly(self, {m: c for m, c in zip(self.monomials(d), vec) if c})

    # -- products -------------------------------------------------------------

    def monomial_product(self, e: Monomial, f: Monomial) -> tuple[int, Monomial]:
        """z^e * z^f = coefficient * z^(e+f)."""
        F, mu = self.field, self.mu
        c = 1
        for i in range(self.n):
            if e[i]:
                for j in range(i):
                    if f[j]:
                        c = F.mul(c, F.pow(mu[j][i], e[i] * f[j]))
        return c, tuple(a + b for a, b in zip(e, f))

    def normal_form_word(self, word: Sequence[int], coeff: int = 1) -> SkewPoly:
        """Rewrite the word z_{w1} z_{w2} ... into normal order (0-based indices)."""
        F, mu = self.field, self.mu
        c = coeff
        for s in range(len(word)):
            for t in range(s + 1, len(word)):
                if word[s] > word[t]:
                    c = F.mul(c, mu[word[t]][word[s]])
        e = [0] * self.n
        for i in word:
            e[i] += 1
        return SkewPoly(self, {tuple(e): c} if c else {})


class SkewPoly:
    """Element of S as a map from normal monomials to nonzero codes."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: SkewRing, terms: dict[Monomial, int]):
        self.ring = ring
        self.terms = {m: c for m, c in terms.items() if c}

    @property
    def field(self) -> Field:
        return self.ring.field

    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> set[int]:
        return {sum(m) for m in self.terms}

    def degree(self) -> int | None:
        """Homogeneous degree, or None for zero / inhomogeneous elements."""
        ds = self.degrees()
        return ds.pop() if len(ds) == 1 else None

    def coefficient(self, m: Monomial) -> int:
        return self.terms.get(tuple(m), 0)

    def vector(self, d: int) -> list[int]:
        return [self.terms.get(m, 0) for m in self.ring.monomials(d)]

    def linear_coeffs(self) -> list[int]:
        return [self.coefficient(tuple(1 if k == i else 0 for k in range(self.ring.n)))
                for i in range(self.ring.n)]

    def quadratic_coeffs(self) -> dict[tuple[int, int], int]:
        """Nonzero coefficients keyed by 0-based (i, j), i <= j."""
        out = {}
        for m, c in self.terms.items():
            idx = [i for i, e in enumerate(m) for _ in range(e)]
            if len(idx) != 2:
                raise ValueError("not a quadratic form")
            out[(idx[0], idx[1])] = c
        return out

    def _check(self, other: SkewPoly) -> None:
        if other.ring != self.ring:
            raise FieldMismatch("operands live in different rings")

    def _scalar(self, c) -> int:
        if isinstance(c, Element):
            return self.field.coerce(c)
        return self.field.from_int(c)

    def scale(self, c: int) -> SkewPoly:
        F = self.field
        return SkewPoly(self.ring, {m: F.mul(c, v) for m, v in self.terms.items()})

    def __add__(self, other):
        if not isinstance(other, SkewPoly):
            return NotImplemented
        self._check(other)
        F = self.field
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = F.add(terms.get(m, 0), c)
        return SkewPoly(self.ring, terms)

    def __neg__(self):
        F = self.field
        return SkewPoly(self.ring, {m: F.neg(c) for m, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, SkewPoly):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Element)):
            return self.scale(self._scalar(other))
        if not isinstance(other, SkewPoly):
            return NotImplemented
        return poly_multiply(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, Element)):
            return self.scale(self._scalar(other))
        return NotImplemented

    def __pow__(self, e: int):
        out = self.ring.one()
        for _ in range(e):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, SkewPoly) and self.ring == other.ring and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.ring, frozenset(self.terms.items())))

    def sorted_terms(self) -> list[tuple[Monomial, int]]:
        return sorted(self.terms.items(), key=lambda t: (-sum(t[0]), tuple(-x for x in t[0])))

    def to_json(self) -> dict:
        F = self.field
        return {monomial_str(m): F.to_json(c) for m, c in self.sorted_terms()}

    def __str__(self) -> str:
        return render(self)

    def __repr__(self) -> str:
        return f"SkewPoly({render(self)})"


def monomial_str(m: Monomial) -> str:
    parts = []
    for i, e in enumerate(m):
        if e == 1:
            parts.append(f"z{i+1}")
        elif e > 1:
            parts.append(f"z{i+1}^{e}")
    return "*".join(parts) if parts else "1"


_MONO_RE = re.compile(r"^z(\d+)(?:\^(\d+))?$")


def parse_monomial(key: str, n: int) -> Monomial:
    e = [0] * n
    if key.strip() == "1":
        return tuple(e)
    for part in key.replace(" ", "").split("*"):
        mt = _MONO_RE.match(part)
        if not mt:
            raise ValueError(f"bad monomial {key!r}")
        i = int(mt.group(1)) - 1
        if not 0 <= i < n:
            raise ValueError(f"generator index out of range in {key!r}")
        e[i] += int(mt.group(2) or 1)
    return tuple(e)


def render_scalar(F: Field, c: int) -> tuple[str, str]:
    """(sign, magnitude) for display; prime-field residues above p/2 print negative."""
    if F.k == 1:
        if c > F.p // 2:
            return "-", str(F.p - c)
        return "+", str(c)
    return "+", "[" + ",".join(str(x) for x in F.coeffs(c)) + "]"


def render(f: SkewPoly) -> str:
    if f.is_zero():
        return "0"
    F = f.field
    out = []
    for m, c in f.sorted_terms():
        sign, mag = render_scalar(F, c)
        mono = monomial_str(m)
        if mono == "1":
            body = mag
        elif mag == "1":
            body = mono
        else:
            body = f"{mag}*{mono}"
        if not out:
            out.append(body if sign == "+" else f"-{body}")
        else:
            out.append(f" {sign} {body}")
    return "".join(out)


def poly_multiply(f: SkewPoly, g: SkewPoly) -> SkewPoly:
    f._check(g)
    ring, F = f.ring, f.field
    terms: dict[Monomial, int] = {}
    for e, a in f.terms.items():
        for h, b in g.terms.items():
            c, m = ring.monomial_product(e, h)
            terms[m] = F.add(terms.get(m, 0), F.mul(c, F.mul(a, b)))
    return SkewPoly(ring, terms)


def normal_form_word(word: Sequence[int], coeff: int, ring: SkewRing) -> SkewPoly:
    return ring.normal_form_word(word, coeff)


def graded_ideal_piece(gens: Iterable[SkewPoly], d: int, ring: SkewRing) -> list[list[int]]:
    """Row-reduced basis of the degree-d piece of the two-sided ideal <gens>."""
    vectors = []
    for g in gens:
        e = g.degree()
        if e is None or e > d:
            if g.is_zero():
                continue
            raise ValueError("generators must be homogeneous of degree <= d")
        for a in range(d - e + 1):
            for m1 in ring.monomials(a):
                left = SkewPoly(ring, {m1: 1})
                lg = left * g
                for m2 in ring.monomials(d - e - a):
                    vectors.append((lg * SkewPoly(ring, {m2: 1})).vector(d))
    if not vectors:
        return []
    return linalg.rref(vectors, ring.field)[0]


def _express(target: list[int], spanning: list[list[int]], F: Field) -> list[int] | None:
    """Coefficients x with sum x_r spanning[r] = target, or None."""
    if not spanning:
        return [] if not any(target) else None
    cols = [[v[i] for v in spanning] for i in range(len(target))]
    return linalg.solve(cols, target, F)


@dataclass
class NormalityCertificate:
    """``left[i][j]``: q z_i = sum_j left[i][j] z_j q mod the prior ideal;
    ``right[i][j]``: z_i q = sum_j right[i][j] q z_j mod the prior ideal."""

    left: list[list[int]] = dc_field(default_factory=list)
    right: list[list[int]] = dc_field(default_factory=list)


def is_normal_element(
    q: SkewPoly, prior: Sequence[SkewPoly] = ()
) -> tuple[bool, NormalityCertificate | None]:
    """Is the degree-2 element q normal in S / <prior>?

    Checked in degree 3 only, which suffices because S is generated in degree 1.
    """
    ring, F = q.ring, q.field
    if q.is_zero() or q.degree() != 2:
        raise ValueError("q must be a nonzero quadratic form")
    ideal = graded_ideal_piece(prior, 3, ring)
    zs = ring.gens()
    zq = [(z * q).vector(3) for z in zs]
    qz = [(q * z).vector(3) for z in zs]
    cert = NormalityCertificate()
    n = ring.n
    for targets, spans, store in ((qz, zq, cert.left), (zq, qz, cert.right)):
        for i in range(n):
            x = _express(targets[i], spans + ideal, F)
            if x is None:
                return False, None
            store.append(x[:n])
    return True, cert


@dataclass
class NormalizingReport:
    normalizing: bool
    order: tuple[int, ...] | None
    certificates: list[NormalityCertificate]
    failed_at: int | None = None

    def to_json(self) -> dict:
        return {
            "normalizing": self.normalizing,
            "order": [i + 1 for i in self.order] if self.order is not None else None,
            "failed_at": self.failed_at + 1 if self.failed_at is not None else None,
        }


def _check_order(forms: Sequence[SkewPoly], order: Sequence[int]) -> NormalizingReport:
    certs = []
    for t, idx in enumerate(order):
        ok, cert = is_normal_element(forms[idx], [forms[i] for i in order[:t]])
        if not ok:
            return NormalizingReport(False, None, certs, failed_at=idx)
        certs.append(cert)
    return NormalizingReport(True, tuple(order), certs)


def check_normalizing_sequence(
    forms: Sequence[SkewPoly], policy: str = "given"
) -> NormalizingReport:
    """Test whether ``forms`` (in the given order, or some order) is normalizing."""
    if policy == "given":
        return _check_order(forms, list(range(len(forms))))
    if policy != "search":
        raise ValueError(f"unknown order policy {policy!r}")
    first = None
    for order in itertools.permutations(range(len(forms))):
        rep = _check_order(forms, order)
        if rep.normalizing:
            return rep
        first = first or rep
    return NormalizingReport(False, None, [], failed_at=first.failed_at if first else None)
