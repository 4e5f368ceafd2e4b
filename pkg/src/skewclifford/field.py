"""Exact arithmetic in finite fields F_{p^k}, p an odd prime.

Elements are represented by integer codes ``c0 + c1*p + ... + c_{k-1}*p^(k-1)``
where ``(c0, ..., c_{k-1})`` are the coordinates against the powers of the
extension generator ``t``.  For prime fields the code is simply the residue.
Codes are canonical, so equality of elements is equality of integers, and the
canonical enumeration order of a field is increasing code order.

Scalar operations act on these codes (``F.mul(a, b)``); the ``v*`` methods are
the numpy-vectorised counterparts used by the enumeration kernels.  ``F(x)``
wraps a value as an :class:`Element` for operator-style arithmetic.
"""

from __future__ import annotations

import functools
import itertools
from collections.abc import Iterator, Sequence

import numpy as np

from .errors import (
    DivisionByZero,
    EvenCharacteristic,
    FieldMismatch,
    InputError,
    NonPrime,
    ReducibleMinPoly,
)

DEFAULT_MAX_DEGREE = 2
MAX_FIELD_SIZE = 1 << 22
TABLE_FIELD_SIZE = 1024  # extension fields up to this size get full q x q tables


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


# -- polynomials over F_p, coefficient lists low degree first ---------------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: list[int], f: Sequence[int], p: int) -> list[int]:
    a = _trim([c % p for c in a])
    df = len(f) - 1
    inv_lead = pow(f[-1], p - 2, p)
    while len(a) - 1 >= df:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - df
        for i, fc in enumerate(f):
            a[shift + i] = (a[shift + i] - c * fc) % p
        _trim(a)
    return a


def _poly_mul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _trim(out)


def _poly_powmod(base: list[int], e: int, f: Sequence[int], p: int) -> list[int]:
    result = [1]
    base = _poly_mod(base, f, p)
    while e:
        if e & 1:
            result = _poly_mod(_poly_mul(result, base, p), f, p)
        base = _poly_mod(_poly_mul(base, base, p), f, p)
        e >>= 1
    return result


def _poly_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _poly_mod(a, b, p)
    return a


def is_irreducible(f: Sequence[int], p: int) -> bool:
    """Rabin's test for a monic polynomial over F_p."""
    f = list(f)
    k = len(f) - 1
    if k < 1 or f[-1] % p != 1:
        return False
    if k == 1:
        return True
    x = [0, 1]
    xq = _poly_powmod(x, p**k, f, p)
    if _trim([(c - d) % p for c, d in itertools.zip_longest(xq, x, fillvalue=0)]):
        return False
    for r in prime_factors(k):
        h = _poly_powmod(x, p ** (k // r), f, p)
        h = _trim([(c - d) % p for c, d in itertools.zip_longest(h, x, fillvalue=0)])
        if len(_poly_gcd(f, h, p)) != 1:
            return False
    return True


def default_min_poly(p: int, k: int) -> tuple[int, ...]:
    """Deterministic irreducible polynomial of degree ``k`` (low degree first).

    For ``k == 2`` this is ``t^2 - s`` with ``s`` the least quadratic
    non-residue; otherwise the first monic irreducible polynomial when the
    lower coefficients ``(c0, ..., c_{k-1})`` run through lexicographic order.
    """
    if k == 2:
        squares = {x * x % p for x in range(p)}
        s = next(x for x in range(1, p) if x not in squares)
        return ((-s) % p, 0, 1)
    for low in itertools.product(range(p), repeat=k):
        f = list(low) + [1]
        if is_irreducible(f, p):
            return tuple(f)
    raise AssertionError("unreachable: irreducible polynomials exist in every degree")


class Field:
    """The finite field F_{p^k}; build instances with :func:`make_field`."""

    def __init__(self, p: int, k: int, min_poly: tuple[int, ...] | None):
        self.p = p
        self.k = k
        self.q = p**k
        self.min_poly = min_poly
        q = self.q
        if k == 1:
            self.mul = self._mul_prime
            self.add = self._add_prime
            self.sub = self._sub_prime
            self._inv = [0] + [pow(a, p - 2, p) for a in range(1, p)]
        else:
            self.mul = self._mul_ext
            self.add = self._add_ext
            self.sub = self._sub_ext
            self._build_log_tables()
            self._inv = [0] + [self._exp[(q - 1 - self._log[a]) % (q - 1)] for a in range(1, q)]
            if q <= TABLE_FIELD_SIZE:
                self._build_full_tables()
        self._neg = [self._neg_code(a) for a in range(q)]
        self._neg_np = np.asarray(self._neg, dtype=np.int64)
        self._inv_np = np.asarray(self._inv, dtype=np.int64)
        roots: list[int] = [-1] * q
        for r in range(q):
            s = self.mul(r, r)
            if roots[s] < 0:
                roots[s] = r
        self._sqrt = roots

    # -- construction helpers ------------------------------------------------

    def _digits(self, a: int) -> list[int]:
        p = self.p
        out = []
        for _ in range(self.k):
            out.append(a % p)
            a //= p
        return out

    def _from_digits(self, ds: Sequence[int]) -> int:
        code = 0
        for d in reversed(ds):
            code = code * self.p + d % self.p
        return code

    def _neg_code(self, a: int) -> int:
        return self._from_digits([-d for d in self._digits(a)])

    def _slow_mul(self, a: int, b: int) -> int:
        prod = _poly_mul(self._digits(a), self._digits(b), self.p)
        return self._from_digits(_poly_mod(prod, self.min_poly, self.p) + [0] * self.k)

    def _build_log_tables(self) -> None:
        q = self.q
        for g in range(2, q):
            if all(self._slow_pow(g, (q - 1) // r) != 1 for r in prime_factors(q - 1)):
                break
        exp = [1] * (2 * (q - 1))
        log = [0] * q
        x = 1
        for i in range(q - 1):
            exp[i] = x
            log[x] = i
            x = self._slow_mul(x, g)
        exp[q - 1:] = exp[: q - 1]
        self.generator = g
        self._exp = exp
        self._log = log
        self._exp_np = np.array(exp, dtype=np.int64)
        self._log_np = np.array(log, dtype=np.int64)

    def _build_full_tables(self) -> None:
        q = self.q
        codes = np.arange(q, dtype=np.int64)
        a, b = np.meshgrid(codes, codes, indexing="ij")
        self._add_np = self._vadd_digits(a, b).ravel()
        self._mul_np = self._vmul_log(a, b).ravel()
        self._add_list = self._add_np.tolist()
        self.add = self._add_table

    def _add_table(self, a: int, b: int) -> int:
        return self._add_list[a * self.q + b]

    def _slow_pow(self, a: int, e: int) -> int:
        r = 1
        while e:
            if e & 1:
                r = self._slow_mul(r, a)
            a = self._slow_mul(a, a)
            e >>= 1
        return r

    # -- scalar arithmetic on codes -------------------------------------------

    def _add_prime(self, a: int, b: int) -> int:
        return (a + b) % self.p

    def _sub_prime(self, a: int, b: int) -> int:
        return (a - b) % self.p

    def _mul_prime(self, a: int, b: int) -> int:
        return a * b % self.p

    def _add_ext(self, a: int, b: int) -> int:
        p = self.p
        out, scale = 0, 1
        for _ in range(self.k):
            out += ((a % p + b % p) % p) * scale
            a //= p
            b //= p
            scale *= p
        return out

    def _sub_ext(self, a: int, b: int) -> int:
        return self._add_ext(a, self._neg[b])

    def _mul_ext(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def neg(self, a: int) -> int:
        return self._neg[a]

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("inverse of zero")
        return self._inv[a]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv(a), -e
        r = 1
        while e:
            if e & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            e >>= 1
        return r

    def square_roots(self, c: int) -> set[int]:
        r = self._sqrt[c]
        if r < 0:
            return set()
        return {r, self._neg[r]}

    def is_square(self, c: int) -> bool:
        return self._sqrt[c] >= 0

    def sqrt(self, c: int) -> int | None:
        """The root of ``c`` with the smallest code, or None."""
        r = self._sqrt[c]
        if r < 0:
            return None
        return min(r, self._neg[r])

    # -- conversion -----------------------------------------------------------

    def from_int(self, n: int) -> int:
        """Image of the integer ``n`` under Z -> F."""
        return n % self.p

    def coeffs(self, a: int) -> tuple[int, ...]:
        return tuple(self._digits(a))

    def coerce(self, value) -> int:
        """Canonical code from JSON-style input (int, or length-k int list)."""
        if isinstance(value, Element):
            if value.field != self:
                raise FieldMismatch(f"element of {value.field} used in {self}")
            return value.code
        if isinstance(value, bool):
            raise InputError(f"not a scalar: {value!r}")
        if isinstance(value, int):
            return value % self.p
        if isinstance(value, (list, tuple)) and all(
            isinstance(v, int) and not isinstance(v, bool) for v in value
        ):
            if len(value) != self.k:
                raise InputError(f"expected {self.k} coordinates, got {len(value)}")
            return self._from_digits(list(value))
        raise InputError(f"not a scalar: {value!r}")

    def to_json(self, a: int):
        return a if self.k == 1 else list(self._digits(a))

    def describe(self) -> dict:
        d = {"p": self.p, "k": self.k}
        if self.k > 1:
            d["min_poly"] = list(self.min_poly)
        return d

    def elements(self) -> range:
        return range(self.q)

    def __call__(self, value) -> Element:
        return Element(self.coerce(value), self)

    # -- vectorised arithmetic ------------------------------------------------

    def vadd(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.k == 1:
            return (a + b) % self.p
        if self.q <= TABLE_FIELD_SIZE:
            return self._add_np[a * self.q + b]
        return self._vadd_digits(a, b)

    def _vadd_digits(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        p = self.p
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        scale = 1
        for _ in range(self.k):
            out += ((a % p + b % p) % p) * scale
            a = a // p
            b = b // p
            scale *= p
        return out

    def vneg(self, a: np.ndarray) -> np.ndarray:
        if self.k == 1:
            return (-a) % self.p
        return self._neg_np[a]

    def vsub(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.k == 1:
            return (a - b) % self.p
        return self.vadd(a, self.vneg(b))

    def vmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.k == 1:
            return (a * b) % self.p
        if self.q <= TABLE_FIELD_SIZE:
            return self._mul_np[a * self.q + b]
        return self._vmul_log(a, b)

    def _vmul_log(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        a, b = np.broadcast_arrays(a, b)
        out = self._exp_np[self._log_np[a] + self._log_np[b]]
        out[(a == 0) | (b == 0)] = 0
        return out

    def vinv(self, a: np.ndarray) -> np.ndarray:
        return self._inv_np[a]

    def square_mask(self) -> np.ndarray:
        """Boolean array indexed by code: is the element a square."""
        return np.asarray(self._sqrt, dtype=np.int64) >= 0

    # -- extensions -----------------------------------------------------------

    def extension(self, m: int) -> tuple[Field, list[int]]:
        """The degree-``m`` extension and the embedding table of ``self`` into it."""
        return _extension(self, m)

    def __eq__(self, other) -> bool:
        return isinstance(other, Field) and (self.p, self.k, self.min_poly) == (
            other.p,
            other.k,
            other.min_poly,
        )

    def __hash__(self) -> int:
        return hash((self.p, self.k, self.min_poly))

    def __repr__(self) -> str:
        return f"GF({self.p}^{self.k})" if self.k > 1 else f"GF({self.p})"


@functools.lru_cache(maxsize=None)
def _make_field(p: int, k: int, min_poly: tuple[int, ...] | None) -> Field:
    return Field(p, k, min_poly)


def make_field(
    p: int,
    k: int = 1,
    min_poly: Sequence[int] | None = None,
    *,
    max_degree: int | None = DEFAULT_MAX_DEGREE,
) -> Field:
    """Validated finite field F_{p^k}; identical inputs return the same object.

    ``min_poly`` lists the coefficients of a monic irreducible polynomial of
    degree ``k`` from the constant term upwards.
    """
    if not is_prime(p):
        raise NonPrime(f"{p} is not prime")
    if p == 2:
        raise EvenCharacteristic("characteristic 2 is not supported")
    if k < 1:
        raise InputError(f"extension degree must be >= 1, got {k}")
    if max_degree is not None and k > max_degree:
        raise InputError(f"extension degree {k} exceeds configured maximum {max_degree}")
    if p**k > MAX_FIELD_SIZE:
        raise InputError(f"field of size {p}^{k} is too large")
    if k == 1:
        if min_poly is not None and len(min_poly) != 2:
            raise ReducibleMinPoly("a prime field takes no minimal polynomial")
        return _make_field(p, 1, None)
    if min_poly is None:
        poly = default_min_poly(p, k)
    else:
        poly = tuple(c % p for c in min_poly)
        if len(poly) != k + 1 or poly[-1] != 1:
            raise ReducibleMinPoly(f"min_poly must be monic of degree {k}")
        if not is_irreducible(poly, p):
            raise ReducibleMinPoly(f"{list(poly)} is reducible over F_{p}")
    return _make_field(p, k, poly)


@functools.lru_cache(maxsize=None)
def _extension(F: Field, m: int) -> tuple[Field, list[int]]:
    if m == 1:
        return F, list(range(F.q))
    E = make_field(F.p, F.k * m, max_degree=None)
    if F.k == 1:
        return E, list(range(F.p))
    # Send t to the least root of F's minimal polynomial inside E.
    def ev(x):
        acc = 0
        for c in reversed(F.min_poly):
            acc = E.add(E.mul(acc, x), c)
        return acc

    root = next(x for x in E.elements() if ev(x) == 0)
    powers = [1]
    for _ in range(F.k - 1):
        powers.append(E.mul(powers[-1], root))
    table = []
    for a in F.elements():
        acc = 0
        for c, pw in zip(F.coeffs(a), powers):
            acc = E.add(acc, E.mul(c, pw))
        table.append(acc)
    return E, table


class Element:
    """Operator-friendly wrapper around a field code."""

    __slots__ = ("code", "field")

    def __init__(self, code: int, field: Field):
        self.code = code
        self.field = field

    def _other(self, other) -> int:
        if isinstance(other, Element):
            if other.field != self.field:
                raise FieldMismatch(f"{self.field} vs {other.field}")
            return other.code
        if isinstance(other, int):
            return self.field.from_int(other)
        return NotImplemented

    def __add__(self, other):
        return Element(self.field.add(self.code, self._other(other)), self.field)

    __radd__ = __add__

    def __sub__(self, other):
        return Element(self.field.sub(self.code, self._other(other)), self.field)

    def __rsub__(self, other):
        return Element(self.field.sub(self._other(other), self.code), self.field)

    def __mul__(self, other):
        return Element(self.field.mul(self.code, self._other(other)), self.field)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return Element(self.field.div(self.code, self._other(other)), self.field)

    def __rtruediv__(self, other):
        return Element(self.field.div(self._other(other), self.code), self.field)

    def __neg__(self):
        return Element(self.field.neg(self.code), self.field)

    def __pow__(self, e: int):
        return Element(self.field.pow(self.code, e), self.field)

    def inverse(self) -> Element:
        return Element(self.field.inv(self.code), self.field)

    def square_roots(self) -> set[Element]:
        return {Element(r, self.field) for r in self.field.square_roots(self.code)}

    def __eq__(self, other) -> bool:
        if isinstance(other, Element):
            return self.field == other.field and self.code == other.code
        if isinstance(other, int):
            return self.code == self.field.from_int(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.code, self.field))

    def __repr__(self) -> str:
        if self.field.k == 1:
            return f"{self.code}"
        return f"{list(self.field.coeffs(self.code))}"


def enumerate_field(F: Field) -> Iterator[int]:
    """All element codes of ``F`` in canonical order."""
    return iter(F.elements())


def projective_count(q: int, n: int) -> int:
    return (q**n - 1) // (q - 1)


def enumerate_projective(F: Field, n: int) -> Iterator[tuple[int, ...]]:
    """Points of P^{n-1}(F), first nonzero coordinate 1, in lexicographic order."""
    if n < 1:
        raise InputError("n must be >= 1")
    for lead in range(n - 1, -1, -1):
        head = (0,) * lead + (1,)
        for tail in itertools.product(F.elements(), repeat=n - 1 - lead):
            yield head + tail


def projective_chunks(q: int, n: int, chunk: int = 1 << 18) -> Iterator[np.ndarray]:
    """Same points as :func:`enumerate_projective`, as int64 arrays of shape (B, n)."""
    for lead in range(n - 1, -1, -1):
        free = n - 1 - lead
        total = q**free
        for start in range(0, total, chunk):
            idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
            pts = np.zeros((len(idx), n), dtype=np.int64)
            pts[:, lead] = 1
            for col in range(n - 1, lead, -1):
                pts[:, col] = idx % q
                idx //= q
            yield pts


def normalize_projective(F: Field, v: Sequence[int]) -> tuple[tuple[int, ...], int]:
    """Scale ``v`` so its first nonzero entry is 1; returns (point, removed factor)."""
    for x in v:
        if x:
            inv = F.inv(x)
            return tuple(F.mul(inv, y) for y in v), x
    raise InputError("the zero vector is not a projective point")
