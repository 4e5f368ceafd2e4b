from __future__ import annotations

import itertools

import numpy as np
import pytest

from skewclifford.errors import DivisionByZero, EvenCharacteristic, FieldMismatch, NonPrime, ReducibleMinPoly
from skewclifford.field import (
    default_min_poly,
    enumerate_field,
    enumerate_projective,
    is_irreducible,
    make_field,
    normalize_projective,
    projective_chunks,
    projective_count,
)


def test_prime_field_examples():
    F = make_field(13)
    assert F.inv(5) == 8
    assert F.add(2, 12) == 1
    assert F.square_roots(12) == {5, 8}
    assert F.square_roots(0) == {0}
    assert make_field(5).square_roots(2) == set()


def test_default_min_poly_f169():
    F = make_field(13, 2)
    # least non-residue mod 13 is 2: t^2 - 2
    assert F.min_poly == (11, 0, 1)
    assert F.q == 169


def test_default_min_poly_higher_degree_is_first_irreducible():
    poly = default_min_poly(3, 3)
    assert is_irreducible(poly, 3)
    for low in itertools.product(range(3), repeat=3):
        cand = tuple(low) + (1,)
        if cand == poly:
            break
        assert not is_irreducible(cand, 3)


@pytest.mark.parametrize(
    "args, exc",
    [((4,), NonPrime), ((1,), NonPrime), ((2,), EvenCharacteristic), ((5, 2, [1, 0, 1]), ReducibleMinPoly)],
)
def test_make_field_errors(args, exc):
    with pytest.raises(exc):
        make_field(*args)


def test_inv_zero():
    for F in (make_field(7), make_field(3, 2)):
        with pytest.raises(DivisionByZero):
            F.inv(0)


def test_field_mismatch():
    with pytest.raises(FieldMismatch):
        make_field(5)(1) + make_field(7)(1)


def test_make_field_is_deterministic():
    assert make_field(13, 2) is make_field(13, 2)
    assert make_field(13, 2) == make_field(13, 2, [11, 0, 1])


@pytest.mark.parametrize("p,k", [(3, 1), (3, 2), (5, 2), (7, 1)])
def test_field_axioms_exhaustive(p, k):
    F = make_field(p, k)
    els = list(enumerate_field(F))
    assert els == list(range(F.q))
    for a in els:
        assert F.add(a, F.neg(a)) == 0
        if a:
            assert F.mul(a, F.inv(a)) == 1
        assert a in F.square_roots(F.mul(a, a))
        assert len(F.square_roots(a)) <= 2
    for a, b in itertools.product(els, repeat=2):
        assert F.add(a, b) == F.add(b, a)
        assert F.mul(a, b) == F.mul(b, a)
        if k == 1:
            assert F.add(a, b) == (a + b) % p
            assert F.mul(a, b) == (a * b) % p


@pytest.mark.parametrize("p,k", [(3, 2), (13, 2), (3, 3)])
def test_vectorised_ops_match_scalar(p, k):
    F = make_field(p, k, max_degree=3)
    rng = np.random.default_rng(0)
    a = rng.integers(0, F.q, 500)
    b = rng.integers(0, F.q, 500)
    assert F.vadd(a, b).tolist() == [F.add(int(x), int(y)) for x, y in zip(a, b)]
    assert F.vsub(a, b).tolist() == [F.sub(int(x), int(y)) for x, y in zip(a, b)]
    assert F.vmul(a, b).tolist() == [F.mul(int(x), int(y)) for x, y in zip(a, b)]
    assert F.vneg(a).tolist() == [F.neg(int(x)) for x in a]
    nz = a[a != 0]
    assert F.vinv(nz).tolist() == [F.inv(int(x)) for x in nz]


def test_extension_embedding_is_homomorphism():
    F = make_field(13)
    E, emb = F.extension(4)
    assert E.q == 13**4
    for a, b in [(2, 3), (5, 12), (7, 7), (0, 9)]:
        assert emb[F.add(a, b)] == E.add(emb[a], emb[b])
        assert emb[F.mul(a, b)] == E.mul(emb[a], emb[b])
    K = make_field(13, 2)
    E2, emb2 = K.extension(2)
    assert E2.q == 13**4
    for a, b in [(14, 100), (168, 3)]:
        assert emb2[K.mul(a, b)] == E2.mul(emb2[a], emb2[b])


def test_projective_examples():
    F3 = make_field(3)
    assert list(enumerate_projective(F3, 2)) == [(0, 1), (1, 0), (1, 1), (1, 2)]
    assert sum(1 for _ in enumerate_projective(make_field(13), 4)) == 2380
    assert list(enumerate_projective(make_field(5), 1)) == [(1,)]


@pytest.mark.parametrize("q", [3, 5, 7, 9, 11, 13])
@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_projective_enumeration_counts(q, n):
    p, k = {9: (3, 2)}.get(q, (q, 1))
    F = make_field(p, k)
    pts = list(enumerate_projective(F, n))
    assert len(pts) == projective_count(q, n) == (q**n - 1) // (q - 1)
    assert len(set(pts)) == len(pts)
    assert all(normalize_projective(F, v)[0] == v for v in pts)
    assert pts == sorted(pts)
    chunked = [tuple(r) for A in projective_chunks(q, n, 37) for r in A.tolist()]
    assert chunked == pts


def test_normalize_projective():
    F = make_field(7)
    pt, lam = normalize_projective(F, [0, 3, 6])
    assert pt == (0, 1, 2)
    assert F.mul(lam, 1) == 3
