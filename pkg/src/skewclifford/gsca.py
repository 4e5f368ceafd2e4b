"""Presentations of graded skew Clifford algebras.

The algebra lives on generators x_1..x_n.  Writing
``Y_ij = x_i x_j + mu_ij x_j x_i`` (so ``Y_ii = 2 x_i^2``), its degree-2
relation space W is spanned by the combinations ``sum alpha_ij Y_ij`` that
vanish after substituting ``Y_ij -> sum_k (M_k)_ij y_k``; the ``y_k``
themselves are recovered as ``sum gamma_ijk Y_ij``.

Free-algebra elements of degree d are dense vectors of length n^d indexed by
words read as base-n numbers (x_1 x_2 -> 0 * n + 1).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BudgetExceeded, DependentMatrices
from .field import Field
from .quadforms import tau
from .quadsys import QuadricSystem
from .skewring import SkewRing, render_scalar
from . import linalg

MAX_HILBERT_DEGREE = 4
MAX_WORD_SPACE = 1 << 16


def upper_pairs(n: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(n) for j in range(i, n)]


def y_vector(ring: SkewRing, i: int, j: int) -> list[int]:
    """Y_ij as a degree-2 free-algebra vector."""
    F, n = ring.field, ring.n
    v = [0] * (n * n)
    if i == j:
        v[i * n + i] = F.from_int(2)
    else:
        v[i * n + j] = 1
        v[j * n + i] = ring.mu[i][j]
    return v


def combine(coeffs, vectors, F: Field) -> list[int]:
    out = [0] * len(vectors[0])
    for c, vec in zip(coeffs, vectors):
        if c:
            out = [F.add(x, F.mul(c, y)) for x, y in zip(out, vec)]
    return out


@dataclass
class GscaPresentation:
    ring: SkewRing
    alpha: list[list[int]]
    gamma: list[list[int]]
    relators: list[list[int]]
    y: list[list[int]]

    @property
    def n(self) -> int:
        return self.ring.n

    @property
    def field(self) -> Field:
        return self.ring.field

    @property
    def pairs(self) -> list[tuple[int, int]]:
        return upper_pairs(self.n)

    def relator_strings(self) -> list[str]:
        return [render_free(r, self.field, self.n) for r in self.relators]

    def y_strings(self) -> list[str]:
        return [render_free(v, self.field, self.n) for v in self.y]

    def to_json(self) -> dict:
        F = self.field
        return {
            "n": self.n,
            "relations": [
                {
                    "alpha": {f"{i+1}{j+1}": F.to_json(c) for (i, j), c in zip(self.pairs, row) if c},
                    "text": s,
                }
                for row, s in zip(self.alpha, self.relator_strings())
            ],
            "y": [
                {
                    "gamma": {f"{i+1}{j+1}": F.to_json(c) for (i, j), c in zip(self.pairs, g) if c},
                    "text": s,
                }
                for g, s in zip(self.gamma, self.y_strings())
            ],
        }


def render_free(vec, F: Field, n: int) -> str:
    """Human-readable degree-2 free-algebra element, words in lexicographic order."""
    parts = []
    for idx, c in enumerate(vec):
        if not c:
            continue
        i, j = divmod(idx, n)
        word = f"x{i+1}^2" if i == j else f"x{i+1}*x{j+1}"
        sign, mag = render_scalar(F, c)
        term = word if mag == "1" else f"{mag}*{word}"
        if not parts:
            parts.append(("-" if sign == "-" else "") + term)
        else:
            parts.append(f" {sign} {term}")
    return "".join(parts) if parts else "0"


def build_presentation(sys: QuadricSystem) -> GscaPresentation:
    ring, F, n = sys.ring, sys.field, sys.n
    C = sys.coordinate_matrix()
    if linalg.rank(C, F) < n:
        raise DependentMatrices("the matrices M_1..M_n are linearly dependent")
    alpha = linalg.left_nullspace(C, F)
    CT = [list(col) for col in zip(*C)]
    gamma = []
    for k in range(n):
        g = linalg.solve(CT, [1 if l == k else 0 for l in range(n)], F)
        assert g is not None
        gamma.append(g)
    Y = [y_vector(ring, i, j) for i, j in upper_pairs(n)]
    relators = [combine(a, Y, F) for a in alpha]
    ys = [combine(g, Y, F) for g in gamma]
    return GscaPresentation(ring, alpha, gamma, relators, ys)


def _word_space_rows(pres: GscaPresentation, d: int) -> np.ndarray:
    n = pres.n
    rows = []
    for r in pres.relators:
        r = np.asarray(r, dtype=np.int64)
        for s in range(d - 1):
            left, right = n**s, n ** (d - 2 - s)
            for u in range(left):
                for v in range(right):
                    row = np.zeros(n**d, dtype=np.int64)
                    idx = (u * n * n + np.arange(n * n)) * right + v
                    row[idx] = r
                    rows.append(row)
    return np.array(rows, dtype=np.int64).reshape(len(rows), n**d)


def hilbert_dimensions(pres: GscaPresentation, dmax: int = MAX_HILBERT_DEGREE) -> list[int]:
    """dim A_d for d = 0..dmax from the rank of the relator span in each degree."""
    if dmax > MAX_HILBERT_DEGREE or pres.n**dmax > MAX_WORD_SPACE:
        raise BudgetExceeded(f"Hilbert dimensions capped at degree {MAX_HILBERT_DEGREE}")
    F, n = pres.field, pres.n
    dims = []
    for d in range(dmax + 1):
        if d < 2 or not pres.relators:
            dims.append(n**d)
            continue
        dims.append(n**d - linalg.np_rank(_word_space_rows(pres, d), F))
    return dims


def verify_presentation(pres: GscaPresentation, sys: QuadricSystem) -> bool:
    """Audit the presentation against the system it was built from."""
    ring, F, n = sys.ring, sys.field, sys.n
    npairs = n * (n + 1) // 2
    C = sys.coordinate_matrix()
    pairs = upper_pairs(n)
    # Relators vanish under Y_ij -> sum_k (M_k)_ij y_k.
    for a in pres.alpha:
        for k in range(n):
            if combine(a, [[row[k]] for row in C], F)[0]:
                return False
    # gamma inverts the coordinate map on span{M_k}.
    for k, g in enumerate(pres.gamma):
        for l in range(n):
            if combine(g, [[row[l]] for row in C], F)[0] != (1 if k == l else 0):
                return False
    if len(pres.alpha) != n * (n - 1) // 2 or linalg.rank(pres.alpha, F) != len(pres.alpha):
        return False
    if linalg.rank(pres.relators, F) != n * (n - 1) // 2:
        return False
    # Each relator is the stated combination of the Y_ij.
    Y = [y_vector(ring, i, j) for i, j in pairs]
    if any(combine(a, Y, F) != r for a, r in zip(pres.alpha, pres.relators)):
        return False
    if any(tau(M, ring) != q for M, q in zip(sys.matrices, sys.forms)):
        return False
    # W pairs to zero with the relations of S and the lifted forms, and those
    # together span the orthogonal complement of W.
    perp = []
    for i in range(n):
        for j in range(i + 1, n):
            v = [0] * (n * n)
            v[j * n + i] = 1
            v[i * n + j] = F.neg(ring.mu[i][j])
            perp.append(v)
    for q in sys.forms:
        v = [0] * (n * n)
        for (i, j), c in q.quadratic_coeffs().items():
            v[i * n + j] = c
        perp.append(v)
    for r in pres.relators:
        for v in perp:
            if combine(r, [[x] for x in v], F)[0]:
                return False
    return linalg.rank(perp, F) == npairs


def relator_value(rel, a, b, F: Field, n: int) -> int:
    """Evaluate a degree-2 free-algebra element at (a, b): x_i x_j -> a_i b_j."""
    acc = 0
    for idx, c in enumerate(rel):
        if c:
            i, j = divmod(idx, n)
            acc = F.add(acc, F.mul(c, F.mul(a[i], b[j])))
    return acc


def relation_tensor(pres: GscaPresentation) -> np.ndarray:
    """T[m, l, i]: coefficient of a_i b_l in relator m."""
    n, F = pres.n, pres.field
    T = np.zeros((len(pres.relators), n, n), dtype=np.int64)
    for m, rel in enumerate(pres.relators):
        for idx, c in enumerate(rel):
            if c:
                i, l = divmod(idx, n)
                T[m, l, i] = F.add(int(T[m, l, i]), c)
    return T


def same_span(rows_a, rows_b, F: Field) -> bool:
    ra = linalg.rank(rows_a, F)
    return ra == linalg.rank(rows_b, F) == linalg.rank(list(rows_a) + list(rows_b), F)


def free_from_words(terms: dict[tuple[int, int], int], F: Field, n: int) -> list[int]:
    """Degree-2 free element from {(i, j) 0-based word: coefficient}."""
    v = [0] * (n * n)
    for (i, j), c in terms.items():
        v[i * n + j] = F.add(v[i * n + j], F.coerce(c))
    return v


__all__ = [
    "GscaPresentation",
    "build_presentation",
    "hilbert_dimensions",
    "verify_presentation",
    "relator_value",
    "relation_tensor",
    "same_span",
    "free_from_words",
    "render_free",
    "upper_pairs",
    "y_vector",
]
