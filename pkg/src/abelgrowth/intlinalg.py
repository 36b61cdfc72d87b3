"""Exact integer linear algebra on small dense matrices (lists of Python ints)."""

from __future__ import annotations

from typing import Sequence

from sympy import ZZ
from sympy.polys.matrices import DM
from sympy.polys.matrices.normalforms import invariant_factors

Matrix = list[list[int]]


def determinant(rows: Sequence[Sequence[int]]) -> int:
    """Fraction-free (Bareiss) determinant of a square integer matrix."""
    n = len(rows)
    if n == 0:
        return 1
    a = [list(map(int, r)) for r in rows]
    if any(len(r) != n for r in a):
        raise ValueError("determinant needs a square matrix")
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def adjugate(rows: Sequence[Sequence[int]]) -> Matrix:
    """Classical adjoint, so that ``adj(A) @ A == det(A) * I``."""
    n = len(rows)
    if n == 1:
        return [[1]]
    adj = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [
                [rows[r][c] for c in range(n) if c != j]
                for r in range(n) if r != i
            ]
            # transpose: adj[j][i] holds cofactor (i, j)
            adj[j][i] = (-1) ** (i + j) * determinant(minor)
    return adj


def rank(vectors: Sequence[Sequence[int]]) -> int:
    """Rank over Q of a list of integer vectors."""
    return len(independent_prefix(vectors))


def independent_prefix(vectors: Sequence[Sequence[int]]) -> list[int]:
    """Indices picked by a greedy left-to-right scan keeping Q-independent vectors."""
    basis: list[tuple[int, list[int]]] = []  # (pivot column, reduced row)
    picked = []
    for idx, v in enumerate(vectors):
        row = [int(x) for x in v]
        for pivot, b in basis:
            if row[pivot]:
                f, g = b[pivot], row[pivot]
                row = [f * x - g * y for x, y in zip(row, b)]
        nz = next((c for c, x in enumerate(row) if x), None)
        if nz is not None:
            basis.append((nz, row))
            picked.append(idx)
    return picked


def lattice_invariant_factors(vectors: Sequence[Sequence[int]], dim: int) -> tuple[int, ...]:
    """Invariant factors of the lattice spanned by ``vectors`` inside Z^dim.

    The result has length ``dim``; a zero entry means the span has lower rank.
    The span is all of Z^dim iff every factor equals 1.
    """
    if dim == 0:
        return ()
    if not vectors:
        return (0,) * dim
    cols = [[int(v[i]) for v in vectors] for i in range(dim)]
    return tuple(int(f) for f in invariant_factors(DM(cols, ZZ)))


def integer_kernel(vectors: Sequence[Sequence[int]], dim: int) -> Matrix:
    """Basis of {c in Z^m : sum_i c_i * vectors[i] = 0}.

    Row-reduces [V | I] with unimodular integer row operations; rows whose
    left block vanishes carry a lattice basis of the kernel.
    """
    m = len(vectors)
    rows = [[int(x) for x in v] + [int(i == j) for j in range(m)] for i, v in enumerate(vectors)]
    top = 0
    for col in range(dim):
        while True:
            live = [i for i in range(top, m) if rows[i][col] != 0]
            if not live:
                break
            p = min(live, key=lambda i: abs(rows[i][col]))
            rows[top], rows[p] = rows[p], rows[top]
            done = True
            for i in range(top + 1, m):
                q = rows[i][col] // rows[top][col]
                if q:
                    rows[i] = [x - q * y for x, y in zip(rows[i], rows[top])]
                if rows[i][col]:
                    done = False
            if done:
                top += 1
                break
        if top == m:
            break
    return [r[dim:] for r in rows[top:]]


def gf2_rank(vectors: Sequence[Sequence[int]]) -> int:
    """Rank over the two-element field (entries are reduced mod 2)."""
    masks = []
    for v in vectors:
        mask = 0
        for bit, x in enumerate(v):
            if x % 2:
                mask |= 1 << bit
        masks.append(mask)
    r = 0
    basis: list[int] = []
    for mask in masks:
        for b in basis:
            mask = min(mask, mask ^ b)
        if mask:
            basis.append(mask)
            basis.sort(reverse=True)
            r += 1
    return r


def supporting_functional(vectors: Sequence[Sequence[int]], dim: int, max_subsets: int = 200_000):
    """A nonzero integer functional that is >= 0 on every vector, or None.

    If the vectors span Q^dim but their cone is not all of Q^dim, the cone
    has a facet spanned by dim-1 independent vectors; its normal (or the
    negation) is returned.  Returns None when no such facet exists, i.e. the
    vectors positively span.  Raises ValueError if the subset enumeration
    would exceed ``max_subsets``.
    """
    from itertools import combinations
    from math import comb

    vecs = [tuple(int(x) for x in v) for v in dict.fromkeys(tuple(v) for v in vectors) if any(v)]
    if dim == 0:
        return None
    if comb(len(vecs), dim - 1) > max_subsets:
        raise ValueError("too many facet candidates")
    for subset in combinations(vecs, dim - 1):
        normal = [
            (-1) ** i * determinant([[u[c] for c in range(dim) if c != i] for u in subset])
            for i in range(dim)
        ]
        if not any(normal):
            continue
        for sign in (1, -1):
            lam = [sign * x for x in normal]
            if all(sum(a * b for a, b in zip(lam, v)) >= 0 for v in vecs):
                return tuple(lam)
    return None
