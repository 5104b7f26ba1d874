"""Dense linear algebra over a prime field GF(p), on numpy integer arrays."""

from __future__ import annotations

import itertools

import numpy as np

__all__ = [
    "rref",
    "rank",
    "nullspace",
    "inverse",
    "matrix_order",
    "is_invertible",
    "enumerate_subspaces",
    "has_invariant_subspace_exhaustive",
]


def _as_mod(M, p: int) -> np.ndarray:
    return np.array(M, dtype=np.int64) % p


def rref(M, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form mod p and the pivot columns."""
    A = _as_mod(M, p)
    if A.ndim != 2:
        raise ValueError("rref expects a 2-d array")
    rows, cols = A.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(A[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            A[[r, piv]] = A[[piv, r]]
        A[r] = A[r] * pow(int(A[r, c]), -1, p) % p
        others = np.nonzero(A[:, c])[0]
        for i in others:
            if i != r:
                A[i] = (A[i] - A[i, c] * A[r]) % p
        pivots.append(c)
        r += 1
    return A, pivots


def rank(M, p: int) -> int:
    return len(rref(M, p)[1])


def nullspace(M, p: int) -> np.ndarray:
    """Basis of the right kernel ``{x : M x = 0}``, one vector per row."""
    A, pivots = rref(M, p)
    cols = A.shape[1]
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = np.zeros(cols, dtype=np.int64)
        v[f] = 1
        for i, c in enumerate(pivots):
            v[c] = -A[i, f] % p
        basis.append(v)
    return np.array(basis, dtype=np.int64).reshape(len(basis), cols)


def is_invertible(M, p: int) -> bool:
    A = np.asarray(M)
    return A.shape[0] == A.shape[1] and rank(A, p) == A.shape[0]


def inverse(M, p: int) -> np.ndarray:
    A = _as_mod(M, p)
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError("inverse of a non-square matrix")
    R, pivots = rref(np.hstack([A, np.eye(n, dtype=np.int64)]), p)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular mod p")
    return R[:, n:]


def matrix_order(M, p: int, limit: int | None = None) -> int:
    """Multiplicative order of an invertible matrix mod p."""
    A = _as_mod(M, p)
    n = A.shape[0]
    if not is_invertible(A, p):
        raise ValueError("matrix is not invertible")
    eye = np.eye(n, dtype=np.int64)
    limit = limit if limit is not None else p ** (n * n)
    cur, k = A.copy(), 1
    while not np.array_equal(cur, eye):
        cur = cur @ A % p
        k += 1
        if k > limit:
            raise ArithmeticError("order exceeds limit")
    return k


def enumerate_subspaces(n: int, p: int):
    """Yield a row basis (RREF) of every subspace of GF(p)^n, including 0 and the whole space."""
    yield np.zeros((0, n), dtype=np.int64)
    for dim in range(1, n + 1):
        for pivots in itertools.combinations(range(n), dim):
            # free entries: right of the pivot in its row, outside pivot columns
            slots = [(i, c) for i, pc in enumerate(pivots)
                     for c in range(pc + 1, n) if c not in pivots]
            for values in itertools.product(range(p), repeat=len(slots)):
                B = np.zeros((dim, n), dtype=np.int64)
                for i, pc in enumerate(pivots):
                    B[i, pc] = 1
                for (i, c), v in zip(slots, values):
                    B[i, c] = v
                yield B


def has_invariant_subspace_exhaustive(M, p: int) -> bool:
    """True iff some subspace 0 < W < GF(p)^n satisfies M W ⊆ W.

    Brute force over all subspaces; only sensible for small n and p.
    Vectors are columns, so the image of the row basis B is ``B @ M.T``.
    """
    A = _as_mod(M, p)
    n = A.shape[0]
    for B in enumerate_subspaces(n, p):
        dim = B.shape[0]
        if dim == 0 or dim == n:
            continue
        image = B @ A.T % p
        if rank(np.vstack([B, image]), p) == dim:
            return True
    return False
