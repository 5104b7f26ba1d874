import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from seslab import linalg


def gaussian_binomial(n, k, p):
    num = den = 1
    for i in range(k):
        num *= p ** (n - i) - 1
        den *= p ** (i + 1) - 1
    return num // den


def matrices(n, p):
    return st.lists(st.integers(0, p - 1), min_size=n * n, max_size=n * n).map(
        lambda xs: np.array(xs, dtype=np.int64).reshape(n, n))


@given(matrices(3, 3))
def test_rank_nullspace(M):
    N = linalg.nullspace(M, 3)
    assert linalg.rank(M, 3) + N.shape[0] == 3
    assert np.all(M @ N.T % 3 == 0)


@given(matrices(3, 5))
def test_inverse(M):
    if not linalg.is_invertible(M, 5):
        with pytest.raises(ZeroDivisionError):
            linalg.inverse(M, 5)
        return
    assert np.array_equal(M @ linalg.inverse(M, 5) % 5, np.eye(3, dtype=np.int64))


def test_matrix_order():
    assert linalg.matrix_order([[0, 2], [1, 0]], 3) == 4
    assert linalg.matrix_order(np.eye(3, dtype=np.int64), 2) == 1
    assert linalg.matrix_order([[1, 1], [0, 1]], 5) == 5


@pytest.mark.parametrize("n, p", [(2, 2), (3, 2), (4, 2), (2, 3), (3, 3)])
def test_subspace_counts(n, p):
    subs = list(linalg.enumerate_subspaces(n, p))
    for k in range(n + 1):
        assert sum(1 for B in subs if B.shape[0] == k) == gaussian_binomial(n, k, p)
    # every basis is in reduced echelon form and distinct
    keys = {tuple(map(tuple, B)) for B in subs}
    assert len(keys) == len(subs)


def test_invariant_subspace_brute_force():
    assert linalg.has_invariant_subspace_exhaustive(np.eye(2, dtype=np.int64), 3)
    # companion matrix of x^2 + 1, irreducible over GF(3)
    assert not linalg.has_invariant_subspace_exhaustive([[0, 2], [1, 0]], 3)
    # companion matrix of x^2 + 1 = (x + 1)^2 over GF(2)
    assert linalg.has_invariant_subspace_exhaustive([[0, 1], [1, 0]], 2)
