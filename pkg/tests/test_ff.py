import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from seslab.ff import (
    FieldElement,
    frobenius_q,
    is_irreducible,
    make_field,
    minimal_polynomial,
    multiplicative_order,
    norm_to_subfield,
    poly_divmod,
    poly_gcd,
    poly_mul,
    subfield_embedding,
)

SMALL_FIELDS = [(2, 1), (2, 2), (2, 3), (2, 4), (3, 1), (3, 2), (3, 3), (5, 1), (5, 2), (7, 1), (7, 2)]


def monic_polys(p, deg):
    for low in itertools.product(range(p), repeat=deg):
        yield list(low) + [1]


def irreducible_brute(f, p):
    deg = len(f) - 1
    for d in range(1, deg // 2 + 1):
        for g in monic_polys(p, d):
            if not any(poly_divmod(f, g, p)[1]):
                return False
    return True


def test_irreducible_examples():
    assert is_irreducible([1, 1, 1], 2)
    assert not is_irreducible([1, 0, 1], 2)
    assert is_irreducible([1, 1, 0, 0, 1], 2)


@pytest.mark.parametrize("p, deg", [(2, 2), (2, 3), (2, 4), (2, 5), (3, 2), (3, 3), (5, 2)])
def test_irreducible_matches_brute_force(p, deg):
    for f in monic_polys(p, deg):
        assert is_irreducible(f, p) == irreducible_brute(f, p), f


def test_irreducible_rejects_bad_input():
    with pytest.raises(ValueError):
        is_irreducible([1], 2)
    with pytest.raises(ValueError):
        is_irreducible([1, 2], 3)


def test_canonical_moduli():
    assert make_field(3, 2).modulus == (2, 1, 1)
    assert make_field(2, 2).modulus == (1, 1, 1)
    assert make_field(2, 4).modulus == (1, 1, 0, 0, 1)
    assert make_field(2, 4).to_json() == {"p": 2, "k": 4, "modulus": [1, 1, 0, 0, 1]}


@pytest.mark.parametrize("p, k", SMALL_FIELDS)
def test_modulus_is_least_primitive(p, k):
    F = make_field(p, k)
    assert multiplicative_order(F.gen) == p**k - 1
    if k == 1:
        return
    assert is_irreducible(list(F.modulus), p)
    # every smaller monic irreducible has a non-primitive root
    rank = F.encode(F.modulus[:-1])
    for n in range(rank):
        f = [(n // p**i) % p for i in range(k)] + [1]
        if is_irreducible(f, p):
            x = FieldElement(type(F)(p, k, tuple(f), p), (0, 1) + (0,) * (k - 2))
            assert multiplicative_order(x) < p**k - 1


def test_make_field_deterministic():
    assert make_field.__wrapped__(3, 4) == make_field.__wrapped__(3, 4)


@pytest.mark.parametrize("p, k", [(2, 2), (2, 3), (3, 2), (2, 4), (5, 2), (3, 3)])
def test_tables_agree_with_polynomial_arithmetic(p, k):
    F = make_field(p, k)
    T = F.tables
    els = F.elements()
    for x in els:
        for y in els:
            assert (x + y).code == T.add[x.code, y.code]
            assert (x * y).code == T.mul[x.code, y.code]
            assert (x - y).code == T.sub[x.code, y.code]
        assert (-x).code == T.neg[x.code]
        if x:
            assert (x * x.inverse()) == F.one
            assert T.inv[x.code] == x.inverse().code


@pytest.mark.parametrize("p, k", SMALL_FIELDS)
def test_order_divides_group_order(p, k):
    F = make_field(p, k)
    for x in F.elements()[1:]:
        n = multiplicative_order(x)
        assert (p**k - 1) % n == 0
        # brute force: least power equal to one
        y, m = x, 1
        while y != F.one:
            y, m = y * x, m + 1
        assert m == n


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9])
def test_frobenius_is_involutive_automorphism(q):
    from seslab.numth import prime_power
    p, a = prime_power(q)
    F = make_field(p, 2 * a)
    els = F.elements()
    for x in els:
        assert frobenius_q(frobenius_q(x, q), q) == x
        if x:
            assert norm_to_subfield(x) ** (q - 1) == F.one
    if q * q <= 81:
        for x in els:
            for y in els:
                assert frobenius_q(x + y, q) == frobenius_q(x, q) + frobenius_q(y, q)
                assert frobenius_q(x * y, q) == frobenius_q(x, q) * frobenius_q(y, q)


def test_frobenius_rejects_wrong_field():
    with pytest.raises(ValueError):
        frobenius_q(make_field(2, 3).gen, 2)


@pytest.mark.parametrize("small, big", [((2, 1), (2, 2)), ((2, 2), (2, 4)), ((3, 1), (3, 2)), ((2, 3), (2, 6)), ((3, 2), (3, 4))])
def test_subfield_embedding_is_field_homomorphism(small, big):
    S, B = make_field(*small), make_field(*big)
    emb = subfield_embedding(S, B)
    assert len(set(emb)) == S.order
    q = S.order
    for x in S.elements():
        ex = B.element(emb[x.code])
        assert ex ** q == ex  # lands in the fixed field
        for y in S.elements():
            assert emb[(x + y).code] == (ex + B.element(emb[y.code])).code
            assert emb[(x * y).code] == (ex * B.element(emb[y.code])).code


def test_mixing_fields_and_zero_inverse():
    a, b = make_field(2, 2).gen, make_field(2, 3).gen
    with pytest.raises(ValueError):
        a + b
    with pytest.raises(ZeroDivisionError):
        make_field(3, 2).zero.inverse()
    with pytest.raises(ValueError):
        multiplicative_order(make_field(3, 2).zero)


@given(st.sampled_from([(2, 4), (3, 2), (5, 2), (7, 2)]), st.data())
def test_field_axioms_sampled(pk, data):
    F = make_field(*pk)
    x, y, z = (F.element(data.draw(st.integers(0, F.order - 1))) for _ in range(3))
    assert x * (y + z) == x * y + x * z
    assert (x * y) * z == x * (y * z)
    assert x + (-x) == F.zero
    assert x ** (F.order) == x


def matrices(n, p):
    return st.lists(st.integers(0, p - 1), min_size=n * n, max_size=n * n).map(
        lambda xs: np.array(xs, dtype=np.int64).reshape(n, n))


def poly_at_matrix(f, M, p):
    n = M.shape[0]
    acc = np.zeros((n, n), dtype=np.int64)
    for c in reversed(f):
        acc = (acc @ M + c * np.eye(n, dtype=np.int64)) % p
    return acc


@settings(max_examples=60)
@given(st.sampled_from([2, 3]), st.data())
def test_minimal_polynomial_brute_force(p, data):
    M = data.draw(matrices(2 if p == 3 else 3, p))
    f = minimal_polynomial(M, p)
    assert f[-1] == 1
    assert not poly_at_matrix(f, M, p).any()
    for d in range(1, len(f) - 1):
        for g in monic_polys(p, d):
            assert poly_at_matrix(g, M, p).any()


def test_minimal_polynomial_identity():
    assert minimal_polynomial(np.eye(3, dtype=np.int64), 5) == [4, 1]


def test_poly_helpers():
    assert poly_mul([1, 1], [1, 1], 2) == [1, 0, 1]
    assert poly_gcd([1, 0, 1], [1, 1], 2) == [1, 1]
    q, r = poly_divmod([1, 0, 0, 1], [1, 1], 2)
    assert poly_mul(q, [1, 1], 2) == [1, 0, 0, 1] and not any(r)
