import itertools

import numpy as np
import pytest

from seslab.constructions import (
    SP_WHITELIST,
    construct,
    det3,
    dihedral,
    gl,
    gl_order,
    heisenberg,
    heisenberg_matrix,
    is_unitary,
    mat_mul,
    preserves_form,
    sl2,
    sp_form,
    sp_group,
    sp_order,
    su3_center_basis,
    su3_matrix,
    su3_sylow,
    unitary_params,
    unitriangular,
)
from seslab.ff import make_field
from seslab.grp import center, derived_subgroup, exponent, frattini, order_histogram
from seslab.numth import prime_power

QS = [2, 3, 4, 5, 7, 8, 9]


def su3_mat(G, idx):
    amb = G.ambient
    a, b = amb.split(G.keys[idx])
    return su3_matrix(amb.F, amb.q, int(a), int(b))


def heis_mat(G, idx):
    amb = G.ambient
    a, b, c = amb.split(G.keys[idx])
    return heisenberg_matrix(amb.F, int(a), int(b), int(c))


def sample(n, k, seed=0):
    if n <= k:
        return np.arange(n)
    return np.random.default_rng(seed).choice(n, size=k, replace=False)


@pytest.mark.parametrize("q", QS)
def test_su3_elements_unitary_det_one(q):
    G = su3_sylow(q)
    assert G.order == q**3
    J = unitary_params(q).gram
    for i in sample(G.order, 10**3 if q > 4 else G.order):
        M = su3_mat(G, i)
        assert is_unitary(M, q, J)
        assert det3(M) == M[0][0].field.one


@pytest.mark.parametrize("q", [2, 3])
def test_su3_constraint_rederived_by_brute_force(q):
    """All unitriangular (a, b) matrices passing the predicate are exactly the group."""
    p, a = prime_power(q)
    F2 = make_field(p, 2 * a)
    G = su3_sylow(q)
    found = set()
    for x, y in itertools.product(range(F2.order), repeat=2):
        if is_unitary(su3_matrix(F2, q, x, y), q):
            found.add(int(G.ambient.join(x, y)))
    assert found == set(int(k) for k in G.keys)


def test_identity_gram_fails_for_unitriangular():
    # with J = I a nontrivial unitriangular matrix is never unitary
    G = su3_sylow(3)
    I3 = [[int(i == j) for j in range(3)] for i in range(3)]
    assert all(not is_unitary(su3_mat(G, i), 3, I3) for i in range(1, G.order))


@pytest.mark.parametrize("q", QS)
def test_coordinate_laws_match_matrices(q):
    G, H = su3_sylow(q), heisenberg(q)
    if q <= 3:
        pairs = list(itertools.product(range(q**3), repeat=2))
    else:
        rng = np.random.default_rng(q)
        pairs = rng.integers(0, q**3, size=(300, 2))
    for i, j in pairs:
        k = int(G.mul(i, j))
        assert mat_mul(su3_mat(G, i), su3_mat(G, j)) == su3_mat(G, k)
        k = int(H.mul(i, j))
        assert mat_mul(heis_mat(H, i), heis_mat(H, j)) == heis_mat(H, k)


def test_coordinate_laws_random_pairs_vectorized():
    """10^4 pairs per q, via the field tables, against the (a, b) law."""
    for q in [4, 5, 7, 8, 9]:
        G = su3_sylow(q)
        amb = G.ambient
        T = amb.F.tables
        rng = np.random.default_rng(0)
        i, j = rng.integers(0, G.order, size=(2, 10**4))
        a1, b1 = amb.split(G.keys[i])
        a2, b2 = amb.split(G.keys[j])
        expect = amb.join(T.add[a1, a2], T.sub[T.add[b1, b2], T.mul[a1, amb.frob[a2]]])
        assert np.array_equal(G.keys[G.mul(i, j)], expect)


@pytest.mark.parametrize("q", QS)
def test_landmarks_coincide(q):
    for G in (su3_sylow(q), heisenberg(q)):
        Z = center(G)
        assert Z.order == q
        assert Z == derived_subgroup(G) == frattini(G)


def test_su3_examples():
    assert order_histogram(su3_sylow(2)) == {1: 1, 2: 1, 4: 6}
    assert exponent(su3_sylow(3)) == 3
    G = su3_sylow(4)
    assert center(G).order == 4
    assert order_histogram(G)[2] == 3


@pytest.mark.parametrize("q", QS)
def test_su3_center_is_trace_zero(q):
    G = su3_sylow(q)
    amb = G.ambient
    basis = su3_center_basis(q)
    T = amb.F.tables
    zeros = [b for b in range(amb.Q) if T.add[b, amb.frob[b]] == 0]
    assert len(zeros) == q
    assert all(T.add[b, amb.frob[b]] == 0 for b in basis)
    zkeys = sorted(int(amb.join(0, b)) for b in zeros)
    assert sorted(int(k) for k in G.keys[center(G).members]) == zkeys


def test_heisenberg_examples():
    assert order_histogram(heisenberg(2))[2] == 5
    H3 = heisenberg(3)
    assert exponent(H3) == 3 and center(H3).order == 3
    assert order_histogram(heisenberg(4))[2] == (2 * 4 - 1) * 4 - 1


@pytest.mark.parametrize("q", [2, 3, 4])
def test_unitriangular_3_is_heisenberg(q):
    U, H = unitriangular(3, q), heisenberg(q)
    mats = {tuple(np.asarray(U.ambient.decode(int(k))).ravel()) for k in U.keys}
    F = H.ambient.F
    hm = set()
    for i in range(H.order):
        M = heis_mat(H, i)
        hm.add(tuple(x.code for row in M for x in row))
    assert mats == hm


def test_unitriangular_small():
    U = unitriangular(2, 3)
    assert U.order == 3 and order_histogram(U) == {1: 1, 3: 2}
    assert unitriangular(4, 2).order == 64


@pytest.mark.parametrize("n, p", sorted(SP_WHITELIST - {(6, 2)}))
def test_sp_orders_and_form(n, p):
    G = sp_group(n, p)
    assert G.order == sp_order(n, p)
    J = sp_form(n, p)
    assert preserves_form(G, J, sample=None if G.order <= 1000 else 2000)


def test_sp6_2_order_and_form():
    G = sp_group(6, 2)
    assert G.order == 1451520 == sp_order(6, 2)
    assert preserves_form(G, sp_form(6, 2), sample=2000)


def test_sp2_3_is_sl2_3():
    assert order_histogram(sp_group(2, 3)) == order_histogram(sl2(3))
    assert sp_group(2, 3).order == 24


def test_sp_whitelist():
    with pytest.raises(ValueError):
        sp_group(4, 5)


@pytest.mark.parametrize("n, p", [(2, 2), (2, 3), (3, 2)])
def test_gl_order_and_singer_bound(n, p):
    G = gl(n, p)
    assert G.order == gl_order(n, p)
    assert G.element_orders.max() == p**n - 1


def test_sl2_determinant_and_orders():
    for p in [2, 3, 5, 7]:
        G = sl2(p)
        assert G.order == p * (p * p - 1)
        mats = G.ambient.decode_many(G.keys)
        dets = (mats[:, 0, 0] * mats[:, 1, 1] - mats[:, 0, 1] * mats[:, 1, 0]) % p
        assert np.all(dets == 1)
    orders = sl2(5).element_orders
    assert max(int(o) for o in orders if o % 5) == 6


@pytest.mark.parametrize("spec, order", [("su3:3", 27), ("heis:2", 8), ("sp:4,2", 720), ("sl2:7", 336),
                                         ("gl:2,3", 48), ("ut:4,2", 64)])
def test_construct_specs(spec, order):
    assert construct(spec).order == order


@pytest.mark.parametrize("spec", ["su3:6", "sp:3,2", "gl:2", "foo:3", "su3:", "ut:4"])
def test_construct_rejects(spec):
    with pytest.raises(ValueError):
        construct(spec)


def test_dihedral():
    assert order_histogram(dihedral(4)) == {1: 1, 2: 5, 4: 2}
