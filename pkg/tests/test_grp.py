import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from seslab.constructions import dihedral, gl, heisenberg, quaternion8, sl2, su3_sylow, unitriangular
from seslab.grp import (
    BudgetExceeded,
    Subgroup,
    agemo,
    center,
    centralizer,
    closure,
    conjugacy_class,
    derived_subgroup,
    element_order,
    exponent,
    frattini,
    hyperplane_functionals,
    is_abelian,
    maximal_subgroups_of_center,
    nilpotency_class,
    omega,
    order_histogram,
    orders_of_keys,
    pprime_part,
    quotient,
    structure_report,
    subgroup_generated,
)

SMALL = {
    "D8": dihedral(4),
    "Q8": quaternion8(),
    "S3": dihedral(3),
    "heis:3": heisenberg(3),
    "su3:2": su3_sylow(2),
    "su3:3": su3_sylow(3),
    "gl:2,3": gl(2, 3),
}


def brute_table(G):
    """Multiplication table straight from the ambient oracle, pair by pair."""
    n = G.order
    out = np.empty((n, n), dtype=np.int64)
    for i in range(n):
        prods = G.ambient.mul_pairs(np.full(n, G.keys[i]), G.keys)
        out[i] = G.index_of(prods)
    return out


def brute_closure(G, elems):
    S = {0} | {int(e) for e in elems}
    T = brute_table(G)
    while True:
        new = {int(T[a, b]) for a in S for b in S} - S
        if not new:
            return sorted(S)
        S |= new


@pytest.mark.parametrize("name", SMALL)
def test_table_matches_oracle(name):
    G = SMALL[name]
    assert np.array_equal(G.table, brute_table(G))
    assert G.keys[0] == G.ambient.identity
    assert G.check_inverses()


@pytest.mark.parametrize("name", SMALL)
def test_center_centralizer_derived_brute_force(name):
    G = SMALL[name]
    T = brute_table(G)
    n = G.order
    Z = [g for g in range(n) if all(T[g, h] == T[h, g] for h in range(n))]
    assert list(center(G).members) == Z
    for g in range(0, n, max(1, n // 7)):
        C = [h for h in range(n) if T[g, h] == T[h, g]]
        assert list(centralizer(G, g).members) == C
    inv = G.inv
    comms = {int(T[T[inv[a], inv[b]], T[a, b]]) for a in range(n) for b in range(n)}
    assert list(derived_subgroup(G).members) == brute_closure(G, comms)


@pytest.mark.parametrize("name", SMALL)
def test_element_orders_brute_force(name):
    G = SMALL[name]
    for g in range(G.order):
        x, k = g, 1
        while x != 0:
            x, k = int(G.table[x, g]), k + 1
        assert G.element_orders[g] == k == element_order(G, g)
    assert np.array_equal(orders_of_keys(G.ambient, G.keys), G.element_orders)
    assert sum(order_histogram(G).values()) == G.order


@pytest.mark.parametrize("name", ["D8", "Q8", "heis:3", "su3:2", "su3:3"])
def test_frattini_is_intersection_of_maximal_subgroups(name):
    G = SMALL[name]
    p = G.prime
    maximal = set()
    for a, b in itertools.combinations(range(G.order), 2):
        S = subgroup_generated(G, [a, b])
        if S.order == G.order // p:
            maximal.add(tuple(S.members))
    inter = set(range(G.order))
    for M in maximal:
        inter &= set(M)
    assert list(frattini(G).members) == sorted(inter)


@pytest.mark.parametrize("name", ["D8", "Q8", "heis:3", "su3:3"])
def test_omega_agemo_brute_force(name):
    G = SMALL[name]
    p = G.prime
    small = [g for g in range(G.order) if p % G.element_orders[g] == 0]
    assert list(omega(G).members) == brute_closure(G, small)
    pth = [int(G.power(g, p)) for g in range(G.order)]
    assert list(agemo(G).members) == brute_closure(G, pth)


@pytest.mark.parametrize("name", SMALL)
def test_conjugacy_classes_partition(name):
    G = SMALL[name]
    seen = np.zeros(G.order, dtype=bool)
    for g in range(G.order):
        if seen[g]:
            continue
        cls = conjugacy_class(G, g)
        assert G.order % cls.size == 0
        assert not seen[cls].any()
        seen[cls] = True
        assert cls.size * centralizer(G, g).order == G.order
    assert seen.all()


def test_quotient_projection_is_homomorphism():
    G = su3_sylow(3)
    Z = center(G)
    Q = quotient(G, Z)
    assert Q.order == 9 and is_abelian(Q)
    a = G.all
    lhs = Q.projection[G.mul(a[:, None], a[None, :])]
    rhs = Q.mul(Q.projection[:, None], Q.projection[None, :])
    assert np.array_equal(lhs, rhs)
    assert np.array_equal(Q.projection[Q.representatives], Q.all)


def test_quotient_rejects_non_normal():
    S3 = dihedral(3)
    H = subgroup_generated(S3, [int(np.nonzero(S3.element_orders == 2)[0][0])])
    assert not H.is_normal()
    with pytest.raises(ValueError):
        quotient(S3, H)


def test_is_normal_matches_brute_force():
    G = gl(2, 3)
    T = G.table
    for g in range(0, G.order, 5):
        H = subgroup_generated(G, [g])
        brute = all(T[T[G.inv[x], h], x] in set(H.members) for x in range(G.order) for h in H.members)
        assert H.is_normal() == brute


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(0, 47), min_size=1, max_size=3))
def test_lagrange_and_closure(elems):
    G = gl(2, 3)
    H = subgroup_generated(G, elems)
    assert G.order % H.order == 0
    assert list(H.members) == brute_closure(G, elems)
    assert subgroup_generated(G, H.generating_set()) == H


def test_closure_is_deterministic():
    G1, G2 = su3_sylow.__wrapped__(4), su3_sylow.__wrapped__(4)
    assert np.array_equal(G1.keys, G2.keys)
    assert G1.generators == G2.generators


def test_budget_exceeded():
    G = heisenberg(3)
    with pytest.raises(BudgetExceeded):
        closure([int(k) for k in G.keys[list(G.generators)]], G.ambient, budget=10)


def test_nilpotency_class_and_exponent():
    assert nilpotency_class(unitriangular(4, 2)) == 3
    assert nilpotency_class(heisenberg(5)) == 2
    assert nilpotency_class(unitriangular(2, 3)) == 1
    assert nilpotency_class(dihedral(3)) is None
    assert exponent(sl2(5)) == 60
    assert exponent(unitriangular(2, 3)) == 3


def test_hyperplanes_of_center():
    for b, p in [(1, 2), (2, 2), (3, 2), (2, 3), (1, 5)]:
        fs = hyperplane_functionals(b, p)
        assert len(fs) == (p**b - 1) // (p - 1)
    G = su3_sylow(4)
    Ns = maximal_subgroups_of_center(center(G), 2)
    assert len(Ns) == 3 and all(N.order == 2 for N in Ns)


def test_full_associativity_su3_9():
    G = su3_sylow(9)
    G.check_axioms(full_limit=G.order)


def test_structure_report():
    rep = structure_report(su3_sylow(4))
    assert (rep.order, rep.a, rep.b, rep.exponent) == (64, 2, 2, 4)
    assert rep.center == rep.derived == rep.frattini
    js = rep.to_json()
    assert js["center"]["order"] == 4
    assert js["order_histogram"] == {"1": 1, "2": 3, "4": 60}


def test_group_json():
    js = heisenberg(2).to_json()
    assert js["order"] == 8 and js["field"] == {"p": 2, "k": 1, "modulus": [0, 1]}
    assert len(js["elements"]) == 8


def test_pprime_part():
    assert pprime_part(48, 2) == 3 and pprime_part(7, 2) == 7
    with pytest.raises(ValueError):
        pprime_part(0, 3)


def test_subgroup_eq_and_subset():
    G = heisenberg(3)
    Z = center(G)
    assert Z == derived_subgroup(G)
    assert Z.issubset(Subgroup(G, G.all))
    assert 0 in Z
