"""Concrete groups: Sylow subgroups of SU3(q^2) and SL3(q), symplectic and
linear groups over prime fields, unitriangular groups and small controls.

Each construction defines an :class:`~seslab.grp.Ambient` over int64 keys and
hands generators to :func:`~seslab.grp.closure`.  The SU3 and Heisenberg
groups are multiplied in coordinates; the coordinate laws are checked
against honest 3x3 matrix products by :func:`su3_matrix` /
:func:`heisenberg_matrix` and the unitarity predicate (see the tests).
"""

from __future__ import annotations

import functools
import re
from dataclasses import dataclass
from math import prod

import numpy as np

from .ff import FieldElement, FieldSpec, make_field
from .grp import DEFAULT_BUDGET, Ambient, Group, closure
from .numth import is_prime, prime_power

__all__ = [
    "MatrixAmbient",
    "SU3Ambient",
    "HeisenbergAmbient",
    "PermutationAmbient",
    "UnitaryParams",
    "unitary_params",
    "su3_sylow",
    "su3_matrix",
    "su3_center_basis",
    "heisenberg",
    "heisenberg_matrix",
    "is_unitary",
    "mat_mul",
    "det3",
    "sp_group",
    "sp_form",
    "sp_order",
    "sl2",
    "gl",
    "gl_order",
    "unitriangular",
    "dihedral",
    "quaternion8",
    "construct",
    "SP_WHITELIST",
]

SP_WHITELIST = {(2, 2), (2, 3), (2, 5), (2, 7), (4, 2), (4, 3), (6, 2)}


# ambients -------------------------------------------------------------------

class MatrixAmbient(Ambient):
    """n x n matrices over GF(q), packed as base-q digits of field codes.

    Entry (i, j) sits at digit ``i*n + j``.  Prime fields multiply with an
    integer matmul mod p; extension fields go through the field tables.
    """

    def __init__(self, F: FieldSpec, n: int):
        self.F, self.n = F, n
        q = F.order
        if n * n * np.log2(q) > 62:
            raise ValueError(f"{n}x{n} matrices over {F!r} do not fit in int64 keys")
        self.weights = q ** np.arange(n * n, dtype=np.int64)
        self.identity = self.encode(np.eye(n, dtype=np.int64))

    def encode(self, M) -> int:
        return int(np.asarray(M, dtype=np.int64).ravel() @ self.weights)

    def encode_many(self, A: np.ndarray) -> np.ndarray:
        return A.reshape(len(A), -1) @ self.weights

    def decode_many(self, keys: np.ndarray) -> np.ndarray:
        q, n = self.F.order, self.n
        return ((keys[:, None] // self.weights[None, :]) % q).reshape(len(keys), n, n)

    def decode(self, key: int) -> np.ndarray:
        return self.decode_many(np.array([key], dtype=np.int64))[0]

    def _matmul(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        F = self.F
        if F.k == 1:
            return np.matmul(A, B) % F.p
        t = F.tables
        C = np.zeros(np.broadcast_shapes(A.shape, B.shape), dtype=np.int64)
        n = self.n
        for i in range(n):
            for j in range(n):
                acc = C[..., i, j]
                for k in range(n):
                    acc = t.add[acc, t.mul[A[..., i, k], B[..., k, j]]]
                C[..., i, j] = acc
        return C

    def mul_pairs(self, a, b):
        return self.encode_many(self._matmul(self.decode_many(a), self.decode_many(b)))

    def mul_by(self, a, g):
        return self.encode_many(self._matmul(self.decode_many(a), self.decode(g)))

    def describe(self, key):
        M = self.decode(key)
        if self.F.k == 1:
            return M.tolist()
        return [[list(self.F.decode(int(c))) for c in row] for row in M]

    def field_spec(self):
        return self.F


class SU3Ambient(Ambient):
    """Coordinates (a, b) in GF(q^2)^2, key ``a*q^2 + b``.

    Law: (a, b)(a', b') = (a + a', b + b' - a a'^q), the product of the
    matrices [[1, a, b], [0, 1, -a^q], [0, 0, 1]].
    """

    def __init__(self, q: int):
        p, a = prime_power(q)
        self.q, self.p = q, p
        self.F = make_field(p, 2 * a)
        t = self.F.tables
        self.Q = q * q
        codes = np.arange(self.Q)
        self.frob = np.array([t.pow(int(c), q) for c in codes], dtype=np.int64)
        self.norm = t.mul[codes, self.frob]
        self.identity = 0

    def split(self, keys):
        return np.divmod(np.asarray(keys, dtype=np.int64), self.Q)

    def join(self, a, b):
        return np.asarray(a, dtype=np.int64) * self.Q + b

    def in_group(self, keys) -> np.ndarray:
        t = self.F.tables
        a, b = self.split(keys)
        return t.add[t.add[b, self.frob[b]], self.norm[a]] == 0

    def mul_pairs(self, x, y):
        t = self.F.tables
        a1, b1 = self.split(x)
        a2, b2 = self.split(y)
        a = t.add[a1, a2]
        b = t.sub[t.add[b1, b2], t.mul[a1, self.frob[a2]]]
        return self.join(a, b)

    def inverse(self, keys):
        t = self.F.tables
        a, b = self.split(keys)
        return self.join(t.neg[a], t.sub[t.neg[b], self.norm[a]])

    def describe(self, key):
        a, b = divmod(int(key), self.Q)
        return [list(self.F.decode(a)), list(self.F.decode(b))]

    def field_spec(self):
        return self.F


class HeisenbergAmbient(Ambient):
    """Coordinates (a, b, c) in GF(q)^3 of [[1, a, b], [0, 1, c], [0, 0, 1]]."""

    def __init__(self, q: int):
        p, k = prime_power(q)
        self.q = q
        self.F = make_field(p, k)
        self.identity = 0

    def split(self, keys):
        keys = np.asarray(keys, dtype=np.int64)
        q = self.q
        return keys // (q * q), (keys // q) % q, keys % q

    def join(self, a, b, c):
        return (np.asarray(a, dtype=np.int64) * self.q + b) * self.q + c

    def mul_pairs(self, x, y):
        t = self.F.tables
        a1, b1, c1 = self.split(x)
        a2, b2, c2 = self.split(y)
        return self.join(t.add[a1, a2], t.add[t.add[b1, b2], t.mul[a1, c2]], t.add[c1, c2])

    def inverse(self, keys):
        t = self.F.tables
        a, b, c = self.split(keys)
        # (a,b,c)^-1 = (-a, ac - b, -c)
        return self.join(t.neg[a], t.sub[t.mul[a, c], b], t.neg[c])

    def describe(self, key):
        return [list(self.F.decode(int(v))) for v in self.split(key)]

    def field_spec(self):
        return self.F


class PermutationAmbient(Ambient):
    """Permutations of ``range(n)`` packed base n; the product applies a, then b."""

    def __init__(self, n: int):
        self.n = n
        self.weights = n ** np.arange(n, dtype=np.int64)
        self.identity = self.encode(range(n))

    def encode(self, images) -> int:
        return int(np.asarray(list(images), dtype=np.int64) @ self.weights)

    def decode_many(self, keys):
        return (np.asarray(keys)[:, None] // self.weights[None, :]) % self.n

    def mul_pairs(self, a, b):
        A, B = self.decode_many(a), self.decode_many(b)
        return np.take_along_axis(B, A, axis=1) @ self.weights

    def describe(self, key):
        return self.decode_many(np.array([key]))[0].tolist()


# SU3 and Heisenberg ---------------------------------------------------------

@dataclass(frozen=True)
class UnitaryParams:
    q: int
    field2: FieldSpec
    gram: tuple[tuple[int, ...], ...]  # antidiagonal J as field codes


def unitary_params(q: int) -> UnitaryParams:
    p, a = prime_power(q)
    F2 = make_field(p, 2 * a)
    return UnitaryParams(q, F2, ((0, 0, 1), (0, 1, 0), (1, 0, 0)))


def mat_mul(A, B):
    """Product of square matrices of FieldElements (plain polynomial arithmetic)."""
    n = len(A)
    return [[functools.reduce(lambda x, y: x + y, (A[i][k] * B[k][j] for k in range(n)))
             for j in range(n)] for i in range(n)]


def det3(M) -> FieldElement:
    return (M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1])
            - M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0])
            + M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0]))


def is_unitary(M, q: int, gram=None) -> bool:
    """``conj(M)^t J M == J`` with conj the entrywise q-th power.

    With ``J`` the identity this is ``M^-1 == conj(M)^t``; the default
    Gram matrix is the antidiagonal one used for the Sylow subgroup.
    """
    F = M[0][0].field
    n = len(M)
    if gram is None:
        gram = [[int(i + j == n - 1) for j in range(n)] for i in range(n)]
    J = [[F.element(c) if isinstance(c, int) else c for c in row] for row in gram]
    conj_t = [[M[j][i] ** q for j in range(n)] for i in range(n)]
    return mat_mul(mat_mul(conj_t, J), M) == J


def su3_matrix(F2: FieldSpec, q: int, a: int | FieldElement, b: int | FieldElement):
    a = F2.element(a) if not isinstance(a, FieldElement) else a
    b = F2.element(b) if not isinstance(b, FieldElement) else b
    zero, one = F2.zero, F2.one
    return [[one, a, b], [zero, one, -(a**q)], [zero, zero, one]]


def heisenberg_matrix(F: FieldSpec, a, b, c):
    a, b, c = (F.element(v) if not isinstance(v, FieldElement) else v for v in (a, b, c))
    zero, one = F.zero, F.one
    return [[one, a, b], [zero, one, c], [zero, zero, one]]


def _check_budget(n: int, budget: int) -> None:
    if n > budget:
        from .grp import BudgetExceeded
        raise BudgetExceeded(f"group of order {n} exceeds budget {budget}")


@functools.lru_cache(maxsize=None)
def su3_sylow(q: int, budget: int = DEFAULT_BUDGET) -> Group:
    """Sylow p-subgroup of SU3(q^2), order q^3, in (a, b) coordinates."""
    p, a = prime_power(q)
    _check_budget(q**3, budget)
    amb = SU3Ambient(q)
    F2, t = amb.F, amb.F.tables
    gens = []
    for i in range(2 * a):
        x = p**i  # code of x^i: a GF(p)-basis of GF(q^2)
        target = t.neg[amb.norm[x]]
        b = next(c for c in range(amb.Q) if t.add[c, amb.frob[c]] == target)
        gens.append(int(amb.join(x, b)))
    G = closure(gens, amb, label=f"su3:{q}", budget=budget)
    if G.order != q**3 or not np.all(amb.in_group(G.keys)):
        raise AssertionError(f"su3_sylow({q}) built {G.order} elements")
    return G


def su3_center_basis(q: int) -> list[int]:
    """GF(p)-basis (as GF(q^2) codes) of the trace-zero set {b : b + b^q = 0}."""
    from . import linalg
    amb = SU3Ambient(q)
    F2 = amb.F
    t = F2.tables
    k = F2.k
    cols = [F2.decode(int(t.add[F2.p**i, amb.frob[F2.p**i]])) for i in range(k)]
    M = np.array(cols, dtype=np.int64).T
    return [F2.encode(v) for v in linalg.nullspace(M, F2.p)]


@functools.lru_cache(maxsize=None)
def heisenberg(q: int, budget: int = DEFAULT_BUDGET) -> Group:
    """Upper unitriangular 3x3 matrices over GF(q), in (a, b, c) coordinates."""
    p, k = prime_power(q)
    _check_budget(q**3, budget)
    amb = HeisenbergAmbient(q)
    gens = [int(amb.join(p**i, 0, 0)) for i in range(k)] + [int(amb.join(0, 0, p**i)) for i in range(k)]
    G = closure(gens, amb, label=f"heis:{q}", budget=budget)
    if G.order != q**3:
        raise AssertionError(f"heisenberg({q}) built {G.order} elements")
    return G


# linear and symplectic groups -----------------------------------------------

def sp_form(n: int, p: int) -> np.ndarray:
    k = n // 2
    J = np.zeros((n, n), dtype=np.int64)
    J[:k, k:] = np.eye(k, dtype=np.int64)
    J[k:, :k] = -np.eye(k, dtype=np.int64) % p
    return J


def sp_order(n: int, p: int) -> int:
    k = n // 2
    return p ** (k * k) * prod(p ** (2 * i) - 1 for i in range(1, k + 1))


def gl_order(n: int, p: int) -> int:
    return prod(p**n - p**i for i in range(n))


def _transvection(v: np.ndarray, lam: int, J: np.ndarray, p: int) -> np.ndarray:
    # x -> x + lam <x, v> v with <x, v> = x^T J v
    n = len(v)
    return (np.eye(n, dtype=np.int64) + lam * np.outer(v, J @ v)) % p


@functools.lru_cache(maxsize=None)
def sp_group(n: int, p: int, budget: int = DEFAULT_BUDGET) -> Group:
    """Sp_n(p) generated by symplectic transvections."""
    if (n, p) not in SP_WHITELIST:
        raise ValueError(f"sp_group({n}, {p}) is outside the supported range {sorted(SP_WHITELIST)}")
    _check_budget(sp_order(n, p), budget)
    J = sp_form(n, p)
    amb = MatrixAmbient(make_field(p, 1), n)
    vectors = [np.eye(n, dtype=np.int64)[i] for i in range(n)]
    k = n // 2
    for i in range(k - 1):
        v = np.zeros(n, dtype=np.int64)
        v[i] = v[i + 1] = 1
        vectors.append(v)
    mix = np.zeros(n, dtype=np.int64)
    mix[0] = mix[k] = 1
    vectors.append(mix)
    gens = [amb.encode(_transvection(v, lam, J, p)) for v in vectors for lam in range(1, p)]
    G = closure(gens, amb, label=f"sp:{n},{p}", budget=budget)
    if G.order != sp_order(n, p):
        raise AssertionError(f"sp_group({n}, {p}) has order {G.order}, expected {sp_order(n, p)}")
    return G


def preserves_form(G: Group, J: np.ndarray, sample: int | None = None, seed: int = 0) -> bool:
    """Check ``M^T J M == J`` for all (or ``sample`` random) elements."""
    amb = G.ambient
    idx = G.all
    if sample is not None and sample < G.order:
        idx = np.random.default_rng(seed).choice(G.order, size=sample, replace=False)
    p = amb.F.p
    for start in range(0, len(idx), 1 << 15):
        M = amb.decode_many(G.keys[idx[start:start + (1 << 15)]])
        lhs = np.matmul(np.matmul(np.transpose(M, (0, 2, 1)), J), M) % p
        if not np.all(lhs == J % p):
            return False
    return True


@functools.lru_cache(maxsize=None)
def sl2(p: int, budget: int = DEFAULT_BUDGET) -> Group:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    _check_budget(p * (p * p - 1), budget)
    amb = MatrixAmbient(make_field(p, 1), 2)
    gens = [amb.encode([[1, 1], [0, 1]]), amb.encode([[1, 0], [1, 1]])]
    return closure(gens, amb, label=f"sl2:{p}", budget=budget)


@functools.lru_cache(maxsize=None)
def gl(n: int, p: int, budget: int = DEFAULT_BUDGET) -> Group:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    _check_budget(gl_order(n, p), budget)
    F = make_field(p, 1)
    amb = MatrixAmbient(F, n)
    gens = []
    for i in range(n):
        for j in range(n):
            if i != j:
                E = np.eye(n, dtype=np.int64)
                E[i, j] = 1
                gens.append(amb.encode(E))
    D = np.eye(n, dtype=np.int64)
    D[0, 0] = F.primitive
    if F.primitive != 1:
        gens.append(amb.encode(D))
    return closure(gens, amb, label=f"gl:{n},{p}", budget=budget)


@functools.lru_cache(maxsize=None)
def unitriangular(n: int, q: int, budget: int = DEFAULT_BUDGET) -> Group:
    p, k = prime_power(q)
    _check_budget(q ** (n * (n - 1) // 2), budget)
    F = make_field(p, k)
    amb = MatrixAmbient(F, n)
    gens = []
    for i in range(n - 1):
        for j in range(k):
            E = np.eye(n, dtype=np.int64)
            E[i, i + 1] = p**j
            gens.append(amb.encode(E))
    G = closure(gens, amb, label=f"ut:{n},{q}", budget=budget)
    if G.order != q ** (n * (n - 1) // 2):
        raise AssertionError("unitriangular group has the wrong order")
    return G


# small controls -------------------------------------------------------------

@functools.lru_cache(maxsize=None)
def dihedral(n: int) -> Group:
    """Dihedral group of order 2n acting on the n-gon."""
    amb = PermutationAmbient(n)
    rot = amb.encode([(i + 1) % n for i in range(n)])
    ref = amb.encode([(-i) % n for i in range(n)])
    return closure([rot, ref], amb, label=f"dihedral:{2 * n}")


@functools.lru_cache(maxsize=None)
def quaternion8() -> Group:
    """Q8 inside SL2(3)."""
    amb = MatrixAmbient(make_field(3, 1), 2)
    i = amb.encode([[0, 2], [1, 0]])
    j = amb.encode([[1, 1], [1, 2]])
    return closure([i, j], amb, label="Q8")


# spec strings ---------------------------------------------------------------

_SPEC = re.compile(r"^(su3|heis|sp|sl2|gl|ut):(\d+)(?:,(\d+))?$")


def construct(spec: str, budget: int = DEFAULT_BUDGET) -> Group:
    """Build a group from a spec string such as ``"su3:4"`` or ``"sp:6,2"``."""
    m = _SPEC.match(spec.strip())
    if not m:
        raise ValueError(f"cannot parse group spec {spec!r}")
    kind, x, y = m.group(1), int(m.group(2)), m.group(3)
    two = kind in ("sp", "gl", "ut")
    if two != (y is not None):
        raise ValueError(f"group spec {spec!r} has the wrong number of parameters")
    y = int(y) if y is not None else None
    if kind == "su3":
        return su3_sylow(x, budget)
    if kind == "heis":
        return heisenberg(x, budget)
    if kind == "sl2":
        return sl2(x, budget)
    if kind == "sp":
        return sp_group(x, y, budget)
    if kind == "gl":
        return gl(x, y, budget)
    return unitriangular(x, y, budget)
