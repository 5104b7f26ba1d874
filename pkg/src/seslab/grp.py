"""Finite groups as closed sets of integer keys.

A group lives inside an *ambient* object that knows how to multiply keys
(packed matrices, packed coordinates, coset representatives, ...).  The
:func:`closure` routine enumerates the subgroup generated by a list of keys
breadth first, and the resulting :class:`Group` numbers its elements
``0 .. n-1`` in discovery order with the identity at 0.  Groups up to
``TABLE_LIMIT`` elements carry a full multiplication table; larger ones
multiply through the ambient oracle on demand.

Everything below works on arrays of element indices, so most landmark
computations are a handful of vectorized table lookups.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import reduce
from typing import Callable, Iterable, Sequence

import numpy as np

from .numth import factor_counts

__all__ = [
    "Ambient",
    "BudgetExceeded",
    "Group",
    "Subgroup",
    "StructureReport",
    "closure",
    "subgroup_generated",
    "normal_closure",
    "commutator_subgroup",
    "center",
    "centralizer",
    "derived_subgroup",
    "omega",
    "agemo",
    "frattini",
    "exponent",
    "element_order",
    "order_histogram",
    "quotient",
    "QuotientAmbient",
    "ElementaryAbelianCoords",
    "elementary_abelian_coords",
    "hyperplane_functionals",
    "maximal_subgroups_of_center",
    "conjugacy_class",
    "nilpotency_class",
    "pprime_part",
    "orders_of_keys",
    "structure_report",
    "is_abelian",
]

TABLE_LIMIT = 4096
DEFAULT_BUDGET = 5_000_000
CHUNK = 1 << 16


class BudgetExceeded(RuntimeError):
    pass


class Ambient:
    """Multiplication oracle on int64 keys.  Subclasses set ``identity``."""

    identity: int = 0

    def mul_pairs(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def mul_by(self, a: np.ndarray, g: int) -> np.ndarray:
        return self.mul_pairs(a, np.full_like(a, g))

    def inverse(self, keys: np.ndarray) -> np.ndarray | None:
        """Inverse keys, or None when the ambient cannot invert directly."""
        return None

    def describe(self, key: int):
        """JSON-friendly rendering of one element."""
        return int(key)

    def field_spec(self):
        return None


def _chunked(fn: Callable, *arrays: np.ndarray) -> np.ndarray:
    n = len(arrays[0])
    if n <= CHUNK:
        return fn(*arrays)
    return np.concatenate([fn(*(a[i:i + CHUNK] for a in arrays)) for i in range(0, n, CHUNK)])


def orders_of_keys(ambient: Ambient, keys: np.ndarray, limit: int = 1 << 20) -> np.ndarray:
    """Element orders by repeated multiplication directly on keys, chunked."""
    def run(base):
        orders = np.zeros(base.size, dtype=np.int64)
        active = np.arange(base.size)
        cur = base.copy()
        k = 1
        while active.size:
            done = cur == ambient.identity
            orders[active[done]] = k
            active, cur = active[~done], cur[~done]
            if active.size:
                cur = ambient.mul_pairs(cur, base[active])
            k += 1
            if k > limit:
                raise AssertionError("element order exceeds limit")
        return orders
    return _chunked(run, np.asarray(keys, dtype=np.int64))


class Group:
    """Finite group on a deterministic index set with identity at index 0."""

    def __init__(self, keys: np.ndarray, ambient: Ambient, generators: Sequence[int],
                 label: str = "", validate: bool = True):
        keys = np.asarray(keys, dtype=np.int64)
        if keys.size == 0 or keys[0] != ambient.identity:
            raise ValueError("identity must be element 0")
        self.keys = keys
        self.keys.setflags(write=False)
        self.ambient = ambient
        self.generators = tuple(int(g) for g in generators)
        self.label = label
        self._perm = np.argsort(keys, kind="stable")
        self._sorted = keys[self._perm]
        if np.any(self._sorted[1:] == self._sorted[:-1]):
            raise ValueError("duplicate keys")
        self.table: np.ndarray | None = None
        self._cache: dict = {}
        if self.order <= TABLE_LIMIT:
            self.table = self._build_table()
            self.table.setflags(write=False)
        if validate:
            self.check_axioms()

    def __repr__(self) -> str:
        return f"<Group {self.label or '?'} of order {self.order}>"

    def __len__(self) -> int:
        return self.order

    @property
    def order(self) -> int:
        return int(self.keys.size)

    @property
    def all(self) -> np.ndarray:
        return np.arange(self.order, dtype=np.int64)

    @property
    def prime(self) -> int | None:
        """The prime p when |G| is a nontrivial power of p."""
        counts = factor_counts(self.order) if self.order > 1 else {}
        return next(iter(counts)) if len(counts) == 1 else None

    def cached(self, name, fn: Callable):
        if name not in self._cache:
            self._cache[name] = fn()
        return self._cache[name]

    # key <-> index
    def index_of(self, keys) -> np.ndarray:
        keys = np.asarray(keys, dtype=np.int64)
        pos = np.searchsorted(self._sorted, keys)
        pos = np.minimum(pos, self.order - 1)
        if not np.all(self._sorted[pos] == keys):
            raise KeyError("key outside the group")
        return self._perm[pos]

    def contains_keys(self, keys) -> np.ndarray:
        keys = np.asarray(keys, dtype=np.int64)
        pos = np.minimum(np.searchsorted(self._sorted, keys), self.order - 1)
        return self._sorted[pos] == keys

    # arithmetic on indices
    def _build_table(self) -> np.ndarray:
        n = self.order
        table = np.empty((n, n), dtype=np.int64)
        for j in range(n):
            table[:, j] = self.index_of(self.ambient.mul_by(self.keys, int(self.keys[j])))
        return table

    def mul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.table is not None:
            return self.table[a, b]
        a, b = np.broadcast_arrays(a, b)
        shape = a.shape
        ka, kb = self.keys[a.ravel()], self.keys[b.ravel()]
        out = _chunked(lambda x, y: self.index_of(self.ambient.mul_pairs(x, y)), ka, kb)
        return out.reshape(shape)

    @property
    def inv(self) -> np.ndarray:
        def compute():
            if self.table is not None:
                rows, cols = np.nonzero(self.table == 0)
                out = np.empty(self.order, dtype=np.int64)
                out[rows] = cols
                return out
            direct = self.ambient.inverse(self.keys)
            if direct is not None:
                return self.index_of(direct)
            return self.power(self.all, self.element_orders - 1)
        return self.cached("inv", compute)

    def power(self, a, e) -> np.ndarray:
        a, e = np.broadcast_arrays(np.asarray(a, dtype=np.int64), np.asarray(e, dtype=np.int64))
        a, e = a.copy(), e.copy()
        if np.any(e < 0):
            raise ValueError("negative exponent")
        result = np.zeros_like(a)
        while np.any(e):
            odd = (e & 1).astype(bool)
            if odd.any():
                result[odd] = self.mul(result[odd], a[odd])
            e >>= 1
            live = e > 0
            if live.any():
                a[live] = self.mul(a[live], a[live])
        return result

    def commutator(self, a, b):
        """``[a, b] = a^-1 b^-1 a b``."""
        inv = self.inv
        return self.mul(self.mul(inv[a], inv[b]), self.mul(a, b))

    def conjugate(self, a, g):
        """``g^-1 a g``."""
        return self.mul(self.mul(self.inv[g], a), g)

    @property
    def element_orders(self) -> np.ndarray:
        def compute():
            if self.table is None:
                return orders_of_keys(self.ambient, self.keys)
            n = self.order
            orders = np.zeros(n, dtype=np.int64)
            active = self.all
            cur = active.copy()
            k = 1
            while active.size:
                done = cur == 0
                orders[active[done]] = k
                active, cur = active[~done], cur[~done]
                if active.size:
                    cur = self.mul(cur, active)
                k += 1
                if k > n + 1:
                    raise AssertionError("element order exceeds group order")
            return orders
        return self.cached("orders", compute)

    def check_axioms(self, samples: int = 10_000, seed: int = 0, full_limit: int = 128) -> None:
        """Identity exhaustively, associativity fully for small groups else sampled."""
        n = self.order
        ids = np.zeros(n, dtype=np.int64)
        if not (np.array_equal(self.mul(ids, self.all), self.all)
                and np.array_equal(self.mul(self.all, ids), self.all)):
            raise AssertionError("identity axiom fails")
        if n <= full_limit and self.table is not None:
            T = self.table
            for a in range(n):  # (a b) c == a (b c) for all b, c
                if not np.array_equal(T[T[a]], T[a][T]):
                    raise AssertionError(f"associativity fails at element {a}")
            return
        rng = np.random.default_rng(seed)
        a, b, c = rng.integers(0, n, size=(3, samples))
        if not np.array_equal(self.mul(self.mul(a, b), c), self.mul(a, self.mul(b, c))):
            raise AssertionError("associativity fails on sampled triples")

    def check_inverses(self) -> bool:
        inv = self.inv
        return bool(np.all(self.mul(self.all, inv) == 0) and np.all(self.mul(inv, self.all) == 0))

    def describe(self, index: int):
        return self.ambient.describe(int(self.keys[index]))

    def to_json(self, include_elements: bool | None = None) -> dict:
        spec = self.ambient.field_spec()
        out = {
            "label": self.label,
            "field": spec.to_json() if spec is not None else None,
            "generators": [self.describe(g) for g in self.generators],
            "order": self.order,
        }
        if include_elements is None:
            include_elements = self.order <= TABLE_LIMIT
        if include_elements:
            out["elements"] = [int(k) for k in self.keys]
        return out


@dataclass(frozen=True, eq=False)
class Subgroup:
    parent: Group
    members: np.ndarray  # sorted indices

    def __post_init__(self):
        m = np.unique(np.asarray(self.members, dtype=np.int64))
        object.__setattr__(self, "members", m)
        m.setflags(write=False)

    @property
    def order(self) -> int:
        return int(self.members.size)

    def __len__(self) -> int:
        return self.order

    def mask(self) -> np.ndarray:
        out = np.zeros(self.parent.order, dtype=bool)
        out[self.members] = True
        return out

    def __contains__(self, g) -> bool:
        i = np.searchsorted(self.members, g)
        return bool(i < self.members.size and self.members[i] == g)

    def __eq__(self, other) -> bool:
        return (isinstance(other, Subgroup) and other.parent is self.parent
                and np.array_equal(self.members, other.members))

    __hash__ = object.__hash__

    def issubset(self, other: Subgroup) -> bool:
        return bool(np.all(other.mask()[self.members]))

    @property
    def keys(self) -> list[int]:
        return [int(k) for k in self.parent.keys[self.members]]

    def generating_set(self) -> list[int]:
        """Greedy generating set: members not yet in the span, in index order."""
        G = self.parent
        gens: list[int] = []
        span = np.zeros(G.order, dtype=bool)
        span[0] = True
        for g in self.members:
            if not span[g]:
                gens.append(int(g))
                span = subgroup_generated(G, gens).mask()
                if span.sum() == self.order:
                    break
        return gens

    def is_normal(self) -> bool:
        G = self.parent
        gens = self.generating_set()
        if not gens:
            return True
        m = self.mask()
        conj = G.conjugate(np.array(gens)[:, None], np.array(G.generators)[None, :])
        return bool(np.all(m[conj]))

    def as_group(self, label: str = "") -> Group:
        G = self.parent
        sub = _SubsetAmbient(G.ambient)
        keys = G.keys[self.members]
        # identity first, otherwise parent order
        gens = np.searchsorted(self.members, self.generating_set())
        return Group(keys, sub, gens, label=label or f"subgroup of {G.label}")


class _SubsetAmbient(Ambient):
    def __init__(self, base: Ambient):
        self.base = base
        self.identity = base.identity

    def mul_pairs(self, a, b):
        return self.base.mul_pairs(a, b)

    def inverse(self, keys):
        return self.base.inverse(keys)

    def describe(self, key):
        return self.base.describe(key)

    def field_spec(self):
        return self.base.field_spec()


def _bfs(frontier_keys: np.ndarray, gens: np.ndarray, step, seen_check, budget: int, total: int):
    """Shared level-by-level BFS helper; yields new keys level by level."""
    frontier = frontier_keys
    while frontier.size:
        prods = np.stack([step(frontier, g) for g in gens], axis=1).ravel()
        uniq, first = np.unique(prods, return_index=True)
        new = uniq[np.argsort(first, kind="stable")]
        new = new[~seen_check(new)]
        total += new.size
        if total > budget:
            raise BudgetExceeded(f"closure exceeded budget of {budget} elements")
        yield new
        frontier = new


def closure(generators: Iterable[int], ambient: Ambient, *, label: str = "",
            budget: int = DEFAULT_BUDGET, validate: bool = True) -> Group:
    """Group generated by ``generators`` (keys) in ``ambient``.

    Elements are indexed in breadth-first discovery order from the identity,
    right-multiplying each frontier element by the generators in the given
    order.
    """
    gens = np.array(list(generators), dtype=np.int64)
    e = ambient.identity
    levels = [np.array([e], dtype=np.int64)]
    seen = levels[0].copy()

    def seen_check(keys):
        pos = np.minimum(np.searchsorted(seen, keys), seen.size - 1)
        return seen[pos] == keys

    if gens.size:
        step = lambda frontier, g: _chunked(lambda x: ambient.mul_by(x, int(g)), frontier)
        for new in _bfs(levels[0], gens, step, seen_check, budget, 1):
            levels.append(new)
            seen = np.union1d(seen, new)
    keys = np.concatenate(levels)
    G = Group(keys, ambient, [], label=label, validate=False)
    G.generators = tuple(int(i) for i in G.index_of(gens)) if gens.size else ()
    if validate:
        G.check_axioms()
    return G


# subgroups ------------------------------------------------------------------

def subgroup_generated(G: Group, gens: Iterable[int]) -> Subgroup:
    gens = np.unique(np.asarray(list(gens), dtype=np.int64))
    gens = gens[gens != 0]
    mask = np.zeros(G.order, dtype=bool)
    mask[0] = True
    frontier = np.array([0], dtype=np.int64)
    while frontier.size and gens.size:
        prods = np.unique(G.mul(frontier[:, None], gens[None, :]).ravel())
        new = prods[~mask[prods]]
        mask[new] = True
        frontier = new
    return Subgroup(G, np.nonzero(mask)[0])


def normal_closure(G: Group, gens: Iterable[int]) -> Subgroup:
    H = subgroup_generated(G, gens)
    Ggens = np.array(G.generators, dtype=np.int64)
    while Ggens.size:
        hg = np.array(H.generating_set(), dtype=np.int64)
        if not hg.size:
            return H
        conj = np.unique(G.conjugate(hg[:, None], Ggens[None, :]).ravel())
        m = H.mask()
        if np.all(m[conj]):
            return H
        H = subgroup_generated(G, np.concatenate([H.members, conj[~m[conj]]]))
    return H


def commutator_subgroup(G: Group, H: Subgroup) -> Subgroup:
    """``[H, G]`` for a normal subgroup H."""
    Ggens = np.array(G.generators, dtype=np.int64)
    if not Ggens.size:
        return Subgroup(G, [0])
    comms = G.commutator(H.members[:, None], Ggens[None, :]).ravel()
    return normal_closure(G, np.unique(comms))


def is_abelian(G: Group) -> bool:
    g = np.array(G.generators, dtype=np.int64)
    if g.size == 0:
        return True
    return bool(np.array_equal(G.mul(g[:, None], g[None, :]), G.mul(g[None, :], g[:, None])))


def centralizer(G: Group, g: int) -> Subgroup:
    a = G.all
    return Subgroup(G, a[G.mul(a, g) == G.mul(g, a)])


def center(G: Group) -> Subgroup:
    def compute():
        a = G.all
        ok = np.ones(G.order, dtype=bool)
        for g in G.generators:
            ok &= G.mul(a, g) == G.mul(g, a)
        Z = Subgroup(G, a[ok])
        return Z
    return G.cached("center", compute)


def derived_subgroup(G: Group) -> Subgroup:
    return G.cached("derived", lambda: commutator_subgroup(G, Subgroup(G, G.all)))


def _require_p(G: Group, p: int | None) -> int:
    q = G.prime
    if G.order == 1:
        return p if p is not None else 2
    if q is None or (p is not None and p != q):
        raise ValueError(f"{G!r} is not a {p if p else 'prime power'}-group")
    return q


def omega(G: Group, p: int | None = None) -> Subgroup:
    """Subgroup generated by the elements with ``x^p = 1``."""
    p = _require_p(G, p)
    return G.cached(("omega", p), lambda: subgroup_generated(G, G.all[p % G.element_orders == 0]))


def agemo(G: Group, p: int | None = None) -> Subgroup:
    """Subgroup generated by the p-th powers."""
    p = _require_p(G, p)
    return G.cached(("agemo", p), lambda: subgroup_generated(G, np.unique(G.power(G.all, p))))


def frattini(G: Group, p: int | None = None) -> Subgroup:
    """Frattini subgroup of a p-group, as ``G' ℧(G)``."""
    p = _require_p(G, p)
    return G.cached(("frattini", p), lambda: subgroup_generated(
        G, np.concatenate([derived_subgroup(G).members, agemo(G, p).members])))


def element_order(G: Group, g: int) -> int:
    return int(G.element_orders[g])


def exponent(G: Group) -> int:
    return reduce(math.lcm, (int(o) for o in np.unique(G.element_orders)), 1)


def order_histogram(G: Group) -> dict[int, int]:
    vals, counts = np.unique(G.element_orders, return_counts=True)
    return {int(v): int(c) for v, c in zip(vals, counts)}


def conjugacy_class(G: Group, g: int) -> np.ndarray:
    return np.unique(G.conjugate(g, G.all))


def nilpotency_class(G: Group) -> int | None:
    """Nilpotency class, or None if the lower central series stalls."""
    H = Subgroup(G, G.all)
    c = 0
    while H.order > 1:
        nxt = commutator_subgroup(G, H)
        if nxt.order == H.order:
            return None
        H, c = nxt, c + 1
    return c


def pprime_part(n: int, p: int) -> int:
    if n < 1:
        raise ValueError("n must be positive")
    while n % p == 0:
        n //= p
    return n


# quotients ------------------------------------------------------------------

class QuotientAmbient(Ambient):
    """Cosets of N in G, each named by the key of its least-index member."""

    def __init__(self, G: Group, N: Subgroup):
        self.G, self.N = G, N
        cosets = G.mul(G.all[:, None], N.members[None, :])
        self.rep = cosets.min(axis=1)
        self.identity = int(G.keys[0])

    def mul_pairs(self, a, b):
        G = self.G
        return G.keys[self.rep[G.mul(G.index_of(a), G.index_of(b))]]

    def describe(self, key):
        return self.G.ambient.describe(key)

    def field_spec(self):
        return self.G.ambient.field_spec()


def quotient(G: Group, N: Subgroup) -> Group:
    if N.parent is not G:
        raise ValueError("subgroup of a different group")
    if not N.is_normal():
        raise ValueError("subgroup is not normal")
    amb = QuotientAmbient(G, N)
    gens = np.unique(G.keys[amb.rep[np.array(G.generators, dtype=np.int64)]]) if G.generators else []
    gens = [int(k) for k in gens if k != amb.identity]
    Q = closure(gens, amb, label=f"{G.label}/N{N.order}")
    if Q.order * N.order != G.order:
        raise AssertionError("quotient order mismatch")
    Q.projection = Q.index_of(G.keys[amb.rep])  # parent index -> quotient index
    Q.representatives = G.index_of(Q.keys)  # quotient index -> least parent index
    return Q


# elementary abelian coordinates ----------------------------------------------

@dataclass
class ElementaryAbelianCoords:
    """GF(p)-coordinates on an elementary abelian subgroup."""

    p: int
    basis: list[int]  # parent indices
    coords: dict[int, tuple[int, ...]] = field(repr=False)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def vector(self, g: int) -> tuple[int, ...]:
        return self.coords[int(g)]

    def element(self, v: Sequence[int]) -> int:
        return self._inverse[tuple(int(c) % self.p for c in v)]

    def __post_init__(self):
        self._inverse = {v: g for g, v in self.coords.items()}


def elementary_abelian_coords(S: Subgroup, p: int) -> ElementaryAbelianCoords:
    G = S.parent
    m = S.members
    orders = G.element_orders[m]
    if np.any(p % orders != 0):
        raise ValueError("subgroup is not of exponent p")
    gens = S.generating_set()
    if gens:
        g = np.array(gens)
        if not np.array_equal(G.mul(g[:, None], m[None, :]), G.mul(m[None, :], g[:, None])):
            raise ValueError("subgroup is not abelian")
    coords: dict[int, tuple[int, ...]] = {0: ()}
    basis: list[int] = []
    for b in gens:
        if b in coords:
            continue
        new: dict[int, tuple[int, ...]] = {}
        powers = [0]
        for _ in range(p - 1):
            powers.append(int(G.mul(powers[-1], b)))
        for x, v in coords.items():
            for k, bk in enumerate(powers):
                new[int(G.mul(x, bk))] = v + (k,)
        coords = new
        basis.append(b)
    if len(coords) != S.order:
        raise AssertionError("coordinate map does not cover the subgroup")
    return ElementaryAbelianCoords(p, basis, coords)


def hyperplane_functionals(b: int, p: int) -> list[tuple[int, ...]]:
    """Nonzero vectors of GF(p)^b whose first nonzero entry is 1, lexicographic."""
    out = []
    for n in range(1, p**b):
        v = tuple((n // p**(b - 1 - i)) % p for i in range(b))
        if next(c for c in v if c) == 1:
            out.append(v)
    return out


def maximal_subgroups_of_center(Z: Subgroup, p: int) -> list[Subgroup]:
    co = elementary_abelian_coords(Z, p)
    out = []
    for f in hyperplane_functionals(co.dim, p):
        ker = [g for g, v in co.coords.items() if sum(a * c for a, c in zip(f, v)) % p == 0]
        out.append(Subgroup(Z.parent, ker))
    return out


# report ---------------------------------------------------------------------

@dataclass
class StructureReport:
    order: int
    p: int
    a: int | None  # |G:Z| = p^(2a) when that exponent is even
    b: int  # |Z| = p^b
    center: Subgroup
    derived: Subgroup
    frattini: Subgroup
    omega: Subgroup
    agemo: Subgroup
    exponent: int
    order_histogram: dict[int, int]
    frattini_rank: int

    def to_json(self) -> dict:
        def keys(S: Subgroup):
            return {"order": S.order, "elements": S.keys} if S.order <= 256 else {"order": S.order}
        return {
            "order": self.order,
            "p": self.p,
            "a": self.a,
            "b": self.b,
            "center": keys(self.center),
            "derived": keys(self.derived),
            "frattini": keys(self.frattini),
            "omega": keys(self.omega),
            "agemo": keys(self.agemo),
            "exponent": self.exponent,
            "order_histogram": {str(k): v for k, v in self.order_histogram.items()},
            "frattini_rank": self.frattini_rank,
        }


def _log(n: int, p: int) -> int:
    k = 0
    while n > 1:
        if n % p:
            raise ValueError(f"{n} is not a power of {p}")
        n //= p
        k += 1
    return k


def structure_report(G: Group, p: int | None = None) -> StructureReport:
    p = _require_p(G, p)
    Z = center(G)
    Phi = frattini(G, p)
    index = _log(G.order // Z.order, p)
    return StructureReport(
        order=G.order,
        p=p,
        a=index // 2 if index % 2 == 0 else None,
        b=_log(Z.order, p),
        center=Z,
        derived=derived_subgroup(G),
        frattini=Phi,
        omega=omega(G, p),
        agemo=agemo(G, p),
        exponent=exponent(G),
        order_histogram=order_histogram(G),
        frattini_rank=_log(G.order // Phi.order, p),
    )
