"""Exact arithmetic in GF(p^k) with a polynomial basis.

A field element is a vector of ``k`` residues mod ``p``: the coefficients of
a polynomial of degree ``< k`` reduced modulo the field's modulus.  Elements
also have an integer *code* ``sum(c_i * p**i)`` in ``[0, p**k)``; the group
constructions work on codes through precomputed numpy tables, while
:class:`FieldElement` arithmetic goes through the polynomial routines below.

Polynomials over GF(p) are plain lists of ints, lowest degree first.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import linalg
from .numth import factor_counts, is_prime

__all__ = [
    "FieldSpec",
    "FieldElement",
    "make_field",
    "frobenius_q",
    "norm_to_subfield",
    "multiplicative_order",
    "minimal_polynomial",
    "is_irreducible",
    "subfield_embedding",
    "poly_mod",
    "poly_mul",
    "poly_divmod",
    "poly_gcd",
    "poly_powmod",
]

TABLE_LIMIT = 4096


# polynomial helpers ---------------------------------------------------------

def _trim(f: list[int]) -> list[int]:
    while f and f[-1] == 0:
        f.pop()
    return f


def poly_add(f: Sequence[int], g: Sequence[int], p: int) -> list[int]:
    n = max(len(f), len(g))
    return _trim([((f[i] if i < len(f) else 0) + (g[i] if i < len(g) else 0)) % p
                  for i in range(n)])


def poly_sub(f: Sequence[int], g: Sequence[int], p: int) -> list[int]:
    return poly_add(f, [-c % p for c in g], p)


def poly_mul(f: Sequence[int], g: Sequence[int], p: int) -> list[int]:
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] = (out[i + j] + a * b) % p
    return _trim(out)


def poly_divmod(f: Sequence[int], g: Sequence[int], p: int) -> tuple[list[int], list[int]]:
    g = _trim(list(g))
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    r = _trim([c % p for c in f])
    inv_lead = pow(g[-1], -1, p)
    q = [0] * max(len(r) - len(g) + 1, 0)
    while len(r) >= len(g):
        shift = len(r) - len(g)
        c = r[-1] * inv_lead % p
        q[shift] = c
        for i, b in enumerate(g):
            r[shift + i] = (r[shift + i] - c * b) % p
        _trim(r)
    return _trim(q), r


def poly_mod(f: Sequence[int], g: Sequence[int], p: int) -> list[int]:
    return poly_divmod(f, g, p)[1]


def poly_gcd(f: Sequence[int], g: Sequence[int], p: int) -> list[int]:
    """Monic gcd."""
    a, b = _trim([c % p for c in f]), _trim([c % p for c in g])
    while b:
        a, b = b, poly_mod(a, b, p)
    if not a:
        return []
    inv = pow(a[-1], -1, p)
    return [c * inv % p for c in a]


def poly_powmod(base: Sequence[int], e: int, mod: Sequence[int], p: int) -> list[int]:
    result = [1]
    b = poly_mod(base, mod, p)
    while e:
        if e & 1:
            result = poly_mod(poly_mul(result, b, p), mod, p)
        b = poly_mod(poly_mul(b, b, p), mod, p)
        e >>= 1
    return poly_mod(result, mod, p)


def is_irreducible(f: Sequence[int], p: int) -> bool:
    """Irreducibility over GF(p) via gcd(f, x^(p^i) - x) = 1 for i <= deg/2."""
    f = _trim([c % p for c in f])
    if len(f) < 2:
        raise ValueError("constant polynomial")
    if f[-1] != 1:
        raise ValueError("polynomial must be monic")
    deg = len(f) - 1
    x = [0, 1]
    power = x
    for _ in range(deg // 2):
        power = poly_powmod(power, p, f, p)
        if len(poly_gcd(f, poly_sub(power, x, p), p)) > 1:
            return False
    return True


# fields ---------------------------------------------------------------------

@dataclass(frozen=True)
class FieldSpec:
    """GF(p^k) presented as GF(p)[x]/(modulus).

    ``modulus`` holds ``k + 1`` coefficients ``c0 .. ck`` (monic).
    ``primitive`` is the code of a designated generator of the
    multiplicative group; it is the class of ``x`` whenever that is primitive.
    """

    p: int
    k: int
    modulus: tuple[int, ...]
    primitive: int

    @property
    def order(self) -> int:
        return self.p**self.k

    q = order

    def __repr__(self) -> str:
        return f"GF({self.p}^{self.k})"

    # element construction
    def element(self, value: int | Iterable[int]) -> FieldElement:
        if isinstance(value, (int, np.integer)):
            return FieldElement(self, self.decode(int(value)))
        coeffs = tuple(int(c) % self.p for c in value)
        coeffs = coeffs + (0,) * (self.k - len(coeffs))
        return FieldElement(self, coeffs)

    __call__ = element

    def decode(self, code: int) -> tuple[int, ...]:
        if not 0 <= code < self.order:
            raise ValueError(f"code {code} out of range for {self!r}")
        out = []
        for _ in range(self.k):
            code, r = divmod(code, self.p)
            out.append(r)
        return tuple(out)

    def encode(self, coeffs: Sequence[int]) -> int:
        code = 0
        for c in reversed(coeffs):
            code = code * self.p + c
        return code

    @property
    def zero(self) -> FieldElement:
        return self.element(0)

    @property
    def one(self) -> FieldElement:
        return self.element(1)

    @property
    def gen(self) -> FieldElement:
        """The designated primitive element."""
        return self.element(self.primitive)

    @property
    def x(self) -> FieldElement:
        """Class of the indeterminate (equals ``gen`` when the modulus is primitive)."""
        return self.element([0, 1]) if self.k > 1 else self.element(-self.modulus[0] % self.p)

    def elements(self) -> list[FieldElement]:
        return [self.element(c) for c in range(self.order)]

    def to_json(self) -> dict:
        return {"p": self.p, "k": self.k, "modulus": list(self.modulus)}

    # numpy tables over codes
    @functools.cached_property
    def tables(self) -> FieldTables:
        if self.order > TABLE_LIMIT:
            raise ValueError(f"{self!r} too large for arithmetic tables")
        return FieldTables.build(self)


@dataclass(frozen=True, eq=False)
class FieldTables:
    add: np.ndarray
    mul: np.ndarray
    neg: np.ndarray
    inv: np.ndarray  # inv[0] = 0 by convention
    sub: np.ndarray

    @classmethod
    def build(cls, F: FieldSpec) -> FieldTables:
        q, p = F.order, F.p
        digits = np.array([F.decode(c) for c in range(q)], dtype=np.int64).reshape(q, F.k)
        weights = p ** np.arange(F.k, dtype=np.int64)
        add = ((digits[:, None, :] + digits[None, :, :]) % p) @ weights
        neg = ((-digits) % p) @ weights
        sub = add[:, neg]
        # multiplication: powers of the primitive element give discrete logs
        mul = np.zeros((q, q), dtype=np.int64)
        log = np.full(q, -1, dtype=np.int64)
        exp = np.zeros(q - 1, dtype=np.int64)
        g = F.gen
        cur = F.one
        for i in range(q - 1):
            exp[i] = cur.code
            log[cur.code] = i
            cur = cur * g
        nz = np.arange(1, q)
        mul[1:, 1:] = exp[(log[nz][:, None] + log[nz][None, :]) % (q - 1)]
        inv = np.zeros(q, dtype=np.int64)
        inv[1:] = exp[(-log[nz]) % (q - 1)]
        for arr in (add, mul, neg, inv, sub):
            arr.setflags(write=False)
        return cls(add, mul, neg, inv, sub)

    def pow(self, code: int, e: int) -> int:
        result, base = 1, code
        while e:
            if e & 1:
                result = int(self.mul[result, base])
            base = int(self.mul[base, base])
            e >>= 1
        return result


@dataclass(frozen=True)
class FieldElement:
    field: FieldSpec
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.field.k or not all(0 <= c < self.field.p for c in self.coeffs):
            raise ValueError(f"bad coefficients {self.coeffs} for {self.field!r}")

    @property
    def code(self) -> int:
        return self.field.encode(self.coeffs)

    def __int__(self) -> int:
        return self.code

    def __bool__(self) -> bool:
        return any(self.coeffs)

    def __repr__(self) -> str:
        return f"{self.field!r}({list(self.coeffs)})"

    def _coerce(self, other) -> FieldElement:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise ValueError(f"mixed fields {self.field!r} and {other.field!r}")
            return other
        if isinstance(other, int):
            return self.field.element([other])
        return NotImplemented

    def _wrap(self, poly: list[int]) -> FieldElement:
        return self.field.element(poly_mod(poly, self.field.modulus, self.field.p))

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.field.p
        return FieldElement(self.field, tuple((a + b) % p for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        p = self.field.p
        return FieldElement(self.field, tuple(-a % p for a in self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._wrap(poly_mul(self.coeffs, other.coeffs, self.field.p))

    __rmul__ = __mul__

    def __pow__(self, e: int) -> FieldElement:
        if e < 0:
            return self.inverse() ** (-e)
        result = self.field.one
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def inverse(self) -> FieldElement:
        if not self:
            raise ZeroDivisionError("inverse of zero in a finite field")
        return self ** (self.field.order - 2)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()


@functools.lru_cache(maxsize=None)
def make_field(p: int, k: int) -> FieldSpec:
    """Canonical GF(p^k).

    For ``k >= 2`` the modulus is the least monic irreducible polynomial
    (coefficients ``c_{k-1} .. c_0`` read as a base-p number) whose root
    ``x`` is primitive.  For ``k == 1`` the modulus is ``x`` and the least
    primitive root mod p is stored as the designated generator.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if k < 1:
        raise ValueError("extension degree must be >= 1")
    q1 = p**k - 1
    if k == 1:
        g = next(g for g in range(1, p) if _order_mod(g, p) == q1)
        return FieldSpec(p, 1, (0, 1), g)
    first_irreducible = None
    for n in range(p**k):
        low = [(n // p**i) % p for i in range(k)]
        f = low + [1]
        if not is_irreducible(f, p):
            continue
        if first_irreducible is None:
            first_irreducible = f
        if _poly_root_order(f, p, k) == q1:
            return FieldSpec(p, k, tuple(f), p)  # code of x is p
    # unreachable for Conway-style existence, guarded anyway
    f = first_irreducible
    F0 = FieldSpec(p, k, tuple(f), 1)
    g = next(c for c in range(1, p**k) if multiplicative_order(F0.element(c)) == q1)
    return FieldSpec(p, k, tuple(f), g)


def _order_mod(g: int, p: int) -> int:
    k, cur = 1, g % p
    while cur != 1:
        cur = cur * g % p
        k += 1
    return k


def _poly_root_order(f: list[int], p: int, k: int) -> int:
    n = p**k - 1
    order = n
    for r in factor_counts(n):
        while order % r == 0 and poly_powmod([0, 1], order // r, f, p) == [1]:
            order //= r
    return order


def multiplicative_order(x: FieldElement) -> int:
    if not x:
        raise ValueError("zero has no multiplicative order")
    n = x.field.order - 1
    order = n
    one = x.field.one
    for r in factor_counts(n) if n > 1 else {}:
        while order % r == 0 and x ** (order // r) == one:
            order //= r
    return order


def _check_quadratic(x: FieldElement, q: int) -> None:
    if x.field.order != q * q:
        raise ValueError(f"{x.field!r} is not GF({q}^2)")


def frobenius_q(x: FieldElement, q: int) -> FieldElement:
    """``x ** q`` for ``x`` in GF(q^2)."""
    _check_quadratic(x, q)
    return x**q


def _subfield_size(F: FieldSpec) -> int:
    if F.k % 2:
        raise ValueError(f"{F!r} has odd degree; no quadratic subfield structure")
    return F.p ** (F.k // 2)


def norm_to_subfield(t: FieldElement) -> FieldElement:
    """Norm GF(q^2) -> GF(q), i.e. ``t ** (1 + q)``."""
    q = _subfield_size(t.field)
    return t ** (1 + q)


def subfield_embedding(small: FieldSpec, big: FieldSpec) -> list[int]:
    """Codes in ``big`` of the elements of ``small``, indexed by small code.

    Sends the class of x in ``small`` to the least-code root of small's
    modulus in ``big``; prime-field elements map to constants.
    """
    if small.p != big.p or big.k % small.k:
        raise ValueError(f"{small!r} does not embed in {big!r}")
    if small.k == 1:
        return [big.element([c]).code for c in range(small.p)]
    mod = small.modulus
    root = None
    for y in big.elements():
        acc = big.zero
        for c in reversed(mod):
            acc = acc * y + c
        if not acc:
            root = y
            break
    assert root is not None
    powers = [root**i for i in range(small.k)]
    out = []
    for code in range(small.order):
        acc = big.zero
        for c, pw in zip(small.decode(code), powers):
            acc = acc + pw * c
        out.append(acc.code)
    return out


def minimal_polynomial(M, p: int) -> list[int]:
    """Monic minimal polynomial of a square matrix over GF(p), lowest degree first.

    Finds the first power ``M^d`` that is a linear combination of
    ``I, M, ..., M^(d-1)`` by a kernel computation on flattened powers.
    """
    A = np.array(M, dtype=np.int64) % p
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("minimal_polynomial needs a square matrix")
    n = A.shape[0]
    powers = [np.eye(n, dtype=np.int64).ravel()]
    cur = np.eye(n, dtype=np.int64)
    for d in range(1, n + 1):
        cur = cur @ A % p
        cols = np.array(powers + [cur.ravel()]).T
        kernel = linalg.nullspace(cols, p)
        if kernel.shape[0]:
            # with I..M^(d-1) independent the kernel is one-dimensional with v[d] != 0
            v = kernel[0]
            inv = pow(int(v[d]), -1, p)
            return [int(c) * inv % p for c in v]
        powers.append(cur.ravel())
    raise AssertionError("Cayley-Hamilton violated")
