"""Integer utilities: trial-division factoring, Zsigmondy primes, minimal k."""

from __future__ import annotations

from dataclasses import dataclass

__all__ = [
    "factorize",
    "factor_counts",
    "is_prime",
    "prime_power",
    "ZsigmondyResult",
    "zsigmondy_primes",
    "minimal_k",
]


def factorize(n: int) -> list[int]:
    """Prime factors of ``n`` with multiplicity, in increasing order."""
    if n < 1:
        raise ValueError(f"factorize needs n >= 1, got {n}")
    out = []
    while n % 2 == 0:
        out.append(2)
        n //= 2
    d = 3
    while d * d <= n:
        while n % d == 0:
            out.append(d)
            n //= d
        d += 2
    if n > 1:
        out.append(n)
    return out


def factor_counts(n: int) -> dict[int, int]:
    counts: dict[int, int] = {}
    for f in factorize(n):
        counts[f] = counts.get(f, 0) + 1
    return counts


def is_prime(n: int) -> bool:
    return n >= 2 and factorize(n) == [n]


def prime_power(n: int) -> tuple[int, int]:
    """Return ``(p, k)`` with ``n == p**k``; raise ``ValueError`` otherwise."""
    if n < 2:
        raise ValueError(f"{n} is not a prime power")
    counts = factor_counts(n)
    if len(counts) != 1:
        raise ValueError(f"{n} is not a prime power")
    ((p, k),) = counts.items()
    return p, k


@dataclass(frozen=True)
class ZsigmondyResult:
    base: int
    exponent: int
    primes: tuple[int, ...]

    @property
    def exceptional(self) -> bool:
        return not self.primes

    def to_json(self) -> dict:
        return {
            "base": self.base,
            "exponent": self.exponent,
            "primes": list(self.primes),
            "exceptional": self.exceptional,
        }


def zsigmondy_primes(a: int, m: int) -> ZsigmondyResult:
    """Primes dividing ``a**m - 1`` but no ``a**i - 1`` with ``1 <= i < m``.

    When ``m`` is even every such prime must also divide ``a**(m//2) + 1``;
    that is asserted on the way out.
    """
    if a < 2 or m < 2:
        raise ValueError("zsigmondy_primes needs a >= 2 and m >= 2")
    candidates = sorted(set(factorize(a**m - 1)))
    primes = tuple(
        ell for ell in candidates
        if all((a**i - 1) % ell != 0 for i in range(1, m))
    )
    if m % 2 == 0:
        half = a ** (m // 2) + 1
        bad = [ell for ell in primes if half % ell != 0]
        assert not bad, f"Zsigmondy primes {bad} of {a}^{m}-1 do not divide {half}"
    return ZsigmondyResult(a, m, primes)


def minimal_k(order: int, p: int) -> int:
    """Least ``k >= 1`` with ``order | p**k - 1``."""
    if order < 1:
        raise ValueError("order must be positive")
    if order % p == 0:
        raise ValueError(f"{order} is divisible by p={p}")
    k, power = 1, p % order
    # p is a unit mod order, so k <= order
    while (power - 1) % order != 0:
        k += 1
        power = power * p % order
        if k > order:
            raise AssertionError("no k found; order and p not coprime?")
    return k

