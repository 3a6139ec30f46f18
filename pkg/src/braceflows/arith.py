"""Exact arithmetic modulo p^n for an odd prime p.

Provides inverses, smallest primitive roots, the (p-1)-th root of unity
used by the averaged star product, and inverse factorials.  All residues
are plain Python integers normalized into [0, p^n).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import FactorialNotInvertible, InvalidPrime, NotInvertible

# Residues are plain ints in [0, p^n); the alias documents intent.
Residue = int


def is_prime(m: int) -> bool:
    """Deterministic trial division; adequate for desk-scale moduli."""
    if m < 2:
        return False
    if m < 4:
        return True
    if m % 2 == 0:
        return False
    d = 3
    while d * d <= m:
        if m % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class Modulus:
    """An odd prime power p^n acting as coefficient modulus.

    Invariants: p is an odd prime (p >= 3) and n >= 1.
    """

    p: int
    n: int
    value: int = field(init=False, repr=False)

    def __post_init__(self):
        if self.p < 3 or not is_prime(self.p):
            raise InvalidPrime(f"p must be an odd prime, got {self.p}")
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        object.__setattr__(self, "value", self.p**self.n)

    def __str__(self) -> str:
        return f"{self.p}^{self.n}"


def mod_inverse(x: int, m: Modulus) -> Residue:
    """Inverse of x modulo p^n.  Raises NotInvertible when p divides x."""
    try:
        return pow(x, -1, m.value)
    except ValueError:
        raise NotInvertible(f"{x} is not invertible modulo {m}") from None


def _prime_factors(m: int) -> list[int]:
    out = []
    d = 2
    while d * d <= m:
        if m % d == 0:
            out.append(d)
            while m % d == 0:
                m //= d
        d += 1
    if m > 1:
        out.append(m)
    return out


def primitive_root(p: int) -> Residue:
    """Smallest primitive root modulo an odd prime p."""
    if p == 2 or not is_prime(p):
        raise InvalidPrime(f"need an odd prime, got {p}")
    factors = _prime_factors(p - 1)
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in factors):
            return g
    raise AssertionError(f"no primitive root found modulo {p}")  # unreachable


def teichmueller_xi(m: Modulus) -> Residue:
    """The (p-1)-th root of unity xi modulo p^n.

    xi = g^(p^(n-1)) mod p^n for g the smallest primitive root mod p.
    Then xi^(p-1) = 1 mod p^n, and xi = g mod p is a primitive root mod p,
    so xi^j is not 1 mod p for 0 < j < p-1.
    """
    g = primitive_root(m.p)
    return pow(g, m.p ** (m.n - 1), m.value)


def factorial_inverse(k: int, m: Modulus) -> Residue:
    """(k!)^(-1) mod p^n; requires 0 <= k < p so that k! is a unit."""
    if not 0 <= k < m.p:
        raise FactorialNotInvertible(f"{k}! is divisible by {m.p}")
    return mod_inverse(math.factorial(k), m)


def geometric_scalar(m: Modulus) -> Residue:
    """-(1 + p + ... + p^(n-1)) mod p^n, which equals (p-1)^(-1) mod p^n."""
    s = sum(m.p**i for i in range(m.n))
    return (-s) % m.value
