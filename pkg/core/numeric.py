"""
Integer utilities: factorization, l-adic valuations, multiplicative orders,
2x2 Smith normal form over Z/l^K and canonical invariant factors.
"""

import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

from sympy import isprime, sieve

from config.settings import FACTOR_SETTINGS
from core.errors import InvalidInputError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Factorization:
    """n = prod(prime ** exponent) with primes strictly increasing."""
    value: int
    factors: Tuple[Tuple[int, int], ...] = ()

    def __post_init__(self):
        primes = [p for p, _ in self.factors]
        if primes != sorted(set(primes)):
            raise InvalidInputError("factor primes must be strictly increasing")
        if self.recompose() != self.value:
            raise InvalidInputError(f"factors do not multiply to {self.value}")

    def recompose(self) -> int:
        out = 1
        for p, e in self.factors:
            out *= p ** e
        return out

    @property
    def primes(self) -> Tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    def exponent(self, prime: int) -> int:
        for p, e in self.factors:
            if p == prime:
                return e
        return 0

    def __iter__(self):
        return iter(self.factors)

    def __str__(self) -> str:
        if not self.factors:
            return "1"
        return " * ".join(f"{p}^{e}" if e > 1 else str(p) for p, e in self.factors)


def _pollard_brent(n: int, seed: int) -> int:
    """Brent's variant of Pollard rho with x0 = 2 and f(x) = x^2 + seed."""
    if n % 2 == 0:
        return 2
    y, c, m = 2, seed, 128
    g = r = q = 1
    x = ys = y
    while g == 1:
        x = y
        for _ in range(r):
            y = (y * y + c) % n
        k = 0
        while k < r and g == 1:
            ys = y
            for _ in range(min(m, r - k)):
                y = (y * y + c) % n
                q = q * abs(x - y) % n
            g = math.gcd(q, n)
            k += m
        r *= 2
    if g == n:
        # backtrack one step at a time
        while True:
            ys = (ys * ys + c) % n
            g = math.gcd(abs(x - ys), n)
            if g > 1:
                break
    return g


def _split_large(n: int, out: Dict[int, int]) -> None:
    """Record the prime factorization of n (no factor below the trial bound)."""
    if n == 1:
        return
    if isprime(n):
        out[n] = out.get(n, 0) + 1
        return
    root = math.isqrt(n)
    if root * root == n:
        _split_large(root, out)
        _split_large(root, out)
        return
    for seed in range(1, FACTOR_SETTINGS["rho_max_seeds"] + 1):
        d = _pollard_brent(n, seed)
        if 1 < d < n:
            _split_large(d, out)
            _split_large(n // d, out)
            return
    raise ArithmeticError(f"Pollard rho failed to split {n}")


@lru_cache(maxsize=4096)
def factorize(n: int, trial_bound: int = None) -> Factorization:
    """
    Trial division by primes up to trial_bound (default 10^6), then Pollard
    rho with deterministic seeds on whatever composite remains.

    Args:
        n: positive integer
        trial_bound: largest trial divisor

    Returns:
        Factorization of n; n = 1 gives the empty factor list
    """
    if n < 1:
        raise InvalidInputError(f"factorize needs n >= 1, got {n}")
    bound = FACTOR_SETTINGS["trial_bound"] if trial_bound is None else trial_bound
    found: Dict[int, int] = {}
    rest = n
    limit = min(bound, math.isqrt(n))
    sieve.extend(limit + 1)
    for p in sieve.primerange(2, limit + 1):
        if p * p > rest:
            break
        while rest % p == 0:
            found[p] = found.get(p, 0) + 1
            rest //= p
    _split_large(rest, found)
    return Factorization(n, tuple(sorted(found.items())))


def l_adic_valuation(n: int, l: int) -> Tuple[int, int]:
    """Return (v, cofactor) with n = l^v * cofactor and l not dividing cofactor."""
    if n < 1:
        raise InvalidInputError(f"valuation needs n >= 1, got {n}")
    if l < 2:
        raise InvalidInputError(f"valuation base must be prime, got {l}")
    v = 0
    while n % l == 0:
        n //= l
        v += 1
    return v, n


def valuation(n: int, l: int, cap: int = None) -> int:
    """v_l(n) for any integer n; zero maps to cap (or raises if no cap)."""
    if n == 0:
        if cap is None:
            raise InvalidInputError("valuation of zero is unbounded")
        return cap
    v, _ = l_adic_valuation(abs(n), l)
    return v if cap is None else min(v, cap)


def euler_phi(n: int) -> int:
    out = n
    for p, _ in factorize(n):
        out = out // p * (p - 1)
    return out


def multiplicative_order(r: int, modulus: int) -> int:
    """Smallest s >= 1 with r^s = 1 (mod modulus)."""
    if modulus < 2:
        raise InvalidInputError(f"modulus must be at least 2, got {modulus}")
    r %= modulus
    if math.gcd(r, modulus) != 1:
        raise InvalidInputError(f"{r} is not a unit modulo {modulus}")
    order = euler_phi(modulus)
    for p, _ in factorize(order):
        while order % p == 0 and pow(r, order // p, modulus) == 1:
            order //= p
    return order


def snf_2x2(matrix: Sequence[Sequence[int]], l: int, K: int) -> Tuple[int, int]:
    """
    Exponents (e1, e2) with coker(matrix) on (Z/l^K)^2 = Z/l^e1 x Z/l^e2.

    Pivots on an entry of minimal l-adic valuation and eliminates inside
    Z/l^K, so no intermediate value exceeds l^K.
    """
    if K < 1:
        raise InvalidInputError(f"precision K must be positive, got {K}")
    mod = l ** K
    a = [[int(matrix[i][j]) % mod for j in range(2)] for i in range(2)]

    cells = [(valuation(a[i][j], l, cap=K), i, j) for i in range(2) for j in range(2)]
    e1, pi, pj = min(cells)
    if e1 == K:
        return K, K

    # move the pivot to (0, 0)
    if pi == 1:
        a[0], a[1] = a[1], a[0]
    if pj == 1:
        a[0][0], a[0][1] = a[0][1], a[0][0]
        a[1][0], a[1][1] = a[1][1], a[1][0]

    unit = (a[0][0] // l ** e1) % mod
    unit_inv = pow(unit, -1, mod)
    # every entry is divisible by l^e1 as an integer in [0, l^K)
    row_factor = (a[1][0] // l ** e1) * unit_inv % mod
    # clearing row 1 fixes the corner; clearing column 1 afterwards leaves it alone
    corner = (a[1][1] - row_factor * a[0][1]) % mod
    e2 = valuation(corner, l, cap=K)
    return (e1, e2) if e1 <= e2 else (e2, e1)


@dataclass(frozen=True)
class InvariantFactors:
    """Finite abelian group Z/d1 x ... x Z/dr with d1 | d2 | ... and every di >= 2."""
    factors: Tuple[int, ...] = ()

    def __post_init__(self):
        for d in self.factors:
            if d < 2:
                raise InvalidInputError(f"invariant factor {d} is not >= 2")
        for d, e in zip(self.factors, self.factors[1:]):
            if e % d != 0:
                raise InvalidInputError(f"divisibility chain broken: {d} does not divide {e}")

    @classmethod
    def from_primary(cls, primary: Mapping[int, Iterable[int]]) -> "InvariantFactors":
        """Assemble from {l: [exponents of cyclic l-power components]} (CRT)."""
        columns: Dict[int, List[int]] = {}
        width = 0
        for l, exps in primary.items():
            kept = sorted((e for e in exps if e > 0), reverse=True)
            if kept:
                columns[l] = kept
                width = max(width, len(kept))
        factors = []
        for k in range(width):
            d = 1
            for l, exps in columns.items():
                if k < len(exps):
                    d *= l ** exps[k]
            factors.append(d)
        return cls(tuple(sorted(factors)))

    @classmethod
    def from_cyclic_orders(cls, orders: Iterable[int]) -> "InvariantFactors":
        """Canonical form of Z/n1 x Z/n2 x ... for arbitrary n_i >= 1."""
        primary: Dict[int, List[int]] = {}
        for n in orders:
            if n < 1:
                raise InvalidInputError(f"cyclic order must be positive, got {n}")
            for p, e in factorize(n):
                primary.setdefault(p, []).append(e)
        return cls.from_primary(primary)

    @property
    def order(self) -> int:
        out = 1
        for d in self.factors:
            out *= d
        return out

    @property
    def rank(self) -> int:
        return len(self.factors)

    def primary_components(self) -> Tuple[Tuple[int, int], ...]:
        """Sorted multiset of (l, e) for the cyclic l-power summands."""
        comps = []
        for d in self.factors:
            comps.extend(factorize(d).factors)
        return tuple(sorted(comps))

    def l_part(self, l: int) -> Tuple[int, ...]:
        """Exponents of the l-Sylow summands, ascending."""
        return tuple(sorted(e for p, e in self.primary_components() if p == l))

    def is_isomorphic(self, other: "InvariantFactors") -> bool:
        return self.factors == other.factors

    def render(self) -> str:
        if not self.factors:
            return "1"
        return " x ".join(f"Z/{d}" for d in self.factors)

    def __str__(self) -> str:
        return self.render()
