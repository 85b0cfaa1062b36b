"""Dense polynomials over F_p: ring arithmetic, irreducibility and the extension-field moduli."""

import logging
from functools import lru_cache
from typing import Iterable, Tuple, Union

import numpy as np

from config.settings import FIELD_SETTINGS
from core.errors import InvalidInputError

logger = logging.getLogger(__name__)

PolyLike = Union[np.ndarray, Iterable[int]]


class PolynomialRing:
    """
    Dense polynomials over F_p stored as numpy vectors, lowest degree first.
    The zero polynomial is the empty vector.
    """

    def __init__(self, p: int):
        self.p = p
        self.dtype = np.int64 if p < FIELD_SETTINGS["dtype_switch_prime"] else object

    def coerce(self, coeffs: PolyLike) -> np.ndarray:
        """Reduce mod p and drop trailing zeros."""
        arr = np.array([int(c) % self.p for c in coeffs], dtype=self.dtype)
        return self.trim(arr)

    def trim(self, a: np.ndarray) -> np.ndarray:
        nz = np.flatnonzero(a)
        if nz.size == 0:
            return a[:0]
        return a[: nz[-1] + 1]

    @staticmethod
    def degree(a: np.ndarray) -> int:
        return len(a) - 1

    def monomial(self, k: int, c: int = 1) -> np.ndarray:
        out = np.zeros(k + 1, dtype=self.dtype)
        out[k] = c % self.p
        return self.trim(out)

    def add(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        n = max(len(a), len(b))
        out = np.zeros(n, dtype=self.dtype)
        out[: len(a)] += a
        out[: len(b)] += b
        return self.trim(out % self.p)

    def sub(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        n = max(len(a), len(b))
        out = np.zeros(n, dtype=self.dtype)
        out[: len(a)] += a
        out[: len(b)] -= b
        return self.trim(out % self.p)

    def scale(self, a: np.ndarray, c: int) -> np.ndarray:
        return self.trim((a * (c % self.p)) % self.p)

    def mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if len(a) == 0 or len(b) == 0:
            return a[:0]
        return self.trim(np.convolve(a, b) % self.p)

    def monic(self, a: np.ndarray) -> np.ndarray:
        if len(a) == 0:
            return a
        return self.scale(a, pow(int(a[-1]), -1, self.p))

    def divmod(self, a: np.ndarray, b: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """Long division a = q*b + r with deg r < deg b."""
        if len(b) == 0:
            raise ZeroDivisionError("polynomial division by zero")
        db = self.degree(b)
        if self.degree(a) < db:
            return a[:0], a
        rem = a.copy()
        lead_inv = pow(int(b[-1]), -1, self.p)
        quot = np.zeros(self.degree(a) - db + 1, dtype=self.dtype)
        for i in range(self.degree(a) - db, -1, -1):
            c = int(rem[i + db]) * lead_inv % self.p
            if c:
                quot[i] = c
                rem[i : i + db + 1] = (rem[i : i + db + 1] - c * b) % self.p
        return self.trim(quot), self.trim(rem[:db])

    def mod(self, a: np.ndarray, f: np.ndarray) -> np.ndarray:
        return self.divmod(a, f)[1]

    def gcd(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Monic greatest common divisor."""
        while len(b):
            a, b = b, self.mod(a, b)
        return self.monic(a)

    def inverse_mod(self, a: np.ndarray, f: np.ndarray) -> np.ndarray:
        """a^{-1} mod f by the extended Euclidean algorithm."""
        r0, r1 = f, self.mod(a, f)
        s0, s1 = a[:0], self.monomial(0)
        while len(r1):
            q, r = self.divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, self.sub(s0, self.mul(q, s1))
        if self.degree(r0) != 0:
            raise ZeroDivisionError("element is not invertible modulo f")
        return self.scale(s0, pow(int(r0[0]), -1, self.p))

    def powmod(self, a: np.ndarray, e: int, f: np.ndarray) -> np.ndarray:
        """a^e mod f, left-to-right square-and-multiply (e >= 0)."""
        base = self.mod(a, f)
        result = self.monomial(0)
        for bit in bin(e)[2:]:
            result = self.mod(self.mul(result, result), f)
            if bit == "1":
                result = self.mod(self.mul(result, base), f)
        return result

    def evaluate(self, a: np.ndarray, x: int) -> int:
        acc = 0
        for c in reversed(a.tolist()):
            acc = (acc * x + int(c)) % self.p
        return acc

    def is_irreducible(self, f: np.ndarray) -> bool:
        """Ben-Or test: gcd(f, x^{p^i} - x) = 1 for every i <= deg f / 2."""
        d = self.degree(f)
        if d < 1:
            return False
        if d == 1:
            return True
        if f[0] == 0:
            return False
        x = self.monomial(1)
        h = x
        for _ in range(d // 2):
            h = self.powmod(h, self.p, f)
            if self.degree(self.gcd(f, self.sub(h, x))) > 0:
                return False
        return True

    def candidate(self, d: int, k: int) -> np.ndarray:
        """k-th monic polynomial of degree d: base-p digits of k are c_0 .. c_{d-1}."""
        coeffs = np.zeros(d + 1, dtype=self.dtype)
        for i in range(d):
            k, coeffs[i] = divmod(k, self.p)
        coeffs[d] = 1
        return coeffs


@lru_cache(maxsize=None)
def first_irreducible(p: int, d: int) -> Tuple[int, ...]:
    """
    Least monic irreducible of degree d over F_p, scanning candidates in the
    order of PolynomialRing.candidate (lexicographic from c_{d-1} down to c_0).
    """
    if d < 1:
        raise InvalidInputError(f"degree must be positive, got {d}")
    ring = PolynomialRing(p)
    for k in range(p ** d):
        f = ring.candidate(d, k)
        if ring.is_irreducible(f):
            logger.debug("[field] modulus for GF(%d^%d) found at candidate %d", p, d, k)
            return tuple(int(c) for c in f)
    raise ArithmeticError(f"no irreducible polynomial of degree {d} over F_{p}")
