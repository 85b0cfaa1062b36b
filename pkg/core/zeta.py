"""
Zeta data of curves over F_q: Frobenius traces, Lucas-recurrence traces over
extensions, inverse-root surds, zeta numerators and K-group orders.

Orders follow #K_{2m}(E/F_Q) = 1 - A Q^m + Q^{2m+1} with Q = q^n and A the
trace over F_Q; for any genus the order is |P(q^m)|.
"""

import logging
import math
import re
from dataclasses import dataclass
from typing import Sequence, Tuple

from core.errors import InvalidInputError, WeilBoundError
from core.numeric import factorize
from core.weierstrass import Curve, count_points

logger = logging.getLogger(__name__)

_SURD_HALF = re.compile(r"^\((-?\d+)\+-(\d*)sqrt-(\d+)\)/2$")
_SURD_WHOLE = re.compile(r"^(-?\d*)\+-(\d*)sqrt-(\d+)$")


def _hasse_ok(a: int, q: int) -> bool:
    return a * a <= 4 * q


@dataclass(frozen=True)
class ZetaNumerator:
    """P(T) = 1 + c_1 T + ... + c_{2g} T^{2g}, coefficients lowest degree first."""
    q: int
    coeffs: Tuple[int, ...]

    def __post_init__(self):
        if len(self.coeffs) % 2 == 0 or self.coeffs[0] != 1:
            raise InvalidInputError(f"zeta numerator needs odd length and constant term 1, got {self.coeffs}")
        g = self.genus
        for k in range(g):
            if self.coeffs[2 * g - k] != self.q ** (g - k) * self.coeffs[k]:
                raise InvalidInputError(f"functional equation fails at T^{2 * g - k}")

    @property
    def genus(self) -> int:
        return (len(self.coeffs) - 1) // 2

    @classmethod
    def from_trace(cls, a: int, q: int) -> "ZetaNumerator":
        return cls(q, (1, -a, q))

    def evaluate(self, x: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __mul__(self, other: "ZetaNumerator") -> "ZetaNumerator":
        if self.q != other.q:
            raise InvalidInputError("numerators over different fields")
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            for j, y in enumerate(other.coeffs):
                out[i + j] += x * y
        return ZetaNumerator(self.q, tuple(out))

    def __str__(self) -> str:
        terms = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "" if k == 0 else ("T" if k == 1 else f"T^{k}")
            mag = abs(c)
            body = mono if (mag == 1 and mono) else f"{mag}{mono}"
            terms.append(("-" if c < 0 else "+") + body)
        text = "".join(terms)
        return text[1:] if text.startswith("+") else text


@dataclass(frozen=True)
class ZetaData:
    """Point count, trace and inverse-root surd of a genus-1 curve over F_q."""
    q: int
    N: int
    a: int
    D: int
    surd: str

    def __post_init__(self):
        if self.N != self.q + 1 - self.a:
            raise InvalidInputError(f"N = {self.N} disagrees with q + 1 - a for a = {self.a}")
        if not _hasse_ok(self.a, self.q):
            raise WeilBoundError(f"trace {self.a} violates the Hasse bound for q = {self.q}")
        if self.D >= 0:
            raise InvalidInputError(f"discriminant {self.D} must be negative")

    @property
    def numerator(self) -> ZetaNumerator:
        return ZetaNumerator.from_trace(self.a, self.q)


def _squarefree_split(n: int) -> Tuple[int, int]:
    """n = c^2 * d with d squarefree."""
    c = d = 1
    for p, e in factorize(n):
        c *= p ** (e // 2)
        if e % 2:
            d *= p
    return c, d


def surd(a: int, q: int) -> str:
    """
    Inverse roots of T^2 - aT + q in ASCII form.

    With a^2 - 4q = -c^2 D0: '(a/2)+-(c/2)sqrt-D0' when a and c are even,
    otherwise '(a+-c sqrt-D0)/2'. Unit coefficients and a zero rational
    part are dropped.
    """
    D = a * a - 4 * q
    if D >= 0:
        raise WeilBoundError(f"trace {a} gives non-negative discriminant over F_{q}")
    c, d0 = _squarefree_split(-D)
    if a % 2 == 0 and c % 2 == 0:
        rational = "" if a == 0 else str(a // 2)
        coeff = "" if c == 2 else str(c // 2)
        return f"{rational}+-{coeff}sqrt-{d0}"
    coeff = "" if c == 1 else str(c)
    return f"({a}+-{coeff}sqrt-{d0})/2"


def parse_surd(text: str) -> Tuple[int, int]:
    """Inverse of surd(): returns (a, D) with D = a^2 - 4q."""
    body = text.strip()
    match = _SURD_HALF.match(body)
    if match:
        a, c, d0 = int(match.group(1)), int(match.group(2) or 1), int(match.group(3))
        return a, -c * c * d0
    match = _SURD_WHOLE.match(body)
    if match:
        half = int(match.group(1)) if match.group(1) not in ("", "-") else 0
        c = 2 * int(match.group(2) or 1)
        d0 = int(match.group(3))
        return 2 * half, -c * c * d0
    raise InvalidInputError(f"cannot parse surd {text!r}")


def trace(c: Curve) -> ZetaData:
    N = count_points(c)
    a = c.p + 1 - N
    return ZetaData(q=c.p, N=N, a=a, D=a * a - 4 * c.p, surd=surd(a, c.p))


def extension_trace(a: int, q: int, n: int, modulus: int = None) -> int:
    """
    t_n = alpha^n + conj(alpha)^n by a Lucas doubling ladder over the bits
    of n, carrying (t_k, t_{k+1}, q^k). Reduced mod `modulus` when given.
    """
    if n < 0:
        raise InvalidInputError(f"extension degree must be non-negative, got {n}")

    def red(x: int) -> int:
        return x % modulus if modulus else x

    t_k, t_k1, q_k = red(2), red(a), red(1)
    if n == 0:
        return t_k
    for bit in bin(n)[2:]:
        odd = red(t_k * t_k1 - a * q_k)
        if bit == "0":
            t_k, t_k1 = red(t_k * t_k - 2 * q_k), odd
            q_k = red(q_k * q_k)
        else:
            t_k, t_k1 = odd, red(t_k1 * t_k1 - 2 * q_k * q)
            q_k = red(q_k * q_k * q)
    return t_k


def count_extension(c: Curve, n: int) -> int:
    """#E(F_{p^n}) from the base trace."""
    a = trace(c).a
    return c.p ** n + 1 - extension_trace(a, c.p, n)


def kgroup_order(a: int, q: int, n: int, m: int) -> int:
    if m < 1 or n < 1:
        raise InvalidInputError(f"kgroup_order needs n, m >= 1, got n={n}, m={m}")
    Q = q ** n
    A = extension_trace(a, q, n)
    return 1 - A * Q ** m + Q ** (2 * m + 1)


def kgroup_order_mod(a: int, q: int, n: int, m: int, modulus: int) -> int:
    """#K_{2m}(E/F_{q^n}) mod `modulus` without forming q^n."""
    Q = pow(q, n, modulus)
    A = extension_trace(a, q, n, modulus)
    return (1 - A * pow(Q, m, modulus) + pow(Q, 2 * m + 1, modulus)) % modulus


def genus_g_order(P: ZetaNumerator, q: int, m: int) -> int:
    if P.q != q:
        raise InvalidInputError(f"numerator over F_{P.q} used with q = {q}")
    return abs(P.evaluate(q ** m))


def derive_numerator(point_counts: Sequence[int], q: int, g: int) -> ZetaNumerator:
    """
    Newton identities on S_k = q^k + 1 - N_k give c_1 .. c_g; the functional
    equation supplies c_{g+1} .. c_{2g}.
    """
    if g < 1 or len(point_counts) < g:
        raise InvalidInputError(f"genus {g} needs {g} point counts, got {len(point_counts)}")
    sums = [0]
    for k, N in enumerate(point_counts[:g], start=1):
        S = q ** k + 1 - N
        if S * S > 4 * g * g * q ** k:
            raise WeilBoundError(f"N_{k} = {N} violates the Weil bound for genus {g} over F_{q}")
        sums.append(S)
    coeffs = [1]
    for k in range(1, g + 1):
        total = -sum(sums[i] * coeffs[k - i] for i in range(1, k + 1))
        if total % k:
            raise WeilBoundError(f"point counts give a non-integral coefficient c_{k}")
        coeffs.append(total // k)
    for k in range(g - 1, -1, -1):
        coeffs.append(q ** (g - k) * coeffs[k])
    logger.debug("[zeta] numerator from counts %s: %s", list(point_counts[:g]), coeffs)
    return ZetaNumerator(q, tuple(coeffs))


def hasse_interval(q: int) -> Tuple[int, int]:
    """Range of admissible traces for q."""
    r = math.isqrt(4 * q)
    return -r, r
