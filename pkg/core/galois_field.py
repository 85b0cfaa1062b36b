"""
Finite fields F_p and F_{p^d}.

Extensions are absolute: F_{p^d} = F_p[x]/(f) with f the least monic
irreducible of degree d (see core.polynomial.first_irreducible). Elements
are immutable and hashable; prime-field integers mix freely with them.
"""

import logging
from functools import lru_cache
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np
from sympy import isprime

from config.settings import FIELD_SETTINGS
from core.errors import (
    FieldDegreeCapError,
    FieldMismatchError,
    InvalidInputError,
    NonResidueError,
)
from core.polynomial import PolynomialRing, first_irreducible
from core.rng import random_below

logger = logging.getLogger(__name__)


class FieldCtx:
    """F_{p^d} presented as polynomials modulo a fixed irreducible modulus."""

    def __init__(self, p: int, d: int, modulus: Optional[Tuple[int, ...]]):
        self.p = p
        self.d = d
        self.order = p ** d
        self.ring = PolynomialRing(p)
        self.modulus = None if modulus is None else np.array(modulus, dtype=self.ring.dtype)
        self._reduction = self._build_reduction() if d > 1 else None
        self._frobenius: Dict[int, np.ndarray] = {}
        self._non_residue: Optional["FieldElem"] = None
        self.zero = FieldElem(self, (0,) * d)
        self.one = FieldElem(self, (1,) + (0,) * (d - 1))

    def _build_reduction(self) -> np.ndarray:
        """Row k holds x^{d+k} mod f, for k = 0 .. d-2."""
        d, p = self.d, self.p
        rows = np.zeros((max(d - 1, 0), d), dtype=self.ring.dtype)
        current = (-self.modulus[:d]) % p
        for k in range(d - 1):
            rows[k] = current
            top = current[-1]
            shifted = np.concatenate(([0], current[:-1])).astype(self.ring.dtype)
            current = (shifted - top * self.modulus[:d]) % p
        return rows

    # ------------------------------------------------------------------
    # construction helpers
    # ------------------------------------------------------------------
    def __call__(self, value) -> "FieldElem":
        if isinstance(value, FieldElem):
            if value.ctx is not self and value.ctx != self:
                raise FieldMismatchError(f"{value!r} does not belong to {self!r}")
            return value
        if isinstance(value, (int, np.integer)):
            return FieldElem(self, (int(value) % self.p,) + (0,) * (self.d - 1))
        coeffs = [int(c) % self.p for c in value]
        if len(coeffs) > self.d:
            arr = self.ring.mod(self.ring.coerce(coeffs), self.modulus)
            coeffs = arr.tolist()
        coeffs += [0] * (self.d - len(coeffs))
        return FieldElem(self, tuple(coeffs))

    @property
    def gen(self) -> "FieldElem":
        """The class of x (equals the integer 0 when d = 1)."""
        if self.d == 1:
            return self.zero
        return FieldElem(self, (0, 1) + (0,) * (self.d - 2))

    def from_index(self, k: int) -> "FieldElem":
        """Element whose base-p digits of k are its coefficients."""
        coeffs = []
        for _ in range(self.d):
            k, c = divmod(k, self.p)
            coeffs.append(c)
        return FieldElem(self, tuple(coeffs))

    def elements(self) -> Iterator["FieldElem"]:
        for k in range(self.order):
            yield self.from_index(k)

    def random_element(self, rng: np.random.Generator) -> "FieldElem":
        return self.from_index(random_below(rng, self.order))

    # ------------------------------------------------------------------
    # arithmetic kernels
    # ------------------------------------------------------------------
    def reduce_product(self, prod: np.ndarray) -> Tuple[int, ...]:
        d = self.d
        out = np.zeros(d, dtype=self.ring.dtype)
        low = prod[:d]
        out[: len(low)] = low
        high = prod[d:]
        if len(high):
            out = (out + high @ self._reduction[: len(high)]) % self.p
        return tuple(int(c) for c in out)

    def frobenius_matrix(self, k: int) -> np.ndarray:
        """Matrix of x -> x^{p^k} acting on coefficient row vectors."""
        k %= self.d
        if k not in self._frobenius:
            if k == 0:
                mat = np.eye(self.d, dtype=self.ring.dtype)
            elif k == 1:
                xp = self.gen ** self.p
                rows = [self.one]
                for _ in range(self.d - 1):
                    rows.append(rows[-1] * xp)
                mat = np.array([r.coeffs for r in rows], dtype=self.ring.dtype)
            else:
                half = self.frobenius_matrix(k // 2)
                mat = (half @ half) % self.p
                if k % 2:
                    mat = (mat @ self.frobenius_matrix(1)) % self.p
            self._frobenius[k] = mat
        return self._frobenius[k]

    def non_residue(self) -> "FieldElem":
        """First non-square in index order."""
        if self._non_residue is None:
            k = 1
            while quadratic_character(self.from_index(k)) != -1:
                k += 1
            self._non_residue = self.from_index(k)
        return self._non_residue

    def __eq__(self, other) -> bool:
        if not isinstance(other, FieldCtx):
            return NotImplemented
        if self is other:
            return True
        if (self.p, self.d) != (other.p, other.d):
            return False
        if self.d == 1:
            return True
        return np.array_equal(self.modulus, other.modulus)

    def __hash__(self) -> int:
        return hash((self.p, self.d))

    def __repr__(self) -> str:
        return f"GF({self.p}^{self.d})" if self.d > 1 else f"GF({self.p})"


class FieldElem:
    """Immutable element of a FieldCtx."""

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: FieldCtx, coeffs: Tuple[int, ...]):
        self.ctx = ctx
        self.coeffs = coeffs

    def _other(self, other) -> Optional["FieldElem"]:
        if isinstance(other, FieldElem):
            if other.ctx is not self.ctx and other.ctx != self.ctx:
                raise FieldMismatchError(f"cannot combine {self.ctx!r} with {other.ctx!r}")
            return other
        if isinstance(other, (int, np.integer)):
            return self.ctx(int(other))
        return None

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        p = self.ctx.p
        return FieldElem(self.ctx, tuple((a + b) % p for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        p = self.ctx.p
        return FieldElem(self.ctx, tuple((-a) % p for a in self.coeffs))

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        p = self.ctx.p
        return FieldElem(self.ctx, tuple((a - b) % p for a, b in zip(self.coeffs, o.coeffs)))

    def __rsub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        ctx = self.ctx
        if ctx.d == 1:
            return FieldElem(ctx, (self.coeffs[0] * o.coeffs[0] % ctx.p,))
        dtype = ctx.ring.dtype
        prod = np.convolve(np.array(self.coeffs, dtype=dtype), np.array(o.coeffs, dtype=dtype)) % ctx.p
        return FieldElem(ctx, ctx.reduce_product(prod))

    __rmul__ = __mul__

    def inverse(self) -> "FieldElem":
        if self.is_zero():
            raise ZeroDivisionError("zero has no inverse")
        ctx = self.ctx
        if ctx.d == 1:
            return FieldElem(ctx, (pow(self.coeffs[0], -1, ctx.p),))
        inv = ctx.ring.inverse_mod(ctx.ring.coerce(self.coeffs), ctx.modulus)
        return ctx(inv.tolist())

    def __truediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        ctx = self.ctx
        if self.is_zero():
            return ctx.one if e == 0 else ctx.zero
        e %= ctx.order - 1
        if ctx.d == 1:
            return FieldElem(ctx, (pow(self.coeffs[0], e, ctx.p),))
        result = ctx.one
        for bit in bin(e)[2:]:
            result = result * result
            if bit == "1":
                result = result * self
        return result

    def frobenius(self, k: int = 1) -> "FieldElem":
        """self^{p^k} via the cached linear map."""
        ctx = self.ctx
        if ctx.d == 1:
            return self
        vec = np.array(self.coeffs, dtype=ctx.ring.dtype)
        out = (vec @ ctx.frobenius_matrix(k)) % ctx.p
        return FieldElem(ctx, tuple(int(c) for c in out))

    def __eq__(self, other) -> bool:
        if isinstance(other, FieldElem):
            return self.ctx == other.ctx and self.coeffs == other.coeffs
        if isinstance(other, (int, np.integer)):
            return self.coeffs == self.ctx(int(other)).coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.ctx.p, self.ctx.d, self.coeffs))

    def __lt__(self, other: "FieldElem") -> bool:
        return self.coeffs < other.coeffs

    def __int__(self) -> int:
        if any(self.coeffs[1:]):
            raise InvalidInputError(f"{self!r} is not in the prime field")
        return self.coeffs[0]

    def __repr__(self) -> str:
        if self.ctx.d == 1:
            return str(self.coeffs[0])
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                terms.append(str(c) if i == 0 else f"{c if c != 1 else ''}x{'^' + str(i) if i > 1 else ''}")
        return " + ".join(terms) if terms else "0"


# ----------------------------------------------------------------------
# construction
# ----------------------------------------------------------------------
def make_field(p: int, d: int = 1, degree_cap: int = None) -> FieldCtx:
    """
    Deterministic F_{p^d}; repeated calls return the same context.

    Raises:
        InvalidInputError: p even or not prime, d < 1
        FieldDegreeCapError: d above the cap (default FIELD_SETTINGS["degree_cap"])
    """
    cap = FIELD_SETTINGS["degree_cap"] if degree_cap is None else degree_cap
    if p < 3 or not isprime(p):
        raise InvalidInputError(f"field characteristic must be an odd prime, got {p}")
    if d < 1:
        raise InvalidInputError(f"extension degree must be positive, got {d}")
    if d > cap:
        raise FieldDegreeCapError(f"GF({p}^{d}) exceeds the degree cap {cap}")
    return _build_field(p, d)


@lru_cache(maxsize=None)
def _build_field(p: int, d: int) -> FieldCtx:
    modulus = None if d == 1 else first_irreducible(p, d)
    return FieldCtx(p, d, modulus)


# ----------------------------------------------------------------------
# squares
# ----------------------------------------------------------------------
def quadratic_character(e: FieldElem) -> int:
    """Euler criterion e^{(q-1)/2}: 0, +1 or -1."""
    if e.is_zero():
        return 0
    ctx = e.ctx
    if ctx.d == 1:
        r = pow(e.coeffs[0], (ctx.p - 1) // 2, ctx.p)
        return 1 if r == 1 else -1
    return 1 if e ** ((ctx.order - 1) // 2) == ctx.one else -1


def sqrt(e: FieldElem) -> FieldElem:
    """
    Tonelli-Shanks square root; returns the root whose coefficient vector is
    lexicographically smaller.

    Raises:
        NonResidueError: e is not a square
    """
    if e.is_zero():
        return e
    if quadratic_character(e) != 1:
        raise NonResidueError(f"{e!r} is not a square in {e.ctx!r}")
    ctx = e.ctx
    q = ctx.order
    s, t = 0, q - 1
    while t % 2 == 0:
        s += 1
        t //= 2
    c = ctx.non_residue() ** t
    tt = e ** t
    root = e ** ((t + 1) // 2)
    m = s
    while tt != ctx.one:
        i, sq = 0, tt
        while sq != ctx.one:
            sq = sq * sq
            i += 1
        b = c
        for _ in range(m - i - 1):
            b = b * b
        m = i
        c = b * b
        tt = tt * c
        root = root * b
    other = -root
    return root if root.coeffs <= other.coeffs else other


# ----------------------------------------------------------------------
# roots of polynomials with coefficients in a field
# ----------------------------------------------------------------------
FieldPoly = List[FieldElem]


def _ftrim(a: FieldPoly) -> FieldPoly:
    a = list(a)
    while a and a[-1].is_zero():
        a.pop()
    return a


def _fmonic(a: FieldPoly) -> FieldPoly:
    inv = a[-1].inverse()
    return [c * inv for c in a]


def _fsub(a: FieldPoly, b: FieldPoly, zero: FieldElem) -> FieldPoly:
    n = max(len(a), len(b))
    a = a + [zero] * (n - len(a))
    b = b + [zero] * (n - len(b))
    return _ftrim([x - y for x, y in zip(a, b)])


def _fmul(a: FieldPoly, b: FieldPoly, zero: FieldElem) -> FieldPoly:
    if not a or not b:
        return []
    out = [zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x.is_zero():
            continue
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return _ftrim(out)


def _fdivmod(a: FieldPoly, b: FieldPoly, zero: FieldElem) -> Tuple[FieldPoly, FieldPoly]:
    a = list(a)
    db = len(b) - 1
    if len(a) - 1 < db:
        return [], a
    inv = b[-1].inverse()
    quot = [zero] * (len(a) - db)
    for i in range(len(a) - 1 - db, -1, -1):
        c = a[i + db] * inv
        if c.is_zero():
            continue
        quot[i] = c
        for j, y in enumerate(b):
            a[i + j] = a[i + j] - c * y
    return _ftrim(quot), _ftrim(a[:db])


def _fgcd(a: FieldPoly, b: FieldPoly, zero: FieldElem) -> FieldPoly:
    while b:
        a, b = b, _fdivmod(a, b, zero)[1]
    return _fmonic(a) if a else a


def _fpowmod(base: FieldPoly, e: int, f: FieldPoly, zero: FieldElem) -> FieldPoly:
    one = [zero + 1]
    base = _fdivmod(base, f, zero)[1]
    result = one
    for bit in bin(e)[2:]:
        result = _fdivmod(_fmul(result, result, zero), f, zero)[1]
        if bit == "1":
            result = _fdivmod(_fmul(result, base, zero), f, zero)[1]
    return result


def _split_linear(g: FieldPoly, ctx: FieldCtx, out: List[FieldElem]) -> None:
    """Equal-degree splitting of a product of distinct linear factors."""
    zero = ctx.zero
    if len(g) <= 1:
        return
    if len(g) == 2:
        out.append(-g[0] / g[1])
        return
    half = (ctx.order - 1) // 2
    for k in range(ctx.order):
        shifted = [ctx.from_index(k), ctx.one]
        h = _fsub(_fpowmod(shifted, half, g, zero), [ctx.one], zero)
        d = _fgcd(g, h, zero)
        if 1 <= len(d) - 1 < len(g) - 1:
            _split_linear(d, ctx, out)
            _split_linear(_fdivmod(g, d, zero)[0], ctx, out)
            return
    raise ArithmeticError("equal-degree splitting found no separating shift")


def find_roots(f: Sequence[Union[int, FieldElem]], ctx: FieldCtx) -> Tuple[FieldElem, ...]:
    """
    All roots in ctx of f (coefficients lowest degree first), via
    gcd(f, x^q - x) followed by equal-degree splitting. Sorted by coefficients.
    """
    poly = _ftrim([ctx(c) for c in f])
    if not poly:
        raise InvalidInputError("find_roots needs a nonzero polynomial")
    poly = _fmonic(poly)
    zero = ctx.zero
    x = [zero, ctx.one]
    xq = x
    for _ in range(ctx.d):
        xq = _fpowmod(xq, ctx.p, poly, zero)
    g = _fgcd(poly, _fsub(xq, x, zero), zero) if len(poly) > 1 else []
    roots: List[FieldElem] = []
    _split_linear(g, ctx, roots)
    return tuple(sorted(set(roots), key=lambda r: r.coeffs))
