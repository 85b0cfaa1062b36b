"""
Elliptic curves y^2 = x^3 + a2 x^2 + a4 x + a6 over F_p (p odd, p = 3 included).

Points carry coordinates in an extension F_{p^s}; the curve coefficients
are prime-field integers and embed into every extension unchanged.
"""

import logging
import re
from dataclasses import dataclass
from typing import List, Optional

import numpy as np
from sympy import isprime

from config.settings import CURVE_SETTINGS
from core.errors import (
    EnumerationBoundError,
    FieldMismatchError,
    InvalidInputError,
    NonResidueError,
    SingularCurveError,
)
from core.galois_field import FieldCtx, FieldElem, make_field, quadratic_character, sqrt
from core.numeric import InvariantFactors, factorize

logger = logging.getLogger(__name__)

_TERM = re.compile(r"([+-])(\d*)(x\^2|x)?")


@dataclass(frozen=True)
class Curve:
    """Weierstrass model with a1 = a3 = 0 over F_p."""
    p: int
    a2: int
    a4: int
    a6: int

    def __post_init__(self):
        if self.p < 3 or not isprime(self.p):
            raise InvalidInputError(f"curve characteristic must be an odd prime, got {self.p}")
        for name in ("a2", "a4", "a6"):
            object.__setattr__(self, name, getattr(self, name) % self.p)
        if self.discriminant == 0:
            raise SingularCurveError(f"{self.spec} is singular (discriminant 0)")

    # b-invariants with a1 = a3 = 0
    @property
    def b2(self) -> int:
        return 4 * self.a2 % self.p

    @property
    def b4(self) -> int:
        return 2 * self.a4 % self.p

    @property
    def b6(self) -> int:
        return 4 * self.a6 % self.p

    @property
    def b8(self) -> int:
        return (4 * self.a2 * self.a6 - self.a4 * self.a4) % self.p

    @property
    def discriminant(self) -> int:
        b2, b4, b6, b8 = self.b2, self.b4, self.b6, self.b8
        return (-b2 * b2 * b8 - 8 * b4 ** 3 - 27 * b6 * b6 + 9 * b2 * b4 * b6) % self.p

    @property
    def spec(self) -> str:
        return f"{self.p}:{self.a2}:{self.a4}:{self.a6}"

    @classmethod
    def parse(cls, spec: str) -> "Curve":
        """Parse `p:a2:a4:a6`; signed coefficients are reduced mod p."""
        parts = spec.strip().split(":")
        if len(parts) != 4:
            raise InvalidInputError(f"curve spec must look like p:a2:a4:a6, got {spec!r}")
        try:
            p, a2, a4, a6 = (int(t) for t in parts)
        except ValueError as exc:
            raise InvalidInputError(f"non-integer field in curve spec {spec!r}") from exc
        return cls(p, a2, a4, a6)

    @classmethod
    def from_equation(cls, text: str, p: int) -> "Curve":
        """Parse printed equations such as 'y^2=x^3-x^2-1' or 'y^2=x^3+8x-1'."""
        body = text.replace(" ", "")
        if not body.startswith("y^2=x^3"):
            raise InvalidInputError(f"not a Weierstrass equation: {text!r}")
        rest = body[len("y^2=x^3"):]
        coeffs = {"x^2": 0, "x": 0, "": 0}
        pos = 0
        while pos < len(rest):
            match = _TERM.match(rest, pos)
            if match is None or match.end() == pos:
                raise InvalidInputError(f"cannot parse {rest[pos:]!r} in {text!r}")
            sign, digits, power = match.groups()
            if not digits and not power:
                raise InvalidInputError(f"dangling sign in {text!r}")
            value = int(digits) if digits else 1
            coeffs[power or ""] += -value if sign == "-" else value
            pos = match.end()
        return cls(p, coeffs["x^2"], coeffs["x"], coeffs[""])

    def equation(self) -> str:
        """Render with symmetric residues, e.g. 'y^2=x^3-x-1'."""
        out = "y^2=x^3"
        for coeff, power in ((self.a2, "x^2"), (self.a4, "x"), (self.a6, "")):
            c = coeff if coeff <= self.p // 2 else coeff - self.p
            if c == 0:
                continue
            sign = "+" if c > 0 else "-"
            mag = abs(c)
            body = power if (mag == 1 and power) else f"{mag}{power}"
            out += sign + body
        return out

    def field(self, s: int = 1, degree_cap: int = None) -> FieldCtx:
        return make_field(self.p, s, degree_cap=degree_cap)

    def rhs(self, x):
        return ((x + self.a2) * x + self.a4) * x + self.a6

    def contains(self, P: "Point") -> bool:
        if P.is_infinity:
            return True
        return P.y * P.y == self.rhs(P.x)

    def __str__(self) -> str:
        return f"{self.equation()} over F_{self.p}"


@dataclass(frozen=True)
class Point:
    """Affine point (x, y), or the point at infinity when x is None."""
    x: Optional[FieldElem] = None
    y: Optional[FieldElem] = None

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    @property
    def ctx(self) -> Optional[FieldCtx]:
        return None if self.x is None else self.x.ctx

    def __repr__(self) -> str:
        return "O" if self.is_infinity else f"({self.x!r}, {self.y!r})"


INFINITY = Point()


def _same_field(P: Point, Q: Point) -> None:
    if P.is_infinity or Q.is_infinity:
        return
    if P.ctx is not Q.ctx and P.ctx != Q.ctx:
        raise FieldMismatchError(f"points over {P.ctx!r} and {Q.ctx!r} cannot be added")


def negate(c: Curve, P: Point) -> Point:
    if P.is_infinity:
        return P
    return Point(P.x, -P.y)


def add(c: Curve, P: Point, Q: Point) -> Point:
    """Chord-tangent group law."""
    _same_field(P, Q)
    if P.is_infinity:
        return Q
    if Q.is_infinity:
        return P
    if P.x == Q.x:
        if (P.y + Q.y).is_zero():
            return INFINITY
        # doubling
        s = (3 * P.x * P.x + 2 * c.a2 * P.x + c.a4) / (2 * P.y)
    else:
        s = (Q.y - P.y) / (Q.x - P.x)
    x3 = s * s - c.a2 - P.x - Q.x
    y3 = s * (P.x - x3) - P.y
    return Point(x3, y3)


def double(c: Curve, P: Point) -> Point:
    return add(c, P, P)


def scalar_mul(c: Curve, k: int, P: Point) -> Point:
    """[k]P by left-to-right double-and-add; k may be negative or huge."""
    if k < 0:
        return scalar_mul(c, -k, negate(c, P))
    result = INFINITY
    for bit in bin(k)[2:]:
        result = add(c, result, result)
        if bit == "1":
            result = add(c, result, P)
    return result


def frobenius(P: Point, k: int = 1) -> Point:
    """(x, y) -> (x^{p^k}, y^{p^k})."""
    if P.is_infinity:
        return P
    return Point(P.x.frobenius(k), P.y.frobenius(k))


def _prime_field_rhs(c: Curve) -> np.ndarray:
    xs = np.arange(c.p, dtype=np.int64)
    return (((xs + c.a2) * xs % c.p + c.a4) * xs % c.p + c.a6) % c.p


def count_points(c: Curve, s: int = 1, bound: int = None) -> int:
    """1 + sum over x of (1 + chi(f(x))) on F_{p^s}."""
    limit = CURVE_SETTINGS["enumeration_bound"] if bound is None else bound
    if c.p ** s > limit:
        raise EnumerationBoundError(f"F_{c.p}^{s} exceeds the enumeration bound {limit}")
    if s == 1:
        values = _prime_field_rhs(c)
        squares = np.zeros(c.p, dtype=bool)
        squares[(np.arange(c.p, dtype=np.int64) ** 2) % c.p] = True
        chi = np.where(values == 0, 0, np.where(squares[values], 1, -1))
        return int(1 + c.p + chi.sum())
    ctx = c.field(s)
    return 1 + sum(1 + quadratic_character(c.rhs(x)) for x in ctx.elements())


def enumerate_points(c: Curve, s: int = 1, bound: int = None) -> List[Point]:
    """All points of E(F_{p^s}), starting with O, then by (x, y) coefficients."""
    limit = CURVE_SETTINGS["enumeration_bound"] if bound is None else bound
    if c.p ** s > limit:
        raise EnumerationBoundError(f"F_{c.p}^{s} exceeds the enumeration bound {limit}")
    ctx = c.field(s)
    points = [INFINITY]
    if s == 1:
        values = _prime_field_rhs(c)
        roots = {}
        for y in range(c.p):
            roots.setdefault(y * y % c.p, []).append(y)
        for x, v in enumerate(values.tolist()):
            for y in roots.get(v, []):
                points.append(Point(ctx(x), ctx(y)))
        return points
    for x in ctx.elements():
        v = c.rhs(x)
        chi = quadratic_character(v)
        if chi == 0:
            points.append(Point(x, ctx.zero))
        elif chi == 1:
            y = sqrt(v)
            points.extend(sorted((Point(x, y), Point(x, -y)), key=lambda P: P.y.coeffs))
    return points


def random_point(c: Curve, s: int, rng: np.random.Generator, degree_cap: int = None) -> Point:
    """
    Uniform affine point over F_{p^s}: draw x until f(x) is a square, take the
    canonical root and flip its sign on a fair coin. Curves without affine
    points return O.
    """
    ctx = c.field(s, degree_cap=degree_cap)
    attempts = 0
    while True:
        x = ctx.random_element(rng)
        v = c.rhs(x)
        chi = quadratic_character(v)
        if chi >= 0:
            y = sqrt(v)
            if rng.integers(0, 2) == 1:
                y = -y
            return Point(x, y)
        attempts += 1
        if attempts == 64 and ctx.order <= CURVE_SETTINGS["enumeration_bound"]:
            if count_points(c, s) == 1:
                logger.debug("[curve] %s has no affine points over F_%d^%d", c.spec, c.p, s)
                return INFINITY


def quadratic_twist(c: Curve, d: int) -> Curve:
    """y^2 = x^3 + d a2 x^2 + d^2 a4 x + d^3 a6 for a non-square d."""
    ctx = c.field(1)
    if quadratic_character(ctx(d)) != -1:
        raise NonResidueError(f"twist parameter {d} is not a non-square mod {c.p}")
    return Curve(c.p, d * c.a2, d * d * c.a4, d ** 3 * c.a6)


def point_order(c: Curve, P: Point, multiple: int) -> int:
    """Exact order of P given any multiple of it (e.g. the group order)."""
    order = multiple
    for l, _ in factorize(multiple):
        while order % l == 0 and scalar_mul(c, order // l, P).is_infinity:
            order //= l
    return order


def rational_structure(c: Curve, s: int = 1) -> InvariantFactors:
    """E(F_{p^s}) as Z/d1 x Z/d2 with d2 the exponent (largest point order)."""
    points = enumerate_points(c, s)
    n = len(points)
    exponent = 1
    for P in points:
        exponent = max(exponent, point_order(c, P, n))
        if exponent == n:
            break
    return InvariantFactors.from_cyclic_orders([n // exponent, exponent])
