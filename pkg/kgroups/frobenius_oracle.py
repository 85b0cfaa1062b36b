"""
Explicit Frobenius matrix on E[l^K], used to cross-check the membership
route to K-group structure.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from config.settings import FIELD_SETTINGS
from core.errors import FieldDegreeCapError, InvalidInputError
from core.numeric import snf_2x2
from core.weierstrass import INFINITY, Curve, Point, add, frobenius, negate, scalar_mul
from core.zeta import extension_trace, trace
from kgroups.torsion import torsion_subgroup

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FrobeniusMatrix:
    """Matrix of phi_p on a basis of E[l^K] found over F_{p^s}; columns are images."""
    l: int
    K: int
    s: int
    entries: Tuple[Tuple[int, int], Tuple[int, int]]

    @property
    def modulus(self) -> int:
        return self.l ** self.K

    def as_array(self) -> np.ndarray:
        return np.array(self.entries, dtype=object)

    @property
    def trace(self) -> int:
        return (self.entries[0][0] + self.entries[1][1]) % self.modulus

    @property
    def det(self) -> int:
        (a, b), (c, d) = self.entries
        return (a * d - b * c) % self.modulus

    def power(self, n: int) -> np.ndarray:
        """M^n mod l^K by square-and-multiply."""
        mod = self.modulus
        result = np.identity(2, dtype=object)
        base = self.as_array() % mod
        for bit in bin(n)[2:]:
            result = (result @ result) % mod
            if bit == "1":
                result = (result @ base) % mod
        return result


def discrete_log_2d(c: Curve, target: Point, P1: Point, P2: Point, l: int, K: int) -> Optional[Tuple[int, int]]:
    """(x, y) with target = [x]P1 + [y]P2 for a basis of E[l^K]; digit-wise recovery."""
    g1 = scalar_mul(c, l ** (K - 1), P1)
    g2 = scalar_mul(c, l ** (K - 1), P2)
    table = {}
    row = INFINITY
    for d1 in range(l):
        col = row
        for d2 in range(l):
            table[col] = (d1, d2)
            col = add(c, col, g2)
        row = add(c, row, g1)
    x = y = 0
    for k in range(K):
        known = add(c, scalar_mul(c, x, P1), scalar_mul(c, y, P2))
        h = scalar_mul(c, l ** (K - 1 - k), add(c, target, negate(c, known)))
        digits = table.get(h)
        if digits is None:
            return None
        x += digits[0] * l ** k
        y += digits[1] * l ** k
    return x, y


def frobenius_matrix_oracle(
    c: Curve, l: int, K: int, degree_cap: int = None, seed: int = 0
) -> FrobeniusMatrix:
    """
    Matrix of phi_p on E[l^K] over the smallest splitting degree s found.

    Raises:
        FieldDegreeCapError: no s up to the cap splits E[l^K]
    """
    if l == c.p:
        raise InvalidInputError(f"l = {l} equals the characteristic")
    cap = FIELD_SETTINGS["degree_cap"] if degree_cap is None else degree_cap
    a = trace(c).a
    mod = l ** K
    for s in range(1, cap + 1):
        N = c.p ** s + 1 - extension_trace(a, c.p, s)
        if N % (mod * mod) or (c.p ** s - 1) % mod:
            continue
        basis = torsion_subgroup(c, 1, s, l, K, seed=seed, degree_cap=cap)
        if not basis.is_full:
            continue
        images = [discrete_log_2d(c, frobenius(P, 1), basis.P1, basis.P2, l, K) for P in (basis.P1, basis.P2)]
        if None in images:
            raise ArithmeticError(f"Frobenius image left E[{l}^{K}] on {c.spec}")
        (x1, y1), (x2, y2) = images
        M = FrobeniusMatrix(l, K, s, ((x1 % mod, x2 % mod), (y1 % mod, y2 % mod)))
        logger.debug("[oracle] %s l=%d K=%d split at s=%d: %s", c.spec, l, K, s, M.entries)
        return M
    raise FieldDegreeCapError(f"E[{l}^{K}] of {c.spec} does not split below degree {cap}")


def oracle_l_part(M: FrobeniusMatrix, p: int, n: int, m: int) -> Tuple[int, int]:
    """Cokernel exponents of Q^m M^n - I, Q = p^n."""
    mod = M.modulus
    Qm = pow(p, n * m, mod)
    T = (Qm * M.power(n) - np.identity(2, dtype=object)) % mod
    return snf_2x2(T.tolist(), M.l, M.K)
