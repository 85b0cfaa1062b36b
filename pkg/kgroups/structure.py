"""
Structure of K_{2m}(E/F_Q), Q = p^n.

The l-Sylow subgroup is the cokernel of Q^m phi_Q - 1 on the l-adic torsion.
Its smaller exponent e1 is the largest j for which E[l^j] is pointwise
killed by Q^m phi_Q - 1, i.e. phi_Q acts on E[l^j] as r = Q^{-m} mod l^j.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, Tuple

from config.settings import FIELD_SETTINGS
from core.errors import CapExceededError, FieldDegreeCapError, InvalidInputError, SamplingBudgetExhausted
from core.numeric import InvariantFactors, factorize, multiplicative_order, valuation
from core.weierstrass import Curve, frobenius, scalar_mul
from core.zeta import extension_trace, kgroup_order, trace
from kgroups.torsion import torsion_subgroup

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class KGroupStructure:
    """
    K_{2m}(E/F_{p^n}) as invariant factors.

    Primes listed in `unverified` hit a cap; their part is shown cyclic and
    only the order is certain.
    """
    n: int
    m: int
    order: int
    factors: InvariantFactors
    unverified: Tuple[int, ...] = ()
    sylow: Dict[int, Tuple[int, int]] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.factors.order != self.order:
            raise InvalidInputError(f"factors {self.factors} do not multiply to {self.order}")
        if self.factors.rank > 2:
            raise InvalidInputError(f"genus-1 K-groups have rank at most 2, got {self.factors}")

    @property
    def verified(self) -> bool:
        return not self.unverified

    def render(self) -> str:
        return self.factors.render()


def _frobenius_data(c: Curve, n: int) -> Tuple[int, int]:
    """(A, Q): trace and size of F_Q = F_{p^n}."""
    return extension_trace(trace(c).a, c.p, n), c.p ** n


def kernel_membership(
    c: Curve,
    n: int,
    m: int,
    l: int,
    j: int,
    seed: int = 0,
    degree_cap: int = None,
    order: int = None,
) -> bool:
    """
    True iff E[l^j] lies in ker(Q^m phi_Q - 1).

    Cheap necessary conditions are tried first; only survivors build the
    torsion basis over F_{Q^s'} with s' = ord(r), r = Q^{-m} mod l^j.

    Raises:
        FieldDegreeCapError: n * s' above the degree cap
    """
    if l == c.p:
        raise InvalidInputError(f"l = {l} equals the characteristic")
    if j < 1:
        raise InvalidInputError(f"level must be positive, got {j}")
    A, Q = _frobenius_data(c, n)
    if order is None:
        order = kgroup_order(trace(c).a, c.p, n, m)
    mod = l ** j
    if 2 * j > valuation(order, l):
        return False

    r = pow(pow(Q, m, mod), -1, mod)
    # phi_Q must have characteristic polynomial (T - r)^2 mod l^j
    if (A - 2 * r) % mod or (Q - r * r) % mod:
        return False
    s = multiplicative_order(r, mod)
    if (pow(Q, s, mod) - 1) % mod:
        return False
    N_s = Q ** s + 1 - extension_trace(trace(c).a, c.p, n * s)
    if N_s % (mod * mod):
        return False

    cap = FIELD_SETTINGS["degree_cap"] if degree_cap is None else degree_cap
    if n * s > cap:
        raise FieldDegreeCapError(f"kernel test for {c.spec} needs F_{c.p}^{n * s}, cap is {cap}")

    basis = torsion_subgroup(c, n, s, l, j, seed=seed, degree_cap=cap)
    if not basis.is_full:
        return False
    for P in (basis.P1, basis.P2):
        if frobenius(P, n) != scalar_mul(c, r, P):
            return False
    return True


def l_part_structure(
    c: Curve,
    n: int,
    m: int,
    l: int,
    seed: int = 0,
    degree_cap: int = None,
    order: int = None,
) -> Tuple[int, int]:
    """
    Exponents (e1, e2) of the l-Sylow subgroup of K_{2m}(E/F_{p^n}).

    Ascends j = 1, 2, ... and stops at the first failed membership test.
    """
    if order is None:
        order = kgroup_order(trace(c).a, c.p, n, m)
    v = valuation(order, l)
    e1 = 0
    for j in range(1, v // 2 + 1):
        if not kernel_membership(c, n, m, l, j, seed=seed, degree_cap=degree_cap, order=order):
            break
        e1 = j
    logger.debug("[kgroup] %s n=%d m=%d l=%d: (%d, %d)", c.spec, n, m, l, e1, v - e1)
    return e1, v - e1


def kgroup_structure(c: Curve, n: int, m: int, seed: int = 0, degree_cap: int = None) -> KGroupStructure:
    """Invariant factors of K_{2m}(E/F_{p^n}), assembled prime by prime."""
    if m < 1 or n < 1:
        raise InvalidInputError(f"n and m must be positive, got n={n}, m={m}")
    order = kgroup_order(trace(c).a, c.p, n, m)
    primary: Dict[int, Tuple[int, int]] = {}
    unverified = []
    for l, v in factorize(order):
        if v == 1:
            primary[l] = (0, 1)
            continue
        try:
            primary[l] = l_part_structure(c, n, m, l, seed=seed, degree_cap=degree_cap, order=order)
        except (CapExceededError, SamplingBudgetExhausted) as exc:
            logger.warning("[kgroup] %s-part of K_%d(%s) over degree %d left unverified: %s",
                           l, 2 * m, c.spec, n, exc)
            primary[l] = (0, v)
            unverified.append(l)
    factors = InvariantFactors.from_primary(primary)
    return KGroupStructure(n, m, order, factors, tuple(unverified), primary)
