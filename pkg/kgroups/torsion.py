"""
l-power torsion of E(F_{Q^s}) by the cofactor method.

Random points R are pushed into the l-Sylow subgroup as [u]R, where
#E(F_{Q^s}) = l^w u. A basis (P1, P2) with P1 of maximal order and
<P1> and <P2> independent is grown until it spans the subgroup, or at
least its l^j-torsion.
"""

import logging
from dataclasses import dataclass
from typing import Dict, Iterable, Optional, Tuple

import numpy as np

from config.settings import CURVE_SETTINGS, TORSION_SETTINGS
from core.errors import InvalidInputError, SamplingBudgetExhausted
from core.numeric import l_adic_valuation
from core.rng import task_rng
from core.weierstrass import (
    INFINITY,
    Curve,
    Point,
    add,
    enumerate_points,
    negate,
    random_point,
    scalar_mul,
)
from core.zeta import extension_trace, trace

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TorsionBasis:
    """Generators of E(F_{Q^s})[l^j] with exact orders l^j1 >= l^j2."""
    l: int
    j: int
    n: int
    s: int
    P1: Point = INFINITY
    P2: Point = INFINITY
    j1: int = 0
    j2: int = 0

    @property
    def rank(self) -> int:
        return (self.j1 > 0) + (self.j2 > 0)

    @property
    def order(self) -> int:
        return self.l ** (self.j1 + self.j2)

    @property
    def is_full(self) -> bool:
        """True when the generators span all of E[l^j]."""
        return self.j1 == self.j and self.j2 == self.j


def l_power_order(c: Curve, P: Point, l: int, bound: int) -> int:
    """Exponent e with P of exact order l^e (P known to be killed by l^bound)."""
    e = 0
    while not P.is_infinity:
        if e >= bound:
            raise InvalidInputError(f"point is not killed by {l}^{bound}")
        P = scalar_mul(c, l, P)
        e += 1
    return e


def discrete_log(c: Curve, target: Point, P: Point, l: int, e: int) -> Optional[int]:
    """
    t with [t]P = target for P of exact order l^e, found digit by digit
    (Pohlig-Hellman); None when target is outside <P>.
    """
    if e == 0:
        return 0 if target.is_infinity else None
    gamma = scalar_mul(c, l ** (e - 1), P)
    steps = [INFINITY]
    for _ in range(1, l):
        steps.append(add(c, steps[-1], gamma))
    t = 0
    for k in range(e):
        residual = add(c, target, negate(c, scalar_mul(c, t, P)))
        h = scalar_mul(c, l ** (e - 1 - k), residual)
        digit = next((d for d, S in enumerate(steps) if S == h), None)
        if digit is None:
            return None
        t += digit * l ** k
    if scalar_mul(c, t, P) != target:
        return None
    return t


def _absorb(c: Curve, x: Point, l: int, state: Dict) -> None:
    """Fold one l-Sylow sample into the running basis."""
    w = state["w"]
    o = l_power_order(c, x, l, w)
    if o > state["b"]:
        state.update(P1=x, b=o, P2=INFINITY, c=0)
        return
    if o <= state["c"]:
        return
    P1, b = state["P1"], state["b"]
    # smallest k with [l^k]x in <P1>
    for k in range(o + 1):
        t = discrete_log(c, scalar_mul(c, l ** k, x), P1, l, b)
        if t is not None:
            break
    if k == 0 or t % l ** k:
        return
    if k > state["c"]:
        P2 = add(c, x, negate(c, scalar_mul(c, t // l ** k, P1)))
        state.update(P2=P2, c=k)


def _done(state: Dict, j: int) -> bool:
    return state["b"] + state["c"] == state["w"] or (state["b"] >= j and state["c"] >= j)


def _samples(c: Curve, d: int, rng: np.random.Generator, budget: int) -> Iterable[Point]:
    for _ in range(budget):
        yield random_point(c, d, rng)


def torsion_subgroup(
    c: Curve,
    n: int,
    s: int,
    l: int,
    j: int,
    rng: np.random.Generator = None,
    seed: int = 0,
    degree_cap: int = None,
    budget_factor: int = None,
) -> TorsionBasis:
    """
    Basis of E(F_{Q^s})[l^j] with Q = p^n.

    Args:
        c: curve over F_p
        n: degree of the working base F_Q over F_p
        s: extension degree over F_Q
        l: prime different from p
        j: torsion level
        rng: sampling stream (derived from seed and the task key when omitted)
        degree_cap: cap on n*s
        budget_factor: samples allowed per l^j

    Returns:
        TorsionBasis with j1 >= j2 and rank equal to the true rank of E[l^j](F_{Q^s})
    """
    if l == c.p:
        raise InvalidInputError(f"l = {l} equals the characteristic")
    if j < 1:
        raise InvalidInputError(f"torsion level must be positive, got {j}")
    d = n * s
    ctx = c.field(d, degree_cap=degree_cap)
    N = ctx.order + 1 - extension_trace(trace(c).a, c.p, d)
    w, u = l_adic_valuation(N, l)
    if w == 0:
        return TorsionBasis(l, j, n, s)

    if rng is None:
        rng = task_rng(seed, "torsion", c.spec, n, s, l, j)
    factor = TORSION_SETTINGS["budget_factor"] if budget_factor is None else budget_factor
    budget = factor * l ** j

    state = {"w": w, "P1": INFINITY, "b": 0, "P2": INFINITY, "c": 0}
    for R in _samples(c, d, rng, budget):
        _absorb(c, scalar_mul(c, u, R), l, state)
        if _done(state, j):
            break
    else:
        if ctx.order > min(TORSION_SETTINGS["exhaustive_bound"], CURVE_SETTINGS["enumeration_bound"]):
            raise SamplingBudgetExhausted(
                f"{budget} samples did not span {l}^{j}-torsion of {c.spec} over F_{c.p}^{d}"
            )
        logger.warning("[torsion] sampling budget spent for %s over F_%d^%d, enumerating", c.spec, c.p, d)
        for R in enumerate_points(c, d):
            _absorb(c, scalar_mul(c, u, R), l, state)
            if _done(state, j):
                break
        else:
            raise ArithmeticError(f"enumeration failed to span the {l}-Sylow subgroup of {c.spec}")

    b, k = state["b"], state["c"]
    j1, j2 = min(b, j), min(k, j)
    G1 = scalar_mul(c, l ** (b - j1), state["P1"])
    G2 = scalar_mul(c, l ** (k - j2), state["P2"]) if k else INFINITY
    logger.debug("[torsion] %s F_%d^%d: sylow (%d,%d) of %d, E[%d^%d] = (%d,%d)",
                 c.spec, c.p, d, b, k, w, l, j, j1, j2)
    return TorsionBasis(l, j, n, s, G1, G2, j1, j2)


def span(c: Curve, basis: TorsionBasis) -> Tuple[Point, ...]:
    """Every element of <P1, P2>, for small groups."""
    out = []
    row = INFINITY
    for _ in range(basis.l ** basis.j1):
        col = row
        for _ in range(basis.l ** basis.j2):
            out.append(col)
            col = add(c, col, basis.P2)
        row = add(c, row, basis.P1)
    return tuple(out)
