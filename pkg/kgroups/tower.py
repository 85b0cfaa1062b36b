"""
l-parts of K_2 along the tower F_{q^{l^m}}.

v_m = v_l(#K_2(E/F_{q^{l^m}})) grows as lambda * m + nu from some level m0
on. Valuations come from Lucas traces mod l^K (precision doubled until the
residue is non-zero) and are checked against exact integers where the bits
budget allows. Structures are verified by membership tests on the lower
levels only.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

from sympy import isprime

from config.settings import FIELD_SETTINGS, TOWER_SETTINGS
from core.errors import BitsBudgetError, CapExceededError, InvalidInputError, SamplingBudgetExhausted, TowerWindowExhausted
from core.numeric import valuation
from core.weierstrass import Curve
from core.zeta import kgroup_order, kgroup_order_mod, trace
from kgroups.structure import l_part_structure

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TowerReport:
    l: int
    lam: int
    nu: int
    m0: int
    valuations: Tuple[int, ...]
    structures: Dict[int, Tuple[int, int]] = field(default_factory=dict, compare=False)
    offsets: Optional[Tuple[int, ...]] = None
    partial: Tuple[int, ...] = ()

    @property
    def verified_levels(self) -> Tuple[int, ...]:
        return tuple(sorted(self.structures))

    @property
    def fully_verified(self) -> bool:
        return not self.partial and self.offsets is not None

    def formula(self) -> str:
        return render_formula(self.l, self.offsets, self.m0) if self.offsets is not None else ""


def _exact_bits(p: int, n: int) -> float:
    # #K_2 over F_{p^n} has about 3 n log2 p bits
    return 3 * n * math.log2(p)


def _modular_valuation(a: int, p: int, n: int, l: int) -> int:
    K = 8
    while True:
        residue = kgroup_order_mod(a, p, n, 1, l ** K)
        if residue:
            return valuation(residue, l)
        K *= 2


def tower_valuations(
    c: Curve, l: int, max_m: int = None, bits_budget: int = None, exact: bool = False
) -> Tuple[int, ...]:
    """
    (v_0, ..., v_max_m).

    Raises:
        InvalidInputError: l is not a prime, l = p, or l does not divide #K_2(E/F_p)
        BitsBudgetError: exact=True and some level exceeds the bits budget
    """
    if not isprime(l):
        raise InvalidInputError(f"l = {l} is not a prime")
    if l == c.p:
        raise InvalidInputError(f"l = {l} equals the characteristic")
    window = TOWER_SETTINGS["valuation_window"] if max_m is None else max_m
    budget = TOWER_SETTINGS["bits_budget"] if bits_budget is None else bits_budget
    a = trace(c).a
    if kgroup_order(a, c.p, 1, 1) % l:
        raise InvalidInputError(f"{l} does not divide #K_2 of {c.spec}")

    out = []
    for m in range(window + 1):
        n = l ** m
        fits = _exact_bits(c.p, n) <= budget
        if exact and not fits:
            raise BitsBudgetError(f"level {m} of the {l}-tower needs {_exact_bits(c.p, n):.0f} bits, budget {budget}")
        v = _modular_valuation(a, c.p, n, l)
        if fits:
            exact_v = valuation(kgroup_order(a, c.p, n, 1), l)
            if exact_v != v:
                raise ArithmeticError(f"modular valuation {v} disagrees with exact {exact_v} at level {m}")
        out.append(v)
    logger.debug("[tower] %s l=%d valuations %s", c.spec, l, out)
    return tuple(out)


def fit_linear(valuations: Tuple[int, ...], stable: int = None) -> Tuple[int, int, int]:
    """(lambda, nu, m0) from a valuation sequence."""
    need = TOWER_SETTINGS["stable_differences"] if stable is None else stable
    diffs = [b - a for a, b in zip(valuations, valuations[1:])]
    if len(diffs) < need or len(set(diffs[-need:])) != 1:
        raise TowerWindowExhausted(f"differences {diffs} do not stabilize over {need} levels")
    lam = diffs[-1]
    top = len(valuations) - 1
    nu = valuations[top] - lam * top
    m0 = top
    while m0 > 0 and valuations[m0 - 1] == lam * (m0 - 1) + nu:
        m0 -= 1
    return lam, nu, m0


def lambda_invariant(c: Curve, l: int, max_m: int = None) -> Tuple[int, int, int]:
    return fit_linear(tower_valuations(c, l, max_m=max_m))


def _offsets_at(e: Tuple[int, int], m: int, lam: int) -> Tuple[int, ...]:
    if lam == 1:
        if e[0]:
            logger.warning("[tower] level %d: cyclic formula drops a constant factor of exponent %d", m, e[0])
        return (e[1] - m,)
    return tuple(sorted((e[0] - m, e[1] - m)))


def tower_structures(
    c: Curve,
    l: int,
    max_verified_m: int = None,
    max_m: int = None,
    seed: int = 0,
    degree_cap: int = None,
) -> TowerReport:
    """
    Valuations over the full window plus verified Sylow structures on the
    low levels; offsets c_i give Z/l^{m+c_1} x Z/l^{m+c_2} from m0 on.
    """
    vals = tower_valuations(c, l, max_m=max_m)
    lam, nu, m0 = fit_linear(vals)
    if max_verified_m is None:
        max_verified_m = TOWER_SETTINGS["verify_window"].get(l, TOWER_SETTINGS["verify_window_default"])
    cap = FIELD_SETTINGS["degree_cap"] if degree_cap is None else degree_cap

    structures: Dict[int, Tuple[int, int]] = {}
    partial = []
    for m in range(min(max_verified_m, len(vals) - 1) + 1):
        try:
            e = l_part_structure(c, l ** m, 1, l, seed=seed, degree_cap=cap)
        except (CapExceededError, SamplingBudgetExhausted) as exc:
            logger.warning("[tower] %s l=%d level %d unverified: %s", c.spec, l, m, exc)
            partial.append(m)
            continue
        if sum(e) != vals[m]:
            raise ArithmeticError(f"structure {e} at level {m} contradicts valuation {vals[m]}")
        structures[m] = e

    offsets = None
    onset = m0
    fitted = [m for m in sorted(structures) if m >= m0]
    if fitted:
        offsets = _offsets_at(structures[fitted[-1]], fitted[-1], lam)
        # the structure formula may settle later than the valuations do
        settled = fitted[-1]
        for m in reversed(fitted[:-1]):
            if _offsets_at(structures[m], m, lam) != offsets:
                break
            settled = m
        onset = m0 if settled == fitted[0] else settled
        if onset > m0:
            logger.info("[tower] %s l=%d structure formula holds from m=%d (valuations from %d)",
                        c.spec, l, onset, m0)
    elif lam == 1:
        offsets = (nu,)
    if offsets is not None and len(offsets) != lam:
        logger.warning("[tower] %s l=%d: %d offsets for lambda=%d", c.spec, l, len(offsets), lam)
    return TowerReport(l, lam, nu, onset, vals, structures, offsets, tuple(partial))


def _exponent(l: int, offset: int) -> str:
    if offset == 0:
        return f"Z/{l}^{{m}}Z"
    sign = "+" if offset > 0 else "-"
    return f"Z/{l}^{{m{sign}{abs(offset)}}}Z"


def render_formula(l: int, offsets: Tuple[int, ...], m0: int) -> str:
    """E.g. 'K_2(2^m)(2) = Z/2^{m+1}Z x Z/2^{m}Z, m>=2' (offsets descending)."""
    body = " x ".join(_exponent(l, o) for o in sorted(offsets, reverse=True))
    return f"K_2({l}^m)({l}) = {body}, m>={m0}"
