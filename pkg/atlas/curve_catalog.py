from dataclasses import dataclass
from typing import Dict, List, Optional, Set, Tuple
import logging

from sympy import isprime

from config.settings import ATLAS_SETTINGS
from core.errors import InvalidInputError, SingularCurveError
from core.numeric import factorize
from core.weierstrass import Curve, rational_structure
from core.zeta import ZetaData, kgroup_order, trace
from kgroups.structure import kgroup_structure
from kgroups.tower import lambda_invariant, tower_structures

from atlas.golden import render_group, render_lambda

logger = logging.getLogger(__name__)

Coeffs = Tuple[int, int, int]


@dataclass(frozen=True)
class CatalogEntry:
    row: int
    curve: Curve
    zeta: ZetaData
    K2_order: int


class CurveCatalog:
    """
    **Role:** Produce every F_p-isomorphism class of elliptic curve
    y^2 = x^3 + a2 x^2 + a4 x + a6, one canonical representative each.

    Classes are orbits under x -> u^2 x + r, y -> u^3 y; the representative is
    the lexicographically least (a2, a4, a6) of its orbit. Rows are ordered by
    #K_2 ascending (trace descending), ties by coefficients.
    """

    def __init__(self, p: int):
        """
        Args:
            p (int): odd prime
        """
        if p < 3 or not isprime(p):
            raise InvalidInputError(f"catalog field must be an odd prime, got {p}")
        self.p: int = p
        self.entries: List[CatalogEntry] = []

    def generate(self) -> List[CatalogEntry]:
        """
        Enumerate all nonsingular coefficient triples and keep one per class.

        Returns:
            List[CatalogEntry]: rows numbered from 1
        """
        seen: Set[Coeffs] = set()
        reps: List[Curve] = []
        p = self.p
        for a2 in range(p):
            for a4 in range(p):
                for a6 in range(p):
                    if (a2, a4, a6) in seen:
                        continue
                    try:
                        c = Curve(p, a2, a4, a6)
                    except SingularCurveError:
                        continue
                    orbit = self._orbit((a2, a4, a6))
                    seen.update(orbit)
                    # the scan is lexicographic, so the first member met is the least
                    reps.append(c)

        keyed = []
        for c in reps:
            z = trace(c)
            keyed.append((kgroup_order(z.a, p, 1, 1), (c.a2, c.a4, c.a6), c, z))
        keyed.sort(key=lambda k: (k[0], k[1]))
        self.entries = [CatalogEntry(i + 1, c, z, order) for i, (order, _, c, z) in enumerate(keyed)]
        logger.info("[catalog] F_%d: %d isomorphism classes", p, len(self.entries))
        return self.entries

    def _orbit(self, coeffs: Coeffs) -> Set[Coeffs]:
        """All (a2, a4, a6) reachable by x -> u^2 x + r, y -> u^3 y."""
        p = self.p
        a2, a4, a6 = coeffs
        out = set()
        for u in range(1, p):
            u2 = pow(u * u, -1, p)
            u4 = u2 * u2 % p
            u6 = u4 * u2 % p
            for r in range(p):
                b2 = (3 * r + a2) * u2 % p
                b4 = (3 * r * r + 2 * a2 * r + a4) * u4 % p
                b6 = (r ** 3 + a2 * r * r + a4 * r + a6) * u6 % p
                out.add((b2, b4, b6))
        return out

    def canonical(self, c: Curve) -> Curve:
        """Representative of the class of c."""
        if c.p != self.p:
            raise InvalidInputError(f"curve over F_{c.p} in the F_{self.p} catalog")
        return Curve(self.p, *min(self._orbit((c.a2, c.a4, c.a6))))

    def find(self, c: Curve) -> Optional[CatalogEntry]:
        if not self.entries:
            self.generate()
        rep = self.canonical(c)
        return next((e for e in self.entries if e.curve == rep), None)

    def twist_partner(self, entry: CatalogEntry) -> CatalogEntry:
        """Row max+1-n."""
        return self.entries[len(self.entries) - entry.row]

    def records(self, extended: bool = None, seed: int = 0, degree_cap: int = None) -> List[Dict[str, str]]:
        """
        Rows in the golden CSV schema with every cell recomputed.

        Args:
            extended (bool): add the sylow and K_4 ... K_12 columns (default: p <= 7)
        """
        if not self.entries:
            self.generate()
        if extended is None:
            extended = self.p <= ATLAS_SETTINGS["extended_field_max"]
        out = []
        for e in self.entries:
            c = e.curve
            primes = [l for l, _ in factorize(e.K2_order)]
            lambdas = {l: lambda_invariant(c, l)[0] for l in primes}
            rec = {
                "row": str(e.row),
                "equation": c.equation(),
                "roots": e.zeta.surd,
                "EF": render_group(rational_structure(c)),
                "K2": render_group(kgroup_structure(c, 1, 1, seed=seed, degree_cap=degree_cap).factors),
                "lambda": render_lambda(lambdas),
                "sylow": "",
                "curve": c.spec,
                "trace": str(e.zeta.a),
                "flags": "",
            }
            if extended:
                formulas = []
                for l in primes:
                    report = tower_structures(c, l, seed=seed, degree_cap=degree_cap)
                    if report.offsets is not None:
                        formulas.append(report.formula())
                    else:
                        rec["flags"] = "partial"
                rec["sylow"] = "; ".join(formulas)
                for column in ATLAS_SETTINGS["kgroup_columns"]:
                    m = 1 if column == "K2_part2" else int(column[1:]) // 2
                    structure = kgroup_structure(c, 1, m, seed=seed, degree_cap=degree_cap)
                    rec[column] = render_group(structure.factors)
            out.append(rec)
        return out

    def columns(self, extended: bool = None) -> Tuple[str, ...]:
        if extended is None:
            extended = self.p <= ATLAS_SETTINGS["extended_field_max"]
        base = ("row", "equation", "roots", "EF", "K2", "lambda", "sylow")
        if extended:
            base = base + ATLAS_SETTINGS["kgroup_columns"]
        return base + ("curve", "trace", "flags")

    def __str__(self) -> str:
        """String representation of the catalog."""
        lines = [f"F_{self.p}: {len(self.entries)} classes"]
        for e in self.entries:
            lines.append(f"{e.row:3d}  {e.curve.equation():<22} a={e.zeta.a:+d}  #K2={e.K2_order}")
        return "\n".join(lines)
