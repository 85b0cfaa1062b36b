"""
Command implementations. Each takes a validated RunConfig and an output
stream and returns the process exit code.
"""

import logging
import sys
from typing import TextIO

from atlas.curve_catalog import CurveCatalog
from atlas.golden import render_group, write_rows
from atlas.verifier import verify_tables
from core.errors import InvalidInputError
from core.weierstrass import count_points, rational_structure
from core.zeta import trace
from kgroups.structure import kgroup_structure
from kgroups.tower import tower_structures

from cli.render import ReportRenderer
from cli.run_config import RunConfig

logger = logging.getLogger(__name__)

CURVE_COLUMNS = ("curve", "equation", "N", "EF", "trace", "roots", "discriminant")
KGROUP_COLUMNS = ("curve", "n", "m", "order", "structure", "verified")
TOWER_COLUMNS = ("curve", "l", "lambda", "nu", "m0", "formula", "valuations", "verified_levels", "partial_levels")
FINDING_COLUMNS = ("table", "row", "cell", "status", "printed", "computed", "note")


def cmd_curve_info(cfg: RunConfig, out: TextIO = sys.stdout) -> int:
    c = cfg.parsed_curve()
    z = trace(c)
    rec = {
        "curve": c.spec,
        "equation": c.equation(),
        "N": str(count_points(c, bound=cfg.enum_bound)),
        "EF": render_group(rational_structure(c)),
        "trace": str(z.a),
        "roots": z.surd,
        "discriminant": str(c.discriminant),
    }
    out.write(ReportRenderer(cfg.fmt).render([rec], CURVE_COLUMNS, title=f"E: {c.equation()} over F_{c.p}"))
    return 0


def cmd_kgroup(cfg: RunConfig, out: TextIO = sys.stdout) -> int:
    c = cfg.parsed_curve()
    lo, hi = cfg.m_range
    records = []
    for m in range(lo, hi + 1):
        structure = kgroup_structure(c, cfg.n, m, seed=cfg.seed, degree_cap=cfg.degree_cap)
        records.append({
            "curve": c.spec,
            "n": str(cfg.n),
            "m": str(m),
            "order": str(structure.order),
            "structure": render_group(structure.factors),
            "verified": "yes" if structure.verified else "no:" + ",".join(map(str, structure.unverified)),
        })
    out.write(ReportRenderer(cfg.fmt).render(records, KGROUP_COLUMNS, title=f"K_2m({c.spec}) over degree {cfg.n}"))
    return 0


def cmd_tower(cfg: RunConfig, out: TextIO = sys.stdout) -> int:
    c = cfg.parsed_curve()
    if cfg.l is None:
        raise InvalidInputError("tower needs --l")
    report = tower_structures(c, cfg.l, seed=cfg.seed, degree_cap=cfg.degree_cap)
    rec = {
        "curve": c.spec,
        "l": str(report.l),
        "lambda": str(report.lam),
        "nu": str(report.nu),
        "m0": str(report.m0),
        "formula": report.formula(),
        "valuations": " ".join(map(str, report.valuations)),
        "verified_levels": " ".join(map(str, report.verified_levels)),
        "partial_levels": " ".join(map(str, report.partial)),
    }
    if cfg.fmt == "human":
        out.write(f"lambda={report.lam}; {report.formula() or 'structure unverified'}\n")
    out.write(ReportRenderer(cfg.fmt).render([rec], TOWER_COLUMNS, title=f"{cfg.l}-tower of {c.spec}"))
    return 0


def cmd_verify(cfg: RunConfig, out: TextIO = sys.stdout) -> int:
    report = verify_tables(
        tables=cfg.tables or None,
        data_dir=cfg.data_dir,
        seed=cfg.seed,
        degree_cap=cfg.degree_cap,
        workers=cfg.workers,
    )
    records = [
        {
            "table": r.table,
            "row": str(r.row),
            "cell": r.cell,
            "status": r.status,
            "printed": r.printed,
            "computed": r.computed,
            "note": r.note,
        }
        for r in report.findings
    ]
    out.write(ReportRenderer(cfg.fmt).render(records, FINDING_COLUMNS, title="Findings"))
    if cfg.fmt == "human":
        counts = report.counts()
        out.write("\n" + "  ".join(f"{k}={v}" for k, v in counts.items()) + "\n")
    for r in report.by_status("mismatch"):
        logger.error("[verify] unregistered mismatch %s/%d %s: printed %r, computed %r",
                     r.table, r.row, r.cell, r.printed, r.computed)
    return report.exit_code


def cmd_tables(cfg: RunConfig, out: TextIO = sys.stdout) -> int:
    if cfg.field_p is None:
        raise InvalidInputError("tables needs --field p")
    catalog = CurveCatalog(cfg.field_p)
    records = catalog.records(seed=cfg.seed, degree_cap=cfg.degree_cap)
    columns = catalog.columns()
    if cfg.fmt == "csv":
        write_rows(records, columns, out)
    else:
        out.write(ReportRenderer(cfg.fmt).render(records, columns, title=f"Elliptic curves over F_{cfg.field_p}"))
    return 0


COMMANDS = {
    "curve-info": cmd_curve_info,
    "kgroup": cmd_kgroup,
    "tower": cmd_tower,
    "verify": cmd_verify,
    "tables": cmd_tables,
}
