"""
Golden tables: CSV transcriptions of the printed K-group tables.

Text columns are kept verbatim (see data/README.md for the ASCII escapes);
the `curve` and `trace` columns hold parsed values, and loading re-derives
them from the text so the two layers cannot drift apart.
"""

import csv
import hashlib
import logging
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Tuple

from config.settings import ATLAS_SETTINGS
from core.errors import GoldenDataError, InvalidInputError
from core.numeric import InvariantFactors
from core.weierstrass import Curve
from core.zeta import parse_surd

logger = logging.getLogger(__name__)

_CYCLIC = re.compile(r"^Z/(\d+)Z$")
_LAMBDA_PRIME = re.compile(r"lambda\((\d+)\)")
_LAMBDA_VALUE = re.compile(r"=(\d+)$")
_SYLOW = re.compile(r"^K_2\((\d+)\^m\)\((\d+)\) = (.+), m>=(\d+)$")
_SYLOW_FACTOR = re.compile(r"^Z/(\d+)\^\{m([+-]\d+)?\}Z$")

BASE_COLUMNS = ("row", "equation", "roots", "EF", "K2", "lambda", "sylow")
TAIL_COLUMNS = ("curve", "trace", "flags")


@dataclass(frozen=True)
class SylowFormula:
    """K_2(l^m)(l) = Z/l^{m+c_1} x ..., m >= m0; offsets ascending."""
    l: int
    offsets: Tuple[int, ...]
    m0: int

    def valuation(self, m: int) -> int:
        return sum(m + c for c in self.offsets)


@dataclass(frozen=True)
class TableRow:
    table: str
    row: int
    equation: str
    roots: str
    EF: str
    K2: str
    lambda_text: str
    sylow_text: str
    kgroups: Tuple[Tuple[str, str], ...]
    curve_spec: str
    trace: int
    flags: Tuple[str, ...] = ()

    @property
    def p(self) -> int:
        return ATLAS_SETTINGS["fields"][self.table]

    @property
    def is_malformed(self) -> bool:
        return "malformed" in self.flags

    @property
    def key(self) -> Tuple[int, int]:
        return ATLAS_SETTINGS["tables"].index(self.table), self.row

    def curve(self) -> Curve:
        return Curve.parse(self.curve_spec)

    def cell(self, name: str) -> str:
        """Verbatim text of a printed cell by CSV column name."""
        named = {
            "equation": self.equation,
            "roots": self.roots,
            "EF": self.EF,
            "K2": self.K2,
            "lambda": self.lambda_text,
            "sylow": self.sylow_text,
        }
        named.update(self.kgroups)
        return named[name]

    def columns(self) -> Tuple[str, ...]:
        """Printed cells this row carries, in CSV order."""
        cols = ["equation", "roots", "EF", "K2", "lambda"]
        if self.sylow_text:
            cols.append("sylow")
        cols.extend(name for name, _ in self.kgroups)
        return tuple(cols)

    def __str__(self) -> str:
        return f"{self.table}/{self.row} {self.equation}"


# ----------------------------------------------------------------------
# cell parsers
# ----------------------------------------------------------------------
def parse_group(text: str) -> InvariantFactors:
    """'{O}', 'Z/19Z' or 'Z/2Z x Z/14Z' as canonical invariant factors."""
    body = text.strip()
    if body in ("{O}", "1", "0"):
        return InvariantFactors()
    orders = []
    for part in body.split(" x "):
        match = _CYCLIC.match(part.strip())
        if match is None:
            raise GoldenDataError(f"cannot parse group {text!r}")
        orders.append(int(match.group(1)))
    return InvariantFactors.from_cyclic_orders(orders)


def render_group(group: InvariantFactors) -> str:
    """Printed form of a canonical group, 'Z/2Z x Z/14Z' or '{O}'."""
    if not group.factors:
        return "{O}"
    return " x ".join(f"Z/{d}Z" for d in group.factors)


def parse_lambda(text: str) -> Dict[int, int]:
    """'lambda(2)=lambda(7)=2, lambda(23)=1' -> {2: 2, 7: 2, 23: 1}."""
    out: Dict[int, int] = {}
    for chunk in re.split(r"[;,]", text):
        chunk = chunk.strip().replace(" ", "")
        if not chunk:
            continue
        primes = _LAMBDA_PRIME.findall(chunk)
        value = _LAMBDA_VALUE.search(chunk)
        if not primes or value is None:
            raise GoldenDataError(f"cannot parse lambda assignment {chunk!r}")
        for l in primes:
            out[int(l)] = int(value.group(1))
    return out


def render_lambda(values: Dict[int, int]) -> str:
    return "; ".join(f"lambda({l})={lam}" for l, lam in sorted(values.items()))


def parse_sylow(text: str) -> Dict[int, SylowFormula]:
    out: Dict[int, SylowFormula] = {}
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        match = _SYLOW.match(chunk)
        if match is None or match.group(1) != match.group(2):
            raise GoldenDataError(f"cannot parse Sylow formula {chunk!r}")
        l = int(match.group(1))
        offsets = []
        for factor in match.group(3).split(" x "):
            fm = _SYLOW_FACTOR.match(factor.strip())
            if fm is None or int(fm.group(1)) != l:
                raise GoldenDataError(f"cannot parse Sylow factor {factor!r} in {chunk!r}")
            offsets.append(int(fm.group(2) or 0))
        out[l] = SylowFormula(l, tuple(sorted(offsets)), int(match.group(4)))
    return out


# ----------------------------------------------------------------------
# loading
# ----------------------------------------------------------------------
def _read_checksums(data_dir: Path) -> Dict[str, str]:
    sums = {}
    path = data_dir / ATLAS_SETTINGS["checksum_file"]
    for line in path.read_text(encoding="utf-8").splitlines():
        if line.strip():
            digest, name = line.split(maxsplit=1)
            sums[name.strip().lstrip("*")] = digest
    return sums


def verify_checksums(data_dir: Path, names: Iterable[str]) -> None:
    sums = _read_checksums(data_dir)
    for name in names:
        digest = hashlib.sha256((data_dir / name).read_bytes()).hexdigest()
        if sums.get(name) != digest:
            raise GoldenDataError(f"checksum mismatch for {name}")


def _check_parsed_columns(r: TableRow) -> None:
    curve = r.curve()
    if r.is_malformed:
        try:
            Curve.from_equation(r.equation, r.p)
        except InvalidInputError:
            pass
        else:
            raise GoldenDataError(f"{r} is flagged malformed but parses")
    elif Curve.from_equation(r.equation, r.p) != curve:
        raise GoldenDataError(f"{r}: curve column {r.curve_spec} disagrees with the equation")
    if curve.p != r.p:
        raise GoldenDataError(f"{r}: curve over F_{curve.p} in the F_{r.p} table")
    a, D = parse_surd(r.roots)
    if a != r.trace or D != a * a - 4 * r.p:
        raise GoldenDataError(f"{r}: roots {r.roots!r} disagree with trace {r.trace}")


def _parse_row(table: str, record: Dict[str, str]) -> TableRow:
    kgroups = tuple(
        (name, record[name]) for name in ATLAS_SETTINGS["kgroup_columns"] if record.get(name)
    )
    flags = tuple(f for f in (record.get("flags") or "").split("|") if f)
    try:
        return TableRow(
            table=table,
            row=int(record["row"]),
            equation=record["equation"],
            roots=record["roots"],
            EF=record["EF"],
            K2=record["K2"],
            lambda_text=record["lambda"],
            sylow_text=record.get("sylow") or "",
            kgroups=kgroups,
            curve_spec=record["curve"],
            trace=int(record["trace"]),
            flags=flags,
        )
    except (KeyError, ValueError) as exc:
        raise GoldenDataError(f"table {table}: bad record {record!r}") from exc


def load_table(table: str, data_dir: Optional[Path] = None) -> Tuple[TableRow, ...]:
    directory = Path(data_dir) if data_dir else ATLAS_SETTINGS["data_dir"]
    path = directory / f"table_{table}.csv"
    with path.open(newline="", encoding="utf-8") as fh:
        rows = tuple(_parse_row(table, rec) for rec in csv.DictReader(fh))
    for r in rows:
        _check_parsed_columns(r)
    return rows


def load_golden(
    data_dir: Optional[Path] = None, tables: Optional[Iterable[str]] = None
) -> Tuple[TableRow, ...]:
    """
    Every row of the requested tables (all five by default).

    The shipped directory is checksum-verified; a custom directory is read
    with a warning so perturbed copies can be verified.
    """
    shipped = Path(ATLAS_SETTINGS["data_dir"])
    directory = Path(data_dir) if data_dir else shipped
    wanted = tuple(tables) if tables else ATLAS_SETTINGS["tables"]
    unknown = [t for t in wanted if t not in ATLAS_SETTINGS["tables"]]
    if unknown:
        raise InvalidInputError(f"unknown tables {unknown}")
    names = [f"table_{t}.csv" for t in wanted]
    if directory.resolve() == shipped.resolve():
        verify_checksums(directory, names)
    else:
        logger.warning("[atlas] %s is not the shipped data directory, checksums skipped", directory)

    rows: List[TableRow] = []
    for t in wanted:
        loaded = load_table(t, directory)
        expected = ATLAS_SETTINGS["row_counts"][t]
        if len(loaded) != expected:
            raise GoldenDataError(f"table {t} has {len(loaded)} rows, expected {expected}")
        rows.extend(loaded)
    logger.info("[atlas] loaded %d rows from %d tables", len(rows), len(wanted))
    return tuple(rows)


def write_rows(rows: Iterable[Dict[str, str]], columns: Tuple[str, ...], out) -> None:
    """CSV in the golden schema; `out` is any text stream."""
    writer = csv.DictWriter(out, fieldnames=list(columns), lineterminator="\n")
    writer.writeheader()
    for rec in rows:
        writer.writerow(rec)
