"""
Registered findings: printed cells known to disagree with recomputation.

Errata are cells whose printed value is wrong; anomalies are rows whose
printed data cannot be attributed to the printed equation (malformed or
duplicated equations). A finding is matched by (table, row, cell).
"""

from dataclasses import dataclass
from typing import Optional, Tuple


@dataclass(frozen=True)
class Erratum:
    table: str
    row: int
    cell: str
    printed: str
    recomputed: str
    oracle: str

    def covers(self, table: str, row: int, cell: str) -> bool:
        return self.table == table and self.row == row and self.cell == cell


@dataclass(frozen=True)
class Anomaly:
    table: str
    rows: Tuple[int, ...]
    cells: Tuple[str, ...]
    note: str

    def covers(self, table: str, row: int, cell: str) -> bool:
        return self.table == table and row in self.rows and cell in self.cells


ERRATA: Tuple[Erratum, ...] = (
    Erratum("I", 2, "K8", "Z/19552Z", "19522", "kgroup_order: 1 - 2*3^4 + 3^9"),
    Erratum("II", 1, "sylow", "K_2(2^m)(2) = Z/2^{m+2}Z x Z/2^{m+3}Z, m>=2", "Z/2^{m+2}Z x Z/2^{m+1}Z",
            "tower_valuations: v_2 = 7 at m = 2, printed formula gives 9"),
    Erratum("II", 3, "sylow", "K_2(2^m)(2) = Z/2^{m+1}Z x Z/2^{m+2}Z, m>=1", "Z/2^{m+3}Z x Z/2^{m}Z",
            "membership: E[4] is not killed at m = 1; structure (1, 4)"),
    Erratum("II", 8, "K8", "Z/19537Z", "1953751", "kgroup_order: 1 + 5^4 + 5^9"),
    Erratum("II", 12, "sylow", "K_2(2^m)(2) = Z/2^{m+2}Z x Z/2^{m+3}Z, m>=1", "Z/2^{m+2}Z x Z/2^{m+1}Z",
            "tower_valuations: v_1 = 2, printed formula gives 7"),
    Erratum("III", 9, "K2_part2", "Z/334Z", "344", "kgroup_order; the K2 column prints Z/344Z"),
    # rows 12 and 13 carry each other's EF and K2 cells
    Erratum("IV", 12, "EF", "Z/12Z", "Z/2Z x Z/6Z", "y^2=x^3+2x has full rational 2-torsion"),
    Erratum("IV", 12, "K2", "Z/1332Z", "Z/2 x Z/666", "membership: E[2] is rational"),
    Erratum("IV", 13, "EF", "Z/2Z x Z/6Z", "Z/12Z", "y^2=x^3+2 has a single rational 2-torsion point"),
    Erratum("IV", 13, "K2", "Z/2Z x Z/666Z", "Z/1332", "membership: E[2] is not rational"),
    Erratum("IV", 14, "lambda", "lambda(17)=lambda(19)=1", "lambda(17)=1; lambda(79)=1",
            "factorize: 1343 = 17 * 79"),
)

ANOMALIES: Tuple[Anomaly, ...] = (
    Anomaly("IV", (7,), ("equation",), "printed 'y^2=x^3+4x=8'; data verified against y^2=x^3+4x+8"),
    Anomaly("IV", (10, 11), ("duplicate",), "equation y^2=x^3+x printed twice with identical data"),
    Anomaly("IV", (4, 19), ("duplicate",), "equation y^2=x^3+8x+8 printed twice with different data"),
    # row 19 data (trace -4) belongs to a class whose equation is not printed
    Anomaly("IV", (19,), ("roots", "EF", "K2", "lambda"), "printed data does not match y^2=x^3+8x+8 (trace 4)"),
)


def find_registered(table: str, row: int, cell: str) -> Optional[object]:
    """The erratum or anomaly covering a cell, if any (errata take precedence)."""
    for e in ERRATA:
        if e.covers(table, row, cell):
            return e
    for a in ANOMALIES:
        if a.covers(table, row, cell):
            return a
    return None


def anomaly_rows(table: str) -> Tuple[int, ...]:
    """Rows whose printed equation or trace data is unreliable."""
    return tuple(sorted({
        r for a in ANOMALIES if a.table == table and {"equation", "roots"} & set(a.cells) for r in a.rows
    }))
