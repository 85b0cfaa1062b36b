import csv
import io
from typing import Dict, List, Sequence


class ReportRenderer:
    """Formats result records as an aligned table, CSV or key=value blocks."""

    def __init__(self, fmt: str):
        self.fmt = fmt

    def render(self, records: List[Dict[str, str]], columns: Sequence[str], title: str = "") -> str:
        if self.fmt == "csv":
            return self._csv(records, columns)
        if self.fmt == "kv":
            return self._kv(records, columns)
        return self._table(records, columns, title)

    def _csv(self, records, columns) -> str:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=list(columns), lineterminator="\n", extrasaction="ignore")
        writer.writeheader()
        for rec in records:
            writer.writerow({c: rec.get(c, "") for c in columns})
        return buf.getvalue()

    def _kv(self, records, columns) -> str:
        blocks = []
        for rec in records:
            blocks.append("\n".join(f"{c}={rec.get(c, '')}" for c in columns))
        return "\n\n".join(blocks) + ("\n" if blocks else "")

    def _table(self, records, columns, title) -> str:
        widths = {c: len(c) for c in columns}
        for rec in records:
            for c in columns:
                widths[c] = max(widths[c], len(str(rec.get(c, ""))))
        header = "  ".join(c.ljust(widths[c]) for c in columns)
        lines = []
        if title:
            lines.append(title)
            lines.append("=" * len(title))
        lines.append(header)
        lines.append("-" * len(header))
        for rec in records:
            lines.append("  ".join(str(rec.get(c, "")).ljust(widths[c]) for c in columns).rstrip())
        return "\n".join(lines) + "\n"
