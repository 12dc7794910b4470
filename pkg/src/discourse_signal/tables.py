"""Small helpers for emitting aligned text tables and CSV files.

Both writers are deterministic: column widths depend only on content and
CSV output always uses '\\n' line endings so reruns are byte-identical
across platforms.
"""

import csv
import io


def render_aligned(header, rows, indent=0):
    """Render a list of string rows as a left-aligned column table."""
    table = [list(header)] + [list(r) for r in rows]
    ncols = max(len(r) for r in table)
    widths = [0] * ncols
    for row in table:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))
    pad = " " * indent
    lines = []
    for k, row in enumerate(table):
        cells = [cell.ljust(widths[i]) for i, cell in enumerate(row)]
        lines.append((pad + "  ".join(cells)).rstrip())
        if k == 0:
            lines.append(pad + "  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def csv_text(header, rows):
    """Serialize rows to CSV text with a header line."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def write_text(path, text):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def read_csv_rows(path):
    """Read a CSV written by csv_text; returns (header, rows)."""
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        rows = list(reader)
    if not rows:
        return [], []
    return rows[0], rows[1:]
