from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile
from pathlib import Path
from typing import Any, Iterable, Sequence

from openpyxl import Workbook
from openpyxl.styles import Alignment, Font, PatternFill
from openpyxl.utils import get_column_letter


Row = Sequence[Any]


def format_number(value: Any) -> str:
    """17 significant digits, enough for floats to round-trip exactly."""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def atomic_write_bytes(path: Path, data: bytes) -> Path:
    """Write to a temporary file next to ``path`` and rename it into place."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "wb") as handle:
            handle.write(data)
        os.replace(tmp_name, path)
    except BaseException:
        Path(tmp_name).unlink(missing_ok=True)
        raise
    return path


def render_csv(header: Row, rows: Iterable[Row]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_number(value) for value in row])
    return buffer.getvalue()


def write_csv(path: Path, header: Row, rows: Iterable[Row]) -> Path:
    return atomic_write_bytes(path, render_csv(header, rows).encode("utf-8"))


def _json_safe(value: Any) -> Any:
    if isinstance(value, float) and not math.isfinite(value):
        return str(value)
    if isinstance(value, dict):
        return {key: _json_safe(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(item) for item in value]
    return value


def write_json(path: Path, payload: Any) -> Path:
    text = json.dumps(_json_safe(payload), indent=2, ensure_ascii=False)
    return atomic_write_bytes(path, (text + "\n").encode("utf-8"))


def build_workbook(sheets: dict[str, tuple[Row, Iterable[Row]]]) -> bytes:
    """One styled sheet per table: bold white header on blue, auto column widths."""
    wb = Workbook()
    wb.remove(wb.active)
    header_fill = PatternFill(start_color="366092", end_color="366092", fill_type="solid")
    header_font = Font(bold=True, color="FFFFFF")

    for title, (header, rows) in sheets.items():
        ws = wb.create_sheet(title[:31])
        ws.append(list(header))
        for row in rows:
            ws.append([float(v) if isinstance(v, float) else v for v in row])
        for cell in ws[1]:
            cell.fill = header_fill
            cell.font = header_font
            cell.alignment = Alignment(horizontal="center")
        for column in ws.columns:
            column_letter = get_column_letter(column[0].column)
            max_length = max(len(str(cell.value)) for cell in column if cell.value is not None)
            ws.column_dimensions[column_letter].width = min(max_length + 2, 50)

    buffer = io.BytesIO()
    wb.save(buffer)
    return buffer.getvalue()


def write_workbook(path: Path, sheets: dict[str, tuple[Row, Iterable[Row]]]) -> Path:
    return atomic_write_bytes(path, build_workbook(sheets))
