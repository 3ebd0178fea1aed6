"""Output plumbing: atomic file writes and delimited report emission.

Report files are plain CSV/TSV with ``#`` comment lines up front: an optional
timestamp (suppressible for byte-reproducible runs) and a one-line column
description, followed by a header row and the data.
"""

from __future__ import annotations

import datetime
import json
import os
import sys
import tempfile
from typing import Iterable, Sequence


def atomic_write_text(path: str, text: str) -> None:
    """Write via a temp file in the same directory, then rename."""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".part")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def emit_text(text: str, output: str | None) -> None:
    """Write to ``output`` atomically, or to stdout when output is None/'-'."""
    if output is None or output == "-":
        sys.stdout.write(text)
    else:
        atomic_write_text(output, text)


def render_table(
    header: Sequence[str],
    rows: Iterable[Sequence],
    columns_note: str | None = None,
    timestamp: bool = True,
    delimiter: str = ",",
) -> str:
    """Delimited table text with comment preamble."""
    lines: list[str] = []
    if timestamp:
        stamp = datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds")
        lines.append(f"# generated: {stamp}")
    if columns_note:
        lines.append(f"# columns: {columns_note}")
    lines.append(delimiter.join(header))
    for row in rows:
        lines.append(delimiter.join(_format_cell(cell) for cell in row))
    return "\n".join(lines) + "\n"


def _format_cell(cell) -> str:
    if isinstance(cell, float):
        return repr(float(cell))  # shortest round-trip form, numpy included
    if hasattr(cell, "item"):
        return _format_cell(cell.item())
    return str(cell)


def emit_json(obj, output: str | None) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    emit_text(text, output)


def read_text(path: str) -> str:
    """Read a file, or stdin when path is '-'."""
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()
