"""Reader for the simulation CSV format.

Layout: one '#' metadata line of key=value tokens, a header row, then
numeric rows.  The reader validates the header against the expected
column set for the figure being drawn and fails loudly on anything else;
a silent column mixup would produce a plausible-looking but wrong plot.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class CsvFormatError(Exception):
    """Input file is missing, empty, or not in the expected layout."""


@dataclass(frozen=True)
class ResultTable:
    path: str
    meta: dict[str, str]
    columns: dict[str, np.ndarray]

    def column(self, name: str) -> np.ndarray:
        return self.columns[name]


def _parse_meta(line: str, path: str) -> dict[str, str]:
    if not line.startswith("#"):
        raise CsvFormatError(f"{path}: first line must be '#' metadata, got {line[:40]!r}")
    meta = {}
    for token in line[1:].split():
        if "=" in token:
            key, value = token.split("=", 1)
            meta[key] = value
    return meta


def read_result_csv(path: str, expected_header: list[str]) -> ResultTable:
    """Load one CSV, enforcing the exact expected column set."""
    try:
        with open(path, encoding="utf-8") as fh:
            lines = [line.rstrip("\n") for line in fh]
    except OSError as exc:
        raise CsvFormatError(f"cannot read {path}: {exc}")
    if not lines or not any(line.strip() for line in lines):
        raise CsvFormatError(f"{path}: file is empty")
    meta = _parse_meta(lines[0], path)
    if len(lines) < 2:
        raise CsvFormatError(f"{path}: missing header row")
    header = [h.strip() for h in lines[1].split(",")]
    if header != expected_header:
        raise CsvFormatError(
            f"{path}: header {header} does not match expected {expected_header}"
        )
    rows = []
    for lineno, line in enumerate(lines[2:], start=3):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != len(header):
            raise CsvFormatError(
                f"{path}:{lineno}: expected {len(header)} fields, got {len(parts)}"
            )
        try:
            rows.append([float(v) for v in parts])
        except ValueError:
            raise CsvFormatError(f"{path}:{lineno}: non-numeric value in {line!r}")
    if not rows:
        raise CsvFormatError(f"{path}: no data rows")
    data = np.asarray(rows)
    columns = {name: data[:, j] for j, name in enumerate(header)}
    return ResultTable(path=path, meta=meta, columns=columns)
