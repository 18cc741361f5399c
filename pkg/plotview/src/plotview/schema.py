"""CSV schema contract shared with the micromacro CLI."""

from __future__ import annotations

import csv

SCHEMAS = {
    "fig2": ["x", "p_plus", "p_minus"],
    "fig3": ["r_db", "m", "t_policy", "D", "status"],
    "fig4": ["r_db", "m", "t_policy", "P", "status"],
    "fig5": ["r_db", "t", "P", "status"],
    "fig5_tbal": ["r_db", "t_bal", "status"],
    "remote": ["lambda", "eta", "herald_prob", "fidelity", "log_negativity", "status"],
}

_TEXT_COLUMNS = {"t_policy", "status"}


class SchemaError(Exception):
    """Input CSV does not match the figure-kind contract."""


def read_table(path: str, kind: str) -> list[dict]:
    """Parse a CSV under the exact column contract for ``kind``.

    Unknown or missing columns are rejected with a diagnostic naming both
    the expected and the found header. Numeric fields are converted; rows
    flagged by a non-"ok" status are kept so callers can drop them.
    """
    if kind not in SCHEMAS:
        raise SchemaError(f"unknown figure kind {kind!r}; expected one of {sorted(SCHEMAS)}")
    expected = SCHEMAS[kind]
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            try:
                header = next(reader)
            except StopIteration:
                raise SchemaError(f"{path}: file is empty (no header row)") from None
            if header != expected:
                missing = [c for c in expected if c not in header]
                unknown = [c for c in header if c not in expected]
                raise SchemaError(
                    f"{path}: header mismatch for kind {kind!r}: expected {expected}, "
                    f"found {header} (missing {missing or 'none'}, unknown {unknown or 'none'})")
            rows = []
            for lineno, raw in enumerate(reader, 2):
                if len(raw) != len(expected):
                    raise SchemaError(f"{path}:{lineno}: expected {len(expected)} fields, "
                                      f"got {len(raw)}")
                record = {}
                for name, value in zip(expected, raw):
                    if name in _TEXT_COLUMNS:
                        record[name] = value
                    else:
                        try:
                            record[name] = float(value)
                        except ValueError as exc:
                            raise SchemaError(
                                f"{path}:{lineno}: column {name!r} is not numeric: {value!r}"
                            ) from exc
                rows.append(record)
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc}") from exc
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    return rows


def live_rows(rows: list[dict]) -> list[dict]:
    """Rows not flagged degenerate/impossible (all rows when there is no status)."""
    kept = [r for r in rows if r.get("status", "ok") == "ok"]
    if not kept:
        raise SchemaError("every row is flagged; nothing to draw")
    return kept
