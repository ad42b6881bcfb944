import contextlib
import io
import logging
import sys
from dataclasses import dataclass

import numpy as np

from fracdiff.analysis.report import VerificationReport

logger = logging.getLogger(__name__)

# 17 significant digits round-trip a double exactly
CSV_FORMAT = "%.17g"


@dataclass(frozen=True)
class Table:
    """Rows of numbers under named columns, with an optional (label, value) trailer row."""

    columns: tuple[str, ...]
    rows: np.ndarray
    trailer: tuple[str, float] | None = None

    def __post_init__(self):
        rows = np.asarray(self.rows, dtype=float)
        rows = rows.reshape(0, len(self.columns)) if rows.size == 0 else np.atleast_2d(rows)
        if rows.shape[1] != len(self.columns):
            raise ValueError(f"table has {len(self.columns)} columns but rows of width {rows.shape[1]}")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "columns", tuple(self.columns))


def format_table(table: Table) -> str:
    buffer = io.StringIO()
    np.savetxt(buffer, table.rows, fmt=CSV_FORMAT, delimiter=",", header=",".join(table.columns), comments="")
    if table.trailer is not None:
        label, value = table.trailer
        buffer.write(f"{label},{CSV_FORMAT % value}\n")
    return buffer.getvalue()


@contextlib.contextmanager
def _destination(path: str | None):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            yield f


def write_outputs(data: Table | VerificationReport, path: str | None = None):
    """Write a table as CSV or a report as JSON to *path* (stdout when None or "-")."""
    if isinstance(data, VerificationReport):
        text = data.to_json()
    elif isinstance(data, Table):
        text = format_table(data)
    else:
        raise TypeError(f"cannot write {type(data).__name__}")
    with _destination(path) as f:
        f.write(text)
    logger.debug(f"wrote {len(text)} characters to {path or 'stdout'}")
