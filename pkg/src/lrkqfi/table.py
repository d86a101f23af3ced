"""SweepTable: the ordered grid-of-results every experiment produces."""
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import DomainError


@dataclass
class SweepTable:
    """Rows of values under ``columns``.

    ``inputs`` names the columns that identify a row; rows must be strictly
    increasing in that key (in the order given by ``inputs``).  An empty
    ``inputs`` skips the ordering check (used for arbitrary files read back in).
    """

    columns: tuple
    rows: list
    inputs: tuple = field(default=None)

    def __post_init__(self):
        self.columns = tuple(self.columns)
        if self.inputs is None:
            self.inputs = self.columns[:1]
        self.inputs = tuple(self.inputs)
        missing = set(self.inputs) - set(self.columns)
        if missing:
            raise DomainError(f"input columns {sorted(missing)} not in {self.columns}")
        self.rows = [tuple(r) for r in self.rows]
        idx = [self.columns.index(c) for c in self.inputs]
        prev = None
        for row in self.rows:
            if len(row) != len(self.columns):
                raise DomainError(f"row {row} does not match columns {self.columns}")
            if not idx:
                continue
            key = tuple(row[i] for i in idx)
            if prev is not None and not key > prev:
                raise DomainError(f"rows not strictly ordered by {self.inputs}: {prev} then {key}")
            prev = key

    def __len__(self):
        return len(self.rows)

    def column(self, name):
        i = self.columns.index(name)
        return np.array([r[i] for r in self.rows])

    def to_dict(self):
        return {"columns": list(self.columns), "inputs": list(self.inputs),
                "rows": [list(r) for r in self.rows]}


def format_value(v):
    if isinstance(v, (bool, np.bool_)):
        raise DomainError("boolean cell values are not supported")
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return format(float(v), ".17g")


def write_csv(table, path):
    """Header line then one line per row; 17 significant digits, LF endings."""
    if not len(table):
        raise DomainError("refusing to write an empty table")
    lines = [",".join(table.columns)]
    lines += [",".join(format_value(v) for v in row) for row in table.rows]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")
    return len(table)


def _parse(cell):
    try:
        return int(cell)
    except ValueError:
        return float(cell)


def read_csv(path, inputs=None):
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    columns = lines[0].split(",")
    rows = [tuple(_parse(c) for c in line.split(",")) for line in lines[1:] if line]
    return SweepTable(columns, rows, inputs)
