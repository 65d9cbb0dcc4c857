"""Sweep results and their CSV serialization."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

COLUMNS = ("sweep_value", "receiver", "csi", "se_sim_mean", "se_sim_stderr", "se_approx", "rel_dev")
OPTIONAL_COLUMNS = ("ee_bits_per_joule", "se_limit")


@dataclass(frozen=True)
class ResultRow:
    sweep_value: float
    receiver: str
    csi: str
    se_sim_mean: float
    se_sim_stderr: float
    se_approx: float = math.nan
    ee_bits_per_joule: float = math.nan
    se_limit: float = math.nan

    @property
    def rel_dev(self) -> float:
        if math.isnan(self.se_approx) or self.se_approx == 0:
            return math.nan
        return abs(self.se_sim_mean - self.se_approx) / abs(self.se_approx)


@dataclass
class ResultTable:
    rows: list
    metadata: dict = field(default_factory=dict)

    def select(self, receiver=None, csi=None) -> list:
        return [r for r in self.rows
                if (receiver is None or r.receiver == receiver) and (csi is None or r.csi == csi)]

    def column(self, name, receiver=None, csi=None) -> list:
        return [getattr(r, name) for r in self.select(receiver, csi)]

    def flagged(self, tolerance: float) -> list:
        """Indices of rows whose simulated/approximate deviation exceeds ``tolerance``."""
        return [i for i, r in enumerate(self.rows) if not math.isnan(r.rel_dev) and r.rel_dev > tolerance]

    def _columns(self) -> tuple:
        extra = tuple(c for c in OPTIONAL_COLUMNS
                      if any(not math.isnan(getattr(r, c)) for r in self.rows))
        return COLUMNS + extra

    def to_csv(self) -> str:
        """CSV text with a leading ``#``-prefixed JSON metadata line."""
        buf = io.StringIO()
        buf.write("# " + json.dumps(self.metadata, sort_keys=True) + "\n")
        cols = self._columns()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        for r in self.rows:
            w.writerow([_fmt(getattr(r, c)) for c in cols])
        return buf.getvalue()

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            fh.write(self.to_csv())

    @classmethod
    def read_csv(cls, path) -> "ResultTable":
        with open(path) as fh:
            first = fh.readline()
            if not first.startswith("#"):
                raise ValueError(f"{path}: missing metadata line")
            meta = json.loads(first[1:])
            rows = []
            for rec in csv.DictReader(fh):
                vals = {k: rec[k] for k in rec if k != "rel_dev"}
                rows.append(ResultRow(
                    sweep_value=float(vals.pop("sweep_value")),
                    receiver=vals.pop("receiver"), csi=vals.pop("csi"),
                    **{k: (math.nan if v == "" else float(v)) for k, v in vals.items()}))
        return cls(rows=rows, metadata=meta)


def _fmt(v) -> str:
    if isinstance(v, str):
        return v
    if isinstance(v, float) and math.isnan(v):
        return ""
    v = float(v)
    if v.is_integer() and abs(v) < 1e15:
        return str(int(v))
    return repr(v)
