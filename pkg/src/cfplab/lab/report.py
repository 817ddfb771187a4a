"""Report rows and their CSV / JSON serializations."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

__all__ = [
    "CSV_COLUMNS",
    "REPORT_SCHEMA",
    "ReportRow",
    "stat_row",
    "abs_row",
    "rel_row",
    "rows_to_csv",
    "rows_to_json",
    "write_report",
    "summary_table",
]

CSV_COLUMNS = (
    "experiment",
    "quantity",
    "n",
    "c",
    "r",
    "word",
    "estimate_re",
    "estimate_im",
    "stderr",
    "oracle_re",
    "oracle_im",
    "abs_err",
    "pass",
    "seed",
)

_NUM_OR_NULL = {"type": ["number", "null"]}
REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "array",
    "items": {
        "type": "object",
        "additionalProperties": False,
        "required": list(CSV_COLUMNS),
        "properties": {
            "experiment": {"type": "string"},
            "quantity": {"type": "string"},
            "n": {"type": ["integer", "null"]},
            "c": _NUM_OR_NULL,
            "r": _NUM_OR_NULL,
            "word": {"type": ["string", "null"]},
            "estimate_re": {"type": "number"},
            "estimate_im": {"type": "number"},
            "stderr": {"type": "number", "minimum": 0},
            "oracle_re": {"type": "number"},
            "oracle_im": {"type": "number"},
            "abs_err": {"type": "number", "minimum": 0},
            "pass": {"type": "boolean"},
            "seed": {"type": "integer", "minimum": 0},
        },
    },
}


@dataclass(frozen=True)
class ReportRow:
    """One checked quantity.

    ``rule`` describes the tolerance that decided ``passed``; it is shown
    in the summary table but is not part of the file schema.
    """

    experiment: str
    quantity: str
    estimate: complex
    stderr: float
    oracle: complex
    passed: bool
    seed: int
    rule: str
    n: int | None = None
    c: float | None = None
    r: float | None = None
    word: str | None = None

    @property
    def abs_err(self) -> float:
        return abs(complex(self.estimate) - complex(self.oracle))

    def as_record(self) -> dict:
        est, orc = complex(self.estimate), complex(self.oracle)
        return {
            "experiment": self.experiment,
            "quantity": self.quantity,
            "n": None if self.n is None else int(self.n),
            "c": None if self.c is None else float(self.c),
            "r": None if self.r is None else float(self.r),
            "word": self.word,
            "estimate_re": est.real,
            "estimate_im": est.imag,
            "stderr": float(self.stderr),
            "oracle_re": orc.real,
            "oracle_im": orc.imag,
            "abs_err": self.abs_err,
            "pass": bool(self.passed),
            "seed": int(self.seed),
        }


def stat_row(experiment, quantity, estimate, stderr, oracle, seed, multiplier=3.0, floor=0.0, **where):
    """Row that passes when ``|estimate - oracle| <= max(multiplier * stderr, floor)``."""
    err = abs(complex(estimate) - complex(oracle))
    limit = max(multiplier * stderr, floor)
    rule = f"{multiplier:g} stderr" + (f", min {floor:.3g}" if floor else "")
    return ReportRow(experiment, quantity, complex(estimate), float(stderr), complex(oracle),
                     err <= limit, seed, rule, **where)


def abs_row(experiment, quantity, estimate, stderr, oracle, seed, tol, **where):
    """Row that passes when ``|estimate - oracle| <= tol``."""
    err = abs(complex(estimate) - complex(oracle))
    return ReportRow(experiment, quantity, complex(estimate), float(stderr), complex(oracle),
                     err <= tol, seed, f"abs {tol:g}", **where)


def rel_row(experiment, quantity, estimate, stderr, oracle, seed, rel, **where):
    """Row that passes when ``|estimate - oracle| <= rel * |oracle|``."""
    err = abs(complex(estimate) - complex(oracle))
    return ReportRow(experiment, quantity, complex(estimate), float(stderr), complex(oracle),
                     err <= rel * abs(complex(oracle)), seed, f"rel {rel:.0%}", **where)


def _cell(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def rows_to_csv(rows: Iterable[ReportRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        rec = row.as_record()
        writer.writerow([_cell(rec[k]) for k in CSV_COLUMNS])
    return buf.getvalue()


def rows_to_json(rows: Iterable[ReportRow]) -> str:
    records = [row.as_record() for row in rows]
    for rec in records:
        for key, value in rec.items():
            if isinstance(value, float) and not math.isfinite(value):
                raise ValueError(f"non-finite {key} in report row {rec['quantity']!r}")
    return json.dumps(records, indent=1) + "\n"


def write_report(rows: Sequence[ReportRow], path, fmt: str = "csv") -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    text = rows_to_json(rows) if fmt == "json" else rows_to_csv(rows)
    path.write_text(text)
    return path


def summary_table(rows: Sequence[ReportRow]) -> str:
    """Fixed-width text table of the rows plus a pass count."""
    header = f"{'quantity':<34} {'n':>5} {'r':>6} {'word':<18} {'estimate':>12} {'oracle':>12} {'abs_err':>10} {'tolerance':<22} ok"
    lines = [header, "-" * len(header)]
    for row in rows:
        est, orc = complex(row.estimate), complex(row.oracle)
        lines.append(
            f"{row.quantity[:34]:<34} {'' if row.n is None else row.n:>5} "
            f"{'' if row.r is None else format(row.r, 'g'):>6} {(row.word or '')[:18]:<18} "
            f"{est.real:>12.6g} {orc.real:>12.6g} {row.abs_err:>10.3g} {row.rule[:22]:<22} "
            f"{'PASS' if row.passed else 'FAIL'}"
        )
    npass = sum(r.passed for r in rows)
    lines.append(f"{npass}/{len(rows)} rows passed")
    return "\n".join(lines)
