"""Per-iteration telemetry rows and their CSV serialization."""

import csv
from dataclasses import dataclass, field

CSV_FIELDS = [
    "iter",
    "elapsed_s",
    "f",
    "primal_gap",
    "wolfe_gap",
    "active_set_size",
    "cset_size",
    "step_type",
    "restarted",
]

STATUS_GAP_REACHED = "gap_reached"
STATUS_MAX_ITERS = "max_iters"


@dataclass
class TraceRow:
    iter: int
    elapsed_s: float
    f: float
    primal_gap: float | None
    wolfe_gap: float
    active_set_size: int
    cset_size: int
    step_type: str
    restarted: bool


@dataclass
class RunResult:
    rows: list
    metadata: dict
    aux: dict = field(default_factory=dict)

    @property
    def status(self):
        return self.metadata.get("status")

    @property
    def flagged(self):
        return bool(self.metadata.get("flagged", False))

    def fill_primal_gaps(self, f_star):
        for row in self.rows:
            row.primal_gap = row.f - f_star

    def write_csv(self, path, algorithm_column=None):
        with open(path, "w", newline="") as fh:
            write_rows(fh, self.rows, algorithm=algorithm_column)


def format_row(row, algorithm=None):
    rec = {
        "iter": row.iter,
        "elapsed_s": f"{row.elapsed_s:.6f}",
        "f": repr(float(row.f)),
        "primal_gap": "" if row.primal_gap is None else repr(float(row.primal_gap)),
        "wolfe_gap": repr(float(row.wolfe_gap)),
        "active_set_size": row.active_set_size,
        "cset_size": row.cset_size,
        "step_type": row.step_type,
        "restarted": int(row.restarted),
    }
    if algorithm is not None:
        rec = {"algorithm": algorithm, **rec}
    return rec


def write_rows(fh, rows, algorithm=None):
    fields = CSV_FIELDS if algorithm is None else ["algorithm"] + CSV_FIELDS
    writer = csv.DictWriter(fh, fieldnames=fields)
    writer.writeheader()
    for row in rows:
        writer.writerow(format_row(row, algorithm))


def read_rows(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))
