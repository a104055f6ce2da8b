"""
Result rows, a job pool that produces them in schedule order, and CSV/JSON emission.
"""
import csv
import io
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from logging import warning
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence

import numpy as np

from core import NumericalError
from core.constants import RESULT_SCHEMA_VERSION
from core.report import to_jsonable


@dataclass
class ResultRow:
    params: Dict[str, Any]
    value: Optional[float] = None
    error: Optional[float] = None
    wall_time: float = 0.0
    status: str = "ok"
    message: str = ""
    extra: Dict[str, Any] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.status == "ok"

    def as_dict(self, timing: bool = False) -> Dict[str, Any]:
        out = {**self.params, "value": self.value, "error": self.error, **self.extra,
               "status": self.status, "message": self.message}
        if timing:
            out["wall_time"] = self.wall_time
        return out


def _timed(job):
    func, params, args = job
    start = time.perf_counter()
    try:
        value, error, extra = func(*args)
        row = ResultRow(params, value, error, extra=extra)
    except NumericalError as e:
        row = ResultRow(params, status="failed", message=str(e))
    row.wall_time = time.perf_counter() - start
    return row


def run_rows(func: Callable, jobs: Sequence[tuple], workers: int = 1) -> List[ResultRow]:
    """
    Evaluate func(*args) -> (value, error, extra) for every (params, args) job. A NumericalError
    fails its row only. Rows come back in job order whatever the number of workers.
    """
    tasks = [(func, params, args) for params, args in jobs]
    if workers <= 1 or len(tasks) < 2:
        rows = [_timed(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_timed, tasks))
    for row in rows:
        if not row.ok:
            warning("row %s failed: %s", row.params, row.message)
    return rows


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(to_jsonable(value))


def rows_to_csv(rows: Iterable[ResultRow], columns: Sequence[str], comments: Iterable[str] = (),
                timing: bool = False) -> str:
    columns = list(columns) + ["status"] + (["wall_time"] if timing else [])
    buffer = io.StringIO()
    buffer.write(f"# schema_version={RESULT_SCHEMA_VERSION}\n")
    for line in comments:
        buffer.write(f"# {line}\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        data = row.as_dict(timing)
        writer.writerow([_cell(data.get(c)) for c in columns])
    return buffer.getvalue()


def emit(text: str, path: str = "") -> None:
    """Write to `path`, or to stdout when it is empty."""
    if path:
        with open(path, "w", encoding="utf-8", newline="") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def to_json_text(data: Dict[str, Any]) -> str:
    payload = {"schema_version": RESULT_SCHEMA_VERSION, **data}
    return json.dumps(to_jsonable(payload), indent=2, sort_keys=False) + "\n"


def read_csv_columns(path: str, x_column: str, y_column: str):
    """Two float columns of a result CSV, skipping `#` lines, failed rows and blank cells."""
    xs, ys = [], []
    with open(path, "r", encoding="utf-8") as f:
        reader = csv.DictReader(line for line in f if not line.startswith("#"))
        for row in reader:
            if row.get("status", "ok") not in ("ok", ""):
                continue
            x, y = row.get(x_column, ""), row.get(y_column, "")
            if x and y:
                xs.append(float(x))
                ys.append(float(y))
    return xs, ys
