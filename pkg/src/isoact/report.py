"""Suite configuration, check rows, and byte-stable report emission.

A report is a flat list of check rows, each reduced to the same shape:
something was computed, its deviation from the required value is the
residual, and the row passes when the residual does not exceed the row's
tolerance.  Exact checks carry tolerance 0 and a residual printed from
rational arithmetic, so "0" really means zero.

Emission is deterministic byte for byte: numbers are formatted once
(shortest round-trip for floats, ``p/q`` for rationals), rows are sorted
by id, JSON keys are sorted, and no timestamps or environment details
are recorded.  Two runs with the same resolved configuration produce
identical files.
"""

from __future__ import annotations

import csv
import hashlib
import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple, TypeVar

from .errors import ConfigError, IoError

PASS = "pass"
FAIL = "fail"
UNRESOLVED = "unresolved"

THREAD_ENV = "ISOACT_THREADS"

T = TypeVar("T")


def format_number(x) -> str:
    """Stable text form: rationals exactly, floats shortest round-trip."""
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, bool):
        raise ConfigError("booleans are not report values")
    if isinstance(x, int):
        return str(x)
    if isinstance(x, complex):
        return repr(x)
    return repr(float(x))


def format_value(x) -> str:
    if isinstance(x, str):
        return x
    if isinstance(x, (tuple, list)):
        return "; ".join(format_value(v) for v in x)
    return format_number(x)


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def digest_of(obj) -> str:
    """First 16 hex digits of the sha256 of the canonical JSON form."""
    return hashlib.sha256(canonical_json(obj).encode("utf-8")).hexdigest()[:16]


@dataclass(frozen=True)
class CheckRow:
    """One verified fact, fully formatted for emission."""

    id: str
    inputs: str
    value: str
    residual: str
    tolerance: str
    verdict: str


def _as_number(text: str):
    if "/" in text:
        return Fraction(text)
    if text.lstrip("+-").isdigit():
        return int(text)
    return float(text)


def check_row(row_id: str, inputs, value, residual, tolerance) -> CheckRow:
    """Build a row and decide its verdict from ``residual <= tolerance``.

    ``inputs`` is any JSON-serialisable description of what was sampled;
    only its digest is stored.  Residual and tolerance may be exact
    (int or Fraction) or floats; mixed comparisons go through float.
    """
    exact = isinstance(residual, (int, Fraction)) and isinstance(tolerance, (int, Fraction))
    ok = residual <= tolerance if exact else float(residual) <= float(tolerance)
    return CheckRow(
        id=row_id,
        inputs=digest_of(inputs),
        value=format_value(value),
        residual=format_number(residual),
        tolerance=format_number(tolerance),
        verdict=PASS if ok else FAIL,
    )


def unresolved_row(row_id: str, inputs, note: str) -> CheckRow:
    """Row for a check that could not be carried out (guards exhausted)."""
    return CheckRow(
        id=row_id,
        inputs=digest_of(inputs),
        value=note,
        residual="",
        tolerance="",
        verdict=UNRESOLVED,
    )


@dataclass(frozen=True)
class SuiteConfig:
    """What to run: suite name, numeric mode, seeding, and knobs.

    ``trials``, ``tolerance``, and ``mode`` may be left unset, in which
    case the suite's registered defaults apply.  ``params`` carries
    suite-specific keys; unknown keys are rejected when the suite runs.
    """

    suite: str
    mode: Optional[str] = None
    seed: int = 0
    trials: Optional[int] = None
    tolerance: Optional[float] = None
    params: Tuple[Tuple[str, object], ...] = ()

    def __post_init__(self):
        if self.mode not in (None, "exact", "float"):
            raise ConfigError(f"mode must be 'exact' or 'float', got {self.mode!r}")
        if not isinstance(self.seed, int) or not 0 <= self.seed < 2**64:
            raise ConfigError(f"seed must be an unsigned 64-bit integer, got {self.seed!r}")
        if self.trials is not None and (not isinstance(self.trials, int) or self.trials < 1):
            raise ConfigError(f"trials must be a positive integer, got {self.trials!r}")
        if self.tolerance is not None and not float(self.tolerance) > 0:
            raise ConfigError(f"tolerance must be positive, got {self.tolerance!r}")

    @staticmethod
    def make(
        suite: str,
        mode: Optional[str] = None,
        seed: int = 0,
        trials: Optional[int] = None,
        tolerance: Optional[float] = None,
        params: Optional[Mapping[str, object]] = None,
    ) -> "SuiteConfig":
        items = tuple(sorted((params or {}).items()))
        return SuiteConfig(suite, mode, seed, trials, tolerance, items)

    def params_dict(self) -> Dict[str, object]:
        return dict(self.params)


@dataclass(frozen=True)
class Report:
    suite: str
    digest: str
    rows: Tuple[CheckRow, ...]

    def summary(self) -> Dict[str, int]:
        counts = {PASS: 0, FAIL: 0, UNRESOLVED: 0}
        for row in self.rows:
            counts[row.verdict] += 1
        return counts

    def exit_status(self) -> int:
        return 0 if self.summary()[FAIL] == 0 else 1


def make_report(suite: str, config_digest: str, rows: Sequence[CheckRow]) -> Report:
    ordered = tuple(sorted(rows, key=lambda r: r.id))
    ids = [r.id for r in ordered]
    if len(set(ids)) != len(ids):
        raise ConfigError("duplicate row ids in report")
    return Report(suite=suite, digest=config_digest, rows=ordered)


def report_to_dict(report: Report) -> dict:
    return {
        "suite": report.suite,
        "digest": report.digest,
        "rows": [vars(row).copy() for row in report.rows],
        "summary": report.summary(),
    }


def report_from_dict(data: dict) -> Report:
    rows = tuple(CheckRow(**row) for row in data["rows"])
    report = Report(suite=data["suite"], digest=data["digest"], rows=rows)
    if data.get("summary") != report.summary():
        raise ConfigError("report summary does not match its rows")
    return report


def render_report(report: Report, fmt: str = "json") -> str:
    """Serialise a report; identical reports render to identical bytes."""
    if fmt == "json":
        return json.dumps(report_to_dict(report), sort_keys=True, indent=2) + "\n"
    if fmt == "csv":
        import io

        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["id", "inputs", "value", "residual", "tolerance", "verdict"])
        for row in report.rows:
            writer.writerow([row.id, row.inputs, row.value, row.residual, row.tolerance, row.verdict])
        return buf.getvalue()
    raise ConfigError(f"unknown report format {fmt!r}")


def emit_report(report: Report, fmt: str, path: str) -> None:
    text = render_report(report, fmt)
    try:
        with open(path, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
    except OSError as exc:
        raise IoError(f"cannot write report to {path}: {exc}") from exc


def load_report(path: str) -> Report:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return report_from_dict(json.load(handle))
    except OSError as exc:
        raise IoError(f"cannot read report from {path}: {exc}") from exc


def thread_count() -> int:
    raw = os.environ.get(THREAD_ENV)
    if raw is None:
        return 1
    try:
        value = int(raw)
    except ValueError as exc:
        raise ConfigError(f"{THREAD_ENV} must be an integer, got {raw!r}") from exc
    if value < 1:
        raise ConfigError(f"{THREAD_ENV} must be at least 1, got {value}")
    return value


def map_trials(fn: Callable[[int], T], count: int) -> List[T]:
    """Apply ``fn`` to 0..count-1, optionally on a thread pool.

    Each trial derives its randomness from its own index, so the result
    list does not depend on scheduling and earlier trials are unchanged
    when ``count`` grows.
    """
    workers = thread_count()
    if workers == 1:
        return [fn(i) for i in range(count)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, range(count)))
