"""
report.py - Run reports and CSV artifacts.

A Report is written for every run, including failed ones (flagged partial).
CSV tables are buffered and only reach disk when the run completes.
"""

import csv
import io
import math
import sys
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
import orjson

from utils import __version__
from utils.error_handler import IoError
from utils.logging_manager import get_logger

logger = get_logger("zaremba.cli")


def _jsonable(value: Any) -> Any:
    """Complex numbers become [re, im]; non-finite floats become strings."""
    if isinstance(value, (complex, np.complexfloating)):
        return [_jsonable(float(value.real)), _jsonable(float(value.imag))]
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isfinite(value):
            return value
        return "nan" if math.isnan(value) else ("inf" if value > 0 else "-inf")
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, np.ndarray):
        return [_jsonable(v) for v in value.tolist()]
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


@dataclass
class Check:
    name: str
    value: float
    tolerance: float
    passed: bool
    gated: bool = True

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "value": self.value,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "gated": self.gated,
        }


@dataclass
class Report:
    """Inputs echo, per-check verdicts, results and artifact paths of one run."""

    command: str
    inputs: Dict[str, Any]
    config_hash: str
    seed: int
    checks: List[Check] = field(default_factory=list)
    results: Dict[str, Any] = field(default_factory=dict)
    artifacts: List[str] = field(default_factory=list)
    errors: List[Dict[str, str]] = field(default_factory=list)
    partial: bool = False
    exit_status: int = 0
    version: str = __version__
    timestamp: str = field(
        default_factory=lambda: datetime.now(timezone.utc).isoformat(timespec="seconds")
    )

    def add_check(self, name: str, value: float, tolerance: float, passed: bool, gated: bool = True) -> Check:
        check = Check(name=name, value=float(value), tolerance=float(tolerance), passed=bool(passed), gated=gated)
        self.checks.append(check)
        if not check.passed:
            level = logger.error if gated else logger.warning
            level(f"Check failed | {name} | value={value:.6g} | tolerance={tolerance:.6g} | gated={gated}")
        return check

    def add_error(self, exc: BaseException, exit_code: int = 1) -> None:
        self.partial = True
        self.exit_status = max(self.exit_status, exit_code)
        self.errors.append(
            {
                "type": type(exc).__name__,
                "code": getattr(exc, "code", "UNKNOWN"),
                "message": str(exc),
            }
        )

    @property
    def passed(self) -> bool:
        return not self.partial and all(c.passed for c in self.checks if c.gated)

    @property
    def exit_code(self) -> int:
        """0 pass, 1 failed check or numerical error, 2 config/IO error."""
        if self.partial:
            return self.exit_status or 1
        return 0 if self.passed else 1

    def as_dict(self) -> dict:
        return _jsonable(
            {
                "command": self.command,
                "version": self.version,
                "timestamp": self.timestamp,
                "config_hash": self.config_hash,
                "seed": self.seed,
                "inputs": self.inputs,
                "checks": [c.as_dict() for c in self.checks],
                "passed": self.passed,
                "partial": self.partial,
                "exit_code": self.exit_code,
                "results": self.results,
                "artifacts": self.artifacts,
                "errors": self.errors,
            }
        )

    def to_json(self) -> bytes:
        return orjson.dumps(self.as_dict(), option=orjson.OPT_INDENT_2)

    def write(self, path: Optional[str] = None, stream=None) -> None:
        """Write to a file, or to `stream` (stderr by default)."""
        payload = self.to_json()
        if path is not None:
            try:
                with open(path, "wb") as f:
                    f.write(payload + b"\n")
            except OSError as e:
                raise IoError(f"cannot write report {path}: {e}") from e
            logger.info(f"Report written | path={path} | passed={self.passed}")
            return
        stream = stream or sys.stderr
        stream.write(payload.decode("utf-8") + "\n")
        stream.flush()


def format_cell(value: Any) -> str:
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


class CsvTable:
    """Buffered CSV table; the first line records the config hash and seed."""

    def __init__(self, columns: Sequence[str], config_hash: str, seed: int):
        self.columns = list(columns)
        self.config_hash = config_hash
        self.seed = seed
        self.rows: List[List[Any]] = []

    def add(self, *values) -> None:
        if len(values) != len(self.columns):
            raise ValueError(f"row has {len(values)} cells, table has {len(self.columns)} columns")
        self.rows.append(list(values))

    def add_complex(self, prefix: Sequence, z: complex, suffix: Sequence = ()) -> None:
        """Complex values take two columns (re, im)."""
        self.add(*prefix, float(z.real), float(z.imag), *suffix)

    def render(self) -> str:
        buffer = io.StringIO()
        buffer.write(f"# config_hash={self.config_hash} seed={self.seed}\n")
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(self.columns)
        for row in self.rows:
            writer.writerow([format_cell(v) for v in row])
        return buffer.getvalue()

    def write(self, path: Optional[str] = None, stream=None) -> None:
        text = self.render()
        if path is None:
            stream = stream or sys.stdout
            stream.write(text)
            stream.flush()
            return
        try:
            with open(path, "w", encoding="utf-8", newline="") as f:
                f.write(text)
        except OSError as e:
            raise IoError(f"cannot write table {path}: {e}") from e
        logger.info(f"Table written | path={path} | rows={len(self.rows)}")
