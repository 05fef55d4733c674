"""CSV and run-manifest helpers used by the command line front end.

All CSVs are UTF-8, comma separated, with a header row. Floats are written
with 17 significant digits so that re-running with the same seed produces
byte-identical files.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ParameterError

TOOL_NAME = "telegraphspin"
TOOL_VERSION = "0.1.0"


def fmt(value) -> str:
    """Format a cell: floats at full double precision, everything else via str."""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return "%.17g" % value
    return str(value)


def write_csv(path, header, rows) -> None:
    path = Path(path)
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(fmt(v) for v in row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def parse_range(spec: str) -> np.ndarray:
    """Parse 'start:stop:count' into a linspace grid."""
    parts = spec.split(":")
    if len(parts) != 3:
        raise ParameterError(f"range must be start:stop:count, got {spec!r}")
    try:
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise ParameterError(f"bad range {spec!r}: {exc}") from None
    if count < 1:
        raise ParameterError("range count must be >= 1")
    return np.linspace(start, stop, count)


@dataclass
class RunManifest:
    """Record of one CLI run; one manifest JSON is emitted per run."""

    subcommand: str
    parameters: dict
    seed: int | None
    beta_convention: str
    outputs: list = field(default_factory=list)
    tool: str = TOOL_NAME
    version: str = TOOL_VERSION
    wall_time_s: float = 0.0

    def write(self, out_dir) -> Path:
        path = Path(out_dir) / f"{self.subcommand.replace('-', '_')}_manifest.json"
        payload = {
            "tool": self.tool,
            "version": self.version,
            "subcommand": self.subcommand,
            "parameters": _jsonable(self.parameters),
            "seed": self.seed,
            "beta_convention": self.beta_convention,
            "outputs": [str(p) for p in self.outputs],
            "wall_time_s": self.wall_time_s,
            "created_utc": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
        }
        path.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
        return path


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    return obj
