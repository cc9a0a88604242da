"""Deterministic table and record serialization.

Output files are written atomically (temp file in the destination
directory, then rename) and contain no timestamps, hostnames, or other
run-environment fingerprints, so a rerun with the same configuration and
seed produces byte-identical files.  Floats are rendered with ``%.12g``:
enough digits to round-trip the physics, short enough to stay readable.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from pathlib import Path

import numpy as np


def format_float(value: float) -> str:
    """Canonical text form of one float."""
    return "%.12g" % value


def _atomic_write_text(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".",
                                    suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp_name, path)
    except BaseException:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise


def write_csv(path: str | Path, table: dict[str, np.ndarray]) -> None:
    """Write a column table as CSV with a header row.

    All columns must have equal length.  Column order follows the dict
    order, which callers keep stable.
    """
    if not table:
        raise ValueError("refusing to write a CSV with no columns")
    lengths = {len(np.atleast_1d(v)) for v in table.values()}
    if len(lengths) != 1:
        raise ValueError(f"ragged table: column lengths {sorted(lengths)}")
    columns = {k: np.atleast_1d(v) for k, v in table.items()}
    lines = [",".join(columns)]
    n = lengths.pop()
    for i in range(n):
        cells = []
        for values in columns.values():
            v = values[i]
            if isinstance(v, (str, np.str_)):
                cells.append(str(v))
            elif isinstance(v, (int, np.integer)):
                cells.append(str(int(v)))
            else:
                cells.append(format_float(float(v)))
        lines.append(",".join(cells))
    _atomic_write_text(Path(path), "\n".join(lines) + "\n")


def write_json(path: str | Path, payload: dict) -> None:
    """Write a JSON record with sorted keys and stable float text."""
    text = json.dumps(_plainify(payload), indent=2, sort_keys=True)
    _atomic_write_text(Path(path), text + "\n")


def _plainify(obj):
    """Recursively convert numpy containers to plain JSON types."""
    if isinstance(obj, dict):
        return {str(k): _plainify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plainify(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_plainify(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, float)):
        return float(format_float(float(obj)))
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj


def config_digest(config_dict: dict) -> str:
    """SHA-256 of the canonical JSON form of a configuration dictionary."""
    canonical = json.dumps(config_dict, sort_keys=True,
                           separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()


def run_meta(config_dict: dict, seed: int) -> dict:
    """Provenance block embedded in JSON outputs."""
    return {"config_sha256": config_digest(config_dict), "seed": int(seed)}
