"""Versioned CSV/JSON artifact schemas.

Every CSV artifact starts with the marker line `# degreenet-schema v1`,
followed by a header row and data rows. Floats are written with repr-level
precision so re-reading is lossless and outputs are byte-stable.
"""

from __future__ import annotations

import hashlib
import json
import platform
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .errors import SchemaError

SCHEMA_MARKER = "# degreenet-schema v1"


def _format_value(v) -> str:
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def write_csv(path, columns: Mapping[str, Sequence]) -> None:
    """Write named columns as a schema-v1 CSV."""
    names = list(columns)
    arrays = [np.asarray(columns[name]) for name in names]
    length = arrays[0].shape[0]
    if any(a.shape[0] != length for a in arrays):
        raise SchemaError("all columns must have equal length")
    lines = [SCHEMA_MARKER, ",".join(names)]
    for row in range(length):
        lines.append(",".join(_format_value(a[row]) for a in arrays))
    Path(path).write_text("\n".join(lines) + "\n")


def read_csv(path, required: Sequence[str] | None = None) -> dict[str, np.ndarray]:
    """Read a schema-v1 CSV into named float/str columns."""
    text = Path(path).read_text().splitlines()
    if not text or text[0].strip() != SCHEMA_MARKER:
        raise SchemaError(f"{path}: missing schema marker '{SCHEMA_MARKER}'")
    if len(text) < 2:
        raise SchemaError(f"{path}: missing header row")
    names = [c.strip() for c in text[1].split(",")]
    if required:
        for col in required:
            if col not in names:
                raise SchemaError(f"{path}: missing required column '{col}'")
    rows = [line.split(",") for line in text[2:] if line.strip()]
    for r in rows:
        if len(r) != len(names):
            raise SchemaError(f"{path}: ragged row with {len(r)} fields")
    out: dict[str, np.ndarray] = {}
    for idx, name in enumerate(names):
        raw = [r[idx] for r in rows]
        try:
            out[name] = np.array([float(v) for v in raw])
        except ValueError:
            out[name] = np.array(raw)
    return out


def degree_law_columns(law) -> dict:
    """Standard degree-law CSV layout: k, pmf, provenance, n."""
    size = law.pmf.size
    return {
        "k": np.arange(size),
        "pmf": law.pmf,
        "provenance": np.array([law.provenance] * size),
        "n": np.full(size, law.n, dtype=np.int64),
    }


def degree_law_to_json(law) -> str:
    return json.dumps(
        {
            "n": law.n,
            "provenance": law.provenance,
            "mean": law.mean,
            "variance": law.variance,
            "pmf": [float(v) for v in law.pmf],
        },
        sort_keys=True,
    )


def config_hash(config: dict) -> str:
    canonical = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()


def write_manifest(path, config: dict, outputs: Sequence[str]) -> None:
    """Run manifest sufficient to reproduce the outputs bit-for-bit."""
    import degreenet

    manifest = {
        "schema": "degreenet-manifest v1",
        "config": config,
        "config_hash": config_hash(config),
        "outputs": sorted(outputs),
        "versions": {
            "degreenet": degreenet.__version__,
            "numpy": np.__version__,
            "python": platform.python_version(),
        },
    }
    Path(path).write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
