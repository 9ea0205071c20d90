"""Golden snapshots: deterministic run outputs stored as regression oracles.

A snapshot file ``<dir>/<name>.json`` holds the run parameters, their hash,
the normalised payload and optional per-field absolute tolerances.  The first
call writes it; later calls with the same parameters compare against it.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
from pathlib import Path
from typing import Any, Optional

import numpy as np

__all__ = [
    "ENV_VAR",
    "GoldenMismatch",
    "ParamsMismatch",
    "normalize",
    "dumps",
    "params_hash",
    "golden_dir",
    "golden_record",
]

ENV_VAR = "LIOUVILLE_LAB_GOLDEN"
SIG_DIGITS = 12


class GoldenMismatch(RuntimeError):
    def __init__(self, name: str, diffs: list[str]):
        self.diffs = diffs
        super().__init__(f"golden '{name}' mismatch:\n" + "\n".join(diffs))


class ParamsMismatch(GoldenMismatch):
    pass


def _round(x: float) -> float:
    if not math.isfinite(x):
        return x
    return float(format(x, f".{SIG_DIGITS}g"))


def normalize(obj: Any) -> Any:
    """Plain JSON types with floats rounded to 12 significant digits."""
    if isinstance(obj, dict):
        return {str(k): normalize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [normalize(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return normalize(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return _round(float(obj))
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": _round(obj.real), "im": _round(obj.imag)}
    if isinstance(obj, Path):
        return str(obj)
    return obj


def dumps(obj: Any) -> str:
    return json.dumps(normalize(obj), indent=2) + "\n"


def params_hash(params: dict) -> str:
    canon = json.dumps(normalize(params), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode()).hexdigest()[:16]


def golden_dir(explicit: Optional[str | Path] = None) -> Optional[Path]:
    """The env var wins over the flag when both are set."""
    value = os.environ.get(ENV_VAR) or explicit
    return Path(value) if value else None


def _compare(want: Any, got: Any, tol: dict, path: str, out: list[str]) -> None:
    if isinstance(want, dict) and isinstance(got, dict):
        for k in sorted(set(want) | set(got)):
            sub = f"{path}.{k}" if path else k
            if k not in want or k not in got:
                out.append(f"{sub}: key present on one side only")
            else:
                _compare(want[k], got[k], tol, sub, out)
        return
    if isinstance(want, list) and isinstance(got, list):
        if len(want) != len(got):
            out.append(f"{path}: length {len(want)} != {len(got)}")
            return
        for i, (a, b) in enumerate(zip(want, got)):
            _compare(a, b, tol, f"{path}[{i}]", out)
        return
    numeric = (int, float)
    if isinstance(want, numeric) and isinstance(got, numeric) and not isinstance(want, bool):
        limit = tol.get(path, tol.get(path.split("[")[0], 0.0))
        if abs(want - got) > limit:
            out.append(f"{path}: stored {want!r} != current {got!r} (tol {limit})")
        return
    if want != got:
        out.append(f"{path}: stored {want!r} != current {got!r}")


def golden_record(
    name: str,
    payload: Any,
    params: dict,
    directory: str | Path,
    tolerances: Optional[dict] = None,
) -> str:
    """Write the snapshot on first use, otherwise compare against it.

    Returns "written" or "match".  Raises ParamsMismatch when the stored
    snapshot came from different parameters and GoldenMismatch when any field
    differs beyond its tolerance.
    """
    directory = Path(directory)
    path = directory / f"{name}.json"
    current = normalize(payload)
    phash = params_hash(params)
    if not path.exists():
        directory.mkdir(parents=True, exist_ok=True)
        snap = {
            "name": name,
            "params": normalize(params),
            "params_hash": phash,
            "tolerances": tolerances or {},
            "payload": current,
        }
        path.write_text(json.dumps(snap, indent=2) + "\n")
        return "written"
    snap = json.loads(path.read_text())
    if snap["params_hash"] != phash:
        raise ParamsMismatch(
            name, [f"parameter hash {phash} != stored {snap['params_hash']}; refusing to compare"]
        )
    diffs: list[str] = []
    _compare(snap["payload"], current, snap.get("tolerances", {}), "", diffs)
    if diffs:
        raise GoldenMismatch(name, diffs)
    return "match"
