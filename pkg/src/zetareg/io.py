"""Reproducible outputs: run manifests, JSON and CSV writers.

JSON numbers are written with 15 significant digits and CSV numbers with
10.  Files are written to a temporary sibling and renamed into place, so an
output is either complete or absent.
"""

from __future__ import annotations

import csv
import dataclasses
import enum
import hashlib
import io
import json
import math
import os
import tempfile
from datetime import datetime, timezone
from importlib import metadata
from pathlib import Path

import numpy as np

JSON_DIGITS = 15
CSV_DIGITS = 10


def tool_version() -> str:
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:
        from . import __version__
        return __version__


@dataclasses.dataclass(frozen=True)
class RunManifest:
    command: str
    params: dict
    tool_version: str
    timestamp: str
    input_digests: dict = dataclasses.field(default_factory=dict)

    @classmethod
    def create(cls, command: str, params: dict, inputs=()) -> RunManifest:
        stamp = datetime.now(timezone.utc).isoformat(timespec="seconds")
        digests = {str(p): file_digest(p) for p in inputs}
        return cls(command, dict(params), tool_version(), stamp, digests)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


def file_digest(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return "sha256:" + h.hexdigest()


def _round_sig(x: float, digits: int) -> float | None:
    if not math.isfinite(x):
        return None  # JSON has no inf/nan
    return float(f"{x:.{digits}g}")


def to_jsonable(obj, digits: int = JSON_DIGITS):
    """Plain JSON tree with floats rounded to ``digits`` significant digits.

    Complex numbers become ``[re, im]``; dataclasses and enums are unpacked.
    """
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return _round_sig(float(obj), digits)
    if isinstance(obj, (complex, np.complexfloating)):
        return [_round_sig(obj.real, digits), _round_sig(obj.imag, digits)]
    if isinstance(obj, np.ndarray):
        return [to_jsonable(x, digits) for x in obj.tolist()]
    if hasattr(obj, "to_dict"):
        return to_jsonable(obj.to_dict(), digits)
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_jsonable(getattr(obj, f.name), digits) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v, digits) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(x, digits) for x in obj]
    if obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, Path):
        return str(obj)
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def atomic_write_text(path, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def dumps_json(payload: dict, manifest: RunManifest) -> str:
    body = dict(to_jsonable(payload))
    body["manifest"] = to_jsonable(manifest)
    return json.dumps(body, indent=2, sort_keys=False) + "\n"


def write_json(path, payload: dict, manifest: RunManifest) -> Path:
    """JSON object with a ``manifest`` member."""
    return atomic_write_text(path, dumps_json(payload, manifest))


def format_csv_value(x) -> str:
    if isinstance(x, enum.Enum):
        return str(x.value)
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.{CSV_DIGITS}g}"
    if x is None:
        return ""
    return str(x)


def dumps_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([format_csv_value(x) for x in row])
    return buf.getvalue()


def manifest_path(path) -> Path:
    path = Path(path)
    return path.with_name(path.name + ".manifest.json")


def write_csv(path, header, rows, manifest: RunManifest | None = None) -> Path:
    """CSV with a header row; the manifest goes to ``<path>.manifest.json``."""
    out = atomic_write_text(path, dumps_csv(header, rows))
    if manifest is not None:
        write_json(manifest_path(path), {"file": Path(path).name}, manifest)
    return out


def read_csv(path) -> tuple[list[str], list[list[str]]]:
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    return rows[0], rows[1:]


ZERO_HEADER = ("index", "gamma", "bracket_width")


def write_zeros_csv(path, zeros, manifest: RunManifest | None = None) -> Path:
    return write_csv(path, ZERO_HEADER, [(z.index, z.gamma, z.bracket_width) for z in zeros], manifest)


def read_zeros_csv(path):
    from .zeros import ZeroRecord
    header, rows = read_csv(path)
    if tuple(header) != ZERO_HEADER:
        raise ValueError(f"unexpected zero-list header {header}")
    return [ZeroRecord(int(r[0]), float(r[1]), float(r[2])) for r in rows]
