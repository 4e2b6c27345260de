"""Profile and table file formats.

CSV profiles start with the header ``volume,profile`` (extra trailing columns,
such as the ``psi`` column written by the CLI, are ignored on input). JSON
profiles carry ``total_volume``, ``dimension`` and ``samples``; samples are
``[volume, profile]`` pairs or objects with those keys.

Numbers are written in shortest round-trip form, which is deterministic and
loses nothing on re-ingestion.
"""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path
from typing import Iterable, Sequence, TextIO

from .errors import InvalidProfile, ProfileParseError
from .profile import SampledProfile, psi_transform


def fmt(x: float) -> str:
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return repr(x)


def _parse_float(text: str, line: int) -> float:
    try:
        return float(text)
    except ValueError:
        raise ProfileParseError(f"not a number: {text!r}", line) from None


def parse_profile_csv(text: str, dimension: int, total_volume: float = math.inf, label: str = "") -> SampledProfile:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows:
        raise ProfileParseError("empty file", 1)
    header = [h.strip() for h in rows[0]]
    if header[:2] != ["volume", "profile"]:
        raise ProfileParseError(f"expected header 'volume,profile', got {','.join(header)!r}", 1)
    volumes, values = [], []
    last = -math.inf
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) < 2:
            raise ProfileParseError("expected at least two columns", lineno)
        v = _parse_float(row[0], lineno)
        y = _parse_float(row[1], lineno)
        if not v > last:
            raise ProfileParseError("volumes must be strictly increasing", lineno)
        last = v
        volumes.append(v)
        values.append(y)
    try:
        return SampledProfile(volumes, values, dimension, total_volume, label)
    except InvalidProfile as exc:
        raise ProfileParseError(str(exc)) from exc


def parse_profile_json(text: str, label: str = "") -> SampledProfile:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProfileParseError(exc.msg, exc.lineno) from None
    try:
        total = data.get("total_volume")
        total = math.inf if total is None else float(total)
        dim = int(data["dimension"])
        samples = data["samples"]
        volumes, values = [], []
        for s in samples:
            if isinstance(s, dict):
                volumes.append(float(s["volume"]))
                values.append(float(s["profile"]))
            else:
                volumes.append(float(s[0]))
                values.append(float(s[1]))
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise ProfileParseError(f"malformed profile JSON: {exc}") from None
    try:
        return SampledProfile(volumes, values, dim, total, label)
    except InvalidProfile as exc:
        raise ProfileParseError(str(exc)) from exc


def read_profile(path: str | Path, dimension: int | None = None, total_volume: float = math.inf) -> SampledProfile:
    path = Path(path)
    text = path.read_text()
    if path.suffix.lower() == ".json":
        return parse_profile_json(text, label=path.stem)
    if dimension is None:
        raise ProfileParseError("CSV profiles need the dimension supplied separately")
    return parse_profile_csv(text, dimension, total_volume, label=path.stem)


def write_table(out: TextIO, header: Sequence[str], rows: Iterable[Sequence[float]]) -> None:
    out.write(",".join(header) + "\n")
    for row in rows:
        out.write(",".join(fmt(v) for v in row) + "\n")


def profile_csv(p: SampledProfile, include_psi: bool = True) -> str:
    buf = io.StringIO()
    if include_psi:
        psi = psi_transform(p).psi
        write_table(buf, ["volume", "profile", "psi"], zip(p.volumes, p.values, psi))
    else:
        write_table(buf, ["volume", "profile"], zip(p.volumes, p.values))
    return buf.getvalue()


def profile_json(p: SampledProfile) -> str:
    data = {
        "total_volume": p.total_volume if math.isfinite(p.total_volume) else None,
        "dimension": p.dimension,
        "samples": [[float(v), float(y)] for v, y in zip(p.volumes, p.values)],
    }
    return json.dumps(data, indent=2) + "\n"
