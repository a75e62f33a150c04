"""
CSV input/output and run manifests.

Outputs are written with a header row, `.` decimals, 9 significant digits and
`\\n` line endings, so identical parameters produce byte-identical files.
"""
import json
import sys
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import numpy as np
import pandas as pd

from analysis.errors import MalformedInput
from data.defaults import FLOAT_FORMAT, TOOL_VERSION


@dataclass
class RunManifest:
    subcommand: str
    params: dict
    seed: int | None
    tool_version: str = TOOL_VERSION
    started_at: str = field(default_factory=lambda: datetime.now(timezone.utc).isoformat())


def manifest_path(out: str | Path) -> Path:
    return Path(f"{out}.manifest.json")


def write_manifest(out: str | Path, manifest: RunManifest) -> Path:
    path = manifest_path(out)
    path.write_text(json.dumps(asdict(manifest), indent=2, sort_keys=True) + "\n")
    return path


def read_manifest(path: str | Path) -> RunManifest:
    try:
        raw = json.loads(Path(path).read_text())
        return RunManifest(**raw)
    except (OSError, json.JSONDecodeError, TypeError) as exc:
        raise MalformedInput(f"Cannot read manifest {path}: {exc}") from exc


def _format_bools(df: pd.DataFrame) -> pd.DataFrame:
    df = df.copy()
    for col in df.columns:
        if df[col].dtype == bool:
            df[col] = np.where(df[col], "true", "false")
    return df


def write_table(df: pd.DataFrame, out: str | Path | None) -> None:
    """Write to `out`, or to stdout when `out` is None."""
    text = _format_bools(df).to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def read_table(
    path: str | Path,
    required: list[str],
    numeric: list[str],
    binary: list[str] | None = None,
) -> tuple[pd.DataFrame, pd.DataFrame]:
    """
    Read a CSV as text and validate it.

    Returns (raw, parsed): `raw` keeps every column as the original text so it can
    be echoed back unchanged; `parsed` holds the `numeric` columns as floats.
    """
    try:
        raw = pd.read_csv(path, dtype=str, keep_default_na=False)
    except FileNotFoundError as exc:
        raise MalformedInput(f"Input file not found: {path}") from exc
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as exc:
        raise MalformedInput(f"Cannot parse {path}: {exc}") from exc

    missing = [col for col in required if col not in raw.columns]
    if missing:
        raise MalformedInput(
            f"{path} is missing column(s) {', '.join(missing)}; expected header {','.join(required)}"
        )

    parsed = pd.DataFrame({col: pd.to_numeric(raw[col].str.strip(), errors="coerce") for col in numeric})
    bad = ~np.isfinite(parsed.to_numpy(dtype=np.float64)).all(axis=1)
    for col in binary or []:
        bad |= ~parsed[col].isin([0.0, 1.0]).to_numpy()
    if bad.any():
        # +2: one for the header row, one for 1-based numbering.
        lines = [int(i) + 2 for i in np.flatnonzero(bad)]
        raise MalformedInput(f"Malformed rows in {path}", lines=lines)
    if parsed.empty:
        raise MalformedInput(f"{path} has a header but no rows")
    return raw, parsed
