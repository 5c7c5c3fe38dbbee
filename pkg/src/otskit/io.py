"""File formats: series files, dataset manifests, benchmark configs, CSV output.

Two series formats are supported. The column format holds one integer code
per line with an optional single header line. The long format is a CSV with
columns series_id, t, value; rows may arrive unordered but each series must
have consecutive time indices.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from .core import OrdinalSeries, OtsDataset, StateSpace
from .simulate import BenchmarkSpec, GeneratorSpec

BUILTIN_CONFIGS = {
    "binomial-ar": "binomial_ar.json",
    "binomial-inarch": "binomial_inarch.json",
    "ordinal-logit": "ordinal_logit.json",
}


def format_float(x: float) -> str:
    """Fixed 17-significant-digit rendering used for all CSV payloads."""
    return f"{float(x):.17g}"


def _parse_code(text: str, line_no: int, n: int, path) -> int:
    try:
        value = int(text)
    except ValueError:
        raise ValueError(f"{path}:{line_no}: {text!r} is not an integer code") from None
    if not 0 <= value <= n:
        raise ValueError(f"{path}:{line_no}: code {value} outside [0, {n}]")
    return value


def load_column_series(path, state_space: StateSpace) -> OrdinalSeries:
    """Read one series from a one-code-per-line file (optional header line)."""
    path = Path(path)
    lines = path.read_text().splitlines()
    codes = []
    for line_no, raw in enumerate(lines, start=1):
        text = raw.strip()
        if not text:
            continue
        if line_no == 1:
            try:
                int(text)
            except ValueError:
                continue  # header line
        codes.append(_parse_code(text, line_no, state_space.n, path))
    if not codes:
        raise ValueError(f"{path}: no codes found")
    return OrdinalSeries(codes=np.array(codes, dtype=np.int64), state_space=state_space)


def load_long_series(path, state_space: StateSpace) -> list[tuple[str, OrdinalSeries]]:
    """Read several series from a long CSV with columns series_id, t, value."""
    path = Path(path)
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        required = {"series_id", "t", "value"}
        if reader.fieldnames is None or not required.issubset(reader.fieldnames):
            raise ValueError(f"{path}: long format needs columns series_id, t, value")
        rows = []
        for line_no, row in enumerate(reader, start=2):
            try:
                t = int(row["t"])
            except (TypeError, ValueError):
                raise ValueError(f"{path}:{line_no}: invalid time index {row['t']!r}") from None
            code = _parse_code(row["value"], line_no, state_space.n, path)
            rows.append((row["series_id"], t, code))
    if not rows:
        raise ValueError(f"{path}: no rows found")

    def id_key(sid: str):
        try:
            return (0, int(sid), sid)
        except ValueError:
            return (1, 0, sid)

    rows.sort(key=lambda r: (id_key(r[0]), r[1]))
    out: list[tuple[str, OrdinalSeries]] = []
    start = 0
    for i in range(1, len(rows) + 1):
        if i == len(rows) or rows[i][0] != rows[start][0]:
            chunk = rows[start:i]
            times = [r[1] for r in chunk]
            if any(b - a != 1 for a, b in zip(times, times[1:])):
                raise ValueError(
                    f"{path}: series {chunk[0][0]!r} has gaps or duplicates in t"
                )
            codes = np.array([r[2] for r in chunk], dtype=np.int64)
            out.append((chunk[0][0], OrdinalSeries(codes=codes, state_space=state_space)))
            start = i
    return out


def load_series(path, state_space: StateSpace, format: str = "column"):
    """Load series from a file; returns one series (column) or a list (long)."""
    if format == "column":
        return load_column_series(path, state_space)
    if format == "long":
        return [s for _, s in load_long_series(path, state_space)]
    raise ValueError(f"format must be 'column' or 'long'; got {format!r}")


def load_numeric_column(path) -> np.ndarray:
    """Read a real-valued companion series, one value per line (optional header)."""
    path = Path(path)
    values = []
    for line_no, raw in enumerate(path.read_text().splitlines(), start=1):
        text = raw.strip()
        if not text:
            continue
        try:
            values.append(float(text))
        except ValueError:
            if line_no == 1:
                continue
            raise ValueError(f"{path}:{line_no}: {text!r} is not a number") from None
    if not values:
        raise ValueError(f"{path}: no values found")
    return np.array(values)


@dataclass(frozen=True)
class DatasetManifest:
    """Description of a stored dataset: states, series files and optional labels."""

    name: str
    states: tuple[str, ...]
    series_files: tuple[str, ...] | None = None
    long_csv: str | None = None
    labels: tuple[int, ...] | None = None
    distance: str = "block"

    def state_space(self) -> StateSpace:
        return StateSpace(self.states)


def load_manifest(path) -> DatasetManifest:
    path = Path(path)
    raw = json.loads(path.read_text())
    states = raw.get("states")
    if isinstance(states, int):
        states = [str(i) for i in range(states)]
    if not isinstance(states, list) or len(states) < 2:
        raise ValueError(f"{path}: manifest needs a 'states' list with >= 2 entries")
    series = raw.get("series")
    series_files = long_csv = None
    if isinstance(series, dict) and "long_csv" in series:
        long_csv = str(series["long_csv"])
    elif isinstance(series, list) and series:
        series_files = tuple(str(p) for p in series)
    else:
        raise ValueError(f"{path}: manifest needs 'series' as a file list or a long_csv mapping")
    labels = raw.get("labels")
    return DatasetManifest(
        name=str(raw.get("name", path.stem)),
        states=tuple(str(s) for s in states),
        series_files=series_files,
        long_csv=long_csv,
        labels=tuple(int(v) for v in labels) if labels is not None else None,
        distance=str(raw.get("distance", "block")).lower(),
    )


def load_dataset(manifest_path) -> OtsDataset:
    """Load the dataset a manifest describes; paths resolve relative to it."""
    manifest_path = Path(manifest_path)
    manifest = load_manifest(manifest_path)
    space = manifest.state_space()
    base = manifest_path.parent
    if manifest.long_csv is not None:
        series = [s for _, s in load_long_series(base / manifest.long_csv, space)]
    else:
        series = [load_column_series(base / p, space) for p in manifest.series_files]
    labels = manifest.labels
    if labels is not None and len(labels) != len(series):
        raise ValueError(f"{manifest_path}: {len(labels)} labels for {len(series)} series")
    return OtsDataset(
        series=tuple(series),
        state_space=space,
        class_labels=labels,
        name=manifest.name,
    )


def write_dataset(dataset: OtsDataset, out_dir, name: str | None = None) -> Path:
    """Write a dataset as column files plus a manifest; returns the manifest path."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    width = max(3, len(str(len(dataset) - 1)))
    files = []
    for i, series in enumerate(dataset.series):
        fname = f"series_{i:0{width}d}.csv"
        (out_dir / fname).write_text("\n".join(str(c) for c in series.codes) + "\n")
        files.append(fname)
    manifest = {
        "name": name or dataset.name or out_dir.name,
        "states": list(dataset.state_space.labels),
        "series": files,
    }
    if dataset.class_labels is not None:
        manifest["labels"] = list(dataset.class_labels)
    manifest_path = out_dir / "manifest.json"
    manifest_path.write_text(json.dumps(manifest, indent=2) + "\n")
    return manifest_path


def write_matrix_csv(path, matrix, header: list[str] | None = None) -> None:
    """Write a numeric matrix with 17-significant-digit floats, LF endings."""
    matrix = np.atleast_2d(np.asarray(matrix, dtype=float))
    with open(path, "w", newline="\n") as fh:
        if header is not None:
            fh.write(",".join(header) + "\n")
        for row in matrix:
            fh.write(",".join(format_float(v) for v in row) + "\n")


def read_matrix_csv(path, skip_header: bool = False) -> np.ndarray:
    """Read a plain numeric CSV matrix (header detected or skipped)."""
    path = Path(path)
    rows = []
    with open(path, newline="") as fh:
        for line_no, row in enumerate(csv.reader(fh), start=1):
            if not row or all(not c.strip() for c in row):
                continue
            if line_no == 1:
                if skip_header:
                    continue
                try:
                    [float(c) for c in row]
                except ValueError:
                    continue  # header line
            try:
                rows.append([float(c) for c in row])
            except ValueError as exc:
                raise ValueError(f"{path}:{line_no}: {exc}") from None
    if not rows:
        raise ValueError(f"{path}: no numeric rows found")
    lengths = {len(r) for r in rows}
    if len(lengths) != 1:
        raise ValueError(f"{path}: ragged rows (lengths {sorted(lengths)})")
    return np.array(rows)


def parse_benchmark_config(raw: dict, name: str = "benchmark") -> BenchmarkSpec:
    """Turn a benchmark JSON document into a BenchmarkSpec."""
    n_states = int(raw.get("n_states", 0))
    if n_states < 2:
        raise ValueError("config needs n_states >= 2")
    length = int(raw.get("length", 600))
    groups = []
    for g in raw.get("groups", []):
        groups.append(
            GeneratorSpec(
                family=str(g["family"]),
                n=n_states - 1,
                params=g.get("params", {}),
                length=int(g.get("length", length)),
            )
        )
    if not groups:
        raise ValueError("config needs a nonempty 'groups' list")
    return BenchmarkSpec(
        groups=tuple(groups),
        per_group=int(raw.get("per_group", 20)),
        name=str(raw.get("name", name)),
    )


def resolve_benchmark_config(name_or_path) -> BenchmarkSpec:
    """Load a benchmark config from a path or one of the bundled names."""
    text = None
    p = Path(str(name_or_path))
    if p.exists():
        text = p.read_text()
    elif str(name_or_path) in BUILTIN_CONFIGS:
        resource = resources.files("otskit.configs") / BUILTIN_CONFIGS[str(name_or_path)]
        text = resource.read_text()
    else:
        raise ValueError(
            f"unknown config {name_or_path!r}; expected a path or one of "
            f"{sorted(BUILTIN_CONFIGS)}"
        )
    return parse_benchmark_config(json.loads(text), name=str(name_or_path))


def bundled_series(name: str = "aw10") -> OrdinalSeries:
    """Return a bundled demonstration series (a six-state wage trajectory)."""
    if name != "aw10":
        raise ValueError(f"unknown bundled series {name!r}")
    text = (resources.files("otskit.data") / "aw10.csv").read_text()
    codes = np.array([int(line) for line in text.split()], dtype=np.int64)
    return OrdinalSeries(codes=codes, state_space=StateSpace(6))


def to_jsonable(obj):
    """Recursively convert numpy containers/scalars for json.dumps."""
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, dict):
        return {k: to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    return obj
