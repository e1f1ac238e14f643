"""Render static figures from sweep CSV files.

Pure pipeline consumer: every plotted value comes straight out of the CSV
(no condition is ever re-derived here).  Three figure kinds are supported:

* ``curve_overlay``    - lhs/rhs column pairs plotted against the first
  (axis) column; reproduces threshold-comparison curves.
* ``region_shade_2d``  - cells with ``verdict`` true shaded over a 2-D axis
  grid; reproduces parameter-region figures.
* ``band_vs_param``    - vertical achievability bands of the second axis
  versus the first, one color per ``series`` value (or a single band when
  the column is absent).

Figures are rendered deterministically: Agg backend, fixed size, 150 dpi,
fixed PNG metadata, so rerunning a spec reproduces the file byte for byte.

Invoke as ``render_figure <spec.json>`` where the spec is a JSON object
with ``kind``, ``input_csv``, ``output_image`` and optional ``labels``.
"""

from __future__ import annotations

import csv
import json
import sys
from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
from matplotlib.collections import LineCollection

__all__ = ["FigureSpec", "SchemaMismatch", "load_spec", "merge_series", "render", "main"]

SCHEMA_VERSION = "1"

KINDS = ("curve_overlay", "region_shade_2d", "band_vs_param")

_FIGSIZE = (6.4, 4.8)
_DPI = 150
_PNG_METADATA = {"Software": "plotviz"}

_SERIES_COLORS = ("#4477aa", "#ee6677", "#228833", "#ccbb44")


class SchemaMismatch(Exception):
    """Input CSV lacks (or corrupts) columns the figure kind needs."""

    def __init__(self, message: str, columns: list[str]):
        super().__init__(f"{message}: {', '.join(columns)}")
        self.columns = list(columns)


@dataclass(frozen=True)
class FigureSpec:
    kind: str
    input_csv: str
    output_image: str
    labels: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown figure kind {self.kind!r}; choose from {KINDS}")


def load_spec(path: str) -> FigureSpec:
    with open(path, "r", encoding="utf-8") as fh:
        raw = json.load(fh)
    if not isinstance(raw, dict):
        raise ValueError("figure spec must be a JSON object")
    missing = [k for k in ("kind", "input_csv", "output_image") if k not in raw]
    if missing:
        raise ValueError(f"figure spec is missing fields: {', '.join(missing)}")
    return FigureSpec(
        kind=raw["kind"],
        input_csv=raw["input_csv"],
        output_image=raw["output_image"],
        labels=raw.get("labels", {}) or {},
    )


def _read_table(path: str) -> tuple[list[str], list[dict]]:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        columns = list(reader.fieldnames or [])
        rows = list(reader)
    if "schema_version" not in columns:
        raise SchemaMismatch("input CSV is missing required columns", ["schema_version"])
    bad = {r["schema_version"] for r in rows if r["schema_version"] != SCHEMA_VERSION}
    if bad:
        raise SchemaMismatch(
            f"unsupported schema_version values {sorted(bad)} in column", ["schema_version"]
        )
    return columns, rows


def _axis_columns(columns: list[str], needed: int, kind: str) -> list[str]:
    if "verdict" not in columns:
        raise SchemaMismatch(f"{kind} needs columns", ["verdict"])
    axes = [c for c in columns[: columns.index("verdict")] if c != "series"]
    if len(axes) < needed:
        raise SchemaMismatch(
            f"{kind} needs {needed} leading axis column(s) before", ["verdict"]
        )
    return axes[:needed]


def _floats(rows: list[dict], column: str) -> list[float]:
    out = []
    for row in rows:
        try:
            out.append(float(row[column]))
        except (TypeError, ValueError):
            out.append(float("nan"))
    return out


def _new_axes(spec: FigureSpec):
    fig, ax = plt.subplots(figsize=_FIGSIZE, dpi=_DPI)
    labels = spec.labels
    if labels.get("title"):
        ax.set_title(labels["title"])
    return fig, ax


def _finish(fig, ax, spec: FigureSpec, default_x: str, default_y: str):
    ax.set_xlabel(spec.labels.get("x", default_x))
    ax.set_ylabel(spec.labels.get("y", default_y))
    fig.tight_layout()
    fig.savefig(spec.output_image, dpi=_DPI, metadata=_PNG_METADATA)
    plt.close(fig)


def _render_curves(spec: FigureSpec, columns: list[str], rows: list[dict]):
    axis = _axis_columns(columns, 1, "curve_overlay")[0]
    pairs = []
    for name in columns:
        if name.startswith("lhs") and ("rhs" + name[3:]) in columns:
            pairs.append((name, "rhs" + name[3:]))
    if not pairs:
        raise SchemaMismatch("curve_overlay needs lhs/rhs column pairs", ["lhs*", "rhs*"])
    x = _floats(rows, axis)
    fig, ax = _new_axes(spec)
    for i, (lhs, rhs) in enumerate(pairs):
        color = _SERIES_COLORS[i % len(_SERIES_COLORS)]
        ax.plot(x, _floats(rows, lhs), linestyle="--", color=color, label=lhs)
        ax.plot(x, _floats(rows, rhs), linestyle="-", color=color, label=rhs)
    ax.legend(loc="best")
    _finish(fig, ax, spec, axis, "value")


def _cell_edges(values: list[float]) -> list[float]:
    """Midpoint cell edges around sorted unique axis values."""
    if len(values) == 1:
        v = values[0]
        return [v - 0.5, v + 0.5]
    edges = [values[0] - (values[1] - values[0]) / 2]
    edges += [(a + b) / 2 for a, b in zip(values, values[1:])]
    edges.append(values[-1] + (values[-1] - values[-2]) / 2)
    return edges


def _render_region(spec: FigureSpec, columns: list[str], rows: list[dict]):
    import numpy as np

    ax_x, ax_y = _axis_columns(columns, 2, "region_shade_2d")
    xs = _floats(rows, ax_x)
    ys = _floats(rows, ax_y)
    flags = [r["verdict"] == "true" for r in rows]
    ux = sorted(set(xs))
    uy = sorted(set(ys))
    fig, ax = _new_axes(spec)
    if ux and uy:
        xi = {v: i for i, v in enumerate(ux)}
        yi = {v: i for i, v in enumerate(uy)}
        grid = np.zeros((len(uy), len(ux)))
        for x, y, ok in zip(xs, ys, flags):
            if ok:
                grid[yi[y], xi[x]] = 1.0
        ax.pcolormesh(
            _cell_edges(ux),
            _cell_edges(uy),
            grid,
            cmap=matplotlib.colors.ListedColormap(["#ffffff", "#4477aa"]),
            vmin=0.0,
            vmax=1.0,
            shading="flat",
        )
    _finish(fig, ax, spec, ax_x, ax_y)


def _render_band(spec: FigureSpec, columns: list[str], rows: list[dict]):
    ax_x, ax_y = _axis_columns(columns, 2, "band_vs_param")
    has_series = "series" in columns
    series_names = sorted({r["series"] for r in rows}) if has_series else [""]
    fig, ax = _new_axes(spec)
    any_point = False
    for i, series in enumerate(series_names):
        sel = [r for r in rows if not has_series or r["series"] == series]
        xs = sorted({float(r[ax_x]) for r in sel})
        segments = []
        for x in xs:
            ys = sorted(float(r[ax_y]) for r in sel if float(r[ax_x]) == x and r["verdict"] == "true")
            if not ys:
                continue
            any_point = True
            # contiguous runs of certified cells become vertical segments
            start = prev = ys[0]
            gaps = [y2 - y1 for y1, y2 in zip(ys, ys[1:])]
            tol = 1.5 * min(gaps) if gaps else 0.0
            for y in ys[1:]:
                if y - prev > tol and tol > 0.0:
                    segments.append([(x, start), (x, prev)])
                    start = y
                prev = y
            segments.append([(x, start), (x, prev)])
        color = _SERIES_COLORS[i % len(_SERIES_COLORS)]
        if segments:
            ax.add_collection(
                LineCollection(segments, colors=color, linewidths=3.0, label=series or "certified")
            )
    if any_point:
        ax.autoscale_view()
        ax.legend(loc="best")
    _finish(fig, ax, spec, ax_x, ax_y)


def render(spec: FigureSpec) -> str:
    """Render the figure described by ``spec``; returns the output path."""
    columns, rows = _read_table(spec.input_csv)
    if spec.kind == "curve_overlay":
        _render_curves(spec, columns, rows)
    elif spec.kind == "region_shade_2d":
        _render_region(spec, columns, rows)
    else:
        _render_band(spec, columns, rows)
    return spec.output_image


def merge_series(inputs: list[tuple[str, str]], out_path: str):
    """Concatenate sweep CSVs into one band input with a ``series`` column.

    ``inputs`` is a list of (series name, csv path).  Only the leading axis
    columns, the verdict, and the schema version are kept, so sweeps of
    different checks (whose margin columns differ) can share one band
    figure; the files must agree on their axis columns.
    """
    axes = None
    with open(out_path, "w", encoding="utf-8", newline="\n") as out:
        for series, path in inputs:
            with open(path, "r", encoding="utf-8", newline="") as fh:
                reader = csv.reader(fh)
                cols = next(reader)
                for required in ("verdict", "schema_version"):
                    if required not in cols:
                        raise SchemaMismatch(f"{path} is missing columns", [required])
                file_axes = cols[: cols.index("verdict")]
                if axes is None:
                    axes = file_axes
                    out.write(",".join(["series"] + axes + ["verdict", "schema_version"]) + "\n")
                elif file_axes != axes:
                    raise SchemaMismatch("series inputs disagree on axis columns", file_axes)
                keep = [cols.index(c) for c in axes + ["verdict", "schema_version"]]
                for row in reader:
                    out.write(",".join([series] + [row[i] for i in keep]) + "\n")


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    if len(argv) != 1:
        sys.stderr.write("usage: render_figure <spec.json>\n")
        return 1
    try:
        spec = load_spec(argv[0])
    except (OSError, ValueError) as exc:
        sys.stderr.write(f"bad figure spec: {exc}\n")
        return 1
    try:
        out = render(spec)
    except OSError as exc:
        sys.stderr.write(f"cannot render: {exc}\n")
        return 1
    except SchemaMismatch as exc:
        sys.stderr.write(f"schema mismatch: {exc}\n")
        return 2
    sys.stdout.write(out + "\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
