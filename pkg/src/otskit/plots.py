"""Figure rendering: every plot is written as a static SVG next to a CSV
holding exactly the values drawn, so the figure can be regenerated from it."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import matplotlib
import numpy as np

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .core import OrdinalSeries  # noqa: E402
from .inference import KappaDiagnostics  # noqa: E402
from .io import format_float  # noqa: E402

# fixed hash salt + no date metadata keep the SVG output byte-stable
matplotlib.rcParams["svg.hashsalt"] = "otskit"

_SAVE_KWARGS = {"format": "svg", "metadata": {"Date": None}}


@dataclass(frozen=True)
class PlotArtifact:
    """Paths of a rendered figure and of the CSV with its plotted values."""

    svg_path: Path
    data_path: Path


def _data_path_for(svg_path) -> Path:
    svg_path = Path(svg_path)
    return svg_path.with_suffix(".csv")


def _write_csv(path: Path, header: list[str], rows) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_cell(v) for v in row) + "\n")


def _cell(v) -> str:
    if isinstance(v, (int,)) or (hasattr(v, "dtype") and v.dtype.kind in "iu"):
        return str(int(v))
    if isinstance(v, str):
        return v
    return format_float(v)


def render_kappa_plot(diag: KappaDiagnostics, svg_path, title: str = "") -> PlotArtifact:
    """Serial dependence plot: kappa per lag with the shared critical bounds."""
    svg_path = Path(svg_path)
    lower, upper = diag.critical_pair
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.vlines(diag.lags, 0.0, diag.kappas, color="black", linewidth=1.5)
    ax.plot(diag.lags, diag.kappas, "o", color="black", markersize=4)
    ax.axhline(0.0, color="black", linewidth=0.8)
    ax.axhline(lower, color="tab:blue", linestyle="--", linewidth=1.0)
    ax.axhline(upper, color="tab:blue", linestyle="--", linewidth=1.0)
    ax.set_xlabel("lag")
    ax.set_ylabel("kappa")
    ax.set_xticks(diag.lags)
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(svg_path, **_SAVE_KWARGS)
    plt.close(fig)

    data_path = _data_path_for(svg_path)
    rows = [
        (int(l), k, lower, upper)
        for l, k in zip(diag.lags, diag.kappas)
    ]
    _write_csv(data_path, ["lag", "kappa", "lower_critical", "upper_critical"], rows)
    return PlotArtifact(svg_path=svg_path, data_path=data_path)


def render_scaling_plot(coords, svg_path, labels=None, title: str = "") -> PlotArtifact:
    """2-D scaling scatter, one color per label when labels are given."""
    svg_path = Path(svg_path)
    coords = np.asarray(coords, dtype=float)
    fig, ax = plt.subplots(figsize=(5, 5))
    if labels is None:
        ax.scatter(coords[:, 0], coords[:, 1], s=25, color="tab:blue")
        label_col = [""] * coords.shape[0]
    else:
        labels = list(labels)
        for value in sorted(set(labels)):
            mask = [lab == value for lab in labels]
            ax.scatter(coords[mask, 0], coords[mask, 1], s=25, label=str(value))
        ax.legend(title="group", fontsize=8)
        label_col = [str(lab) for lab in labels]
    ax.set_xlabel("coordinate 1")
    ax.set_ylabel("coordinate 2")
    ax.axhline(0.0, color="gray", linewidth=0.5)
    ax.axvline(0.0, color="gray", linewidth=0.5)
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(svg_path, **_SAVE_KWARGS)
    plt.close(fig)

    data_path = _data_path_for(svg_path)
    rows = [(c[0], c[1], lab) for c, lab in zip(coords, label_col)]
    _write_csv(data_path, ["x", "y", "label"], rows)
    return PlotArtifact(svg_path=svg_path, data_path=data_path)


def render_outlier_boxplot(
    scores, svg_path, range_coef: float = 1.0, flags=None, upper_fence=None, title: str = ""
) -> PlotArtifact:
    """Boxplot of outlier scores; flagged points drawn above the upper fence."""
    svg_path = Path(svg_path)
    scores = np.asarray(scores, dtype=float)
    fig, ax = plt.subplots(figsize=(4, 5))
    ax.boxplot(scores, whis=range_coef)
    if upper_fence is not None:
        ax.axhline(upper_fence, color="tab:red", linestyle="--", linewidth=1.0)
    ax.set_ylabel("outlier score (summed distances)")
    ax.set_xticks([])
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(svg_path, **_SAVE_KWARGS)
    plt.close(fig)

    data_path = _data_path_for(svg_path)
    if flags is None:
        flags = [False] * scores.size
    fence_value = float("nan") if upper_fence is None else float(upper_fence)
    rows = [
        (i, s, int(bool(f)), fence_value)
        for i, (s, f) in enumerate(zip(scores, flags))
    ]
    _write_csv(data_path, ["index", "score", "flagged", "upper_fence"], rows)
    return PlotArtifact(svg_path=svg_path, data_path=data_path)


def render_series_plot(series: OrdinalSeries, svg_path, title: str = "") -> PlotArtifact:
    """Time plot of a series with the states equidistant on the y-axis.

    Equidistant placement amounts to the block distance between states, so
    the figure is a rough representation rather than a faithful geometry.
    """
    svg_path = Path(svg_path)
    t = range(1, len(series) + 1)
    fig, ax = plt.subplots(figsize=(7, 3.5))
    ax.step(t, series.codes, where="mid", color="tab:blue", linewidth=1.0)
    ax.plot(t, series.codes, ".", color="tab:blue", markersize=3)
    ax.set_yticks(range(series.n + 1))
    ax.set_yticklabels(series.state_space.labels)
    ax.set_xlabel("t")
    ax.set_ylabel("state")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(svg_path, **_SAVE_KWARGS)
    plt.close(fig)

    data_path = _data_path_for(svg_path)
    rows = [
        (ti, int(c), series.state_space.labels[c])
        for ti, c in zip(t, series.codes)
    ]
    _write_csv(data_path, ["t", "code", "label"], rows)
    return PlotArtifact(svg_path=svg_path, data_path=data_path)
