"""Figure rendering for gossip sweep results.

Reads the sweep CSV written by the agegossip harness (the schema below is the
wire format; this package never imports the simulator) and draws mean version
age against network size: one error-bar curve per (scheme, rate ratio) and a
dashed horizontal reference line per distinct asymptotic bound carried by the
opportunistic-scheme rows. Points are plotted exactly as read, with no
resampling or smoothing, so the figure is a faithful view of the CSV.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

from matplotlib.backends.backend_agg import FigureCanvasAgg
from matplotlib.figure import Figure

EXPECTED_COLUMNS = [
    "scheme", "n", "lambda_e", "lambda", "B", "C", "replications",
    "mean_age", "ci_half_width_95", "bound_finite_n", "bound_asymptotic",
    "wall_time_s",
]


class SchemaError(ValueError):
    """The input file does not match the sweep CSV schema."""


@dataclass(frozen=True)
class SweepPoint:
    scheme: str
    n: int
    ratio: float
    mean_age: float
    ci_half_width_95: float
    bound_asymptotic: float | None


@dataclass(frozen=True)
class PlotSpec:
    """What to render.

    schemes/ratios of None mean "everything in the file"; bound_lines toggles
    the dashed asymptotic reference lines (drawn only for schemes that carry
    bounds in the CSV).
    """

    input_path: str | Path
    output_path: str | Path | None
    log_x: bool = False
    schemes: frozenset[str] | None = None
    ratios: frozenset[float] | None = None
    bound_lines: bool = True


def read_points(path: str | Path) -> list[SweepPoint]:
    """Parse the sweep CSV, enforcing the exact schema."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames
        if header is None:
            raise SchemaError(f"{path}: empty file, expected sweep CSV header")
        missing = [c for c in EXPECTED_COLUMNS if c not in header]
        if missing:
            raise SchemaError(f"{path}: missing column(s) {', '.join(missing)}")
        if list(header) != EXPECTED_COLUMNS:
            raise SchemaError(
                f"{path}: header {header!r} does not match the sweep schema")
        points = []
        for row in reader:
            points.append(SweepPoint(
                scheme=row["scheme"],
                n=int(row["n"]),
                ratio=float(row["lambda_e"]) / float(row["lambda"]),
                mean_age=float(row["mean_age"]),
                ci_half_width_95=float(row["ci_half_width_95"]),
                bound_asymptotic=(float(row["bound_asymptotic"])
                                  if row["bound_asymptotic"] else None),
            ))
    if not points:
        raise SchemaError(f"{path}: no data rows")
    return points


def _included(point: SweepPoint, spec: PlotSpec) -> bool:
    if spec.schemes is not None and point.scheme not in spec.schemes:
        return False
    if spec.ratios is not None and point.ratio not in spec.ratios:
        return False
    return True


def render(spec: PlotSpec) -> Figure:
    """Draw the figure described by `spec`; saves it when output_path is set.

    Returns the Figure so callers and tests can inspect the plotted artists:
    each curve is an errorbar container labelled "<scheme>, ratio=<r>", and
    each bound reference line carries the gid "bound".
    """
    points = [p for p in read_points(spec.input_path) if _included(p, spec)]
    if not points:
        raise SchemaError(f"{spec.input_path}: no rows left after filtering")

    fig = Figure(figsize=(7.0, 4.6))
    FigureCanvasAgg(fig)
    ax = fig.add_subplot(1, 1, 1)

    curves: dict[tuple[str, float], list[SweepPoint]] = {}
    for p in points:
        curves.setdefault((p.scheme, p.ratio), []).append(p)
    for (scheme, ratio), series in sorted(curves.items()):
        series = sorted(series, key=lambda p: p.n)
        ax.errorbar(
            [p.n for p in series],
            [p.mean_age for p in series],
            yerr=[p.ci_half_width_95 for p in series],
            marker="o", markersize=4, capsize=3,
            label=f"{scheme}, λe/λ = {ratio:g}",
        )

    if spec.bound_lines:
        bounds = sorted({p.bound_asymptotic for p in points
                         if p.bound_asymptotic is not None})
        for value in bounds:
            line = ax.axhline(value, linestyle="--", linewidth=1.0,
                              color="0.35",
                              label=f"asymptotic bound {value:g}")
            line.set_gid("bound")

    if spec.log_x:
        ax.set_xscale("log")
    ax.set_xlabel("network size n (nodes)")
    ax.set_ylabel("mean version age (versions behind source)")
    ax.set_title("Mean version age vs network size")
    ax.legend(fontsize=8)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    if spec.output_path is not None:
        try:
            fig.savefig(spec.output_path, dpi=150)
        except OSError as exc:
            raise OSError(f"cannot write figure to {spec.output_path}: {exc}") from exc
    return fig


def curve_data(fig: Figure) -> dict[str, tuple[tuple[float, ...], tuple[float, ...]]]:
    """Plotted (x, y) coordinates per curve label, for verification."""
    ax = fig.axes[0]
    out = {}
    for container in ax.containers:
        line = container.lines[0]
        out[container.get_label()] = (
            tuple(float(v) for v in line.get_xdata()),
            tuple(float(v) for v in line.get_ydata()),
        )
    return out


def bound_line_values(fig: Figure) -> list[float]:
    """Y-values of the dashed bound reference lines."""
    ax = fig.axes[0]
    return sorted(float(line.get_ydata()[0]) for line in ax.lines
                  if line.get_gid() == "bound")
