"""Replicated sweeps over network size and scheme, with CSV persistence.

Each (scheme, n) sweep point runs `replications` independent simulations on
seeds derived stably from (base seed, scheme, n, replication), so extending a
sweep or permuting execution order never changes existing rows. Rows carry
the analytic bounds for the opportunistic scheme so plots and dominance
checks need nothing but the CSV.

By node symmetry the per-node mean age equals the network mean, which has
lower variance; rows therefore report the across-replication mean of the
network mean age with a 95% normal-approximation confidence interval.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, fields
from statistics import fmean, stdev

import numpy as np

from .analytics import RateParams, asymptotic_bound, steady_state_bound_finite_n
from .engine import Asuman, Scheme, SimConfig, c_value, run_simulation

CSV_HEADER = (
    "scheme,n,lambda_e,lambda,B,C,replications,mean_age,ci_half_width_95,"
    "bound_finite_n,bound_asymptotic,wall_time_s"
)

_Z_95 = 1.959963984540054  # two-sided 95% normal quantile


def default_horizon(n: int, lam: float) -> float:
    """Horizon giving every node ~50+ expected direct source updates."""
    return max(2e4, 50.0 * n) / lam


def derive_seed(base_seed: int, scheme_label: str, n: int, rep: int) -> int:
    """Stable per-replication seed; independent of execution order."""
    digest = hashlib.blake2b(
        f"{scheme_label}:{n}:{rep}".encode(), digest_size=8
    ).digest()
    return (base_seed + int.from_bytes(digest, "little")) % 2**64


@dataclass(frozen=True)
class SweepSpec:
    """Grid and budget of one sweep.

    lam is fixed at 1 by convention and rate_ratio sets lambda_e. budget=None
    applies B = n * lam at every point; horizon=None applies the default
    horizon rule per point.
    """

    n_values: tuple[int, ...]
    schemes: tuple[Scheme, ...]
    rate_ratio: float = 1.0
    budget: float | None = None
    replications: int = 20
    horizon: float | None = None
    warmup_fraction: float = 0.1
    base_seed: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "n_values", tuple(self.n_values))
        object.__setattr__(self, "schemes", tuple(self.schemes))
        if not self.n_values:
            raise ValueError("n_values: must be non-empty")
        if any(b <= a for a, b in zip(self.n_values, self.n_values[1:])):
            raise ValueError(f"n_values: must be strictly increasing, got {self.n_values}")
        if not self.schemes:
            raise ValueError("schemes: must be non-empty")
        if self.replications < 1:
            raise ValueError(f"replications: must be >= 1, got {self.replications}")
        if not self.rate_ratio > 0:
            raise ValueError(f"rate_ratio: must be > 0, got {self.rate_ratio}")


@dataclass(frozen=True)
class SweepRow:
    """One aggregated sweep point.

    Bound columns are populated for asuman rows and absent (None) otherwise;
    C is the numeric back-off coefficient, absent for schemes without one.
    wall_time_s is pinned to 0.0 so rows and CSV bytes are bit-reproducible;
    timing diagnostics go to the log instead.
    """

    scheme: str
    n: int
    lambda_e: float
    lam: float
    B: float
    C: float | None
    replications: int
    mean_age: float
    ci_half_width_95: float
    bound_finite_n: float | None
    bound_asymptotic: float | None
    wall_time_s: float = 0.0


def run_sweep(spec: SweepSpec) -> list[SweepRow]:
    """Run the sweep grid, scheme-major with n ascending, and aggregate."""
    lam = 1.0
    lambda_e = spec.rate_ratio * lam
    rows: list[SweepRow] = []
    for scheme in spec.schemes:
        for n in spec.n_values:
            budget = spec.budget if spec.budget is not None else n * lam
            horizon = spec.horizon if spec.horizon is not None else default_horizon(n, lam)
            means: list[float] = []
            for rep in range(spec.replications):
                config = SimConfig(
                    n=n,
                    lambda_e=lambda_e,
                    lam=lam,
                    scheme=scheme,
                    horizon=horizon,
                    B=budget,
                    warmup_fraction=spec.warmup_fraction,
                    seed=derive_seed(spec.base_seed, scheme.label, n, rep),
                )
                try:
                    means.append(run_simulation(config).network_mean_age)
                except Exception as exc:
                    raise RuntimeError(
                        f"simulation failed at scheme={scheme.label} n={n} rep={rep}: {exc}"
                    ) from exc
            mean = fmean(means)
            if spec.replications > 1:
                ci = _Z_95 * stdev(means) / math.sqrt(spec.replications)
            else:
                ci = 0.0
            if isinstance(scheme, Asuman):
                params = RateParams(lambda_e=lambda_e, lam=lam, B=budget, n=n)
                row_c = c_value(scheme.c_rule, n)
                bound_fin = steady_state_bound_finite_n(params) if n >= 2 else None
                bound_asym = asymptotic_bound(params)
            else:
                row_c = None
                bound_fin = None
                bound_asym = None
            rows.append(SweepRow(
                scheme=scheme.label,
                n=n,
                lambda_e=lambda_e,
                lam=lam,
                B=budget,
                C=row_c,
                replications=spec.replications,
                mean_age=mean,
                ci_half_width_95=ci,
                bound_finite_n=bound_fin,
                bound_asymptotic=bound_asym,
            ))
    return rows


def replicated_epoch_min_ages(base_config: SimConfig, replications: int,
                              epochs: int) -> np.ndarray:
    """Min-age trace values for epochs 1..epochs across independent runs.

    Returns an int array of shape (replications, epochs); row r holds the
    network minimum age right after self-updates 1..epochs of replication r.
    Raises if some run saw fewer self-updates than requested (horizon too
    short for the requested epoch count).
    """
    out = np.empty((replications, epochs), dtype=np.int64)
    for rep in range(replications):
        config = SimConfig(
            n=base_config.n,
            lambda_e=base_config.lambda_e,
            lam=base_config.lam,
            scheme=base_config.scheme,
            horizon=base_config.horizon,
            B=base_config.B,
            warmup_fraction=base_config.warmup_fraction,
            seed=derive_seed(base_config.seed, base_config.scheme.label,
                             base_config.n, rep),
            record_epoch_trace=True,
        )
        trace = run_simulation(config).epoch_min_ages
        if len(trace) < epochs:
            raise RuntimeError(
                f"replication {rep} saw only {len(trace)} epochs; "
                f"increase the horizon to observe {epochs}"
            )
        out[rep, :] = [v for _, v in trace[:epochs]]
    return out


def scaling_fit(rows: list[SweepRow]) -> tuple[float, float]:
    """Least-squares slope and R^2 of mean age against ln(n).

    A zero-variance response reports (0.0, 0.0) by convention.
    """
    if len(rows) < 3 or len({row.n for row in rows}) < 3:
        raise ValueError("scaling fit needs at least 3 rows with distinct n")
    x = [math.log(row.n) for row in rows]
    y = [row.mean_age for row in rows]
    x_bar = fmean(x)
    y_bar = fmean(y)
    sxx = sum((xi - x_bar) ** 2 for xi in x)
    sxy = sum((xi - x_bar) * (yi - y_bar) for xi, yi in zip(x, y))
    syy = sum((yi - y_bar) ** 2 for yi in y)
    if syy == 0.0:
        return 0.0, 0.0
    slope = sxy / sxx
    ss_res = sum((yi - y_bar - slope * (xi - x_bar)) ** 2 for xi, yi in zip(x, y))
    return slope, 1.0 - ss_res / syy


def _fmt(value: float | int | str | None) -> str:
    if value is None:
        return ""
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def write_csv(rows: list[SweepRow], path) -> None:
    """Write rows in SweepRow field order; bytes are deterministic."""
    lines = [CSV_HEADER]
    for row in rows:
        lines.append(",".join(_fmt(getattr(row, f.name)) for f in fields(SweepRow)))
    text = "\n".join(lines) + "\n"
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write sweep CSV to {path}: {exc}") from exc


def read_csv(path) -> list[SweepRow]:
    """Read a sweep CSV back into rows (round-trip of `write_csv`)."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        lines = [line.rstrip("\n") for line in fh if line.strip()]
    if not lines:
        raise ValueError(f"{path}: empty file, expected header {CSV_HEADER!r}")
    if lines[0] != CSV_HEADER:
        raise ValueError(f"{path}: unexpected header {lines[0]!r}")
    rows = []
    for line in lines[1:]:
        parts = line.split(",")
        if len(parts) != 12:
            raise ValueError(f"{path}: expected 12 columns, got {len(parts)}: {line!r}")
        rows.append(SweepRow(
            scheme=parts[0],
            n=int(parts[1]),
            lambda_e=float(parts[2]),
            lam=float(parts[3]),
            B=float(parts[4]),
            C=float(parts[5]) if parts[5] else None,
            replications=int(parts[6]),
            mean_age=float(parts[7]),
            ci_half_width_95=float(parts[8]),
            bound_finite_n=float(parts[9]) if parts[9] else None,
            bound_asymptotic=float(parts[10]) if parts[10] else None,
            wall_time_s=float(parts[11]),
        ))
    return rows
