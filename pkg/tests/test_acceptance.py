"""Acceptance suite: one test per primary criterion, at the stated tolerance.

Each test prints a [PASS]/[FAIL] line with the measured values so a plain
`pytest -s tests/test_acceptance.py` doubles as the acceptance report. The
expensive sweeps are shared module-scoped fixtures.
"""

import math

import numpy as np
import pytest

from agegossip import (
    Asuman,
    NoGossip,
    RateParams,
    SimConfig,
    SweepSpec,
    Uniform,
    asymptotic_bound,
    min_age_mean,
    min_age_mean_limit,
    run_simulation,
    run_sweep,
    scaling_fit,
    sensing_bound_limit,
    sensing_bound_seq,
)
from agegossip.cli import parse_and_dispatch
from agegossip.harness import replicated_epoch_min_ages

SEED = 1729


def report(name: str, ok: bool, detail: str) -> None:
    print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")


@pytest.fixture(scope="module")
def headline_rows():
    rows = {}
    for ratio in (1.0, 2.0):
        spec = SweepSpec(
            n_values=(100, 200, 400, 600),
            schemes=(Asuman(),),
            rate_ratio=ratio,
            replications=20,
            base_seed=SEED,
        )
        rows[ratio] = run_sweep(spec)
    return rows


@pytest.fixture(scope="module")
def scaling_rows():
    spec = SweepSpec(
        n_values=(16, 64, 256),
        schemes=(Uniform(), Asuman()),
        rate_ratio=1.0,
        replications=20,
        base_seed=SEED,
    )
    rows = run_sweep(spec)
    return ([r for r in rows if r.scheme == "uniform"],
            [r for r in rows if r.scheme == "asuman"])


def test_analytics_golden_values():
    equal = RateParams(lambda_e=1.0, lam=1.0)
    double = RateParams(lambda_e=2.0, lam=1.0)
    checks = [
        ("min_age_mean(3)", min_age_mean(3, equal), 1.75),
        ("min_age_mean_limit", min_age_mean_limit(equal), 2.0),
        ("asymptotic_bound ratio 1", asymptotic_bound(equal), 3.0),
        ("asymptotic_bound ratio 2", asymptotic_bound(double), 5.0),
    ]
    ok = all(abs(got - want) <= 1e-12 for _, got, want in checks)
    report("analytics golden values", ok,
           "; ".join(f"{name}={got:.14g} (want {want})" for name, got, want in checks))
    for name, got, want in checks:
        assert abs(got - want) <= 1e-12, name


def test_epoch_minimum_age_oracle():
    p = RateParams(lambda_e=1.0, lam=1.0)
    base = SimConfig(n=50, lambda_e=1.0, lam=1.0, scheme=NoGossip(),
                     horizon=40.0, seed=SEED)
    reps = 100_000
    samples = replicated_epoch_min_ages(base, replications=reps, epochs=5)
    details = []
    ok = True
    for k in (1, 2, 3, 5):
        col = samples[:, k - 1].astype(float)
        emp = col.mean()
        se = col.std(ddof=1) / math.sqrt(reps)
        want = min_age_mean(k, p)
        within = abs(emp - want) <= 3 * se
        ok = ok and within
        details.append(f"k={k}: {emp:.4f} vs {want:.4f} (3se={3 * se:.4f})")

    long_run = run_simulation(SimConfig(
        n=50, lambda_e=1.0, lam=1.0, scheme=NoGossip(), horizon=1e5,
        seed=SEED + 1, record_epoch_trace=True))
    values = [v for _, v in long_run.epoch_min_ages]
    long_mean = sum(values) / len(values)
    long_ok = abs(long_mean - 2.0) <= 0.02 * 2.0
    ok = ok and long_ok
    details.append(f"long-run mean={long_mean:.4f} over {len(values)} epochs")
    report("epoch minimum-age oracle", ok, "; ".join(details))
    for k in (1, 2, 3, 5):
        col = samples[:, k - 1].astype(float)
        se = col.std(ddof=1) / math.sqrt(reps)
        assert abs(col.mean() - min_age_mean(k, p)) <= 3 * se, f"k={k}"
    assert long_ok


def test_nogossip_stationary_oracle():
    one = run_simulation(SimConfig(n=1, lambda_e=1.0, lam=1.0, scheme=NoGossip(),
                                   horizon=1e5, seed=SEED)).network_mean_age
    four = run_simulation(SimConfig(n=4, lambda_e=1.0, lam=1.0, scheme=NoGossip(),
                                    horizon=1e5, seed=SEED)).network_mean_age
    ok = abs(one - 1.0) <= 0.02 and abs(four - 4.0) <= 0.03 * 4.0
    report("no-gossip stationary oracle", ok,
           f"n=1 mean={one:.4f} (want 1 +/- 2%); n=4 mean={four:.4f} (want 4 +/- 3%)")
    assert abs(one - 1.0) <= 0.02
    assert abs(four - 4.0) <= 0.03 * 4.0


@pytest.mark.parametrize("ratio,bound", [(1.0, 3.0), (2.0, 5.0)])
def test_asuman_bound_reproduction(headline_rows, ratio, bound):
    rows = headline_rows[ratio]
    below = all(r.mean_age <= bound for r in rows)
    gaps = [bound - r.mean_age for r in rows]
    monotone = all(
        gaps[i + 1] <= gaps[i] + rows[i].ci_half_width_95 + rows[i + 1].ci_half_width_95
        for i in range(len(rows) - 1))
    detail = "; ".join(
        f"n={r.n}: mean={r.mean_age:.4f} ci={r.ci_half_width_95:.4f} gap={g:.4f}"
        for r, g in zip(rows, gaps))
    report(f"bound reproduction ratio {ratio:g} (bound {bound:g})",
           below and monotone, detail)
    assert below, detail
    assert monotone, detail


def test_baseline_scaling_contrast(scaling_rows):
    uniform_rows, asuman_rows = scaling_rows
    uni_slope, uni_r2 = scaling_fit(uniform_rows)
    asu_slope, _ = scaling_fit(asuman_rows)
    detail = (f"uniform slope={uni_slope:.4f} r2={uni_r2:.5f}; "
              f"asuman slope={asu_slope:.4f}; ratio={abs(asu_slope) / uni_slope:.4f}")
    ok = uni_slope > 0 and uni_r2 >= 0.95 and abs(asu_slope) <= 0.10 * uni_slope
    report("baseline scaling contrast", ok, detail)
    assert uni_slope > 0, detail
    assert uni_r2 >= 0.95, detail
    assert abs(asu_slope) <= 0.10 * uni_slope, detail


def test_bound_dominance(headline_rows):
    failures = []
    details = []
    for ratio, rows in headline_rows.items():
        for r in rows:
            if r.n < 100:
                continue
            margin = r.mean_age - 2 * r.ci_half_width_95
            details.append(f"ratio {ratio:g} n={r.n}: {margin:.4f} <= {r.bound_finite_n:.4f}")
            if margin > r.bound_finite_n:
                failures.append((ratio, r.n, margin, r.bound_finite_n))
    report("bound dominance", not failures, "; ".join(details))
    assert not failures, failures


def test_cli_determinism(tmp_path, capsys):
    args = ["sweep", "--scheme", "asuman,uniform", "--n-values", "8,16",
            "--reps", "3", "--horizon", "1500", "--seed", "5"]
    first = tmp_path / "first.csv"
    second = tmp_path / "second.csv"
    assert parse_and_dispatch(args + ["--output", str(first)]) == 0
    assert parse_and_dispatch(args + ["--output", str(second)]) == 0
    capsys.readouterr()
    identical = first.read_bytes() == second.read_bytes()
    report("CLI determinism", identical,
           f"{first.stat().st_size} bytes, rerun identical: {identical}")
    assert identical


def test_sensing_bound_consistency():
    worst = 0.0
    for lam_e, lam in ((1.0, 1.0), (2.0, 1.0), (0.5, 2.0)):
        p = RateParams(lambda_e=lam_e, lam=lam)
        by_recursion = 1.0
        for k in range(1, 101):
            if k > 1:
                by_recursion = 2.0 + p.staleness_ratio * by_recursion
            worst = max(worst, abs(sensing_bound_seq(k, p) - by_recursion))
    equal = RateParams(lambda_e=1.0, lam=1.0)
    limit_gap = abs(sensing_bound_limit(equal) - (asymptotic_bound(equal) + 1.0))
    ok = worst <= 1e-12 and limit_gap <= 1e-12
    report("sensing bound consistency", ok,
           f"max |recursion - closed form| = {worst:.2e} (k<=100); "
           f"|limit - (asymptotic+1)| = {limit_gap:.2e}")
    assert worst <= 1e-12
    assert limit_gap <= 1e-12
