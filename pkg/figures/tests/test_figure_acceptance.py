"""Acceptance: the full sweep figure pipeline over the CSV wire format."""

import math
import shutil
import subprocess

import pytest

from sweepplot import EXPECTED_COLUMNS, PlotSpec, bound_line_values, curve_data, read_points, render

HEADER = ",".join(EXPECTED_COLUMNS)


@pytest.fixture
def sweep_csv(tmp_path):
    # The headline comparison: opportunistic and uniform schemes at rate
    # ratios 1 and 2, bounds 3 and 5 on the opportunistic rows.
    lines = [HEADER]
    for ratio, bound in ((1, 3.0), (2, 5.0)):
        for i, n in enumerate((100, 200, 400, 600)):
            mean = bound - 0.12 / (i + 1)
            lines.append(f"asuman,{n},{ratio},1,{n},0.01,20,{mean:.4f},0.011,"
                         f"{bound - 0.05:.4f},{bound:.1f},0")
        for n in (100, 200, 400, 600):
            mean = ratio + 0.95 * math.log(n)
            lines.append(f"uniform,{n},{ratio},1,{n},,20,{mean:.4f},0.02,,,0")
    path = tmp_path / "sweep.csv"
    path.write_text("".join(line + "\n" for line in lines))
    return path


def test_plot_pipeline_four_curves_two_bounds_exact_coordinates(sweep_csv, tmp_path):
    out = tmp_path / "sweep.png"
    fig = render(PlotSpec(input_path=sweep_csv, output_path=out))
    curves = curve_data(fig)
    bounds = bound_line_values(fig)
    points = read_points(sweep_csv)
    coordinate_checks = 0
    for label, (xs, ys) in curves.items():
        scheme = label.split(",")[0]
        ratio = float(label.split("=")[-1])
        expected = sorted((p.n, p.mean_age) for p in points
                          if p.scheme == scheme and p.ratio == ratio)
        assert [(int(x), y) for x, y in zip(xs, ys)] == expected
        coordinate_checks += len(expected)
    ok = len(curves) == 4 and bounds == [3.0, 5.0] and coordinate_checks == 16
    print(f"[{'PASS' if ok else 'FAIL'}] plot pipeline: {len(curves)} curves, "
          f"bound lines {bounds}, {coordinate_checks} coordinates verified "
          f"exact, image {out.stat().st_size} bytes")
    assert len(curves) == 4
    assert bounds == [3.0, 5.0]
    assert out.exists() and out.stat().st_size > 0


@pytest.mark.skipif(shutil.which("agegossip") is None,
                    reason="agegossip CLI not installed")
def test_end_to_end_sweep_then_render(tmp_path):
    csv_path = tmp_path / "mini.csv"
    subprocess.run(
        ["agegossip", "sweep", "--scheme", "asuman,uniform", "--n-values", "4,8",
         "--reps", "2", "--horizon", "400", "--seed", "3",
         "--output", str(csv_path)],
        check=True, capture_output=True)
    out = tmp_path / "mini.png"
    fig = render(PlotSpec(input_path=csv_path, output_path=out))
    curves = curve_data(fig)
    assert len(curves) == 2  # one per scheme at the single ratio
    assert len(bound_line_values(fig)) == 1
    assert out.stat().st_size > 0
