import math

import numpy as np
import pytest

from twofold import LcgKind, Method, exact_sum, fill, relative_error, sum_twofold_fast
from twofold.accuracy import (
    accuracy_csv,
    accuracy_markdown,
    hours100_csv,
    hours100_markdown,
    run_accuracy_table,
    run_hours100,
    run_scaling_study,
    scaling_csv,
    scaling_markdown,
)

EPS32 = 2.0 ** -24


def test_single_element_rows_are_exact():
    rows = run_accuracy_table(n=1)
    assert rows
    for r in rows:
        assert r.valid
        assert r.rel_error == 0.0


def test_table_covers_requested_grid():
    rows = run_accuracy_table(n=100, precisions=("f32",),
                              generators=(LcgKind.MMIX,), intervals=("unit",))
    assert [r.method for r in rows] == ["direct", "kahan", "twofold-fast"]
    assert all(r.precision == "f32" and r.generator == "mmix" for r in rows)


def test_wide_skipped_for_f64():
    rows = run_accuracy_table(n=100, methods=(Method.WIDE,))
    assert all(r.precision == "f32" for r in rows)


def test_rows_are_scored_against_identical_addends():
    rows = run_accuracy_table(n=10_000, precisions=("f32",),
                              generators=(LcgKind.NUMERICAL_RECIPES,),
                              intervals=("unit",),
                              methods=(Method.TWOFOLD_FAST,))
    data = fill(LcgKind.NUMERICAL_RECIPES, 10_000, 1, np.float32)
    ref = exact_sum(data)
    r = sum_twofold_fast(data)
    expect = relative_error(float(r.value) + float(r.error), ref)
    assert rows[0].rel_error == expect


def test_error_estimate_points_the_right_way():
    # whenever the value deviation is resolvable, the error channel has
    # the sign of (exact - value)
    for seed in range(1, 8):
        for interval in ("unit", "sym"):
            data = fill(LcgKind.MMIX, 1_000_000, seed, np.float32,
                        sym=(interval == "sym"))
            ref = exact_sum(data)
            r = sum_twofold_fast(data)
            rel_value = relative_error(float(np.float64(r.value)), ref)
            if abs(rel_value) > 10 * EPS32:
                assert math.copysign(1, float(r.error)) == math.copysign(
                    1, float(ref) - float(r.value))


def test_hours100_rows():
    rows = {r.method: r for r in run_hours100()}
    assert set(rows) == {"direct", "wide", "kahan", "twofold-fast"}
    assert rows["direct"].result_hours == pytest.approx(96.3958, abs=5e-4)
    assert rows["kahan"].deviation_hours < 1e-5
    assert rows["wide"].deviation_hours <= 1.5e-6
    assert rows["twofold-fast"].result_hours == pytest.approx(99.9359, abs=1e-3)
    assert rows["twofold-fast"].estimate_hours == pytest.approx(3.54008, abs=1e-2)
    assert rows["direct"].estimate_hours is None


def test_scaling_study_shape_and_slope():
    study = run_scaling_study(ns=(10 ** 3, 10 ** 4, 10 ** 5), trials=20)
    assert len(study.rows) == 6
    slope = study.slopes["direct"]
    assert slope is not None
    assert 0.1 < slope < 0.9  # loose here; the acceptance test pins [0.3, 0.7]
    by_n = {(r.n, r.method): r.median_abs_rel_error for r in study.rows}
    assert by_n[(10 ** 4, "twofold-fast")] <= by_n[(10 ** 4, "direct")] / 10


def test_reports_are_deterministic():
    rows = run_accuracy_table(n=1000)
    again = run_accuracy_table(n=1000)
    assert accuracy_csv(rows) == accuracy_csv(again)
    assert accuracy_markdown(rows) == accuracy_markdown(again)


def test_csv_schema():
    rows = run_accuracy_table(n=10, precisions=("f64",),
                              generators=(LcgKind.MMIX,), intervals=("sym",))
    text = accuracy_csv(rows)
    header, first = text.splitlines()[:2]
    assert header == "precision,generator,interval,method,N,seed,rel_error"
    assert first.startswith("f64,mmix,sym,direct,10,1,")


def test_emitters_render():
    hrows = run_hours100()
    assert "twofold-fast" in hours100_csv(hrows)
    assert hours100_markdown(hrows).startswith("| method |")
    study = run_scaling_study(ns=(10 ** 3,), trials=3)
    assert "slope" in scaling_csv(study)
    assert "log-log slope" in scaling_markdown(study)


def test_rejects_empty_n():
    with pytest.raises(ValueError):
        run_accuracy_table(n=0)
