"""Velocity-coherence metric, scan orchestration, and width extraction."""

import numpy as np
import pytest

from relsr.coherence import (
    HalfMaximumNotBracketedError,
    default_delta_grid,
    fwhm_from_scan,
    g_metric,
    scan_fwhm,
)
from relsr.params import QGrid, default_grid

COARSE = QGrid(4.0, 5e-3)


def test_normalization_value_default_grid():
    # g at delta = 0 integrates [4e^{-4q}(1+4q) - 4e^{-2q}]^2 = 1/9,
    # derived by expanding the square and integrating term by term
    a = g_metric(0.0, 0.0, default_grid())
    assert a == pytest.approx(1.0 / 9.0, abs=1e-8)


def test_normalization_independent_of_beta():
    # delta = 0 decouples from beta entirely
    a0 = g_metric(0.0, 0.0, COARSE)
    a1 = g_metric(0.9, 0.0, COARSE)
    assert a0 == pytest.approx(a1, rel=1e-12)


def test_metric_even_in_delta():
    g_plus = g_metric(0.8, 2.0, COARSE)
    g_minus = g_metric(0.8, -2.0, COARSE)
    assert g_plus == pytest.approx(g_minus, rel=1e-10)


def test_metric_decreases_with_delta():
    values = [g_metric(0.0, d, COARSE) for d in (0.0, 2.0, 6.0, 15.0)]
    assert values[0] > values[1] > values[2] > values[3] > 0.0


def test_default_delta_grid_regimes():
    slow = default_delta_grid(0.5)
    fast = default_delta_grid(0.8)
    faster = default_delta_grid(0.95)
    assert slow.shape == (121,) and slow[0] == 0.0 and slow[-1] == 30.0
    assert fast.shape == (201,) and fast[-1] == 20.0
    np.testing.assert_array_equal(fast, faster)
    assert np.all(np.diff(slow) > 0)


def test_fwhm_from_scan_linear_interpolation():
    # G falls through 0.5 between delta = 1 and delta = 2 at 1.6 exactly
    delta = np.array([0.0, 1.0, 2.0])
    g = np.array([1.0, 0.8, 0.3])
    assert fwhm_from_scan(delta, g) == pytest.approx(2.0 * 1.6, abs=1e-12)


def test_fwhm_unbracketed_raises():
    delta = np.array([0.0, 1.0, 2.0])
    with pytest.raises(HalfMaximumNotBracketedError):
        fwhm_from_scan(delta, np.array([1.0, 0.9, 0.8]))


def test_fwhm_crossing_at_origin_rejected():
    delta = np.array([0.0, 1.0])
    with pytest.raises(HalfMaximumNotBracketedError):
        fwhm_from_scan(delta, np.array([0.4, 0.2]))


def test_scan_validates_grid():
    grid = COARSE
    with pytest.raises(ValueError):
        scan_fwhm(0.0, np.array([1.0, 2.0]), grid, workers=1)
    with pytest.raises(ValueError):
        scan_fwhm(0.0, np.array([0.0, 2.0, 1.0]), grid, workers=1)
    with pytest.raises(ValueError):
        scan_fwhm(0.0, np.array([0.0]), grid, workers=1)


def test_scan_results_and_normalization():
    deltas = np.array([0.0, 2.0, 4.0, 8.0, 16.0])
    scan = scan_fwhm(0.0, deltas, COARSE, workers=1)
    assert scan.g_values[0] == 1.0
    assert scan.normalization_a == pytest.approx(1.0 / 9.0, abs=1e-4)
    assert np.all(np.diff(scan.g_values) < 0.0)
    assert scan.fwhm > 0.0
    # G and the raw metric agree pointwise
    direct = g_metric(0.0, 4.0, COARSE) / scan.normalization_a
    assert scan.g_values[2] == pytest.approx(direct, rel=1e-12)


def test_scan_worker_count_does_not_change_values():
    deltas = np.array([0.0, 3.0, 6.0, 12.0])
    one = scan_fwhm(0.5, deltas, COARSE, workers=1)
    two = scan_fwhm(0.5, deltas, COARSE, workers=2)
    np.testing.assert_array_equal(one.g_values, two.g_values)
    assert one.fwhm == two.fwhm
