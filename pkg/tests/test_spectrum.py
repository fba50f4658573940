"""Single-particle line shape: Doppler center, Lorentzian limit, amplitudes."""

import math

import numpy as np
import pytest

from relsr.params import ParameterError
from relsr.spectrum import (
    ORIENTATIONS,
    EmissionConfig,
    angular_factors,
    default_omega_window,
    detuning,
    doppler_peak,
    emission_amplitude,
    line_shape,
    survival_probability,
)


def test_config_validation():
    EmissionConfig(beta=0.5)
    with pytest.raises(ParameterError):
        EmissionConfig(beta=1.0)
    with pytest.raises(ParameterError):
        EmissionConfig(beta=0.5, orientation="sideways")
    with pytest.raises(ParameterError):
        EmissionConfig(beta=0.5, linewidth_ratio=0.0)
    with pytest.raises(ParameterError):
        EmissionConfig(beta=0.5, linewidth_ratio=-1e-3)
    assert ORIENTATIONS == ("parallel", "perpendicular")


def test_survival_probability_decay():
    q = np.linspace(0.0, 5.0, 11)
    np.testing.assert_allclose(
        survival_probability(0.8, q), np.exp(-2.0 * q), rtol=0, atol=1e-15
    )


def test_doppler_peak_formula():
    for beta, theta in ((0.0, 1.0), (0.5, 0.3), (0.9, 2.0)):
        cfg = EmissionConfig(beta=beta, theta=theta)
        gamma = 1.0 / math.sqrt(1.0 - beta * beta)
        expected = 1.0 / (gamma * (1.0 - beta * math.cos(theta)))
        assert doppler_peak(cfg) == pytest.approx(expected, rel=1e-13)


def test_detuning_zero_at_peak():
    cfg = EmissionConfig(beta=0.7, theta=0.8)
    assert detuning(cfg, doppler_peak(cfg)) == pytest.approx(0.0, abs=1e-15)


def test_line_shape_peak_normalized():
    cfg = EmissionConfig(beta=0.6, theta=1.2)
    assert line_shape(cfg, doppler_peak(cfg)) == pytest.approx(1.0, abs=1e-12)
    omega = default_omega_window(cfg)
    values = line_shape(cfg, omega)
    assert values.max() <= 1.0 + 1e-12
    assert values.min() >= 0.0


def test_line_shape_symmetric_in_detuning():
    cfg = EmissionConfig(beta=0.8, theta=0.6)
    peak = doppler_peak(cfg)
    du = 3.7e-4 / (cfg.gamma * cfg.alpha)
    left = line_shape(cfg, peak - du)
    right = line_shape(cfg, peak + du)
    assert left == pytest.approx(right, rel=1e-10)


def test_line_shape_half_maximum_position():
    # detuning = half-width must give exactly 1/2
    cfg = EmissionConfig(beta=0.5, theta=1.0, linewidth_ratio=1e-3)
    hw = cfg.linewidth_ratio / (2.0 * cfg.gamma)
    u_half = (1.0 / cfg.gamma + hw) / cfg.alpha
    assert line_shape(cfg, u_half) == pytest.approx(0.5, rel=1e-12)


def test_parallel_on_axis_is_dark():
    # emission along the motion axis with parallel dipole has no weight
    cfg = EmissionConfig(beta=0.5, orientation="parallel", theta=0.0)
    f_theta, f_phi = angular_factors(cfg)
    assert f_theta == 0.0 and f_phi == 0.0
    omega = np.linspace(0.5, 2.0, 9)
    np.testing.assert_array_equal(line_shape(cfg, omega), np.zeros(9))
    np.testing.assert_array_equal(
        emission_amplitude(cfg, 1.0, np.array([0.0, 1.0])), np.zeros(2, complex)
    )


def test_perpendicular_orientation_phi_dependence():
    cfg0 = EmissionConfig(
        beta=0.5, orientation="perpendicular", theta=1.0, phi=0.0
    )
    cfg1 = EmissionConfig(
        beta=0.5, orientation="perpendicular", theta=1.0, phi=math.pi / 2.0
    )
    assert angular_factors(cfg0) != angular_factors(cfg1)


def test_amplitude_zero_at_start():
    cfg = EmissionConfig(beta=0.7, theta=0.9)
    omega = doppler_peak(cfg) * 1.0003
    assert emission_amplitude(cfg, omega, 0.0) == pytest.approx(0.0, abs=1e-15)


def test_amplitude_converges_to_line_shape():
    # |amplitude|^2 at late q must reproduce the asymptotic Lorentzian
    cfg = EmissionConfig(beta=0.6, theta=1.1)
    peak = doppler_peak(cfg)
    for omega in (peak, peak * (1.0 + 2e-4), peak * (1.0 - 5e-4)):
        amp = emission_amplitude(cfg, omega, 30.0)
        assert abs(amp) ** 2 == pytest.approx(line_shape(cfg, omega), abs=1e-6)


def test_amplitude_rejects_negative_q():
    cfg = EmissionConfig(beta=0.5)
    with pytest.raises(ValueError):
        emission_amplitude(cfg, 1.0, -0.5)


def test_default_window_brackets_peak():
    cfg = EmissionConfig(beta=0.9, theta=0.4)
    omega = default_omega_window(cfg, n=101)
    peak = doppler_peak(cfg)
    assert omega[0] < peak < omega[-1]
    assert omega.shape == (101,)
    assert np.all(omega > 0.0)


def test_peak_argmax_on_generic_grid():
    rng = np.random.default_rng(20240821)
    for _ in range(20):
        beta = float(rng.uniform(0.0, 0.97))
        theta = float(rng.uniform(0.2, math.pi - 0.2))
        cfg = EmissionConfig(beta=beta, theta=theta)
        peak = doppler_peak(cfg)
        lo = peak * float(rng.uniform(0.3, 0.7))
        hi = peak * float(rng.uniform(1.4, 2.2))
        omega = np.linspace(lo, hi, 4001)
        idx = int(np.argmax(line_shape(cfg, omega)))
        assert abs(omega[idx] - peak) <= (omega[1] - omega[0])
