"""Coherence kernel: quadrature oracles and table construction.

The closed forms used here are derived independently of the adaptive
integrator: the zero-speed kernel reduces to elementary integrals of
x^n e^{iax}, its running integral to the sine integral, and the infinite
integral to 3 pi / (16 delta).
"""

import math

import numpy as np
import pytest
from scipy.special import sici

from relsr.kernel import (
    KernelQuadratureError,
    KernelTable,
    adapt_panels,
    build_kernel_table,
    eval_kernel,
    half_max_crossing,
    kernel_beta0_closed_form,
    kernel_sq_profile,
    self_energy_angular_integral,
)
from relsr.params import QGrid, SampleParams


def beta0_running_integral(delta_v: float, q: float) -> float:
    """Int_0^q C dq' at beta = 0 via the sine integral (independent route)."""
    a = 2.0 * delta_v * q
    si, _ = sici(a)
    return 0.75 * (si + (math.sin(a) - a * math.cos(a)) / (a * a)) / (2.0 * delta_v)


def test_normalization_at_zero():
    for beta in (0.0, 0.5, 0.8, 0.95):
        for delta_v in (0.0, 1.0, 10.0, 100.0):
            c = eval_kernel(SampleParams(beta, delta_v), 0.0)
            assert abs(c - 1.0) < 1e-10


def test_zero_delta_is_identically_one():
    p = SampleParams(0.9, 0.0)
    for q in (0.0, 1.0, 7.5):
        assert eval_kernel(p, q) == pytest.approx(1.0, abs=1e-12)


def test_beta0_matches_closed_form():
    p = SampleParams(0.0, 3.0)
    for q in (0.05, 0.3, 1.0, 2.7, 8.0):
        num = eval_kernel(p, q)
        ref = kernel_beta0_closed_form(3.0, q)
        assert num.real == pytest.approx(ref, abs=1e-12)
        assert abs(num.imag) < 1e-12


def test_closed_form_series_branch_matches_direct_formula():
    # the series takes over below a = 0.1; inside that window it must
    # agree with the direct formula to far better than the seam jump
    for a in (0.02, 0.06, 0.09999):
        q = a / 2.0
        direct = 0.375 * (
            2.0 * math.sin(a) / a
            + 2.0 * ((a * a - 2.0) * math.sin(a) + 2.0 * a * math.cos(a)) / a**3
        )
        assert kernel_beta0_closed_form(1.0, q) == pytest.approx(direct, abs=1e-12)


def test_closed_form_vs_direct_series():
    # 3/8 * [2 sin a / a + 2((a^2-2) sin a + 2a cos a)/a^3] spelled out
    for a in (0.5, 2.0, 11.0):
        q = a / 2.0
        ref = 0.375 * (
            2.0 * math.sin(a) / a
            + 2.0 * ((a * a - 2.0) * math.sin(a) + 2.0 * a * math.cos(a)) / a**3
        )
        assert kernel_beta0_closed_form(1.0, q) == pytest.approx(ref, abs=1e-14)


def test_conjugate_parity_in_delta():
    # C(q; -delta) = conj(C(q; delta)) for all beta
    for beta in (0.0, 0.7, 0.95):
        plus = eval_kernel(SampleParams(beta, 4.0), 1.3)
        minus = eval_kernel(SampleParams(beta, -4.0), 1.3)
        assert minus == pytest.approx(plus.conjugate(), abs=1e-12)


def test_relativistic_value_is_genuinely_complex():
    c = eval_kernel(SampleParams(0.8, 2.0), 1.0)
    assert abs(c.imag) > 1e-3


def test_infinite_integral_beta0():
    # Int_0^inf C dq = 3 pi/(16 delta).  The running integral approaches
    # it with a cos(a)/a ringing tail, so sample at a zero of cos to
    # leave only the 1/a^2 remainder.
    delta_v = 5.0
    a = (6365 + 0.5) * math.pi
    target = 3.0 * math.pi / (16.0 * delta_v)
    assert beta0_running_integral(delta_v, a / (2.0 * delta_v)) == pytest.approx(
        target, rel=1e-6
    )


def test_table_matches_pointwise_evaluation():
    params = SampleParams(0.8, 7.0)
    grid = QGrid(2.0, 0.05)
    table = build_kernel_table(params, grid)
    for j in (0, 1, 17, 40):
        q = grid.points()[j]
        assert table.values[j] == pytest.approx(eval_kernel(params, q), abs=1e-10)
    # midpoint samples sit between nodes for the integrators
    assert table.values_mid.shape == (grid.n - 1,)
    q_mid = grid.midpoints()[11]
    assert table.values_mid[11] == pytest.approx(eval_kernel(params, q_mid), abs=1e-10)


def test_table_starts_at_one():
    table = build_kernel_table(SampleParams(0.95, 100.0), QGrid(0.5, 0.01))
    assert table.values[0] == pytest.approx(1.0, abs=1e-10)


def test_table_shape_validation():
    grid = QGrid(1.0, 0.25)
    good = np.ones(grid.n, dtype=complex)
    mid = np.ones(grid.n - 1, dtype=complex)
    KernelTable(params=SampleParams(0.0, 0.0), grid=grid, values=good, values_mid=mid)
    with pytest.raises(ValueError):
        KernelTable(
            params=SampleParams(0.0, 0.0),
            grid=grid,
            values=good[:-1],
            values_mid=mid,
        )


def test_eval_kernel_rejects_negative_q():
    with pytest.raises(ValueError):
        eval_kernel(SampleParams(0.5, 1.0), -0.1)


def test_quadrature_budget_overflow_raises():
    with pytest.raises(KernelQuadratureError) as err:
        adapt_panels(SampleParams(0.95, 100.0), 8.0, tol=1e-9, budget=8)
    msg = str(err.value)
    assert "beta" in msg and "delta" in msg


def test_adapt_panels_reports_panel_count():
    value, panels = adapt_panels(SampleParams(0.9, 20.0), 3.0, tol=1e-9)
    assert panels.n_panels >= 1
    assert panels.err_estimate <= 1e-9
    assert abs(value) <= 1.0 + 1e-9


def test_self_energy_identity():
    for beta in (0.0, 0.3, 0.6, 0.9, 0.99):
        gamma4 = (1.0 / (1.0 - beta * beta)) ** 2
        val = self_energy_angular_integral(beta)
        assert val == pytest.approx(4.0 / 3.0 * gamma4, rel=1e-12)


def test_half_max_crossing_linear_profile():
    # profile falling linearly from 1 to 0 crosses 0.5 exactly halfway
    dq = 0.1
    profile = np.linspace(1.0, 0.0, 11)
    assert half_max_crossing(profile, dq) == pytest.approx(0.5, abs=1e-12)


def test_half_max_crossing_requires_descent():
    with pytest.raises(ValueError):
        half_max_crossing(np.ones(10), 0.1)


def test_profile_narrows_with_speed():
    # |C|^2 half-width shrinks as beta rises at fixed delta
    grid = QGrid(6.0, 0.01)
    widths = []
    for beta in (0.0, 0.8, 0.95):
        profile = kernel_sq_profile(SampleParams(beta, 1.0), grid)
        widths.append(half_max_crossing(profile, grid.dq))
    assert widths[2] < widths[1] < widths[0]


def test_running_integral_oracle_beta0():
    # table trapezoid integral against the sine-integral closed form
    delta_v = 6.0
    grid = QGrid(4.0, 0.001)
    table = build_kernel_table(SampleParams(0.0, delta_v), grid)
    num = float(
        np.real(
            grid.dq * (np.cumsum(table.values) - 0.5 * (table.values + table.values[0]))
        )[-1]
    )
    assert num == pytest.approx(beta0_running_integral(delta_v, 4.0), abs=5e-6)
