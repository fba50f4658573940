"""Coupled propagators of the two singly-excited states.

In the q variable the pair (U11, U12) obeys

    dU11/dq = -U11 - C(q) U12
    dU12/dq = -U12 - C(q) U11

from (1, 0), with C the coherence kernel.  The doubly-excited propagator
decouples completely and is the pure time-dilated decay e^{-2q}.

Two solvers ship side by side.  The production path is fixed-step
classical Runge-Kutta over a precomputed kernel table.  The oracle path
exploits that the sum S = U11 + U12 and difference D = U11 - U12 decouple
into scalar equations S' = -(1+C)S, D' = -(1-C)D, giving the exact
exponential-of-integral solution once the running integral of C is known;
the two must agree to fourth order in the step and the validation suite
holds them to that.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .kernel import KernelTable
from .params import QGrid


@dataclass(frozen=True)
class PropagatorSet:
    """Singly- and doubly-excited propagators sampled on the grid.

    u11 is the amplitude to stay on the initially excited particle, u12
    the amplitude to have hopped to the other one; both particles are
    interchangeable so these two arrays close the system.  uee = e^{-2q}
    is stored alongside for uniform downstream indexing.
    """

    grid: QGrid
    u11: np.ndarray
    u12: np.ndarray
    uee: np.ndarray


def integrate_rk4(table: KernelTable) -> PropagatorSet:
    """Advance (U11, U12) with classical fourth-order Runge-Kutta.

    Stage kernel values come from the precomputed table (full grid plus
    half-step midpoints), so the inner loop performs no quadrature.  Plain
    Python complex arithmetic: the loop is a sequential recurrence and
    scalar ops beat numpy scalars here by a wide margin.
    """
    grid = table.grid
    n = grid.n
    dq = grid.dq
    c_full = table.values.tolist()
    c_mid = table.values_mid.tolist()
    u11 = np.empty(n, dtype=complex)
    u12 = np.empty(n, dtype=complex)
    a, b = 1.0 + 0.0j, 0.0 + 0.0j
    u11[0], u12[0] = a, b
    h2, h6 = 0.5 * dq, dq / 6.0
    for j in range(n - 1):
        c0 = c_full[j]
        cm = c_mid[j]
        c1 = c_full[j + 1]
        k1a = -a - c0 * b
        k1b = -b - c0 * a
        a2 = a + h2 * k1a
        b2 = b + h2 * k1b
        k2a = -a2 - cm * b2
        k2b = -b2 - cm * a2
        a3 = a + h2 * k2a
        b3 = b + h2 * k2b
        k3a = -a3 - cm * b3
        k3b = -b3 - cm * a3
        a4 = a + dq * k3a
        b4 = b + dq * k3b
        k4a = -a4 - c1 * b4
        k4b = -b4 - c1 * a4
        a = a + h6 * (k1a + 2.0 * (k2a + k3a) + k4a)
        b = b + h6 * (k1b + 2.0 * (k2b + k3b) + k4b)
        u11[j + 1] = a
        u12[j + 1] = b
    if not (np.all(np.isfinite(u11)) and np.all(np.isfinite(u12))):
        raise RuntimeError(
            f"RK4 produced non-finite propagators at beta={table.params.beta}, "
            f"delta_v={table.params.delta_v}, dq={dq}"
        )
    return PropagatorSet(grid=grid, u11=u11, u12=u12, uee=np.exp(-2.0 * grid.points()))


def kernel_running_integral(table: KernelTable) -> np.ndarray:
    """Cumulative integral of C on the full grid, by composite Simpson.

    Each step closes with the half-step sample: (dq/6)(C_j + 4 C_mid + C_j+1).
    Simpson keeps the integral fourth-order accurate, matching the RK4
    global order; a trapezoid here would cap the solver-vs-oracle agreement
    at second order and mask genuine stepping errors.
    """
    dq = table.grid.dq
    inc = (dq / 6.0) * (table.values[:-1] + 4.0 * table.values_mid + table.values[1:])
    out = np.empty(table.grid.n, dtype=complex)
    out[0] = 0.0
    np.cumsum(inc, out=out[1:])
    return out


def analytic_solution(table: KernelTable) -> PropagatorSet:
    """Exact exponential-of-integral solution, the RK4 oracle.

    S = U11 + U12 and D = U11 - U12 satisfy decoupled scalar equations
    whose solutions are S = exp(-q - int C), D = exp(-q + int C); the
    running integral comes from kernel_running_integral.
    """
    q = table.grid.points()
    ci = kernel_running_integral(table)
    s = np.exp(-q - ci)
    d = np.exp(-q + ci)
    return PropagatorSet(
        grid=table.grid,
        u11=0.5 * (s + d),
        u12=0.5 * (s - d),
        uee=np.exp(-2.0 * q),
    )
