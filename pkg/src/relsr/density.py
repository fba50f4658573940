"""Density-operator diagonals and the photon-emission-rate transient.

The density diagrams factor into block propagators separated by photon
trace lines.  With B_e = e^{-4q}, the singly-excited blocks B_a = |U11|^2,
B_b = conj(U11) U12, B_c = |U12|^2 combine into the bracket

    Sigma = B_a + 2 Re(B_b) + B_c = |U11 + U12|^2,

and in q-units the diagonals are

    rho_ee = e^{-4q}
    rho_1  = 2 (B_e * Sigma)            (one photon line, * = convolution)
    rho_gg = 16 Int_0^q (B_e * Sigma)   (two photon lines)

The emission rate is the negative q-derivative of the total excitation
2 rho_ee + 2 rho_1; differentiating under the convolution removes one
integral and gives the closed form

    R(q) = 8 e^{-4q} - 4 Sigma(q) + 16 (B_e * Sigma)(q)

with R(0) = 4 for every parameter choice.  Note rho_gg is reported as the
formula above yields it; its independent-particle limit tends to 2, so the
trace is exposed as a diagnostic rather than asserted at 1 away from the
coherent point (see the trace field).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .kernel import DEFAULT_TOL, build_kernel_table
from .params import QGrid, SampleParams
from .propagators import PropagatorSet, integrate_rk4


@dataclass(frozen=True)
class BlockSet:
    """Elementwise block propagators on the grid, plus their bracket sum."""

    grid: QGrid
    b_e: np.ndarray
    b_a: np.ndarray
    b_b: np.ndarray
    b_c: np.ndarray
    sigma: np.ndarray


@dataclass(frozen=True)
class DensityTransient:
    """Density diagonals and emission rate on the grid.

    trace = rho_ee + 2 rho_1 + rho_gg is diagnostic: it equals 1 for all q
    only in the coherent limit (velocity separation zero).
    """

    grid: QGrid
    rho_ee: np.ndarray
    rho_1: np.ndarray
    rho_gg: np.ndarray
    rate: np.ndarray
    trace: np.ndarray


def build_blocks(props: PropagatorSet) -> BlockSet:
    """Form the block propagators from the integrated propagator pair."""
    b_a = np.abs(props.u11) ** 2
    b_b = np.conj(props.u11) * props.u12
    b_c = np.abs(props.u12) ** 2
    return BlockSet(
        grid=props.grid,
        b_e=props.uee**2,
        b_a=b_a,
        b_b=b_b,
        b_c=b_c,
        sigma=b_a + 2.0 * b_b.real + b_c,
    )


def trapezoid_convolution(f: np.ndarray, g: np.ndarray, dq: float) -> np.ndarray:
    """(f * g)(q_j) = Int_0^{q_j} f(q_j - s) g(s) ds on the shared grid.

    np.convolve supplies the uniform-weight discrete sum; subtracting half
    of each endpoint term turns it into the trapezoid rule exactly.
    """
    n = len(f)
    full = np.convolve(f, g)[:n]
    out = dq * (full - 0.5 * f[0] * g - 0.5 * g[0] * f)
    out[0] = 0.0
    return out


def cumulative_integral(f: np.ndarray, dq: float) -> np.ndarray:
    """Running integral Int_0^{q_j} f on a uniform grid, starting at 0.

    Each interval increment fits a quadratic through the interval and its
    inner neighbor (dq/12 * (5 f_j+1 + 8 f_j - f_j-1), mirrored on the
    first interval), which keeps the accumulated error far below the
    plain-trapezoid dq^2 boundary term; the ground-state population needs
    that headroom to meet the coherent-limit trace tolerance.
    """
    n = len(f)
    out = np.zeros(n)
    if n < 3:
        if n == 2:
            out[1] = 0.5 * dq * (f[0] + f[1])
        return out
    inc = (dq / 12.0) * (5.0 * f[1:] + 8.0 * f[:-1] - np.concatenate([f[2:3], f[:-2]]))
    inc[0] = (dq / 12.0) * (5.0 * f[0] + 8.0 * f[1] - f[2])
    np.cumsum(inc, out=out[1:])
    return out


def assemble_density(blocks: BlockSet) -> DensityTransient:
    """Convolve the blocks into density diagonals and the emission rate."""
    grid = blocks.grid
    q = grid.points()
    conv = trapezoid_convolution(blocks.b_e, blocks.sigma, grid.dq)
    rho_ee = np.exp(-4.0 * q)
    rho_1 = 2.0 * conv
    rho_gg = 16.0 * cumulative_integral(conv, grid.dq)
    rate = 8.0 * rho_ee - 4.0 * blocks.sigma + 16.0 * conv
    return DensityTransient(
        grid=grid,
        rho_ee=rho_ee,
        rho_1=rho_1,
        rho_gg=rho_gg,
        rate=rate,
        trace=rho_ee + 2.0 * rho_1 + rho_gg,
    )


def independent_rate(grid: QGrid) -> np.ndarray:
    """Reference transient 4 e^{-2q}: two particles decaying independently."""
    return 4.0 * np.exp(-2.0 * grid.points())


def emission_transient(
    params: SampleParams, grid: QGrid, tol: float = DEFAULT_TOL
) -> DensityTransient:
    """Full pipeline for one parameter point: kernel -> RK4 -> diagrams."""
    table = build_kernel_table(params, grid, tol=tol)
    return assemble_density(build_blocks(integrate_rk4(table)))
