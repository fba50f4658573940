"""Single-particle emission propagator and Doppler-shifted line shape.

Frequencies are measured in units of the rest-frame transition frequency,
with the linewidth-to-frequency ratio r as the only scale input.  For a
mode at polar angle theta the Doppler factor is alpha = 1 - beta cos
theta, the detuning variable is alpha * (omega/omega_0) - 1/gamma, and the
asymptotic spectrum is a Lorentzian of half-width r/(2 gamma) in that
variable, peaked at omega/omega_0 = 1/[gamma (1 - beta cos theta)].

Absolute radiometric prefactors (mode volume, dipole moment, vacuum
permittivity) are folded into one arbitrary normalization: line shapes
peak at 1, and the time-dependent amplitude carries the matching scale so
its squared magnitude converges to the line shape at late times.  The
dipole orientation enters only through angular weight factors; a zero
weight zeroes the whole emission in that direction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .params import ParameterError

ORIENTATIONS = ("parallel", "perpendicular")


@dataclass(frozen=True)
class EmissionConfig:
    """Geometry and scale of a single-particle emission calculation.

    beta: particle speed v/c.
    orientation: dipole axis relative to the velocity, "parallel" or
        "perpendicular".
    theta: polar angle of the photon mode from the velocity, radians.
    phi: azimuthal mode angle, radians; enters only the perpendicular
        orientation (measured from the dipole projection).
    linewidth_ratio: rest linewidth over rest frequency, > 0.
    """

    beta: float
    orientation: str = "parallel"
    theta: float = math.pi / 2.0
    phi: float = 0.0
    linewidth_ratio: float = 1e-3

    def __post_init__(self):
        if not 0.0 <= self.beta < 1.0:
            raise ParameterError(f"beta must lie in [0, 1), got {self.beta}")
        if self.orientation not in ORIENTATIONS:
            raise ParameterError(
                f"orientation must be one of {ORIENTATIONS}, got {self.orientation!r}"
            )
        if not 0.0 <= self.theta <= math.pi:
            raise ParameterError(f"theta must lie in [0, pi], got {self.theta}")
        if not 0.0 <= self.phi < 2.0 * math.pi:
            raise ParameterError(f"phi must lie in [0, 2*pi), got {self.phi}")
        if not self.linewidth_ratio > 0.0:
            raise ParameterError(
                f"linewidth_ratio must be positive, got {self.linewidth_ratio}"
            )

    @property
    def gamma(self) -> float:
        return 1.0 / math.sqrt((1.0 - self.beta) * (1.0 + self.beta))

    @property
    def alpha(self) -> float:
        """Doppler factor 1 - beta cos theta for this mode direction."""
        return 1.0 - self.beta * math.cos(self.theta)


def survival_probability(beta: float, q: float):
    """Probability the excited state survives to time q: e^{-2q}.

    The q variable already divides out the Lorentz factor, so beta does
    not appear on the right-hand side; it is accepted so call sites that
    map physical times through q_from_time(beta, ...) read uniformly.
    """
    del beta
    return np.exp(-2.0 * np.asarray(q, dtype=float))


def angular_factors(cfg: EmissionConfig) -> tuple[float, float]:
    """Angular weights of the two mode polarizations (theta-hat, phi-hat).

    Parallel dipole: (sin theta / gamma, 0) - the emission is purely
    theta-polarized and vanishes along the velocity axis.  Perpendicular
    dipole: (sin theta - beta cos phi, cos theta sin phi).
    """
    st, ct = math.sin(cfg.theta), math.cos(cfg.theta)
    if cfg.orientation == "parallel":
        return st / cfg.gamma, 0.0
    return st - cfg.beta * math.cos(cfg.phi), ct * math.sin(cfg.phi)


def _angular_weight_sq(cfg: EmissionConfig) -> float:
    f_theta, f_phi = angular_factors(cfg)
    return f_theta * f_theta + f_phi * f_phi


def detuning(cfg: EmissionConfig, omega_over_omega0):
    """alpha * omega/omega_0 - 1/gamma, the resonance mismatch."""
    u = np.asarray(omega_over_omega0, dtype=float)
    return cfg.alpha * u - 1.0 / cfg.gamma


def doppler_peak(cfg: EmissionConfig) -> float:
    """Line center omega/omega_0 = 1/[gamma (1 - beta cos theta)]."""
    return 1.0 / (cfg.gamma * cfg.alpha)


def line_shape(cfg: EmissionConfig, omega_over_omega0):
    """Asymptotic emission spectrum, peak-normalized to 1.

    A Lorentzian of half-width r/(2 gamma) in the detuning variable; the
    angular weight cancels in the normalization, so it contributes only
    through the all-or-nothing zero at vanishing weight.
    """
    hw = cfg.linewidth_ratio / (2.0 * cfg.gamma)
    det = detuning(cfg, omega_over_omega0)
    shape = hw * hw / (det * det + hw * hw)
    if _angular_weight_sq(cfg) == 0.0:
        shape = np.zeros_like(shape)
    return shape if shape.ndim else float(shape)


def emission_amplitude(cfg: EmissionConfig, omega_over_omega0: float, q):
    """Time-dependent emission propagator, same normalization as line_shape.

    The two interfering exponentials - the accumulated free phase and the
    decaying survival amplitude - cancel at q = 0 and leave the resonant
    denominator in charge at late times, where |amplitude|^2 converges to
    line_shape at the same frequency.
    """
    qa = np.asarray(q, dtype=float)
    if np.any(qa < 0.0):
        raise ValueError("q must be >= 0")
    if _angular_weight_sq(cfg) == 0.0:
        out = np.zeros(qa.shape, dtype=complex)
        return out if out.ndim else complex(out)
    r = cfg.linewidth_ratio
    hw = r / (2.0 * cfg.gamma)
    det = float(detuning(cfg, omega_over_omega0))
    # detuning per unit q: physical time is 2 gamma q / linewidth
    phase = det * (2.0 * cfg.gamma / r) * qa
    amp = hw * (np.exp(1j * phase) - np.exp(-qa)) / (hw + 1j * det)
    return amp if amp.ndim else complex(amp)


def default_omega_window(cfg: EmissionConfig, halfwidths: float = 8.0, n: int = 2001):
    """Frequency grid bracketing the Doppler peak by +-halfwidths."""
    center = doppler_peak(cfg)
    half = halfwidths * cfg.linewidth_ratio / (2.0 * cfg.gamma * cfg.alpha)
    lo = max(center - half, 1e-12)
    return np.linspace(lo, center + half, n)
