"""Free charged coherent Klein-Gordon packets in 1+1 dimensions.

Dimensionless conventions throughout: momenta in mc, positions in Compton
wavelengths, times tau in hbar/mc^2, energies in mc^2. The packet is
parametrized by the inverse width lam (= Compton wavelength over oscillator
length), the initial position alpha, the mean momentum p_mean, and the charge
parity epsilon = +/-1.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .quadrature import GaussianWeight, QuadratureSpec, integrate_gaussian, integrate_gaussian_batch

_TWO_PI = 2.0 * math.pi
_X_CHUNK = 512  # grid block size keeps the (x, node) integrand matrices modest


class LocalizationWarning(UserWarning):
    """Packet localized more sharply than the Compton wavelength (lam > 1)."""


@dataclass(frozen=True)
class FreeCoherentState:
    lam: float
    alpha: float = 0.0
    p_mean: float = 0.0
    epsilon: int = 1

    def __post_init__(self):
        if not self.lam > 0.0:
            raise ValueError("lam must be positive")
        if self.epsilon not in (-1, 1):
            raise ValueError("epsilon must be +1 or -1")
        if self.lam > 1.0:
            warnings.warn(
                f"lam={self.lam} localizes the packet below the Compton wavelength",
                LocalizationWarning,
                stacklevel=3,
            )

    @property
    def sharper_than_compton(self) -> bool:
        return self.lam > 1.0


@dataclass(frozen=True)
class NormalizationConvention:
    """The product kappa*(1+epsilon*a) fixing the KG field amplitude; default 1."""

    kappa_times_one_plus_eps_a: float = 1.0

    def __post_init__(self):
        if not self.kappa_times_one_plus_eps_a > 0.0:
            raise ValueError("normalization product must be positive")

    @property
    def is_symmetric_default(self) -> bool:
        return self.kappa_times_one_plus_eps_a == 1.0


DEFAULT_NORM = NormalizationConvention()


@dataclass(frozen=True)
class MomentSet:
    """Expectation values and dispersions at one dimensionless time."""

    tau: float
    x_mean: float
    x_var: float
    p_mean: float
    p_var: float
    uncertainty_product: float
    v_mean: float | None = None
    v_var: float | None = None
    E_mean: float | None = None
    E_var: float | None = None

    def __post_init__(self):
        for name in ("x_var", "p_var", "v_var", "E_var"):
            val = getattr(self, name)
            if val is not None and val < 0.0:
                raise ValueError(f"{name} must be nonnegative, got {val}")
        if self.uncertainty_product < 0.5 - 1e-12:
            raise ValueError("uncertainty product below the quantum bound")

    def as_dict(self) -> dict:
        return {
            "tau": self.tau,
            "x_mean": self.x_mean,
            "x_var": self.x_var,
            "p_mean": self.p_mean,
            "p_var": self.p_var,
            "v_mean": self.v_mean,
            "v_var": self.v_var,
            "E_mean": self.E_mean,
            "E_var": self.E_var,
            "uncertainty_product": self.uncertainty_product,
        }


class VelocityMoments(NamedTuple):
    v_mean: float
    v_sq_mean: float
    v_var: float


class EnergyMoments(NamedTuple):
    E_mean: float
    E_var: float


def wavefn_x(s: FreeCoherentState, x) -> np.ndarray:
    """Position-space coherent wave function (the nonrelativistic Gaussian)."""
    x = np.asarray(x, dtype=float)
    amp = (s.lam**2 / _TWO_PI) ** 0.25
    return amp * np.exp(
        -0.5j * s.p_mean * s.alpha
        + 1j * s.p_mean * x
        - 0.25 * s.lam**2 * (x - s.alpha) ** 2
    )


def wavefn_p(s: FreeCoherentState, p) -> np.ndarray:
    """Momentum-space coherent wave function (Fourier transform of wavefn_x)."""
    p = np.asarray(p, dtype=float)
    amp = (2.0 / (math.pi * s.lam**2)) ** 0.25
    return amp * np.exp(
        0.5j * s.p_mean * s.alpha - 1j * s.alpha * p - (p - s.p_mean) ** 2 / s.lam**2
    )


def static_moments(s: FreeCoherentState) -> MomentSet:
    """Initial-time moments; the minimum-uncertainty values, no quadrature."""
    return MomentSet(
        tau=0.0,
        x_mean=s.alpha,
        x_var=1.0 / s.lam**2,
        p_mean=s.p_mean,
        p_var=s.lam**2 / 4.0,
        uncertainty_product=0.5,
    )


def _momentum_weight(s: FreeCoherentState) -> GaussianWeight:
    return GaussianWeight(center=s.p_mean, inv_width_sq=2.0 / s.lam**2)


def _normalized_moment(s, g, spec):
    # (1/lam) sqrt(2/pi) * int g(p) exp(-2(p - p_mean)^2/lam^2) dp
    res = integrate_gaussian(_momentum_weight(s), g, spec)
    return math.sqrt(2.0 / math.pi) / s.lam * res.value


def velocity_moments(s: FreeCoherentState, spec: QuadratureSpec = QuadratureSpec()) -> VelocityMoments:
    """Mean velocity (charge-parity signed), mean squared velocity, and variance."""
    v = s.epsilon * _normalized_moment(s, lambda p: p / np.sqrt(1.0 + p * p), spec)
    v_sq = _normalized_moment(s, lambda p: p * p / (1.0 + p * p), spec)
    return VelocityMoments(v, v_sq, max(v_sq - v * v, 0.0))


def energy_moments(s: FreeCoherentState, spec: QuadratureSpec = QuadratureSpec()) -> EnergyMoments:
    """Mean energy by quadrature; the second moment 1 + p^2 + lam^2/4 is exact."""
    e = _normalized_moment(s, lambda p: np.sqrt(1.0 + p * p), spec)
    e_sq = 1.0 + s.p_mean**2 + s.lam**2 / 4.0
    return EnergyMoments(e, max(e_sq - e * e, 0.0))


def evolved_moments(s: FreeCoherentState, tau: float, spec: QuadratureSpec = QuadratureSpec()) -> MomentSet:
    """Moments at dimensionless time tau; momentum moments are conserved."""
    vm = velocity_moments(s, spec)
    em = energy_moments(s, spec)
    spread = 1.0 + s.lam**2 * vm.v_var * tau**2
    return MomentSet(
        tau=tau,
        x_mean=s.alpha + vm.v_mean * tau,
        x_var=spread / s.lam**2,
        p_mean=s.p_mean,
        p_var=s.lam**2 / 4.0,
        v_mean=vm.v_mean,
        v_var=vm.v_var,
        E_mean=em.E_mean,
        E_var=em.E_var,
        uncertainty_product=0.5 * math.sqrt(spread),
    )


def nonrel_moments(s: FreeCoherentState, tau: float) -> MomentSet:
    """Closed-form nonrelativistic counterparts of evolved_moments."""
    spread = 1.0 + s.lam**4 * tau**2 / 4.0
    return MomentSet(
        tau=tau,
        x_mean=s.alpha + s.p_mean * tau,
        x_var=spread / s.lam**2,
        p_mean=s.p_mean,
        p_var=s.lam**2 / 4.0,
        v_mean=s.p_mean,
        v_var=s.lam**2 / 4.0,
        E_mean=1.0 + s.lam**2 / 8.0 + s.p_mean**2 / 2.0,
        E_var=s.p_mean**2 * s.lam**2 / 4.0 + s.lam**4 / 32.0,
        uncertainty_product=0.5 * math.sqrt(spread),
    )


def _phase_integral(s, tau, xs, relativistic_amp, spec):
    """J(x) = int e^{-(p-p_mean)^2/lam^2} A(p) e^{i[p(x-alpha) - eps tau sqrt(1+p^2)]} dp.

    A(p) = (1+p^2)^{-1/4} for the KG field, 1 for the Foldy density.
    """
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    weight = GaussianWeight(center=s.p_mean, inv_width_sq=1.0 / s.lam**2)
    out = np.empty(xs.shape, dtype=complex)
    converged = True
    for start in range(0, xs.size, _X_CHUNK):
        block = xs[start : start + _X_CHUNK]

        def g(p, block=block):
            amp = (1.0 + p * p) ** -0.25 if relativistic_amp else 1.0
            phase = p[None, :] * (block[:, None] - s.alpha) - s.epsilon * tau * np.sqrt(
                1.0 + p[None, :] ** 2
            )
            return amp * np.exp(1j * phase)

        res = integrate_gaussian_batch(weight, g, spec)
        out[start : start + _X_CHUNK] = res.value
        converged &= res.converged
    return out, converged


def probability_density(s: FreeCoherentState, tau: float, x, spec: QuadratureSpec = QuadratureSpec()):
    """Foldy probability density rho(tau, x); scalar or array in x."""
    scalar = np.isscalar(x)
    j, _ = _phase_integral(s, tau, x, False, spec)
    rho = np.abs(j) ** 2 / (s.lam * math.pi * math.sqrt(_TWO_PI))
    return float(rho[0]) if scalar else rho


def kg_field_value(
    s: FreeCoherentState,
    tau: float,
    x,
    norm: NormalizationConvention = DEFAULT_NORM,
    spec: QuadratureSpec = QuadratureSpec(),
):
    """Value of the coherent KG field at (tau, x); scalar or array in x."""
    scalar = np.isscalar(x)
    j, _ = _phase_integral(s, tau, x, True, spec)
    amp = (2.0 / (math.pi * s.lam**2)) ** 0.25 / math.sqrt(
        _TWO_PI * norm.kappa_times_one_plus_eps_a
    )
    psi = amp * np.exp(0.5j * s.p_mean * s.alpha) * j
    return complex(psi[0]) if scalar else psi


def kg_density(
    s: FreeCoherentState,
    tau: float,
    x,
    norm: NormalizationConvention = DEFAULT_NORM,
    spec: QuadratureSpec = QuadratureSpec(),
):
    """|psi|^2 of the coherent KG field; scalar or array in x."""
    scalar = np.isscalar(x)
    j, _ = _phase_integral(s, tau, x, True, spec)
    dens = np.abs(j) ** 2 / (
        s.lam * math.pi * norm.kappa_times_one_plus_eps_a * math.sqrt(_TWO_PI)
    )
    return float(dens[0]) if scalar else dens
