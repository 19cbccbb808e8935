"""Closed-form classical relativistic motion, free and helical.

Everything is dimensionless: momenta in mc, lengths in hbar/mc, times in
hbar/mc^2, energies in mc^2, velocities in c. These quantities serve both as
oracles for the quantum modules and as the scaling denominators of all
tabulated outputs.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np


def free_classical(p: float) -> tuple[float, float]:
    """Velocity and energy of a free classical particle of momentum p."""
    energy = math.sqrt(1.0 + p * p)
    return p / energy, energy


@dataclass(frozen=True)
class ClassicalHelix:
    """Field strength Lambda = e hbar B/(mc)^2 plus kinetic momenta of the orbit."""

    Lambda: float
    p_perp: float = 0.0
    p3: float = 0.0

    def __post_init__(self):
        if not self.Lambda > 0.0:
            raise ValueError("Lambda must be positive")
        if self.p_perp < 0.0:
            raise ValueError("p_perp must be nonnegative")


@dataclass(frozen=True)
class HelixDerived:
    energy: float
    omega_B: float
    radius: float
    period: float
    pitch_angle: float


class HelixMomenta(NamedTuple):
    p1: float
    p2: float
    p3: float
    Pi1: float
    Pi2: float


def helix_derived(h: ClassicalHelix) -> HelixDerived:
    """Gyration frequency, radius, period and pitch angle of the helix."""
    gamma = math.sqrt(1.0 + h.p_perp**2 + h.p3**2)
    omega = h.Lambda / gamma
    return HelixDerived(
        energy=gamma,
        omega_B=omega,
        radius=h.p_perp / h.Lambda,
        period=2.0 * math.pi / omega,
        pitch_angle=math.atan2(h.p3, h.p_perp),
    )


def helix_position(h: ClassicalHelix, tau, gyration_center=None) -> np.ndarray:
    """Position along the helix; counterclockwise for positive charge viewed along B.

    The default gyration center (0, -R) starts the orbit at the origin with the
    transverse momentum along +x^1. ``tau`` may be a scalar or an array; the
    result has shape (3,) or (3, len(tau)).
    """
    d = helix_derived(h)
    if gyration_center is None:
        gyration_center = (0.0, -d.radius)
    cx, cy = gyration_center
    tau = np.asarray(tau, dtype=float)
    phase = d.omega_B * tau
    x1 = cx + d.radius * np.sin(phase)
    x2 = cy + d.radius * np.cos(phase)
    x3 = (h.p3 / d.energy) * tau
    return np.array([x1, x2, x3])


def helix_momenta(h: ClassicalHelix, tau) -> HelixMomenta:
    """Canonical and kinetic momenta along the default-centered helix."""
    d = helix_derived(h)
    tau = np.asarray(tau, dtype=float)
    phase = d.omega_B * tau
    Pi1 = h.p_perp * np.cos(phase)
    Pi2 = -h.p_perp * np.sin(phase)
    x1, x2, _ = helix_position(h, tau)
    p1 = Pi1 - 0.5 * h.Lambda * x2
    p2 = Pi2 + 0.5 * h.Lambda * x1
    return HelixMomenta(p1, p2, h.p3 * np.ones_like(tau), Pi1, Pi2)


def gyration_center(h: ClassicalHelix, tau) -> tuple[np.ndarray, np.ndarray]:
    """(x^1/2 + p_2/Lambda, x^2/2 - p_1/Lambda) recomputed along the orbit."""
    x1, x2, _ = helix_position(h, tau)
    m = helix_momenta(h, tau)
    return x1 / 2.0 + m.p2 / h.Lambda, x2 / 2.0 - m.p1 / h.Lambda


def angular_momentum_l3(h: ClassicalHelix, tau) -> np.ndarray:
    """L_3 = x^1 p_2 - x^2 p_1 along the orbit (constant of motion)."""
    x1, x2, _ = helix_position(h, tau)
    m = helix_momenta(h, tau)
    return x1 * m.p2 - x2 * m.p1
