"""Neutral (real) coherent KG fields built from conjugate charge-parity pairs."""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .freefield import (
    DEFAULT_NORM,
    FreeCoherentState,
    NormalizationConvention,
    kg_field_value,
)
from .quadrature import QuadratureSpec


class AsymmetricNormalizationWarning(UserWarning):
    """Non-default normalization breaks the exact conjugacy of the parity pair."""


@dataclass(frozen=True)
class NeutralCoherentState:
    """A neutral field is the symmetric combination of an epsilon=+1 packet and
    its epsilon=-1 partner with reflected mean momentum and equal alpha."""

    base: FreeCoherentState

    def __post_init__(self):
        if self.base.epsilon != 1:
            raise ValueError("base state must carry epsilon=+1")


def partner(s: NeutralCoherentState) -> FreeCoherentState:
    """The epsilon=-1 member of the pair: same lam and alpha, reversed p_mean."""
    b = s.base
    return FreeCoherentState(lam=b.lam, alpha=b.alpha, p_mean=-b.p_mean, epsilon=-1)


def neutral_field(
    s: NeutralCoherentState,
    tau: float,
    x,
    spec: QuadratureSpec = QuadratureSpec(),
    norm: NormalizationConvention = DEFAULT_NORM,
):
    """(psi_+ + psi_-)/sqrt(2); real-valued under the symmetric normalization."""
    if not norm.is_symmetric_default:
        warnings.warn(
            "non-default normalization: the parity components are no longer exact "
            "conjugates, so the neutral field need not be real",
            AsymmetricNormalizationWarning,
            stacklevel=2,
        )
    plus = kg_field_value(s.base, tau, x, norm, spec)
    minus = kg_field_value(partner(s), tau, x, norm, spec)
    return (plus + minus) / np.sqrt(2.0)
