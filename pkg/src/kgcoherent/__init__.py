"""Relativistic coherent-state observables of Klein-Gordon wave packets."""

from ._backend import BACKEND, available_backends
from .classical import (
    ClassicalHelix,
    HelixDerived,
    free_classical,
    gyration_center,
    helix_derived,
    helix_momenta,
    helix_position,
)
from .freefield import (
    DEFAULT_NORM,
    FreeCoherentState,
    LocalizationWarning,
    MomentSet,
    NormalizationConvention,
    energy_moments,
    evolved_moments,
    kg_density,
    kg_field_value,
    nonrel_moments,
    probability_density,
    static_moments,
    velocity_moments,
    wavefn_p,
    wavefn_x,
)
from .magnetic import (
    LandauMode,
    MagneticCoherentState,
    MatchedWidthWarning,
    SeriesConstants,
    SeriesNonConvergenceError,
    SeriesSpec,
    auto_series_spec,
    conserved_expectations,
    free_limit_check,
    kg_field,
    landau_energy,
    momentum_expectations,
    nonrel_expectations,
    parallel_motion,
    r_sq_closed_form,
    series_constants,
    transverse_position,
    x3_uncertainty,
)
from .neutral import NeutralCoherentState, neutral_field, partner
from .quadrature import (
    GaussianWeight,
    NonConvergenceWarning,
    QuadratureSpec,
    hermite_nodes,
    integrate_gaussian,
)
from .specfun import LaguerreOrder, laguerre, laguerre_column, log_fact_ratio

__version__ = "0.1.0"
