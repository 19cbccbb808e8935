"""Gaussian-weighted quadrature on the real line with node-doubling refinement.

All observables in this package reduce to integrals of the form
``int g(p) exp(-a (p - p0)^2) dp`` with smooth or oscillatory ``g``; they are
evaluated by Gauss-Hermite rules after the substitution ``p = p0 + t/sqrt(a)``,
doubling the node count until two successive estimates agree.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, NamedTuple

import numpy as np
from scipy.special import roots_hermite

MAX_HERMITE_NODES = 32768
SQRT_PI = math.sqrt(math.pi)


class NonConvergenceWarning(UserWarning):
    """Node doubling hit the cap before successive estimates stabilized."""


@dataclass(frozen=True)
class QuadratureSpec:
    """Convergence controls for the node-doubling loop."""

    initial_nodes: int = 64
    max_nodes: int = 8192
    rel_tol: float = 1e-10
    abs_tol: float = 1e-14

    def __post_init__(self):
        if self.initial_nodes < 1 or self.max_nodes < 1:
            raise ValueError("node counts must be positive")
        if self.initial_nodes > self.max_nodes:
            raise ValueError("initial_nodes must not exceed max_nodes")
        if self.rel_tol <= 0.0 or self.abs_tol <= 0.0:
            raise ValueError("tolerances must be positive")


@dataclass(frozen=True)
class GaussianWeight:
    """The weight exp(-a (p - center)^2) with a = inv_width_sq > 0."""

    center: float
    inv_width_sq: float

    def __post_init__(self):
        if not self.inv_width_sq > 0.0:
            raise ValueError("inv_width_sq must be positive")


class QuadratureResult(NamedTuple):
    value: complex
    error_estimate: float
    nodes: int
    converged: bool


@lru_cache(maxsize=64)
def _hermite_rule(n: int):
    nodes, weights = roots_hermite(n)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def hermite_nodes(n: int):
    """Nodes and weights of the n-point Gauss-Hermite rule for weight e^{-t^2}.

    Results are cached and returned as read-only arrays, so repeated use from
    multiple threads is safe.
    """
    if not 1 <= n <= MAX_HERMITE_NODES:
        raise ValueError(f"node count {n} outside [1, {MAX_HERMITE_NODES}]")
    return _hermite_rule(int(n))


def _node_schedule(spec: QuadratureSpec):
    n = min(spec.initial_nodes, spec.max_nodes)
    while True:
        yield n
        if n >= spec.max_nodes:
            return
        n = min(2 * n, spec.max_nodes)


def _eval_integrand(g: Callable, p: np.ndarray) -> np.ndarray:
    try:
        vals = np.asarray(g(p))
    except (TypeError, ValueError):
        return np.asarray([g(x) for x in p])
    if vals.shape != p.shape:  # scalar-only callable
        vals = np.asarray([g(x) for x in p])
    return vals


def integrate_gaussian(
    w: GaussianWeight,
    g: Callable[[np.ndarray], np.ndarray],
    spec: QuadratureSpec = QuadratureSpec(),
) -> QuadratureResult:
    """Evaluate int g(p) exp(-a (p - p0)^2) dp to the requested tolerance.

    ``g`` may return real or complex values (complex integrands are handled
    componentwise) and should accept an ndarray of momenta; scalar-only
    callables are mapped pointwise. On non-convergence the last estimate is
    still returned, flagged, with a NonConvergenceWarning.
    """
    inv_sqrt_a = 1.0 / math.sqrt(w.inv_width_sq)
    prev = None
    est = np.float64(0.0)
    err = math.inf
    nodes_used = 0
    for n in _node_schedule(spec):
        t, wt = hermite_nodes(n)
        vals = _eval_integrand(g, w.center + t * inv_sqrt_a)
        est = (wt @ vals) * inv_sqrt_a
        nodes_used = n
        if prev is not None:
            err = abs(est - prev)
            if err < max(spec.rel_tol * abs(est), spec.abs_tol):
                return QuadratureResult(est.item(), err, n, True)
        prev = est
    warnings.warn(
        f"gaussian quadrature did not stabilize within {spec.max_nodes} nodes "
        f"(last change {err:.3e})",
        NonConvergenceWarning,
        stacklevel=2,
    )
    return QuadratureResult(est.item(), float(err), nodes_used, False)


def integrate_gaussian_batch(
    w: GaussianWeight,
    g: Callable[[np.ndarray], np.ndarray],
    spec: QuadratureSpec = QuadratureSpec(),
) -> QuadratureResult:
    """Batched variant: ``g`` maps nodes (K,) to a stack (..., K) of integrands.

    The whole batch shares one node count, doubled until the largest entrywise
    change is below tolerance. ``value`` is the (...)-shaped array of integrals.
    """
    inv_sqrt_a = 1.0 / math.sqrt(w.inv_width_sq)
    prev = None
    est = None
    err = math.inf
    nodes_used = 0
    for n in _node_schedule(spec):
        t, wt = hermite_nodes(n)
        vals = np.asarray(g(w.center + t * inv_sqrt_a))
        est = vals @ wt * inv_sqrt_a
        nodes_used = n
        if prev is not None:
            err = float(np.max(np.abs(est - prev))) if est.size else 0.0
            scale = float(np.max(np.abs(est))) if est.size else 0.0
            if err < max(spec.rel_tol * scale, spec.abs_tol):
                return QuadratureResult(est, err, n, True)
        prev = est
    warnings.warn(
        f"batched gaussian quadrature did not stabilize within {spec.max_nodes} "
        f"nodes (last change {err:.3e})",
        NonConvergenceWarning,
        stacklevel=2,
    )
    return QuadratureResult(est, err, nodes_used, False)
