"""Landau-series engine for a charged coherent packet in a uniform magnetic field.

All expectation values reduce to sums over one ladder index m (the energy
eigenvalue is 1 + k3^2 + Lambda(2m+1)) of precomputed weights against
k3-integrals, plus a phase-indexed double series for the transverse position.
Weights come from the kernel backend (_backend); k3 integrals use node-doubled
Gauss-Hermite rules shared across the whole ladder.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from . import _backend
from .freefield import DEFAULT_NORM, MomentSet, NormalizationConvention
from .quadrature import NonConvergenceWarning, QuadratureSpec, hermite_nodes

_LADDER_CHUNK = 2048  # ladder rows per (m, node) integrand block
_HARD_N_CAP = 5_000_000
_HARD_J_CAP = 1 << 13


class MatchedWidthWarning(UserWarning):
    """lambda_perp^2 is within 1e-12 of Lambda; the s->0 limit is used (regular)."""


class SeriesNonConvergenceError(RuntimeError):
    """Tail certification failed within the (n_max, ell_max) caps."""


@dataclass(frozen=True)
class MagneticCoherentState:
    """Packet at the origin, transverse momentum along x^1, in field Lambda."""

    Lambda: float
    lambda_perp: float
    lambda3: float
    p1_mean: float = 0.0
    p3_mean: float = 0.0

    def __post_init__(self):
        if not (self.Lambda > 0.0 and self.lambda_perp > 0.0 and self.lambda3 > 0.0):
            raise ValueError("Lambda and both widths must be positive")
        if self.p1_mean < 0.0:
            raise ValueError("p1_mean must be nonnegative (orbit phase convention)")


@dataclass(frozen=True)
class SeriesConstants:
    s: float
    u: float
    su: float  # cancellation-free s*u = 2 Lambda p1^2/(Lambda+lambda_perp^2)^2
    F_amp: float
    E_amp: float


@dataclass(frozen=True)
class SeriesSpec:
    n_max: int = 400
    ell_max: int = 400
    tail_tol: float = 1e-12
    consecutive_below: int = 3

    def __post_init__(self):
        if self.n_max < 1 or self.ell_max < 1 or self.consecutive_below < 1:
            raise ValueError("series caps and window must be positive")
        if not self.tail_tol > 0.0:
            raise ValueError("tail_tol must be positive")


@dataclass(frozen=True)
class LandauMode:
    n: int
    ell: int
    k3: float

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("n must be nonnegative")


class ParallelMotion(NamedTuple):
    x3_mean: float
    x3dot_mean: float
    x3dot_sq_mean: float


class MomentumExpectations(NamedTuple):
    p1: float
    p2: float
    p3: float
    Pi1: float
    Pi2: float


class ConservedExpectations(NamedTuple):
    E_mean: float
    L3_mean: float
    R_mean: float
    R_sq_mean: float
    R_var: float


class NonrelExpectations(NamedTuple):
    x1: float
    x2: float
    x3: float
    p1: float
    p2: float
    p3: float
    x3dot: float
    E_mean: float
    R_sq_mean: float


def landau_energy(m: LandauMode, Lambda: float) -> float:
    """Squared-energy eigenvalue 1 + k3^2 + Lambda(2n + 1 - l + |l|), dimensionless."""
    return 1.0 + m.k3**2 + Lambda * (2 * m.n + 1 - m.ell + abs(m.ell))


def _constants_quiet(s: MagneticCoherentState) -> SeriesConstants:
    lp2 = s.lambda_perp**2
    denom = s.Lambda + lp2
    sc = (s.Lambda - lp2) / denom
    su = 2.0 * s.Lambda * s.p1_mean**2 / denom**2
    u = su / sc if sc != 0.0 else math.inf
    expf = math.exp(-2.0 * s.p1_mean**2 / denom)
    F_amp = math.sqrt(2.0 / math.pi) * 8.0 * lp2 * s.Lambda * s.p1_mean / (s.lambda3 * denom**3) * expf
    E_amp = math.sqrt(2.0 / math.pi) * 4.0 * lp2 * s.Lambda / (s.lambda3 * denom**2) * expf
    return SeriesConstants(s=sc, u=u, su=su, F_amp=F_amp, E_amp=E_amp)


def series_constants(s: MagneticCoherentState) -> SeriesConstants:
    if abs(s.lambda_perp**2 - s.Lambda) < 1e-12 * s.Lambda:
        warnings.warn(
            "lambda_perp^2 matches Lambda; series evaluated in the regular s->0 form",
            MatchedWidthWarning,
            stacklevel=2,
        )
    return _constants_quiet(s)


def r_sq_closed_form(s: MagneticCoherentState) -> float:
    """<R^2> = <R_gc^2> = p1^2/Lambda^2 + (Lambda^2 + lambda_perp^4)/(2 Lambda^2 lambda_perp^2)."""
    lp2 = s.lambda_perp**2
    return s.p1_mean**2 / s.Lambda**2 + (s.Lambda**2 + lp2**2) / (2.0 * s.Lambda**2 * lp2)


# ---------------------------------------------------------------- internals


def _sign_s(sc: float) -> float:
    # s == 0 is handled on the s->0+ branch; physical sums are branch-continuous
    return -1.0 if sc < 0.0 else 1.0


def _alg(s: MagneticCoherentState):
    lp2 = s.lambda_perp**2
    denom = s.Lambda + lp2
    return {
        "denom": denom,
        "log_pref": -2.0 * s.p1_mean**2 / denom,
        "norm_amp": 4.0 * lp2 * s.Lambda / denom**2,
        "E_alg": math.sqrt(2.0 / math.pi) * 4.0 * lp2 * s.Lambda / (s.lambda3 * denom**2),
        "F_alg": math.sqrt(2.0 / math.pi) * 8.0 * lp2 * s.Lambda * s.p1_mean / (s.lambda3 * denom**3),
    }


def _estimate_sizes(abs_s: float, su: float, tail_tol: float) -> tuple[int, int]:
    """A-priori ladder and |ell| ranges from the s-geometric/Laguerre asymptotics."""
    ln_tol = -math.log(tail_tol) + 12.0
    j_est = int(su + 10.0 * math.sqrt(su + 1.0) + 60.0)
    if abs_s < 1e-14:
        return j_est, j_est
    a = -2.0 * math.log(abs_s)
    b = 4.0 * math.sqrt(su / abs_s)
    peak = b * b / (4.0 * a)
    root = (b + math.sqrt(b * b + 4.0 * a * (peak + ln_tol))) / (2.0 * a)
    n_est = int(root * root) + j_est
    return min(n_est, _HARD_N_CAP), min(j_est, _HARD_J_CAP)


def _estimate_kg_sizes(abs_s: float, su: float, v: float, tail_tol: float) -> tuple[int, int]:
    """Sizing for the KG double series: one power of |s| per n (amplitude, not
    probability), and an |ell| range set by the su*v product."""
    ln_tol = -math.log(tail_tol) + 12.0
    suv = su * v
    j_est = int(2.0 * math.sqrt(suv + 1.0) + 10.0 * suv**0.25 + 8.0)
    pois = int(su + 10.0 * math.sqrt(su + 1.0) + 60.0)
    if abs_s < 1e-14:
        return pois, j_est
    a = -math.log(abs_s)
    b = 2.0 * math.sqrt(su / abs_s)
    peak = b * b / (4.0 * a)
    root = (b + math.sqrt(b * b + 4.0 * a * (peak + ln_tol))) / (2.0 * a)
    return min(int(root * root) + pois, _HARD_N_CAP), min(j_est, _HARD_J_CAP)


def _certified(arr: np.ndarray, tol: float, consecutive: int) -> bool:
    """Post-hoc tail check: trailing entries below tol and a geometric bound on
    the continuation; arr must already be on the normalized (O(1)-sum) scale."""
    if arr.size == 0:
        return False
    tail = arr[-consecutive:]
    if np.all(tail == 0.0):
        return True
    if np.any(tail >= tol):
        return False
    if int(np.argmax(arr)) >= arr.size - consecutive:
        return False
    k = min(12, arr.size - 1)
    head, last = arr[-k - 1], arr[-1]
    if last == 0.0:
        return True
    if head <= last:
        return False
    r = (last / head) ** (1.0 / k)
    return last * r / (1.0 - r) < tol


def _grown(ok: bool, cur: int, cap: int) -> tuple[int, bool]:
    if ok or cur >= cap:
        return cur, False
    return min(2 * cur, cap), True


@lru_cache(maxsize=8)
def _ladder_cached(state: MagneticCoherentState, sspec: SeriesSpec):
    c = _constants_quiet(state)
    alg = _alg(state)
    n_try, j_try = _estimate_sizes(abs(c.s), c.su, sspec.tail_tol)
    n_try = max(64, min(n_try, sspec.n_max))
    j_try = max(8, min(j_try, sspec.ell_max))
    while True:
        W, colsum = _backend.ladder_weights(abs(c.s), _sign_s(c.s), c.su, alg["log_pref"], n_try, j_try)
        scaled_n = W * alg["norm_amp"]
        scaled_j = colsum * alg["norm_amp"]
        tol = sspec.tail_tol * max(1.0, float(scaled_n.sum()))
        ok_n = _certified(scaled_n, tol, sspec.consecutive_below)
        ok_j = _certified(scaled_j, tol, sspec.consecutive_below)
        if ok_n and ok_j:
            break
        n_try, grew_n = _grown(ok_n, n_try, sspec.n_max)
        j_try, grew_j = _grown(ok_j, j_try, sspec.ell_max)
        if not (grew_n or grew_j):
            raise SeriesNonConvergenceError(
                f"ladder weights not tail-certified within n_max={sspec.n_max}, "
                f"ell_max={sspec.ell_max} (try larger caps)"
            )
    norm = float(scaled_n.sum())
    if abs(norm - 1.0) > max(1e-8, 1e3 * sspec.tail_tol):
        raise SeriesNonConvergenceError(f"ladder normalization off by {norm - 1.0:.3e}")
    W.setflags(write=False)
    colsum.setflags(write=False)
    return W, colsum


@lru_cache(maxsize=8)
def _transverse_cached(state: MagneticCoherentState, sspec: SeriesSpec, printed: bool):
    c = _constants_quiet(state)
    alg = _alg(state)
    if state.p1_mean == 0.0:
        V = np.zeros(1)
        V.setflags(write=False)
        return V
    n_try, j_try = _estimate_sizes(abs(c.s), c.su, sspec.tail_tol)
    n_try = max(64, min(n_try, sspec.n_max))
    j_try = max(8, min(j_try, sspec.ell_max))
    # scale on which sum(V_scaled) = 1 (the tau=0 cancellation against p1/Lambda)
    vscale = alg["F_alg"] * state.lambda3 * math.sqrt(math.pi / 2.0) * state.Lambda / state.p1_mean
    while True:
        V, colsum = _backend.transverse_weights(
            abs(c.s), _sign_s(c.s), c.su, alg["log_pref"], n_try, j_try, printed
        )
        scaled_n = np.abs(V) * vscale
        scaled_j = colsum * vscale
        tol = sspec.tail_tol * max(1.0, float(scaled_n.sum()))
        ok_n = _certified(scaled_n, tol, sspec.consecutive_below)
        ok_j = _certified(scaled_j, tol, sspec.consecutive_below)
        if ok_n and ok_j:
            break
        n_try, grew_n = _grown(ok_n, n_try, sspec.n_max)
        j_try, grew_j = _grown(ok_j, j_try, sspec.ell_max)
        if not (grew_n or grew_j):
            raise SeriesNonConvergenceError(
                f"transverse weights not tail-certified within n_max={sspec.n_max}, "
                f"ell_max={sspec.ell_max} (try larger caps)"
            )
    total = float(V.sum()) * vscale
    if abs(total - 1.0) > max(1e-7, 1e3 * sspec.tail_tol):
        raise SeriesNonConvergenceError(
            f"transverse tau=0 cancellation off by {total - 1.0:.3e}"
        )
    V.setflags(write=False)
    return V


def _ladder_integrals(state: MagneticCoherentState, count: int, kind: str, qspec: QuadratureSpec):
    """J[m] = int exp(-2(k3-p3)^2/lambda3^2) f(k3; N=2m+1) dk3 for m = 0..count-1."""
    Lam, p3, l3 = state.Lambda, state.p3_mean, state.lambda3
    half_width = l3 / math.sqrt(2.0)
    out = np.empty(count)
    for start in range(0, count, _LADDER_CHUNK):
        N = 2.0 * np.arange(start, min(start + _LADDER_CHUNK, count))[:, None] + 1.0
        prev = None
        est = None
        n_nodes = qspec.initial_nodes
        while True:
            t, wt = hermite_nodes(n_nodes)
            k3 = p3 + t[None, :] * half_width
            esq = Lam * N + 1.0 + k3**2
            if kind == "energy":
                f = np.sqrt(esq)
            elif kind == "velocity":
                f = k3 / np.sqrt(esq)
            elif kind == "velocity_sq":
                f = k3**2 / esq
            else:
                raise ValueError(f"unknown integral kind {kind!r}")
            est = (f @ wt) * half_width
            if prev is not None:
                err = float(np.max(np.abs(est - prev)))
                if err < max(qspec.rel_tol * float(np.max(np.abs(est))), qspec.abs_tol):
                    break
            prev = est
            if n_nodes >= qspec.max_nodes:
                warnings.warn(
                    f"ladder {kind} integrals did not stabilize within "
                    f"{qspec.max_nodes} nodes",
                    NonConvergenceWarning,
                    stacklevel=3,
                )
                break
            n_nodes = min(2 * n_nodes, qspec.max_nodes)
        out[start : start + N.shape[0]] = est
    return out


def _theta_integrals(state: MagneticCoherentState, count: int, tau: float, qspec: QuadratureSpec):
    """sin/cos integrals of the two-frequency phase against the k3 Gaussian."""
    Lam, p3, l3 = state.Lambda, state.p3_mean, state.lambda3
    half_width = l3 / math.sqrt(2.0)
    IS = np.empty(count)
    IC = np.empty(count)
    for start in range(0, count, _LADDER_CHUNK):
        M = np.arange(start, min(start + _LADDER_CHUNK, count))[:, None].astype(float)
        prev = None
        est = None
        n_nodes = qspec.initial_nodes
        while True:
            t, wt = hermite_nodes(n_nodes)
            k3sq = (p3 + t[None, :] * half_width) ** 2
            theta = tau * (
                np.sqrt(Lam * (2.0 * M + 3.0) + 1.0 + k3sq)
                - np.sqrt(Lam * (2.0 * M + 1.0) + 1.0 + k3sq)
            )
            est = np.stack([np.sin(theta) @ wt, np.cos(theta) @ wt]) * half_width
            if prev is not None:
                err = float(np.max(np.abs(est - prev)))
                if err < max(qspec.rel_tol * float(np.max(np.abs(est))), qspec.abs_tol):
                    break
            prev = est
            if n_nodes >= qspec.max_nodes:
                warnings.warn(
                    f"transverse phase integrals did not stabilize within "
                    f"{qspec.max_nodes} nodes (tau={tau})",
                    NonConvergenceWarning,
                    stacklevel=3,
                )
                break
            n_nodes = min(2 * n_nodes, qspec.max_nodes)
        IS[start : start + M.shape[0]] = est[0]
        IC[start : start + M.shape[0]] = est[1]
    return IS, IC


def _kg_integrals(state, count, tau, x3, qspec):
    """Complex amplitude integrals with weight exp(-(k3-p3)^2/lambda3^2)."""
    Lam, p3, l3 = state.Lambda, state.p3_mean, state.lambda3
    out = np.empty(count, dtype=complex)
    for start in range(0, count, _LADDER_CHUNK):
        N = 2.0 * np.arange(start, min(start + _LADDER_CHUNK, count))[:, None] + 1.0
        prev = None
        est = None
        n_nodes = qspec.initial_nodes
        while True:
            t, wt = hermite_nodes(n_nodes)
            k3 = p3 + t[None, :] * l3
            esq = Lam * N + 1.0 + k3**2
            f = np.exp(1j * (k3 * x3 - tau * np.sqrt(esq))) / esq**0.25
            est = (f @ wt) * l3
            if prev is not None:
                err = float(np.max(np.abs(est - prev)))
                if err < max(qspec.rel_tol * float(np.max(np.abs(est))), qspec.abs_tol):
                    break
            prev = est
            if n_nodes >= qspec.max_nodes:
                warnings.warn(
                    f"KG field k3 integrals did not stabilize within "
                    f"{qspec.max_nodes} nodes (tau={tau}, x3={x3})",
                    NonConvergenceWarning,
                    stacklevel=3,
                )
                break
            n_nodes = min(2 * n_nodes, qspec.max_nodes)
        out[start : start + N.shape[0]] = est
    return out


# ---------------------------------------------------------------- public ops


def transverse_position(
    s: MagneticCoherentState,
    tau,
    qspec: QuadratureSpec = QuadratureSpec(),
    sspec: SeriesSpec = SeriesSpec(),
    variant: str = "printed",
):
    """<x^1(tau)>, <x^2(tau)> from the phase-indexed Landau double series.

    ``variant`` selects the phase index of the shifted second sum: "printed"
    attaches the ladder-bottom phase to it, "symmetric" shifts it with the
    first sum. The printed form is the default (it converges to the classical
    helix; see the validation harness).
    """
    if variant not in ("printed", "symmetric"):
        raise ValueError("variant must be 'printed' or 'symmetric'")
    taus = np.atleast_1d(np.asarray(tau, dtype=float))
    if s.p1_mean == 0.0:
        x1 = np.zeros(taus.shape)
        x2 = np.zeros(taus.shape)
    else:
        V = _transverse_cached(s, sspec, variant == "printed")
        alg = _alg(s)
        x1 = np.empty(taus.shape)
        x2 = np.empty(taus.shape)
        for i, tv in enumerate(taus):
            IS, IC = _theta_integrals(s, V.size, float(tv), qspec)
            x1[i] = alg["F_alg"] * float(V @ IS)
            x2[i] = -s.p1_mean / s.Lambda + alg["F_alg"] * float(V @ IC)
    if np.isscalar(tau):
        return float(x1[0]), float(x2[0])
    return x1, x2


def parallel_motion(
    s: MagneticCoherentState,
    tau: float,
    qspec: QuadratureSpec = QuadratureSpec(),
    sspec: SeriesSpec = SeriesSpec(),
) -> ParallelMotion:
    """Drift <x^3(tau)> = tau <xdot^3> and the parallel velocity moments."""
    W, _ = _ladder_cached(s, sspec)
    alg = _alg(s)
    v = alg["E_alg"] * float(W @ _ladder_integrals(s, W.size, "velocity", qspec))
    v2 = alg["E_alg"] * float(W @ _ladder_integrals(s, W.size, "velocity_sq", qspec))
    return ParallelMotion(tau * v, v, v2)


def momentum_expectations(
    s: MagneticCoherentState,
    tau,
    qspec: QuadratureSpec = QuadratureSpec(),
    sspec: SeriesSpec = SeriesSpec(),
    variant: str = "printed",
):
    """Canonical momenta from the position series plus kinetic combinations."""
    x1, x2 = transverse_position(s, tau, qspec, sspec, variant)
    p1 = s.p1_mean + 0.5 * s.Lambda * np.asarray(x2)
    p2 = -0.5 * s.Lambda * np.asarray(x1)
    p3 = s.p3_mean * np.ones_like(np.asarray(x1))
    Pi1 = s.p1_mean + s.Lambda * np.asarray(x2)
    Pi2 = -s.Lambda * np.asarray(x1)
    if np.isscalar(tau):
        return MomentumExpectations(float(p1), float(p2), float(p3), float(Pi1), float(Pi2))
    return MomentumExpectations(p1, p2, p3, Pi1, Pi2)


def conserved_expectations(
    s: MagneticCoherentState,
    qspec: QuadratureSpec = QuadratureSpec(),
    sspec: SeriesSpec = SeriesSpec(),
) -> ConservedExpectations:
    """Time-independent expectations: energy, L_3, gyration radius and spread."""
    W, colsum = _ladder_cached(s, sspec)
    alg = _alg(s)
    m = np.arange(W.size)
    E = alg["E_alg"] * float(W @ _ladder_integrals(s, W.size, "energy", qspec))
    # +l and -l carry identical magnitudes; their signed sums cancel exactly
    j = np.arange(colsum.size, dtype=float)
    l3_pos = float(np.sum(j * colsum))
    l3 = alg["norm_amp"] * (l3_pos + (-l3_pos))
    R = alg["norm_amp"] / math.sqrt(s.Lambda) * float(W @ np.sqrt(2.0 * m + 1.0))
    R2 = alg["norm_amp"] / s.Lambda * float(W @ (2.0 * m + 1.0))
    return ConservedExpectations(E, l3, R, R2, max(R2 - R * R, 0.0))


def x3_uncertainty(
    s: MagneticCoherentState,
    tau: float,
    qspec: QuadratureSpec = QuadratureSpec(),
    sspec: SeriesSpec = SeriesSpec(),
) -> float:
    """Delta x^3 * Delta p_3 at time tau; exactly 1/2 at tau = 0."""
    pm = parallel_motion(s, 0.0, qspec, sspec)
    var = max(pm.x3dot_sq_mean - pm.x3dot_mean**2, 0.0)
    return 0.5 * math.sqrt(1.0 + s.lambda3**2 * var * tau**2)


def kg_field(
    s: MagneticCoherentState,
    tau: float,
    rho: float,
    phi: float,
    x3: float,
    norm: NormalizationConvention = DEFAULT_NORM,
    qspec: QuadratureSpec = QuadratureSpec(),
    sspec: SeriesSpec = SeriesSpec(),
) -> complex:
    """Coherent KG field value at cylinder coordinates (rho, phi, x3), time tau.

    Half-integer powers of the (-s)uv product (odd |l| terms) are taken on the
    principal branch, i.e. an i^|l| phase; grouped with e^{il phi} this is the
    angular plane-wave expansion.
    """
    if rho < 0.0:
        raise ValueError("rho must be nonnegative")
    alg = _alg(s)
    v = s.Lambda * rho**2 / 2.0
    G, K = _kg_parts(s, sspec, qspec, float(v), float(tau), float(x3))
    jph = np.arange(G.shape[0])
    t1 = (np.exp(1j * jph * (phi + math.pi / 2.0))[:, None] * G).sum(axis=0)
    series = t1 @ K
    ph2 = np.exp(1j * jph * (math.pi / 2.0 - phi))
    for jj in range(1, G.shape[0]):
        series += ph2[jj] * (G[jj, : G.shape[1] - jj] @ K[jj:])
    amp0 = math.sqrt(s.Lambda * alg["E_alg"]) / (
        2.0 * math.pi * math.sqrt(norm.kappa_times_one_plus_eps_a)
    )
    return complex(amp0 * series)


def _kg_parts(s, sspec, qspec, v, tau, x3):
    G = _kg_weights_cached(s, sspec, v)
    K = _kg_integrals_cached(s, G.shape[1], tau, x3, qspec)
    return G, K


@lru_cache(maxsize=8)
def _kg_integrals_cached(state, count, tau, x3, qspec):
    out = _kg_integrals(state, count, tau, x3, qspec)
    out.setflags(write=False)
    return out


@lru_cache(maxsize=2)
def _kg_weights_cached(state: MagneticCoherentState, sspec: SeriesSpec, v: float):
    c = _constants_quiet(state)
    alg = _alg(state)
    n_try, j_try = _estimate_kg_sizes(abs(c.s), c.su, v, sspec.tail_tol)
    n_try = max(64, min(n_try, sspec.n_max))
    j_try = max(4, min(j_try, sspec.ell_max))
    if c.su == 0.0 or v == 0.0:
        j_try = 1  # only l = 0 survives
    while True:
        G, colsum = _backend.kg_weight_matrix(
            abs(c.s), _sign_s(c.s), c.su, v, alg["log_pref"], n_try, j_try
        )
        n_abs = np.abs(G).sum(axis=0)
        total = max(float(n_abs.sum()), 1.0)
        tol = sspec.tail_tol * total
        ok_n = _certified(n_abs, tol, sspec.consecutive_below)
        ok_j = _certified(colsum, tol, sspec.consecutive_below) or j_try == 1
        if ok_n and ok_j:
            break
        n_try, grew_n = _grown(ok_n, n_try, sspec.n_max)
        j_try, grew_j = _grown(ok_j, j_try, sspec.ell_max)
        if not (grew_n or grew_j):
            raise SeriesNonConvergenceError(
                f"KG weight series not tail-certified within n_max={sspec.n_max}, "
                f"ell_max={sspec.ell_max}"
            )
    G.setflags(write=False)
    return G


def nonrel_expectations(s: MagneticCoherentState, tau: float) -> NonrelExpectations:
    """Closed-form nonrelativistic expectations (width-independent circle)."""
    rc = s.p1_mean / s.Lambda
    lt = s.Lambda * tau
    r2 = r_sq_closed_form(s)
    energy = 1.0 + s.lambda3**2 / 8.0 + s.p3_mean**2 / 2.0 + s.Lambda**2 * r2 / 2.0
    return NonrelExpectations(
        x1=rc * math.sin(lt),
        x2=rc * (math.cos(lt) - 1.0),
        x3=s.p3_mean * tau,
        p1=0.5 * s.p1_mean * (math.cos(lt) + 1.0),
        p2=-0.5 * s.p1_mean * math.sin(lt),
        p3=s.p3_mean,
        x3dot=s.p3_mean,
        E_mean=energy,
        R_sq_mean=r2,
    )


def free_limit_check(
    s: MagneticCoherentState,
    tau: float,
    qspec: QuadratureSpec = QuadratureSpec(),
) -> MomentSet:
    """The Lambda -> 0 closed forms: free motion along x^3 (requires p1_mean = 0)."""
    if s.p1_mean != 0.0:
        raise ValueError("free-limit formulas require p1_mean = 0")
    from .freefield import FreeCoherentState, energy_moments, velocity_moments

    proxy = FreeCoherentState(lam=s.lambda3, alpha=0.0, p_mean=s.p3_mean)
    vm = velocity_moments(proxy, qspec)
    em = energy_moments(proxy, qspec)
    spread = 1.0 + s.lambda3**2 * vm.v_var * tau**2
    return MomentSet(
        tau=tau,
        x_mean=vm.v_mean * tau,
        x_var=spread / s.lambda3**2,
        p_mean=s.p3_mean,
        p_var=s.lambda3**2 / 4.0,
        v_mean=vm.v_mean,
        v_var=vm.v_var,
        E_mean=em.E_mean,
        E_var=em.E_var,
        uncertainty_product=0.5 * math.sqrt(spread),
    )


def auto_series_spec(s: MagneticCoherentState, base: SeriesSpec = SeriesSpec()) -> SeriesSpec:
    """SeriesSpec with caps sized for this state (used by the CLI and tables)."""
    c = series_constants(s)
    n_est, j_est = _estimate_sizes(abs(c.s), c.su, base.tail_tol)
    return SeriesSpec(
        n_max=max(base.n_max, min(4 * n_est, _HARD_N_CAP)),
        ell_max=max(base.ell_max, min(4 * j_est, _HARD_J_CAP)),
        tail_tol=base.tail_tol,
        consecutive_below=base.consecutive_below,
    )
