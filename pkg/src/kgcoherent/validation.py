"""Invariant suites behind the `validate` CLI command.

Each check returns a record {name, passed, measured, tolerance, detail}; the
CLI renders them as text and JSON. Golden-table deviations live in tables.py.
"""
from __future__ import annotations

import math

import numpy as np

from . import reference, tables
from .classical import ClassicalHelix, helix_derived
from .freefield import (
    FreeCoherentState,
    energy_moments,
    evolved_moments,
    nonrel_moments,
    probability_density,
    static_moments,
    velocity_moments,
    wavefn_x,
)
from .magnetic import (
    MagneticCoherentState,
    SeriesSpec,
    auto_series_spec,
    conserved_expectations,
    free_limit_check,
    kg_field,
    momentum_expectations,
    parallel_motion,
    r_sq_closed_form,
    transverse_position,
    x3_uncertainty,
)
from .neutral import NeutralCoherentState, neutral_field, partner
from .quadrature import GaussianWeight, QuadratureSpec, hermite_nodes, integrate_gaussian
from .specfun import laguerre


def _rec(name: str, measured: float, tol: float, detail: str = "") -> dict:
    return {
        "name": name,
        "passed": bool(measured <= tol),
        "measured": float(measured),
        "tolerance": float(tol),
        "detail": detail,
    }


def quadrature_checks(rng: np.random.Generator) -> list[dict]:
    out = []
    dev = 0.0
    for n in (1, 2, 64, 512, 8192):
        t, w = hermite_nodes(n)
        dev = max(dev, abs(w.sum() / math.sqrt(math.pi) - 1.0))
    out.append(_rec("hermite weight sum = sqrt(pi)", dev, 1e-13))
    t, w = hermite_nodes(48)
    out.append(
        _rec("hermite second moment = sqrt(pi)/2", abs((w @ t**2) / (math.sqrt(math.pi) / 2) - 1.0), 1e-13)
    )
    worst = 0.0
    for _ in range(20):
        a = rng.uniform(0.3, 4.0)
        p0 = rng.uniform(-2.0, 2.0)
        c = rng.uniform(-1.0, 1.0, size=4)

        def g(p):
            return c[0] + c[1] * np.sin(p) + c[2] / (1.0 + p * p) + c[3] * p**2

        got = integrate_gaussian(GaussianWeight(p0, a), g).value
        half = 9.0 / math.sqrt(a)
        xs = np.linspace(p0 - half, p0 + half, 1_000_001)
        oracle = np.trapezoid(g(xs) * np.exp(-a * (xs - p0) ** 2), xs)
        worst = max(worst, abs(got - oracle) / max(abs(oracle), 1e-30))
    out.append(_rec("gaussian quadrature vs 1e6-point trapezoid", worst, 1e-9))
    return out


def specfun_checks() -> list[dict]:
    explicit = {
        0: lambda a, x: 1.0,
        1: lambda a, x: 1 + a - x,
        2: lambda a, x: (x**2 - 2 * (a + 2) * x + (a + 1) * (a + 2)) / 2,
        3: lambda a, x: (-(x**3) + 3 * (a + 3) * x**2 - 3 * (a + 2) * (a + 3) * x + (a + 1) * (a + 2) * (a + 3)) / 6,
    }
    worst = 0.0
    for n, poly in explicit.items():
        for a in range(5):
            for x in (0.0, 0.5, 1.0, 5.0):
                want = poly(a, x)
                got = laguerre(n, a, x)
                worst = max(worst, abs(got - want) / max(abs(want), 1.0))
    recs = [_rec("laguerre recurrence vs explicit polynomials", worst, 1e-12)]
    binom_dev = max(
        abs(laguerre(n, a, 0.0) - math.comb(n + a, n))
        for n in range(7)
        for a in range(5)
    )
    recs.append(_rec("laguerre at 0 equals binomial", binom_dev, 0.0))
    return recs


def free_checks(rng: np.random.Generator) -> list[dict]:
    out = []
    worst = 0.0
    for _ in range(100):
        s = FreeCoherentState(lam=rng.uniform(0.05, 1.0), alpha=rng.uniform(-3, 3), p_mean=rng.uniform(-5, 5))
        worst = max(worst, abs(static_moments(s).uncertainty_product - 0.5))
    out.append(_rec("minimum uncertainty at tau=0", worst, 1e-15))

    worst = 0.0
    for (lam, p), ref in reference.VELOCITY_POINTS.items():
        got = velocity_moments(FreeCoherentState(lam=lam, p_mean=p)).v_mean
        worst = max(worst, abs(got - ref))
    out.append(_rec("velocity expectation reference points", worst, 5e-4))

    worst = 0.0
    qspec = QuadratureSpec(rel_tol=1e-8, abs_tol=1e-12)  # 1e-6 target; avoids node-cap churn
    for lam, p in ((1.0, 1.0), (0.5, 1.0), (1.0, 2.0)):
        s = FreeCoherentState(lam=lam, p_mean=p)
        for tau in (0.0, 5.0, 20.0):
            vel = p / math.sqrt(1 + p * p)
            xs = np.linspace(vel * tau - 50.0, vel * tau + 50.0, 4001)
            total = np.trapezoid(probability_density(s, tau, xs, qspec), xs)
            worst = max(worst, abs(total - 1.0))
    out.append(_rec("density unitarity", worst, 1e-6))

    xs = np.linspace(-10.0, 20.0, 64)
    s = FreeCoherentState(lam=1.0, p_mean=1.0)
    sm = FreeCoherentState(lam=1.0, p_mean=1.0, epsilon=-1)
    parity = np.max(np.abs(probability_density(sm, 5.0, xs) - probability_density(s, -5.0, xs)))
    out.append(_rec("charge-parity time reversal of density", parity, 1e-10))

    shrink = 0.0
    bound = 0.0
    order = 0.0
    for lam in (0.25, 0.5, 1.0):
        for p in (0.0, 1.0, 2.0):
            s = FreeCoherentState(lam=lam, p_mean=p)
            taus = np.linspace(0.0, 100.0, 11)
            dx = [math.sqrt(evolved_moments(s, t).x_var) for t in taus]
            shrink = max(shrink, -float(np.min(np.diff(dx))))
            dx_nr = [math.sqrt(nonrel_moments(s, t).x_var) for t in taus]
            order = max(order, max(a - b for a, b in zip(dx, dx_nr)))
            vm = velocity_moments(s)
            bound = max(bound, abs(vm.v_mean), vm.v_sq_mean)
    out.append(_rec("position spread nondecreasing", shrink, 0.0))
    out.append(_rec("relativistic spread below nonrelativistic", order, 1e-12))
    out.append(_rec("velocity bounded by c", bound, 1.0 - 1e-12))
    return out


def neutral_checks() -> list[dict]:
    s = NeutralCoherentState(FreeCoherentState(lam=0.5, alpha=0.4, p_mean=1.0))
    xs = np.linspace(-8.0, 12.0, 41)
    worst = 0.0
    for tau in (0.0, 3.0, 10.0):
        worst = max(worst, float(np.max(np.abs(neutral_field(s, tau, xs).imag))))
    recs = [_rec("neutral field reality", worst, 1e-10)]
    conj = np.max(np.abs(wavefn_x(partner(s), xs) - np.conj(wavefn_x(s.base, xs))))
    recs.append(_rec("partner wave function conjugacy", float(conj), 1e-14))
    return recs


def magnetic_checks() -> list[dict]:
    out = []
    state = MagneticCoherentState(Lambda=0.01, lambda_perp=0.25, lambda3=0.25, p1_mean=1.2, p3_mean=1.6)
    sspec = auto_series_spec(state)
    ce = conserved_expectations(state, sspec=sspec)
    out.append(_rec("angular momentum L3 = 0", abs(ce.L3_mean), 1e-12))
    r2c = r_sq_closed_form(state)
    out.append(_rec("R^2 series equals gyration-center closed form", abs(ce.R_sq_mean / r2c - 1.0), 1e-10))
    full_moment = r2c + state.lambda_perp**2 / (4.0 * state.Lambda**2)
    out.append(
        _rec(
            "R^2 closed form uses squared mean momentum (competing reading shown)",
            abs(ce.R_sq_mean / r2c - 1.0),
            1e-10,
            detail=f"squared-mean dev {abs(ce.R_sq_mean - r2c):.3e} vs full-moment dev {abs(ce.R_sq_mean - full_moment):.3e}",
        )
    )

    spread = 0.0
    base = None
    for l3 in (1e-3, 0.25, 0.5):
        st = MagneticCoherentState(Lambda=0.01, lambda_perp=0.25, lambda3=l3, p1_mean=1.2, p3_mean=1.6)
        c = conserved_expectations(st, sspec=auto_series_spec(st))
        vec = np.array([c.R_mean, c.R_sq_mean, c.L3_mean])
        if base is None:
            base = vec
        spread = max(spread, float(np.max(np.abs(vec - base) / np.maximum(np.abs(base), 1.0))))
    out.append(_rec("R, R^2, L3 independent of lambda3", spread, 1e-12))

    helix = helix_derived(ClassicalHelix(Lambda=state.Lambda, p_perp=state.p1_mean, p3=state.p3_mean))
    taus = np.linspace(0.0, 5.0 * helix.period, 21)
    x1, x2 = transverse_position(state, taus, sspec=sspec)
    me = momentum_expectations(state, taus, sspec=sspec)
    gc1 = x1 / 2.0 + me.p2 / state.Lambda
    gc2 = x2 / 2.0 - me.p1 / state.Lambda
    drift = max(
        float(np.max(np.abs(gc1 - gc1[0]))),
        float(np.max(np.abs(gc2 - gc2[0]))),
    )
    out.append(_rec("gyration-center expectations constant over 5 periods", drift, 1e-10))
    out.append(_rec("transverse start at the origin", max(abs(x1[0]), abs(x2[0])), 1e-7 * helix.radius))

    out.append(_rec("x3-p3 uncertainty at tau=0", abs(x3_uncertainty(state, 0.0, sspec=sspec) - 0.5), 1e-15))
    bound = math.sqrt(1.0 + state.Lambda + state.p3_mean**2)
    out.append(_rec("energy above lowest Landau tower", max(bound - ce.E_mean, 0.0), 0.0))

    free_state = MagneticCoherentState(Lambda=1e-8, lambda_perp=1e-3, lambda3=0.5, p1_mean=0.0, p3_mean=1.0)
    fspec = auto_series_spec(free_state)
    proxy_E = conserved_expectations(free_state, sspec=fspec).E_mean
    proxy_v = parallel_motion(free_state, 0.0, sspec=fspec).x3dot_mean
    closed = free_limit_check(free_state, 0.0)
    free = FreeCoherentState(lam=0.5, p_mean=1.0)
    dev = max(
        abs(proxy_E - energy_moments(free).E_mean),
        abs(proxy_v - velocity_moments(free).v_mean),
        abs(closed.E_mean - energy_moments(free).E_mean),
        abs(closed.v_mean - velocity_moments(free).v_mean),
    )
    out.append(_rec("free-field limit (Lambda=1e-8 proxy and closed forms)", dev, 1e-6))

    # variant arbitration: the printed phase-index choice should hug the helix
    tight = MagneticCoherentState(
        Lambda=0.001, lambda_perp=math.sqrt(0.001), lambda3=1e-3, p1_mean=1.2, p3_mean=1.6
    )
    tspec = auto_series_spec(tight)
    hd = helix_derived(ClassicalHelix(Lambda=0.001, p_perp=1.2, p3=1.6))
    ts = np.linspace(0.0, 2.0 * hd.period, 9)
    devs = {}
    for variant in ("printed", "symmetric"):
        x1, x2 = transverse_position(tight, ts, sspec=tspec, variant=variant)
        cx1 = hd.radius * np.sin(hd.omega_B * ts)
        cx2 = hd.radius * (np.cos(hd.omega_B * ts) - 1.0)
        devs[variant] = float(max(np.max(np.abs(x1 - cx1)), np.max(np.abs(x2 - cx2))) / hd.radius)
    out.append(
        _rec(
            "printed phase variant tracks the classical helix",
            devs["printed"],
            5e-3,
            detail=f"printed {devs['printed']:.3e} vs symmetric {devs['symmetric']:.3e}",
        )
    )
    return out


def kg_field_checks() -> list[dict]:
    # initial-modulus independence of the field strength: exact in the weak-field
    # limit; Lambda=0.1 carries a genuine ~7e-3 width correction (coarse ladder),
    # so the harness guards the attainable bounds and reports both deviations
    xs = np.linspace(-12.0, 12.0, 17)
    grids = {}
    for Lam in (0.1, 1e-3, 1e-6):
        st = MagneticCoherentState(Lambda=Lam, lambda_perp=0.25, lambda3=0.25, p1_mean=0.6, p3_mean=0.8)
        spec = auto_series_spec(st, SeriesSpec(tail_tol=1e-7))
        grids[Lam] = np.array(
            [abs(kg_field(st, 0.0, abs(x), 0.0 if x >= 0 else math.pi, 0.0, sspec=spec)) ** 2 for x in xs]
        )
    peak = max(float(g.max()) for g in grids.values())
    small = float(np.max(np.abs(grids[1e-3] - grids[1e-6]))) / peak
    coarse = float(np.max(np.abs(grids[0.1] - grids[1e-6]))) / peak
    return [
        _rec("initial KG modulus field-independent in the weak-field limit", small, 1e-3),
        _rec(
            "initial KG modulus at Lambda=0.1 within its O(Lambda) width correction",
            coarse,
            1e-2,
            detail=f"Lambda=0.1 deviation {coarse:.2e} is physical (coarse-ladder width shift)",
        ),
    ]


def run_all(seed: int = 20240801, with_tables: bool = True, with_kg: bool = True) -> list[dict]:
    rng = np.random.default_rng(seed)
    records = []
    records.extend(quadrature_checks(rng))
    records.extend(specfun_checks())
    records.extend(free_checks(rng))
    records.extend(neutral_checks())
    records.extend(magnetic_checks())
    if with_kg:
        records.extend(kg_field_checks())
    if with_tables:
        records.extend(table_checks())
    return records


def table_checks() -> list[dict]:
    out = []
    rows = tables.free_energy_table()
    dev = max(max(abs(r["E_dev"]), abs(r["E_nr_dev"])) for r in rows)
    out.append(_rec("free energy table (12 cells)", dev, 1e-4))
    rows = tables.magnetic_table()
    dev = max(
        max(abs(r[k + "_dev"]) for k in ("E_ratio", "v3_ratio", "R_ratio", "R2_ratio", "dR_ratio"))
        for r in rows
    )
    out.append(_rec("uniform-field table (12 rows)", dev, 2e-3))
    rows = tables.field_sweep_table()
    dev = max(
        max(abs(r[k + "_dev"]) for k in ("E_ratio", "v3_ratio", "R_ratio", "R2_ratio", "dR_ratio"))
        for r in rows
    )
    out.append(_rec("field-strength sweep table", dev, 2e-3))
    rows = tables.nonrel_sweep_table()
    dev = max(max(abs(r["E_dev"]), abs(r["v3_dev"])) for r in rows)
    out.append(_rec("small-momentum sweep table", dev, 2e-3))
    dev_nr = max(abs(r["E_nr_dev"]) for r in rows)
    out.append(_rec("small-momentum sweep, closed-form nonrelativistic energy", dev_nr, 1e-5))
    return out
