"""Computed reproductions of the published comparison tables."""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor

from . import reference
from .classical import ClassicalHelix, helix_derived
from .freefield import FreeCoherentState, energy_moments, nonrel_moments
from .magnetic import (
    MagneticCoherentState,
    SeriesSpec,
    auto_series_spec,
    conserved_expectations,
    nonrel_expectations,
    parallel_motion,
)
from .quadrature import QuadratureSpec


def free_energy_table(qspec: QuadratureSpec = QuadratureSpec()) -> list[dict]:
    """Relativistic and nonrelativistic mean energies over classical, 12 cells."""
    rows = []
    for (p, lam), (ref_rel, ref_nr) in reference.FREE_ENERGY_TABLE.items():
        state = FreeCoherentState(lam=lam, p_mean=p)
        e_cl = math.sqrt(1.0 + p * p)
        e_cl_nr = 1.0 + p * p / 2.0
        rel = energy_moments(state, qspec).E_mean / e_cl
        nr = nonrel_moments(state, 0.0).E_mean / e_cl_nr
        rows.append(
            {
                "p_mean": p,
                "lam": lam,
                "E_ratio": rel,
                "E_ratio_ref": ref_rel,
                "E_dev": rel - ref_rel,
                "E_nr_ratio": nr,
                "E_nr_ratio_ref": ref_nr,
                "E_nr_dev": nr - ref_nr,
            }
        )
    return rows


def _magnetic_row(Lam, lperp, l3, p1, p3, ref, qspec, base_sspec):
    state = MagneticCoherentState(Lambda=Lam, lambda_perp=lperp, lambda3=l3, p1_mean=p1, p3_mean=p3)
    sspec = auto_series_spec(state, base_sspec)
    helix = helix_derived(ClassicalHelix(Lambda=Lam, p_perp=p1, p3=p3))
    ce = conserved_expectations(state, qspec, sspec)
    v3 = parallel_motion(state, 0.0, qspec, sspec).x3dot_mean
    rcl = p1 / Lam
    got = (
        ce.E_mean / helix.energy,
        v3 / (p3 / helix.energy),
        ce.R_mean / rcl,
        ce.R_sq_mean / rcl**2,
        math.sqrt(ce.R_var) / rcl,
    )
    row = {
        "Lambda": Lam,
        "lambda_perp": lperp,
        "lambda3": l3,
        "p1_mean": p1,
        "p3_mean": p3,
    }
    for name, val, rv in zip(("E_ratio", "v3_ratio", "R_ratio", "R2_ratio", "dR_ratio"), got, ref):
        row[name] = val
        row[name + "_ref"] = rv
        row[name + "_dev"] = val - rv
    return row


def magnetic_table(
    qspec: QuadratureSpec = QuadratureSpec(),
    sspec: SeriesSpec = SeriesSpec(),
    threads: int | None = None,
) -> list[dict]:
    """The Lambda = 0.01 table: 12 rows over momenta and width combinations."""
    Lam = reference.MAGNETIC_TABLE_LAMBDA
    jobs = []
    for (p1, p3), (l3, lperp), ref in reference.MAGNETIC_TABLE:
        lperp = math.sqrt(Lam) if lperp is None else lperp
        jobs.append((Lam, lperp, l3, p1, p3, ref))
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda a: _magnetic_row(*a, qspec, sspec), jobs))


def field_sweep_table(
    qspec: QuadratureSpec = QuadratureSpec(),
    sspec: SeriesSpec = SeriesSpec(),
    threads: int | None = None,
) -> list[dict]:
    """Field-strength sweep at Pi = 2: Lambda in {0.1, 1e-4}, equal widths."""
    jobs = [(Lam, w, w, 1.2, 1.6, ref) for (w, Lam), ref in reference.FIELD_SWEEP_TABLE]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda a: _magnetic_row(*a, qspec, sspec), jobs))


def nonrel_sweep_table(
    qspec: QuadratureSpec = QuadratureSpec(),
    sspec: SeriesSpec = SeriesSpec(),
    threads: int | None = None,
) -> list[dict]:
    """Small-momentum sweep (Pi = 1e-3) comparing relativistic, closed-form
    nonrelativistic, and classical energies and parallel velocities."""

    def row(args):
        (w, Lam), (ref_e, ref_enr, ref_v3) = args
        p1, p3 = 0.6e-3, 0.8e-3
        state = MagneticCoherentState(Lambda=Lam, lambda_perp=w, lambda3=w, p1_mean=p1, p3_mean=p3)
        spec = auto_series_spec(state, sspec)
        helix = helix_derived(ClassicalHelix(Lambda=Lam, p_perp=p1, p3=p3))
        ce = conserved_expectations(state, qspec, spec)
        v3 = parallel_motion(state, 0.0, qspec, spec).x3dot_mean
        e = ce.E_mean / helix.energy
        enr = nonrel_expectations(state, 0.0).E_mean / helix.energy
        v3r = v3 / (p3 / helix.energy)
        return {
            "Lambda": Lam,
            "width": w,
            "E_ratio": e,
            "E_ratio_ref": ref_e,
            "E_dev": e - ref_e,
            "E_nr_ratio": enr,
            "E_nr_ratio_ref": ref_enr,
            "E_nr_dev": enr - ref_enr,
            "v3_ratio": v3r,
            "v3_ratio_ref": ref_v3,
            "v3_dev": v3r - ref_v3,
        }

    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(row, reference.NONREL_SWEEP_TABLE))
