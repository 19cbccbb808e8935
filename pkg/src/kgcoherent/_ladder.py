"""Pure-Python (numpy) kernels for the Landau-series weight recurrences.

These build the aggregated series weights that the magnetic module dots
against its ladder-indexed integrals. Everything is expressed through the
scaled associated-Laguerre values

    M_n^j = sqrt(n!/(n+j)!) |s|^(n+j/2) |u|^(j/2) L_n^j(u) * exp(log_pref/2),

carried by a three-term recurrence in n that is parametrized by (|s|, sign s,
s*u) only, so the matched-width limit s -> 0 at fixed s*u is regular. Columns
are renormalized by exp(+-RESCALE_LOG) whenever they drift out of double
range; the true magnitudes (which span far beyond it) are recovered in log
form at emission time.

A compiled twin of this module lives in _ladder_cy; see _backend.
"""
from __future__ import annotations

import numpy as np
from scipy.special import gammaln

RESCALE_LOG = 345.388  # ~log(1e150)
_BIG = 1e150
_TINY = 1e-150
_EXP_FLOOR = -745.0


def _start_rows(su_like: float, j_max: int, log0: float):
    """Rows n=0,1 of the scaled recurrence and the per-column log scales."""
    j = np.arange(j_max + 1, dtype=float)
    with np.errstate(divide="ignore"):
        if su_like > 0.0:
            lsc = 0.5 * (j * np.log(su_like) - gammaln(j + 1.0)) + log0
        else:
            lsc = np.where(j == 0, log0, -np.inf)
    row0 = np.ones(j_max + 1)
    return j, row0, lsc


def _step(n, j, cur, prev, abs_s, sign_s, su):
    r1 = np.sqrt(n / (n + j))
    r2 = np.sqrt(n * (n - 1) / ((n + j) * (n + j - 1)))
    return (r1 * (abs_s * (2.0 * n - 1.0 + j) - sign_s * su) * cur
            - (abs_s * abs_s) * r2 * (n - 1.0 + j) * prev) / n


def _rescale(new, cur, lsc):
    a = np.abs(new)
    hi = a > _BIG
    lo = (a > 0.0) & (a < _TINY)
    if hi.any() or lo.any():
        adj = np.where(hi, RESCALE_LOG, np.where(lo, -RESCALE_LOG, 0.0))
        f = np.exp(-adj)
        new *= f
        cur *= f
        lsc += adj
    return new, cur, lsc


def _log_abs(row):
    with np.errstate(divide="ignore"):
        return np.log(np.abs(row))


def ladder_weights(abs_s, sign_s, su, log_pref, n_max, j_max):
    """Weights W[m] of the one-index Landau ladder plus per-|ell| column totals.

    W[m] collects n!/(n+|l|)! s^(2n+|l|) u^|l| (L_n^|l|(u))^2 * exp(log_pref)
    over all (n, l in Z) whose energy index 2n+1-l+|l| equals 2m+1.
    """
    W = np.zeros(n_max + 1)
    colsum = np.zeros(j_max + 1)
    j, row0, lsc = _start_rows(su, j_max, 0.5 * log_pref)
    jidx = np.arange(j_max + 1)
    prev = row0.copy()
    cur = row0 / np.sqrt(j + 1.0) * (abs_s * (1.0 + j) - sign_s * su)

    def emit(n, row, lsc):
        ln_c = 2.0 * (lsc + _log_abs(row))
        c = np.where(ln_c > _EXP_FLOOR, np.exp(np.maximum(ln_c, _EXP_FLOOR)), 0.0)
        colsum[:] += c
        W[n] += c.sum()
        kmax = min(j_max, n_max - n)
        if kmax >= 1:
            W[n + jidx[1 : kmax + 1]] += c[1 : kmax + 1]

    emit(0, prev, lsc)
    if n_max >= 1:
        emit(1, cur, lsc)
    for n in range(2, n_max + 1):
        new = _step(n, j, cur, prev, abs_s, sign_s, su)
        emit(n, new, lsc)
        new, cur, lsc = _rescale(new, cur, lsc)
        prev, cur = cur, new
    return W, colsum


def transverse_weights(abs_s, sign_s, su, log_pref, n_max, j_max, printed=True):
    """Phase-indexed weights V[M] of the transverse-position double series.

    The first (same-n) sum contributes at M = n + l; the second (n-shifted) sum
    contributes at M = n as printed, or at M = n + l for the alternate variant.
    Returns (V, column totals of |contributions|).
    """
    if su == 0.0:
        return np.zeros(n_max + 1), np.zeros(j_max + 1)
    V = np.zeros(n_max + 1)
    colsum = np.zeros(j_max + 1)
    # columns up to j_max+1 are needed for the L^(l+1) factors
    j, row0, lsc = _start_rows(su, j_max + 1, 0.5 * log_pref)
    jshort = np.arange(j_max + 1)
    sq_inv_su = 1.0 / np.sqrt(su)
    prev = row0.copy()
    cur = row0 / np.sqrt(j + 1.0) * (abs_s * (1.0 + j) - sign_s * su)

    def emit_a(n, row, lsc):
        # A_{n,l} = sqrt((n+l+1)/su) M_n^l M_n^(l+1)  ->  V[n+l]
        ln = lsc[:-1] + lsc[1:] + _log_abs(row[:-1]) + _log_abs(row[1:])
        mag = np.where(ln > _EXP_FLOOR, np.exp(np.maximum(ln, _EXP_FLOOR)), 0.0)
        a = np.sqrt(jshort + n + 1.0) * sq_inv_su * np.sign(row[:-1]) * np.sign(row[1:]) * mag
        kmax = min(j_max, n_max - n)
        if kmax >= 0:
            V[n + jshort[: kmax + 1]] += a[: kmax + 1]
        colsum[:] += np.abs(a)

    def emit_b(n, row_hi, row_lo, lsc):
        # B_{n,l} = sign_s sqrt((n+1)/su) M_(n+1)^l M_n^(l+1)
        ln = lsc[:-1] + lsc[1:] + _log_abs(row_hi[:-1]) + _log_abs(row_lo[1:])
        mag = np.where(ln > _EXP_FLOOR, np.exp(np.maximum(ln, _EXP_FLOOR)), 0.0)
        b = sign_s * np.sqrt(n + 1.0) * sq_inv_su * np.sign(row_hi[:-1]) * np.sign(row_lo[1:]) * mag
        if printed:
            if n <= n_max:
                V[n] -= b.sum()
        else:
            kmax = min(j_max, n_max - n)
            if kmax >= 0:
                V[n + jshort[: kmax + 1]] -= b[: kmax + 1]
        colsum[:] += np.abs(b)

    emit_a(0, prev, lsc)
    if n_max + 1 >= 1:
        emit_a(1, cur, lsc)
        emit_b(0, cur, prev, lsc)
    for n in range(2, n_max + 2):
        new = _step(n, j, cur, prev, abs_s, sign_s, su)
        if n <= n_max:
            emit_a(n, new, lsc)
        emit_b(n - 1, new, cur, lsc)
        new, cur, lsc = _rescale(new, cur, lsc)
        prev, cur = cur, new
    return V, colsum


def kg_weight_matrix(abs_s, sign_s, su, v, log_pref, n_max, j_max):
    """G[j, n] weights of the coherent-KG-field double series at radial value v.

    G[j, n] = (-sign_s)^n [n!/(n+j)!] |s|^n (su*v)^(j/2) L_n^j(u) L_n^j(v)
              * exp(log_pref - v/2);
    the caller combines G with i^j e^(+-ij phi) phases and the k3 integrals.
    Also returns per-j totals of |G| for truncation certification.
    """
    G = np.zeros((j_max + 1, n_max + 1))
    colsum = np.zeros(j_max + 1)
    j, row0_u, lsc_u = _start_rows(su, j_max, 0.5 * log_pref)
    _, row0_v, lsc_v = _start_rows(v, j_max, -0.5 * v)
    prev_u = row0_u.copy()
    cur_u = row0_u / np.sqrt(j + 1.0) * (abs_s * (1.0 + j) - sign_s * su)
    prev_v = row0_v.copy()
    cur_v = row0_v / np.sqrt(j + 1.0) * (1.0 * (1.0 + j) - v)

    def emit(n, ru, rv, lu, lv):
        ln = lu + lv + _log_abs(ru) + _log_abs(rv)
        mag = np.where(ln > _EXP_FLOOR, np.exp(np.maximum(ln, _EXP_FLOOR)), 0.0)
        alt = 1.0 if n % 2 == 0 else -sign_s  # the (-s)^n alternation
        g = alt * np.sign(ru) * np.sign(rv) * mag
        G[:, n] = g
        colsum[:] += np.abs(g)

    emit(0, prev_u, prev_v, lsc_u, lsc_v)
    if n_max >= 1:
        emit(1, cur_u, cur_v, lsc_u, lsc_v)
    for n in range(2, n_max + 1):
        new_u = _step(n, j, cur_u, prev_u, abs_s, sign_s, su)
        new_v = _step(n, j, cur_v, prev_v, 1.0, 1.0, v)
        emit(n, new_u, new_v, lsc_u, lsc_v)
        new_u, cur_u, lsc_u = _rescale(new_u, cur_u, lsc_u)
        new_v, cur_v, lsc_v = _rescale(new_v, cur_v, lsc_v)
        prev_u, cur_u = cur_u, new_u
        prev_v, cur_v = cur_v, new_v
    return G, colsum
