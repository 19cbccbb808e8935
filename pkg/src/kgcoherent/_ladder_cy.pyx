# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled kernels for the Landau-series weight recurrences.

Same algorithm and contracts as the pure-Python module _ladder; see there for
the scaling scheme. The sequential-in-n three-term recurrences are the hot
loops of the package, so they are written as plain C loops here.
"""
import numpy as np

cimport numpy as cnp
from libc.math cimport exp, fabs, log, sqrt

cnp.import_array()

cdef double RESCALE_LOG = 345.388
cdef double BIG = 1e150
cdef double TINY = 1e-150
cdef double EXP_FLOOR = -745.0


cdef void _start_scales(double su_like, double log0, double[::1] lsc, Py_ssize_t jn):
    # lsc[j] = 0.5*(j*log(su_like) - lgamma(j+1)) + log0, via running sum
    cdef Py_ssize_t j
    cdef double acc = 0.0
    if su_like > 0.0:
        lsc[0] = log0
        for j in range(1, jn):
            acc += log(su_like) - log(<double> j)
            lsc[j] = 0.5 * acc + log0
    else:
        lsc[0] = log0
        for j in range(1, jn):
            lsc[j] = -1e308


cdef inline double _sgn(double x):
    if x > 0.0:
        return 1.0
    elif x < 0.0:
        return -1.0
    return 0.0


cdef inline double _logabs(double x):
    if x == 0.0:
        return -1e308
    return log(fabs(x))


def ladder_weights(double abs_s, double sign_s, double su, double log_pref,
                   Py_ssize_t n_max, Py_ssize_t j_max):
    """See _ladder.ladder_weights."""
    cdef cnp.ndarray[double, ndim=1] W_arr = np.zeros(n_max + 1)
    cdef cnp.ndarray[double, ndim=1] col_arr = np.zeros(j_max + 1)
    cdef double[::1] W = W_arr
    cdef double[::1] colsum = col_arr
    cdef Py_ssize_t jn = j_max + 1
    cdef double[::1] lsc = np.empty(jn)
    cdef double[::1] prev = np.empty(jn)
    cdef double[::1] cur = np.empty(jn)
    cdef double[::1] new = np.empty(jn)
    cdef Py_ssize_t n, j
    cdef double dj, a, r1, r2, s2 = abs_s * abs_s

    _start_scales(su, 0.5 * log_pref, lsc, jn)
    for j in range(jn):
        dj = <double> j
        prev[j] = 1.0
        cur[j] = (abs_s * (1.0 + dj) - sign_s * su) / sqrt(dj + 1.0)

    _emit_ladder_row(0, prev, lsc, W, colsum, n_max, j_max)
    if n_max >= 1:
        _emit_ladder_row(1, cur, lsc, W, colsum, n_max, j_max)
    for n in range(2, n_max + 1):
        for j in range(jn):
            dj = <double> j
            r1 = sqrt(n / (n + dj))
            r2 = sqrt(n * (n - 1.0) / ((n + dj) * (n + dj - 1.0)))
            new[j] = (r1 * (abs_s * (2.0 * n - 1.0 + dj) - sign_s * su) * cur[j]
                      - s2 * r2 * (n - 1.0 + dj) * prev[j]) / n
        _emit_ladder_row(n, new, lsc, W, colsum, n_max, j_max)
        for j in range(jn):
            a = fabs(new[j])
            if a > BIG:
                new[j] *= exp(-RESCALE_LOG)
                cur[j] *= exp(-RESCALE_LOG)
                lsc[j] += RESCALE_LOG
            elif a > 0.0 and a < TINY:
                new[j] *= exp(RESCALE_LOG)
                cur[j] *= exp(RESCALE_LOG)
                lsc[j] -= RESCALE_LOG
            prev[j] = cur[j]
            cur[j] = new[j]
    return W_arr, col_arr


cdef void _emit_ladder_row(Py_ssize_t n, double[::1] row, double[::1] lsc,
                           double[::1] W, double[::1] colsum,
                           Py_ssize_t n_max, Py_ssize_t j_max):
    cdef Py_ssize_t j
    cdef double lnc, c
    for j in range(j_max + 1):
        lnc = 2.0 * (lsc[j] + _logabs(row[j]))
        c = exp(lnc) if lnc > EXP_FLOOR else 0.0
        colsum[j] += c
        W[n] += c
        if j >= 1 and n + j <= n_max:
            W[n + j] += c


def transverse_weights(double abs_s, double sign_s, double su, double log_pref,
                       Py_ssize_t n_max, Py_ssize_t j_max, bint printed=True):
    """See _ladder.transverse_weights."""
    cdef cnp.ndarray[double, ndim=1] V_arr = np.zeros(n_max + 1)
    cdef cnp.ndarray[double, ndim=1] col_arr = np.zeros(j_max + 1)
    if su == 0.0:
        return V_arr, col_arr
    cdef double[::1] V = V_arr
    cdef double[::1] colsum = col_arr
    cdef Py_ssize_t jn = j_max + 2  # one extra column for L^(l+1)
    cdef double[::1] lsc = np.empty(jn)
    cdef double[::1] prev = np.empty(jn)
    cdef double[::1] cur = np.empty(jn)
    cdef double[::1] new = np.empty(jn)
    cdef Py_ssize_t n, j
    cdef double dj, a, lnv, mag, term, r1, r2
    cdef double s2 = abs_s * abs_s, inv_sqrt_su = 1.0 / sqrt(su)

    _start_scales(su, 0.5 * log_pref, lsc, jn)
    for j in range(jn):
        dj = <double> j
        prev[j] = 1.0
        cur[j] = (abs_s * (1.0 + dj) - sign_s * su) / sqrt(dj + 1.0)

    _emit_A(0, prev, lsc, V, colsum, n_max, j_max, inv_sqrt_su)
    _emit_A(1, cur, lsc, V, colsum, n_max, j_max, inv_sqrt_su)
    _emit_B(0, cur, prev, lsc, V, colsum, n_max, j_max, inv_sqrt_su, sign_s, printed)
    for n in range(2, n_max + 2):
        for j in range(jn):
            dj = <double> j
            r1 = sqrt(n / (n + dj))
            r2 = sqrt(n * (n - 1.0) / ((n + dj) * (n + dj - 1.0)))
            new[j] = (r1 * (abs_s * (2.0 * n - 1.0 + dj) - sign_s * su) * cur[j]
                      - s2 * r2 * (n - 1.0 + dj) * prev[j]) / n
        if n <= n_max:
            _emit_A(n, new, lsc, V, colsum, n_max, j_max, inv_sqrt_su)
        _emit_B(n - 1, new, cur, lsc, V, colsum, n_max, j_max, inv_sqrt_su, sign_s, printed)
        for j in range(jn):
            a = fabs(new[j])
            if a > BIG:
                new[j] *= exp(-RESCALE_LOG)
                cur[j] *= exp(-RESCALE_LOG)
                lsc[j] += RESCALE_LOG
            elif a > 0.0 and a < TINY:
                new[j] *= exp(RESCALE_LOG)
                cur[j] *= exp(RESCALE_LOG)
                lsc[j] -= RESCALE_LOG
            prev[j] = cur[j]
            cur[j] = new[j]
    return V_arr, col_arr


cdef void _emit_A(Py_ssize_t n, double[::1] row, double[::1] lsc,
                  double[::1] V, double[::1] colsum,
                  Py_ssize_t n_max, Py_ssize_t j_max, double inv_sqrt_su):
    # A_{n,l} = sqrt((n+l+1)/su) M_n^l M_n^(l+1)  ->  V[n+l]
    cdef Py_ssize_t j
    cdef double lnv, mag, term
    if n > n_max:
        return
    for j in range(j_max + 1):
        lnv = lsc[j] + lsc[j + 1] + _logabs(row[j]) + _logabs(row[j + 1])
        mag = exp(lnv) if lnv > EXP_FLOOR else 0.0
        term = sqrt((n + j + 1.0)) * inv_sqrt_su * _sgn(row[j]) * _sgn(row[j + 1]) * mag
        if n + j <= n_max:
            V[n + j] += term
        colsum[j] += fabs(term)


cdef void _emit_B(Py_ssize_t n, double[::1] row_hi, double[::1] row_lo, double[::1] lsc,
                  double[::1] V, double[::1] colsum,
                  Py_ssize_t n_max, Py_ssize_t j_max, double inv_sqrt_su,
                  double sign_s, bint printed):
    # B_{n,l} = sign_s sqrt((n+1)/su) M_(n+1)^l M_n^(l+1)
    cdef Py_ssize_t j
    cdef double lnv, mag, term
    for j in range(j_max + 1):
        lnv = lsc[j] + lsc[j + 1] + _logabs(row_hi[j]) + _logabs(row_lo[j + 1])
        mag = exp(lnv) if lnv > EXP_FLOOR else 0.0
        term = sign_s * sqrt(n + 1.0) * inv_sqrt_su * _sgn(row_hi[j]) * _sgn(row_lo[j + 1]) * mag
        if printed:
            if n <= n_max:
                V[n] -= term
        else:
            if n + j <= n_max:
                V[n + j] -= term
        colsum[j] += fabs(term)


def kg_weight_matrix(double abs_s, double sign_s, double su, double v, double log_pref,
                     Py_ssize_t n_max, Py_ssize_t j_max):
    """See _ladder.kg_weight_matrix."""
    cdef cnp.ndarray[double, ndim=2] G_arr = np.zeros((j_max + 1, n_max + 1))
    cdef cnp.ndarray[double, ndim=1] col_arr = np.zeros(j_max + 1)
    cdef double[:, ::1] G = G_arr
    cdef double[::1] colsum = col_arr
    cdef Py_ssize_t jn = j_max + 1
    cdef double[::1] lsc_u = np.empty(jn)
    cdef double[::1] lsc_v = np.empty(jn)
    cdef double[::1] pu = np.empty(jn)
    cdef double[::1] cu = np.empty(jn)
    cdef double[::1] pv = np.empty(jn)
    cdef double[::1] cv = np.empty(jn)
    cdef double[::1] nu = np.empty(jn)
    cdef double[::1] nv = np.empty(jn)
    cdef Py_ssize_t n, j
    cdef double dj, a, lnv, mag, alt, r1, r2
    cdef double s2 = abs_s * abs_s

    _start_scales(su, 0.5 * log_pref, lsc_u, jn)
    _start_scales(v, -0.5 * v, lsc_v, jn)
    for j in range(jn):
        dj = <double> j
        pu[j] = 1.0
        cu[j] = (abs_s * (1.0 + dj) - sign_s * su) / sqrt(dj + 1.0)
        pv[j] = 1.0
        cv[j] = ((1.0 + dj) - v) / sqrt(dj + 1.0)

    _emit_G(0, pu, pv, lsc_u, lsc_v, G, colsum, j_max, 1.0)
    if n_max >= 1:
        _emit_G(1, cu, cv, lsc_u, lsc_v, G, colsum, j_max, -sign_s)
    for n in range(2, n_max + 1):
        for j in range(jn):
            dj = <double> j
            r1 = sqrt(n / (n + dj))
            r2 = sqrt(n * (n - 1.0) / ((n + dj) * (n + dj - 1.0)))
            nu[j] = (r1 * (abs_s * (2.0 * n - 1.0 + dj) - sign_s * su) * cu[j]
                     - s2 * r2 * (n - 1.0 + dj) * pu[j]) / n
            nv[j] = (r1 * ((2.0 * n - 1.0 + dj) - v) * cv[j]
                     - r2 * (n - 1.0 + dj) * pv[j]) / n
        alt = 1.0 if n % 2 == 0 else -sign_s
        _emit_G(n, nu, nv, lsc_u, lsc_v, G, colsum, j_max, alt)
        for j in range(jn):
            a = fabs(nu[j])
            if a > BIG:
                nu[j] *= exp(-RESCALE_LOG)
                cu[j] *= exp(-RESCALE_LOG)
                lsc_u[j] += RESCALE_LOG
            elif a > 0.0 and a < TINY:
                nu[j] *= exp(RESCALE_LOG)
                cu[j] *= exp(RESCALE_LOG)
                lsc_u[j] -= RESCALE_LOG
            a = fabs(nv[j])
            if a > BIG:
                nv[j] *= exp(-RESCALE_LOG)
                cv[j] *= exp(-RESCALE_LOG)
                lsc_v[j] += RESCALE_LOG
            elif a > 0.0 and a < TINY:
                nv[j] *= exp(RESCALE_LOG)
                cv[j] *= exp(RESCALE_LOG)
                lsc_v[j] -= RESCALE_LOG
            pu[j] = cu[j]
            cu[j] = nu[j]
            pv[j] = cv[j]
            cv[j] = nv[j]
    return G_arr, col_arr


cdef void _emit_G(Py_ssize_t n, double[::1] ru, double[::1] rv,
                  double[::1] lu, double[::1] lv,
                  double[:, ::1] G, double[::1] colsum, Py_ssize_t j_max, double alt):
    cdef Py_ssize_t j
    cdef double lnv, mag, g
    for j in range(j_max + 1):
        lnv = lu[j] + lv[j] + _logabs(ru[j]) + _logabs(rv[j])
        mag = exp(lnv) if lnv > EXP_FLOOR else 0.0
        g = alt * _sgn(ru[j]) * _sgn(rv[j]) * mag
        G[j, n] = g
        colsum[j] += fabs(g)
