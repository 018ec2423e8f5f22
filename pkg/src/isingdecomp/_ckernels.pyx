# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops.  Semantics are pinned by ``_pykernels``; both
backends must return bit-identical results for identical inputs."""

import numpy as np
cimport numpy as cnp
from libc.math cimport exp, fabs
from libc.stdlib cimport malloc, free

cnp.import_array()


def anneal_sweeps(const double[:, ::1] J, double[::1] fields, double energy,
                  const signed char[::1] init, const double[::1] betas,
                  const double[:, ::1] uniforms):
    cdef Py_ssize_t n = init.shape[0]
    cdef Py_ssize_t sweeps = betas.shape[0]
    cdef Py_ssize_t t, i, j
    cdef double beta, de, ds, best_energy = energy
    cdef signed char si

    state_arr = np.array(init, dtype=np.int8)
    best_arr = state_arr.copy()
    cdef signed char[::1] s = state_arr
    cdef signed char[::1] best = best_arr
    cdef double[::1] f = fields

    for t in range(sweeps):
        beta = betas[t]
        for i in range(n):
            si = s[i]
            de = 2.0 * si * f[i]
            if de <= 0.0 or uniforms[t, i] < exp(-beta * de):
                s[i] = -si
                ds = -2.0 * si
                for j in range(n):
                    f[j] += J[i, j] * ds
                energy += de
                if energy <= best_energy:
                    best_energy = energy
                    best[:] = s
    return best_arr


cdef long long _gray_scan(const double[:, ::1] J, const double[::1] h, Py_ssize_t k,
                          double threshold, double* out_min) nogil:
    # threshold < +inf: return the smallest code whose total <= threshold
    # threshold == +inf: return -1 and write the minimum total to out_min
    cdef Py_ssize_t n = h.shape[0]
    cdef Py_ssize_t i, j, b
    cdef long long t, code = 0, best_code = -1, total_steps = (<long long>1) << k
    cdef double e_enum = 0.0, total, best = 1e308, ds
    cdef double* f = <double*> 0
    cdef signed char* s = <signed char*> 0
    f = <double*> malloc(n * sizeof(double))
    s = <signed char*> malloc(n * sizeof(signed char))

    # start at code 0: all enumerated spins -1
    for i in range(n):
        s[i] = -1
    for i in range(n):
        f[i] = h[i]
        for j in range(k):
            f[i] -= J[i, j]
    for i in range(k):
        e_enum += h[i]
        for j in range(i + 1, k):
            e_enum -= J[i, j]

    t = 0
    while True:
        total = e_enum
        for i in range(k, n):
            total -= fabs(f[i])
        if threshold < 1e308:
            if total <= threshold and (best_code < 0 or code < best_code):
                best_code = code
        elif total < best:
            best = total
        t += 1
        if t >= total_steps:
            break
        b = 0
        while ((t >> b) & 1) == 0:
            b += 1
        i = k - 1 - b
        e_enum += 2.0 * s[i] * f[i]
        ds = -2.0 * s[i]
        s[i] = -s[i]
        for j in range(n):
            f[j] += J[i, j] * ds
        code ^= (<long long>1) << b

    free(f)
    free(s)
    out_min[0] = best
    return best_code


def exhaustive_code(const double[:, ::1] J, const double[::1] h, Py_ssize_t k, double tol):
    cdef double emin = 0.0, dummy = 0.0
    cdef long long code
    with nogil:
        _gray_scan(J, h, k, 1e308, &emin)
        code = _gray_scan(J, h, k, emin + tol * max(1.0, fabs(emin)), &dummy)
    return code, emin


def clamp_fields(const long long[::1] row_ptr, const long long[::1] col_idx,
                 const double[::1] values, const double[::1] h,
                 const long long[::1] free_ids, const unsigned char[::1] is_free,
                 const signed char[::1] s_global):
    cdef Py_ssize_t k = free_ids.shape[0]
    cdef Py_ssize_t a, p, i, j
    cdef double acc
    out_arr = np.empty(k, dtype=np.float64)
    cdef double[::1] out = out_arr
    for a in range(k):
        i = free_ids[a]
        acc = h[i]
        for p in range(row_ptr[i], row_ptr[i + 1]):
            j = col_idx[p]
            if not is_free[j]:
                acc += values[p] * s_global[j]
        out[a] = acc
    return out_arr
