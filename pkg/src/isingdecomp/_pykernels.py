"""Pure-Python/numpy implementations of the compiled kernels.

Used when the extension is not built, and as the reference the compiled
versions are checked against.  ``anneal_sweeps`` and ``clamp_fields``
perform the same floating-point operations in the same order as the
compiled code, so their outputs are bit-identical.
"""

from __future__ import annotations

import math

import numpy as np

_CHUNK = 1 << 15


def anneal_sweeps(J, fields, energy, init, betas, uniforms):
    n = init.shape[0]
    s = [int(x) for x in init]
    best = list(s)
    best_energy = energy
    f = np.array(fields, dtype=np.float64)
    exp = math.exp
    for t in range(betas.shape[0]):
        beta = float(betas[t])
        u_row = uniforms[t].tolist()
        for i in range(n):
            si = s[i]
            de = 2.0 * si * f[i]
            if de <= 0.0 or u_row[i] < exp(-beta * de):
                s[i] = -si
                f += J[i] * (-2.0 * si)
                energy += de
                if energy <= best_energy:
                    best_energy = energy
                    best = list(s)
    return np.array(best, dtype=np.int8)


def _chunk_totals(J, h, k, codes):
    shifts = np.arange(k - 1, -1, -1, dtype=np.int64)
    S = (((codes[:, None] >> shifts) & 1) * 2 - 1).astype(np.float64)
    J_ee = J[:k, :k]
    e_enum = -0.5 * np.einsum("ij,ij->i", S @ J_ee, S) - S @ h[:k]
    if k == J.shape[0]:
        return e_enum
    tail = h[k:] + S @ J[:k, k:]
    return e_enum - np.abs(tail).sum(axis=1)


def exhaustive_code(J, h, k, tol):
    total_codes = 1 << k
    emin = math.inf
    for lo in range(0, total_codes, _CHUNK):
        codes = np.arange(lo, min(lo + _CHUNK, total_codes), dtype=np.int64)
        emin = min(emin, float(_chunk_totals(J, h, k, codes).min()))
    threshold = emin + tol * max(1.0, abs(emin))
    for lo in range(0, total_codes, _CHUNK):
        codes = np.arange(lo, min(lo + _CHUNK, total_codes), dtype=np.int64)
        hits = np.flatnonzero(_chunk_totals(J, h, k, codes) <= threshold)
        if hits.size:
            return int(codes[hits[0]]), emin
    raise AssertionError("minimum not recovered on second pass")


def clamp_fields(row_ptr, col_idx, values, h, free_ids, is_free, s_global):
    out = np.empty(free_ids.shape[0], dtype=np.float64)
    for a, i in enumerate(free_ids.tolist()):
        acc = float(h[i])
        for p in range(int(row_ptr[i]), int(row_ptr[i + 1])):
            j = int(col_idx[p])
            if not is_free[j]:
                acc += float(values[p]) * int(s_global[j])
        out[a] = acc
    return out
