# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot kernels: BP message passing and banded box-plus density ops.

The pure-python equivalents live in _kernels_np.py; qkdrec.backend picks
whichever is importable.  Both implement the same contracts.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport atanh, tanh

cnp.import_array()

BACKEND = "cython"


def boxplus_pair(double[::1] ua, double[::1] va,
                 double[::1] ub, double[::1] vb,
                 short[:, ::1] off, int band):
    """Box-plus combination of two sign/magnitude message densities.

    ``u``/``v`` are the even/odd sign components over quantized LLR
    magnitudes 0..G-1.  ``off[m, k]`` is the quantized output offset from
    ``min`` for a pair at magnitudes (m, m+k); pairs further apart than
    ``band`` combine to exactly ``min``.
    """
    cdef Py_ssize_t G = ua.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out_u_arr = np.zeros(G)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out_v_arr = np.zeros(G)
    cdef double[::1] out_u = out_u_arr
    cdef double[::1] out_v = out_v_arr
    # suffix sums for the out-of-band (output == min) region
    cdef cnp.ndarray[cnp.float64_t, ndim=1] tua = np.zeros(G + 1)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] tva = np.zeros(G + 1)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] tub = np.zeros(G + 1)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] tvb = np.zeros(G + 1)
    cdef double[::1] ta_u = tua, ta_v = tva, tb_u = tub, tb_v = tvb
    cdef Py_ssize_t i, j, k, ob, jhi, tail
    cdef double uai, vai

    for i in range(G - 1, -1, -1):
        ta_u[i] = ta_u[i + 1] + ua[i]
        ta_v[i] = ta_v[i + 1] + va[i]
        tb_u[i] = tb_u[i + 1] + ub[i]
        tb_v[i] = tb_v[i + 1] + vb[i]

    for i in range(G):
        uai = ua[i]
        vai = va[i]
        # in-band pairs where i is the smaller magnitude: j = i..i+band
        jhi = i + band + 1
        if jhi > G:
            jhi = G
        ob = i + off[i, 0]
        out_u[ob] += uai * ub[i]
        out_v[ob] += vai * vb[i]
        for j in range(i + 1, jhi):
            k = j - i
            ob = i + off[i, k]
            out_u[ob] += uai * ub[j] + ua[j] * ub[i]
            out_v[ob] += vai * vb[j] + va[j] * vb[i]
        # out-of-band: min(i, j) == i exactly
        tail = i + band + 1
        if tail < G:
            out_u[i] += uai * tb_u[tail] + ub[i] * ta_u[tail]
            out_v[i] += vai * tb_v[tail] + vb[i] * ta_v[tail]
    return out_u_arr, out_v_arr


def bp_decode(int n, int m,
              int[::1] chk_ptr, int[::1] chk_var,
              int[::1] var_ptr, int[::1] var_edge,
              cnp.uint8_t[::1] syndrome,
              double llr0, int max_iters, double clip):
    """Syndrome BP over the BSC error pattern: find z with H z = syndrome.

    Channel LLR is +llr0 at every variable (z = 0 a priori more likely).
    Returns (z, converged, iterations, posterior).
    """
    cdef Py_ssize_t E = chk_var.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] mvc_arr = np.full(E, llr0)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] mcv_arr = np.zeros(E)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] post_arr = np.zeros(n)
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] z_arr = np.zeros(n, dtype=np.uint8)
    cdef double[::1] mvc = mvc_arr
    cdef double[::1] mcv = mcv_arr
    cdef double[::1] post = post_arr
    cdef cnp.uint8_t[::1] z = z_arr

    cdef int maxdeg = 0, deg
    cdef Py_ssize_t c, v, e, j, it
    for c in range(m):
        deg = chk_ptr[c + 1] - chk_ptr[c]
        if deg > maxdeg:
            maxdeg = deg
    cdef cnp.ndarray[cnp.float64_t, ndim=1] buf_arr = np.zeros(maxdeg)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] pre_arr = np.zeros(maxdeg + 1)
    cdef double[::1] t = buf_arr
    cdef double[::1] pre = pre_arr
    cdef double suf, total, x, sgn
    cdef bint ok
    cdef int parity

    for it in range(1, max_iters + 1):
        # check pass: exclusive tanh products via prefix/suffix
        for c in range(m):
            deg = chk_ptr[c + 1] - chk_ptr[c]
            sgn = -1.0 if syndrome[c] else 1.0
            pre[0] = 1.0
            for j in range(deg):
                t[j] = tanh(0.5 * mvc[chk_ptr[c] + j])
                pre[j + 1] = pre[j] * t[j]
            suf = 1.0
            for j in range(deg - 1, -1, -1):
                x = sgn * pre[j] * suf
                if x > 0.9999999999999998:
                    x = 0.9999999999999998
                elif x < -0.9999999999999998:
                    x = -0.9999999999999998
                x = 2.0 * atanh(x)
                if x > clip:
                    x = clip
                elif x < -clip:
                    x = -clip
                mcv[chk_ptr[c] + j] = x
                suf *= t[j]
        # variable pass + hard decision
        for v in range(n):
            total = llr0
            for j in range(var_ptr[v], var_ptr[v + 1]):
                total += mcv[var_edge[j]]
            for j in range(var_ptr[v], var_ptr[v + 1]):
                e = var_edge[j]
                x = total - mcv[e]
                if x > clip:
                    x = clip
                elif x < -clip:
                    x = -clip
                mvc[e] = x
            post[v] = total
            z[v] = 1 if total < 0.0 else 0
        # stop when the tentative pattern matches the target syndrome
        ok = True
        for c in range(m):
            parity = 0
            for j in range(chk_ptr[c], chk_ptr[c + 1]):
                parity ^= z[chk_var[j]]
            if parity != syndrome[c]:
                ok = False
                break
        if ok:
            return z_arr, True, it, post_arr
    return z_arr, False, max_iters, post_arr
