"""Pure-numpy fallbacks for the compiled kernels (same contracts, slower)."""

import numpy as np

BACKEND = "numpy"


def boxplus_pair(ua, va, ub, vb, off, band):
    """Box-plus of two sign/magnitude densities; see _kernels.pyx."""
    G = ua.shape[0]
    out_u = np.zeros(G)
    out_v = np.zeros(G)
    idx = np.arange(G)
    for k in range(band + 1):
        if k >= G:
            break
        m = idx[: G - k]
        ob = m + off[m, k]
        if k == 0:
            np.add.at(out_u, ob, ua[m] * ub[m])
            np.add.at(out_v, ob, va[m] * vb[m])
        else:
            np.add.at(out_u, ob, ua[m] * ub[m + k] + ua[m + k] * ub[m])
            np.add.at(out_v, ob, va[m] * vb[m + k] + va[m + k] * vb[m])
    # out-of-band pairs collapse to the smaller magnitude
    tail_ub = np.concatenate([np.cumsum(ub[::-1])[::-1], [0.0]])
    tail_vb = np.concatenate([np.cumsum(vb[::-1])[::-1], [0.0]])
    tail_ua = np.concatenate([np.cumsum(ua[::-1])[::-1], [0.0]])
    tail_va = np.concatenate([np.cumsum(va[::-1])[::-1], [0.0]])
    t = np.minimum(idx + band + 1, G)
    out_u += ua * tail_ub[t] + ub * tail_ua[t]
    out_v += va * tail_vb[t] + vb * tail_va[t]
    return out_u, out_v


_TANH_CLIP = 0.9999999999999998


def bp_decode(n, m, chk_ptr, chk_var, var_ptr, var_edge, syndrome,
              llr0, max_iters, clip):
    """Syndrome BP over the BSC error pattern; see _kernels.pyx."""
    E = chk_var.shape[0]
    mvc = np.full(E, llr0)
    edge_chk = np.repeat(np.arange(m), np.diff(chk_ptr))
    edge_var_of = np.repeat(np.arange(n), np.diff(var_ptr))
    sgn_syn = np.where(syndrome.astype(bool), -1.0, 1.0)
    z = np.zeros(n, dtype=np.uint8)
    post = np.full(n, llr0)

    for it in range(1, max_iters + 1):
        # check pass: exclusive products via per-check log-magnitude sums
        t = np.tanh(0.5 * mvc)
        mag = np.abs(t)
        np.clip(mag, 1e-300, _TANH_CLIP, out=mag)
        logmag = np.log(mag)
        neg = (t < 0).astype(np.int64)
        logsum = np.add.reduceat(logmag, chk_ptr[:-1])
        negsum = np.add.reduceat(neg, chk_ptr[:-1])
        excl_mag = np.exp(logsum[edge_chk] - logmag)
        np.clip(excl_mag, None, _TANH_CLIP, out=excl_mag)
        excl_sgn = np.where((negsum[edge_chk] - neg) & 1, -1.0, 1.0)
        mcv = sgn_syn[edge_chk] * excl_sgn * 2.0 * np.arctanh(excl_mag)
        np.clip(mcv, -clip, clip, out=mcv)
        # variable pass
        mcv_vmaj = mcv[var_edge]
        totals = llr0 + np.add.reduceat(mcv_vmaj, var_ptr[:-1])
        out = totals[edge_var_of] - mcv_vmaj
        np.clip(out, -clip, clip, out=out)
        mvc[var_edge] = out
        post = totals
        z = (totals < 0.0).astype(np.uint8)
        # syndrome check
        par = np.bitwise_xor.reduceat(z[chk_var], chk_ptr[:-1])
        if np.array_equal(par, syndrome):
            return z, True, it, post
    return z, False, max_iters, post
