"""Compiled ray-lattice traversal kernels.

Both entry points below funnel every candidate sphere through the same
``_sphere_entry_time`` helper, so the marching path and the brute-force
enumeration path are bit-for-bit comparable on identical inputs; they differ
only in how candidate lattice points are generated.
"""

import math

import numba as nb
import numpy as np

__all__ = ["march_batch", "brute_batch"]


@nb.njit(inline="always")
def _sphere_entry_time(z, q, v, m, alpha_m, identity, r, wbuf):
    """Entry time of ray (q, v) into the sphere of radius r centred on
    lattice point z (center = z @ m + alpha_m).  Returns -1.0 for a miss.

    The perpendicular part is formed as w - <w,v> v rather than via
    ||w||^2 - <w,v>^2, which stays accurate when ||w|| is large.
    A zero discriminant (tangency) counts as a hit.
    """
    d = q.shape[0]
    for a in range(d):
        if identity:
            c = float(z[a]) + alpha_m[a]
        else:
            s = alpha_m[a]
            for bb in range(d):
                s += z[bb] * m[bb, a]
            c = s
        wbuf[a] = c - q[a]
    b_dot = 0.0
    for a in range(d):
        b_dot += wbuf[a] * v[a]
    if b_dot <= 0.0:
        return -1.0
    p2 = 0.0
    for a in range(d):
        pc = wbuf[a] - b_dot * v[a]
        p2 += pc * pc
    disc = r * r - p2
    if disc < 0.0:
        return -1.0
    return b_dot - math.sqrt(disc)


@nb.njit(cache=True)
def march_batch(
    qs, vs, m, minv, alpha, alpha_m, identity, r, h_lat, window, t_max,
    out_tau, out_cens, out_z, out_cos,
):
    """Exact first-hit search by marching along each ray in lattice
    coordinates with step h_lat, testing the precomputed neighbour window
    around the rounded anchor point at every step.

    The window is sized so that no sphere within r of the swept segment can
    be missed; a best hit at t* is only finalized once the march frontier
    exceeds t* + r.  Flights with no hit at or before t_max are censored
    with tau = t_max.
    """
    n, d = qs.shape
    nw = window.shape[0]
    wbuf = np.empty(d)
    nk = np.empty(d, dtype=np.int64)
    zc = np.empty(d, dtype=np.int64)
    best_z = np.empty(d, dtype=np.int64)
    for i in range(n):
        q = qs[i]
        v = vs[i]
        # lattice-frame speed ||v M^-1|| sets the time step per h_lat
        s2 = 0.0
        for a in range(d):
            s = 0.0
            for bb in range(d):
                s += v[bb] * minv[bb, a]
            s2 += s * s
        dt = h_lat / math.sqrt(s2)
        best_t = np.inf
        found = False
        t_front = 0.0
        first = True
        while True:
            changed = first
            for a in range(d):
                s = 0.0
                for bb in range(d):
                    s += (q[bb] + t_front * v[bb]) * minv[bb, a]
                za = np.int64(round(s - alpha[a]))
                if first or za != nk[a]:
                    changed = True
                nk[a] = za
            first = False
            if changed:
                # unchanged anchor means an identical candidate set; skip it
                for j in range(nw):
                    for a in range(d):
                        zc[a] = nk[a] + window[j, a]
                    ts = _sphere_entry_time(zc, q, v, m, alpha_m, identity, r, wbuf)
                    if 0.0 < ts <= t_max and ts < best_t:
                        best_t = ts
                        found = True
                        for a in range(d):
                            best_z[a] = zc[a]
            t_front += dt
            if found and best_t + r < t_front:
                break
            if t_front > t_max:
                break
        if found:
            out_tau[i] = best_t
            out_cens[i] = False
            dotvn = 0.0
            for a in range(d):
                if identity:
                    c = float(best_z[a]) + alpha_m[a]
                else:
                    s = alpha_m[a]
                    for bb in range(d):
                        s += best_z[bb] * m[bb, a]
                    c = s
                out_z[i, a] = best_z[a]
                dotvn += v[a] * ((q[a] + best_t * v[a]) - c)
            out_cos[i] = -dotvn / r
        else:
            out_tau[i] = t_max
            out_cens[i] = True
            for a in range(d):
                out_z[i, a] = 0
            out_cos[i] = np.nan


@nb.njit(cache=True)
def brute_batch(
    qs, vs, m, alpha_m, identity, r, t_max, cand,
    out_tau, out_cens, out_z, out_cos,
):
    """First-hit search by exhaustive scan over the candidate lattice points
    in ``cand``; the testing oracle for :func:`march_batch`."""
    n, d = qs.shape
    nc = cand.shape[0]
    wbuf = np.empty(d)
    for i in range(n):
        q = qs[i]
        v = vs[i]
        best_t = np.inf
        best_j = -1
        for j in range(nc):
            ts = _sphere_entry_time(cand[j], q, v, m, alpha_m, identity, r, wbuf)
            if 0.0 < ts <= t_max and ts < best_t:
                best_t = ts
                best_j = j
        if best_j >= 0:
            out_tau[i] = best_t
            out_cens[i] = False
            dotvn = 0.0
            for a in range(d):
                if identity:
                    c = float(cand[best_j, a]) + alpha_m[a]
                else:
                    s = alpha_m[a]
                    for bb in range(d):
                        s += cand[best_j, bb] * m[bb, a]
                    c = s
                out_z[i, a] = cand[best_j, a]
                dotvn += v[a] * ((q[a] + best_t * v[a]) - c)
            out_cos[i] = -dotvn / r
        else:
            out_tau[i] = t_max
            out_cens[i] = True
            for a in range(d):
                out_z[i, a] = 0
            out_cos[i] = np.nan
