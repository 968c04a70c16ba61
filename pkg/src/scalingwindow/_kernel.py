"""Compiled inner loop of the component exploration.

Mirrors :class:`scalingwindow.exploration.Exploration` step for step and
consumes the same stream of uniforms, so both produce identical trajectories
for the same generator state.
"""

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def _remove(pool, pos, size, c):
    i = pos[c]
    last = pool[size - 1]
    pool[i] = last
    pos[last] = i
    pos[c] = -1
    return size - 1


@njit(cache=True, nogil=True)
def explore_kernel(deg, owner, offsets, start, uniforms, record_trace, record_matching):
    n = deg.shape[0]
    m2 = owner.shape[0]
    n_edges = m2 // 2
    max_steps = n_edges + n

    pool = np.arange(m2)
    pos = np.arange(m2)
    size = m2
    queue = np.empty(m2, dtype=np.int64)
    head = 0
    tail = 0
    in_c = np.zeros(n, dtype=np.bool_)

    s1 = 0
    s2 = 0
    s3 = 0
    sr = 0
    for v in range(n):
        d = deg[v]
        s1 += d
        s2 += d * d
        s3 += d * d * d
        sr += d * (d - 2) * (d - 2)

    comp_vertices = np.zeros(n, dtype=np.int64)
    comp_edges = np.zeros(n, dtype=np.int64)
    n_comp = 0

    if record_trace:
        tr_len = max_steps + 1
    else:
        tr_len = 0
    tr_y = np.zeros(tr_len, dtype=np.int64)
    tr_d = np.zeros(tr_len, dtype=np.int64)
    tr_q = np.zeros(tr_len, dtype=np.float64)
    tr_r = np.zeros(tr_len, dtype=np.float64)
    tr_eta = np.zeros(tr_len, dtype=np.int64)
    tr_comp = np.zeros(tr_len, dtype=np.int64)
    tr_new = np.full(tr_len, -1, dtype=np.int64)

    if record_matching:
        match = np.empty((n_edges, 2), dtype=np.int64)
    else:
        match = np.empty((0, 2), dtype=np.int64)
    n_match = 0

    # step 1: C_0 = {start}
    d = deg[start]
    in_c[start] = True
    s1 -= d
    s2 -= d * d
    s3 -= d * d * d
    sr -= d * (d - 2) * (d - 2)
    for c in range(offsets[start], offsets[start + 1]):
        queue[tail] = c
        tail += 1
    y = d
    comp_vertices[0] = 1
    n_comp = 1
    t = 0
    k = 0
    if record_trace:
        dt = y + s1
        tr_y[0] = y
        tr_d[0] = dt
        tr_new[0] = start
        if dt > 1:
            tr_q[0] = s2 / (dt - 1) - 2.0
            tr_r[0] = (4.0 * (y - 1) + sr) / (dt - 1)
        else:
            tr_q[0] = np.nan
            tr_r[0] = np.nan

    while size > 0:
        new_v = -1
        if y == 0:
            idx = int(uniforms[k] * size)
            k += 1
            if idx >= size:
                idx = size - 1
            u = owner[pool[idx]]
            d = deg[u]
            in_c[u] = True
            s1 -= d
            s2 -= d * d
            s3 -= d * d * d
            sr -= d * (d - 2) * (d - 2)
            for c in range(offsets[u], offsets[u + 1]):
                queue[tail] = c
                tail += 1
            eta = d
            y = d
            comp_vertices[n_comp] = 1
            n_comp += 1
            new_v = u
        else:
            c = queue[head]
            head += 1
            while pos[c] < 0:
                c = queue[head]
                head += 1
            size = _remove(pool, pos, size, c)
            idx = int(uniforms[k] * size)
            k += 1
            if idx >= size:
                idx = size - 1
            p = pool[idx]
            size = _remove(pool, pos, size, p)
            if record_matching:
                if c < p:
                    match[n_match, 0] = c
                    match[n_match, 1] = p
                else:
                    match[n_match, 0] = p
                    match[n_match, 1] = c
                n_match += 1
            comp_edges[n_comp - 1] += 1
            u = owner[p]
            if not in_c[u]:
                d = deg[u]
                in_c[u] = True
                s1 -= d
                s2 -= d * d
                s3 -= d * d * d
                sr -= d * (d - 2) * (d - 2)
                for cc in range(offsets[u], offsets[u + 1]):
                    if cc != p:
                        queue[tail] = cc
                        tail += 1
                eta = d - 2
                comp_vertices[n_comp - 1] += 1
                new_v = u
            else:
                eta = -2
            y += eta
        t += 1
        if record_trace:
            dt = y + s1
            tr_y[t] = y
            tr_d[t] = dt
            tr_eta[t] = eta
            tr_comp[t] = n_comp - 1
            tr_new[t] = new_v
            if dt > 1:
                tr_q[t] = s2 / (dt - 1) - 2.0
                tr_r[t] = (4.0 * (y - 1) + sr) / (dt - 1)
            else:
                tr_q[t] = np.nan
                tr_r[t] = np.nan

    tl = t + 1 if record_trace else 0
    return (
        comp_vertices[:n_comp].copy(),
        comp_edges[:n_comp].copy(),
        t,
        tr_y[:tl].copy(),
        tr_d[:tl].copy(),
        tr_q[:tl].copy(),
        tr_r[:tl].copy(),
        tr_eta[:tl].copy(),
        tr_comp[:tl].copy(),
        tr_new[:tl].copy(),
        match,
    )


@njit(cache=True, nogil=True)
def explore_matchings_batch(deg, owner, offsets, start, uniforms):
    """Matchings exposed by ``uniforms.shape[0]`` independent explorations."""
    reps = uniforms.shape[0]
    n_edges = owner.shape[0] // 2
    out = np.empty((reps, n_edges, 2), dtype=np.int64)
    for i in range(reps):
        res = explore_kernel(deg, owner, offsets, start, uniforms[i], False, True)
        out[i] = res[10]
    return out
