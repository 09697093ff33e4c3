"""Numba implementations of the hot kernels (BFS + grouped prox maps).

Compiled lazily on first call; ``_accel`` falls back to ``_kernels_np``
when numba is missing or disabled.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def bfs_all_sources(indptr, indices, n):
    dist = np.full((n, n), -1, dtype=np.int32)
    queue = np.empty(n, dtype=np.int64)
    for s in range(n):
        drow = dist[s]
        drow[s] = 0
        queue[0] = s
        head = 0
        tail = 1
        while head < tail:
            x = queue[head]
            head += 1
            dx = drow[x]
            for k in range(indptr[x], indptr[x + 1]):
                y = indices[k]
                if drow[y] < 0:
                    drow[y] = dx + 1
                    queue[tail] = y
                    tail += 1
    return dist


@njit(cache=True)
def group_prox_linf(v, indptr, sigma):
    out = np.empty_like(v)
    ngroups = len(indptr) - 1
    for g in range(ngroups):
        a = indptr[g]
        b = indptr[g + 1]
        if b == a:
            continue
        u = np.abs(v[a:b])
        total = u.sum()
        if total <= sigma[g]:
            for j in range(a, b):
                out[j] = 0.0
            continue
        srt = np.sort(u)[::-1]
        cum = 0.0
        theta = 0.0
        for k in range(len(srt)):
            cum += srt[k]
            cand = (cum - sigma[g]) / (k + 1)
            if srt[k] > cand:
                theta = cand
            else:
                break
        if theta < 0.0:
            theta = 0.0
        for j in range(a, b):
            aj = abs(v[j])
            cl = aj if aj < theta else theta
            out[j] = cl if v[j] >= 0 else -cl
    return out


@njit(cache=True)
def group_prox_sqmax(v, indptr, coef):
    out = np.empty_like(v)
    ngroups = len(indptr) - 1
    for g in range(ngroups):
        a = indptr[g]
        b = indptr[g + 1]
        if b == a:
            continue
        u = np.abs(v[a:b])
        srt = np.sort(u)[::-1]
        if srt[0] == 0.0:
            for j in range(a, b):
                out[j] = 0.0
            continue
        cum = 0.0
        m = 0.0
        for k in range(len(srt)):
            cum += srt[k]
            cand = cum / (2.0 * coef[g] + (k + 1))
            if srt[k] > cand:
                m = cand
            else:
                break
        for j in range(a, b):
            aj = abs(v[j])
            cl = aj if aj < m else m
            out[j] = cl if v[j] >= 0 else -cl
    return out
