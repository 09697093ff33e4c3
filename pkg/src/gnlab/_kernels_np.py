"""Pure-numpy implementations of the hot kernels.

Twin of ``_kernels_numba``; selected when numba is unavailable or when the
environment variable ``GNLAB_DISABLE_NUMBA`` is set to a non-empty value
other than ``0``.  Same signatures, same results (up to floating-point
round-off in the prox routines, which reduce in a different order).
"""

import numpy as np


def bfs_all_sources(indptr, indices, n):
    """Hop distances between all vertex pairs of a connected graph.

    Layered breadth-first search run simultaneously from every source:
    ``reach[s, v]`` marks d(s, v) <= r and is propagated one hop per
    iteration with a reduceat over edges grouped by head vertex.
    Returns an (n, n) int32 matrix.
    """
    if n == 1:
        return np.zeros((1, 1), dtype=np.int32)
    # directed edge list (tail -> head), sorted by head so reduceat can
    # OR together all tails feeding one head
    tails = np.repeat(np.arange(n), np.diff(indptr))
    heads = indices.astype(np.int64)
    order = np.argsort(heads, kind="stable")
    tails_o = tails[order]
    heads_o = heads[order]
    starts = np.searchsorted(heads_o, np.arange(n))

    dist = np.full((n, n), -1, dtype=np.int32)
    np.fill_diagonal(dist, 0)
    reach = np.eye(n, dtype=bool)
    r = 0
    while True:
        r += 1
        grown = np.logical_or.reduceat(reach[:, tails_o], starts, axis=1)
        new = grown & ~reach
        if not new.any():
            break
        dist[new] = r
        reach |= new
    return dist


def _pad_groups(v, indptr):
    """Lay the grouped values out as a padded (G, Dmax) magnitude matrix."""
    lengths = np.diff(indptr)
    gmax = int(lengths.max()) if lengths.size else 0
    cols = np.arange(gmax)
    mask = cols[None, :] < lengths[:, None]
    pos = np.minimum(indptr[:-1, None] + cols[None, :], len(v) - 1)
    mag = np.where(mask, np.abs(v[pos]), 0.0)
    return mag, mask, lengths


def group_prox_linf(v, indptr, sigma):
    """Proximal map of w -> sum_g sigma_g * max_j |w_{g,j}|, groupwise.

    Moreau: prox is v minus the projection of each group onto the l1 ball
    of radius sigma_g, which clips group magnitudes at a common level.
    """
    out = v.copy()
    if len(v) == 0:
        return out
    mag, mask, lengths = _pad_groups(v, indptr)
    srt = -np.sort(-mag, axis=1)          # descending magnitudes
    cums = np.cumsum(srt, axis=1)
    k = np.arange(1, srt.shape[1] + 1)[None, :]
    theta_k = (cums - sigma[:, None]) / k
    valid = (srt > theta_k) & mask
    kstar = np.maximum(valid.sum(axis=1), 1)
    theta = (cums[np.arange(len(kstar)), kstar - 1] - sigma) / kstar
    inside = cums[np.arange(len(lengths)), np.maximum(lengths - 1, 0)] <= sigma
    theta = np.where(inside, 0.0, np.maximum(theta, 0.0))
    level = np.repeat(theta, lengths)
    out = np.sign(v) * np.minimum(np.abs(v), level)
    return out


def group_prox_sqmax(v, indptr, coef):
    """Proximal map of w -> sum_g coef_g * (max_j |w_{g,j}|)^2, groupwise.

    Waterfilling: magnitudes are clipped at the level m solving
    2*coef*m = sum of excesses above m.
    """
    out = v.copy()
    if len(v) == 0:
        return out
    mag, mask, lengths = _pad_groups(v, indptr)
    srt = -np.sort(-mag, axis=1)
    cums = np.cumsum(srt, axis=1)
    k = np.arange(1, srt.shape[1] + 1)[None, :]
    m_k = cums / (2.0 * coef[:, None] + k)
    valid = (srt > m_k) & mask
    kstar = np.maximum(valid.sum(axis=1), 1)
    rows = np.arange(len(kstar))
    m = cums[rows, kstar - 1] / (2.0 * coef + kstar)
    zero = ~valid.any(axis=1)
    m = np.where(zero, 0.0, m)
    level = np.repeat(m, lengths)
    out = np.sign(v) * np.minimum(np.abs(v), level)
    return out
