"""Kernel dispatch: numba-accelerated implementations when available.

Set ``GNLAB_DISABLE_NUMBA=1`` to force the pure-numpy path (useful for
debugging and for the benchmark in ``benchmarks/bench_kernels.py``).
Both paths produce identical results up to floating-point round-off.
"""

import os

_disabled = os.environ.get("GNLAB_DISABLE_NUMBA", "0") not in ("", "0")

if _disabled:
    HAS_NUMBA = False
else:
    try:
        from . import _kernels_numba as _impl

        HAS_NUMBA = True
    except ImportError:
        HAS_NUMBA = False

if not HAS_NUMBA:
    from . import _kernels_np as _impl

bfs_all_sources = _impl.bfs_all_sources
group_prox_linf = _impl.group_prox_linf
group_prox_sqmax = _impl.group_prox_sqmax
