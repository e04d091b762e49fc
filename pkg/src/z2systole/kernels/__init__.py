"""Hot loops, compiled with numba when available.

Set ``Z2SYS_NO_NUMBA=1`` before import to force the pure numpy/scipy path.
Both backends return identical results; ``benchmarks/bench_kernels.py``
compares their speed.
"""
import os

from . import _numpy

NUMBA_DISABLED = os.environ.get("Z2SYS_NO_NUMBA", "").strip().lower() in {"1", "true", "yes", "on"}

try:
    if NUMBA_DISABLED:
        raise ImportError("disabled by Z2SYS_NO_NUMBA")
    from . import _numba
    NUMBA_AVAILABLE = True
except ImportError:
    _numba = None
    NUMBA_AVAILABLE = False

backend = _numba if NUMBA_AVAILABLE else _numpy
BACKEND_NAME = "numba" if NUMBA_AVAILABLE else "numpy"

gf2_rref = backend.gf2_rref
bfs = backend.bfs
fiber_distances = backend.fiber_distances
coset_min = backend.coset_min
parity_consistent = backend.parity_consistent
cut_search = backend.cut_search

__all__ = [
    "BACKEND_NAME",
    "NUMBA_AVAILABLE",
    "bfs",
    "coset_min",
    "cut_search",
    "fiber_distances",
    "gf2_rref",
    "parity_consistent",
]
