"""Kernel backend selection.

The compiled extension is preferred; set ``TORUS_SCAR_PURE_PYTHON=1`` to force
the numpy fallback. ``TORUS_SCAR_THREADS`` caps the worker count used by the
parallel kernels and by sweeps.
"""

import os

from torus_scar import _pykernels

if os.environ.get("TORUS_SCAR_PURE_PYTHON", "") not in ("", "0"):
    _impl = _pykernels
    BACKEND = "python"
else:
    try:
        from torus_scar import _kernels as _impl
    except ImportError:
        _impl = _pykernels
        BACKEND = "python"
    else:
        BACKEND = "cython"

lattice_image = _impl.lattice_image
cycle_decompose = _impl.cycle_decompose
apply_monomial = _impl.apply_monomial


def max_workers():
    """Worker cap from ``TORUS_SCAR_THREADS`` (default: CPU count)."""
    raw = os.environ.get("TORUS_SCAR_THREADS")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return os.cpu_count() or 1
