"""Backend dispatch for the hot loops.

The compiled extension ``r2c._kernels`` is used when it imports; otherwise the
numpy implementation in ``r2c._fallback`` is selected. ``set_backend`` lets
benchmarks and tests pin one explicitly.
"""

import numpy as np

from . import _fallback

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

BACKENDS = ("cython", "python") if _compiled is not None else ("python",)
_active = _compiled if _compiled is not None else _fallback


def backend():
    """Name of the active backend: ``"cython"`` or ``"python"``."""
    return "cython" if _active is _compiled and _compiled is not None else "python"


def get_backend(name):
    if name == "python":
        return _fallback
    if name == "cython":
        if _compiled is None:
            raise ImportError("r2c._kernels is not built")
        return _compiled
    raise ValueError(f"unknown backend {name!r}")


def set_backend(name):
    global _active
    _active = get_backend(name)


def em_1d(x, weights, means, variances, var_floor, tol, max_iter, empty_mass):
    return _active.em_1d(
        np.ascontiguousarray(x, dtype=np.float64),
        weights,
        means,
        variances,
        float(var_floor),
        float(tol),
        int(max_iter),
        float(empty_mass),
    )


def nearest_1d(x, centers):
    return _active.nearest_1d(
        np.ascontiguousarray(x, dtype=np.float64),
        np.ascontiguousarray(centers, dtype=np.float64),
    )


def nearest_center(data, centers):
    return _active.nearest_center(
        np.ascontiguousarray(data, dtype=np.float64),
        np.ascontiguousarray(centers, dtype=np.float64),
    )
