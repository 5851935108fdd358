"""Backend selection for the scattering kernel.

The compiled Cython kernel is used when it was built; otherwise (or when
HARTMAN_PURE_PY=1 is set) the NumPy implementation takes over.  Both expose
the same `scatter_grid` contract and agree to rounding error.
"""
import os

from . import purepy

_forced = os.environ.get("HARTMAN_PURE_PY", "") not in ("", "0")

if _forced:
    _impl = purepy
else:
    try:
        from . import _cykernel as _impl  # type: ignore[attr-defined]
    except ImportError:
        _impl = purepy

BACKEND = "python" if _impl is purepy else "compiled"
scatter_grid = _impl.scatter_grid
trig_triplet = purepy.trig_triplet


def available_backends():
    """Names of the kernel backends importable in this installation."""
    names = ["python"]
    try:
        from . import _cykernel  # noqa: F401

        names.append("compiled")
    except ImportError:
        pass
    return names
