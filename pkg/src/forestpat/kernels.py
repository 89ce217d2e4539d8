"""Kernel selection: the compiled extension when importable, else pure Python.

Set ``FORESTPAT_PURE=1`` to force the pure-Python kernels.
"""
import os

from . import _pykernels

if os.environ.get("FORESTPAT_PURE"):
    _impl = _pykernels
else:
    try:
        from . import _kernels as _impl
    except ImportError:  # extension not built
        _impl = _pykernels

BACKEND = "compiled" if _impl is not _pykernels else "python"

count_forests = _impl.count_forests
sample_batch = _impl.sample_batch
iter_forests = _pykernels.iter_forests


def backend(name: str):
    """Return the kernel module by name ("compiled" or "python")."""
    if name == "python":
        return _pykernels
    from . import _kernels

    return _kernels
