"""Hot elimination kernels.

The compiled Cython extension is preferred; the pure-Python module is used
when it is not built or when ``NILKILLING_PURE_PYTHON=1`` is set.
"""

import os

from . import _pykernels

try:
    if os.environ.get("NILKILLING_PURE_PYTHON") == "1":
        raise ImportError("pure-Python kernels forced")
    from . import _ckernels as _default
except ImportError:
    _default = _pykernels

BACKEND = _default.BACKEND
rref_mod_p = _default.rref_mod_p


def get_backend(name=None):
    """Return the kernel module for ``name`` (``"cython"``, ``"python"``, or the default)."""
    if name is None:
        return _default
    if name == "python":
        return _pykernels
    if name == "cython":
        from . import _ckernels

        return _ckernels
    raise ValueError(f"unknown kernel backend {name!r}")


def available_backends():
    names = ["python"]
    try:
        from . import _ckernels  # noqa: F401
    except ImportError:
        pass
    else:
        names.insert(0, "cython")
    return names
