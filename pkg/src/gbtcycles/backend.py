"""Kernel selection: compiled term ops when available, pure Python otherwise.

The active kernel is chosen once at import time.  Set GBTCYCLES_PURE_PYTHON=1
to force the pure-Python kernel even when the extension is built.  Tests and
the benchmark can switch kernels at runtime with :func:`set_backend`; for that
to take effect, callers must go through module attributes (backend.terms_mul)
instead of caching the functions at import.
"""

import os

from . import _termops_py

_IMPLS = {"python": _termops_py}

try:
    from . import _termops as _termops_ext
except ImportError:
    _termops_ext = None
else:
    _IMPLS["cython"] = _termops_ext

_active = "python"

terms_add = _termops_py.terms_add
terms_sub = _termops_py.terms_sub
terms_neg = _termops_py.terms_neg
terms_scale = _termops_py.terms_scale
terms_mul = _termops_py.terms_mul


def available_backends():
    """Names of the kernels importable in this installation."""
    return sorted(_IMPLS)


def current_backend():
    """Name of the kernel currently bound to the ``terms_*`` functions."""
    return _active


def set_backend(name):
    """Bind the ``terms_*`` functions to the named kernel ('python' or 'cython')."""
    global _active, terms_add, terms_sub, terms_neg, terms_scale, terms_mul
    try:
        impl = _IMPLS[name]
    except KeyError:
        raise ValueError(
            f"unknown backend {name!r}; available: {', '.join(available_backends())}"
        ) from None
    terms_add = impl.terms_add
    terms_sub = impl.terms_sub
    terms_neg = impl.terms_neg
    terms_scale = impl.terms_scale
    terms_mul = impl.terms_mul
    _active = name
    return name


if os.environ.get("GBTCYCLES_PURE_PYTHON"):
    set_backend("python")
elif _termops_ext is not None:
    set_backend("cython")
