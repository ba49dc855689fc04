"""Bootstrap kernel selection.

The compiled kernel is preferred when its extension imported cleanly; the
pure-numpy kernel is the fallback.  ``CDRISK_KERNEL=python|compiled`` forces
a backend (requesting an unavailable compiled kernel is an error, not a
silent fallback).
"""

from __future__ import annotations

import os

from . import _kernel_py

try:
    from . import _kernel_cy
except ImportError:
    _kernel_cy = None

__all__ = ["HAVE_COMPILED", "available_kernels", "get_kernel", "default_kernel_name"]

HAVE_COMPILED = _kernel_cy is not None


def available_kernels() -> tuple[str, ...]:
    return ("python", "compiled") if HAVE_COMPILED else ("python",)


def default_kernel_name() -> str:
    env = os.environ.get("CDRISK_KERNEL", "").strip().lower()
    if env:
        return env
    return "compiled" if HAVE_COMPILED else "python"


def get_kernel(name: str | None = None):
    """Return the ``run_batch`` callable for the named backend."""
    name = name or default_kernel_name()
    if name == "python":
        return _kernel_py.run_batch
    if name == "compiled":
        if _kernel_cy is None:
            raise RuntimeError(
                "compiled kernel requested but the extension is not built; "
                "reinstall with Cython available or set CDRISK_KERNEL=python"
            )
        return _kernel_cy.run_batch
    raise ValueError(f"unknown kernel {name!r}, expected 'python' or 'compiled'")
