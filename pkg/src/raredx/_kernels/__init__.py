"""Scoring kernel selection: compiled extension when built, pure Python otherwise.

Set RAREDX_KERNEL=py (or =c) to force a kernel; default prefers the
compiled one. Both produce bit-identical scores.
"""

from __future__ import annotations

import os

from . import py_kernel

try:
    from . import c_kernel
except ImportError:
    c_kernel = None

_KERNELS = {py_kernel.NAME: py_kernel}
if c_kernel is not None:
    _KERNELS[c_kernel.NAME] = c_kernel

_env = os.environ.get("RAREDX_KERNEL", "auto").strip().lower()
if _env in ("", "auto"):
    active = c_kernel if c_kernel is not None else py_kernel
elif _env in ("c", "cython", "compiled"):
    if c_kernel is None:
        raise ImportError("RAREDX_KERNEL=c requested but the compiled kernel is not built")
    active = c_kernel
elif _env in ("py", "python", "pure"):
    active = py_kernel
else:
    raise ValueError(f"unrecognized RAREDX_KERNEL value {_env!r}")


def available() -> dict:
    """Name -> kernel module for every usable kernel."""
    return dict(_KERNELS)


def get_kernel(name: str | None = None):
    if name is None:
        return active
    try:
        return _KERNELS[name]
    except KeyError:
        raise KeyError(f"unknown kernel {name!r}; available: {sorted(_KERNELS)}") from None
