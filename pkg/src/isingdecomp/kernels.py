"""Backend selection for the hot loops.

The compiled extension (``_ckernels``) is used when it imports; otherwise
the numpy/pure-Python twin in ``_pykernels`` is used.  Setting
``ISINGDECOMP_BACKEND=python`` forces the fallback.
"""

from __future__ import annotations

import os
from types import ModuleType

from . import _pykernels

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None


def available_backends() -> list[str]:
    return ["cython", "python"] if _ckernels is not None else ["python"]


def get_backend(name: str | None = None) -> ModuleType:
    if name is None:
        name = BACKEND
    if name == "python":
        return _pykernels
    if name == "cython":
        if _ckernels is None:
            raise RuntimeError("compiled kernels are not built; run `pip install -e .` or `python setup.py build_ext --inplace`")
        return _ckernels
    raise ValueError(f"unknown backend {name!r}")


_requested = os.environ.get("ISINGDECOMP_BACKEND", "").strip().lower()
if _requested == "python" or _ckernels is None:
    BACKEND = "python"
elif _requested in ("", "cython", "auto"):
    BACKEND = "cython"
else:
    raise ImportError(f"ISINGDECOMP_BACKEND={_requested!r}; expected 'python' or 'cython'")

impl = get_backend(BACKEND)
