"""Backend selection for the hot loops.

The compiled extension is used when it was built and the matrix codes fit in
64 bits; otherwise the pure-Python kernel takes over. Set ``MMS_KERNEL`` to
``python`` or ``cython`` to force a choice (``cython`` fails loudly if the
extension is missing).
"""

from __future__ import annotations

import os
from functools import lru_cache

from . import _kernel_py

try:
    from . import _kernel as _kernel_c
except ImportError:  # extension not built
    _kernel_c = None

HAVE_COMPILED = _kernel_c is not None
_CODE_LIMIT = 2**62


def preferred_backend() -> str:
    choice = os.environ.get("MMS_KERNEL", "auto").lower()
    if choice not in ("auto", "python", "cython"):
        raise ValueError(f"MMS_KERNEL must be auto, python or cython, not {choice!r}")
    if choice == "cython" and not HAVE_COMPILED:
        raise ImportError("MMS_KERNEL=cython but the compiled extension is not available")
    return choice


@lru_cache(maxsize=None)
def _make(n: int, p: int, backend: str):
    from .matrix import space

    s = space(n, p)
    fits = p ** (n * n) < _CODE_LIMIT
    if backend == "cython" and not fits:
        raise ValueError(f"codes for n={n}, p={p} do not fit the compiled kernel")
    use_c = HAVE_COMPILED and fits and backend in ("auto", "cython")
    mod = _kernel_c if use_c else _kernel_py
    return mod.Kernel(n, p, s.weights, s.order)


def get_kernel(n: int, p: int, backend: str | None = None):
    return _make(n, p, backend or preferred_backend())
