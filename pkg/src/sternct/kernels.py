"""Backend selection for the hot loops.

The compiled extension (Cython + GMP) is used when it imports; otherwise
the pure-Python kernels run.  Set ``STERNCT_PURE_PYTHON=1`` to force the
fallback.  Both backends return identical results.
"""

from __future__ import annotations

import os
from types import ModuleType
from typing import Optional, Sequence

from . import _pykernels
from ._pykernels import NonDyadicError
from .laurent import LaurentPoly

__all__ = [
    "BACKEND",
    "NonDyadicError",
    "available_backends",
    "get_backend",
    "matrix_steps",
    "rec_run",
    "transfer_steps",
    "B_TERMS",
]

_compiled: Optional[ModuleType]
try:
    from . import _ckernels as _compiled  # type: ignore[attr-defined]
except ImportError:  # pragma: no cover - depends on the build
    _compiled = None

if _compiled is not None and not os.environ.get("STERNCT_PURE_PYTHON"):
    _impl: ModuleType = _compiled
    BACKEND = "compiled"
else:
    _impl = _pykernels
    BACKEND = "python"

# Transfer matrix B as exponent -> coefficient maps.
B_TERMS = (
    ({1: 1}, {}, {}, {}, {}),
    ({0: 3}, {0: 1, 1: 1}, {1: 1}, {}, {}),
    ({-1: 1}, {-1: 1, 0: 1}, {0: 3}, {0: 1, 1: 1}, {1: 1}),
    ({}, {}, {-1: 1}, {-1: 1, 0: 1}, {0: 3}),
    ({}, {}, {}, {}, {-1: 1}),
)


def available_backends() -> list:
    return ["python"] + (["compiled"] if _compiled is not None else [])


def get_backend(name: str) -> ModuleType:
    if name == "python":
        return _pykernels
    if name == "compiled":
        if _compiled is None:
            raise ImportError("compiled kernels are not built")
        return _compiled
    raise ValueError(f"unknown backend {name!r}")


def matrix_steps(state: Sequence[LaurentPoly], matrix, steps: int,
                 final_window: Optional[int] = None, backend: Optional[str] = None) -> tuple:
    impl = _impl if backend is None else get_backend(backend)
    return impl.matrix_steps(state, matrix, steps, final_window)


def transfer_steps(state: Sequence[LaurentPoly], steps: int,
                   final_window: Optional[int] = None, backend: Optional[str] = None) -> tuple:
    return matrix_steps(state, B_TERMS, steps, final_window, backend)


def rec_run(coeffs, window, k_start: int, k_end: int, targets=(), backend: Optional[str] = None):
    impl = _impl if backend is None else get_backend(backend)
    return impl.rec_run(coeffs, window, k_start, k_end, targets)
