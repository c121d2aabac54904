"""Kernel dispatch: compiled extension when available, pure Python otherwise.

Set STABILITYLAB_PURE=1 to force the pure backend (used by the benchmark
and by tests that compare the two).
"""

import os

from . import _pykernels

if os.environ.get("STABILITYLAB_PURE"):
    _impl = _pykernels
else:
    try:
        from . import _cykernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        _impl = _pykernels

BACKEND = _impl.BACKEND
COMPILED_AVAILABLE = _impl.BACKEND == "cython"
jacobi_eigvals_hermitian = _impl.jacobi_eigvals_hermitian
count_words = _impl.count_words
