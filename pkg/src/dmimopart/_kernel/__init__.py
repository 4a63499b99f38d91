"""Batch ZFBF kernel with a compiled core and a pure-numpy fallback.

The compiled extension (``_fast``, Cython + LAPACK) is optional; when it is
missing the vectorized numpy implementation (``_slow``) is used.  Selection
happens once at import time and can be forced through the environment
variable ``DMIMOPART_KERNEL``:

    auto (default)          compiled if built, else numpy
    fast | cython           compiled, ImportError if not built
    slow | numpy | pure     numpy fallback

Both backends implement ``batch_zfbf_rates(h, p, cond_limit)`` with
identical semantics; results agree to a few ulps (they use different LAPACK
call sequences).  Reproducibility guarantees therefore hold per backend.
"""

from __future__ import annotations

import os

from . import _slow

try:
    from . import _fast
except ImportError:
    _fast = None


def get_backend(name: str):
    """Return the kernel module for ``name`` ('cython' or 'numpy')."""
    if name in ("fast", "cython", "compiled"):
        if _fast is None:
            raise ImportError(
                "compiled kernel requested but dmimopart._kernel._fast is not built; "
                "run `python setup.py build_ext --inplace` or reinstall"
            )
        return _fast
    if name in ("slow", "numpy", "pure"):
        return _slow
    raise ValueError(f"unknown kernel backend {name!r}")


def available_backends() -> tuple[str, ...]:
    return ("cython", "numpy") if _fast is not None else ("numpy",)


_choice = os.environ.get("DMIMOPART_KERNEL", "auto").strip().lower() or "auto"
if _choice == "auto":
    _impl = _fast if _fast is not None else _slow
else:
    _impl = get_backend(_choice)

BACKEND = "cython" if _impl is _fast else "numpy"
batch_zfbf_rates = _impl.batch_zfbf_rates
