"""Backend selection for the counting kernel.

The compiled extension is used when it was built; otherwise the pure-Python
twin. Set ``PIMTC_PURE_PYTHON=1`` to force the fallback.
"""
import os

from . import _pykernels

python_count_sorted = _pykernels.count_sorted

try:
    if os.environ.get("PIMTC_PURE_PYTHON"):
        raise ImportError("pure Python backend forced")
    from ._kernels import count_sorted as compiled_count_sorted
except ImportError:
    compiled_count_sorted = None

if compiled_count_sorted is not None:
    BACKEND = "compiled"
    count_sorted = compiled_count_sorted
else:
    BACKEND = "python"
    count_sorted = python_count_sorted


def available_backends():
    out = {"python": python_count_sorted}
    if compiled_count_sorted is not None:
        out["compiled"] = compiled_count_sorted
    return out
