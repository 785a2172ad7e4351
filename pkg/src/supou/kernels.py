"""Backend selection for the hot loops.

The Cython extension ``supou._core`` is used when it is importable; the
numpy implementation in ``supou._fallback`` otherwise.  Setting the
environment variable ``SUPOU_PURE_PYTHON=1`` forces the fallback.
"""

import os

if os.environ.get("SUPOU_PURE_PYTHON", "") not in ("", "0"):
    from ._fallback import cumulant_sums, superpose

    BACKEND = "python"
else:
    try:
        from ._core import cumulant_sums, superpose

        BACKEND = "cython"
    except ImportError:  # extension not built
        from ._fallback import cumulant_sums, superpose

        BACKEND = "python"

__all__ = ["BACKEND", "cumulant_sums", "superpose"]
