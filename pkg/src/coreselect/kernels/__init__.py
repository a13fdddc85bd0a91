"""Hot-kernel backend selection.

Prefers the compiled Cython extension; falls back to the numpy
implementation when the extension is missing or when
CORESELECT_FORCE_PYTHON=1 is set. Both backends expose the same API and
the same tie-breaking rules.
"""

import os

if os.environ.get("CORESELECT_FORCE_PYTHON") == "1":
    from coreselect.kernels._numpy import BACKEND, greedy_select, nearest_centroids
else:
    try:
        from coreselect.kernels._core import BACKEND, greedy_select, nearest_centroids
    except ImportError:
        from coreselect.kernels._numpy import BACKEND, greedy_select, nearest_centroids

__all__ = ["BACKEND", "nearest_centroids", "greedy_select"]
