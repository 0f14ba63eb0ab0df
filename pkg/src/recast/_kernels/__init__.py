"""Hot-kernel backend selection.

Loads the compiled extension when it was built, otherwise the NumPy/Python
fallback. Both expose the same functions with bit-identical outputs; the
compiled path is just faster. Set ``RECAST_KERNELS=python`` to force the
fallback (used by the benchmark and the cross-backend tests).
"""

import os

from . import _pure

BACKEND = "python"
_impl = _pure

if os.environ.get("RECAST_KERNELS", "").lower() != "python":
    try:
        from . import _core as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        pass

sample_parents = _impl.sample_parents
tree_stats = _impl.tree_stats
pairwise_matches = _impl.pairwise_matches

__all__ = ["BACKEND", "pairwise_matches", "sample_parents", "tree_stats"]
