"""Backend selection for the hot loops.

The compiled extension ``_ckernels`` is used when it was built; otherwise
the pure-Python module with the same functions is used.  Set
``PANTSLAB_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _pykernels as pure

compiled = None
if not os.environ.get("PANTSLAB_PURE_PYTHON"):
    try:
        from . import _ckernels as compiled
    except ImportError:
        compiled = None

backend = compiled if compiled is not None else pure
BACKEND_NAME = "cython" if compiled is not None else "python"

vertex_labels = backend.vertex_labels
component_labels = backend.component_labels
min_word = backend.min_word
cut_topology = backend.cut_topology
bfs01 = backend.bfs01
tree_cycles = backend.tree_cycles
cycle_darts = backend.cycle_darts
forest_cycles = backend.forest_cycles
edge_hash = backend.edge_hash
dual_path = backend.dual_path
as_array = backend.as_array
