"""Kernel backend selection.

The two hot loops (time-domain LTI stepping and tree-split search) exist as
compiled Cython extensions and as pure-numpy twins producing the same
results.  The compiled versions are picked automatically when importable;
set GRIDMODE_PURE_PYTHON=1 to force the fallbacks (used by the benchmark and
the backend-equivalence tests).
"""

import os

_force_py = os.environ.get("GRIDMODE_PURE_PYTHON", "") not in ("", "0")

if not _force_py:
    try:
        from ._lti import step_lti
        from ._tree import grow_tree
        BACKEND = "compiled"
    except ImportError:
        _force_py = True

if _force_py:
    from .lti_py import step_lti
    from .tree_py import grow_tree
    BACKEND = "python"

from . import lti_py, tree_py

__all__ = ["step_lti", "grow_tree", "BACKEND", "lti_py", "tree_py"]
