"""Kernel backend selection.

The compiled ``_core`` extension is used when it imports; otherwise, or when
``GBSLOCC_PURE_PYTHON=1`` is set, the numpy implementations in ``_pycore``.
"""

import os

from . import _pycore

CERTIFIED, STALLED, EXHAUSTED = _pycore.CERTIFIED, _pycore.STALLED, _pycore.EXHAUSTED

_impl = _pycore
BACKEND = "python"
if os.environ.get("GBSLOCC_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _core as _impl  # noqa: F811
        BACKEND = "cython"
    except ImportError:
        pass

first_witness = _impl.first_witness
vanishing_table = _impl.vanishing_table
value_grad = _impl.value_grad
descend_batch = _impl.descend_batch
