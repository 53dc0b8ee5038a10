"""Kernel backend selection.

The compiled backend (weightlab._kernels.core, built from core.pyx) is used
when it imports cleanly; otherwise the pure backend takes over. Setting
WEIGHTLAB_PURE=1 forces the pure backend regardless.
"""

from __future__ import annotations

import os

from . import pure as _pure

if os.environ.get("WEIGHTLAB_PURE") == "1":
    _impl = _pure
else:
    try:
        from . import core as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _pure

BACKEND = _impl.BACKEND

perm_closure = _impl.perm_closure
mult_table = _impl.mult_table
element_orders = _impl.element_orders
subgroup_closure = _impl.subgroup_closure
conj_classes = _impl.conj_classes
conj_subset = _impl.conj_subset
centralizer_idx = _impl.centralizer_idx
normalizer_idx = _impl.normalizer_idx
class_matrix = _impl.class_matrix
extend_hom = _impl.extend_hom
