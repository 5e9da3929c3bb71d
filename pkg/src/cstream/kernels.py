"""Backend selection for the hot kernels.

The compiled extension is used when it imported successfully, unless
``CSTREAM_PURE=1`` is set; both backends expose ``naive_check``,
``opt_check`` and ``index`` with identical signatures and results.
"""

import os

from . import _pykernels

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

BACKENDS = {"python": _pykernels}
if _ckernels is not None:
    BACKENDS["compiled"] = _ckernels

if _ckernels is not None and os.environ.get("CSTREAM_PURE", "") not in ("1", "true", "yes"):
    BACKEND = "compiled"
else:
    BACKEND = "python"

_active = BACKENDS[BACKEND]
naive_check = _active.naive_check
opt_check = _active.opt_check
index = _active.index


def get_backend(name=None):
    """The kernel module called ``name`` (default: the active one)."""
    if name is None:
        return _active
    try:
        return BACKENDS[name]
    except KeyError:
        raise ValueError(f"backend {name!r} is not available; have {sorted(BACKENDS)}") from None
