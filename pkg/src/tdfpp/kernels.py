"""Backend selection for the sweep kernels.

The compiled ``_core`` extension is used when importable; otherwise, or
when ``TDFPP_BACKEND=python`` is set, the pure-Python ``_pycore`` is used.
Both expose ``sweep`` and ``traversal_time`` with identical results.
"""
import logging
import os

from . import _pycore

log = logging.getLogger(__name__)

_BACKENDS = {"python": _pycore}

try:
    from . import _core
except ImportError:  # extension not built
    _core = None
else:
    _BACKENDS["compiled"] = _core


def available():
    return sorted(_BACKENDS)


def get_backend(name=None):
    if name is None:
        name = os.environ.get("TDFPP_BACKEND", "compiled" if _core is not None else "python")
    try:
        return _BACKENDS[name]
    except KeyError:
        raise ValueError(f"kernel backend {name!r} unavailable; have {available()}") from None


BACKEND_NAME = os.environ.get("TDFPP_BACKEND", "compiled" if _core is not None else "python")
backend = get_backend(BACKEND_NAME)
log.debug("tdfpp kernels: %s backend", BACKEND_NAME)
