"""Backend selection for the arithmetic kernels.

The compiled GMP kernel is used when importable, unless ``SCMSBKE_BACKEND``
is set to ``python``. ``use_backend`` switches at runtime (benchmarks compare
both).
"""
import os

from . import _pykernels

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

_BACKENDS = {"python": _pykernels}
if _ckernels is not None:
    _BACKENDS["compiled"] = _ckernels

scalar_mult = _pykernels.scalar_mult
point_add = _pykernels.point_add
powmod = _pykernels.powmod
BACKEND = "python"


def available_backends():
    return sorted(_BACKENDS)


def use_backend(name="auto"):
    """Route ``scalar_mult``/``point_add``/``powmod`` to the named backend."""
    global scalar_mult, point_add, powmod, BACKEND
    if name == "auto":
        name = "compiled" if "compiled" in _BACKENDS else "python"
    try:
        mod = _BACKENDS[name]
    except KeyError:
        raise ValueError(f"backend {name!r} unavailable; have {available_backends()}") from None
    scalar_mult, point_add, powmod = mod.scalar_mult, mod.point_add, mod.powmod
    BACKEND = name
    return name


use_backend(os.environ.get("SCMSBKE_BACKEND", "auto"))
