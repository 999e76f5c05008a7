"""Kernel backend selection.

The compiled ``_ckernels`` extension is used when it imports; otherwise the
numpy fallback in ``_pykernels`` is used.  Set ``GRAVAB_PURE_PYTHON=1`` to
force the fallback.
"""

import os

from gravab import _pykernels

KeplerConvergenceError = _pykernels.KeplerConvergenceError

_impl = _pykernels
BACKEND = "python"

if os.environ.get("GRAVAB_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from gravab import _ckernels as _impl  # noqa: F811

        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels

kepler_solve = _impl.kepler_solve
bessel_jn_orders = _impl.bessel_jn_orders
fft_radix2 = _impl.fft_radix2
dft_direct = _impl.dft_direct
potential_midpoint_sum = _impl.potential_midpoint_sum


def backends():
    """Map of available backend name -> kernel module."""
    found = {"python": _pykernels}
    try:
        from gravab import _ckernels

        found["cython"] = _ckernels
    except ImportError:
        pass
    return found
