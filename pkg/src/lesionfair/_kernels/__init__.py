"""Kernel backend selection.

The compiled core (``_core``, built from Cython) is preferred when it
imports; otherwise the numpy fallback is used.  Both produce bit-identical
results — the fallback is the semantic reference, the extension is the fast
path.  Set ``LESIONFAIR_KERNELS=python`` or ``=compiled`` to force a backend
(``compiled`` raises if the extension is missing).
"""

import os

from . import _fallback

_requested = os.environ.get("LESIONFAIR_KERNELS", "").strip().lower()

if _requested == "python":
    _impl = _fallback
else:
    try:
        from . import _core as _impl
    except ImportError:
        if _requested == "compiled":
            raise
        _impl = _fallback

BACKEND = "compiled" if _impl is not _fallback else "python"

rgb_to_hsv_image = _impl.rgb_to_hsv_image
hsv_to_rgb_image = _impl.hsv_to_rgb_image
contrast_augment_image = _impl.contrast_augment_image
value_channel_image = _impl.value_channel_image
convolve_separable = _impl.convolve_separable
sobel_xy = _impl.sobel_xy
nonmax_suppress = _impl.nonmax_suppress
hysteresis_map = _impl.hysteresis_map
mix_image = _impl.mix_image


def backend_name():
    """Name of the active kernel backend: 'compiled' or 'python'."""
    return BACKEND
