"""Color-space conversions (sRGB <-> HSV, sRGB -> CIELAB) and the red-mask
contrast augmentation that starts the preprocessing pipeline.

Conventions
-----------
* RGB images are uint8 arrays of shape (H, W, 3) in sRGB.
* HSV triples/images carry H in degrees [0, 360), S and V in [0, 1]
  (hexcone model; achromatic pixels get H = 0, S = 0).
* CIELAB uses the D65 reference white and 2-degree observer; L* in [0, 100].
* Quantization back to 8 bits rounds half away from zero.

Scalar functions and the whole-image kernels are exact twins: the scalar
sRGB<->HSV math is pure arithmetic and matches the kernels bit for bit.
"""

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import ConfigError, ShapeMismatchError


@dataclass(frozen=True)
class RedMaskConfig:
    """Hue windows (degrees, wrapping allowed) plus saturation/value floors
    that decide which pixels the contrast augmentation recolors."""

    hue_windows: tuple = ((0.0, 10.0), (350.0, 360.0))
    sat_min: float = 0.30
    val_min: float = 0.20

    def validate(self):
        for lo, hi in self.hue_windows:
            if not (0.0 <= lo <= 360.0 and 0.0 <= hi <= 360.0):
                raise ConfigError(f"hue window ({lo}, {hi}) outside [0, 360]")
        if not 0.0 <= self.sat_min <= 1.0:
            raise ConfigError(f"sat_min {self.sat_min} outside [0, 1]")
        if not 0.0 <= self.val_min <= 1.0:
            raise ConfigError(f"val_min {self.val_min} outside [0, 1]")

    def windows_array(self):
        return np.asarray(self.hue_windows, dtype=np.float64).reshape(-1, 2)


def ensure_rgb_image(image):
    image = np.asarray(image)
    if image.ndim != 3 or image.shape[2] != 3 or image.dtype != np.uint8:
        raise ShapeMismatchError(
            f"expected uint8 (H, W, 3) RGB image, got {image.dtype} {image.shape}"
        )
    if image.shape[0] < 1 or image.shape[1] < 1:
        raise ShapeMismatchError("image must be at least 1x1")
    return image


def ensure_hsv_image(image):
    image = np.asarray(image, dtype=np.float64)
    if image.ndim != 3 or image.shape[2] != 3:
        raise ShapeMismatchError(f"expected (H, W, 3) HSV image, got {image.shape}")
    return image


def rgb_to_hsv(pixel):
    """Convert one 8-bit sRGB triple to (H degrees, S, V)."""
    r = pixel[0] / 255.0
    g = pixel[1] / 255.0
    b = pixel[2] / 255.0
    maxc = max(max(r, g), b)
    minc = min(min(r, g), b)
    delta = maxc - minc
    if delta == 0.0:
        return (0.0, 0.0, maxc)
    if maxc == r:
        h = (60.0 * (g - b)) / delta
    elif maxc == g:
        h = (60.0 * (b - r)) / delta + 120.0
    else:
        h = (60.0 * (r - g)) / delta + 240.0
    if h < 0.0:
        h += 360.0
    return (h, delta / maxc, maxc)


def hsv_to_rgb(pixel):
    """Convert (H degrees in [0,360), S, V in [0,1]) to an 8-bit sRGB triple."""
    h, s, v = pixel
    h60 = h / 60.0
    sector = np.floor(h60)
    f = h60 - sector
    p = v * (1.0 - s)
    q = v * (1.0 - s * f)
    t = v * (1.0 - s * (1.0 - f))
    k = int(sector) % 6
    r, g, b = (
        (v, t, p), (q, v, p), (p, v, t),
        (p, q, v), (t, p, v), (v, p, q),
    )[k]
    return (
        int(np.floor(r * 255.0 + 0.5)),
        int(np.floor(g * 255.0 + 0.5)),
        int(np.floor(b * 255.0 + 0.5)),
    )


# sRGB (linear) -> XYZ, D65.  The rows sum to the reference white
# (X=0.95047, Y=1.00000, Z=1.08883); normalizing by the row sums makes the
# reference white land on L*=100, a*=b*=0 exactly.
_SRGB_TO_XYZ = (
    (0.4124564, 0.3575761, 0.1804375),
    (0.2126729, 0.7151522, 0.0721750),
    (0.0193339, 0.1191920, 0.9503041),
)
_WHITE = tuple(row[0] * 1.0 + row[1] * 1.0 + row[2] * 1.0 for row in _SRGB_TO_XYZ)
_LAB_EPS = 216.0 / 24389.0
_LAB_KAPPA = 24389.0 / 27.0


def _srgb_linearize(channel):
    return np.where(
        channel <= 0.04045,
        channel / 12.92,
        np.power((channel + 0.055) / 1.055, 2.4),
    )


def _lab_transfer(t):
    return np.where(t > _LAB_EPS, np.cbrt(t), (_LAB_KAPPA * t + 16.0) / 116.0)


def rgb_image_to_lab(rgb):
    """Convert a uint8 RGB image to CIELAB (float64, same shape)."""
    rgb = ensure_rgb_image(rgb)
    scaled = rgb.astype(np.float64) / 255.0
    lin = _srgb_linearize(scaled)
    r = lin[..., 0]
    g = lin[..., 1]
    b = lin[..., 2]
    x = (_SRGB_TO_XYZ[0][0] * r + _SRGB_TO_XYZ[0][1] * g + _SRGB_TO_XYZ[0][2] * b) / _WHITE[0]
    y = (_SRGB_TO_XYZ[1][0] * r + _SRGB_TO_XYZ[1][1] * g + _SRGB_TO_XYZ[1][2] * b) / _WHITE[1]
    z = (_SRGB_TO_XYZ[2][0] * r + _SRGB_TO_XYZ[2][1] * g + _SRGB_TO_XYZ[2][2] * b) / _WHITE[2]
    fx = _lab_transfer(x)
    fy = _lab_transfer(y)
    fz = _lab_transfer(z)
    lab = np.empty_like(lin)
    lab[..., 0] = 116.0 * fy - 16.0
    lab[..., 1] = 500.0 * (fx - fy)
    lab[..., 2] = 200.0 * (fy - fz)
    return lab


def rgb_to_lab(pixel):
    """Convert one 8-bit sRGB triple to (L*, a*, b*)."""
    lab = rgb_image_to_lab(np.asarray(pixel, dtype=np.uint8).reshape(1, 1, 3))
    return (float(lab[0, 0, 0]), float(lab[0, 0, 1]), float(lab[0, 0, 2]))


def rgb_image_to_hsv(rgb):
    """Whole-image RGB -> HSV (float64 output)."""
    return _kernels.rgb_to_hsv_image(ensure_rgb_image(rgb))


def hsv_image_to_rgb(hsv):
    """Whole-image HSV -> RGB (uint8 output)."""
    return _kernels.hsv_to_rgb_image(ensure_hsv_image(hsv))


def contrast_augment(image, cfg=None):
    """Recolor red-hued pixels (per ``cfg``) to pure green (0, 255, 0),
    leaving all other pixels untouched.  Idempotent for red windows: the
    recolored pixels sit at hue 120 and never re-match."""
    if cfg is None:
        cfg = RedMaskConfig()
    cfg.validate()
    image = ensure_rgb_image(image)
    return _kernels.contrast_augment_image(
        image, cfg.windows_array(), cfg.sat_min, cfg.val_min
    )
