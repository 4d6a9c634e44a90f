"""Vectorized numpy implementations of the per-pixel kernels.

These are the reference semantics for the compiled core in ``_core.pyx``.
Both backends must stay bit-for-bit interchangeable, which they achieve by
restricting themselves to IEEE-exact operations (+, -, *, /, sqrt, floor,
comparisons) applied per pixel in the same order.  Anything transcendental
(arctan2 for gradient direction, the CIELAB transfer) lives outside the
kernel layer so it is computed by one code path regardless of backend.

Callers are expected to validate shapes/dtypes; kernels assume:
  * RGB images   -- uint8, shape (H, W, 3)
  * HSV images   -- float64, shape (H, W, 3), H in [0,360), S,V in [0,1]
  * gray images  -- float64 or uint8, shape (H, W)
  * edge maps    -- uint8 {0,1}, shape (H, W)
"""

import numpy as np

RAD2DEG = 180.0 / np.pi


def rgb_to_hsv_image(rgb):
    """Hexcone RGB->HSV. Achromatic pixels get H = 0, S = 0."""
    scaled = rgb.astype(np.float64) / 255.0
    r = scaled[..., 0]
    g = scaled[..., 1]
    b = scaled[..., 2]
    maxc = np.maximum(np.maximum(r, g), b)
    minc = np.minimum(np.minimum(r, g), b)
    delta = maxc - minc
    achromatic = delta == 0.0
    safe_delta = np.where(achromatic, 1.0, delta)
    h_r = (60.0 * (g - b)) / safe_delta
    h_g = (60.0 * (b - r)) / safe_delta + 120.0
    h_b = (60.0 * (r - g)) / safe_delta + 240.0
    h = np.select([achromatic, maxc == r, maxc == g], [0.0, h_r, h_g], default=h_b)
    h = np.where(h < 0.0, h + 360.0, h)
    s = np.where(achromatic, 0.0, delta / np.where(maxc == 0.0, 1.0, maxc))
    return np.stack([h, s, maxc], axis=-1)


def hsv_to_rgb_image(hsv):
    """Inverse hexcone transform, quantized half-away-from-zero to uint8."""
    h = hsv[..., 0]
    s = hsv[..., 1]
    v = hsv[..., 2]
    h60 = h / 60.0
    sector = np.floor(h60)
    f = h60 - sector
    p = v * (1.0 - s)
    q = v * (1.0 - s * f)
    t = v * (1.0 - s * (1.0 - f))
    k = sector.astype(np.int64) % 6
    r = np.choose(k, (v, q, p, p, t, v))
    g = np.choose(k, (t, v, v, q, p, p))
    b = np.choose(k, (p, p, t, v, v, q))
    out = np.stack([r, g, b], axis=-1)
    return np.floor(out * 255.0 + 0.5).astype(np.uint8)


def contrast_augment_image(rgb, windows, sat_min, val_min):
    """Recolor pixels inside a red hue window (and above the saturation and
    value floors) to pure green; everything else passes through.

    ``windows`` is a float64 array of shape (N, 2); a row with low > high
    wraps around 360 -> 0.
    """
    hsv = rgb_to_hsv_image(rgb)
    h = hsv[..., 0]
    s = hsv[..., 1]
    v = hsv[..., 2]
    in_window = np.zeros(h.shape, dtype=bool)
    for lo, hi in windows:
        if lo <= hi:
            in_window |= (h >= lo) & (h <= hi)
        else:
            in_window |= (h >= lo) | (h <= hi)
    fire = in_window & (s >= sat_min) & (v >= val_min)
    out = rgb.copy()
    out[fire] = (0, 255, 0)
    return out


def value_channel_image(hsv):
    """V channel scaled to 8 bits (half-away-from-zero rounding)."""
    return np.floor(hsv[..., 2] * 255.0 + 0.5).astype(np.uint8)


def convolve_separable(img, weights):
    """Separable 2-D convolution with a symmetric 1-D kernel, reflect-101
    borders.  Taps accumulate in ascending index order (the compiled core
    matches this order exactly)."""
    n_taps = weights.shape[0]
    radius = (n_taps - 1) // 2
    height, width = img.shape
    padded = np.pad(img, ((0, 0), (radius, radius)), mode="reflect")
    horiz = np.zeros_like(img)
    for k in range(n_taps):
        horiz += weights[k] * padded[:, k:k + width]
    padded = np.pad(horiz, ((radius, radius), (0, 0)), mode="reflect")
    out = np.zeros_like(img)
    for k in range(n_taps):
        out += weights[k] * padded[k:k + height, :]
    return out


# Non-zero 3x3 Sobel taps as (dy, dx, weight); accumulation order is part of
# the cross-backend contract.
SOBEL_TAPS_X = (
    (-1, -1, -1.0), (-1, 1, 1.0),
    (0, -1, -2.0), (0, 1, 2.0),
    (1, -1, -1.0), (1, 1, 1.0),
)
SOBEL_TAPS_Y = (
    (-1, -1, -1.0), (-1, 0, -2.0), (-1, 1, -1.0),
    (1, -1, 1.0), (1, 0, 2.0), (1, 1, 1.0),
)


def sobel_xy(img):
    """Raw 3x3 Sobel responses (gx, gy) with reflect-101 borders.

    gx responds positively to a left-to-right increase, gy to a top-to-bottom
    increase (y grows downward).
    """
    height, width = img.shape
    padded = np.pad(img, 1, mode="reflect")
    gx = np.zeros_like(img)
    gy = np.zeros_like(img)
    for dy, dx, wt in SOBEL_TAPS_X:
        gx += wt * padded[1 + dy:1 + dy + height, 1 + dx:1 + dx + width]
    for dy, dx, wt in SOBEL_TAPS_Y:
        gy += wt * padded[1 + dy:1 + dy + height, 1 + dx:1 + dx + width]
    return gx, gy


# Neighbour offsets per quantized gradient axis: 0 deg, 45 deg, 90 deg,
# 135 deg.  Offsets are (dy, dx) with y growing downward.
_NMS_OFFSETS = (
    ((0, -1), (0, 1)),
    ((-1, -1), (1, 1)),
    ((-1, 0), (1, 0)),
    ((-1, 1), (1, -1)),
)


def quantize_direction(theta):
    """Map angles in degrees (mod 180, in [0, 180]) to axis bins 0..3.

    Boundary angles resolve to the lower of the two adjacent bin indices, so
    22.5 -> 0, 67.5 -> 1, 112.5 -> 2 and 157.5 -> 0 (the 157.5 boundary sits
    between bins 3 and 0).
    """
    axis = np.zeros(theta.shape, dtype=np.int8)
    axis[(theta > 22.5) & (theta <= 67.5)] = 1
    axis[(theta > 67.5) & (theta <= 112.5)] = 2
    axis[(theta > 112.5) & (theta < 157.5)] = 3
    return axis


def nonmax_suppress(mag, direction):
    """Keep a pixel's magnitude iff it is >= both neighbours along the
    quantized gradient direction; the 1-pixel border is zeroed."""
    height, width = mag.shape
    out = np.zeros_like(mag)
    if height < 3 or width < 3:
        return out
    theta = direction[1:-1, 1:-1] * RAD2DEG
    theta = np.where(theta < 0.0, theta + 180.0, theta)
    axis = quantize_direction(theta)
    center = mag[1:-1, 1:-1]
    keep = np.zeros(center.shape, dtype=bool)
    for bin_id, ((dy1, dx1), (dy2, dx2)) in enumerate(_NMS_OFFSETS):
        n1 = mag[1 + dy1:height - 1 + dy1, 1 + dx1:width - 1 + dx1]
        n2 = mag[1 + dy2:height - 1 + dy2, 1 + dx2:width - 1 + dx2]
        keep |= (axis == bin_id) & (center >= n1) & (center >= n2)
    out[1:-1, 1:-1] = np.where(keep, center, 0.0)
    return out


def _dilate8(mask):
    height, width = mask.shape
    padded = np.pad(mask, 1, mode="constant")
    out = np.zeros_like(mask)
    for dy in (-1, 0, 1):
        for dx in (-1, 0, 1):
            if dy == 0 and dx == 0:
                continue
            out |= padded[1 + dy:1 + dy + height, 1 + dx:1 + dx + width]
    return out


def hysteresis_map(thinned, low, high):
    """Double-threshold hysteresis: pixels >= high seed, pixels in
    [low, high) survive iff 8-connected (transitively) to a seed."""
    strong = thinned >= high
    weak = (thinned >= low) & ~strong
    kept = strong.copy()
    frontier = strong
    while frontier.any():
        grown = _dilate8(frontier) & weak & ~kept
        kept |= grown
        frontier = grown
    return kept.astype(np.uint8)


def mix_image(rgb, edges, beta):
    """Per-channel linear blend of an image with its edge map rendered
    white (255), rounded half away from zero."""
    edge255 = edges.astype(np.float64) * 255.0
    out = (1.0 - beta) * rgb.astype(np.float64) + beta * edge255[..., None]
    return np.floor(out + 0.5).astype(np.uint8)
