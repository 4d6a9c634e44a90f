"""Canny edge detection: Gaussian smoothing, Sobel gradients, non-maximum
suppression and double-threshold hysteresis.

All stages are deterministic pure functions.  Convolutions use reflect-101
borders; NMS zeroes the one-pixel frame so the border never produces phantom
edges.  Thresholds are expressed on the raw Sobel L2 magnitude of 0-255
scale images (the classical 50/150 convention).
"""

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import ConfigError, ImageTooSmallError


@dataclass(frozen=True)
class CannyConfig:
    gaussian_sigma: float = 1.4
    kernel_radius: int = 2
    low_threshold: float = 50.0
    high_threshold: float = 150.0

    def validate(self):
        if self.gaussian_sigma <= 0.0:
            raise ConfigError("gaussian_sigma must be > 0")
        if self.kernel_radius < 1:
            raise ConfigError("kernel_radius must be >= 1")
        if self.low_threshold < 0.0 or self.high_threshold < self.low_threshold:
            raise ConfigError("need high_threshold >= low_threshold >= 0")


@dataclass(frozen=True)
class GradientField:
    """Per-pixel gradient magnitude (>= 0) and direction (radians, (-pi, pi],
    measured with y growing downward)."""

    magnitude: np.ndarray
    direction: np.ndarray


def _as_gray_f64(image):
    image = np.asarray(image)
    if image.ndim != 2:
        raise ImageTooSmallError(f"expected a 2-D grayscale image, got shape {image.shape}")
    return image.astype(np.float64)


def value_channel(hsv):
    """Extract the V channel as an 8-bit grayscale image (V * 255, rounded
    half away from zero)."""
    hsv = np.asarray(hsv, dtype=np.float64)
    return _kernels.value_channel_image(hsv)


def gaussian_kernel(sigma, radius):
    """Normalized 1-D Gaussian taps of length 2*radius + 1."""
    offsets = np.arange(-radius, radius + 1, dtype=np.float64)
    weights = np.exp(-(offsets * offsets) / (2.0 * sigma * sigma))
    return weights / weights.sum()


def gaussian_blur(image, sigma, radius):
    """Separable Gaussian smoothing; output is float64."""
    if sigma <= 0.0:
        raise ConfigError("sigma must be > 0")
    if radius < 1:
        raise ConfigError("radius must be >= 1")
    img = _as_gray_f64(image)
    size = 2 * radius + 1
    if img.shape[0] < size or img.shape[1] < size:
        raise ImageTooSmallError(
            f"image {img.shape} smaller than {size}x{size} kernel"
        )
    return _kernels.convolve_separable(img, gaussian_kernel(sigma, radius))


def sobel_gradients(image):
    """3x3 Sobel gradient field (raw magnitudes: a full-contrast step in a
    0-255 image peaks at 4*255)."""
    img = _as_gray_f64(image)
    if img.shape[0] < 3 or img.shape[1] < 3:
        raise ImageTooSmallError(f"image {img.shape} smaller than 3x3")
    gx, gy = _kernels.sobel_xy(img)
    magnitude = np.sqrt(gx * gx + gy * gy)
    direction = np.arctan2(gy, gx)
    return GradientField(magnitude=magnitude, direction=direction)


def non_max_suppress(field):
    """Thin a gradient field: a pixel keeps its magnitude iff it is >= both
    neighbours along the quantized gradient direction (4 axes, boundary
    angles resolving to the lower bin index); border pixels become 0."""
    magnitude = np.asarray(field.magnitude, dtype=np.float64)
    direction = np.asarray(field.direction, dtype=np.float64)
    if magnitude.shape != direction.shape:
        raise ImageTooSmallError("magnitude/direction shape mismatch")
    return _kernels.nonmax_suppress(magnitude, direction)


def hysteresis(thinned, low, high):
    """Binary edge map from double thresholding: >= high seeds, [low, high)
    kept iff 8-connected (transitively) to a seed."""
    if low < 0.0 or high < low:
        raise ConfigError("need high >= low >= 0")
    img = _as_gray_f64(thinned)
    return _kernels.hysteresis_map(img, low, high)


def canny(image, cfg=None):
    """Full Canny operator: blur -> Sobel -> NMS -> hysteresis.

    Returns a uint8 {0,1} edge map with the input's dimensions.
    """
    if cfg is None:
        cfg = CannyConfig()
    cfg.validate()
    blurred = gaussian_blur(image, cfg.gaussian_sigma, cfg.kernel_radius)
    field = sobel_gradients(blurred)
    thinned = _kernels.nonmax_suppress(field.magnitude, field.direction)
    return _kernels.hysteresis_map(thinned, cfg.low_threshold, cfg.high_threshold)
