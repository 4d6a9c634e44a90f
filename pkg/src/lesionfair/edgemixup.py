"""Four-step preprocessing pipeline: red-mask contrast augmentation, value
channel extraction, Canny edge detection, and a linear mixup of the edge
map (rendered white) with the original image."""

from dataclasses import dataclass, field

import numpy as np

from . import _kernels, colorcore, edgedetect
from .errors import ConfigError, ShapeMismatchError


@dataclass(frozen=True)
class MixupConfig:
    """Edge-image weight plus the nested stage configurations."""

    beta: float = 0.3
    red_mask: colorcore.RedMaskConfig = field(default_factory=colorcore.RedMaskConfig)
    canny: edgedetect.CannyConfig = field(default_factory=edgedetect.CannyConfig)

    def validate(self):
        if not 0.0 <= self.beta <= 1.0:
            raise ConfigError(f"beta {self.beta} outside [0, 1]")
        self.red_mask.validate()
        self.canny.validate()


@dataclass(frozen=True)
class PipelineStages:
    """Intermediates of one preprocessing run, for inspection output."""

    contrast: np.ndarray
    gray: np.ndarray
    edges: np.ndarray
    result: np.ndarray


def mix(original, edges, beta):
    """out = round((1 - beta) * original + beta * (255 * edge)) per channel,
    rounding half away from zero.  beta=0 is the identity."""
    if not 0.0 <= beta <= 1.0:
        raise ConfigError(f"beta {beta} outside [0, 1]")
    original = colorcore.ensure_rgb_image(original)
    edges = np.asarray(edges)
    if edges.shape != original.shape[:2]:
        raise ShapeMismatchError(
            f"edge map {edges.shape} does not match image {original.shape[:2]}"
        )
    return _kernels.mix_image(original, edges.astype(np.uint8), float(beta))


def preprocess_stages(image, cfg=None):
    """Run the pipeline and keep every intermediate."""
    if cfg is None:
        cfg = MixupConfig()
    cfg.validate()
    image = colorcore.ensure_rgb_image(image)
    contrast = colorcore.contrast_augment(image, cfg.red_mask)
    gray = edgedetect.value_channel(colorcore.rgb_image_to_hsv(contrast))
    edges = edgedetect.canny(gray, cfg.canny)
    result = mix(image, edges, cfg.beta)
    return PipelineStages(contrast=contrast, gray=gray, edges=edges, result=result)


def preprocess(image, cfg=None):
    """Preprocess one image; returns the altered image (same dimensions)."""
    return preprocess_stages(image, cfg).result
