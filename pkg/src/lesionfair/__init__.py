"""Edge-mixup preprocessing and skin-tone fairness evaluation for lesion
imagery.

The package has two halves:

* an image pipeline (``colorcore``, ``edgedetect``, ``edgemixup``) that
  recolors red-hued pixels, extracts Canny edges from the value channel and
  linearly mixes the edge map back into the original image, and
* an evaluation harness (``skintone``, ``fairmetrics``, ``dataio``) that
  derives ITA-based skin-tone groups and computes utility/fairness metrics
  (accuracy, AUC, Jaccard, Dice, subgroup gaps, composite scores, margins
  of error) from model-agnostic prediction manifests.

Hot per-pixel kernels run on a compiled core when available, with a
bit-identical numpy fallback (see ``lesionfair._kernels.backend_name``).
"""

from ._kernels import backend_name
from .colorcore import (
    RedMaskConfig,
    contrast_augment,
    hsv_to_rgb,
    rgb_image_to_hsv,
    rgb_image_to_lab,
    rgb_to_hsv,
    rgb_to_lab,
)
from .config import ToolConfig, load_config
from .edgedetect import (
    CannyConfig,
    GradientField,
    canny,
    gaussian_blur,
    hysteresis,
    non_max_suppress,
    sobel_gradients,
    value_channel,
)
from .edgemixup import MixupConfig, mix, preprocess, preprocess_stages
from .fairmetrics import (
    ClassificationReport,
    ConfusionCounts,
    FairnessComparison,
    GroupedMetric,
    LabeledPrediction,
    SegmentationReport,
    accuracy,
    cai,
    cauci,
    classification_report,
    compare,
    dice,
    jaccard,
    margin_of_error,
    multiclass_auc,
    roc_auc,
    seg_confusion,
    seg_report,
)
from .skintone import ItaAssessment, ItaBins, assess_image, categorize, image_ita, pixel_ita

__version__ = "0.1.0"

__all__ = [
    "CannyConfig",
    "ClassificationReport",
    "ConfusionCounts",
    "FairnessComparison",
    "GradientField",
    "GroupedMetric",
    "ItaAssessment",
    "ItaBins",
    "LabeledPrediction",
    "MixupConfig",
    "RedMaskConfig",
    "SegmentationReport",
    "ToolConfig",
    "accuracy",
    "assess_image",
    "backend_name",
    "cai",
    "canny",
    "categorize",
    "cauci",
    "classification_report",
    "compare",
    "contrast_augment",
    "dice",
    "gaussian_blur",
    "hsv_to_rgb",
    "hysteresis",
    "image_ita",
    "jaccard",
    "load_config",
    "margin_of_error",
    "mix",
    "multiclass_auc",
    "non_max_suppress",
    "pixel_ita",
    "preprocess",
    "preprocess_stages",
    "rgb_image_to_hsv",
    "rgb_image_to_lab",
    "rgb_to_hsv",
    "rgb_to_lab",
    "roc_auc",
    "seg_confusion",
    "seg_report",
    "sobel_gradients",
    "value_channel",
]
