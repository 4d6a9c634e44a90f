"""Individual Typology Angle (ITA) estimation and skin-tone grouping.

ITA = atan2(L* - 50, b*) in degrees, clamped to [-90, 90]; the atan2 form
handles b* = 0 without a division.  Per-image ITA is a trimmed mean: pixels
whose ITA falls within one standard deviation of the median are averaged.
Categories bin the angle from very light down to dark; the binary protected
group is ds (dark skin) iff the category is one of the configured dark set.
"""

from dataclasses import dataclass

import numpy as np

from . import colorcore
from .errors import ConfigError, NoSkinPixelsError, ShapeMismatchError

SKIN_CLASS = 1  # label-mask class id selecting skin pixels

DEFAULT_CATEGORIES = ("very_light", "light", "intermediate", "tan1", "tan2", "dark")
# Lower bounds (exclusive) for every category except the last, in degrees.
DEFAULT_THRESHOLDS = (55.0, 41.0, 28.0, 19.0, 10.0)
DEFAULT_DS_CATEGORIES = frozenset({"tan1", "tan2", "dark"})


@dataclass(frozen=True)
class ItaBins:
    """Ordered category names with strictly decreasing lower bounds; the last
    category has no lower bound.  ``ds_categories`` is the subset counted as
    dark skin."""

    categories: tuple = DEFAULT_CATEGORIES
    thresholds: tuple = DEFAULT_THRESHOLDS
    ds_categories: frozenset = DEFAULT_DS_CATEGORIES

    def validate(self):
        if len(self.thresholds) != len(self.categories) - 1:
            raise ConfigError("need exactly one threshold fewer than categories")
        if any(t2 >= t1 for t1, t2 in zip(self.thresholds, self.thresholds[1:])):
            raise ConfigError("thresholds must be strictly decreasing")
        unknown = set(self.ds_categories) - set(self.categories)
        if unknown:
            raise ConfigError(f"ds_categories not in categories: {sorted(unknown)}")


@dataclass(frozen=True)
class ItaAssessment:
    sample_id: str
    ita_degrees: float
    category: str
    group: str
    n_pixels_used: int
    masked: bool  # False means the whole image was used (no skin mask)


def ita_from_lab_arrays(lightness, yellow_blue):
    """Vectorized ITA in degrees, clamped to [-90, 90]."""
    ita = np.degrees(np.arctan2(lightness - 50.0, yellow_blue))
    return np.clip(ita, -90.0, 90.0)


def pixel_ita(lab):
    """ITA of one CIELAB triple (L*, a*, b*)."""
    value = ita_from_lab_arrays(np.float64(lab[0]), np.float64(lab[2]))
    return float(value)


def categorize(ita, bins=None):
    """Map an ITA angle to (category, group); group is 'ds' iff the category
    is in ``bins.ds_categories``, else 'ls'."""
    if bins is None:
        bins = ItaBins()
    bins.validate()
    category = bins.categories[-1]
    for name, lower in zip(bins.categories, bins.thresholds):
        if ita > lower:
            category = name
            break
    group = "ds" if category in bins.ds_categories else "ls"
    return category, group


def trimmed_mean(values):
    """Mean of the values within one standard deviation (population) of the
    median; returns (mean, n_kept).  A constant population keeps everything."""
    values = np.asarray(values, dtype=np.float64)
    if values.size == 0:
        raise NoSkinPixelsError("no values to aggregate")
    first = values.flat[0]
    if np.all(values == first):
        # short-circuit so a constant population returns its value exactly
        # (float reductions wobble in the last ulp otherwise)
        return float(first), int(values.size)
    median = np.median(values)
    sigma = np.std(values)
    kept = values[np.abs(values - median) <= sigma]
    if kept.size == 0:  # cannot happen for sane data; keep the full mean
        kept = values
    return float(np.mean(kept)), int(kept.size)


def image_ita(image, skin_mask=None):
    """Estimate one image's ITA.

    When ``skin_mask`` is given, only pixels whose mask value equals the skin
    class are used; otherwise every pixel is a candidate.  Per-pixel ITA
    values are aggregated with ``trimmed_mean``.

    Returns (ita_degrees, n_pixels_used).
    """
    image = colorcore.ensure_rgb_image(image)
    if skin_mask is not None:
        skin_mask = np.asarray(skin_mask)
        if skin_mask.shape != image.shape[:2]:
            raise ShapeMismatchError(
                f"mask {skin_mask.shape} does not match image {image.shape[:2]}"
            )
        pixels = image[skin_mask == SKIN_CLASS]
    else:
        pixels = image.reshape(-1, 3)
    if pixels.shape[0] == 0:
        raise NoSkinPixelsError("no skin pixels selected for ITA estimation")
    lab = colorcore.rgb_image_to_lab(pixels.reshape(1, -1, 3))[0]
    values = ita_from_lab_arrays(lab[:, 0], lab[:, 2])
    return trimmed_mean(values)


def assess_image(sample_id, image, skin_mask=None, bins=None):
    """Full per-image assessment: angle, category and binary group."""
    ita, n_used = image_ita(image, skin_mask)
    category, group = categorize(ita, bins)
    return ItaAssessment(
        sample_id=sample_id,
        ita_degrees=ita,
        category=category,
        group=group,
        n_pixels_used=n_used,
        masked=skin_mask is not None,
    )
