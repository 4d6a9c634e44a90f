"""Toolkit configuration: defaults, YAML config-file loading, and the
precedence rule (built-in defaults < config file < command-line flags).

Schema (all keys optional)::

    mixup:
      beta: 0.3                      # edge-image weight in [0, 1]
      red_mask:
        hue_windows: [[0, 10], [350, 360]]
        sat_min: 0.30
        val_min: 0.20
      canny:                         # convention defaults for the operator
        gaussian_sigma: 1.4
        kernel_radius: 2
        low_threshold: 50.0          # raw Sobel magnitude, 0-255-scale input
        high_threshold: 150.0
    ita_bins:
      categories: [very_light, light, intermediate, tan1, tan2, dark]
      thresholds: [55, 41, 28, 19, 10]
      ds_categories: [tan1, tan2, dark]
    auc_averaging: macro             # or micro
    z_value: 1.96
    palette: {0: [0, 0, 0], 1: [255, 255, 0], 2: [0, 0, 255]}
    alphas: [0.5, 0.75]
"""

from dataclasses import dataclass, field
from pathlib import Path

import yaml

from .colorcore import RedMaskConfig
from .dataio import PaletteConfig
from .edgedetect import CannyConfig
from .edgemixup import MixupConfig
from .errors import ConfigError
from .skintone import ItaBins


@dataclass(frozen=True)
class ToolConfig:
    mixup: MixupConfig = field(default_factory=MixupConfig)
    ita_bins: ItaBins = field(default_factory=ItaBins)
    auc_averaging: str = "macro"
    z_value: float = 1.96
    palette: PaletteConfig = field(default_factory=PaletteConfig)
    alphas: tuple = (0.5, 0.75)

    def validate(self):
        self.mixup.validate()
        self.ita_bins.validate()
        self.palette.validate()
        if self.auc_averaging not in ("macro", "micro"):
            raise ConfigError(f"auc_averaging must be macro or micro, got {self.auc_averaging!r}")
        if self.z_value <= 0:
            raise ConfigError("z_value must be > 0")
        if any(not 0.0 <= a <= 1.0 for a in self.alphas):
            raise ConfigError("every alpha must be in [0, 1]")


def _require_keys(mapping, allowed, where):
    unknown = set(mapping) - set(allowed)
    if unknown:
        raise ConfigError(f"unknown config key(s) in {where}: {sorted(unknown)}")


def _red_mask_from(mapping):
    _require_keys(mapping, {"hue_windows", "sat_min", "val_min"}, "mixup.red_mask")
    kwargs = {}
    if "hue_windows" in mapping:
        kwargs["hue_windows"] = tuple(
            (float(lo), float(hi)) for lo, hi in mapping["hue_windows"]
        )
    for key in ("sat_min", "val_min"):
        if key in mapping:
            kwargs[key] = float(mapping[key])
    return RedMaskConfig(**kwargs)


def _canny_from(mapping):
    allowed = {"gaussian_sigma", "kernel_radius", "low_threshold", "high_threshold"}
    _require_keys(mapping, allowed, "mixup.canny")
    kwargs = {}
    if "gaussian_sigma" in mapping:
        kwargs["gaussian_sigma"] = float(mapping["gaussian_sigma"])
    if "kernel_radius" in mapping:
        kwargs["kernel_radius"] = int(mapping["kernel_radius"])
    for key in ("low_threshold", "high_threshold"):
        if key in mapping:
            kwargs[key] = float(mapping[key])
    return CannyConfig(**kwargs)


def _mixup_from(mapping):
    _require_keys(mapping, {"beta", "red_mask", "canny"}, "mixup")
    kwargs = {}
    if "beta" in mapping:
        kwargs["beta"] = float(mapping["beta"])
    if "red_mask" in mapping:
        kwargs["red_mask"] = _red_mask_from(mapping["red_mask"] or {})
    if "canny" in mapping:
        kwargs["canny"] = _canny_from(mapping["canny"] or {})
    return MixupConfig(**kwargs)


def _ita_bins_from(mapping):
    _require_keys(mapping, {"categories", "thresholds", "ds_categories"}, "ita_bins")
    kwargs = {}
    if "categories" in mapping:
        kwargs["categories"] = tuple(str(c) for c in mapping["categories"])
    if "thresholds" in mapping:
        kwargs["thresholds"] = tuple(float(t) for t in mapping["thresholds"])
    if "ds_categories" in mapping:
        kwargs["ds_categories"] = frozenset(str(c) for c in mapping["ds_categories"])
    return ItaBins(**kwargs)


def _palette_from(mapping):
    return PaletteConfig(
        colors=tuple(
            sorted((int(k), tuple(int(c) for c in v)) for k, v in mapping.items())
        )
    )


def config_from_mapping(mapping):
    mapping = mapping or {}
    allowed = {"mixup", "ita_bins", "auc_averaging", "z_value", "palette", "alphas"}
    _require_keys(mapping, allowed, "config")
    kwargs = {}
    if "mixup" in mapping:
        kwargs["mixup"] = _mixup_from(mapping["mixup"] or {})
    if "ita_bins" in mapping:
        kwargs["ita_bins"] = _ita_bins_from(mapping["ita_bins"] or {})
    if "auc_averaging" in mapping:
        kwargs["auc_averaging"] = str(mapping["auc_averaging"])
    if "z_value" in mapping:
        kwargs["z_value"] = float(mapping["z_value"])
    if "palette" in mapping:
        kwargs["palette"] = _palette_from(mapping["palette"])
    if "alphas" in mapping:
        kwargs["alphas"] = tuple(float(a) for a in mapping["alphas"])
    cfg = ToolConfig(**kwargs)
    cfg.validate()
    return cfg


def load_config(path=None):
    """Load a YAML config file; with no path, return the defaults."""
    if path is None:
        cfg = ToolConfig()
        cfg.validate()
        return cfg
    text = Path(path).read_text(encoding="utf-8")
    try:
        mapping = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"{path}: invalid YAML: {exc}") from None
    if mapping is not None and not isinstance(mapping, dict):
        raise ConfigError(f"{path}: config root must be a mapping")
    return config_from_mapping(mapping)
