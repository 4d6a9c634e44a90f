"""Dataset manifests, prediction manifests, mask codecs and dataset
summaries.

Manifests are UTF-8 CSV with a required header; file paths inside a manifest
resolve relative to the manifest's directory.  Masks are palette-coded PNG
(lossless); photos may additionally be JPEG on input.
"""

import csv
import warnings as _warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image

from .errors import (
    BadDistributionError,
    ConfigError,
    DuplicateIdError,
    InvalidFieldError,
    MissingGroupError,
    UnknownPaletteColorError,
)
from .fairmetrics import CLASSES, GROUPS, LabeledPrediction

SPLITS = ("train", "val", "test")

MANIFEST_HEADER = ["sample_id", "image_path", "mask_path", "label", "split", "group"]
PREDICTIONS_HEADER = [
    "sample_id", "true_label", "pred_label", "p_NO", "p_EM", "p_HZ", "p_TC", "group",
]


@dataclass(frozen=True)
class ManifestRecord:
    sample_id: str
    image_path: str
    mask_path: str  # "" when absent
    label: str
    split: str
    group: str  # "" when absent

    def resolve_image(self, base):
        return Path(base) / self.image_path

    def resolve_mask(self, base):
        return Path(base) / self.mask_path if self.mask_path else None


@dataclass(frozen=True)
class PaletteConfig:
    """Injective class-id -> RGB mapping for mask rendering and parsing."""

    colors: tuple = ((0, (0, 0, 0)), (1, (255, 255, 0)), (2, (0, 0, 255)))

    def validate(self):
        rgb = [c for _, c in self.colors]
        if len(set(rgb)) != len(rgb):
            raise ConfigError("palette colors must be distinct")

    def as_dict(self):
        return dict(self.colors)


def _check_header(actual, expected, path):
    if actual != expected:
        raise InvalidFieldError(
            f"{path}: expected header {','.join(expected)}, got "
            f"{','.join(actual or ['<empty>'])}"
        )


def load_manifest(path):
    """Parse a dataset manifest CSV into validated records (order kept)."""
    path = Path(path)
    records = []
    seen = set()
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        _check_header(header, MANIFEST_HEADER, path)
        for row_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(MANIFEST_HEADER):
                raise InvalidFieldError(f"{path}:{row_no}: expected 6 fields, got {len(row)}")
            sample_id, image_path, mask_path, label, split, group = (f.strip() for f in row)
            if sample_id in seen:
                raise DuplicateIdError(f"{path}:{row_no}: duplicate sample_id {sample_id!r}")
            seen.add(sample_id)
            if label not in CLASSES:
                raise InvalidFieldError(f"{path}:{row_no}: unknown label {label!r}")
            if split not in SPLITS:
                raise InvalidFieldError(f"{path}:{row_no}: unknown split {split!r}")
            if group and group not in GROUPS:
                raise InvalidFieldError(f"{path}:{row_no}: unknown group {group!r}")
            records.append(
                ManifestRecord(
                    sample_id=sample_id,
                    image_path=image_path,
                    mask_path=mask_path,
                    label=label,
                    split=split,
                    group=group,
                )
            )
    return records


def load_predictions(path):
    """Parse a prediction manifest CSV.

    Probability rows must sum to 1 within 1e-6.  A pred_label that is not
    the argmax of the scores is accepted with a warning.
    """
    path = Path(path)
    preds = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        _check_header(header, PREDICTIONS_HEADER, path)
        for row_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(PREDICTIONS_HEADER):
                raise InvalidFieldError(f"{path}:{row_no}: expected 8 fields, got {len(row)}")
            sample_id, true_label, pred_label = (f.strip() for f in row[:3])
            group = row[7].strip()
            if true_label not in CLASSES:
                raise InvalidFieldError(f"{path}:{row_no}: unknown true_label {true_label!r}")
            if pred_label not in CLASSES:
                raise InvalidFieldError(f"{path}:{row_no}: unknown pred_label {pred_label!r}")
            if group and group not in GROUPS:
                raise InvalidFieldError(f"{path}:{row_no}: unknown group {group!r}")
            try:
                scores = tuple(float(f) for f in row[3:7])
            except ValueError:
                raise InvalidFieldError(f"{path}:{row_no}: non-numeric probability") from None
            if any(not 0.0 <= s <= 1.0 for s in scores):
                raise BadDistributionError(f"{path}:{row_no}: probability outside [0, 1]")
            if abs(sum(scores) - 1.0) > 1e-6:
                raise BadDistributionError(
                    f"{path}:{row_no}: probabilities sum to {sum(scores):.8f}"
                )
            argmax_label = CLASSES[max(range(len(CLASSES)), key=lambda i: scores[i])]
            if pred_label != argmax_label:
                _warnings.warn(
                    f"{path}:{row_no}: pred_label {pred_label} is not the argmax "
                    f"({argmax_label}); keeping the explicit label",
                    stacklevel=2,
                )
            preds.append(
                LabeledPrediction(
                    sample_id=sample_id,
                    true_label=true_label,
                    predicted_label=pred_label,
                    scores=scores,
                    group=group or None,
                )
            )
    return preds


def load_image_rgb(path):
    """Read a photo (PNG or JPEG) as a uint8 RGB array."""
    with Image.open(path) as img:
        return np.asarray(img.convert("RGB"))


def save_png(array, path):
    """Write an image array (RGB, grayscale, or {0,1} edge map) as PNG."""
    array = np.asarray(array)
    if array.ndim == 2:
        img = Image.fromarray(array.astype(np.uint8), mode="L")
    else:
        img = Image.fromarray(array.astype(np.uint8), mode="RGB")
    img.save(path, format="PNG")


def decode_mask(path, palette=None):
    """Read a palette-coded mask image into a class-id array."""
    if palette is None:
        palette = PaletteConfig()
    palette.validate()
    rgb = load_image_rgb(path)
    mask = np.full(rgb.shape[:2], -1, dtype=np.int16)
    for class_id, color in palette.colors:
        mask[np.all(rgb == np.asarray(color, dtype=np.uint8), axis=-1)] = class_id
    unknown = mask < 0
    if unknown.any():
        y, x = np.argwhere(unknown)[0]
        raise UnknownPaletteColorError(
            f"{path}: color {tuple(int(c) for c in rgb[y, x])} at (x={x}, y={y}) "
            "is not in the palette"
        )
    return mask.astype(np.uint8)


def render_mask(mask, palette=None):
    """Render a class-id array back to an RGB array via the palette."""
    if palette is None:
        palette = PaletteConfig()
    palette.validate()
    mask = np.asarray(mask)
    out = np.zeros(mask.shape + (3,), dtype=np.uint8)
    known = np.zeros(mask.shape, dtype=bool)
    for class_id, color in palette.colors:
        sel = mask == class_id
        out[sel] = color
        known |= sel
    if not known.all():
        y, x = np.argwhere(~known)[0]
        raise UnknownPaletteColorError(
            f"class id {int(mask[y, x])} at (x={x}, y={y}) is not in the palette"
        )
    return out


def summarize(records, groups=None):
    """Counts per (split x label x group) plus per-split totals.

    ``groups`` maps sample_id -> group for records whose manifest group cell
    is empty.  Returns {split: {label: {group: n}, "total": {group: n}}}.
    """
    groups = groups or {}
    unresolved = []
    table = {
        split: {
            **{label: {g: 0 for g in GROUPS} for label in CLASSES},
            "total": {g: 0 for g in GROUPS},
        }
        for split in SPLITS
    }
    for rec in records:
        group = rec.group or groups.get(rec.sample_id, "")
        if group not in GROUPS:
            unresolved.append(rec.sample_id)
            continue
        table[rec.split][rec.label][group] += 1
        table[rec.split]["total"][group] += 1
    if unresolved:
        raise MissingGroupError(
            f"{len(unresolved)} record(s) without a resolvable group: "
            + ", ".join(unresolved[:20])
        )
    return table


def summary_to_csv_rows(table):
    """Flatten a summary table to CSV rows in a fixed layout."""
    rows = [["split", "label", "ls", "ds"]]
    for split in SPLITS:
        for label in CLASSES:
            cell = table[split][label]
            rows.append([split, label, str(cell["ls"]), str(cell["ds"])])
        total = table[split]["total"]
        rows.append([split, "total", str(total["ls"]), str(total["ds"])])
    return rows


def load_groups_csv(path):
    """Read a sample_id,group CSV into a dict."""
    path = Path(path)
    out = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        _check_header(header, ["sample_id", "group"], path)
        for row_no, row in enumerate(reader, start=2):
            if not row:
                continue
            sample_id, group = row[0].strip(), row[1].strip()
            if group not in GROUPS:
                raise InvalidFieldError(f"{path}:{row_no}: unknown group {group!r}")
            out[sample_id] = group
    return out
