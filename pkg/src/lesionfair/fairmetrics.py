"""Utility and fairness metrics over model predictions and segmentation
masks: accuracy, ROC AUC, Jaccard/Dice, per-group values and gaps, Rawlsian
minima, composite fairness-utility scores and margins of error.

Accuracy-type values are reported in percent, AUC-type values on the 0-1
scale.  Gaps are absolute differences between the light-skin (ls) and
dark-skin (ds) groups.  The composite scores

    score(alpha) = alpha * (gap_baseline - gap_debiased)
                 + (1 - alpha) * (value_debiased - value_baseline)

trade a gap reduction against a utility change; ``cai`` is the accuracy
variant, ``cauci`` the AUC variant.
"""

import math
import warnings as _warnings
from dataclasses import dataclass

import numpy as np

from .errors import (
    ConfigError,
    DegenerateLabelsError,
    EmptyGroupError,
    InvalidLabelError,
    ShapeMismatchError,
)

CLASSES = ("NO", "EM", "HZ", "TC")
GROUPS = ("ls", "ds")
MASK_CLASSES = (0, 1, 2)  # background, skin, lesion


@dataclass(frozen=True)
class LabeledPrediction:
    sample_id: str
    true_label: str
    predicted_label: str
    scores: tuple  # per-class probabilities in CLASSES order
    group: str = None


def _select(preds, subset):
    if subset is None:
        return list(preds)
    return [p for p in preds if p.group == subset]


def accuracy(preds, subset=None):
    """Fraction of correct predictions over the (optionally group-filtered)
    selection."""
    chosen = _select(preds, subset)
    if not chosen:
        raise EmptyGroupError(f"no predictions in subset {subset!r}")
    correct = sum(1 for p in chosen if p.predicted_label == p.true_label)
    return correct / len(chosen)


def roc_auc(pairs):
    """Area under the ROC curve by trapezoidal sweep over distinct score
    thresholds; tied scores cross simultaneously, which makes the result
    equal to the Mann-Whitney rank statistic with 0.5 credit for ties."""
    pairs = list(pairs)
    n_pos = sum(1 for _, label in pairs if label)
    n_neg = len(pairs) - n_pos
    if n_pos == 0 or n_neg == 0:
        raise DegenerateLabelsError("need at least one positive and one negative")
    pairs.sort(key=lambda item: -item[0])
    area = 0.0
    tp = 0
    i = 0
    while i < len(pairs):
        j = i
        pos_here = neg_here = 0
        while j < len(pairs) and pairs[j][0] == pairs[i][0]:
            if pairs[j][1]:
                pos_here += 1
            else:
                neg_here += 1
            j += 1
        # trapezoid between the ROC points before/after this threshold
        area += neg_here * (tp + (tp + pos_here)) / 2.0
        tp += pos_here
        i = j
    return area / (n_pos * n_neg)


def per_class_auc(preds, subset=None):
    """One-vs-rest AUC per class; a class that is degenerate in the selection
    (no positives or no negatives) maps to None."""
    chosen = _select(preds, subset)
    if not chosen:
        raise EmptyGroupError(f"no predictions in subset {subset!r}")
    out = {}
    for idx, cls in enumerate(CLASSES):
        pairs = [(p.scores[idx], p.true_label == cls) for p in chosen]
        try:
            out[cls] = roc_auc(pairs)
        except DegenerateLabelsError:
            out[cls] = None
    return out


def multiclass_auc(preds, subset=None, averaging="macro"):
    """Multiclass AUC: macro averages one-vs-rest AUCs over the classes that
    are non-degenerate in the selection; micro pools every (score, is-class)
    pair into a single binary problem."""
    if averaging == "macro":
        values = [v for v in per_class_auc(preds, subset).values() if v is not None]
        if not values:
            raise DegenerateLabelsError("every class is degenerate in the selection")
        return sum(values) / len(values)
    if averaging == "micro":
        chosen = _select(preds, subset)
        if not chosen:
            raise EmptyGroupError(f"no predictions in subset {subset!r}")
        pooled = []
        for p in chosen:
            for idx, cls in enumerate(CLASSES):
                pooled.append((p.scores[idx], p.true_label == cls))
        return roc_auc(pooled)
    raise ConfigError(f"unknown AUC averaging {averaging!r}")


def _composite(alpha, value_b, gap_b, value_d, gap_d):
    if not 0.0 <= alpha <= 1.0:
        raise ConfigError(f"alpha {alpha} outside [0, 1]")
    return alpha * (gap_b - gap_d) + (1.0 - alpha) * (value_d - value_b)


def cai(alpha, acc_b, gap_b, acc_d, gap_d):
    """Composite accuracy-improvement score (accuracies in percent)."""
    return _composite(alpha, acc_b, gap_b, acc_d, gap_d)


def cauci(alpha, auc_b, gap_b, auc_d, gap_d):
    """Composite AUC-improvement score (AUCs on the 0-1 scale)."""
    return _composite(alpha, auc_b, gap_b, auc_d, gap_d)


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    fp: int
    fn: int
    tn: int


def seg_confusion(pred, gt, class_id):
    """One-vs-rest pixel confusion counts for one mask class."""
    pred = np.asarray(pred)
    gt = np.asarray(gt)
    if pred.shape != gt.shape:
        raise ShapeMismatchError(f"mask shapes differ: {pred.shape} vs {gt.shape}")
    if class_id not in MASK_CLASSES:
        raise InvalidLabelError(f"class id {class_id} not in {MASK_CLASSES}")
    for name, mask in (("pred", pred), ("gt", gt)):
        bad = ~np.isin(mask, MASK_CLASSES)
        if bad.any():
            y, x = np.argwhere(bad)[0]
            raise InvalidLabelError(
                f"{name} mask has label {mask[y, x]} at (x={x}, y={y})"
            )
    pred_pos = pred == class_id
    gt_pos = gt == class_id
    tp = int(np.sum(pred_pos & gt_pos))
    fp = int(np.sum(pred_pos & ~gt_pos))
    fn = int(np.sum(~pred_pos & gt_pos))
    tn = int(pred.size - tp - fp - fn)
    return ConfusionCounts(tp=tp, fp=fp, fn=fn, tn=tn)


def class_absent(counts):
    """True when the class appears in neither mask (tp+fp+fn == 0)."""
    return counts.tp + counts.fp + counts.fn == 0


def jaccard(counts):
    """tp / (tp + fp + fn); 1.0 by convention when the class is absent from
    both masks (callers flag that case via ``class_absent``)."""
    denom = counts.tp + counts.fp + counts.fn
    if denom == 0:
        return 1.0
    return counts.tp / denom


def dice(counts):
    """2*tp / (2*tp + fp + fn); 1.0 when the class is absent from both."""
    denom = 2 * counts.tp + counts.fp + counts.fn
    if denom == 0:
        return 1.0
    return 2 * counts.tp / denom


def _binomial_halfwidth(p, n, z):
    if n < 1:
        raise EmptyGroupError("margin of error needs n >= 1")
    if not 0.0 <= p <= 1.0:
        raise ConfigError(f"proportion {p} outside [0, 1]")
    return z * math.sqrt(p * (1.0 - p) / n)


def margin_of_error(p, n, z=1.96):
    """Normal-approximation half-width z*sqrt(p(1-p)/n) for a proportion,
    in percentage points."""
    return 100.0 * _binomial_halfwidth(p, n, z)


@dataclass(frozen=True)
class GroupValue:
    value: float
    n: int
    margin: float = None

    def to_dict(self):
        return {"value": self.value, "n": self.n, "margin": self.margin}


@dataclass(frozen=True)
class GroupedMetric:
    """One metric with per-group breakdown, absolute ls/ds gap and the
    Rawlsian (ds-group) value."""

    overall: float
    margin: float
    per_group: dict
    gap: float = None
    gap_margin: float = None
    min_ds: float = None

    def to_dict(self):
        return {
            "overall": self.overall,
            "margin": self.margin,
            "per_group": {k: v.to_dict() for k, v in self.per_group.items()},
            "gap": self.gap,
            "gap_margin": self.gap_margin,
            "min_ds": self.min_ds,
        }


@dataclass(frozen=True)
class ClassificationReport:
    n: int
    accuracy: GroupedMetric  # percent
    auc: GroupedMetric  # 0-1 scale
    notes: tuple = ()
    warnings: tuple = ()

    def to_dict(self):
        return {
            "kind": "classification",
            "n": self.n,
            "accuracy": self.accuracy.to_dict(),
            "auc": self.auc.to_dict(),
            "notes": list(self.notes),
            "warnings": list(self.warnings),
        }


@dataclass(frozen=True)
class SegmentationReport:
    n_images: int
    jaccard: GroupedMetric
    dice: GroupedMetric
    class_absent_count: int = 0
    warnings: tuple = ()

    def to_dict(self):
        return {
            "kind": "segmentation",
            "n_images": self.n_images,
            "jaccard": self.jaccard.to_dict(),
            "dice": self.dice.to_dict(),
            "class_absent_count": self.class_absent_count,
            "warnings": list(self.warnings),
        }


@dataclass(frozen=True)
class FairnessComparison:
    alpha: float
    metric_kind: str  # "accuracy" or "auc"
    baseline_value: float
    baseline_gap: float
    debiased_value: float
    debiased_gap: float
    score: float
    baseline_min_ds: float = None
    debiased_min_ds: float = None

    def to_dict(self):
        return {
            "metric_kind": self.metric_kind,
            "alpha": self.alpha,
            "baseline_value": self.baseline_value,
            "baseline_gap": self.baseline_gap,
            "baseline_min_ds": self.baseline_min_ds,
            "debiased_value": self.debiased_value,
            "debiased_gap": self.debiased_gap,
            "debiased_min_ds": self.debiased_min_ds,
            "score": self.score,
        }


def classification_report(preds, z=1.96, auc_averaging="macro"):
    """Utility+fairness report for one prediction set: accuracy and AUC,
    overall and per group, gaps, ds minima and margins of error."""
    preds = list(preds)
    if not preds:
        raise EmptyGroupError("no predictions")
    notes = [
        "margins are normal-approximation 95%-style half-widths z*sqrt(p(1-p)/n); "
        "the same approximation is applied to AUC values",
        "gap margins use two-proportion variance propagation",
    ]
    report_warnings = []

    present = [g for g in GROUPS if any(p.group == g for p in preds)]
    both_groups = set(present) == set(GROUPS)
    if not both_groups:
        report_warnings.append(
            f"groups present: {present or ['<none>']}; gaps and ds minima omitted"
        )

    def grouped(value_fn, scale):
        fractions = {grp: value_fn(grp) for grp in present}
        counts = {grp: sum(1 for p in preds if p.group == grp) for grp in present}
        per_group = {
            grp: GroupValue(
                value=scale * fractions[grp],
                n=counts[grp],
                margin=scale * _binomial_halfwidth(fractions[grp], counts[grp], z),
            )
            for grp in present
        }
        gap = gap_margin = min_ds = None
        if both_groups:
            gap = abs(per_group["ls"].value - per_group["ds"].value)
            gap_margin = scale * z * math.sqrt(
                fractions["ls"] * (1.0 - fractions["ls"]) / counts["ls"]
                + fractions["ds"] * (1.0 - fractions["ds"]) / counts["ds"]
            )
            min_ds = per_group["ds"].value
        overall = value_fn(None)
        return GroupedMetric(
            overall=scale * overall,
            margin=scale * _binomial_halfwidth(overall, len(preds), z),
            per_group=per_group,
            gap=gap,
            gap_margin=gap_margin,
            min_ds=min_ds,
        )

    acc_metric = grouped(lambda g: accuracy(preds, g), scale=100.0)

    for scope in [None] + present:
        for cls, val in per_class_auc(preds, scope).items():
            if val is None:
                report_warnings.append(
                    f"class {cls} degenerate in scope {scope or 'overall'}; "
                    "excluded from macro AUC"
                )
    auc_metric = grouped(
        lambda g: multiclass_auc(preds, g, averaging=auc_averaging), scale=1.0
    )

    return ClassificationReport(
        n=len(preds),
        accuracy=acc_metric,
        auc=auc_metric,
        notes=tuple(notes),
        warnings=tuple(report_warnings),
    )


def seg_scores_per_image(pred, gt):
    """(jaccard, dice, n_absent) for one mask pair: per-class one-vs-rest
    scores, macro-averaged over the three mask classes."""
    j_vals = []
    d_vals = []
    absent = 0
    for cls in MASK_CLASSES:
        counts = seg_confusion(pred, gt, cls)
        if class_absent(counts):
            absent += 1
        j_vals.append(jaccard(counts))
        d_vals.append(dice(counts))
    return sum(j_vals) / len(j_vals), sum(d_vals) / len(d_vals), absent


def seg_report(samples, z=1.96):
    """Segmentation report over (pred_mask, gt_mask, group) triples:
    per-image macro Jaccard/Dice, dataset means, per-group means and gaps."""
    samples = list(samples)
    if not samples:
        raise EmptyGroupError("no segmentation samples")
    per_image = []
    absent_total = 0
    for pred, gt, group in samples:
        j, d, absent = seg_scores_per_image(pred, gt)
        per_image.append((j, d, group))
        absent_total += absent

    report_warnings = []
    present = [g for g in GROUPS if any(s[2] == g for s in per_image)]
    both_groups = set(present) == set(GROUPS)
    if not both_groups:
        report_warnings.append(
            f"groups present: {present or ['<none>']}; gaps and ds minima omitted"
        )
    if absent_total:
        report_warnings.append(
            f"{absent_total} per-image class scores used the class-absent "
            "convention (scored 1.0)"
        )

    def mean_margin(values):
        arr = np.asarray(values, dtype=np.float64)
        margin = None
        if arr.size > 1:
            margin = z * float(np.std(arr, ddof=1)) / math.sqrt(arr.size)
        return float(np.mean(arr)), margin

    def grouped(index):
        overall, margin = mean_margin([s[index] for s in per_image])
        per_group = {}
        for grp in present:
            vals = [s[index] for s in per_image if s[2] == grp]
            value, grp_margin = mean_margin(vals)
            per_group[grp] = GroupValue(value=value, n=len(vals), margin=grp_margin)
        gap = min_ds = None
        if both_groups:
            gap = abs(per_group["ls"].value - per_group["ds"].value)
            min_ds = per_group["ds"].value
        return GroupedMetric(
            overall=overall,
            margin=margin,
            per_group=per_group,
            gap=gap,
            gap_margin=None,
            min_ds=min_ds,
        )

    return SegmentationReport(
        n_images=len(samples),
        jaccard=grouped(0),
        dice=grouped(1),
        class_absent_count=absent_total,
        warnings=tuple(report_warnings),
    )


def dumps_fixed_json(obj, indent=2):
    """Serialize a report structure to JSON with deterministic key order
    (insertion order) and every float rendered as a fixed 6-decimal number,
    so identical reports are byte-identical."""

    def emit(node, depth):
        pad = " " * (indent * depth)
        inner = " " * (indent * (depth + 1))
        if isinstance(node, dict):
            if not node:
                return "{}"
            items = [
                f'{inner}"{key}": {emit(value, depth + 1)}'
                for key, value in node.items()
            ]
            return "{\n" + ",\n".join(items) + "\n" + pad + "}"
        if isinstance(node, (list, tuple)):
            if not node:
                return "[]"
            items = [f"{inner}{emit(value, depth + 1)}" for value in node]
            return "[\n" + ",\n".join(items) + "\n" + pad + "]"
        if node is None:
            return "null"
        if isinstance(node, bool):
            return "true" if node else "false"
        if isinstance(node, float):
            return format(node, ".6f")
        if isinstance(node, (int, np.integer)):
            return str(int(node))
        return '"' + str(node).replace("\\", "\\\\").replace('"', '\\"') + '"'

    return emit(obj, 0) + "\n"


def _metric_triple(report, kind):
    """(value, gap, min_ds) for one metric kind out of a report object or a
    parsed report dict; None when the kind or its gap is unavailable.  The
    ds minimum is optional metadata carried along when present."""
    if isinstance(report, ClassificationReport):
        report = report.to_dict()
    metric = report.get(kind)
    if metric is None:
        return None
    value = metric.get("overall")
    gap = metric.get("gap")
    if value is None or gap is None:
        return None
    min_ds = metric.get("min_ds")
    return float(value), float(gap), None if min_ds is None else float(min_ds)


def compare(baseline, debiased, alphas):
    """Composite fairness-utility comparisons for every alpha and for each
    metric kind (accuracy -> cai, auc -> cauci) available in both reports,
    carrying the raw gaps and ds minima side by side; a kind missing from
    either report is skipped with a warning."""
    comparisons = []
    for kind in ("accuracy", "auc"):
        triple_b = _metric_triple(baseline, kind)
        triple_d = _metric_triple(debiased, kind)
        if triple_b is None or triple_d is None:
            _warnings.warn(
                f"metric {kind!r} missing from one of the reports; comparison omitted",
                stacklevel=2,
            )
            continue
        value_b, gap_b, min_b = triple_b
        value_d, gap_d, min_d = triple_d
        for alpha in alphas:
            comparisons.append(
                FairnessComparison(
                    alpha=alpha,
                    metric_kind=kind,
                    baseline_value=value_b,
                    baseline_gap=gap_b,
                    debiased_value=value_d,
                    debiased_gap=gap_d,
                    score=_composite(alpha, value_b, gap_b, value_d, gap_d),
                    baseline_min_ds=min_b,
                    debiased_min_ds=min_d,
                )
            )
    return comparisons


def comparison_csv_rows(comparisons):
    """Flatten comparisons into a metrics-as-rows CSV layout (methods as
    the two value columns), one block per metric kind."""
    labels = {"accuracy": ("acc", "CAI"), "auc": ("AUC", "CAUCI")}
    rows = [["metric", "baseline", "debiased"]]
    for kind in ("accuracy", "auc"):
        block = [c for c in comparisons if c.metric_kind == kind]
        if not block:
            continue
        value_label, score_label = labels[kind]
        first = block[0]
        rows.append([value_label, _cell(first.baseline_value), _cell(first.debiased_value)])
        rows.append([f"{value_label}_gap", _cell(first.baseline_gap), _cell(first.debiased_gap)])
        if first.baseline_min_ds is not None or first.debiased_min_ds is not None:
            rows.append([
                f"{value_label}_min_ds",
                _cell(first.baseline_min_ds),
                _cell(first.debiased_min_ds),
            ])
        for comp in block:
            rows.append([f"{score_label}_{comp.alpha:g}", "", _cell(comp.score)])
    return rows


def _cell(value):
    return "" if value is None else format(float(value), ".6f")
