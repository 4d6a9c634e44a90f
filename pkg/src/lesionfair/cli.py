"""Subcommand front end: preprocess, skintone, eval-clf, eval-seg, compare,
summarize.

Global flags live on the group: ``--config`` (or env LESIONFAIR_CONFIG),
``--jobs`` for batch image work, ``--output`` for the result file or
directory.  Every subcommand is deterministic given its inputs and config;
batch runs are byte-identical for any ``--jobs`` value.  Exit status is 0
iff no per-item errors occurred; failing items are listed on stderr.
"""

import concurrent.futures
import csv
import io
import json
import warnings as _warnings
from pathlib import Path

import click

from . import dataio, edgemixup, fairmetrics, skintone as skintone_mod
from .config import load_config
from .edgemixup import MixupConfig
from .errors import MissingGroupError, NoSkinPixelsError, ToolkitError

IMAGE_SUFFIXES = (".png", ".jpg", ".jpeg")


@click.group()
@click.option(
    "--config",
    "config_path",
    type=click.Path(exists=True, dir_okay=False),
    envvar="LESIONFAIR_CONFIG",
    default=None,
    help="YAML config file (falls back to $LESIONFAIR_CONFIG).",
)
@click.option("--jobs", type=int, default=1, show_default=True,
              help="Worker threads for batch image work.")
@click.option("--output", "output_path", type=click.Path(), default=None,
              help="Output file (reports/CSV) or directory (preprocess).")
@click.pass_context
def main(ctx, config_path, jobs, output_path):
    """Edge-mixup preprocessing and skin-tone fairness evaluation."""
    ctx.ensure_object(dict)
    try:
        ctx.obj["config"] = load_config(config_path)
    except ToolkitError as exc:
        raise click.ClickException(str(exc))
    ctx.obj["jobs"] = max(1, jobs)
    ctx.obj["output"] = output_path


def _run_batch(fn, items, jobs):
    """Run ``fn`` over items, preserving input order in the results."""
    if jobs <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with concurrent.futures.ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


def _write_text(text, output_path):
    if output_path:
        Path(output_path).write_text(text, encoding="utf-8")
    else:
        click.echo(text, nl=False)


def _csv_text(rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerows(rows)
    return buf.getvalue()


def _describe(exc):
    """Per-item error line body; toolkit errors carry their stable code."""
    if isinstance(exc, ToolkitError):
        return f"[{exc.code}] {exc}"
    return str(exc)


def _collect_inputs(source):
    """(name, path) pairs from a directory of images or a manifest CSV."""
    source = Path(source)
    if source.is_dir():
        files = sorted(
            p for p in source.iterdir()
            if p.suffix.lower() in IMAGE_SUFFIXES and p.is_file()
        )
        return [(p.stem, p) for p in files]
    records = dataio.load_manifest(source)
    base = source.parent
    return [(Path(r.image_path).stem, r.resolve_image(base)) for r in records]


@main.command()
@click.argument("source", type=click.Path(exists=True))
@click.option("--beta", type=float, default=None,
              help="Override the edge-image weight from the config.")
@click.option("--emit-stages", is_flag=True,
              help="Also write *_contrast.png, *_gray.png and *_edges.png.")
@click.pass_context
def preprocess(ctx, source, beta, emit_stages):
    """Apply the preprocessing pipeline to a directory or manifest of images."""
    cfg = ctx.obj["config"].mixup
    if beta is not None:
        cfg = MixupConfig(beta=beta, red_mask=cfg.red_mask, canny=cfg.canny)
    try:
        cfg.validate()
        inputs = _collect_inputs(source)
    except ToolkitError as exc:
        raise click.ClickException(str(exc))
    out_dir = Path(ctx.obj["output"] or "preprocessed")
    out_dir.mkdir(parents=True, exist_ok=True)

    def work(item):
        name, path = item
        try:
            image = dataio.load_image_rgb(path)
            stages = edgemixup.preprocess_stages(image, cfg)
            dataio.save_png(stages.result, out_dir / f"{name}.png")
            if emit_stages:
                dataio.save_png(stages.contrast, out_dir / f"{name}_contrast.png")
                dataio.save_png(stages.gray, out_dir / f"{name}_gray.png")
                dataio.save_png(stages.edges * 255, out_dir / f"{name}_edges.png")
            return None
        except Exception as exc:
            return f"{path}: {_describe(exc)}"

    errors = [e for e in _run_batch(work, inputs, ctx.obj["jobs"]) if e]
    for err in errors:
        click.echo(err, err=True)
    click.echo(f"preprocessed {len(inputs) - len(errors)}/{len(inputs)} image(s) -> {out_dir}", err=True)
    ctx.exit(1 if errors else 0)


@main.command(name="skintone")
@click.argument("manifest", type=click.Path(exists=True, dir_okay=False))
@click.option("--use-masks", is_flag=True,
              help="Estimate over mask skin pixels instead of whole images.")
@click.pass_context
def skintone_cmd(ctx, manifest, use_masks):
    """Write per-sample skin-tone rows: angle, category, ls/ds group."""
    cfg = ctx.obj["config"]
    try:
        records = dataio.load_manifest(manifest)
    except ToolkitError as exc:
        raise click.ClickException(str(exc))
    base = Path(manifest).parent
    if not use_masks and records:
        click.echo("note: no skin masks in use; estimating over whole images", err=True)

    def work(rec):
        try:
            image = dataio.load_image_rgb(rec.resolve_image(base))
            mask = None
            if use_masks:
                mask_path = rec.resolve_mask(base)
                if mask_path is None:
                    raise NoSkinPixelsError("manifest row has no mask_path")
                mask = dataio.decode_mask(mask_path, cfg.palette)
            assessment = skintone_mod.assess_image(rec.sample_id, image, mask, cfg.ita_bins)
            return None, assessment
        except Exception as exc:
            return f"{rec.sample_id}: {_describe(exc)}", None

    results = _run_batch(work, records, ctx.obj["jobs"])
    errors = [err for err, _ in results if err]
    rows = [["sample_id", "ita_degrees", "category", "group", "n_pixels_used"]]
    for _, assessment in results:
        if assessment is None:
            continue
        rows.append([
            assessment.sample_id,
            f"{assessment.ita_degrees:.4f}",
            assessment.category,
            assessment.group,
            str(assessment.n_pixels_used),
        ])
    _write_text(_csv_text(rows), ctx.obj["output"])
    for err in errors:
        click.echo(err, err=True)
    ctx.exit(1 if errors else 0)


@main.command(name="eval-clf")
@click.argument("predictions", type=click.Path(exists=True, dir_okay=False))
@click.pass_context
def eval_clf(ctx, predictions):
    """Classification report (accuracy/AUC, per-group, gaps, margins)."""
    cfg = ctx.obj["config"]
    try:
        with _warnings.catch_warnings(record=True) as caught:
            _warnings.simplefilter("always")
            preds = dataio.load_predictions(predictions)
            report = fairmetrics.classification_report(
                preds, z=cfg.z_value, auc_averaging=cfg.auc_averaging
            )
    except ToolkitError as exc:
        raise click.ClickException(str(exc))
    payload = report.to_dict()
    payload["warnings"] = payload["warnings"] + [str(w.message) for w in caught]
    _write_text(fairmetrics.dumps_fixed_json(payload), ctx.obj["output"])


@main.command(name="eval-seg")
@click.argument("pred_dir", type=click.Path(exists=True, file_okay=False))
@click.argument("gt_dir", type=click.Path(exists=True, file_okay=False))
@click.argument("groups_csv", type=click.Path(exists=True, dir_okay=False))
@click.pass_context
def eval_seg(ctx, pred_dir, gt_dir, groups_csv):
    """Segmentation report from predicted/ground-truth mask directories."""
    cfg = ctx.obj["config"]
    try:
        groups = dataio.load_groups_csv(groups_csv)
    except ToolkitError as exc:
        raise click.ClickException(str(exc))
    gt_files = sorted(Path(gt_dir).glob("*.png"))
    if not gt_files:
        raise click.ClickException(f"no *.png masks in {gt_dir}")
    samples = []
    errors = []
    for gt_path in gt_files:
        sample_id = gt_path.stem
        pred_path = Path(pred_dir) / gt_path.name
        try:
            if not pred_path.exists():
                raise ToolkitError(f"no predicted mask {pred_path}")
            if sample_id not in groups:
                raise MissingGroupError("sample missing from the groups CSV")
            samples.append((
                dataio.decode_mask(pred_path, cfg.palette),
                dataio.decode_mask(gt_path, cfg.palette),
                groups[sample_id],
            ))
        except Exception as exc:
            errors.append(f"{sample_id}: {_describe(exc)}")
    if not samples:
        raise click.ClickException("no evaluable mask pairs")
    report = fairmetrics.seg_report(samples, z=cfg.z_value)
    payload = report.to_dict()
    payload["warnings"] = payload["warnings"] + errors
    _write_text(fairmetrics.dumps_fixed_json(payload), ctx.obj["output"])
    for err in errors:
        click.echo(err, err=True)
    ctx.exit(1 if errors else 0)


@main.command()
@click.argument("baseline", type=click.Path(exists=True, dir_okay=False))
@click.argument("debiased", type=click.Path(exists=True, dir_okay=False))
@click.option("--alphas", default=None,
              help="Comma-separated weights, e.g. 0.5,0.75 (default: config).")
@click.option("--format", "out_format", type=click.Choice(["json", "csv"]),
              default="json", show_default=True,
              help="JSON report or a metrics-as-rows CSV summary table.")
@click.pass_context
def compare(ctx, baseline, debiased, alphas, out_format):
    """Composite fairness-utility scores between two report JSON files."""
    cfg = ctx.obj["config"]
    if alphas:
        try:
            alpha_list = tuple(float(a) for a in alphas.split(","))
        except ValueError:
            raise click.ClickException(f"bad --alphas value {alphas!r}")
    else:
        alpha_list = cfg.alphas
    try:
        report_b = json.loads(Path(baseline).read_text(encoding="utf-8"))
        report_d = json.loads(Path(debiased).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise click.ClickException(f"invalid report JSON: {exc}")
    with _warnings.catch_warnings(record=True) as caught:
        _warnings.simplefilter("always")
        try:
            comparisons = fairmetrics.compare(report_b, report_d, alpha_list)
        except ToolkitError as exc:
            raise click.ClickException(str(exc))
    if out_format == "csv":
        _write_text(_csv_text(fairmetrics.comparison_csv_rows(comparisons)),
                    ctx.obj["output"])
        return
    payload = {
        "kind": "fairness_comparison",
        "alphas": list(alpha_list),
        "comparisons": [c.to_dict() for c in comparisons],
        "warnings": [str(w.message) for w in caught],
    }
    _write_text(fairmetrics.dumps_fixed_json(payload), ctx.obj["output"])


@main.command()
@click.argument("manifest", type=click.Path(exists=True, dir_okay=False))
@click.option("--groups", "groups_csv", type=click.Path(exists=True, dir_okay=False),
              default=None, help="sample_id,group CSV for records without a group.")
@click.pass_context
def summarize(ctx, manifest, groups_csv):
    """Dataset summary: counts per split, label and skin-tone group."""
    try:
        records = dataio.load_manifest(manifest)
        groups = dataio.load_groups_csv(groups_csv) if groups_csv else None
        table = dataio.summarize(records, groups)
    except ToolkitError as exc:
        raise click.ClickException(str(exc))
    _write_text(_csv_text(dataio.summary_to_csv_rows(table)), ctx.obj["output"])


if __name__ == "__main__":
    main()
