"""Acceptance suite.

Each test implements one acceptance criterion at its stated tolerance and
prints one PASS/FAIL line (run with ``pytest tests/test_acceptance.py -v -s``
to see the lines).  Raw model-dependent numbers (absolute segmentation
Jaccard/Dice and raw model accuracies) are out of desk-scale reach by
design: they would need trained models and the unreleased datasets, so they
are covered by the metric-arithmetic reconstructions and the crafted-mask
property suite here, not by re-running any model.
"""

import time
from fractions import Fraction

import numpy as np
import pytest
from click.testing import CliRunner

from helpers import (
    GOLDEN_DIR,
    GOLDEN_FIXTURES,
    aa_square_image,
    auc_pair_oracle,
    count_components8,
    neighbor_counts,
)
from lesionfair import colorcore, edgedetect, fairmetrics, skintone
from lesionfair.cli import main as cli_main
from lesionfair.dataio import save_png
from lesionfair.edgemixup import MixupConfig, preprocess

# Printed classification table: method -> (acc %, acc_gap, AUC, AUC_gap)
REFERENCE_ROWS = {
    "ad": (81.79, 5.33, 0.9555, 0.0094),
    "mask": (73.84, 0.83, 0.9072, 0.0275),
    "mask_ad": (72.52, 4.82, 0.9053, 0.0414),
    "dexined_avg": (69.87, 19.79, 0.8892, 0.0898),
    "edge_mixup": (83.44, 2.16, 0.9623, 0.0076),
}
BASELINE_ROW = (85.10, 13.15, 0.9725, 0.0331)

EXPECTED_CAI = {
    "edge_mixup": (4.6650, 7.8275),
    "ad": (2.2550, 5.0375),
    "mask": (0.5300, 6.4250),
    "mask_ad": (-2.1250, 3.1025),
    "dexined_avg": (-10.9350, -8.7875),
}
EXPECTED_CAUCI = {
    "edge_mixup": (0.007650, 0.016575),
    "ad": (0.0034, 0.0135),
    "mask": (-0.0299, -0.0121),
    "mask_ad": (-0.0378, -0.0230),
    "dexined_avg": (-0.0700, -0.063350),
}
EXPECTED_MARGINS = [
    (0.8510, 4.02), (0.8344, 4.19), (0.8179, 4.35),
    (0.7384, 4.96), (0.7252, 5.04), (0.6987, 5.17),
]


def _announce(name, body):
    try:
        body()
    except BaseException:
        print(f"ACCEPTANCE {name}: FAIL")
        raise
    print(f"ACCEPTANCE {name}: PASS")


def _report(acc, gap, auc, auc_gap):
    return {
        "accuracy": {"overall": acc, "gap": gap},
        "auc": {"overall": auc, "gap": auc_gap},
    }


def test_cai_reconstruction():
    def body():
        start = time.perf_counter()
        baseline = _report(*BASELINE_ROW)
        for method, row in REFERENCE_ROWS.items():
            comps = fairmetrics.compare(baseline, _report(*row), (0.5, 0.75))
            scores = {
                (c.metric_kind, c.alpha): c.score for c in comps
            }
            assert scores[("accuracy", 0.5)] == pytest.approx(
                EXPECTED_CAI[method][0], abs=0.0001
            ), method
            assert scores[("accuracy", 0.75)] == pytest.approx(
                EXPECTED_CAI[method][1], abs=0.0001
            ), method
        assert time.perf_counter() - start < 1.0

    _announce("table-cai-reconstruction", body)


def test_cauci_reconstruction():
    def body():
        start = time.perf_counter()
        baseline = _report(*BASELINE_ROW)
        for method, row in REFERENCE_ROWS.items():
            comps = fairmetrics.compare(baseline, _report(*row), (0.5, 0.75))
            scores = {(c.metric_kind, c.alpha): c.score for c in comps}
            assert scores[("auc", 0.5)] == pytest.approx(
                EXPECTED_CAUCI[method][0], abs=0.0005
            ), method
            assert scores[("auc", 0.75)] == pytest.approx(
                EXPECTED_CAUCI[method][1], abs=0.0005
            ), method
        assert time.perf_counter() - start < 1.0

    _announce("table-cauci-reconstruction", body)


def test_margin_of_error_formula():
    def body():
        for p, expected in EXPECTED_MARGINS:
            got = fairmetrics.margin_of_error(p, 302, 1.96)
            assert got == pytest.approx(expected, abs=0.01), (p, got)

    _announce("margin-of-error-formula", body)


def test_dice_jaccard_identity():
    def body():
        rng = np.random.default_rng(501)
        tps = rng.integers(0, 10**6, size=12000)
        fps = rng.integers(0, 10**6, size=12000)
        fns = rng.integers(0, 10**6, size=12000)
        # force a band of small and degenerate count triples too
        tps[:200] = rng.integers(0, 3, size=200)
        fps[:200] = rng.integers(0, 3, size=200)
        fns[:200] = rng.integers(0, 3, size=200)
        for tp, fp, fn in zip(tps, fps, fns):
            counts = fairmetrics.ConfusionCounts(int(tp), int(fp), int(fn), 0)
            j = fairmetrics.jaccard(counts)
            d = fairmetrics.dice(counts)
            assert 0.0 <= j <= d <= 1.0
            assert abs(d - 2.0 * j / (1.0 + j)) < 1e-12

    _announce("dice-jaccard-identity-10k", body)


def test_auc_oracle_equivalence():
    def body():
        rng = np.random.default_rng(502)
        checked = 0
        while checked < 1000:
            n = int(rng.integers(2, 51))
            scores = rng.integers(0, 6, size=n) / 5.0  # coarse grid -> ties
            labels = rng.integers(0, 2, size=n).astype(bool)
            if labels.all() or not labels.any():
                continue
            pairs = list(zip(scores.tolist(), labels.tolist()))
            got = fairmetrics.roc_auc(pairs)
            assert abs(got - auc_pair_oracle(pairs)) < 1e-12
            # monotone-transform invariance, exact (the transform keeps
            # distinct scores distinct on this grid)
            transformed = [((3.0 * s + 1.0) ** 3, l) for s, l in pairs]
            assert fairmetrics.roc_auc(transformed) == got
            # label-flip symmetry, exact under the pair-counting definition
            n_pos = sum(1 for _, l in pairs if l)
            n_neg = len(pairs) - n_pos
            numer = Fraction(0)
            for sp, lp in pairs:
                if not lp:
                    continue
                for sn, ln in pairs:
                    if ln:
                        continue
                    if sp > sn:
                        numer += 1
                    elif sp == sn:
                        numer += Fraction(1, 2)
            exact = numer / (n_pos * n_neg)
            flipped = [(s, not l) for s, l in pairs]
            numer_f = Fraction(0)
            for sp, lp in flipped:
                if not lp:
                    continue
                for sn, ln in flipped:
                    if ln:
                        continue
                    if sp > sn:
                        numer_f += 1
                    elif sp == sn:
                        numer_f += Fraction(1, 2)
            exact_flipped = numer_f / (n_pos * n_neg)
            assert exact + exact_flipped == 1
            assert abs(fairmetrics.roc_auc(flipped) - float(exact_flipped)) < 1e-12
            checked += 1

    _announce("auc-oracle-equivalence-1k", body)


def test_canny_structural_suite():
    def body():
        # uniform image -> empty map
        uniform = np.full((48, 48), 93, dtype=np.uint8)
        assert edgedetect.canny(uniform).sum() == 0
        # black square on white -> one 8-connected, 1-px-thin closed contour
        # (square rendered with a 1-px anti-aliased boundary ring; a hard
        # two-valued step ties under the >=-both-neighbours rule)
        edges = edgedetect.canny(aa_square_image())
        assert edges.sum() > 0
        assert count_components8(edges) == 1
        corners = [(16, 16), (16, 47), (47, 16), (47, 47)]
        for pix, n in neighbor_counts(edges):
            assert n >= 1  # closed contour: no stray endpoints-free pixels
            if n > 2:
                assert any(
                    max(abs(pix[0] - cy), abs(pix[1] - cx)) <= 2 for cy, cx in corners
                ), f"non-corner pixel {pix} has {n} neighbours"
        # threshold monotonicity on 100 random images
        rng = np.random.default_rng(503)
        for _ in range(100):
            img = rng.integers(0, 256, size=(24, 24), dtype=np.uint8)
            base = edgedetect.canny(
                img, edgedetect.CannyConfig(low_threshold=40.0, high_threshold=120.0)
            )
            raised_low = edgedetect.canny(
                img, edgedetect.CannyConfig(low_threshold=75.0, high_threshold=120.0)
            )
            raised_high = edgedetect.canny(
                img, edgedetect.CannyConfig(low_threshold=40.0, high_threshold=170.0)
            )
            assert np.all(raised_low <= base)
            assert np.all(raised_high <= base)

    _announce("canny-structural-suite", body)


def test_edgemixup_pipeline_identities(tmp_path):
    def body():
        # beta = 0 is the pixel-value identity
        rng = np.random.default_rng(504)
        img = rng.integers(0, 256, size=(40, 40, 3), dtype=np.uint8)
        assert np.array_equal(preprocess(img, MixupConfig(beta=0.0)), img)

        # beta = 0.3 golden files: byte-stable across runs and --jobs
        src = tmp_path / "inputs"
        src.mkdir()
        for name, builder in GOLDEN_FIXTURES.items():
            save_png(builder(), src / f"{name}.png")
            committed_input = GOLDEN_DIR / f"{name}_input.png"
            assert (src / f"{name}.png").read_bytes() == committed_input.read_bytes(), (
                f"fixture builder for {name} drifted from the committed input"
            )
        runner = CliRunner()
        out_dirs = []
        for label, jobs in (("run1_j1", 1), ("run2_j1", 1), ("run3_j4", 4)):
            out = tmp_path / label
            result = runner.invoke(
                cli_main,
                ["--jobs", str(jobs), "--output", str(out),
                 "preprocess", str(src), "--beta", "0.3"],
            )
            assert result.exit_code == 0, result.output
            out_dirs.append(out)
        for name in GOLDEN_FIXTURES:
            blobs = [(d / f"{name}.png").read_bytes() for d in out_dirs]
            assert blobs[0] == blobs[1] == blobs[2], f"{name} not byte-stable"
            golden = (GOLDEN_DIR / f"{name}_expected.png").read_bytes()
            assert blobs[0] == golden, f"{name} diverged from the committed golden"

    _announce("edgemixup-pipeline-identities", body)


def test_ita_suite():
    def body():
        assert skintone.pixel_ita((70.0, 0.0, 20.0)) == pytest.approx(45.0, abs=1e-9)
        assert skintone.pixel_ita((50.0, 0.0, 14.0)) == pytest.approx(0.0, abs=1e-9)
        assert skintone.pixel_ita((30.0, 0.0, 20.0)) == pytest.approx(-45.0, abs=1e-9)
        bins = skintone.ItaBins()
        order = {name: i for i, name in enumerate(bins.categories)}
        previous = len(bins.categories)
        count = 0
        for value in np.arange(-90.0, 90.0 + 0.05, 0.1):
            category, group = skintone.categorize(float(value), bins)
            assert category in bins.categories  # partition: always exactly one
            assert group == ("ds" if category in bins.ds_categories else "ls")
            assert order[category] <= previous  # monotone toward lighter
            previous = order[category]
            count += 1
        assert count == 1801

    _announce("ita-suite", body)


def test_color_anchors():
    def body():
        lightness, a_star, b_star = colorcore.rgb_to_lab((255, 255, 255))
        assert abs(lightness - 100.0) < 0.01
        assert abs(a_star) < 0.01 and abs(b_star) < 0.01
        lattice = list(range(0, 256, 16)) + [255]
        for r in lattice:
            for g in lattice:
                for b in lattice:
                    assert colorcore.hsv_to_rgb(colorcore.rgb_to_hsv((r, g, b))) == (r, g, b)

    _announce("color-anchors", body)


def test_desk_scale_limits_documented():
    # Absolute Table-level segmentation scores and raw model accuracies need
    # trained models plus the unreleased datasets; this suite covers them via
    # the metric reconstructions above and crafted-mask properties only.
    def body():
        report = fairmetrics.seg_report(
            [
                (np.zeros((4, 4), dtype=np.uint8), np.zeros((4, 4), dtype=np.uint8), "ls"),
                (np.zeros((4, 4), dtype=np.uint8), np.zeros((4, 4), dtype=np.uint8), "ds"),
            ]
        )
        assert report.jaccard.overall == 1.0 and report.jaccard.gap == 0.0

    _announce("desk-scale-limits-noted", body)
