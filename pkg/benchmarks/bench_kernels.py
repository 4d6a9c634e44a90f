"""Benchmark the compiled kernel core against the numpy fallback.

Times each hot kernel and the full preprocessing pipeline on synthetic
images, checks that both backends produce bit-identical outputs, and prints
a comparison table.

Usage:
    python benchmarks/bench_kernels.py [--size 512] [--repeats 5]
"""

import argparse
import time

import numpy as np

from lesionfair._kernels import _fallback

try:
    from lesionfair._kernels import _core
except ImportError:
    _core = None

from lesionfair.edgedetect import gaussian_kernel

WINDOWS = np.array([[0.0, 10.0], [350.0, 360.0]])


def build_cases(size, rng):
    rgb = rng.integers(0, 256, size=(size, size, 3), dtype=np.uint8)
    hsv = _fallback.rgb_to_hsv_image(rgb)
    gray = rng.random((size, size)) * 255.0
    weights = gaussian_kernel(1.4, 2)
    blurred = _fallback.convolve_separable(gray, weights)
    gx, gy = _fallback.sobel_xy(blurred)
    mag = np.sqrt(gx * gx + gy * gy)
    direction = np.arctan2(gy, gx)
    thinned = _fallback.nonmax_suppress(mag, direction)
    edges = _fallback.hysteresis_map(thinned, 50.0, 150.0)
    return [
        ("rgb_to_hsv", "rgb_to_hsv_image", (rgb,)),
        ("hsv_to_rgb", "hsv_to_rgb_image", (hsv,)),
        ("contrast_augment", "contrast_augment_image", (rgb, WINDOWS, 0.3, 0.2)),
        ("value_channel", "value_channel_image", (hsv,)),
        ("gaussian_blur", "convolve_separable", (gray, weights)),
        ("sobel", "sobel_xy", (blurred,)),
        ("nms", "nonmax_suppress", (mag, direction)),
        ("hysteresis", "hysteresis_map", (thinned, 50.0, 150.0)),
        ("mix", "mix_image", (rgb, edges, 0.3)),
    ]


def best_time(fn, args, repeats):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - start)
    return best


def same(a, b):
    if isinstance(a, tuple):
        return all(np.array_equal(x, y) for x, y in zip(a, b))
    return np.array_equal(a, b)


def bench_pipeline(size, repeats, rng):
    from lesionfair import _kernels
    from lesionfair.edgemixup import preprocess

    img = rng.integers(0, 256, size=(size, size, 3), dtype=np.uint8)
    results = {}
    names = [
        "rgb_to_hsv_image", "hsv_to_rgb_image", "contrast_augment_image",
        "value_channel_image", "convolve_separable", "sobel_xy",
        "nonmax_suppress", "hysteresis_map", "mix_image",
    ]
    backends = [("python", _fallback)] + ([("compiled", _core)] if _core else [])
    outputs = {}
    for label, backend in backends:
        for name in names:
            setattr(_kernels, name, getattr(backend, name))
        outputs[label] = preprocess(img)
        results[label] = best_time(preprocess, (img,), repeats)
    if _core is not None:
        assert np.array_equal(outputs["python"], outputs["compiled"]), (
            "pipeline outputs diverged between backends"
        )
    return results


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--size", type=int, default=512)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    rng = np.random.default_rng(2024)
    print(f"image size {args.size}x{args.size}, best of {args.repeats} runs")
    if _core is None:
        print("compiled core not built; timing the fallback only\n")
    header = f"{'kernel':<18} {'python':>10} {'compiled':>10} {'speedup':>8}  identical"
    print(header)
    print("-" * len(header))
    for label, attr, call_args in build_cases(args.size, rng):
        py_fn = getattr(_fallback, attr)
        t_py = best_time(py_fn, call_args, args.repeats)
        if _core is None:
            print(f"{label:<18} {t_py*1e3:>8.2f}ms {'-':>10} {'-':>8}")
            continue
        c_fn = getattr(_core, attr)
        t_c = best_time(c_fn, call_args, args.repeats)
        identical = same(py_fn(*call_args), c_fn(*call_args))
        print(
            f"{label:<18} {t_py*1e3:>8.2f}ms {t_c*1e3:>8.2f}ms {t_py/t_c:>7.1f}x  {identical}"
        )
        if not identical:
            raise SystemExit(f"kernel {label} diverged between backends")

    pipeline = bench_pipeline(args.size, args.repeats, rng)
    print("-" * len(header))
    if _core is not None:
        print(
            f"{'full pipeline':<18} {pipeline['python']*1e3:>8.2f}ms "
            f"{pipeline['compiled']*1e3:>8.2f}ms "
            f"{pipeline['python']/pipeline['compiled']:>7.1f}x  True"
        )
    else:
        print(f"{'full pipeline':<18} {pipeline['python']*1e3:>8.2f}ms")


if __name__ == "__main__":
    main()
