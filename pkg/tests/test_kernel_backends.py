"""Bit-exactness contract between the compiled kernel core and the numpy
fallback.  Skipped when the extension is not built."""

import numpy as np
import pytest

from helpers import GOLDEN_FIXTURES
from lesionfair._kernels import _fallback
from lesionfair.edgedetect import gaussian_kernel

core = pytest.importorskip(
    "lesionfair._kernels._core", reason="compiled kernel core not built"
)

WINDOWS = np.array([[0.0, 10.0], [350.0, 360.0]])


def random_rgb(rng, shape=(37, 53)):
    return rng.integers(0, 256, size=shape + (3,), dtype=np.uint8)


@pytest.fixture(scope="module")
def rng():
    return np.random.default_rng(77)


def test_rgb_to_hsv_identical(rng):
    for _ in range(5):
        img = random_rgb(rng)
        assert np.array_equal(_fallback.rgb_to_hsv_image(img), core.rgb_to_hsv_image(img))


def test_hsv_to_rgb_identical(rng):
    for _ in range(5):
        hsv = _fallback.rgb_to_hsv_image(random_rgb(rng))
        assert np.array_equal(_fallback.hsv_to_rgb_image(hsv), core.hsv_to_rgb_image(hsv))


def test_contrast_augment_identical(rng):
    for _ in range(5):
        img = random_rgb(rng)
        a = _fallback.contrast_augment_image(img, WINDOWS, 0.3, 0.2)
        b = core.contrast_augment_image(img, WINDOWS, 0.3, 0.2)
        assert np.array_equal(a, b)


def test_value_channel_identical(rng):
    hsv = _fallback.rgb_to_hsv_image(random_rgb(rng))
    assert np.array_equal(
        _fallback.value_channel_image(hsv), core.value_channel_image(hsv)
    )


def test_convolution_identical(rng):
    for sigma, radius in ((1.4, 2), (0.8, 1), (2.5, 5)):
        img = rng.random((41, 29)) * 255.0
        weights = gaussian_kernel(sigma, radius)
        assert np.array_equal(
            _fallback.convolve_separable(img, weights),
            core.convolve_separable(img, weights),
        )


def test_sobel_identical(rng):
    img = rng.random((33, 47)) * 255.0
    gx_f, gy_f = _fallback.sobel_xy(img)
    gx_c, gy_c = core.sobel_xy(img)
    assert np.array_equal(gx_f, gx_c)
    assert np.array_equal(gy_f, gy_c)


def test_nms_identical(rng):
    img = rng.random((40, 40)) * 255.0
    gx, gy = _fallback.sobel_xy(img)
    mag = np.sqrt(gx * gx + gy * gy)
    direction = np.arctan2(gy, gx)
    assert np.array_equal(
        _fallback.nonmax_suppress(mag, direction), core.nonmax_suppress(mag, direction)
    )


def test_hysteresis_identical(rng):
    for _ in range(5):
        img = rng.random((30, 30)) * 220.0
        assert np.array_equal(
            _fallback.hysteresis_map(img, 50.0, 150.0),
            core.hysteresis_map(img, 50.0, 150.0),
        )


def test_mix_identical(rng):
    img = random_rgb(rng)
    edges = rng.integers(0, 2, size=img.shape[:2], dtype=np.uint8)
    for beta in (0.0, 0.3, 0.77, 1.0):
        assert np.array_equal(
            _fallback.mix_image(img, edges, beta), core.mix_image(img, edges, beta)
        )


def test_full_pipeline_identical_on_fixtures(monkeypatch):
    """Each synthetic golden fixture preprocesses to identical bytes under
    both backends."""
    from lesionfair import _kernels
    from lesionfair.edgemixup import MixupConfig, preprocess_stages

    cfg = MixupConfig()
    for name, builder in GOLDEN_FIXTURES.items():
        img = builder()
        outputs = {}
        for backend in (_fallback, core):
            for attr in (
                "rgb_to_hsv_image", "hsv_to_rgb_image", "contrast_augment_image",
                "value_channel_image", "convolve_separable", "sobel_xy",
                "nonmax_suppress", "hysteresis_map", "mix_image",
            ):
                monkeypatch.setattr(_kernels, attr, getattr(backend, attr))
            stages = preprocess_stages(img, cfg)
            outputs[backend.__name__] = stages
        a = outputs["lesionfair._kernels._fallback"]
        b = outputs["lesionfair._kernels._core"]
        for field in ("contrast", "gray", "edges", "result"):
            assert np.array_equal(getattr(a, field), getattr(b, field)), (name, field)
