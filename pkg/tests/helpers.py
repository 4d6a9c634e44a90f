"""Shared test fixtures and small independent oracles.

The synthetic image builders are deterministic so the same bytes can serve
as CLI golden-file inputs.  Run ``python tests/helpers.py <dir>`` to write
the five golden-input fixtures as PNGs into a directory.
"""

import sys
from pathlib import Path

import numpy as np

GOLDEN_DIR = Path(__file__).parent / "data" / "golden"


def disk_image(size=96, radius=28, fg=(200, 30, 30), bg=(170, 150, 130)):
    """Red disk centred on a skin-toned background."""
    img = np.empty((size, size, 3), dtype=np.uint8)
    img[:, :] = bg
    yy, xx = np.mgrid[0:size, 0:size]
    c = (size - 1) / 2.0
    img[(yy - c) ** 2 + (xx - c) ** 2 <= radius**2] = fg
    return img


def aa_square_image(size=64, lo=16, hi=48, dark=0, ring=128, light=255):
    """Dark square on a light background with a 1-px mid-gray transition
    ring (a hard two-valued step ties under >=-both-neighbours NMS and
    yields a 2-px line; the ring gives the response a strict peak)."""
    img = np.full((size, size), light, dtype=np.uint8)
    img[lo:hi, lo:hi] = ring
    img[lo + 1:hi - 1, lo + 1:hi - 1] = dark
    return img


def aa_square_rgb(size=64, lo=16, hi=48):
    gray = aa_square_image(size, lo, hi)
    return np.stack([gray, gray, gray], axis=-1)


def ramp_step_image(height=16, width=17, mid_col=8):
    """Vertical step with a mid-gray transition column (strict NMS peak)."""
    img = np.zeros((height, width), dtype=np.uint8)
    img[:, mid_col] = 128
    img[:, mid_col + 1:] = 255
    return img


def gradient_blobs_image(size=80):
    """Smooth diagonal gradient with two reddish blobs."""
    yy, xx = np.mgrid[0:size, 0:size]
    base = ((yy + xx) * 255.0 / (2 * size - 2)).astype(np.uint8)
    img = np.stack([base, base, base], axis=-1)
    for cy, cx, r, color in ((22, 25, 10, (190, 40, 40)), (55, 52, 14, (150, 20, 30))):
        img[(yy - cy) ** 2 + (xx - cx) ** 2 <= r**2] = color
    return img


def noise_image(size=72, seed=1234):
    rng = np.random.default_rng(seed)
    return rng.integers(0, 256, size=(size, size, 3), dtype=np.uint8)


def stripes_image(size=64, period=8):
    yy, xx = np.mgrid[0:size, 0:size]
    stripe = ((xx // period) % 2 * 255).astype(np.uint8)
    img = np.stack([stripe, np.full_like(stripe, 96), np.full_like(stripe, 160)], axis=-1)
    img[size // 3:size // 2, :] = (210, 40, 50)
    return img


# basenames -> builders for the five golden-file fixtures
GOLDEN_FIXTURES = {
    "disk": disk_image,
    "square": aa_square_rgb,
    "gradient": gradient_blobs_image,
    "noise": noise_image,
    "stripes": stripes_image,
}


def count_components8(edge):
    """8-connected component count of a binary map (BFS oracle)."""
    edge = np.asarray(edge).astype(bool)
    seen = np.zeros_like(edge)
    height, width = edge.shape
    count = 0
    for i in range(height):
        for j in range(width):
            if edge[i, j] and not seen[i, j]:
                count += 1
                stack = [(i, j)]
                seen[i, j] = True
                while stack:
                    y, x = stack.pop()
                    for dy in (-1, 0, 1):
                        for dx in (-1, 0, 1):
                            ny, nx = y + dy, x + dx
                            if (
                                0 <= ny < height and 0 <= nx < width
                                and edge[ny, nx] and not seen[ny, nx]
                            ):
                                seen[ny, nx] = True
                                stack.append((ny, nx))
    return count


def neighbor_counts(edge):
    """(pixel, n_edge_neighbours) pairs for every edge pixel."""
    edge = np.asarray(edge).astype(np.int32)
    padded = np.pad(edge, 1)
    out = []
    for i in range(edge.shape[0]):
        for j in range(edge.shape[1]):
            if edge[i, j]:
                out.append(((i, j), int(padded[i:i + 3, j:j + 3].sum() - 1)))
    return out


def flood_from_seeds(strong, weak):
    """Independent hysteresis oracle: BFS over strong | weak from strong."""
    strong = np.asarray(strong).astype(bool)
    weak = np.asarray(weak).astype(bool)
    kept = strong.copy()
    stack = list(map(tuple, np.argwhere(strong)))
    height, width = strong.shape
    while stack:
        y, x = stack.pop()
        for dy in (-1, 0, 1):
            for dx in (-1, 0, 1):
                ny, nx = y + dy, x + dx
                if 0 <= ny < height and 0 <= nx < width:
                    if weak[ny, nx] and not kept[ny, nx]:
                        kept[ny, nx] = True
                        stack.append((ny, nx))
    return kept


def auc_pair_oracle(pairs):
    """Concordant-pair AUC with 0.5 credit for ties (brute force)."""
    pos = [s for s, label in pairs if label]
    neg = [s for s, label in pairs if not label]
    total = 0.0
    for sp in pos:
        for sn in neg:
            if sp > sn:
                total += 1.0
            elif sp == sn:
                total += 0.5
    return total / (len(pos) * len(neg))


def conv2d_oracle(img, kernel):
    """Direct dense 2-D convolution with reflect-101 padding."""
    img = np.asarray(img, dtype=np.float64)
    radius = (kernel.shape[0] - 1) // 2
    padded = np.pad(img, radius, mode="reflect")
    out = np.zeros_like(img)
    for i in range(img.shape[0]):
        for j in range(img.shape[1]):
            region = padded[i:i + kernel.shape[0], j:j + kernel.shape[1]]
            out[i, j] = float(np.sum(region * kernel))
    return out


def write_golden_inputs(directory):
    from PIL import Image

    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    for name, builder in GOLDEN_FIXTURES.items():
        Image.fromarray(builder(), mode="RGB").save(directory / f"{name}.png")
    return sorted(directory.glob("*.png"))


if __name__ == "__main__":
    target = sys.argv[1] if len(sys.argv) > 1 else "golden_inputs"
    for path in write_golden_inputs(target):
        print(path)
