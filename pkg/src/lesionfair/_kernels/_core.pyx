# cython: boundscheck=False, wraparound=False, initializedcheck=False, cdivision=True
"""Compiled twins of the numpy fallback kernels (see ``_fallback``).

Bit-for-bit contract: every function reproduces the fallback exactly, which
both sides achieve by using only IEEE-exact primitives (+, -, *, /, sqrt,
floor, comparisons) applied per pixel in the same order.  Transcendental
math (arctan2, the CIELAB transfer) deliberately stays outside the kernel
layer.  When editing either backend, mirror the change in the other and
keep accumulation orders identical.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport floor

cnp.import_array()

# Same expression as the fallback module so the constant is bit-identical.
RAD2DEG = 180.0 / np.pi
cdef double _RAD2DEG = RAD2DEG


def rgb_to_hsv_image(object rgb_obj):
    """Hexcone RGB->HSV. Achromatic pixels get H = 0, S = 0."""
    cdef const cnp.uint8_t[:, :, ::1] rgb = np.ascontiguousarray(rgb_obj, dtype=np.uint8)
    cdef Py_ssize_t height = rgb.shape[0], width = rgb.shape[1]
    out_arr = np.empty((height, width, 3), dtype=np.float64)
    cdef double[:, :, ::1] out = out_arr
    cdef Py_ssize_t i, j
    cdef double r, g, b, maxc, minc, delta, h, s
    with nogil:
        for i in range(height):
            for j in range(width):
                r = rgb[i, j, 0] / 255.0
                g = rgb[i, j, 1] / 255.0
                b = rgb[i, j, 2] / 255.0
                maxc = r
                if g > maxc:
                    maxc = g
                if b > maxc:
                    maxc = b
                minc = r
                if g < minc:
                    minc = g
                if b < minc:
                    minc = b
                delta = maxc - minc
                if delta == 0.0:
                    h = 0.0
                    s = 0.0
                else:
                    if maxc == r:
                        h = (60.0 * (g - b)) / delta
                    elif maxc == g:
                        h = (60.0 * (b - r)) / delta + 120.0
                    else:
                        h = (60.0 * (r - g)) / delta + 240.0
                    if h < 0.0:
                        h += 360.0
                    s = delta / maxc
                out[i, j, 0] = h
                out[i, j, 1] = s
                out[i, j, 2] = maxc
    return out_arr


def hsv_to_rgb_image(object hsv_obj):
    """Inverse hexcone transform, quantized half-away-from-zero to uint8."""
    cdef const double[:, :, ::1] hsv = np.ascontiguousarray(hsv_obj, dtype=np.float64)
    cdef Py_ssize_t height = hsv.shape[0], width = hsv.shape[1]
    out_arr = np.empty((height, width, 3), dtype=np.uint8)
    cdef cnp.uint8_t[:, :, ::1] out = out_arr
    cdef Py_ssize_t i, j
    cdef long k
    cdef double h, s, v, h60, sector, f, p, q, t, r, g, b
    with nogil:
        for i in range(height):
            for j in range(width):
                h = hsv[i, j, 0]
                s = hsv[i, j, 1]
                v = hsv[i, j, 2]
                h60 = h / 60.0
                sector = floor(h60)
                f = h60 - sector
                p = v * (1.0 - s)
                q = v * (1.0 - s * f)
                t = v * (1.0 - s * (1.0 - f))
                k = (<long> sector) % 6
                if k == 0:
                    r = v; g = t; b = p
                elif k == 1:
                    r = q; g = v; b = p
                elif k == 2:
                    r = p; g = v; b = t
                elif k == 3:
                    r = p; g = q; b = v
                elif k == 4:
                    r = t; g = p; b = v
                else:
                    r = v; g = p; b = q
                out[i, j, 0] = <cnp.uint8_t> floor(r * 255.0 + 0.5)
                out[i, j, 1] = <cnp.uint8_t> floor(g * 255.0 + 0.5)
                out[i, j, 2] = <cnp.uint8_t> floor(b * 255.0 + 0.5)
    return out_arr


def contrast_augment_image(object rgb_obj, object windows_obj, double sat_min, double val_min):
    """Recolor pixels inside a red hue window (and above the saturation and
    value floors) to pure green; everything else passes through."""
    cdef const cnp.uint8_t[:, :, ::1] rgb = np.ascontiguousarray(rgb_obj, dtype=np.uint8)
    cdef const double[:, ::1] windows = np.ascontiguousarray(windows_obj, dtype=np.float64)
    cdef Py_ssize_t height = rgb.shape[0], width = rgb.shape[1]
    cdef Py_ssize_t n_windows = windows.shape[0]
    out_arr = np.array(rgb_obj, dtype=np.uint8, copy=True)
    cdef cnp.uint8_t[:, :, ::1] out = out_arr
    cdef Py_ssize_t i, j, k
    cdef double r, g, b, maxc, minc, delta, h, s, lo, hi
    cdef bint in_window
    with nogil:
        for i in range(height):
            for j in range(width):
                r = rgb[i, j, 0] / 255.0
                g = rgb[i, j, 1] / 255.0
                b = rgb[i, j, 2] / 255.0
                maxc = r
                if g > maxc:
                    maxc = g
                if b > maxc:
                    maxc = b
                minc = r
                if g < minc:
                    minc = g
                if b < minc:
                    minc = b
                delta = maxc - minc
                if delta == 0.0:
                    h = 0.0
                    s = 0.0
                else:
                    if maxc == r:
                        h = (60.0 * (g - b)) / delta
                    elif maxc == g:
                        h = (60.0 * (b - r)) / delta + 120.0
                    else:
                        h = (60.0 * (r - g)) / delta + 240.0
                    if h < 0.0:
                        h += 360.0
                    s = delta / maxc
                if s < sat_min or maxc < val_min:
                    continue
                in_window = False
                for k in range(n_windows):
                    lo = windows[k, 0]
                    hi = windows[k, 1]
                    if lo <= hi:
                        if h >= lo and h <= hi:
                            in_window = True
                            break
                    else:
                        if h >= lo or h <= hi:
                            in_window = True
                            break
                if in_window:
                    out[i, j, 0] = 0
                    out[i, j, 1] = 255
                    out[i, j, 2] = 0
    return out_arr


def value_channel_image(object hsv_obj):
    """V channel scaled to 8 bits (half-away-from-zero rounding)."""
    cdef const double[:, :, ::1] hsv = np.ascontiguousarray(hsv_obj, dtype=np.float64)
    cdef Py_ssize_t height = hsv.shape[0], width = hsv.shape[1]
    out_arr = np.empty((height, width), dtype=np.uint8)
    cdef cnp.uint8_t[:, ::1] out = out_arr
    cdef Py_ssize_t i, j
    with nogil:
        for i in range(height):
            for j in range(width):
                out[i, j] = <cnp.uint8_t> floor(hsv[i, j, 2] * 255.0 + 0.5)
    return out_arr


cdef inline Py_ssize_t _reflect101(Py_ssize_t idx, Py_ssize_t size) nogil:
    if idx < 0:
        return -idx
    if idx >= size:
        return 2 * size - 2 - idx
    return idx


def convolve_separable(object img_obj, object weights_obj):
    """Separable 2-D convolution with a symmetric 1-D kernel, reflect-101
    borders; taps accumulate in ascending index order like the fallback."""
    cdef const double[:, ::1] img = np.ascontiguousarray(img_obj, dtype=np.float64)
    cdef const double[::1] w = np.ascontiguousarray(weights_obj, dtype=np.float64)
    cdef Py_ssize_t n_taps = w.shape[0]
    cdef Py_ssize_t radius = (n_taps - 1) // 2
    cdef Py_ssize_t height = img.shape[0], width = img.shape[1]
    horiz_arr = np.empty((height, width), dtype=np.float64)
    out_arr = np.empty((height, width), dtype=np.float64)
    cdef double[:, ::1] horiz = horiz_arr
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t i, j, k
    cdef double acc
    with nogil:
        for i in range(height):
            for j in range(width):
                acc = 0.0
                for k in range(n_taps):
                    acc += w[k] * img[i, _reflect101(j - radius + k, width)]
                horiz[i, j] = acc
        for i in range(height):
            for j in range(width):
                acc = 0.0
                for k in range(n_taps):
                    acc += w[k] * horiz[_reflect101(i - radius + k, height), j]
                out[i, j] = acc
    return out_arr


def sobel_xy(object img_obj):
    """Raw 3x3 Sobel responses (gx, gy) with reflect-101 borders.

    Tap order matches ``_fallback.SOBEL_TAPS_X`` / ``SOBEL_TAPS_Y``.
    """
    cdef const double[:, ::1] img = np.ascontiguousarray(img_obj, dtype=np.float64)
    cdef Py_ssize_t height = img.shape[0], width = img.shape[1]
    gx_arr = np.empty((height, width), dtype=np.float64)
    gy_arr = np.empty((height, width), dtype=np.float64)
    cdef double[:, ::1] gx = gx_arr
    cdef double[:, ::1] gy = gy_arr
    cdef Py_ssize_t i, j, up, down, left, right
    cdef double acc
    with nogil:
        for i in range(height):
            up = _reflect101(i - 1, height)
            down = _reflect101(i + 1, height)
            for j in range(width):
                left = _reflect101(j - 1, width)
                right = _reflect101(j + 1, width)
                acc = 0.0
                acc += -1.0 * img[up, left]
                acc += 1.0 * img[up, right]
                acc += -2.0 * img[i, left]
                acc += 2.0 * img[i, right]
                acc += -1.0 * img[down, left]
                acc += 1.0 * img[down, right]
                gx[i, j] = acc
                acc = 0.0
                acc += -1.0 * img[up, left]
                acc += -2.0 * img[up, j]
                acc += -1.0 * img[up, right]
                acc += 1.0 * img[down, left]
                acc += 2.0 * img[down, j]
                acc += 1.0 * img[down, right]
                gy[i, j] = acc
    return gx_arr, gy_arr


def nonmax_suppress(object mag_obj, object direction_obj):
    """Keep a pixel's magnitude iff it is >= both neighbours along the
    quantized gradient direction; the 1-pixel border is zeroed.  Boundary
    angles resolve to the lower adjacent bin index (see the fallback)."""
    cdef const double[:, ::1] mag = np.ascontiguousarray(mag_obj, dtype=np.float64)
    cdef const double[:, ::1] direction = np.ascontiguousarray(direction_obj, dtype=np.float64)
    cdef Py_ssize_t height = mag.shape[0], width = mag.shape[1]
    out_arr = np.zeros((height, width), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    if height < 3 or width < 3:
        return out_arr
    cdef Py_ssize_t i, j
    cdef int axis
    cdef double theta, center, n1, n2
    with nogil:
        for i in range(1, height - 1):
            for j in range(1, width - 1):
                theta = direction[i, j] * _RAD2DEG
                if theta < 0.0:
                    theta += 180.0
                axis = 0
                if theta > 22.5 and theta <= 67.5:
                    axis = 1
                elif theta > 67.5 and theta <= 112.5:
                    axis = 2
                elif theta > 112.5 and theta < 157.5:
                    axis = 3
                if axis == 0:
                    n1 = mag[i, j - 1]
                    n2 = mag[i, j + 1]
                elif axis == 1:
                    n1 = mag[i - 1, j - 1]
                    n2 = mag[i + 1, j + 1]
                elif axis == 2:
                    n1 = mag[i - 1, j]
                    n2 = mag[i + 1, j]
                else:
                    n1 = mag[i - 1, j + 1]
                    n2 = mag[i + 1, j - 1]
                center = mag[i, j]
                if center >= n1 and center >= n2:
                    out[i, j] = center
    return out_arr


def hysteresis_map(object thinned_obj, double low, double high):
    """Double-threshold hysteresis via stack flood fill from strong seeds;
    produces the identical pixel set as the fallback's frontier dilation."""
    cdef const double[:, ::1] img = np.ascontiguousarray(thinned_obj, dtype=np.float64)
    cdef Py_ssize_t height = img.shape[0], width = img.shape[1]
    out_arr = np.zeros((height, width), dtype=np.uint8)
    cdef cnp.uint8_t[:, ::1] out = out_arr
    stack_arr = np.empty(height * width, dtype=np.intp)
    cdef Py_ssize_t[::1] stack = stack_arr
    cdef Py_ssize_t top = 0
    cdef Py_ssize_t i, j, ni, nj
    cdef int di, dj
    with nogil:
        for i in range(height):
            for j in range(width):
                if img[i, j] >= high:
                    out[i, j] = 1
                    stack[top] = i * width + j
                    top += 1
        while top > 0:
            top -= 1
            i = stack[top] // width
            j = stack[top] % width
            for di in range(-1, 2):
                for dj in range(-1, 2):
                    if di == 0 and dj == 0:
                        continue
                    ni = i + di
                    nj = j + dj
                    if ni < 0 or ni >= height or nj < 0 or nj >= width:
                        continue
                    if out[ni, nj] == 0 and img[ni, nj] >= low:
                        out[ni, nj] = 1
                        stack[top] = ni * width + nj
                        top += 1
    return out_arr


def mix_image(object rgb_obj, object edges_obj, double beta):
    """Per-channel linear blend of an image with its edge map rendered
    white (255), rounded half away from zero."""
    cdef const cnp.uint8_t[:, :, ::1] rgb = np.ascontiguousarray(rgb_obj, dtype=np.uint8)
    cdef const cnp.uint8_t[:, ::1] edges = np.ascontiguousarray(edges_obj, dtype=np.uint8)
    cdef Py_ssize_t height = rgb.shape[0], width = rgb.shape[1]
    out_arr = np.empty((height, width, 3), dtype=np.uint8)
    cdef cnp.uint8_t[:, :, ::1] out = out_arr
    cdef Py_ssize_t i, j, c
    cdef double edge255, blended
    with nogil:
        for i in range(height):
            for j in range(width):
                edge255 = edges[i, j] * 255.0
                for c in range(3):
                    blended = (1.0 - beta) * rgb[i, j, c] + beta * edge255
                    out[i, j, c] = <cnp.uint8_t> floor(blended + 0.5)
    return out_arr
