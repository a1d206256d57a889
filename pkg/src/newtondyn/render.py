"""Dynamical-plane and parameter-plane images.

Images are RGB uint8 arrays with row 0 at the top. PPM (P6) is the canonical
byte-stable format; PNG is encoded from the same array through Pillow.
Colors are flat per target and darkened by iteration count, so the output
depends only on the inputs.
"""
from __future__ import annotations

import colorsys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .basins import basin_raster, free_cycles
from .newton import NewtonMap, per2_polynomial

__all__ = [
    "RenderJob",
    "PALETTE",
    "DEFAULT_PER2_WINDOW",
    "render_julia",
    "render_param_per2",
    "per2_targets",
    "write_ppm",
    "write_png",
    "save_image",
]

# chosen to show the capture region of the cycle 0 <-> 1; not taken from any source
DEFAULT_PER2_WINDOW = (-1.0, -1.5, 2.5, 1.5)

UNRESOLVED = (0, 0, 0)
PALETTE = {
    "unresolved": UNRESOLVED,
    "cycle01": (230, 200, 40),  # orbit of c converges to the cycle 0 <-> 1
    "free": (220, 30, 60),  # another attracting cycle
    # c-plane root basins; one color because root indices cannot be made continuous in c
    "per2_roots": [(90, 120, 170)] * 4,
    "free_hues": [(220, 30, 60), (40, 170, 70), (150, 60, 200), (250, 120, 20), (20, 200, 210)],
    "shade_span": 60,
}

# per2 pixel codes
ROOT0 = 0  # 0..3: roots ordered by (real, imag)
CYCLE01 = 4
FREE = 5
NONE = -1


@dataclass
class RenderJob:
    mode: str  # "julia" or "param-per2"
    window: tuple | None = None
    resolution: tuple = (512, 512)
    iter_cap: int = 200
    eps: float = 1e-9
    out: str | None = None
    palette: dict = field(default_factory=lambda: dict(PALETTE))

    def __post_init__(self):
        if self.mode not in ("julia", "param-per2"):
            raise ValueError(f"unknown render mode {self.mode!r}")


def root_color(k, n):
    r, g, b = colorsys.hsv_to_rgb((k / max(n, 1) + 0.55) % 1.0, 0.55, 0.95)
    return (int(round(255 * r)), int(round(255 * g)), int(round(255 * b)))


def _paint(codes, iters, colors, span):
    H, W = codes.shape
    img = np.zeros((H, W, 3), dtype=np.uint8)
    f = 1.0 - 0.55 * np.minimum(iters, span) / span
    for code, rgb in colors.items():
        m = codes == code
        if m.any():
            img[m] = np.clip(np.round(np.outer(f[m], rgb)), 0, 255).astype(np.uint8)
    return img


def render_julia(job: RenderJob, N: NewtonMap):
    """Color pixels by the target of their orbit; unresolved pixels stay black."""
    W, H = job.resolution
    cycles = free_cycles(N, max(job.iter_cap, 500))
    raster = basin_raster(N, job.window, (W, H), job.iter_cap, job.eps, cycles=cycles)
    nroots = len(raster.roots)
    colors = {}
    for t, tgt in enumerate(raster.targets):
        if tgt[0] == "root":
            colors[t] = root_color(tgt[1], nroots)
        else:
            hues = job.palette["free_hues"]
            colors[t] = hues[tgt[1] % len(hues)]
    return _paint(raster.labels, raster.iterations, colors, job.palette["shade_span"]), raster


def _per2_step(z, c):
    p = ((z / 12 - c / 6) * z * z * z) + (4 * c - 3) * z / 12 + (3 - 4 * c) / 12
    dp = (z / 3 - c / 2) * z * z + (4 * c - 3) / 12
    with np.errstate(divide="ignore", invalid="ignore"):
        return z - p / dp


def _per2_roots(c):
    """Roots of the slice polynomial for every c, ordered by (real, imag)."""
    c = np.asarray(c, dtype=complex).ravel()
    # 12 P = z^4 - 2c z^3 + (4c - 3) z + (3 - 4c); companion matrices, one per c
    M = np.zeros((c.size, 4, 4), dtype=complex)
    M[:, 0, :] = np.stack([2 * c, np.zeros_like(c), 3 - 4 * c, 4 * c - 3], axis=1)
    M[:, 1, 0] = M[:, 2, 1] = M[:, 3, 2] = 1
    r = np.linalg.eigvals(M)
    order = np.lexsort((np.round(r.imag, 9), np.round(r.real, 9)), axis=-1)
    return np.take_along_axis(r, order, axis=-1)


def per2_targets(c, iter_cap=200, eps=1e-9, cycle_tol=1e-6, max_period=8):
    """Target code of the orbit of the free critical point c under the slice map.

    Codes: 0..3 root index, CYCLE01 for the cycle 0 <-> 1, FREE for another
    attracting cycle (period <= max_period), NONE when unresolved.
    """
    c = np.asarray(c, dtype=complex)
    shape = c.shape
    c = c.ravel()
    roots = _per2_roots(c)
    code = np.full(c.size, NONE, dtype=np.int32)
    iters = np.full(c.size, iter_cap, dtype=np.int32)
    z = c.copy()
    active = np.arange(c.size)
    for k in range(iter_cap + 1):
        if active.size == 0:
            break
        w = z[active]
        d = np.abs(w[:, None] - roots[active])
        scale = np.maximum(1.0, np.abs(roots[active]).max(axis=1))
        j = d.argmin(axis=1)
        hit_root = d[np.arange(w.size), j] <= eps * scale
        hit_cyc = (np.abs(w) <= cycle_tol) | (np.abs(w - 1) <= cycle_tol)
        done = hit_root | hit_cyc
        code[active[hit_root]] = j[hit_root]
        code[active[hit_cyc & ~hit_root]] = CYCLE01
        iters[active[done]] = k
        bad = ~np.isfinite(w)
        active = active[~done & ~bad]
        z[active] = _per2_step(z[active], c[active])
    # survivors: look for another attracting cycle
    if active.size:
        w = z[active]
        cc = c[active]
        for _ in range(4 * iter_cap):
            w = _per2_step(w, cc)
        orbit = [w]
        for _ in range(max_period):
            orbit.append(_per2_step(orbit[-1], cc))
        for p in range(1, max_period + 1):
            per = np.abs(orbit[p] - orbit[0]) <= 1e-7 * np.maximum(1.0, np.abs(orbit[0]))
            sel = per & (code[active] == NONE)
            code[active[sel]] = FREE
    return code.reshape(shape), iters.reshape(shape)


def _grid(window, resolution):
    x0, y0, x1, y1 = window
    W, H = resolution
    xs = x0 + (np.arange(W) + 0.5) * (x1 - x0) / W
    ys = y1 - (np.arange(H) + 0.5) * (y1 - y0) / H
    return xs[None, :] + 1j * ys[:, None]


def render_param_per2(job: RenderJob, marks=()):
    """c-plane of the slice; ``marks`` is a list of (c, letter) drawn as an overlay."""
    window = job.window or DEFAULT_PER2_WINDOW
    C = _grid(window, job.resolution)
    codes, iters = per2_targets(C, job.iter_cap, job.eps)
    colors = {k: tuple(job.palette["per2_roots"][k]) for k in range(4)}
    colors[CYCLE01] = job.palette["cycle01"]
    colors[FREE] = job.palette["free"]
    img = _paint(codes, iters, colors, job.palette["shade_span"])
    if marks:
        img = _overlay(img, window, job.resolution, marks)
    return img, codes


def _overlay(img, window, resolution, marks):
    from PIL import Image, ImageDraw, ImageFont

    x0, y0, x1, y1 = window
    W, H = resolution
    im = Image.fromarray(img)
    draw = ImageDraw.Draw(im)
    font = ImageFont.load_default()
    for c, letter in marks:
        c = complex(c)
        px = (c.real - x0) / (x1 - x0) * W
        py = (y1 - c.imag) / (y1 - y0) * H
        draw.text((px, py), str(letter), fill=(255, 255, 255), font=font, anchor="mm")
    return np.asarray(im, dtype=np.uint8).copy()


def ppm_bytes(img):
    img = np.ascontiguousarray(img, dtype=np.uint8)
    H, W, _ = img.shape
    return b"P6\n%d %d\n255\n" % (W, H) + img.tobytes()


def write_ppm(img, path):
    Path(path).write_bytes(ppm_bytes(img))


def write_png(img, path):
    from PIL import Image

    Image.fromarray(np.ascontiguousarray(img, dtype=np.uint8)).save(path, format="PNG", optimize=False)


def save_image(img, path, fmt=None):
    fmt = fmt or Path(path).suffix.lstrip(".").lower() or "ppm"
    if fmt == "png":
        write_png(img, path)
    elif fmt == "ppm":
        write_ppm(img, path)
    else:
        raise ValueError(f"unsupported image format {fmt!r}")
