"""Basin and escape-depth images of the plane dynamics.

Pixels are classified with the same fate logic as the scalar orbit
classifier, but vectorized over the whole grid.  Output is 8-bit RGB,
written as binary PPM (P6) so golden files need no image library; PNG
is available on request through Pillow.  Rendering is deterministic:
the grid is cut into fixed row blocks, each block is computed by pure
array code, and assembly is by block index, so the thread count can
change the wall time but never a byte of the image.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .core import HALF_PI, QUARTER_PI, tangent3_grid

_FATE_UNDECIDED = 0
_FATE_ORIGIN = 1
_FATE_UPPER = 2
_FATE_LOWER = 3
_FATE_ESCAPING = 4
_FATE_POLE = 5

_DEFAULT_WINDOW = (-QUARTER_PI, -QUARTER_PI, 3 * QUARTER_PI, 3 * QUARTER_PI)


@dataclass
class RenderConfig:
    lam: float
    window: tuple = _DEFAULT_WINDOW  # (x0, y0, x1, y1)
    width: int = 256
    height: int = 256
    max_iter: int = 500
    tol: float = 1e-6
    escape_run: int = 8
    escape_norm: float = 50.0    # orbit-fate heuristic threshold
    depth_norm: float = None     # escape-depth threshold; default 6*lam
    settle: int = 3
    threads: int = 1
    row_block: int = 64  # fixed work unit; not tied to the thread count

    def __post_init__(self):
        if not self.lam > 0.0:
            raise ValueError("scaling parameter must be positive")
        x0, y0, x1, y1 = self.window
        if not (x1 > x0 and y1 > y0):
            raise ValueError("window must be non-degenerate")
        if self.width < 1 or self.height < 1:
            raise ValueError("resolution must be positive")
        if self.depth_norm is None:
            # a few times lam sits beyond every bounded invariant structure,
            # so first passage above it marks a genuine far excursion while
            # staying frequent enough to show up within a few hundred
            # iterations wherever the far-excursion set is dense at all
            self.depth_norm = 4.0 * self.lam


def pixel_grid(cfg: RenderConfig, row0: int, row1: int):
    """Plane coordinates of pixel centres for rows [row0, row1).

    Row 0 is the top of the image and y increases upward, so the top row
    carries the largest y.
    """
    x0, y0, x1, y1 = cfg.window
    xs = x0 + (np.arange(cfg.width) + 0.5) * (x1 - x0) / cfg.width
    ys = y1 - (np.arange(row0, row1) + 0.5) * (y1 - y0) / cfg.height
    return np.meshgrid(xs, ys)


def _diamond_centers(x, y):
    """Vectorized diamond lookup: centre coordinates and strict membership."""
    u = x + y
    v = y - x
    n = np.round((u - HALF_PI) / math.pi)
    m = np.round((HALF_PI - v) / math.pi)
    cx = (n + m) * HALF_PI
    cy = (n - m + 1) * HALF_PI
    inside = (np.abs(x - cx) + np.abs(y - cy)) < HALF_PI
    return cx, cy, inside


def classify_plane_block(x, y, cfg: RenderConfig):
    """Fate codes and capture steps for a block of plane points (z = 0).

    Mirrors the scalar classifier: convergence needs ``settle``
    consecutive steps inside ``tol`` of a target, escape needs
    ``escape_run`` consecutive strictly-growing diamond-centre norms
    plus norm above ``escape_norm``.  Also returns the first step at
    which each orbit exceeded ``escape_norm`` inside a diamond (the
    escape depth; 0 where that never happened).
    """
    shape = x.shape
    px = x.astype(float).copy()
    py = y.astype(float).copy()
    fate = np.zeros(shape, dtype=np.uint8)
    when = np.zeros(shape, dtype=np.int32)
    depth = np.zeros(shape, dtype=np.int32)
    run_origin = np.zeros(shape, dtype=np.int16)
    grow = np.zeros(shape, dtype=np.int16)
    prev_cn = np.full(shape, np.nan)
    alive = np.ones(shape, dtype=bool)
    zeros = np.zeros(shape)
    for step in range(1, cfg.max_iter + 1):
        if not alive.any():
            break
        tx, ty, tz, finite = tangent3_grid(px, py, zeros, cfg.lam)
        px = np.where(alive, tx, px)
        py = np.where(alive, ty, py)
        hit = alive & ~finite
        fate[hit] = _FATE_POLE
        when[hit] = step
        depth[hit & (depth == 0)] = step  # a pole hit tops any norm threshold
        alive &= finite
        norm = np.hypot(px, py)
        d_origin = norm  # z = 0 throughout
        run_origin = np.where(alive & (d_origin < cfg.tol), run_origin + 1, 0)
        captured = alive & (run_origin >= cfg.settle)
        fate[captured] = _FATE_ORIGIN
        when[captured] = step
        alive &= ~captured
        # the axis fixed points at z = +-xi are unreachable from z = 0
        # (the plane is exactly invariant), so the origin is the only
        # convergence target a basin render can see
        cx, cy, inside = _diamond_centers(px, py)
        cn = np.hypot(cx, cy)
        grew = alive & inside & ~np.isnan(prev_cn) & (cn > prev_cn)
        grow = np.where(grew, grow + 1, 0)
        prev_cn = np.where(alive & inside, cn, np.nan)
        newdepth = alive & inside & (norm > cfg.depth_norm) & (depth == 0)
        depth[newdepth] = step
        esc = alive & inside & (norm > cfg.escape_norm) & (grow >= cfg.escape_run)
        fate[esc] = _FATE_ESCAPING
        when[esc] = step
        alive &= ~esc
    when[alive] = cfg.max_iter
    return fate, when, depth


# ---------------------------------------------------------------------------
# palettes

_ORIGIN_ANCHORS = np.array([
    (0.00, 10, 25, 110),
    (0.35, 55, 115, 200),
    (0.60, 235, 220, 110),
    (0.80, 230, 120, 55),
    (1.00, 170, 35, 35),
], dtype=float)

_DEPTH_ANCHORS = np.array([
    (0.00, 20, 12, 60),
    (0.35, 95, 35, 125),
    (0.65, 225, 95, 60),
    (1.00, 250, 240, 150),
], dtype=float)


def _ramp(t, anchors):
    t = np.clip(t, 0.0, 1.0)
    out = np.empty(t.shape + (3,), dtype=float)
    pos = anchors[:, 0]
    for c in range(3):
        out[..., c] = np.interp(t, pos, anchors[:, c + 1])
    return out


def _log_fraction(when, max_iter):
    return np.log1p(when.astype(float)) / math.log1p(max_iter)


def colorize_fates(fate, when, max_iter):
    """Fate hue with log-scaled capture-time lightness: fast capture into the
    origin is dark blue, slow capture drifts through yellow to red; pole hits
    are white, escapes light grey, undecided black."""
    t = _log_fraction(when, max_iter)
    img = np.zeros(fate.shape + (3,), dtype=float)
    origin = fate == _FATE_ORIGIN
    img[origin] = _ramp(t[origin], _ORIGIN_ANCHORS)
    up = fate == _FATE_UPPER
    img[up] = np.stack([60 + 120 * t[up], 170 - 60 * t[up], 90 + 40 * t[up]], axis=-1)
    down = fate == _FATE_LOWER
    img[down] = np.stack([120 + 60 * t[down], 60 + 40 * t[down], 170 * np.ones_like(t[down])], axis=-1)
    img[fate == _FATE_POLE] = (255.0, 255.0, 255.0)
    img[fate == _FATE_ESCAPING] = (210.0, 210.0, 218.0)
    return np.clip(np.rint(img), 0, 255).astype(np.uint8)


def colorize_depth(depth, max_iter):
    """Escape depth on a dark-to-light ramp; zero depth stays black."""
    img = np.zeros(depth.shape + (3,), dtype=float)
    got = depth > 0
    img[got] = _ramp(_log_fraction(depth[got], max_iter), _DEPTH_ANCHORS)
    return np.clip(np.rint(img), 0, 255).astype(np.uint8)


# ---------------------------------------------------------------------------
# drivers

def _run_blocks(cfg: RenderConfig, worker):
    blocks = [(r, min(r + cfg.row_block, cfg.height))
              for r in range(0, cfg.height, cfg.row_block)]
    if cfg.threads > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            results = list(pool.map(worker, blocks))
    else:
        results = [worker(b) for b in blocks]
    return blocks, results


def render_basin(cfg: RenderConfig) -> np.ndarray:
    """Basin image: per-pixel orbit fate with capture-time shading.

    Returns an (height, width, 3) uint8 array, row 0 at the top.
    """
    def worker(block):
        r0, r1 = block
        gx, gy = pixel_grid(cfg, r0, r1)
        fate, when, _ = classify_plane_block(gx, gy, cfg)
        return colorize_fates(fate, when, cfg.max_iter)

    blocks, results = _run_blocks(cfg, worker)
    img = np.empty((cfg.height, cfg.width, 3), dtype=np.uint8)
    for (r0, r1), chunk in zip(blocks, results):
        img[r0:r1] = chunk
    return img


def compute_escape_depth(cfg: RenderConfig) -> np.ndarray:
    """First step at which each pixel's orbit exceeds escape_norm inside a
    diamond (0 where that never happens within max_iter)."""
    def worker(block):
        r0, r1 = block
        gx, gy = pixel_grid(cfg, r0, r1)
        _, _, depth = classify_plane_block(gx, gy, cfg)
        return depth

    blocks, results = _run_blocks(cfg, worker)
    depth = np.empty((cfg.height, cfg.width), dtype=np.int32)
    for (r0, r1), chunk in zip(blocks, results):
        depth[r0:r1] = chunk
    return depth


def render_escape_depth(cfg: RenderConfig) -> np.ndarray:
    """Escape-depth image (uint8 RGB); black where the orbit never ran off."""
    return colorize_depth(compute_escape_depth(cfg), cfg.max_iter)


# ---------------------------------------------------------------------------
# image output

def encode_ppm(image: np.ndarray) -> bytes:
    """Binary PPM (P6, maxval 255) encoding of an (h, w, 3) uint8 array."""
    if image.ndim != 3 or image.shape[2] != 3 or image.dtype != np.uint8:
        raise ValueError("expected an (h, w, 3) uint8 image")
    h, w = image.shape[:2]
    return f"P6\n{w} {h}\n255\n".encode("ascii") + image.tobytes()


def write_ppm(image: np.ndarray, path):
    with open(path, "wb") as f:
        f.write(encode_ppm(image))


def write_png(image: np.ndarray, path):
    """PNG output through Pillow; optional, PPM is the canonical format."""
    try:
        from PIL import Image
    except ImportError as e:  # pragma: no cover
        raise RuntimeError("PNG output needs Pillow; write PPM instead") from e
    Image.fromarray(image, mode="RGB").save(path, format="PNG")
