"""Fixed points, basins, petal region and orbit-fate classification.

For lam > 1 the scaled tangent map has attracting fixed points at
(0, 0, +-xi) where xi solves lam*tanh(xi) = xi, and the open half-spaces
are their basins; for lam <= 1 everything off the plane falls into the
origin.  On the plane, for lam < sqrt(2), an explicit union of diagonal
sectors (the "petal" region) is absorbed by the origin.  This module
solves the scalar fixed-point equations, classifies orbits with an
honest Undecided outcome, and carries the sampled checks behind those
statements, including the full-space blow-up probe.
"""

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .core import (
    HALF_PI,
    INFINITY,
    QUARTER_PI,
    as_vec3,
    chordal,
    is_infinity,
    tangent3,
)
from .plane import (
    SQRT2,
    containing_diamond,
    pole_location,
    preimages_tangent3,
)


def axis_fixed_point(lam: float) -> float:
    """The positive solution of lam * tanh(xi) = xi (needs lam > 1).

    Bisection on [tiny, lam] followed by Newton polish; the residual of
    the returned value is below 1e-12.  For lam <= 1 the only solution
    is 0 and a ValueError is raised.
    """
    if not lam > 1.0:
        raise ValueError("the equation has a positive root only for lam > 1")
    def g(t):
        return lam * math.tanh(t) - t
    lo, hi = 1e-300, lam  # g > 0 near 0+ since the slope is lam > 1; g(lam) < 0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if g(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    x = 0.5 * (lo + hi)
    for _ in range(4):
        dg = lam / math.cosh(x) ** 2 - 1.0
        if dg == 0.0:
            break
        x -= g(x) / dg
    return x


def smallest_tan_fixed_point(mu: float) -> float:
    """The smallest positive solution of mu * tan(x) = x, for 0 < mu < 1.

    Lies in (0, pi/2); decreasing in mu.  Bisection plus Newton polish,
    residual below 1e-12.
    """
    if not (0.0 < mu < 1.0):
        raise ValueError("need 0 < mu < 1")
    def g(t):
        return mu * math.tan(t) - t
    lo, hi = 1e-12, HALF_PI * (1.0 - 1e-14)  # g < 0 just above 0, g -> +inf at pi/2
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if g(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    x = 0.5 * (lo + hi)
    for _ in range(4):
        dg = mu / math.cos(x) ** 2 - 1.0
        if dg == 0.0:
            break
        step = g(x) / dg
        if 0.0 < x - step < HALF_PI:
            x -= step
    return x


def offaxis_ratio(v) -> float:
    """max(|x|, |y|) / z for a point with z > 0.

    Strictly decreases along orbits in the upper half-space (away from
    the axis), which is the engine of the basin argument.
    """
    v = as_vec3(v)
    if not v[2] > 0.0:
        raise ValueError("defined for z > 0 only")
    return max(abs(float(v[0])), abs(float(v[1]))) / float(v[2])


# ---------------------------------------------------------------------------
# petal region in the plane

def petal_x_bound(lam: float, alpha_sq: float):
    """Half-length bound of the petal sector with slope^2 = alpha_sq, or None
    when the sector is empty (alpha_sq outside (lam^2 - 1, 1])."""
    if not (lam * lam - 1.0 < alpha_sq <= 1.0):
        return None
    mu = lam / math.sqrt(1.0 + alpha_sq)
    if mu >= 1.0:
        return None
    return min(QUARTER_PI, smallest_tan_fixed_point(mu))


def petal_contains(p, lam: float) -> bool:
    """Membership in the petal region Q (union of two diagonal sector fans).

    Defined for 0 < lam < sqrt(2).  A point (x, a*x) with a^2 in
    (lam^2 - 1, 1] belongs when |x| < min(pi/4, bound(a)); the second
    fan swaps the roles of the coordinates.  For lam <= pi/4 this
    reduces to the whole open square (-pi/4, pi/4)^2.
    """
    if not (0.0 < lam < SQRT2):
        raise ValueError("petal region defined for 0 < lam < sqrt(2)")
    x, y = float(p[0]), float(p[1])
    if x == 0.0 and y == 0.0:
        return True
    for base, other in ((x, y), (y, x)):
        if base == 0.0 or abs(other) > abs(base):
            continue
        alpha_sq = (other / base) ** 2
        bound = petal_x_bound(lam, alpha_sq)
        if bound is not None and abs(base) < bound:
            return True
    return False


def petal_boundary_residual(lam: float, n_samples: int = 100):
    """Max |T_lam(p) - p| over petal-boundary points inside the open square.

    Those points are fixed: along a diagonal line with slope a the map
    acts as the one-dimensional mu*tan with mu = lam/sqrt(1+a^2), and
    the boundary abscissa is that map's smallest positive fixed point.
    Only boundary abscissas strictly below pi/4 exist as boundary points
    of the open square; for lam <= pi/4 there are none and (0.0, 0)
    is returned.
    """
    if not (0.0 < lam < SQRT2):
        raise ValueError("need 0 < lam < sqrt(2)")
    lo = max(lam * lam - 1.0, 0.0)
    alphas_sq = np.linspace(lo, 1.0, n_samples + 1)[1:]
    worst = 0.0
    count = 0
    for a2 in alphas_sq:
        bound = petal_x_bound(lam, float(a2))
        if bound is None or bound >= QUARTER_PI:
            continue
        a = math.sqrt(float(a2))
        for sx in (1.0, -1.0):
            for sa in (1.0, -1.0):
                x = sx * bound
                for p in (np.array([x, sa * a * x, 0.0]),
                          np.array([sa * a * x, x, 0.0])):
                    img = tangent3(p, lam)
                    worst = max(worst, float(np.linalg.norm(img - p)))
                    count += 1
    return worst, count


# ---------------------------------------------------------------------------
# orbit classification

class Fate(Enum):
    TO_UPPER_FIXED = "ToUpperFixed"
    TO_LOWER_FIXED = "ToLowerFixed"
    TO_ORIGIN = "ToOrigin"
    ESCAPING = "Escaping"
    POLE_HIT = "PoleHit"
    UNDECIDED = "Undecided"


@dataclass
class FateRecord:
    fate: Fate
    iterations: int
    residual: float
    witness: object  # final point, or INFINITY for a pole hit


def classify_orbit(v, lam: float, max_iter: int = 500, tol: float = 1e-6,
                   escape_run: int = 8, escape_norm: float = 50.0,
                   settle: int = 3) -> FateRecord:
    """Iterate the scaled tangent map and name the orbit's fate.

    Convergence fates require staying within ``tol`` of the target for
    ``settle`` consecutive steps.  The escape call is heuristic by
    nature (the escaping set is totally disconnected): the orbit must
    sit in pole diamonds whose centre norms strictly increased for
    ``escape_run`` consecutive steps while the orbit norm exceeds
    ``escape_norm``.  Anything else at the horizon is Undecided.
    """
    if max_iter < 1:
        raise ValueError("need max_iter >= 1")
    targets = [(Fate.TO_ORIGIN, np.zeros(3))]
    if lam > 1.0:
        xi = axis_fixed_point(lam)
        targets.append((Fate.TO_UPPER_FIXED, np.array([0.0, 0.0, xi])))
        targets.append((Fate.TO_LOWER_FIXED, np.array([0.0, 0.0, -xi])))
    runs = [0] * len(targets)
    p = as_vec3(v)
    grow_run = 0
    prev_center_norm = None
    for it in range(1, max_iter + 1):
        p = tangent3(p, lam)
        if is_infinity(p):
            return FateRecord(Fate.POLE_HIT, it, 0.0, INFINITY)
        for i, (fate, target) in enumerate(targets):
            d = float(np.linalg.norm(p - target))
            runs[i] = runs[i] + 1 if d < tol else 0
            if runs[i] >= settle:
                return FateRecord(fate, it, d, p)
        # escape bookkeeping only makes sense on the invariant plane
        if p[2] == 0.0:
            idx = containing_diamond(p[:2])
            if idx is not None:
                cn = float(np.linalg.norm(pole_location(idx)))
                if prev_center_norm is not None and cn > prev_center_norm:
                    grow_run += 1
                else:
                    grow_run = 0
                prev_center_norm = cn
                if grow_run >= escape_run and float(np.linalg.norm(p)) > escape_norm:
                    return FateRecord(Fate.ESCAPING, it, 0.0, p)
            else:
                grow_run = 0
                prev_center_norm = None
        else:
            grow_run = 0
            prev_center_norm = None
    return FateRecord(Fate.UNDECIDED, max_iter, math.nan, p)


# ---------------------------------------------------------------------------
# sampled inequality checks

def parabolic_decrease_check(eps: float = 0.05, n_samples: int = 10_000,
                             seed: int = 0) -> bool:
    """Sampled check (lam = 1 only) that the third component obeys
    T_3(x,y,z) <= z - z^3/24 on the cusp region {max(|x|,|y|) < z/2 < eps}."""
    rng = np.random.default_rng(seed)
    count = 0
    while count < n_samples:
        z = rng.uniform(0.0, 2.0 * eps)
        if z <= 0.0:
            continue
        m = z / 2.0
        x = rng.uniform(-m, m)
        y = rng.uniform(-m, m)
        count += 1
        img = tangent3(np.array([x, y, z]), 1.0)
        if float(img[2]) > z - z ** 3 / 24.0:
            return False
    return True


def third_component_bound_violations(lam: float, n_samples: int = 10_000,
                                     seed: int = 0, z_max: float = 5.0,
                                     slack: float = 1e-12) -> int:
    """Count violations of T_3(x,y,z) >= lam*tanh(z) - slack over random
    samples with z > 0 (odd- and even-parity tiles both covered)."""
    rng = np.random.default_rng(seed)
    xs = rng.uniform(-10.0, 10.0, n_samples)
    ys = rng.uniform(-10.0, 10.0, n_samples)
    zs = rng.uniform(1e-9, z_max, n_samples)
    bad = 0
    for x, y, z in zip(xs, ys, zs):
        img = tangent3(np.array([x, y, z]), lam)
        if float(img[2]) < lam * math.tanh(z) - slack:
            bad += 1
    return bad


def offaxis_monotonicity_violations(lam: float, n_samples: int = 10_000,
                                    seed: int = 0) -> int:
    """Count violations of offaxis_ratio(T(v)) < offaxis_ratio(v) on random
    upper-half-space samples with max(|x|,|y|) bounded away from 0."""
    rng = np.random.default_rng(seed)
    bad = 0
    for _ in range(n_samples):
        v = np.array([rng.uniform(-10, 10), rng.uniform(-10, 10),
                      rng.uniform(1e-6, 10.0)])
        if max(abs(v[0]), abs(v[1])) < 1e-9:
            continue
        img = tangent3(v, lam)
        if is_infinity(img) or not img[2] > 0.0:
            bad += 1
            continue
        if not offaxis_ratio(img) < offaxis_ratio(v):
            bad += 1
    return bad


def diagonal_reduction_error(lam: float, n_samples: int = 200, seed: int = 0) -> float:
    """Max error of T_lam(x, a*x, 0) = (t, a*t, 0) with t = mu*tan(x),
    mu = lam/sqrt(1+a^2), over random diagonal samples."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n_samples):
        a = rng.uniform(-1.0, 1.0)
        x = rng.uniform(-QUARTER_PI, QUARTER_PI)
        mu = lam / math.sqrt(1.0 + a * a)
        t = mu * math.tan(x)
        img = tangent3(np.array([x, a * x, 0.0]), lam)
        want = np.array([t, a * t, 0.0])
        worst = max(worst, float(np.linalg.norm(img - want)))
    return worst


# ---------------------------------------------------------------------------
# blow-up probe

@dataclass
class TargetCoverage:
    target: object
    covered: bool
    iterations: int | None       # steps of the map needed, when covered
    witness: np.ndarray | None   # start point in the probed ball
    distance: float              # chordal gap achieved at the target
    note: str = ""


@dataclass
class BlowupReport:
    center: np.ndarray
    radius: float
    lam: float
    results: list = field(default_factory=list)

    @property
    def all_covered(self) -> bool:
        return all(r.covered for r in self.results)


def _far_preimage(target, lam, min_norm):
    """A verified preimage of ``target`` whose plane coordinates are far out.

    Preimages of any non-omitted value occupy two pi-periodic families
    per coordinate at a fixed height, so marching the search box outward
    always finds one.
    """
    k = int(math.ceil(min_norm / math.pi)) + 1
    for attempt in range(k, k + 8):
        cx = attempt * math.pi
        got = preimages_tangent3(target, lam, (cx - HALF_PI, cx + HALF_PI,
                                               cx - HALF_PI, cx + HALF_PI))
        if got:
            return got[0]
    return None


def blowup_probe(center, radius: float, lam: float, targets,
                 max_iter: int = 60, n_samples: int = 400,
                 hit_tol: float = 0.05, seed: int = 0) -> BlowupReport:
    """Sampled check that iterates of a small ball blow up onto everything.

    Iterates a seeded sample of the 3-ball B(center, radius) (center is a
    plane point) and records, per target, the first step coming within
    ``hit_tol`` (chordal) of it.  When the ball contains a pole, a
    two-step witness is constructed exactly: a far preimage of the
    target, then its preimage beside the pole inside the ball; the
    witness is verified by forward evaluation, never assumed.  Targets
    equal to the omitted values (0, 0, +-lam) are rejected.  Honest
    non-coverage at the horizon is reported, not patched over.
    """
    if radius <= 0.0:
        raise ValueError("need radius > 0")
    center = np.array([float(center[0]), float(center[1]), 0.0])
    omitted = (np.array([0.0, 0.0, lam]), np.array([0.0, 0.0, -lam]))
    report = BlowupReport(center=center, radius=radius, lam=lam)

    checks = []
    for t in targets:
        if not is_infinity(t):
            t = as_vec3(t)
            if any(chordal(t, o) < 1e-9 for o in omitted):
                report.results.append(TargetCoverage(
                    t, False, None, None, math.inf, "rejected: omitted value"))
                continue
        checks.append(t)

    rng = np.random.default_rng(seed)
    pts = rng.normal(size=(n_samples, 3))
    pts /= np.linalg.norm(pts, axis=1)[:, None]
    pts *= (radius * rng.uniform(0.0, 1.0, n_samples) ** (1.0 / 3.0))[:, None]
    pts += center
    starts = np.vstack([center[None, :], pts])

    best = {id(t): (math.inf, None, None) for t in checks}

    # two-step exact witnesses through any pole inside the ball
    pole_hits = []
    span = int(math.ceil((np.abs(center[:2]).max() + radius) / HALF_PI)) + 1
    for m in range(-span, span + 1):
        for n in range(-span, span + 1):
            loc = pole_location((m, n))
            if math.hypot(loc[0] - center[0], loc[1] - center[1]) < radius * 0.98:
                pole_hits.append(loc)
    for t in checks:
        for loc in pole_hits:
            far = _far_preimage(t, lam, min_norm=max(50.0, 4.0 * math.pi / radius))
            if far is None:
                continue
            cands = preimages_tangent3(far, lam,
                                       (loc[0] - QUARTER_PI, loc[0] + QUARTER_PI,
                                        loc[1] - QUARTER_PI, loc[1] + QUARTER_PI))
            for c in cands:
                if float(np.linalg.norm(c - center)) >= radius:
                    continue
                p = tangent3(c, lam)
                if is_infinity(p):
                    continue
                p2 = tangent3(p, lam)
                d = chordal(p2, t)
                if d < hit_tol and d < best[id(t)][0]:
                    best[id(t)] = (d, 2, c)
            if best[id(t)][1] is not None:
                break

    # forward sampling for whatever is still uncovered
    alive = [np.array(s) for s in starts]
    for step in range(1, max_iter + 1):
        nxt = []
        for p in alive:
            q = tangent3(p, lam)
            if is_infinity(q):
                continue
            nxt.append(q)
        alive = nxt
        if not alive:
            break
        for t in checks:
            if best[id(t)][1] is not None:
                continue
            for q in alive:
                d = chordal(q, t)
                if d < hit_tol:
                    best[id(t)] = (d, step, None)
                    break

    for t in checks:
        d, m, witness = best[id(t)]
        covered = m is not None
        report.results.append(TargetCoverage(
            t, covered, m, witness, d,
            "" if covered else f"not reached within {max_iter} iterations"))
    return report
