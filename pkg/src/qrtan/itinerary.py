"""Symbolic dynamics of escaping orbits: itineraries, their inverses, and
periodic points.

An escaping plane orbit visits a sequence of pole diamonds whose centres
march off to infinity; that sequence is the orbit's itinerary, and it
determines the orbit.  Going the other way, composing inverse branches
along a prescribed diamond sequence nests compact sets whose diameters
collapse geometrically, pinning down the unique point with that
itinerary.  Replacing the final topological fixed-point step with a
monitored contraction iteration also yields periodic orbits shadowing
any escaping point.

Forward verification at depth is done waypoint by waypoint: each
backward-constructed orbit point is pushed one step forward and compared
to the next.  A single long double-precision forward run is useless
here; local expansion near the visited poles multiplies and wipes out
all digits after roughly ten symbols, while every one-step comparison is
good to ~1e-12.
"""

import math
from dataclasses import dataclass

import numpy as np

from .core import is_infinity
from .plane import (
    PoleIndex,
    containing_diamond,
    inverse_branch,
    plane_map,
    pole_location,
    required_tail_radius,
)


@dataclass
class Itinerary:
    """A pole-diamond sequence: explicit prefix plus a tail rule.

    ``prefix`` lists the first symbols; ``tail`` (when present) maps
    j >= len(prefix) to further pole indices and must eventually produce
    norms above the calibrated tail radius, nondecreasing and unbounded.
    """

    prefix: list
    tail: object = None  # callable j -> PoleIndex

    def symbol(self, j: int) -> PoleIndex:
        if j < len(self.prefix):
            return PoleIndex(*self.prefix[j])
        if self.tail is None:
            raise IndexError("itinerary has no tail rule")
        return PoleIndex(*self.tail(j))

    def symbols(self, n: int):
        return [self.symbol(j) for j in range(n)]


class StopReason:
    POLE_HIT = "pole-hit"
    LEFT_DIAMONDS = "left-diamonds"
    COMPLETE = "complete"


def itinerary_of(p, lam: float, n_terms: int):
    """Read off the diamond indices visited by the forward orbit of p.

    Emits one index per iterate sitting in an open diamond and stops
    early with a reason when the orbit lands on the diagonal grid
    (escaping points never do) or hits a pole.  Plain forward iteration:
    reliable to a depth set by the accumulated local expansion, roughly
    ten to twenty symbols for moderate tails.
    """
    symbols = []
    cur = np.array([float(p[0]), float(p[1])])
    for _ in range(n_terms):
        idx = containing_diamond(cur)
        if idx is None:
            return symbols, StopReason.LEFT_DIAMONDS
        symbols.append(idx)
        nxt = plane_map(cur, lam)
        if is_infinity(nxt):
            return symbols, StopReason.POLE_HIT
        cur = nxt
    return symbols, StopReason.COMPLETE


def _check_tail(itin: Itinerary, lam: float, n: int):
    r = required_tail_radius(lam)
    norms = [float(np.linalg.norm(pole_location(itin.symbol(j)))) for j in range(n)]
    tail_start = len(itin.prefix)
    for j in range(tail_start, n):
        if norms[j] <= r:
            raise ValueError(
                f"tail pole {j} has norm {norms[j]:.3f} <= calibrated radius {r:.3f}")
        if j + 1 < n and norms[j + 1] < norms[j] - 1e-12:
            raise ValueError("tail pole norms must be nondecreasing")
    return norms


def point_from_itinerary(itin: Itinerary, lam: float, n_compose: int = 30,
                         return_waypoints: bool = False):
    """The plane point whose orbit runs through the prescribed diamonds.

    Pulls the centre of diamond n_compose back through the composed
    inverse branches.  Successive truncations are Cauchy (geometric in
    n_compose); beyond ~30 compositions the increments sit below double
    resolution.  With ``return_waypoints`` the whole backward orbit
    x_j = S_{p_j} o ... o S_{p_{n-1}}(centre) comes along, x_0 being the
    answer.
    """
    if itin.tail is None and len(itin.prefix) <= n_compose:
        raise ValueError("need a tail rule (or a prefix longer than n_compose)")
    _check_tail(itin, lam, n_compose + 1)
    w = pole_location(itin.symbol(n_compose)).copy()
    waypoints = [None] * (n_compose + 1)
    waypoints[n_compose] = w
    for j in range(n_compose - 1, -1, -1):
        w = inverse_branch(itin.symbol(j), w, lam)
        waypoints[j] = w
    if return_waypoints:
        return w, waypoints
    return w


def shadow_check(waypoints, itin: Itinerary, lam: float, depth: int,
                 step_tol: float = 1e-8):
    """Verify, symbol by symbol, that the constructed orbit runs the itinerary.

    For j < depth checks that waypoint j lies in open diamond j and that
    one forward step lands within ``step_tol`` of waypoint j+1.  Each
    check is a single-step evaluation, so the certificate does not decay
    with depth.  Returns (ok, worst_gap).
    """
    worst = 0.0
    for j in range(depth):
        x = waypoints[j]
        idx = containing_diamond(x)
        if idx != itin.symbol(j):
            return False, math.inf
        img = plane_map(x, lam)
        if is_infinity(img):
            return False, math.inf
        gap = float(np.linalg.norm(img - waypoints[j + 1]))
        worst = max(worst, gap)
        if gap > step_tol:
            return False, worst
    return True, worst


# ---------------------------------------------------------------------------
# periodic points

class ContractionFailure(RuntimeError):
    """The composed branch map failed to contract; the cycle poles sit too
    close to the origin region for this parameter."""


@dataclass
class PeriodicCycleSpec:
    cycle: list  # nonempty list of PoleIndex

    def __post_init__(self):
        if len(self.cycle) == 0:
            raise ValueError("cycle must be nonempty")
        self.cycle = [PoleIndex(*c) for c in self.cycle]


@dataclass
class PeriodicPoint:
    point: np.ndarray
    period: int
    residual: float          # |F^k(y) - y|
    orbit: list              # the k cycle points


def _composed_branch(cycle, lam):
    def apply(w):
        for idx in reversed(cycle):
            w = inverse_branch(idx, w, lam)
        return w
    return apply


def periodic_point_from_cycle(spec: PeriodicCycleSpec, lam: float,
                              max_iter: int = 300, polish: bool = True) -> PeriodicPoint:
    """Fixed point of the composed inverse branch along a pole cycle.

    The composition maps the first diamond into itself and contracts on
    far cycles, so plain iteration from the pole centre converges; the
    iteration aborts loudly if the step ratio fails to contract five
    times in a row.  The returned point is verified forward: F^k walks
    the prescribed diamonds and returns to the point within the quoted
    residual.  An optional Newton polish (on the true forward map, with
    a chained one-step Jacobian) trims the last digits of the residual.
    """
    cycle = spec.cycle
    r = required_tail_radius(lam)
    for idx in cycle:
        norm = float(np.linalg.norm(pole_location(idx)))
        if norm <= r:
            raise ValueError(
                f"cycle pole {tuple(idx)} has norm {norm:.3f} <= calibrated radius {r:.3f}")
    comp = _composed_branch(cycle, lam)
    y = pole_location(cycle[0]).copy()
    prev_step = None
    noncontract = 0
    for _ in range(max_iter):
        y_next = comp(y)
        step = float(np.linalg.norm(y_next - y))
        y = y_next
        if prev_step is not None and prev_step > 0.0:
            if step >= prev_step:
                noncontract += 1
                if noncontract >= 5:
                    raise ContractionFailure(
                        "composed branch map is not contracting on this cycle")
            else:
                noncontract = 0
        prev_step = step
        if step < 1e-13:
            break
    if polish:
        y = _newton_polish(y, cycle, lam)
    orbit, residual = _forward_cycle(y, cycle, lam)
    if orbit is None:
        raise ContractionFailure("forward orbit left the prescribed diamonds")
    return PeriodicPoint(point=y, period=len(cycle), residual=residual, orbit=orbit)


def _forward_cycle(y, cycle, lam):
    """Forward-run one period; returns (orbit, residual) or (None, inf) when a
    diamond membership or pole is violated."""
    orbit = [np.array(y)]
    p = np.array(y)
    for idx in cycle:
        if containing_diamond(p) != idx:
            return None, math.inf
        p = plane_map(p, lam)
        if is_infinity(p):
            return None, math.inf
        orbit.append(p)
    return orbit[:-1], float(np.linalg.norm(orbit[0] - p))


def _newton_polish(y, cycle, lam, rounds: int = 6):
    """Newton steps on g(y) = F^k(y) - y, keeping only residual improvements.

    The Jacobian of F^k is accumulated as a product of one-step central
    differences evaluated at the orbit points, which stays accurate where
    a single long-stencil difference would be noise.
    """
    def forward(p):
        pts = [np.array(p)]
        for _ in cycle:
            q = plane_map(pts[-1], lam)
            if is_infinity(q):
                return None
            pts.append(q)
        return pts

    def resid(p):
        pts = forward(p)
        if pts is None:
            return math.inf, None
        return float(np.linalg.norm(pts[-1] - pts[0])), pts

    best_r, best_pts = resid(y)
    best = np.array(y)
    cur = np.array(y)
    h = 1e-7
    for _ in range(rounds):
        pts = forward(cur)
        if pts is None:
            break
        jac = np.eye(2)
        ok = True
        for p in pts[:-1]:
            cols = []
            for i in range(2):
                pp, pm = p.copy(), p.copy()
                pp[i] += h
                pm[i] -= h
                fp, fm = plane_map(pp, lam), plane_map(pm, lam)
                if is_infinity(fp) or is_infinity(fm):
                    ok = False
                    break
                cols.append((fp - fm) / (2.0 * h))
            if not ok:
                break
            jac = np.column_stack(cols) @ jac
        if not ok:
            break
        g = pts[-1] - pts[0]
        try:
            delta = np.linalg.solve(jac - np.eye(2), -g)
        except np.linalg.LinAlgError:
            break
        cand = cur + delta
        r_cand, _ = resid(cand)
        if r_cand < best_r:
            best_r, best = r_cand, cand
            cur = cand
        else:
            break
    return best


def periodic_near_escaping(v, eta: float, lam: float, n_symbols: int = 40,
                           max_period: int = 64, verbose: bool = False) -> PeriodicPoint:
    """A periodic point within eta of the escaping plane point v.

    Reads off v's itinerary, drops leading symbols until the rest clear
    the calibrated radius, and closes a block of N + M symbols into a
    cycle; the composed-branch fixed point then traces the same diamonds
    as v for a whole period and so lands beside it.  M starts at the
    estimate from the per-step shadowing contraction and grows until the
    verified gap beats eta (smaller eta therefore needs and reports a
    larger M), within the depth the read-back can be trusted to.
    """
    if eta <= 0.0:
        raise ValueError("need eta > 0")
    target = np.array([float(v[0]), float(v[1])])
    symbols, reason = itinerary_of(v, lam, n_symbols)
    if len(symbols) < 3:
        raise ValueError(f"itinerary too short ({reason}); not an escaping candidate")
    r = required_tail_radius(lam)
    norms = [float(np.linalg.norm(pole_location(s))) for s in symbols]

    def usable_period(n_prefix, m_extra):
        period = n_prefix + m_extra
        if period > min(len(symbols), max_period):
            return None
        if any(norms[j] <= r for j in range(n_prefix, period)):
            return None
        return period

    # grow the closing block from short to long and return the first cycle
    # whose verified gap beats eta: the shortest admissible period also has
    # the smallest forward-iteration noise, and smaller eta is thereby
    # reported as a larger period
    last_err = "no admissible symbol block"
    for n_prefix in range(0, len(symbols) - 2):
        m_extra = 2
        tried_any = False
        while True:
            period = usable_period(n_prefix, m_extra)
            if period is None:
                break
            tried_any = True
            spec = PeriodicCycleSpec(cycle=list(symbols[:period]))
            try:
                result = _periodic_from_mixed_cycle(spec, lam)
            except ContractionFailure as e:
                last_err = str(e)
                m_extra += 1
                continue
            gap = float(np.linalg.norm(result.point - target))
            if gap < eta:
                if verbose:
                    print(f"period {period} = {n_prefix} prefix + {m_extra} closing "
                          f"symbols, gap {gap:.3e}")
                return result
            last_err = f"gap {gap:.3e} >= eta with period {period}"
            m_extra += 1
        if tried_any:
            break  # longer periods were exhausted; a later prefix cannot help
    raise ValueError(f"could not reach eta={eta}: {last_err}")


def _periodic_from_mixed_cycle(spec: PeriodicCycleSpec, lam: float) -> PeriodicPoint:
    """periodic_point_from_cycle without the all-poles-far gate; used by the
    shadowing construction whose prefix legitimately visits near poles.
    Contraction is still monitored and the forward orbit still verified."""
    comp = _composed_branch(spec.cycle, lam)
    y = pole_location(spec.cycle[0]).copy()
    prev_step = None
    noncontract = 0
    for _ in range(400):
        y_next = comp(y)
        step = float(np.linalg.norm(y_next - y))
        y = y_next
        if prev_step is not None and prev_step > 0.0:
            if step >= prev_step:
                noncontract += 1
                if noncontract >= 5:
                    raise ContractionFailure(
                        "composed branch map is not contracting on this cycle")
            else:
                noncontract = 0
        prev_step = step
        if step < 1e-13:
            break
    y = _newton_polish(y, spec.cycle, lam)
    orbit, residual = _forward_cycle(y, spec.cycle, lam)
    if orbit is None:
        raise ContractionFailure("forward orbit left the prescribed diamonds")
    return PeriodicPoint(point=y, period=len(spec.cycle), residual=residual, orbit=orbit)
