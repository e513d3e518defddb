"""Tests for the plane map: pole lattice, derivative sampling, inverse
branches and the expansion calibration."""

import math

import numpy as np
import pytest

from qrtan.core import INFINITY, is_infinity
from qrtan.plane import (
    BranchDomainError,
    Diamond,
    PoleIndex,
    beam_sector_eigenvalues,
    branch_contraction_ratio,
    calibrate_expansion,
    containing_diamond,
    diagonal_segment_distance,
    distance_to_nonsmooth,
    inverse_branch,
    jacobian_plane_map,
    plane_chordal,
    plane_map,
    pole_expansion_ratio,
    pole_location,
    preimages_tangent3,
    required_tail_radius,
)

HALF_PI = math.pi / 2
SQRT2 = math.sqrt(2)


def diamond_samples(rng, idx, n):
    c = pole_location(idx)
    out = []
    while len(out) < n:
        d = rng.uniform(-HALF_PI, HALF_PI, 2)
        if abs(d[0]) + abs(d[1]) < HALF_PI:
            out.append(c + d)
    return out


class TestPoleLattice:
    @pytest.mark.parametrize("idx,loc", [
        ((0, 0), (0.0, HALF_PI)),
        ((1, 0), (HALF_PI, 0.0)),
        ((0, 1), (HALF_PI, math.pi)),
    ])
    def test_locations(self, idx, loc):
        np.testing.assert_allclose(pole_location(idx), loc)

    def test_poles_map_to_infinity(self):
        for m in range(-3, 4):
            for n in range(-3, 4):
                assert is_infinity(plane_map(pole_location((m, n)), 1.7))

    def test_containing_diamond_examples(self):
        assert containing_diamond((0.1, 1.5)) == PoleIndex(0, 0)
        assert containing_diamond((1.0, 1.0)) is None  # diagonal grid point

    def test_center_containment_roundtrip(self):
        for m in range(-20, 21, 4):
            for n in range(-20, 21, 4):
                assert containing_diamond(pole_location((m, n))) == PoleIndex(m, n)

    def test_diamond_membership(self):
        d = Diamond(PoleIndex(0, 0))
        assert d.contains((0.1, 1.5))
        assert not d.contains((1.0, 1.0))
        assert not d.contains((0.0, 3.2))


class TestPlaneMap:
    def test_agrees_with_real_tangent(self):
        got = plane_map((math.pi / 8, 0.0))
        assert abs(got[0] - math.tan(math.pi / 8)) < 1e-14 and got[1] == 0.0

    def test_pole_value(self):
        assert is_infinity(plane_map((0.0, HALF_PI)))

    def test_diagonal_stays_diagonal_and_bounded(self):
        rng = np.random.default_rng(2)
        lam = 2.0
        for x in rng.uniform(-30, 30, 500):
            for s in (1.0, -1.0):
                img = plane_map((x, s * x), lam)
                assert not is_infinity(img)
                assert abs(abs(img[0]) - abs(img[1])) < 1e-10
                assert abs(img[0]) <= lam / SQRT2 + 1e-12


class TestJacobian:
    def test_closed_form_eigenvalues_at_sample(self):
        # sector closed form is the oracle for the finite differences
        s = jacobian_plane_map((0.5, 0.2), 1.0)
        r = math.hypot(0.5, 0.2)
        want = sorted([math.tan(0.5) / r, 0.5 * (1 + math.tan(0.5) ** 2) / r])
        assert s.eigenvalues is not None
        np.testing.assert_allclose(sorted(s.eigenvalues), want, rtol=1e-6)
        np.testing.assert_allclose(want, [1.0145, 1.2056], rtol=2e-4)

    def test_fd_matches_closed_form_across_sector(self):
        rng = np.random.default_rng(3)
        used = 0
        while used < 300:
            p = rng.uniform(-6, 6, 2)
            closed = beam_sector_eigenvalues(p, 1.0)
            if closed is None or distance_to_nonsmooth(p) < 1e-3:
                continue
            used += 1
            s = jacobian_plane_map(p, 1.0)
            from qrtan.plane import fold_orientation
            j = s.matrix @ fold_orientation(p)
            tr, det = j[0, 0] + j[1, 1], float(np.linalg.det(j))
            disc = tr * tr - 4 * det
            assert disc >= 0
            got = sorted([(tr - math.sqrt(disc)) / 2, (tr + math.sqrt(disc)) / 2])
            np.testing.assert_allclose(got, sorted(closed), rtol=1e-4)

    def test_eigenvalue_floor(self):
        # |eigenvalues| >= lam/sqrt(2) wherever the derivative exists
        rng = np.random.default_rng(5)
        lam = 1.0
        used = 0
        floor = math.inf
        while used < 2000:
            p = rng.uniform(-6, 6, 2)
            if distance_to_nonsmooth(p) < 1e-3:
                continue
            used += 1
            s = jacobian_plane_map(p, lam)
            if s.eigenvalues is not None:
                floor = min(floor, min(abs(e) for e in s.eigenvalues))
        assert floor >= lam / SQRT2 - 0.01

    def test_singular_values_ordered(self):
        s = jacobian_plane_map((0.4, 0.1), 2.0)
        assert 0 <= s.min_singular_value <= s.max_singular_value

    def test_rejects_nonsmooth_neighborhood(self):
        with pytest.raises(ValueError):
            jacobian_plane_map((0.3, 0.3), 1.0)  # on a tile diagonal


class TestInverseBranch:
    def test_infinity_maps_to_pole_exactly(self):
        for idx in [(0, 0), (2, -1), (-3, 4)]:
            got = inverse_branch(idx, INFINITY, 1.0)
            assert np.array_equal(got, pole_location(idx))

    @pytest.mark.parametrize("lam", [1.0, 2.0])
    def test_roundtrip_random_targets(self, lam):
        rng = np.random.default_rng(7)
        worst = 0.0
        for _ in range(300):
            q = (int(rng.integers(-2, 3)), int(rng.integers(-2, 3)))
            w = rng.uniform(-15, 15, 2)
            if diagonal_segment_distance(w, lam) < 1e-6:
                continue
            x = inverse_branch(q, w, lam)
            c = pole_location(q)
            assert abs(x[0] - c[0]) + abs(x[1] - c[1]) <= HALF_PI + 1e-9
            worst = max(worst, plane_chordal(plane_map(x, lam), w))
        assert worst < 1e-9

    def test_identity_on_diamond(self):
        rng = np.random.default_rng(11)
        lam = 1.0
        q = PoleIndex(1, 1)
        worst = 0.0
        for p in diamond_samples(rng, q, 500):
            w = plane_map(p, lam)
            if is_infinity(w):
                continue
            back = inverse_branch(q, w, lam)
            worst = max(worst, float(np.linalg.norm(back - p)))
        assert worst < 1e-9

    def test_distinct_branches_distinct_diamonds(self):
        lam = 1.0
        w = np.array([5.3, 2.1])
        a = inverse_branch((0, 0), w, lam)
        b = inverse_branch((1, 2), w, lam)
        assert containing_diamond(a) == PoleIndex(0, 0)
        assert containing_diamond(b) == PoleIndex(1, 2)

    def test_far_diamond_lands_near_pole(self):
        # images of a far diamond concentrate beside the target pole
        lam = 1.0
        cal = calibrate_expansion(lam)
        rng = np.random.default_rng(13)
        q = PoleIndex(0, 0)
        far = PoleIndex(0, 9)   # norm ~ 15, beyond the branch radius
        assert np.linalg.norm(pole_location(far)) > cal.branch_radius
        c = pole_location(q)
        for w in diamond_samples(rng, far, 200):
            x = inverse_branch(q, w, lam)
            assert np.linalg.norm(x - c) < cal.eps

    def test_rejects_removed_segment(self):
        with pytest.raises(BranchDomainError):
            inverse_branch((0, 0), np.array([0.3, 0.3]), 1.0)


class TestPreimages:
    def test_pole_lattice_from_infinity(self):
        got = preimages_tangent3(INFINITY, 1.0, (-4, 4, -4, 4))
        locs = sorted((round(p[0], 6), round(p[1], 6)) for p in got)
        want = []
        for m in range(-4, 5):
            for n in range(-4, 5):
                c = pole_location((m, n))
                if -4 <= c[0] <= 4 and -4 <= c[1] <= 4:
                    want.append((round(c[0], 6), round(c[1], 6)))
        assert locs == sorted(want)
        assert all(p[2] == 0 for p in got)

    def test_omitted_values_have_no_preimage(self):
        lam = 1.5
        assert preimages_tangent3([0, 0, lam], lam, (-10, 10, -10, 10)) == []
        assert preimages_tangent3([0, 0, -lam], lam, (-10, 10, -10, 10)) == []

    def test_generic_target_verified(self):
        from qrtan.core import tangent3, chordal
        lam = 2.0
        target = np.array([3.0, -2.0, 1.0])
        got = preimages_tangent3(target, lam, (-7, 7, -7, 7))
        assert got
        for p in got:
            assert chordal(tangent3(p, lam), target) < 1e-9


class TestContractionExpansion:
    @pytest.mark.parametrize("lam,bound", [(2.0, 0.7171), (1.0, 1.4243)])
    def test_branch_contraction_bound(self, lam, bound):
        rng = np.random.default_rng(17)
        p = PoleIndex(0, 3)
        pts = diamond_samples(rng, p, 400)
        pairs = list(zip(pts[::2], pts[1::2]))
        ratio = branch_contraction_ratio((0, 0), p, pairs, lam)
        assert ratio <= bound

    def test_degenerate_pair_skipped(self):
        w = pole_location((0, 3)) + np.array([0.2, 0.1])
        ratio = branch_contraction_ratio((0, 0), (0, 3), [(w, w)], 1.0)
        assert ratio == 0.0

    @pytest.mark.parametrize("lam", [0.5, 1.0, 2.0])
    def test_pole_expansion(self, lam):
        cal = calibrate_expansion(lam)
        rng = np.random.default_rng(19)
        c = pole_location((0, 0))
        pairs = []
        while len(pairs) < 400:
            a = c + cal.eps * rng.uniform(-1, 1, 2)
            b = c + cal.eps * rng.uniform(-1, 1, 2)
            if np.linalg.norm(a - c) < cal.eps and np.linalg.norm(b - c) < cal.eps:
                pairs.append((a, b))
        assert pole_expansion_ratio((0, 0), pairs, lam) >= 2.0 - 0.01

    def test_pairs_straddling_pole_expand(self):
        lam = 1.0
        c = pole_location((0, 0))
        cal = calibrate_expansion(lam)
        d = 0.5 * cal.eps
        pairs = [(c + np.array([d, 0]), c - np.array([d, 0])),
                 (c + np.array([0, d]), c - np.array([0, d]))]
        assert pole_expansion_ratio((0, 0), pairs, lam) >= 2.0

    def test_iterated_pullback_diameter_shrinks(self):
        # composing branches n times shrinks a diamond by (sqrt2/lam)^n * pi
        lam = 2.0
        rng = np.random.default_rng(23)
        chain = [PoleIndex(0, 0), PoleIndex(1, 1), PoleIndex(-1, 0),
                 PoleIndex(0, 1), PoleIndex(1, -2), PoleIndex(0, 0),
                 PoleIndex(1, 1), PoleIndex(-1, 0), PoleIndex(0, 1),
                 PoleIndex(1, -2)]
        src = PoleIndex(0, 3)
        pts = diamond_samples(rng, src, 40)
        for n in range(1, 11):
            imgs = []
            for w in pts:
                x = np.array(w)
                for q in reversed(chain[:n]):
                    x = inverse_branch(q, x, lam)
                imgs.append(x)
            imgs = np.array(imgs)
            diam = max(np.linalg.norm(a - b) for a in imgs for b in imgs)
            assert diam <= (SQRT2 / lam) ** n * math.pi


class TestCalibration:
    @pytest.mark.parametrize("lam", [0.5, 1.0, 2.0])
    def test_certificate_shape(self, lam):
        cal = calibrate_expansion(lam)
        assert 0 < cal.eps < math.pi / 4
        assert cal.delta > 0
        assert cal.r1 > lam / SQRT2
        assert cal.branch_radius > cal.far_field_bound

    def test_calibration_cached_and_deterministic(self):
        a = calibrate_expansion(1.0)
        b = calibrate_expansion(1.0)
        assert a is b  # write-once cache per parameter
        # the eps trend across lam is recorded, not asserted: it depends on
        # how fast the far-field radius grows with lam in this procedure
        record = {lam: calibrate_expansion(lam).eps for lam in (0.5, 1.0, 2.0)}
        assert all(0 < e < math.pi / 4 for e in record.values())

    def test_delta_ball_derivative(self):
        lam = 1.0
        cal = calibrate_expansion(lam)
        rng = np.random.default_rng(29)
        c = pole_location((0, 0))
        checked = 0
        floor = math.inf
        while checked < 500:
            d = rng.uniform(-cal.delta, cal.delta, 2)
            if np.linalg.norm(d) >= cal.delta:
                continue
            p = c + d
            if distance_to_nonsmooth(p) < 1e-4:
                continue
            checked += 1
            s = jacobian_plane_map(p, lam)
            floor = min(floor, s.min_singular_value)
        assert floor >= 2.0 - 0.02

    def test_required_radius_regimes(self):
        # below sqrt2 the branch radius governs; above it only the domain one
        assert required_tail_radius(1.0) == calibrate_expansion(1.0).branch_radius
        assert required_tail_radius(2.0) == calibrate_expansion(2.0).domain_radius
        assert required_tail_radius(2.0) < required_tail_radius(1.0)
