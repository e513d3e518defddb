"""Tests for the map evaluation layer: charts, folding, Mobius pieces and
the tangent map itself."""

import math

import numpy as np
import pytest

from qrtan.core import (
    INFINITY,
    chordal,
    fold_to_beam,
    hemisphere_to_square,
    invert_sphere,
    is_infinity,
    iterate,
    cayley,
    cayley_inverse,
    square_to_hemisphere,
    tangent3,
    tangent3_composed,
    tangent3_grid,
    zorich,
)

HALF_PI = math.pi / 2
QUARTER_PI = math.pi / 4


def bisect(f, lo, hi, n=200):
    """Sign-change bisection; the independent scalar root oracle."""
    flo = f(lo)
    assert flo * f(hi) < 0
    for _ in range(n):
        mid = 0.5 * (lo + hi)
        if flo * f(mid) <= 0:
            hi = mid
        else:
            lo = mid
            flo = f(lo)
    return 0.5 * (lo + hi)


class TestSquareToHemisphere:
    def test_origin_maps_to_north_pole(self):
        np.testing.assert_allclose(square_to_hemisphere(0, 0), [0, 0, 1])

    def test_edge_midpoint(self):
        np.testing.assert_allclose(square_to_hemisphere(HALF_PI, 0), [1, 0, 0],
                                   atol=1e-15)

    def test_corner_direction(self):
        got = square_to_hemisphere(QUARTER_PI, QUARTER_PI)
        np.testing.assert_allclose(got, [0.5, 0.5, math.sqrt(2) / 2], atol=1e-15)

    def test_unit_norm_and_upper(self):
        rng = np.random.default_rng(7)
        for _ in range(500):
            x, y = rng.uniform(-HALF_PI, HALF_PI, 2)
            u = square_to_hemisphere(x, y)
            assert abs(np.linalg.norm(u) - 1.0) < 1e-12
            assert u[2] >= -1e-15

    def test_domain_violation(self):
        with pytest.raises(ValueError):
            square_to_hemisphere(2.0, 0.0)


class TestHemisphereToSquare:
    def test_north_pole(self):
        assert hemisphere_to_square([0, 0, 1]) == (0.0, 0.0)

    def test_equator_point(self):
        x, y = hemisphere_to_square([1, 0, 0])
        assert abs(x - HALF_PI) < 1e-12 and y == 0.0

    def test_roundtrip_random_hemisphere(self):
        rng = np.random.default_rng(11)
        worst = 0.0
        for _ in range(1000):
            v = rng.normal(size=3)
            v[2] = abs(v[2])
            v /= np.linalg.norm(v)
            x, y = hemisphere_to_square(v)
            back = square_to_hemisphere(x, y)
            worst = max(worst, float(np.linalg.norm(back - v)))
        assert worst < 1e-9

    def test_rejects_non_unit(self):
        with pytest.raises(ValueError):
            hemisphere_to_square([0.5, 0, 0.5])

    def test_rejects_lower_hemisphere(self):
        with pytest.raises(ValueError):
            hemisphere_to_square([0.6, 0, -0.8])


class TestFolding:
    def test_interior_untouched(self):
        f = fold_to_beam(0.1, -0.2)
        assert (f.x, f.y, f.parity) == (0.1, -0.2, 0)

    def test_single_reflection(self):
        f = fold_to_beam(HALF_PI, 0.0)
        assert abs(f.x) < 1e-15 and f.y == 0.0 and f.parity == 1

    def test_double_reflection_cancels(self):
        f = fold_to_beam(HALF_PI, HALF_PI)
        assert abs(f.x) < 1e-15 and abs(f.y) < 1e-15 and f.parity == 0

    def test_folded_in_closed_square(self):
        rng = np.random.default_rng(3)
        for x, y in rng.uniform(-40, 40, size=(2000, 2)):
            f = fold_to_beam(x, y)
            assert abs(f.x) <= QUARTER_PI + 1e-12
            assert abs(f.y) <= QUARTER_PI + 1e-12

    def test_reflection_composition_recovers_input(self):
        # the fold differs from the input by the reflection group: unfolding
        # by mirror images must land back on the original point
        rng = np.random.default_rng(5)
        for x in rng.uniform(-20, 20, 200):
            f, = (fold_to_beam(x, 0.0),)
            # x is either f.x or a mirror image of it shifted by k*pi/2 tiles
            k = round((x - f.x) / HALF_PI)
            alt = round((x + f.x) / HALF_PI)
            assert (abs(f.x + k * HALF_PI - x) < 1e-9 and k % 2 == 0) or \
                   (abs(-f.x + alt * HALF_PI - x) < 1e-9 and alt % 2 == 1)


class TestZorich:
    def test_base_value(self):
        np.testing.assert_allclose(zorich([0, 0, 0]), [0, 0, 1])

    def test_exponential_scaling(self):
        np.testing.assert_allclose(zorich([0, 0, math.log(2)]), [0, 0, 2])

    def test_one_reflection_flips_hemisphere(self):
        np.testing.assert_allclose(zorich([math.pi, 0, 0]), [0, 0, -1], atol=1e-15)

    def test_norm_is_exp_z(self):
        rng = np.random.default_rng(13)
        for v in rng.uniform(-5, 5, size=(500, 3)):
            n = np.linalg.norm(zorich(v))
            assert abs(n - math.exp(v[2])) <= 1e-12 * math.exp(v[2])

    def test_never_zero(self):
        rng = np.random.default_rng(17)
        for v in rng.uniform(-3, 3, size=(200, 3)):
            assert np.linalg.norm(zorich(v)) > 0

    def test_overflow_raises(self):
        with pytest.raises(OverflowError):
            zorich([0, 0, 1000.0])


class TestCayley:
    def test_origin(self):
        np.testing.assert_allclose(cayley([0, 0, 0]), [0, 0, -1])

    def test_pole_of_the_map(self):
        assert is_infinity(cayley([0, 0, -1]))

    def test_infinity(self):
        np.testing.assert_allclose(cayley(INFINITY), [0, 0, 1])

    def test_unit_x_fixed(self):
        np.testing.assert_allclose(cayley([1, 0, 0]), [1, 0, 0], atol=1e-15)

    def test_plane_to_unit_sphere(self):
        rng = np.random.default_rng(19)
        for x, y in rng.uniform(-50, 50, size=(500, 2)):
            u = cayley([x, y, 0.0])
            assert abs(np.linalg.norm(u) - 1.0) < 1e-12

    def test_inverse_examples(self):
        assert is_infinity(cayley_inverse([0, 0, 1]))
        np.testing.assert_allclose(cayley_inverse([0, 0, -1]), [0, 0, 0], atol=1e-15)
        np.testing.assert_allclose(cayley_inverse(INFINITY), [0, 0, -1])

    def test_roundtrip_chordal(self):
        rng = np.random.default_rng(23)
        worst = 0.0
        for p in rng.uniform(-10, 10, size=(1000, 3)):
            q = cayley(cayley_inverse(p))
            worst = max(worst, chordal(p, q))
            q2 = cayley_inverse(cayley(p))
            worst = max(worst, chordal(p, q2))
        assert worst < 1e-10


class TestInvertSphere:
    def test_basic(self):
        np.testing.assert_allclose(invert_sphere([2, 0, 0]), [0.5, 0, 0])
        np.testing.assert_allclose(invert_sphere([0, 1, 0]), [0, 1, 0])
        np.testing.assert_allclose(invert_sphere([1, 1, 0]), [0.5, 0.5, 0])

    def test_involution_and_norm_product(self):
        rng = np.random.default_rng(29)
        for v in rng.uniform(-5, 5, size=(300, 3)):
            if np.linalg.norm(v) < 1e-6:
                continue
            w = invert_sphere(v)
            assert abs(np.linalg.norm(w) * np.linalg.norm(v) - 1) < 1e-12
            np.testing.assert_allclose(invert_sphere(w), v, rtol=1e-12, atol=1e-15)

    def test_zero_rejected(self):
        with pytest.raises(ValueError):
            invert_sphere([0, 0, 0])


class TestTangent3:
    def test_axis_is_tanh(self):
        got = tangent3([0, 0, 1.0])
        np.testing.assert_allclose(got, [0, 0, math.tanh(1.0)], atol=1e-15)

    def test_pole(self):
        assert is_infinity(tangent3([0.0, HALF_PI, 0.0]))

    def test_zero(self):
        np.testing.assert_allclose(tangent3([HALF_PI, HALF_PI, 0.0]), [0, 0, 0],
                                   atol=1e-15)

    def test_eighth_pi_matches_real_tangent(self):
        got = tangent3([math.pi / 8, 0, 0])
        assert abs(got[0] - (math.sqrt(2) - 1)) < 1e-14
        assert got[1] == 0.0 and got[2] == 0.0

    def test_scaling_parameter(self):
        v = [0.3, 0.1, 0.4]
        np.testing.assert_allclose(tangent3(v, 2.5), 2.5 * tangent3(v, 1.0),
                                   rtol=1e-15)

    def test_large_z_does_not_overflow(self):
        for z in (400.0, 1000.0, -1000.0):
            got = tangent3([0.2, 0.1, z])
            np.testing.assert_allclose(got, [0, 0, math.copysign(1.0, z)],
                                       atol=1e-12)

    def test_periodicity(self):
        rng = np.random.default_rng(31)
        worst = 0.0
        for v in rng.uniform(-10, 10, size=(10_000, 3)):
            base = tangent3(v)
            for shift in ([math.pi, 0, 0], [0, math.pi, 0]):
                worst = max(worst, chordal(base, tangent3(v + np.array(shift))))
        assert worst < 1e-10

    def test_reflection_equivariance(self):
        rng = np.random.default_rng(37)
        worst = 0.0
        for v in rng.uniform(-10, 10, size=(3000, 3)):
            img = tangent3(v)
            for axis in range(3):
                r = np.ones(3)
                r[axis] = -1.0
                mirrored = tangent3(r * v)
                if is_infinity(img):
                    assert is_infinity(mirrored)
                else:
                    worst = max(worst, chordal(mirrored, r * img))
        assert worst < 1e-10

    def test_embedded_complex_tangent(self):
        import cmath
        rng = np.random.default_rng(41)
        worst = 0.0
        for a, b in rng.uniform(-10, 10, size=(3000, 2)):
            w = cmath.tan(complex(a, b))
            worst = max(worst, chordal(tangent3([a, 0, b]),
                                       np.array([w.real, 0.0, w.imag])))
            worst = max(worst, chordal(tangent3([0, a, b]),
                                       np.array([0.0, w.real, w.imag])))
        assert worst < 1e-10

    def test_omitted_values_and_limits(self):
        rng = np.random.default_rng(43)
        for v in rng.uniform(-10, 10, size=(2000, 3)):
            img = tangent3(v)
            if is_infinity(img):
                continue
            assert np.linalg.norm(img - [0, 0, 1]) > 0
            assert np.linalg.norm(img - [0, 0, -1]) > 0
        for x, y in rng.uniform(-10, 10, size=(200, 2)):
            assert np.linalg.norm(tangent3([x, y, 20.0]) - [0, 0, 1]) < 1e-8
            assert np.linalg.norm(tangent3([x, y, -20.0]) - [0, 0, -1]) < 1e-8

    def test_half_space_sign_preserved(self):
        rng = np.random.default_rng(47)
        for v in rng.uniform(-10, 10, size=(3000, 3)):
            if v[2] == 0:
                continue
            img = tangent3(v)
            assert math.copysign(1, img[2]) == math.copysign(1, v[2])

    def test_agrees_with_composed_form(self):
        rng = np.random.default_rng(53)
        worst = 0.0
        used = 0
        while used < 10_000:
            v = rng.uniform(-5, 5, 3)
            fx = fold_to_beam(v[0], v[1])
            if min(QUARTER_PI - abs(fx.x), QUARTER_PI - abs(fx.y)) < 1e-6:
                continue
            used += 1
            worst = max(worst, chordal(tangent3(v), tangent3_composed(v)))
        assert worst < 1e-9

    def test_axis_action_scaled(self):
        rng = np.random.default_rng(59)
        for lam in (0.5, 1.0, 2.0):
            for z in rng.uniform(-20, 20, 500):
                got = tangent3([0, 0, z], lam)
                assert np.linalg.norm(got - [0, 0, lam * math.tanh(z)]) < 1e-12


class TestIterate:
    def test_fixed_origin(self):
        orbit = iterate([0, 0, 0], 1.0, 5)
        assert len(orbit) == 5
        for p in orbit:
            np.testing.assert_allclose(p, [0, 0, 0], atol=1e-15)

    def test_truncates_at_pole(self):
        orbit = iterate([0, HALF_PI, 0], 1.0, 3)
        assert len(orbit) == 1 and is_infinity(orbit[0])

    def test_converges_to_axis_fixed_point(self):
        # oracle: bisection on 2*tanh(t) = t over [1, 3]
        xi = bisect(lambda t: 2 * math.tanh(t) - t, 1.0, 3.0)
        orbit = iterate([0, 0, 0.5], 2.0, 50)
        assert np.linalg.norm(orbit[-1] - [0, 0, xi]) < 1e-9

    def test_rejects_nonpositive_count(self):
        with pytest.raises(ValueError):
            iterate([0, 0, 0], 1.0, 0)


class TestGridEvaluation:
    def test_matches_scalar(self):
        rng = np.random.default_rng(61)
        pts = rng.uniform(-8, 8, size=(500, 3))
        tx, ty, tz, finite = tangent3_grid(pts[:, 0], pts[:, 1], pts[:, 2], 1.3)
        for i, v in enumerate(pts):
            got = tangent3(v, 1.3)
            assert finite[i] == (not is_infinity(got))
            if finite[i]:
                assert chordal(got, np.array([tx[i], ty[i], tz[i]])) < 1e-12

    def test_pole_flagged(self):
        tx, ty, tz, finite = tangent3_grid(np.array([0.0]), np.array([HALF_PI]),
                                           np.array([0.0]))
        assert not finite[0]

    def test_plane_stays_plane(self):
        rng = np.random.default_rng(67)
        x = rng.uniform(-10, 10, 1000)
        y = rng.uniform(-10, 10, 1000)
        _, _, tz, finite = tangent3_grid(x, y, np.zeros_like(x))
        assert np.all(tz[finite] == 0.0)


class TestChordal:
    def test_infinity_cases(self):
        assert chordal(INFINITY, INFINITY) == 0.0
        assert abs(chordal([0, 0, 0], INFINITY) - 2.0) < 1e-15
        assert chordal([1e12, 0, 0], INFINITY) < 1e-11

    def test_bounded_by_two(self):
        rng = np.random.default_rng(71)
        for _ in range(200):
            p, q = rng.uniform(-100, 100, size=(2, 3))
            assert chordal(p, q) <= 2.0 + 1e-12
