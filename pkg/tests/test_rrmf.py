"""Admissible-generator analysis and the rational rotation-minimizing frame."""

import math

import numpy as np
import pytest

import conftest as data
from rmfspline import oracle
from rmfspline.errors import (
    DegenerateInputError,
    FrameConstructionError,
    ValidationError,
)
from rmfspline.ph import (
    PreImage,
    curve_from_preimage,
    hodograph_from_preimage,
    reparam_map,
    spherical_control_points,
    tangent_indicatrix,
)
from rmfspline.quat import Quaternion, angle_between, bisector, boxop, star, unit
from rmfspline.rrmf import (
    check_admissible_configuration,
    compute_rational_frame,
    construct_from_spherical,
    ellipse_phase,
    frame_from_coefficients,
    han08_residual,
    hm_at,
    hm_ellipse,
    inner_lengths,
    is_class_I,
    shift_angle,
    solve_frame_polynomials,
    theta1_for_s1,
)

I = np.array([1.0, 0.0, 0.0])


def worked_spherical():
    s0 = unit(np.array(data.EX_S0))
    s1 = unit(np.array(data.EX_S1))
    s2 = unit(np.array(data.EX_S2))
    s4 = unit(np.array(data.EX_S4))
    return s0, s1, s2, s4


def exact_worked_preimage() -> PreImage:
    """Exact reconstruction from the quoted spherical data (machine class-I)."""
    s0, s1, s2, s4 = worked_spherical()
    th1 = theta1_for_s1(s0, s2, s4, 1.0, 1.0, s1, admissibility_tol=1e-3)
    return construct_from_spherical(s0, s2, s4, 1.0, 1.0, th1, admissibility_tol=1e-3)


class TestClassI:
    def test_worked_preimage_at_quoted_precision(self, worked_preimage):
        check = is_class_I(worked_preimage, rel_tol=1e-3)
        assert check.ok
        assert check.rel_residual <= 1e-3

    def test_exact_reconstruction(self):
        check = is_class_I(exact_worked_preimage())
        assert check.ok and check.rel_residual <= 1e-12

    def test_constant_preimage(self):
        one = Quaternion(1.0, np.zeros(3))
        assert is_class_I(PreImage(one, one, one, I)).ok

    def test_perturbation_detected(self, worked_preimage):
        bumped = PreImage(
            worked_preimage.a0,
            worked_preimage.a1 + Quaternion(0.0, [1e-2, 0.0, 0.0]),
            worked_preimage.a2,
            worked_preimage.axis,
        )
        assert not is_class_I(bumped).ok


class TestEllipse:
    def test_unit_right_angle_axes(self):
        e = hm_ellipse(I, np.array([0.0, 1.0, 0.0]))
        assert np.linalg.norm(e.axis_major) == pytest.approx(1.0, abs=1e-14)
        assert np.linalg.norm(e.axis_minor) == pytest.approx(math.sin(math.pi / 4), abs=1e-14)

    def test_phase_zero_is_bisector(self):
        rng = np.random.RandomState(21)
        for _ in range(20):
            hb = rng.randn(3) * rng.uniform(0.5, 2.0)
            he = rng.randn(3) * rng.uniform(0.5, 2.0)
            if np.linalg.norm(np.cross(hb, he)) < 1e-3:
                continue
            e = hm_ellipse(hb, he)
            scale = math.sqrt(np.linalg.norm(hb) * np.linalg.norm(he))
            assert np.allclose(hm_at(e, 0.0), scale * bisector(hb, he), atol=1e-12)

    def test_axes_orthogonal_and_in_bisecting_plane(self):
        rng = np.random.RandomState(22)
        for _ in range(20):
            hb = rng.randn(3)
            he = rng.randn(3)
            if np.linalg.norm(np.cross(hb, he)) < 1e-3:
                continue
            e = hm_ellipse(hb, he)
            prod = np.linalg.norm(e.axis_major) * np.linalg.norm(e.axis_minor)
            assert abs(float(e.axis_major @ e.axis_minor)) <= 1e-12 * prod
            # the plane bisects the normalized directions
            d = unit(hb) - unit(he)
            assert abs(float(e.axis_major @ d)) <= 1e-12 * np.linalg.norm(e.axis_major)
            assert abs(float(e.axis_minor @ d)) <= 1e-12 * np.linalg.norm(e.axis_minor)

    def test_points_equidistant_after_normalization(self):
        rng = np.random.RandomState(23)
        hb = np.array([1.2, -0.3, 0.4])
        he = np.array([-0.5, 0.9, 0.8])
        e = hm_ellipse(hb, he)
        for phi in rng.uniform(0, 2 * math.pi, 25):
            m = unit(hm_at(e, phi))
            assert float(m @ unit(hb)) == pytest.approx(float(m @ unit(he)), abs=1e-12)

    def test_parallel_rejected(self):
        with pytest.raises(DegenerateInputError):
            hm_ellipse(I, 2.0 * I)

    def test_worked_middle_length(self):
        s0, _, s2, s4 = worked_spherical()
        e = hm_ellipse(s0, s4)
        phi2 = ellipse_phase(e, s2)
        gamma = angle_between(s0, s4)
        expected = math.sqrt(math.cos(phi2) ** 2
                             + math.sin(0.5 * gamma) ** 2 * math.sin(phi2) ** 2)
        assert expected == pytest.approx(data.EX_LEN_H2, abs=data.QUOTED_TOL)
        assert np.linalg.norm(hm_at(e, phi2)) == pytest.approx(expected, abs=1e-12)


class TestShiftAngle:
    def test_zero_at_phase_zero(self):
        for gamma in np.linspace(0.1 * math.pi, 0.9 * math.pi, 9):
            assert shift_angle(gamma, 0.0) == 0.0

    def test_zero_at_phase_pi(self):
        # the sine factor kills the numerator; the cosine term stays positive
        for gamma in np.linspace(0.1 * math.pi, 0.9 * math.pi, 9):
            x = 4 * math.sin(math.pi) * math.cos(gamma / 2) * math.sin(gamma / 2) ** 2
            y = math.cos(2 * math.pi) * math.sin(gamma) ** 2 + 4 * math.sin(gamma / 2) ** 4
            assert x == pytest.approx(0.0, abs=1e-15) and y > 0.0
            assert shift_angle(gamma, math.pi) == pytest.approx(0.0, abs=1e-12)

    def test_against_numeric_ellipse_phase(self):
        # Build the configuration explicitly and fit the skewed-vs-canonical
        # phase offset of the last inner ellipse numerically.
        rng = np.random.RandomState(24)
        for _ in range(12):
            gamma = rng.uniform(0.15 * math.pi, 0.85 * math.pi)
            phi2 = rng.uniform(0.05, 2.0 * math.pi - 0.05)
            s0 = I
            d = unit(np.cross(rng.randn(3), s0))
            s4 = math.cos(gamma) * s0 + math.sin(gamma) * d
            a0 = Quaternion.pure(s0)
            a2_hat = math.sqrt(1.0) * Quaternion.pure(bisector(s0, s4))
            a2 = a2_hat * Quaternion.versor(s0, phi2)
            h2 = star(a0, a2, s0)
            a1_hat = Quaternion.pure(math.sqrt(np.linalg.norm(h2))
                                     * bisector(s0, h2))
            h4 = hodograph_from_preimage(PreImage(a0, a1_hat, a2, s0))[4]
            e3 = hm_ellipse(h4, h2)
            shift = shift_angle(gamma, phi2)
            for theta1 in rng.uniform(0, 2 * math.pi, 4):
                a1 = a1_hat * Quaternion.versor(s0, theta1)
                h3 = star(a1, a2, s0)
                predicted = hm_at(e3, theta1 - shift)
                assert np.allclose(h3, predicted, atol=1e-10)

    def test_specific_value_check(self):
        # gamma = pi/2, phi2 = pi/3 cross-checked by the same numeric fit
        gamma, phi2 = math.pi / 2, math.pi / 3
        s0 = I
        s4 = np.array([math.cos(gamma), math.sin(gamma), 0.0])
        a0 = Quaternion.pure(s0)
        a2 = Quaternion.pure(bisector(s0, s4)) * Quaternion.versor(s0, phi2)
        h2 = star(a0, a2, s0)
        a1_hat = Quaternion.pure(math.sqrt(np.linalg.norm(h2)) * bisector(s0, h2))
        h4 = hodograph_from_preimage(PreImage(a0, a1_hat, a2, s0))[4]
        e3 = hm_ellipse(h4, h2)
        theta1 = 1.1
        h3 = star(a1_hat * Quaternion.versor(s0, theta1), a2, s0)
        fitted = ellipse_phase(e3, h3)
        assert (theta1 - fitted) % (2 * math.pi) == pytest.approx(
            shift_angle(gamma, phi2) % (2 * math.pi), abs=1e-10)


class TestInnerLengths:
    def test_symmetric_phase_zero(self):
        l1, l2, l3 = inner_lengths(1.0, 1.0, math.pi / 3, 0.0, 0.0)
        assert l2 == pytest.approx(1.0, abs=1e-14)

    def test_worked_lengths(self):
        s0, s1, s2, s4 = worked_spherical()
        gamma = angle_between(s0, s4)
        phi2 = ellipse_phase(hm_ellipse(s0, s4), s2)
        th1 = theta1_for_s1(s0, s2, s4, 1.0, 1.0, s1, admissibility_tol=1e-3)
        l1, l2, l3 = inner_lengths(1.0, 1.0, gamma, phi2, th1)
        assert l1 == pytest.approx(data.EX_LEN_H1, abs=data.QUOTED_TOL)
        assert l2 == pytest.approx(data.EX_LEN_H2, abs=data.QUOTED_TOL)
        assert l3 == pytest.approx(data.EX_LEN_H3, abs=data.QUOTED_TOL)

    def test_worked_scaled_lengths(self):
        s0, s1, s2, s4 = worked_spherical()
        gamma = angle_between(s0, s4)
        phi2 = ellipse_phase(hm_ellipse(s0, s4), s2)
        th1 = theta1_for_s1(s0, s2, s4, 1.0, 1.0, s1, admissibility_tol=1e-3)
        lengths = inner_lengths(1.0, 0.33, gamma, phi2, th1)
        assert np.allclose(lengths, data.EX_SCALED_LENGTHS, atol=data.QUOTED_TOL)

    def test_matches_constructed_hodograph(self):
        rng = np.random.RandomState(25)
        for _ in range(10):
            gamma = rng.uniform(0.2 * math.pi, 0.8 * math.pi)
            s0 = I
            d = unit(np.cross(rng.randn(3), s0))
            s4 = math.cos(gamma) * s0 + math.sin(gamma) * d
            phi2 = rng.uniform(0.1, 2 * math.pi - 0.1)
            e = hm_ellipse(s0, s4)
            s2 = unit(hm_at(e, phi2))
            theta1 = rng.uniform(0, 2 * math.pi)
            len0, len4 = rng.uniform(0.5, 2.0, 2)
            p = construct_from_spherical(s0, s2, s4, len0, len4, theta1)
            h = hodograph_from_preimage(p)
            predicted = inner_lengths(len0, len4, gamma, phi2, theta1)
            assert np.allclose(np.linalg.norm(h[1:4], axis=1), predicted, atol=1e-10)


class TestAdmissibility:
    def test_worked_configuration(self):
        s0, s1, s2, s4 = worked_spherical()
        q = curve_from_preimage(np.zeros(3), exact_worked_preimage())
        s = spherical_control_points(q)
        report = check_admissible_configuration(*s)
        assert report.ok(1e-10)
        report_quoted = check_admissible_configuration(s0, s1, s2, s[3], s4)
        assert report_quoted.ok(1e-3)

    def test_degenerate_point_configuration(self):
        report = check_admissible_configuration(I, I, I, I, I)
        assert report.ok(1e-15)

    def test_off_circle_detected(self):
        s0, s1, _, s4 = worked_spherical()
        bad_s2 = unit(np.array([0.4, 0.7, 0.3]))
        report = check_admissible_configuration(s0, s1, bad_s2, s1, s4)
        assert report.middle > 1e-3


class TestConstruction:
    def test_worked_reconstruction(self):
        s0, s1, s2, s4 = worked_spherical()
        th1 = theta1_for_s1(s0, s2, s4, 1.0, 1.0, s1, admissibility_tol=1e-3)
        p = construct_from_spherical(s0, s2, s4, 1.0, 1.0, th1, admissibility_tol=1e-3)
        assert np.allclose(p.a1.as_wxyz(), data.EX_A1, atol=data.QUOTED_TOL)
        assert np.allclose(p.a2.as_wxyz(), data.EX_A2, atol=data.QUOTED_TOL)

    def test_reproduces_prescribed_points(self):
        rng = np.random.RandomState(26)
        for _ in range(20):
            s0 = data.random_unit(rng)
            d = unit(np.cross(rng.randn(3), s0))
            gamma = rng.uniform(0.1 * math.pi, 0.9 * math.pi)
            s4 = math.cos(gamma) * s0 + math.sin(gamma) * d
            s2 = unit(hm_at(hm_ellipse(s0, s4), rng.uniform(0, 2 * math.pi)))
            len0, len4 = rng.uniform(0.3, 3.0, 2)
            p = construct_from_spherical(s0, s2, s4, len0, len4,
                                         rng.uniform(0, 2 * math.pi))
            q = curve_from_preimage(np.zeros(3), p)
            s = spherical_control_points(q)
            assert np.linalg.norm(s[0] - s0) <= 1e-10
            assert np.linalg.norm(s[2] - s2) <= 1e-10
            assert np.linalg.norm(s[4] - s4) <= 1e-10
            assert np.linalg.norm(q.h[0]) == pytest.approx(len0, rel=1e-12)
            assert np.linalg.norm(q.h[4]) == pytest.approx(len4, rel=1e-12)
            assert is_class_I(p).rel_residual <= 1e-12
            assert check_admissible_configuration(*s).ok(1e-10)

    def test_symmetric_pair_phase_zero(self):
        s0 = unit(np.array([1.0, 1.0, 0.0]))
        s4 = unit(np.array([1.0, -1.0, 0.0]))
        s2 = bisector(s0, s4)
        p = construct_from_spherical(s0, s2, s4, 2.0, 0.5, 0.0)
        h2 = hodograph_from_preimage(p)[2]
        assert np.allclose(unit(h2), s2, atol=1e-12)
        assert np.linalg.norm(h2) == pytest.approx(math.sqrt(2.0 * 0.5), abs=1e-12)

    def test_off_circle_rejected(self):
        s0, _, _, s4 = worked_spherical()
        with pytest.raises(ValidationError):
            construct_from_spherical(s0, unit(np.array([0.4, 0.7, 0.3])), s4, 1.0, 1.0, 0.0)

    def test_antipodal_outer_rejected(self):
        with pytest.raises(DegenerateInputError):
            construct_from_spherical(I, np.array([0.0, 1.0, 0.0]), -I, 1.0, 1.0, 0.0)

    def test_inner_bijection_winding(self):
        # Sweeping the inner phase must wind both inner spherical points once
        # around their circles, in matching directions.
        s0, _, s2, s4 = worked_spherical()
        thetas = np.linspace(0.0, 2.0 * math.pi, 721, endpoint=False)
        angles1, angles3 = [], []
        base = construct_from_spherical(s0, s2, s4, 1.0, 1.0, 0.0,
                                        admissibility_tol=1e-3)
        a1_hat = base.a1
        p1_axis = star(base.a0, a1_hat, base.axis)
        q1_axis = boxop(base.a0, a1_hat)
        p3_axis = star(base.a2, a1_hat, base.axis)
        q3_axis = boxop(base.a2, a1_hat)
        for th in thetas:
            a1 = a1_hat * Quaternion.versor(base.axis, th)
            h1 = star(base.a0, a1, base.axis)
            h3 = star(a1, base.a2, base.axis)
            angles1.append(math.atan2(float(h1 @ unit(q1_axis)), float(h1 @ unit(p1_axis))))
            angles3.append(math.atan2(float(h3 @ unit(q3_axis)), float(h3 @ unit(p3_axis))))

        def winding(angles):
            d = np.diff(np.concatenate([angles, angles[:1]]))
            d = (d + math.pi) % (2 * math.pi) - math.pi
            return int(round(float(np.sum(d)) / (2 * math.pi)))

        w1 = winding(np.array(angles1))
        w3 = winding(np.array(angles3))
        assert abs(w1) == 1 and w1 == w3


class TestRationalFrame:
    def test_worked_frame_against_transport(self):
        p = exact_worked_preimage()
        frame = compute_rational_frame(p)
        q = curve_from_preimage(np.zeros(3), p)
        trace = oracle.integrate_rmf(q, frame.frame_matrix(0.0), n_samples=1000)
        assert oracle.compare_frames(frame, trace) <= 1e-6

    def test_first_vector_is_tangent(self):
        p = exact_worked_preimage()
        frame = compute_rational_frame(p)
        ind = tangent_indicatrix(p)
        ts = np.linspace(0, 1, 57)
        f1 = frame.frame(ts)[0]
        assert np.max(np.linalg.norm(f1 - ind.evaluate(ts), axis=1)) <= 1e-12

    def test_orthonormal_right_handed(self):
        p = exact_worked_preimage()
        frame = compute_rational_frame(p)
        ts = np.linspace(0, 1, 201)
        f1, f2, f3 = frame.frame(ts)
        for a, b in [(f1, f2), (f2, f3), (f3, f1)]:
            assert np.max(np.abs(np.sum(a * b, axis=1))) <= 1e-10
        dets = np.sum(np.cross(f1, f2) * f3, axis=1)
        assert np.max(np.abs(dets - 1.0)) <= 1e-10

    def test_rotation_rate_identity(self):
        p = exact_worked_preimage()
        frame = compute_rational_frame(p)
        assert han08_residual(p, frame) <= 1e-8

    def test_gauge_matches_prescribed_normal(self):
        p = exact_worked_preimage()
        t0 = unit(hodograph_from_preimage(p)[0])
        v = unit(np.cross(np.array([0.0, 0.0, 1.0]), t0))
        w = np.cross(t0, v)
        frame = compute_rational_frame(p, initial_frame=np.array([t0, v, w]))
        f = frame.frame_matrix(0.0)
        assert angle_between(f[1], v) <= 1e-12
        assert angle_between(f[2], w) <= 1e-12

    def test_normal_must_be_orthogonal(self):
        p = exact_worked_preimage()
        t0 = unit(hodograph_from_preimage(p)[0])
        bad = unit(t0 + 0.1 * np.array([0.0, 0.0, 1.0]))
        with pytest.raises(ValidationError):
            compute_rational_frame(p, initial_frame=np.array([t0, bad, np.cross(t0, bad)]))

    def test_planar_non_admissible_rejected(self):
        # generic planar generator (components only along 1 and k) fails the
        # middle-coefficient identity and is rejected up front
        p = PreImage(
            Quaternion(1.0, [0.0, 0.0, 0.3]),
            Quaternion(0.8, [0.0, 0.0, -0.5]),
            Quaternion(1.2, [0.0, 0.0, 0.9]),
            I,
        )
        assert not is_class_I(p).ok
        with pytest.raises(FrameConstructionError):
            compute_rational_frame(p)

    def test_rotation_minimality_finite_difference(self):
        p = exact_worked_preimage()
        frame = compute_rational_frame(p)
        ts = np.linspace(0.05, 0.95, 37)
        assert float(np.max(oracle.tangential_angular_velocity(frame, ts))) <= 1e-4

    def test_solve_deterministic(self):
        p = exact_worked_preimage()
        a1, b1, r1 = solve_frame_polynomials(p)
        a2, b2, r2 = solve_frame_polynomials(p)
        assert np.array_equal(a1, a2) and np.array_equal(b1, b2) and r1 == r2

    def test_rebuild_from_coefficients_identical(self):
        p = exact_worked_preimage()
        frame = compute_rational_frame(p)
        rebuilt = frame_from_coefficients(p, frame.a, frame.b, frame.axes)
        ts = np.linspace(0, 1, 11)
        for m in range(3):
            assert np.array_equal(frame.frame(ts)[m], rebuilt.frame(ts)[m])


class TestScalingCovariance:
    def test_scaled_construction_matches_reparameterization(self):
        s0, s1, s2, s4 = worked_spherical()
        th1 = theta1_for_s1(s0, s2, s4, 1.0, 1.0, s1, admissibility_tol=1e-3)
        p = construct_from_spherical(s0, s2, s4, 1.0, 1.0, th1, admissibility_tol=1e-3)
        p_scaled = construct_from_spherical(s0, s2, s4, 1.0, 0.33, th1,
                                            admissibility_tol=1e-3)
        q = curve_from_preimage(np.zeros(3), p)
        qs = curve_from_preimage(np.zeros(3), p_scaled)
        assert np.allclose(spherical_control_points(q), spherical_control_points(qs),
                           atol=1e-10)
        lam = 0.33 ** 0.25
        ts = np.linspace(0, 1, 33)
        ind = tangent_indicatrix(p)
        ind_s = tangent_indicatrix(p_scaled)
        assert np.max(np.linalg.norm(
            ind_s.evaluate(ts) - ind.evaluate(reparam_map(lam, ts)), axis=1)) <= 1e-10
        assert np.allclose(p_scaled.a1.as_wxyz(), lam * p.a1.as_wxyz(), atol=1e-12)
        assert np.allclose(p_scaled.a2.as_wxyz(), lam * lam * p.a2.as_wxyz(), atol=1e-12)
