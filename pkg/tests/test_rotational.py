import math

import numpy as np
import pytest
from scipy.interpolate import CubicSpline

from core.errors import AxisSingularityError, ClassViolationError, DomainError, NoSolutionError
from geometry.prescribed import constant, parse_prescription
from geometry.rotational import (
    build_sphere,
    classify_equilibrium,
    cmc_sphere_diameter,
    cylinder_profile,
    cylinder_radius,
    first_integral,
    first_integral_drift,
    integrate_profile,
    lower_cap,
    phase_plane,
    profile_rhs,
)
from schemas.surfaces import Closure, ProfileState

LN3 = math.log(3.0)


def test_profile_rhs_values(H_zero, H_one):
    assert profile_rhs(H_zero, -1, ProfileState(x=1.0, sigma=0.0)) == pytest.approx((1.0, 0.0, 0.0))
    at_cylinder = profile_rhs(H_one, -1, ProfileState(x=math.atanh(0.5), sigma=math.pi / 2))
    assert at_cylinder == pytest.approx((0.0, 1.0, 0.0), abs=1e-12)
    assert profile_rhs(H_one, -1, ProfileState(x=1.0, sigma=0.0)) == pytest.approx((1.0, 0.0, 2.0))


def test_profile_rhs_axis_and_chart(H_one):
    with pytest.raises(AxisSingularityError):
        profile_rhs(H_one, -1, ProfileState(x=0.0))
    with pytest.raises(AxisSingularityError):
        profile_rhs(H_one, 1, ProfileState(x=math.pi))


def test_first_integral_at_poles():
    assert first_integral(-1, 1.0, ProfileState(x=0.0)) == pytest.approx(-2.0)
    assert first_integral(1, 1.0, ProfileState(x=0.0)) == pytest.approx(2.0)


def test_hyperbolic_unit_sphere(H_one):
    curve = build_sphere(H_one, -1, 1e-3)
    assert curve.closure == Closure.closed_sphere
    assert curve.x_max == pytest.approx(LN3, abs=1e-4)
    assert curve.x[0] == 0.0 and curve.x[-1] == 0.0
    assert curve.sigma[0] == 0.0 and curve.sigma[-1] == pytest.approx(math.pi)
    assert curve.closure_defect <= 1e-3
    cap = lower_cap(H_one, -1, 1e-3)
    assert curve.height == pytest.approx(2.0 * cap.height, abs=1e-6)
    assert cap.x_max == pytest.approx(LN3, abs=1e-4)


def test_sphere_normal_takes_both_signs(H_one):
    curve = build_sphere(H_one, -1, 1e-3)
    assert curve.nu.min() < 0.0 < curve.nu.max()
    assert np.all(np.abs(curve.nu) <= 1.0)
    equator = int(np.argmax(curve.x))
    assert abs(curve.nu[equator]) < 1e-2


def test_spherical_base_sphere_is_small(H_one):
    curve = build_sphere(H_one, 1, 1e-3)
    assert curve.closure == Closure.closed_sphere
    assert curve.x_max < math.pi / 2
    assert curve.x_max == pytest.approx(2.0 * math.atan(0.5), abs=1e-4)


def test_even_sphere_is_symmetric():
    H = parse_prescription({"type": "even-poly", "coeffs": [1.0, 0.3]})
    curve = build_sphere(H, -1, 1e-3)
    cap = lower_cap(H, -1, 1e-3)
    assert curve.height == pytest.approx(2.0 * cap.height, abs=1e-6)


def test_sphere_requires_even_class(soliton):
    with pytest.raises(ClassViolationError):
        build_sphere(constant(0.5), -1, 1e-3)
    with pytest.raises(ClassViolationError):
        build_sphere(soliton, -1, 1e-3)


def test_first_integral_drift_is_fourth_order(H_one):
    coarse = first_integral_drift(build_sphere(H_one, -1, 4e-3), 1.0)
    fine = first_integral_drift(build_sphere(H_one, -1, 2e-3), 1.0)
    assert coarse > 0.0
    assert coarse / fine >= 12.0


def test_cylinder_radius():
    assert cylinder_radius(constant(1.0), -1) == pytest.approx(math.atanh(0.5), abs=1e-10)
    assert cylinder_radius(constant(1.0), 1) == pytest.approx(math.atan(0.5), abs=1e-10)
    H = parse_prescription({"type": "even-poly", "coeffs": [0.75, 2.0]})
    assert 1.0 / math.tanh(cylinder_radius(H, -1)) == pytest.approx(1.5, abs=1e-10)


def test_cylinder_no_solution_reasons():
    with pytest.raises(NoSolutionError) as hyperbolic:
        cylinder_radius(constant(0.5), -1)
    assert hyperbolic.value.reason == "no-solution: coth > 1"
    with pytest.raises(NoSolutionError) as spherical:
        cylinder_radius(constant(0.0), 1)
    assert spherical.value.reason == "no-solution: cot needs 2H(0) > 0"


def test_cylinder_profile_is_an_equilibrium(H_one):
    curve = cylinder_profile(H_one, -1, length=1.0, step=1e-2)
    assert curve.closure == Closure.equilibrium_cylinder
    assert np.allclose(curve.x, math.atanh(0.5), atol=1e-9)
    assert curve.z[-1] == pytest.approx(1.0)


def test_geodesic_arc_for_zero_prescription(H_zero):
    curve = integrate_profile(H_zero, -1, ProfileState(x=1.0, sigma=0.0), 1.0, 1e-2)
    assert curve.closure == Closure.graph_arc
    assert np.allclose(curve.sigma, 0.0)
    assert curve.x[-1] == pytest.approx(2.0)


def test_phase_plane_equilibrium_matches_cylinder(H_one):
    report = phase_plane(H_one, -1, ((0.05, 3.0), (-3.0, 3.0)))
    assert len(report.equilibria) == 1
    eq = report.equilibria[0]
    assert eq.branch == "+"
    assert eq.x == pytest.approx(report.cylinder_radius, abs=1e-10)
    assert eq.sigma == pytest.approx(math.pi / 2, abs=1e-10)
    assert eq.classification == "center"


def test_phase_plane_random_prescriptions(rng):
    for _ in range(20):
        coeffs = [float(rng.uniform(0.6, 2.0)), float(rng.uniform(0.0, 1.0))]
        H = parse_prescription({"type": "even-poly", "coeffs": coeffs})
        rho = cylinder_radius(H, -1)
        report = phase_plane(H, -1, ((0.5 * rho, 2.0 * rho), (0.0, 3.0)), grid=6)
        assert any(abs(e.x - rho) <= 1e-10 for e in report.equilibria)


def test_phase_plane_orbits(H_one):
    report = phase_plane(H_one, -1, ((0.2, 2.0), (-1.0, 1.0)), seeds=4, orbit_length=1.0)
    assert len(report.orbit_samples) == 4
    assert all(len(orbit) >= 1 for orbit in report.orbit_samples)


def test_phase_plane_window_is_checked(H_one):
    with pytest.raises(DomainError):
        phase_plane(H_one, -1, ((0.0, 1.0), (-1.0, 1.0)))
    with pytest.raises(DomainError):
        phase_plane(H_one, 1, ((0.1, 4.0), (-1.0, 1.0)))


@pytest.mark.parametrize(
    "A,expected",
    [
        (np.array([[0.0, -1.0], [1.0, 0.0]]), "center"),
        (np.array([[1.0, 0.0], [0.0, -1.0]]), "saddle"),
        (np.array([[-1.0, 0.0], [0.0, -2.0]]), "stable node"),
        (np.array([[-0.1, -1.0], [1.0, -0.1]]), "stable focus"),
        (np.array([[0.1, -1.0], [1.0, 0.1]]), "unstable focus"),
    ],
)
def test_classify_equilibrium(A, expected):
    assert classify_equilibrium(A) == expected


def test_cmc_diameter_bounds_and_monotonicity():
    diameters = []
    for h0 in (1.0, 2.0, 4.0):
        curve = build_sphere(constant(h0), -1, 1e-3)
        d = cmc_sphere_diameter(h0, -1, 1e-3)
        assert d >= curve.height - 1e-12
        assert d >= 2.0 * curve.x_max - 1e-12
        diameters.append(d)
    assert diameters[0] > diameters[1] > diameters[2]


def test_cmc_diameter_on_sphere_base():
    curve = build_sphere(constant(1.0), 1, 1e-3)
    assert cmc_sphere_diameter(1.0, 1, 1e-3) < math.pi + curve.height


def test_cmc_diameter_class_gate():
    with pytest.raises(ClassViolationError):
        cmc_sphere_diameter(0.4, -1)


@pytest.mark.slow
def test_fine_step_sphere_and_first_integral(H_one):
    curve = build_sphere(H_one, -1, 1e-4)
    assert curve.x_max == pytest.approx(LN3, abs=1e-4)
    assert first_integral_drift(curve, 1.0) <= 1e-8


def test_even_sphere_is_reflection_symmetric():
    H = parse_prescription({"type": "even-poly", "coeffs": [1.0, 0.3]})
    curve = build_sphere(H, -1, 1e-3)
    inner = (curve.sigma > 0.05) & (curve.sigma < math.pi - 0.05)
    sigma, z = curve.sigma[inner], curve.z[inner]
    assert np.all(np.diff(sigma) > 0.0)
    grid = np.linspace(0.1, math.pi - 0.1, 101)
    z_of_sigma = CubicSpline(sigma, z)
    level = z_of_sigma(grid) + z_of_sigma(math.pi - grid)
    assert np.ptp(level) <= 1e-6


@pytest.mark.parametrize("coeffs", [[0.4], [0.5, 1.0]])
def test_no_cylinder_and_no_equilibrium_below_threshold(coeffs):
    H = parse_prescription({"type": "even-poly", "coeffs": coeffs})
    with pytest.raises(NoSolutionError):
        cylinder_radius(H, -1)
    report = phase_plane(H, -1, ((0.1, 2.0), (0.0, math.pi)))
    assert report.equilibria == []
    assert report.cylinder_radius is None


def test_phase_plane_on_the_upper_half_window(H_one):
    report = phase_plane(H_one, -1, ((0.1, 2.0), (0.0, math.pi)))
    assert [e.branch for e in report.equilibria] == ["+"]
    assert report.equilibria[0].x == pytest.approx(math.atanh(0.5), abs=1e-10)


@pytest.mark.parametrize("coeffs", [[1.0], [0.8, 0.4], [1.2, 0.0, 0.5], [0.6, 0.5]])
def test_cylinder_lies_inside_the_sphere_equator(coeffs):
    H = parse_prescription({"type": "even-poly", "coeffs": coeffs})
    assert cylinder_radius(H, -1) < build_sphere(H, -1, 1e-3).x_max
    assert cylinder_radius(H, 1) < build_sphere(H, 1, 1e-3).x_max
