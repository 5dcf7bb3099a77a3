import math

import numpy as np
import pytest

from core.errors import DomainError, NonConvergenceError, UsageError, VerticalPointError
from geometry import spaceform
from geometry.graphs import (
    maximal_cap,
    radial_from_profile,
    residual_disk,
    residual_radial,
    sample_radial_on_disk,
    solve_disk,
    solve_radial,
)
from geometry.prescribed import constant, parse_prescription
from geometry.rotational import build_sphere, lower_cap

LN3 = math.log(3.0)


# ---------------------------------------------------------------------------
# Radial
# ---------------------------------------------------------------------------


def test_zero_prescription_gives_flat_graph(H_zero):
    graph = solve_radial(H_zero, -1, 1.5, 1e-2)
    assert np.all(graph.u == 0.0)
    assert np.all(graph.nu == 1.0)


def test_unit_prescription_turns_vertical_at_ln3(H_one):
    with pytest.raises(VerticalPointError) as exc:
        solve_radial(H_one, -1, 2.0, 1e-3)
    assert exc.value.r_star == pytest.approx(LN3, abs=1e-3)
    assert exc.value.exit_code == 3


def test_flux_matches_closed_form(H_one):
    graph = solve_radial(H_one, -1, 1.0, 1e-3)
    q = graph.phi[1:] / np.sinh(graph.r[1:])
    assert np.allclose(q, 2.0 * np.tanh(graph.r[1:] / 2.0), atol=1e-9)
    assert graph.u[-1] == 0.0
    assert graph.depth > 0.0


def test_soliton_stays_a_graph(soliton):
    graph = solve_radial(soliton, -1, 2.0, 1e-3)
    assert np.all(graph.nu > 0.0)
    assert graph.u[0] < 0.0


def test_radial_domain_checks(H_one):
    with pytest.raises(DomainError):
        solve_radial(H_one, -1, 0.0)
    with pytest.raises(DomainError):
        solve_radial(H_one, 1, 3.2)


def test_one_sidedness_battery(rng):
    for _ in range(30):
        kappa = int(rng.choice([-1, 1]))
        coeffs = [float(rng.uniform(0.6, 1.5)), float(rng.uniform(0.0, 0.4))]
        H = parse_prescription({"type": "even-poly", "coeffs": coeffs})
        graph = solve_radial(H, kappa, 0.3, 1e-3)
        assert np.all(graph.u <= 0.0)
        assert graph.u[0] < 0.0
        assert np.all(graph.phi[1:] < spaceform.sn(kappa, graph.r[1:]))


def test_cap_depth_grows_with_radius(H_one):
    depths = [solve_radial(H_one, -1, R, 1e-3).depth for R in (0.2, 0.5, 0.8, 1.0)]
    assert depths == sorted(depths)
    assert len(set(depths)) == len(depths)


def test_evenness_decoupling():
    upper = [[0.0, 1.0], [0.5, 1.0], [1.0, 1.0]]
    flat = parse_prescription({"type": "table", "nodes": [[-1.0, 1.0], [-0.5, 1.0], *upper]})
    bent = parse_prescription({"type": "table", "nodes": [[-1.0, 3.0], [-0.5, 2.0], *upper]})
    assert flat(-0.75) != bent(-0.75)
    a = solve_radial(flat, -1, 0.9, 1e-3)
    b = solve_radial(bent, -1, 0.9, 1e-3)
    assert np.array_equal(a.u, b.u)
    assert np.array_equal(a.phi, b.phi)


def test_residual_of_zero_graph_is_exactly_two(H_one):
    graph = solve_radial(constant(0.0), -1, 1.0, 1e-2)
    report = residual_radial(graph, H_one, -1)
    assert report.max_residual == 2.0
    assert report.nu_range == (1.0, 1.0)


def test_residual_of_solver_output(H_one):
    graph = solve_radial(H_one, -1, 1.0, 1e-4)
    assert residual_radial(graph, H_one, -1).max_residual <= 1e-6


def test_residual_converges_at_second_order(H_one):
    coarse = residual_radial(solve_radial(H_one, -1, 1.0, 2e-3), H_one, -1).max_residual
    fine = residual_radial(solve_radial(H_one, -1, 1.0, 1e-3), H_one, -1).max_residual
    assert coarse / fine >= 3.5


def test_maximal_cap_is_the_lower_hemisphere(H_one):
    cap = maximal_cap(H_one, -1, 1e-3)
    sphere = build_sphere(H_one, -1, 1e-3)
    assert cap.R == pytest.approx(LN3, abs=1e-4)
    assert cap.depth == pytest.approx(sphere.height / 2.0, abs=1e-4)
    assert cap.nu[-1] == pytest.approx(0.0, abs=1e-12)


@pytest.mark.slow
def test_lower_cap_satisfies_the_graph_equation(H_one):
    cap = lower_cap(H_one, -1, 1e-4)
    graph = radial_from_profile(cap)
    assert graph.nu.min() >= 1e-2
    assert residual_radial(graph, H_one, -1).max_residual <= 1e-5


def test_radial_from_profile_needs_a_graph(H_one):
    cap = lower_cap(H_one, -1, 1e-2)
    with pytest.raises(DomainError):
        radial_from_profile(cap, nu_min=2.0)


# ---------------------------------------------------------------------------
# Disk
# ---------------------------------------------------------------------------


def test_flat_disk_in_one_iteration(H_zero):
    graph = solve_disk(H_zero, -1, 1.0, 0.0, nr=8, ntheta=8)
    assert graph.iterations == 1
    assert graph.residual_history == [0.0]
    assert np.all(graph.u == 0.0)


def test_disk_parameter_checks(H_one):
    with pytest.raises(UsageError):
        solve_disk(H_one, -1, 1.0, nr=4, ntheta=16)
    with pytest.raises(UsageError):
        solve_disk(H_one, -1, 1.0, tol=0.0)
    with pytest.raises(DomainError):
        solve_disk(H_one, 1, 4.0)


def test_disk_reports_non_convergence(H_one):
    with pytest.raises(NonConvergenceError) as exc:
        solve_disk(H_one, -1, 0.5, 0.0, nr=8, ntheta=8, tol=1e-14, max_iter=2)
    assert len(exc.value.residual_history) == 2


@pytest.mark.slow
def test_disk_matches_radial_solution(H_one):
    disk = solve_disk(H_one, -1, 0.8, 0.0, nr=128, ntheta=16, tol=1e-9)
    radial = solve_radial(H_one, -1, 0.8, 0.8 / 128)
    assert np.max(np.abs(disk.u[:, 0] - radial.u)) < 2e-3
    assert np.all(disk.u <= 1e-12)


@pytest.mark.slow
def test_cosine_boundary_is_mirror_symmetric(H_one):
    graph = solve_disk(H_one, -1, 0.5, lambda t: 0.1 * np.cos(t), nr=32, ntheta=16, tol=1e-11)
    assert graph.residual < 1e-6
    mirror = (-np.arange(graph.ntheta)) % graph.ntheta
    assert np.max(np.abs(graph.u - graph.u[:, mirror])) < 1e-10
    assert residual_disk(graph, H_one, -1).max_residual == pytest.approx(graph.residual)


@pytest.mark.slow
def test_picard_limit_does_not_depend_on_start(H_one, rng):
    tol = 1e-9
    a = solve_disk(H_one, -1, 0.5, 0.0, nr=16, ntheta=16, tol=tol)
    start = np.zeros((17, 16))
    start[1:16] = 0.05 * rng.standard_normal((15, 16))
    b = solve_disk(H_one, -1, 0.5, 0.0, nr=16, ntheta=16, tol=tol, initial=start)
    assert np.max(np.abs(a.u - b.u)) <= 10 * tol


def test_radial_solution_on_disk_grid(H_one):
    radial = solve_radial(H_one, -1, 0.5, 1e-3)
    disk = sample_radial_on_disk(radial, 16, 16)
    assert disk.u.shape == (17, 16)
    assert disk.u[0, 0] == pytest.approx(radial.u[0])
    assert np.allclose(disk.u[16], 0.0, atol=1e-15)
    assert disk.residual < 0.1


@pytest.mark.slow
def test_disk_residual_converges_at_second_order(H_one):
    radial = solve_radial(H_one, -1, 0.5, 1e-4)
    residuals = [residual_disk(sample_radial_on_disk(radial, nr, 16), H_one, -1).max_residual for nr in (16, 32, 64)]
    assert residuals[0] / residuals[1] >= 3.5
    assert residuals[1] / residuals[2] >= 3.5
