"""Vertical H-graphs over geodesic disks.

A graph u over a domain of M²(κ) with upward normal has angle function
ν = 1/W, W = √(1 + |∇u|²), and satisfies

    div(∇u / W) = 2H(1/W).

Radial graphs reduce to (1/sn)(sn u'/W)' = 2H(1/W); with the flux
φ = sn·u'/W this is the first order system

    φ' = 2 sn H(ν),   u' = (φ/sn)/ν,   ν = √(1 - (φ/sn)²),

which stays a graph while φ < sn. Disk graphs are solved by damped Picard
iteration on a uniform polar grid, freezing the coefficient 1/W at cell
faces and the right-hand side at nodes.
"""

import logging
import math
from collections.abc import Callable
from typing import Optional

import numpy as np
import scipy.sparse as sp
from scipy.integrate import solve_ivp
from scipy.interpolate import PchipInterpolator
from scipy.sparse.linalg import spsolve

from core.config import get_settings
from core.errors import DomainError, NoSolutionError, NonConvergenceError, UsageError, VerticalPointError
from geometry import spaceform
from geometry.prescribed import PrescribedFunction, describe, parse_prescription
from geometry.rotational import lower_cap
from schemas.geometry import Kappa, as_kappa
from schemas.reports import ResidualReport
from schemas.surfaces import DiskGraph, ProfileCurve, RadialGraph

logger = logging.getLogger(__name__)

VERTICAL_MARGIN = 1e-9
MIN_GRID = 8

Boundary = float | np.ndarray | Callable[[np.ndarray], np.ndarray]


def _check_radius(k: int, R: float) -> None:
    if not (R > 0.0 and math.isfinite(R)):
        raise DomainError(f"disk radius must be positive, got {R}")
    if k == 1 and R >= math.pi:
        raise DomainError("disk radius must be below pi on S2")


# ---------------------------------------------------------------------------
# Radial graphs
# ---------------------------------------------------------------------------


def solve_radial(H: PrescribedFunction, kappa: Kappa | int, R: float, step: Optional[float] = None) -> RadialGraph:
    """Rotationally symmetric solution on the disk of radius R with u(R) = 0.

    Raises :class:`VerticalPointError` with the radius R* where φ/sn reaches
    1 - 1e-9 if that happens before R. Only values H(y), y ∈ [0, 1], are used.
    """
    k = as_kappa(kappa).value
    _check_radius(k, R)
    h = get_settings().default_step if step is None else step
    if h <= 0.0:
        raise UsageError("step must be positive")
    sn = spaceform.scalar_trig(k)[0]
    limit = 1.0 - VERTICAL_MARGIN

    def ratio(r: float, phi: float) -> float:
        s = sn(r)
        return phi / s if s > 0.0 else 0.0

    def rhs(r: float, y: np.ndarray) -> list[float]:
        q = ratio(r, y[0])
        nu = math.sqrt(max(1.0 - q * q, 0.0))
        return [2.0 * sn(r) * H.scalar(nu), q / max(nu, 1e-300)]

    def vertical(r: float, y: np.ndarray) -> float:
        return ratio(r, y[0]) - limit

    vertical.terminal = True  # type: ignore[attr-defined]
    vertical.direction = 1  # type: ignore[attr-defined]

    n = max(1, int(round(R / h)))
    r = np.linspace(0.0, R, n + 1)
    sol = solve_ivp(
        rhs,
        (0.0, R),
        [0.0, 0.0],
        method="DOP853",
        t_eval=r,
        events=vertical,
        rtol=1e-12,
        atol=1e-14,
    )
    if sol.status == 1 and sol.t_events[0].size:
        r_star = float(sol.t_events[0][0])
        logger.debug("radial graph turns vertical at R*=%.12g (requested R=%g)", r_star, R)
        raise VerticalPointError(r_star)
    if not sol.success:
        raise NonConvergenceError(f"radial integration failed: {sol.message}")

    phi = sol.y[0]
    u = sol.y[1] - sol.y[1][-1]
    snr = spaceform.sn(k, r)
    q = np.divide(phi, snr, out=np.zeros_like(phi), where=snr > 0.0)
    nu = np.sqrt(np.clip(1.0 - q * q, 0.0, 1.0))
    return RadialGraph(R=R, r=r, u=u, phi=phi, nu=nu, kappa=as_kappa(k), prescription=describe(H))


def radial_from_profile(curve: ProfileCurve, nu_min: float = 1e-2) -> RadialGraph:
    """The initial ν ≥ ``nu_min`` stretch of a profile from the lower pole, as u(r).

    On that stretch u' = tan σ, so φ = sn(x) sin σ and ν = cos σ.
    """
    nu = np.cos(curve.sigma)
    keep = nu >= nu_min
    stop = int(np.argmin(keep)) if not np.all(keep) else keep.size
    if stop < 3:
        raise DomainError("profile has fewer than three samples with nu >= nu_min")
    x = curve.x[:stop]
    if np.any(np.diff(x) <= 0.0):
        raise DomainError("profile is not a graph over its axis distance")
    sigma = curve.sigma[:stop]
    z = curve.z[:stop]
    k = curve.kappa.value
    return RadialGraph(
        R=float(x[-1]),
        r=x.copy(),
        u=z - z[-1],
        phi=spaceform.sn(k, x) * np.sin(sigma),
        nu=np.cos(sigma),
        kappa=curve.kappa,
        prescription=curve.prescription,
    )


def maximal_cap(H: PrescribedFunction, kappa: Kappa | int, step: Optional[float] = None) -> RadialGraph:
    """The radial graph on [0, R*] ending at its vertical point (ν = 0 at R*)."""
    cap = lower_cap(H, kappa, step)
    if cap.event != "sigma":
        raise NoSolutionError(f"lower cap has no vertical point within arclength {cap.s[-1]:.6g}")
    return radial_from_profile(cap, nu_min=0.0)


def residual_radial(graph: RadialGraph, H: PrescribedFunction, kappa: Kappa | int) -> ResidualReport:
    """Conservative central-difference residual of (1/sn)(sn u'/W)' - 2H(1/W).

    Fluxes live at half-points between nodes; each cell is centred at the
    midpoint of its two half-points, which is the node itself on a uniform grid.
    """
    k = as_kappa(kappa).value
    r = np.asarray(graph.r, dtype=float)
    u = np.asarray(graph.u, dtype=float)
    if r.size < 3:
        raise DomainError("need at least three samples")
    slope = np.diff(u) / np.diff(r)
    r_half = 0.5 * (r[:-1] + r[1:])
    flux = spaceform.sn(k, r_half) * slope / np.sqrt(1.0 + slope * slope)
    centre = 0.5 * (r_half[:-1] + r_half[1:])
    divergence = np.diff(flux) / np.diff(r_half) / spaceform.sn(k, centre)
    mean_slope = 0.5 * (slope[:-1] + slope[1:])
    nu = 1.0 / np.sqrt(1.0 + mean_slope * mean_slope)
    residual = np.abs(divergence - 2.0 * H(nu))
    i = int(np.argmax(residual))
    return ResidualReport(
        max_residual=float(residual[i]),
        mean_residual=float(np.mean(residual)),
        worst_point={"r": float(centre[i]), "residual": float(residual[i])},
        nu_range=(float(np.min(nu)), float(np.max(nu))),
    )


# ---------------------------------------------------------------------------
# Disk graphs
# ---------------------------------------------------------------------------


class _PolarGrid:
    """Uniform polar grid r_i = i h, θ_j = j Δθ with precomputed metric factors."""

    def __init__(self, k: int, R: float, nr: int, ntheta: int):
        self.k = k
        self.R = R
        self.nr = nr
        self.ntheta = ntheta
        self.h = R / nr
        self.dtheta = 2.0 * math.pi / ntheta
        self.r = np.linspace(0.0, R, nr + 1)
        self.theta = self.dtheta * np.arange(ntheta)
        self.sn_node = spaceform.sn(k, self.r)
        self.sn_half = spaceform.sn(k, self.r[:-1] + 0.5 * self.h)
        # origin cell: disk of radius h/2
        self.origin_area = float(spaceform.geodesic_disk_area(k, 0.5 * self.h))
        self.size = 1 + (nr - 1) * ntheta

    def index(self, i: np.ndarray, j: np.ndarray) -> np.ndarray:
        return 1 + (i - 1) * self.ntheta + np.mod(j, self.ntheta)

    def unpack(self, x: np.ndarray, boundary: np.ndarray) -> np.ndarray:
        U = np.empty((self.nr + 1, self.ntheta))
        U[0] = x[0]
        U[1 : self.nr] = x[1:].reshape(self.nr - 1, self.ntheta)
        U[self.nr] = boundary
        return U

    def pack(self, U: np.ndarray) -> np.ndarray:
        return np.concatenate([[U[0, 0]], U[1 : self.nr].ravel()])


def _coefficients(grid: _PolarGrid, U: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray, float]:
    """1/W at radial faces (nr, N) and angular faces (nr-1, N), ν at interior nodes and the origin."""
    h, dt = grid.h, grid.dtheta
    d_theta = (np.roll(U, -1, axis=1) - np.roll(U, 1, axis=1)) / (2.0 * dt)
    d_theta[0] = 0.0

    ur_face = np.diff(U, axis=0) / h
    ut_face = 0.5 * (d_theta[:-1] + d_theta[1:]) / grid.sn_half[:, None]
    c_radial = 1.0 / np.sqrt(1.0 + ur_face**2 + ut_face**2)

    inner = slice(1, grid.nr)
    d_r = (U[2:] - U[:-2]) / (2.0 * h)
    sn_i = grid.sn_node[inner][:, None]
    ut_tface = (np.roll(U[inner], -1, axis=1) - U[inner]) / dt / sn_i
    ur_tface = 0.5 * (d_r + np.roll(d_r, -1, axis=1))
    c_angular = 1.0 / np.sqrt(1.0 + ur_tface**2 + ut_tface**2)

    nu = 1.0 / np.sqrt(1.0 + d_r**2 + (d_theta[inner] / sn_i) ** 2)

    # origin gradient from the first Fourier mode of ring 1
    ring = U[1]
    a = 2.0 * np.mean(ring * np.cos(grid.theta))
    b = 2.0 * np.mean(ring * np.sin(grid.theta))
    slope0 = math.hypot(a, b) / float(grid.sn_node[1])
    nu0 = 1.0 / math.sqrt(1.0 + slope0 * slope0)
    return c_radial, c_angular, nu, nu0


def _assemble(grid: _PolarGrid, c_radial: np.ndarray, c_angular: np.ndarray, boundary: np.ndarray) -> tuple[sp.csr_matrix, np.ndarray]:
    """Linear operator with frozen coefficients and the boundary contribution vector."""
    nr, N, h, dt = grid.nr, grid.ntheta, grid.h, grid.dtheta
    I, J = np.meshgrid(np.arange(1, nr), np.arange(N), indexing="ij")
    sn_i = grid.sn_node[I]
    row = grid.index(I, J)

    east = grid.sn_half[I] * c_radial[I, J] / (sn_i * h * h)
    west = grid.sn_half[I - 1] * c_radial[I - 1, J] / (sn_i * h * h)
    north = c_angular[I - 1, J] / (sn_i**2 * dt * dt)
    south = c_angular[I - 1, (J - 1) % N] / (sn_i**2 * dt * dt)

    rows = [row.ravel(), row.ravel(), row.ravel(), row.ravel()]
    cols = [grid.index(I, J + 1).ravel(), grid.index(I, J - 1).ravel(), row.ravel(), np.where(I > 1, grid.index(I - 1, J), 0).ravel()]
    vals = [north.ravel(), south.ravel(), -(east + west + north + south).ravel(), west.ravel()]

    inner_east = I < nr - 1
    rows.append(row[inner_east])
    cols.append(grid.index(I + 1, J)[inner_east])
    vals.append(east[inner_east])

    bnd = np.zeros(grid.size)
    bnd[row[~inner_east]] = east[~inner_east] * boundary[J[~inner_east]]

    # origin: flux through the circle r = h/2 over the area it encloses
    w = c_radial[0] * grid.sn_half[0] * dt / (h * grid.origin_area)
    rows += [np.zeros(N, dtype=int), np.zeros(1, dtype=int)]
    cols += [grid.index(np.ones(N, dtype=int), np.arange(N)), np.zeros(1, dtype=int)]
    vals += [w, np.array([-w.sum()])]

    A = sp.coo_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(grid.size, grid.size))
    return A.tocsr(), bnd


def _source(H: PrescribedFunction, nu: np.ndarray, nu0: float) -> np.ndarray:
    return np.concatenate([[2.0 * H.scalar(nu0)], 2.0 * np.asarray(H(nu.ravel()))])


def _boundary_values(boundary: Boundary, theta: np.ndarray) -> np.ndarray:
    if callable(boundary):
        values = np.asarray(boundary(theta), dtype=float)
    else:
        values = np.asarray(boundary, dtype=float)
    values = np.broadcast_to(values, theta.shape).astype(float)
    if not np.all(np.isfinite(values)):
        raise UsageError("boundary data must be finite")
    return values


def _grid_for(kappa: Kappa | int, R: float, nr: int, ntheta: int) -> _PolarGrid:
    k = as_kappa(kappa).value
    _check_radius(k, R)
    if nr < MIN_GRID or ntheta < MIN_GRID:
        raise UsageError(f"grid counts must be at least {MIN_GRID}, got nr={nr} ntheta={ntheta}")
    return _PolarGrid(k, R, nr, ntheta)


def solve_disk(
    H: PrescribedFunction,
    kappa: Kappa | int,
    R: float,
    boundary: Boundary = 0.0,
    nr: int = 64,
    ntheta: int = 64,
    tol: Optional[float] = None,
    max_iter: Optional[int] = None,
    *,
    damping: Optional[float] = None,
    initial: Optional[np.ndarray] = None,
) -> DiskGraph:
    """Dirichlet problem div(∇u/W) = 2H(1/W) on the geodesic disk of radius R.

    ``boundary`` is a constant, an array of ``ntheta`` values at θ_j, or a
    callable of θ. Each Picard step solves the linear problem with 1/W and
    H(1/W) frozen at the previous iterate, then relaxes by ``damping``.
    """
    settings = get_settings()
    tol = settings.picard_tol if tol is None else tol
    max_iter = settings.picard_max_iter if max_iter is None else max_iter
    damping = settings.picard_damping if damping is None else damping
    if tol <= 0.0 or max_iter < 1 or not 0.0 < damping <= 1.0:
        raise UsageError("need tol > 0, max_iter >= 1 and damping in (0, 1]")
    grid = _grid_for(kappa, R, nr, ntheta)
    g = _boundary_values(boundary, grid.theta)

    if initial is None:
        U = np.zeros((nr + 1, ntheta))
    else:
        U = np.array(initial, dtype=float)
        if U.shape != (nr + 1, ntheta):
            raise UsageError(f"initial guess must have shape {(nr + 1, ntheta)}")
        U[0] = np.mean(U[0])
    U[nr] = g
    x = grid.pack(U)

    history: list[float] = []
    for it in range(1, max_iter + 1):
        c_radial, c_angular, nu, nu0 = _coefficients(grid, grid.unpack(x, g))
        A, bnd = _assemble(grid, c_radial, c_angular, g)
        target = spsolve(A, _source(H, nu, nu0) - bnd)
        x_new = x + damping * (target - x)
        change = float(np.max(np.abs(x_new - x)))
        history.append(change)
        x = x_new
        logger.debug("picard %d: max change %.3e", it, change)
        if change < tol:
            break
    else:
        raise NonConvergenceError(
            f"Picard iteration did not reach tol {tol:g} in {max_iter} iterations (last change {history[-1]:.3g})",
            residual_history=history,
        )

    U = grid.unpack(x, g)
    k = as_kappa(kappa)
    graph = DiskGraph(
        R=R,
        nr=nr,
        ntheta=ntheta,
        u=U,
        boundary=g,
        iterations=len(history),
        residual=0.0,
        kappa=k,
        prescription=describe(H),
        residual_history=history,
    )
    report = residual_disk(graph, H, k)
    if report.nu_range[0] < settings.vertical_warn_nu:
        logger.warning("disk graph is close to vertical: min nu = %.3g", report.nu_range[0])
    return graph.model_copy(update={"residual": report.max_residual})


def residual_disk(graph: DiskGraph, H: PrescribedFunction, kappa: Kappa | int) -> ResidualReport:
    """The solver's nonlinear discrete operator minus 2H(ν), at the origin and interior nodes."""
    grid = _grid_for(kappa, graph.R, graph.nr, graph.ntheta)
    U = np.asarray(graph.u, dtype=float)
    g = U[graph.nr]
    c_radial, c_angular, nu, nu0 = _coefficients(grid, U)
    A, bnd = _assemble(grid, c_radial, c_angular, g)
    residual = np.abs(A @ grid.pack(U) + bnd - _source(H, nu, nu0))
    i = int(np.argmax(residual))
    if i == 0:
        where = {"r": 0.0, "theta": 0.0}
    else:
        ring, j = divmod(i - 1, graph.ntheta)
        where = {"r": float(grid.r[ring + 1]), "theta": float(grid.theta[j])}
    all_nu = np.concatenate([[nu0], nu.ravel()])
    return ResidualReport(
        max_residual=float(residual[i]),
        mean_residual=float(np.mean(residual)),
        worst_point={**where, "residual": float(residual[i])},
        nu_range=(float(np.min(all_nu)), float(np.max(all_nu))),
    )


def sample_radial_on_disk(graph: RadialGraph, nr: int, ntheta: int) -> DiskGraph:
    """A radial solution placed on the polar grid (PCHIP in r, constant in θ)."""
    grid = _grid_for(graph.kappa, graph.R, nr, ntheta)
    u = PchipInterpolator(graph.r, graph.u)(grid.r)
    U = np.repeat(u[:, None], ntheta, axis=1)
    H = parse_prescription(graph.prescription)
    disk = DiskGraph(
        R=graph.R,
        nr=nr,
        ntheta=ntheta,
        u=U,
        boundary=U[nr].copy(),
        iterations=0,
        residual=0.0,
        kappa=graph.kappa,
        prescription=graph.prescription,
    )
    return disk.model_copy(update={"residual": residual_disk(disk, H, graph.kappa).max_residual})
