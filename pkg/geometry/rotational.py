"""Rotational H-surfaces in M²(κ)×ℝ.

A rotational surface is generated by a profile (x(s), z(s)) in a vertical
half-plane, x the distance to the axis, parametrized by arclength with tangent
angle σ. With the upward orientation (ν = cos σ > 0 on lower caps) the
prescribed mean curvature equation reduces to

    x' = cos σ,   z' = sin σ,   σ' = 2H(cos σ) - ct_κ(x) sin σ,

which is the divergence equation (1/sn)(sn u'/W)' = 2H(1/W) written for
u' = tan σ. At the axis ct_κ(x) ~ 1/x and regularity forces σ'(0) = H(±1).
"""

import logging
import math
from collections.abc import Callable
from typing import Optional

import numpy as np
from scipy.optimize import bisect

from core.config import get_settings
from core.errors import (
    AxisSingularityError,
    ClassViolationError,
    DomainError,
    NoSolutionError,
    NonClosureError,
    PMCError,
    PreconditionError,
    StepRejectedError,
)
from geometry import spaceform
from geometry.prescribed import PrescribedFunction, cmc_admissible, constant, describe, validate_class
from schemas.geometry import Kappa, as_kappa
from schemas.reports import Equilibrium, PhasePlaneReport
from schemas.surfaces import Closure, ProfileCurve, ProfileState
from workers.pool import parallel_map

logger = logging.getLogger(__name__)

State = tuple[float, float, float]  # (x, z, sigma)
Rhs = Callable[[float, float], State]

AXIS_GUARD_STEPS = 10
EQUILIBRIUM_TOL = 1e-10


# ---------------------------------------------------------------------------
# Right-hand side
# ---------------------------------------------------------------------------


def _make_rhs(H: PrescribedFunction, k: int) -> Rhs:
    sn, cs = spaceform.scalar_trig(k)
    h = H.scalar
    bound = spaceform.chart_bound(k)

    def rhs(x: float, sigma: float) -> State:
        if x <= 0.0 or x >= bound:
            raise AxisSingularityError(f"profile rhs evaluated at x={x:.6g} outside (0, {bound:.6g})")
        c = math.cos(sigma)
        s = math.sin(sigma)
        return (c, s, 2.0 * h(c) - cs(x) / sn(x) * s)

    return rhs


def profile_rhs(H: PrescribedFunction, kappa: Kappa | int, state: ProfileState) -> State:
    """(dx/ds, dz/ds, dσ/ds) = (cos σ, sin σ, 2H(cos σ) - ct_κ(x) sin σ)."""
    return _make_rhs(H, as_kappa(kappa).value)(state.x, state.sigma)


# ---------------------------------------------------------------------------
# Fixed-step RK4 with Richardson flagging and dense-output events
# ---------------------------------------------------------------------------


def _rk4(rhs: Rhs, y: State, h: float, k1: Optional[State] = None) -> State:
    x, z, sg = y
    a = k1 if k1 is not None else rhs(x, sg)
    b = rhs(x + 0.5 * h * a[0], sg + 0.5 * h * a[2])
    c = rhs(x + 0.5 * h * b[0], sg + 0.5 * h * b[2])
    d = rhs(x + h * c[0], sg + h * c[2])
    w = h / 6.0
    return (
        x + w * (a[0] + 2.0 * b[0] + 2.0 * c[0] + d[0]),
        z + w * (a[1] + 2.0 * b[1] + 2.0 * c[1] + d[1]),
        sg + w * (a[2] + 2.0 * b[2] + 2.0 * c[2] + d[2]),
    )


def _hermite(y0: State, f0: State, y1: State, f1: State, h: float, t: float) -> State:
    t2 = t * t
    t3 = t2 * t
    h00 = 2.0 * t3 - 3.0 * t2 + 1.0
    h10 = t3 - 2.0 * t2 + t
    h01 = -2.0 * t3 + 3.0 * t2
    h11 = t3 - t2
    return tuple(h00 * y0[i] + h10 * h * f0[i] + h01 * y1[i] + h11 * h * f1[i] for i in range(3))  # type: ignore[return-value]


def _locate(g: Callable[[float], float], tol: float) -> float:
    """Root of g on (0, 1] given g(0) and g(1) of opposite sign (or g(1) == 0)."""
    lo, hi = 0.0, 1.0
    g_lo = g(lo)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        g_mid = g(mid)
        if abs(g_mid) <= tol or hi - lo < 1e-16:
            return mid
        if (g_mid > 0.0) == (g_lo > 0.0):
            lo, g_lo = mid, g_mid
        else:
            hi = mid
    return hi


def _sigma_crossing(s0: float, s1: float, period: float) -> Optional[float]:
    """First multiple of ``period`` strictly beyond s0 and reached by s1."""
    if s1 > s0:
        m = math.floor(s0 / period) + 1
        target = m * period
        return target if target <= s1 else None
    if s1 < s0:
        m = math.ceil(s0 / period) - 1
        target = m * period
        return target if target >= s1 else None
    return None


def _is_equilibrium(rhs: Rhs, state: ProfileState) -> bool:
    dx, _, dsigma = rhs(state.x, state.sigma)
    return abs(dx) <= EQUILIBRIUM_TOL and abs(dsigma) <= EQUILIBRIUM_TOL


def integrate_profile(
    H: PrescribedFunction,
    kappa: Kappa | int,
    initial: ProfileState,
    max_arclength: float,
    step: float,
    *,
    sigma_period: float = math.pi,
    closure_tol: Optional[float] = None,
) -> ProfileCurve:
    """Classical RK4 at fixed arclength step with event detection.

    Events end the integration at the first of: σ crossing a multiple of
    ``sigma_period`` (other than its starting value), x dropping below the
    axis guard 10·step while heading to the axis, x exceeding the chart bound
    minus the guard (κ = +1). Each step is also taken as two half steps; a
    Richardson estimate above ``step_error_tol``·step raises
    :class:`StepRejectedError`.
    """
    k = as_kappa(kappa).value
    if step <= 0.0:
        raise PreconditionError("step must be positive")
    if initial.x <= 0.0:
        raise AxisSingularityError("initial x must be positive")
    settings = get_settings()
    closure_tol = settings.closure_tol if closure_tol is None else closure_tol
    rhs = _make_rhs(H, k)
    guard = AXIS_GUARD_STEPS * step
    outer = spaceform.chart_bound(k) - guard
    err_tol = settings.step_error_tol * step
    event_tol = settings.event_tol

    s_end = initial.s + max_arclength
    y: State = (initial.x, initial.z, initial.sigma)
    f = rhs(y[0], y[2])
    s = initial.s
    ss, xs, zs, sgs = [s], [y[0]], [y[1]], [y[2]]
    event: Optional[str] = None
    sigma_target: Optional[float] = None

    while s + step <= s_end + 1e-12 * step:
        y1 = _rk4(rhs, y, step, f)
        half = _rk4(rhs, _rk4(rhs, y, 0.5 * step, f), 0.5 * step)
        estimate = max(abs(half[i] - y1[i]) for i in range(3)) / 15.0
        if estimate > err_tol:
            raise StepRejectedError(
                f"local error {estimate:.3g} exceeds {settings.step_error_tol:g} per unit arclength at s={s:.6g}",
                s=s,
                estimate=estimate,
            )
        f1 = rhs(y1[0], y1[2])

        candidates: list[tuple[float, str, Optional[float]]] = []
        target = _sigma_crossing(y[2], y1[2], sigma_period)
        if target is not None:
            t = _locate(lambda t, c=target: _hermite(y, f, y1, f1, step, t)[2] - c, event_tol)
            candidates.append((t, "sigma", target))
        if y1[0] < guard <= y[0] and math.cos(y1[2]) < 0.0:
            t = _locate(lambda t: _hermite(y, f, y1, f1, step, t)[0] - guard, event_tol)
            candidates.append((t, "axis", None))
        if y1[0] > outer >= y[0]:
            t = _locate(lambda t: outer - _hermite(y, f, y1, f1, step, t)[0], event_tol)
            candidates.append((t, "chart", None))

        if candidates:
            t, event, sigma_target = min(candidates, key=lambda c: c[0])
            ye = _hermite(y, f, y1, f1, step, t)
            if event == "sigma" and sigma_target is not None:
                ye = (ye[0], ye[1], sigma_target)
            s += t * step
            ss.append(s)
            xs.append(ye[0])
            zs.append(ye[1])
            sgs.append(ye[2])
            break

        y, f = y1, f1
        s += step
        ss.append(s)
        xs.append(y[0])
        zs.append(y[1])
        sgs.append(y[2])

    sigma = np.array(sgs)
    closure = Closure.truncated
    defect: Optional[float] = None
    if event == "sigma" and sigma_target is not None and math.isclose(abs(sigma_target) % (2 * math.pi), math.pi):
        defect = xs[-1]
        if defect < closure_tol:
            closure = Closure.closed_sphere
    elif event is None and _is_equilibrium(rhs, initial):
        closure = Closure.equilibrium_cylinder
    elif event in (None, "sigma") and np.all(np.cos(sigma[:-1]) > 0.0):
        # a vertical end point still bounds a graph
        closure = Closure.graph_arc

    return ProfileCurve(
        s=np.array(ss),
        x=np.array(xs),
        z=np.array(zs),
        sigma=sigma,
        kappa=as_kappa(k),
        prescription=describe(H),
        closure=closure,
        step=step,
        event=event,
        closure_defect=defect,
    )


# ---------------------------------------------------------------------------
# Spheres and caps
# ---------------------------------------------------------------------------


def _pole_start(H: PrescribedFunction, step: float) -> tuple[ProfileState, ProfileState]:
    """Axis sample and regularized start at s₀ = ε = 10·step.

    σ'(0) = H(1) at the lower pole, so x ≈ s, σ ≈ H(1)s, z ≈ H(1)s²/2;
    integration starts at z = 0 and the pole sample sits below it.
    """
    eps = AXIS_GUARD_STEPS * step
    h1 = H.scalar(1.0)
    pole = ProfileState(x=0.0, z=-0.5 * h1 * eps * eps, sigma=0.0, s=0.0)
    start = ProfileState(x=eps, z=0.0, sigma=h1 * eps, s=eps)
    return pole, start


def _with_samples(curve: ProfileCurve, head: Optional[ProfileState], tail: Optional[ProfileState], **update) -> ProfileCurve:
    parts = [curve.s, curve.x, curve.z, curve.sigma]
    arrays = []
    for i, name in enumerate(("s", "x", "z", "sigma")):
        chunks = []
        if head is not None:
            chunks.append([getattr(head, name)])
        chunks.append(parts[i])
        if tail is not None:
            chunks.append([getattr(tail, name)])
        arrays.append(np.concatenate(chunks))
    return curve.model_copy(update={"s": arrays[0], "x": arrays[1], "z": arrays[2], "sigma": arrays[3], **update})


def _shoot_sphere(H: PrescribedFunction, k: int, step: float, max_arclength: float) -> ProfileCurve:
    settings = get_settings()
    pole, start = _pole_start(H, step)
    curve = integrate_profile(H, k, start, max_arclength, step)
    last = curve.state(len(curve) - 1)

    if curve.event == "axis":
        # Mirror of the start series at the upper pole: σ' = H(-1), x ≈ distance to the pole.
        h_top = H.scalar(-1.0)
        defect = abs(last.x - (math.pi - last.sigma) / h_top)
        top = ProfileState(x=0.0, z=last.z + 0.5 * h_top * last.x * last.x, sigma=math.pi, s=last.s + last.x)
    elif curve.event == "sigma" and curve.closure_defect is not None:
        defect = curve.closure_defect
        top = ProfileState(x=0.0, z=last.z, sigma=math.pi, s=last.s + max(last.x, 1e-300))
    else:
        return _with_samples(curve, pole, None, closure=Closure.truncated, closure_defect=math.inf)

    closure = Closure.closed_sphere if defect <= settings.closure_tol else Closure.truncated
    return _with_samples(curve, pole, top, closure=closure, closure_defect=defect)


def build_sphere(
    H: PrescribedFunction,
    kappa: Kappa | int,
    step: Optional[float] = None,
    *,
    max_arclength: float = 40.0,
) -> ProfileCurve:
    """Shoot the rotational H-sphere from the lower pole.

    Requires H in C¹_κ,even. The profile runs from the lower pole (σ = 0) to
    the upper pole (σ = π). If the closure defect (x where σ reaches π)
    exceeds ``closure_tol`` the step is halved, up to ``refinements`` times.
    """
    k = as_kappa(kappa)
    report = validate_class(H, k)
    if not report.in_c1k_even:
        raise ClassViolationError(
            f"H-sphere needs H in C1_kappa_even (even={report.even}, margin={report.margin_even:.6g} at y={report.witness_even:.6g})"
        )
    settings = get_settings()
    h = settings.default_step if step is None else step
    defect = math.inf
    for attempt in range(settings.refinements + 1):
        curve = _shoot_sphere(H, k.value, h, max_arclength)
        if curve.closure == Closure.closed_sphere:
            logger.debug("sphere closed: step=%g x_max=%.12g height=%.12g", h, curve.x_max, curve.height)
            return curve
        defect = curve.closure_defect if curve.closure_defect is not None else math.inf
        logger.warning("sphere did not close at step %g (defect %.3g), refining", h, defect)
        h *= 0.5
    raise NonClosureError(f"profile misses the axis by {defect:.3g} at sigma=pi", defect=defect)


def lower_cap(H: PrescribedFunction, kappa: Kappa | int, step: Optional[float] = None, *, max_arclength: float = 40.0) -> ProfileCurve:
    """Profile from the lower pole to the first vertical point (σ = π/2).

    This is the maximal rotational graph: ``x_max`` is its radius R* and
    ``height`` its depth. If σ never reaches π/2 the curve ends at
    ``max_arclength`` (or the chart bound) and ``event`` is not ``"sigma"``.
    """
    k = as_kappa(kappa).value
    if H.scalar(1.0) <= 0.0:
        raise PreconditionError("lower cap needs H(1) > 0")
    h = get_settings().default_step if step is None else step
    pole, start = _pole_start(H, h)
    curve = integrate_profile(H, k, start, max_arclength, h, sigma_period=0.5 * math.pi)
    return _with_samples(curve, pole, None)


# ---------------------------------------------------------------------------
# First integral (constant H)
# ---------------------------------------------------------------------------


def first_integral(kappa: Kappa | int, H0: float, state: ProfileState) -> float:
    """J = sn_κ(x) sin σ + (2H₀/κ) cs_κ(x), conserved along constant-H₀ profiles."""
    k = as_kappa(kappa).value
    sn, cs = spaceform.scalar_trig(k)
    return sn(state.x) * math.sin(state.sigma) + (2.0 * H0 / k) * cs(state.x)


def first_integral_values(curve: ProfileCurve, H0: float) -> np.ndarray:
    k = curve.kappa.value
    return spaceform.sn(k, curve.x) * np.sin(curve.sigma) + (2.0 * H0 / k) * spaceform.cs(k, curve.x)


def first_integral_drift(curve: ProfileCurve, H0: float) -> float:
    """max |J - J(pole)| along the curve, J(pole) = 2H₀/κ."""
    return float(np.max(np.abs(first_integral_values(curve, H0) - 2.0 * H0 / curve.kappa.value)))


# ---------------------------------------------------------------------------
# Cylinders
# ---------------------------------------------------------------------------


def cylinder_radius(H: PrescribedFunction, kappa: Kappa | int) -> float:
    """Radius ρ of the vertical H-cylinder: ct_κ(ρ) = 2H(0), by bisection to 1e-12."""
    k = as_kappa(kappa).value
    target = 2.0 * H.scalar(0.0)
    if k == -1 and target <= 1.0:
        raise NoSolutionError("coth > 1")
    if k == 1 and target <= 0.0:
        raise NoSolutionError("cot needs 2H(0) > 0")

    def f(rho: float) -> float:
        return float(spaceform.ct(k, rho)) - target

    lo = min(1e-12, 0.25 / target)
    hi = 0.5 * math.pi if k == 1 else 1.0
    while k == -1 and f(hi) > 0.0:
        hi *= 2.0
    return float(bisect(f, lo, hi, xtol=1e-12, rtol=4 * np.finfo(float).eps, maxiter=200))


def cylinder_profile(H: PrescribedFunction, kappa: Kappa | int, length: float = 1.0, step: Optional[float] = None) -> ProfileCurve:
    """The vertical cylinder over the circle of radius :func:`cylinder_radius`, as a profile."""
    rho = cylinder_radius(H, kappa)
    h = get_settings().default_step if step is None else step
    return integrate_profile(H, kappa, ProfileState(x=rho, z=0.0, sigma=0.5 * math.pi, s=0.0), length, h)


# ---------------------------------------------------------------------------
# Phase plane
# ---------------------------------------------------------------------------


def classify_equilibrium(A: np.ndarray, tol: float = 1e-8) -> str:
    """Linear type of a planar equilibrium from the eigenvalues of its Jacobian."""
    eig = np.linalg.eigvals(A)
    re, im = eig.real, eig.imag
    if np.any(re > tol) and np.any(re < -tol):
        return "saddle"
    if np.all(np.abs(im) < tol):
        if np.all(re < -tol):
            return "stable node"
        if np.all(re > tol):
            return "unstable node"
        return "degenerate"
    if np.all(np.abs(re) < tol):
        return "center"
    return "stable focus" if np.all(re < -tol) else "unstable focus"


def _phase_field(H: PrescribedFunction, k: int):
    sn, cs = spaceform.scalar_trig(k)

    def field(x: float, sigma: float) -> np.ndarray:
        c, s = math.cos(sigma), math.sin(sigma)
        return np.array([c, 2.0 * H.scalar(c) - cs(x) / sn(x) * s])

    def jacobian(x: float, sigma: float) -> np.ndarray:
        c, s = math.cos(sigma), math.sin(sigma)
        snx = sn(x)
        return np.array(
            [
                [0.0, -s],
                [s / (snx * snx), -2.0 * float(H.deriv(c)) * s - cs(x) / snx * c],
            ]
        )

    return field, jacobian


def _newton(field, jacobian, x: float, sigma: float, box: tuple[float, float, float, float]) -> Optional[tuple[float, float]]:
    """Newton from (x, σ); None when an iterate leaves ``box`` = (x_lo, x_hi, σ_lo, σ_hi) or does not converge."""
    x_lo, x_hi, s_lo, s_hi = box

    def inside(q: np.ndarray) -> bool:
        return x_lo < q[0] < x_hi and s_lo <= q[1] <= s_hi

    p = np.array([x, sigma])
    try:
        for _ in range(60):
            if not inside(p):
                return None
            F = field(p[0], p[1])
            try:
                dp = np.linalg.solve(jacobian(p[0], p[1]), -F)
            except np.linalg.LinAlgError:
                return None
            p = p + dp
            if np.max(np.abs(dp)) < 1e-15 * max(1.0, np.max(np.abs(p))):
                break
        if not inside(p):
            return None
        F = field(p[0], p[1])
    except OverflowError:
        return None
    if not np.all(np.isfinite(F)) or np.max(np.abs(F)) > EQUILIBRIUM_TOL:
        return None
    return float(p[0]), float(p[1])


def phase_plane(
    H: PrescribedFunction,
    kappa: Kappa | int,
    window: tuple[tuple[float, float], tuple[float, float]],
    seeds: int = 0,
    *,
    grid: int = 12,
    orbit_length: float = 5.0,
    orbit_step: float = 1e-2,
    threads: Optional[int] = None,
) -> PhasePlaneReport:
    """Equilibria and sample orbits of (x', σ') = (cos σ, 2H(cos σ) - ct_κ(x) sin σ).

    Equilibria come from Newton iteration started on a ``grid``×``grid`` lattice
    over the window; they sit at σ = ±π/2 with ct_κ(x) = ±2H(0). Orbits start
    from ``seeds`` lattice points and are integrated concurrently.
    """
    k = as_kappa(kappa).value
    (x_lo, x_hi), (s_lo, s_hi) = window
    bound = spaceform.chart_bound(k)
    if not (0.0 < x_lo < x_hi) or (k == 1 and x_hi >= bound):
        raise DomainError(f"x-range ({x_lo}, {x_hi}) must lie in (0, {bound:g})")
    if not s_lo < s_hi:
        raise DomainError("sigma-range must be increasing")

    field, jacobian = _phase_field(H, k)
    # iterates may overshoot the window by a tenth of its size, never the chart
    dx, ds = 0.1 * (x_hi - x_lo), 0.1 * (s_hi - s_lo)
    box = (max(0.5 * x_lo, x_lo - dx), min(bound, x_hi + dx), s_lo - ds, s_hi + ds)
    found: list[tuple[float, float]] = []
    for x0 in np.linspace(x_lo, x_hi, grid + 2)[1:-1]:
        for s0 in np.linspace(s_lo, s_hi, grid + 2)[1:-1]:
            root = _newton(field, jacobian, float(x0), float(s0), box)
            if root is None:
                continue
            xr, sr = root
            if not (x_lo < xr < x_hi and s_lo < sr < s_hi):
                continue
            if any(abs(xr - xe) < 1e-8 and abs(sr - se) < 1e-8 for xe, se in found):
                continue
            found.append(root)
    found.sort()

    equilibria = []
    for xr, sr in found:
        A = jacobian(xr, sr)
        eig = np.linalg.eigvals(A)
        equilibria.append(
            Equilibrium(
                x=xr,
                sigma=sr,
                branch="+" if math.sin(sr) > 0.0 else "-",
                classification=classify_equilibrium(A),
                eigenvalues=[(float(e.real), float(e.imag)) for e in eig],
            )
        )

    try:
        rho: Optional[float] = cylinder_radius(H, k)
    except NoSolutionError:
        rho = None

    orbits: list[list[tuple[float, float]]] = []
    if seeds > 0:
        side = math.ceil(math.sqrt(seeds))
        lattice = [
            (float(xa), float(sa))
            for xa in np.linspace(x_lo, x_hi, side + 2)[1:-1]
            for sa in np.linspace(s_lo, s_hi, side + 2)[1:-1]
        ][:seeds]

        def orbit(seed: tuple[float, float]) -> list[tuple[float, float]]:
            try:
                c = integrate_profile(H, k, ProfileState(x=seed[0], sigma=seed[1]), orbit_length, orbit_step)
            except PMCError as exc:
                logger.warning("orbit from %s abandoned: %s", seed, exc.reason)
                return [seed]
            return list(zip(c.x.tolist(), c.sigma.tolist()))

        orbits = parallel_map(orbit, lattice, threads)

    return PhasePlaneReport(equilibria=equilibria, cylinder_radius=rho, orbit_samples=orbits)


# ---------------------------------------------------------------------------
# CMC sphere diameter
# ---------------------------------------------------------------------------


def profile_diameter(curve: ProfileCurve, max_points: int = 1500) -> float:
    """Max ambient distance over sample pairs in one meridian plane (Δθ ∈ {0, π})."""
    n = len(curve)
    stride = max(1, math.ceil(n / max_points))
    idx = set(range(0, n, stride))
    idx.update({0, n - 1, int(np.argmax(curve.x))})
    sel = np.array(sorted(idx))
    r = curve.x[sel]
    z = curve.z[sel]
    k = curve.kappa.value
    dz = z[:, None] - z[None, :]
    best = 0.0
    for opposite in (False, True):
        base = spaceform.meridian_distance(k, r[:, None], r[None, :], opposite)
        best = max(best, float(np.max(np.hypot(base, dz))))
    return best


def cmc_sphere_diameter(H0: float, kappa: Kappa | int, step: Optional[float] = None) -> float:
    """Ambient diameter d(H₀) of the rotational sphere of constant mean curvature H₀."""
    k = as_kappa(kappa)
    if not cmc_admissible(H0, k):
        raise ClassViolationError(f"CMC sphere needs 4*H0 > 1-kappa, got 4*H0={4 * H0:.6g}")
    return profile_diameter(build_sphere(constant(H0), k, step))
