"""κ-parametric geometry of M²(κ)×ℝ in geodesic polar coordinates.

All functions take κ as :class:`Kappa` (or ±1) and vectorize over numpy
arrays where that makes sense. The polar chart (r, θ, z) about a fixed
vertical axis is the canonical internal chart; the quadric model

    M²(κ) = {x₁² + x₂² + κx₃² = 1/κ, (1-κ)x₃ > 0}

and the Poincaré disk (κ = -1) are export charts only.
"""

import math
from collections.abc import Callable

import numpy as np

from core.errors import DomainError, UnsupportedChartError, UsageError
from schemas.geometry import CHART_IDS, AmbientPoint, Kappa, as_kappa

ArrayLike = float | np.ndarray


def _k(kappa: Kappa | int) -> int:
    return as_kappa(kappa).value


# ---------------------------------------------------------------------------
# Generalized trigonometric functions
# ---------------------------------------------------------------------------


def sn(kappa: Kappa | int, t: ArrayLike) -> ArrayLike:
    """Solution of sn'' + κ sn = 0 with sn(0)=0, sn'(0)=1: sin t or sinh t."""
    return np.sin(t) if _k(kappa) == 1 else np.sinh(t)


def cs(kappa: Kappa | int, t: ArrayLike) -> ArrayLike:
    """cs = sn': cos t or cosh t."""
    return np.cos(t) if _k(kappa) == 1 else np.cosh(t)


def ct(kappa: Kappa | int, t: ArrayLike) -> ArrayLike:
    """cs/sn: cot t or coth t. Singular at t = 0."""
    k = _k(kappa)
    return cs(k, t) / sn(k, t)


def asn(kappa: Kappa | int, v: ArrayLike) -> ArrayLike:
    """Inverse of sn on its principal branch."""
    return np.arcsin(v) if _k(kappa) == 1 else np.arcsinh(v)


def scalar_trig(kappa: Kappa | int) -> tuple[Callable[[float], float], Callable[[float], float]]:
    """(sn, cs) as plain ``math`` functions for scalar inner loops."""
    if _k(kappa) == 1:
        return math.sin, math.cos
    return math.sinh, math.cosh


def chart_bound(kappa: Kappa | int) -> float:
    """Largest admissible polar radius: π for S², unbounded for H²."""
    return math.pi if _k(kappa) == 1 else math.inf


# ---------------------------------------------------------------------------
# Distances and circles
# ---------------------------------------------------------------------------


def _check_point(k: int, p: AmbientPoint) -> None:
    if k == 1 and p.r > math.pi:
        raise DomainError(f"polar radius {p.r} exceeds the antipodal cut pi on S2")


def _base_embedding(k: int, r: ArrayLike, theta: ArrayLike) -> np.ndarray:
    """Quadric coordinates (x₁, x₂, x₃) of base points, stacked on the last axis."""
    s = sn(k, r)
    return np.stack([s * np.cos(theta), s * np.sin(theta), cs(k, r)], axis=-1)


def base_distance(kappa: Kappa | int, p: AmbientPoint, q: AmbientPoint) -> float:
    """Distance in M²(κ) between the projections of p and q.

    Uses the chord length in the quadric model, d = 2 asn(|X-Y|/2), which is
    the law of cosines without its cancellation at short range.
    """
    k = _k(kappa)
    _check_point(k, p)
    _check_point(k, q)
    diff = _base_embedding(k, p.r, p.theta) - _base_embedding(k, q.r, q.theta)
    # Lorentzian norm for κ = -1 (signature +,+,-); chords between points of
    # the upper sheet are spacelike
    chord2 = diff[0] ** 2 + diff[1] ** 2 + k * diff[2] ** 2
    chord = math.sqrt(max(float(chord2), 0.0))
    if k == 1:
        return 2.0 * math.asin(min(chord / 2.0, 1.0))
    return 2.0 * math.asinh(chord / 2.0)


def ambient_distance(kappa: Kappa | int, p: AmbientPoint, q: AmbientPoint) -> float:
    """Product-metric distance √(d_{M²}(p,q)² + (p.z - q.z)²)."""
    return math.hypot(base_distance(kappa, p, q), p.z - q.z)


def meridian_distance(kappa: Kappa | int, r1: ArrayLike, r2: ArrayLike, opposite: bool) -> ArrayLike:
    """Base distance between points on the same meridian plane.

    ``opposite`` means Δθ = π: the geodesic runs through the axis, so the
    radii add (wrapping past the antipode on S²). Otherwise Δθ = 0 and they
    subtract.
    """
    r1 = np.asarray(r1, dtype=float)
    r2 = np.asarray(r2, dtype=float)
    if not opposite:
        return np.abs(r1 - r2)
    total = r1 + r2
    if _k(kappa) == 1:
        return np.where(total <= math.pi, total, 2.0 * math.pi - total)
    return total


def circle_geodesic_curvature(kappa: Kappa | int, rho: ArrayLike) -> ArrayLike:
    """Inward geodesic curvature ct_κ(ρ) of the geodesic circle of radius ρ."""
    k = _k(kappa)
    rho_arr = np.asarray(rho, dtype=float)
    if np.any(rho_arr <= 0.0):
        raise DomainError("circle radius must be positive")
    if k == 1 and np.any(rho_arr >= math.pi):
        raise DomainError("circle radius must be below pi on S2")
    return ct(k, rho)


def polygon_curvature(kappa: Kappa | int, rho: float, n: int = 1 << 14) -> float:
    """Discrete geodesic curvature of the regular n-gon inscribed in a circle.

    Turning angle per unit length: (π - α)/ℓ with α the interior angle and ℓ
    the side. In the isoceles triangle center-vertex-vertex, cot(α/2) =
    cs(ρ) tan(π/n) and sn(ℓ/2) = sn(ρ) sin(π/n). Converges to ct_κ(ρ) as O(n⁻²).
    """
    k = _k(kappa)
    if rho <= 0.0 or (k == 1 and rho >= math.pi):
        raise DomainError("circle radius out of range")
    half_apex = math.pi / n
    half_alpha = math.atan2(1.0, float(cs(k, rho)) * math.tan(half_apex))
    side = 2.0 * float(asn(k, float(sn(k, rho)) * math.sin(half_apex)))
    return (math.pi - 2.0 * half_alpha) / side


def geodesic_disk_area(kappa: Kappa | int, rho: ArrayLike) -> ArrayLike:
    """Area 2π(1 - cs(ρ))/κ of the geodesic disk, written as 4π sn(ρ/2)²."""
    return 4.0 * np.pi * sn(kappa, np.asarray(rho, dtype=float) / 2.0) ** 2


# ---------------------------------------------------------------------------
# Charts
# ---------------------------------------------------------------------------


def export_chart(kappa: Kappa | int, p: AmbientPoint, chart: str) -> tuple[float, ...]:
    """Coordinates of p in the requested chart.

    quadric       -> (x₁, x₂, x₃, z) on x₁² + x₂² + κx₃² = 1/κ
    poincare-disk -> (tanh(r/2) cos θ, tanh(r/2) sin θ, z), κ = -1 only
    polar         -> (r, θ, z)
    """
    k = _k(kappa)
    if chart not in CHART_IDS:
        raise UsageError(f"unknown chart {chart!r}; expected one of {', '.join(CHART_IDS)}")
    _check_point(k, p)
    if chart == "polar":
        return (p.r, p.theta, p.z)
    if chart == "poincare-disk":
        if k != -1:
            raise UnsupportedChartError("poincare-disk chart exists only for kappa=-1")
        rho = math.tanh(p.r / 2.0)
        return (rho * math.cos(p.theta), rho * math.sin(p.theta), p.z)
    x1, x2, x3 = (float(c) for c in _base_embedding(k, p.r, p.theta))
    return (x1, x2, x3, p.z)


def import_chart(kappa: Kappa | int, coords: tuple[float, ...], chart: str) -> AmbientPoint:
    """Inverse of :func:`export_chart`."""
    k = _k(kappa)
    if chart not in CHART_IDS:
        raise UsageError(f"unknown chart {chart!r}")
    if chart == "polar":
        r, theta, z = coords
        return AmbientPoint(r=r, theta=theta, z=z)
    if chart == "poincare-disk":
        if k != -1:
            raise UnsupportedChartError("poincare-disk chart exists only for kappa=-1")
        u, v, z = coords
        rho = math.hypot(u, v)
        if rho >= 1.0:
            raise DomainError("point outside the Poincare disk")
        return AmbientPoint(r=2.0 * math.atanh(rho), theta=math.atan2(v, u), z=z)
    x1, x2, x3, z = coords
    planar = math.hypot(x1, x2)
    r = math.atan2(planar, x3) if k == 1 else math.asinh(planar)
    return AmbientPoint(r=r, theta=math.atan2(x2, x1), z=z)


def quadric_defect(kappa: Kappa | int, coords: np.ndarray) -> np.ndarray:
    """|x₁² + x₂² + κx₃² - 1/κ| per row of an (n, ≥3) coordinate array."""
    k = _k(kappa)
    c = np.atleast_2d(np.asarray(coords, dtype=float))
    return np.abs(c[:, 0] ** 2 + c[:, 1] ** 2 + k * c[:, 2] ** 2 - 1.0 / k)


def export_points(kappa: Kappa | int, r: np.ndarray, theta: np.ndarray, z: np.ndarray, chart: str) -> np.ndarray:
    """Vectorized :func:`export_chart` for mesh vertices; returns an (n, 3|4) array."""
    k = _k(kappa)
    r = np.asarray(r, dtype=float)
    theta = np.asarray(theta, dtype=float)
    z = np.asarray(z, dtype=float)
    if chart not in CHART_IDS:
        raise UsageError(f"unknown chart {chart!r}")
    if k == 1 and np.any(r > math.pi):
        raise DomainError("polar radius exceeds the antipodal cut pi on S2")
    if chart == "polar":
        return np.column_stack([r, theta, z])
    if chart == "poincare-disk":
        if k != -1:
            raise UnsupportedChartError("poincare-disk chart exists only for kappa=-1")
        rho = np.tanh(r / 2.0)
        return np.column_stack([rho * np.cos(theta), rho * np.sin(theta), z])
    return np.column_stack([_base_embedding(k, r, theta), z])
