"""Empirical height and confinement quantities for vertical H-graphs.

The uniform height estimate bounds |u| for H-graphs with zero boundary data
by a constant independent of the domain. Here it is probed on the family of
radial caps over disks of growing radius; the reported constant is the sup
over that family only.
"""

import logging
from typing import Optional

import numpy as np
import pandas as pd

from core.config import get_settings
from core.errors import NoSolutionError, PreconditionError, VerticalPointError
from geometry.graphs import maximal_cap, solve_radial
from geometry.prescribed import PrescribedFunction, describe, minimum, validate_class
from geometry.rotational import build_sphere, cmc_sphere_diameter, cylinder_radius, profile_diameter
from schemas.geometry import Kappa, as_kappa
from schemas.reports import ConfinementReport, HeightProbeReport, Verdict
from workers.pool import parallel_map

logger = logging.getLogger(__name__)

STABLE_TOL = 1e-6
GROWTH_INCREMENT = 1e-3
GROWTH_TAIL = 3
SLAB_MARGIN = 1e-9


def _verdict(heights: list[float], reached: bool) -> Verdict:
    if reached:
        return Verdict.bounded
    if len(heights) >= 2 and abs(heights[-1] - heights[-2]) < STABLE_TOL:
        return Verdict.bounded
    tail = np.diff(heights[-(GROWTH_TAIL + 1) :])
    if tail.size and np.all(tail > GROWTH_INCREMENT):
        return Verdict.growing
    return Verdict.inconclusive


def probe_vertical_heights(
    H: PrescribedFunction,
    kappa: Kappa | int,
    radii: list[float],
    step: Optional[float] = None,
    *,
    threads: Optional[int] = None,
) -> HeightProbeReport:
    """Cap depth |u(0)| of the radial solution with u(R) = 0, for each R.

    Radii at or beyond the vertical point R* are replaced by the maximal cap
    over R* and reported as R*. Class membership is reported, not required.
    """
    k = as_kappa(kappa)
    if not radii:
        raise PreconditionError("need at least one radius")
    h = get_settings().probe_step if step is None else step
    ordered = sorted(float(R) for R in radii)

    def depth(R: float) -> Optional[float]:
        try:
            return solve_radial(H, k, R, h).depth
        except VerticalPointError:
            return None

    depths = parallel_map(depth, ordered, threads)

    r_star: Optional[float] = None
    probed: list[float] = []
    heights: list[float] = []
    for R, value in zip(ordered, depths):
        if value is None:
            if r_star is None:
                cap = maximal_cap(H, k, h)
                r_star = cap.R
                probed.append(cap.R)
                heights.append(cap.depth)
            continue
        probed.append(R)
        heights.append(value)

    report = validate_class(H, k)
    comparison = equator = diameter = rho = None
    if report.in_c1k_even:
        sphere = build_sphere(H, k, h)
        comparison = sphere.height / 2.0
        equator = sphere.x_max
        diameter = profile_diameter(sphere)
        try:
            rho = cylinder_radius(H, k)
        except NoSolutionError:
            rho = None
        if rho is not None and not rho < equator:
            logger.warning("cylinder radius %.6g not inside the sphere equator %.6g", rho, equator)
    verdict = _verdict(heights, r_star is not None)
    if verdict == Verdict.inconclusive:
        logger.warning("height probe inconclusive over radii %s", probed)
    return HeightProbeReport(
        prescription=describe(H),
        kappa=k,
        radii=probed,
        heights=heights,
        R_star=r_star,
        C_empirical=max(heights),
        bounded_verdict=verdict,
        comparison_height=comparison,
        in_c1k_even=report.in_c1k_even,
        sphere_equator_radius=equator,
        sphere_diameter=diameter,
        cylinder_radius=rho,
    )


def confinement_quantities(
    H: PrescribedFunction,
    kappa: Kappa | int,
    H0: float,
    probe: Optional[HeightProbeReport] = None,
    step: Optional[float] = None,
) -> ConfinementReport:
    """Diameter of the comparison CMC-H₀ sphere and the slab and cylinder sizes built on it."""
    k = as_kappa(kappa)
    min_h = minimum(H)
    if H0 >= min_h:
        raise PreconditionError(f"H0 >= min H ({H0:g} >= {min_h:.6g})")
    if 4.0 * H0 <= 1 - k.value:
        raise PreconditionError(f"4H0 <= 1-kappa ({4.0 * H0:g} <= {1 - k.value})")
    d = cmc_sphere_diameter(H0, k, get_settings().probe_step if step is None else step)
    return ConfinementReport(
        H0=H0,
        min_H=min_h,
        d=d,
        slab_width=2.0 * d * (1.0 + SLAB_MARGIN),
        cylinder_radius_bound=2.0 * d + 8.0 * probe.C_empirical if probe is not None else None,
    )


def heights_frame(report: HeightProbeReport) -> pd.DataFrame:
    return pd.DataFrame({"R": report.radii, "height": report.heights})
