"""sphere, cylinder, phase-plane and diameter subcommands."""

import math
from typing import Any

import pandas as pd

from apps.cli.output import export_mesh
from core import storage
from geometry import spaceform
from geometry.prescribed import parse_prescription
from geometry.rotational import build_sphere, cmc_sphere_diameter, cylinder_profile, cylinder_radius, phase_plane
from schemas.run_config import RunConfig
from workers.pool import parallel_map


def sphere(config: RunConfig) -> dict[str, Any]:
    H = parse_prescription(config.prescription)
    curve = build_sphere(H, config.kappa, config.step)
    written = []
    if config.out is not None:
        written.append(str(storage.write_profile_csv(curve, config.out, config.digits)))
    written += export_mesh(config, curve)
    return {
        "closure": curve.closure.value,
        "x_max": curve.x_max,
        "height": curve.height,
        "closure_defect": curve.closure_defect,
        "samples": len(curve),
        "written": written,
    }


def cylinder(config: RunConfig) -> dict[str, Any]:
    H = parse_prescription(config.prescription)
    rho = cylinder_radius(H, config.kappa)
    written = []
    if config.out is not None or config.mesh is not None:
        curve = cylinder_profile(H, config.kappa, step=config.step)
        if config.out is not None:
            written.append(str(storage.write_profile_csv(curve, config.out, config.digits)))
        written += export_mesh(config, curve)
    return {"radius": rho, "geodesic_curvature": float(spaceform.ct(config.kappa, rho)), "written": written}


def phase(config: RunConfig) -> dict[str, Any]:
    H = parse_prescription(config.prescription)
    if config.x_range is not None:
        x_range = config.x_range
    elif config.kappa == 1:
        x_range = (0.05, math.pi - 0.05)
    else:
        x_range = (0.05, 3.0)
    report = phase_plane(H, config.kappa, (x_range, config.sigma_range), config.seeds, threads=config.threads)
    written = []
    if config.out is not None:
        written.append(str(storage.write_json(report, config.out)))
    return {**report.model_dump(mode="json", exclude={"orbit_samples"}), "orbits": len(report.orbit_samples), "written": written}


def diameter(config: RunConfig) -> dict[str, Any]:
    values = parallel_map(lambda h0: cmc_sphere_diameter(h0, config.kappa, config.step), config.H0, config.threads)
    frame = pd.DataFrame({"H0": config.H0, "d": values})
    written = []
    if config.out is not None:
        written.append(str(storage.write_frame_csv(frame, config.out, config.digits)))
    return {"kappa": config.kappa, "diameters": frame.to_dict(orient="records"), "written": written}


HANDLERS = {
    "sphere": sphere,
    "cylinder": cylinder,
    "phase-plane": phase,
    "diameter": diameter,
}
