"""solve-radial, solve-disk and verify subcommands."""

from typing import Any

from apps.cli.output import export_mesh
from core import storage
from core.errors import UsageError
from geometry.graphs import radial_from_profile, residual_disk, residual_radial, solve_disk, solve_radial
from geometry.prescribed import parse_prescription
from schemas.run_config import RunConfig


def radial(config: RunConfig) -> dict[str, Any]:
    H = parse_prescription(config.prescription)
    graph = solve_radial(H, config.kappa, config.R, config.step)
    written = []
    if config.out is not None:
        written.append(str(storage.write_radial_csv(graph, config.out, config.digits)))
    written += export_mesh(config, graph)
    return {"R": graph.R, "depth": graph.depth, "min_nu": float(graph.nu.min()), "samples": int(graph.r.size), "written": written}


def disk(config: RunConfig) -> dict[str, Any]:
    if config.mesh is not None:
        raise UsageError("solve-disk writes no mesh; --mesh applies to rotational surfaces and radial graphs")
    H = parse_prescription(config.prescription)
    if config.boundary is not None:
        boundary = storage.boundary_on_grid(storage.read_boundary_json(config.boundary), config.ntheta)
    else:
        boundary = config.g
    graph = solve_disk(
        H,
        config.kappa,
        config.R,
        boundary,
        config.nr,
        config.ntheta,
        config.tol,
        config.max_iter,
        damping=config.damping,
    )
    written = []
    if config.out is not None:
        written.append(str(storage.write_disk(graph, config.out, config.digits)))
    return {
        "iterations": graph.iterations,
        "residual": graph.residual,
        "u_origin": float(graph.u[0, 0]),
        "written": written,
    }


def verify(config: RunConfig) -> dict[str, Any]:
    """Residual of a written artifact: lower cap of a profile, a radial graph or a disk grid."""
    kind = storage.artifact_kind(config.input)
    if kind == "profile":
        curve = storage.read_profile_csv(config.input)
        graph = radial_from_profile(curve)
        H = parse_prescription(config.prescription or curve.prescription)
        report = residual_radial(graph, H, curve.kappa)
    elif kind == "radial":
        graph = storage.read_radial_csv(config.input)
        H = parse_prescription(config.prescription or graph.prescription)
        report = residual_radial(graph, H, graph.kappa)
    elif kind == "disk":
        grid = storage.read_disk(config.input)
        H = parse_prescription(config.prescription or grid.prescription)
        report = residual_disk(grid, H, grid.kappa)
    else:  # pragma: no cover - artifact_kind rejects others
        raise UsageError(f"cannot verify {kind}")
    written = []
    if config.out is not None:
        written.append(str(storage.write_json(report, config.out)))
    return {"kind": kind, **report.model_dump(mode="json"), "written": written}


HANDLERS = {
    "solve-radial": radial,
    "solve-disk": disk,
    "verify": verify,
}
