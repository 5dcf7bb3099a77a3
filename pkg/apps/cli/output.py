"""Shared artifact output for subcommands."""

import logging

from core import storage
from geometry.mesh import mesh_profile, mesh_radial
from schemas.run_config import RunConfig
from schemas.surfaces import ProfileCurve, RadialGraph

logger = logging.getLogger(__name__)


def export_mesh(config: RunConfig, surface: ProfileCurve | RadialGraph) -> list[str]:
    """Write the revolved surface to ``config.mesh`` if requested."""
    if config.mesh is None:
        return []
    if isinstance(surface, ProfileCurve):
        mesh = mesh_profile(surface, config.ntheta_mesh)
    else:
        mesh = mesh_radial(surface, config.ntheta_mesh)
    paths = storage.write_obj(mesh, config.mesh, config.chart, config.digits)
    logger.debug("mesh: %d vertices, %d faces -> %s", mesh.n_vertices, mesh.n_faces, config.mesh)
    return [str(p) for p in paths]
