"""Triangulated surfaces of revolution from profiles and radial graphs."""

from collections import Counter

import numpy as np

from core.errors import DomainError
from schemas.geometry import Kappa
from schemas.surfaces import ProfileCurve, RadialGraph, TriangleMesh

POLE_TOL = 1e-12


def revolve(kappa: Kappa, x: np.ndarray, z: np.ndarray, ntheta: int = 64) -> TriangleMesh:
    """Rotate the meridian (x_i, z_i) about the axis.

    Samples on the axis become single pole vertices, so a profile running
    from pole to pole gives a closed surface.
    """
    if ntheta < 3:
        raise DomainError("need at least three angular samples")
    x = np.asarray(x, dtype=float)
    z = np.asarray(z, dtype=float)
    if x.size < 2:
        raise DomainError("need at least two meridian samples")
    theta = 2.0 * np.pi * np.arange(ntheta) / ntheta

    vertices: list[np.ndarray] = []
    rings: list[np.ndarray] = []
    count = 0
    for xi, zi in zip(x, z):
        if xi <= POLE_TOL:
            vertices.append(np.array([[0.0, 0.0, zi]]))
            rings.append(np.full(ntheta, count))
            count += 1
        else:
            vertices.append(np.column_stack([np.full(ntheta, xi), theta, np.full(ntheta, zi)]))
            rings.append(count + np.arange(ntheta))
            count += ntheta

    faces: list[np.ndarray] = []
    for a, b in zip(rings[:-1], rings[1:]):
        a1 = np.roll(a, -1)
        b1 = np.roll(b, -1)
        for tri in (np.column_stack([a, a1, b1]), np.column_stack([a, b1, b])):
            keep = (tri[:, 0] != tri[:, 1]) & (tri[:, 1] != tri[:, 2]) & (tri[:, 0] != tri[:, 2])
            faces.append(tri[keep])

    return TriangleMesh(
        vertices=np.vstack(vertices),
        faces=np.vstack(faces).astype(np.int64),
        kappa=kappa,
    )


def mesh_profile(curve: ProfileCurve, ntheta: int = 64) -> TriangleMesh:
    return revolve(curve.kappa, curve.x, curve.z, ntheta)


def mesh_radial(graph: RadialGraph, ntheta: int = 64) -> TriangleMesh:
    return revolve(graph.kappa, graph.r, graph.u, ntheta)


def edge_counts(mesh: TriangleMesh) -> Counter:
    """Number of faces on each undirected edge."""
    f = mesh.faces
    edges = np.sort(np.concatenate([f[:, [0, 1]], f[:, [1, 2]], f[:, [2, 0]]]), axis=1)
    return Counter(map(tuple, edges.tolist()))


def is_watertight(mesh: TriangleMesh) -> bool:
    return all(n == 2 for n in edge_counts(mesh).values())


def boundary_edges(mesh: TriangleMesh) -> list[tuple[int, int]]:
    return sorted(e for e, n in edge_counts(mesh).items() if n == 1)


def is_manifold(mesh: TriangleMesh) -> bool:
    """Every edge on one or two faces and every directed edge used once."""
    if any(n > 2 for n in edge_counts(mesh).values()):
        return False
    f = mesh.faces
    directed = np.concatenate([f[:, [0, 1]], f[:, [1, 2]], f[:, [2, 0]]])
    return len(set(map(tuple, directed.tolist()))) == directed.shape[0]
