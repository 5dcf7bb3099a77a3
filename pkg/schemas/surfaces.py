"""Sampled surface schemas: rotational profiles, radial graphs, disk graphs."""

from enum import Enum
from typing import Any, Optional

import numpy as np
from pydantic import BaseModel, Field

from schemas.geometry import Kappa


class Closure(str, Enum):
    """How a profile integration ended."""

    closed_sphere = "closed-sphere"
    equilibrium_cylinder = "equilibrium-cylinder"
    graph_arc = "graph-arc"
    truncated = "truncated"


class ProfileState(BaseModel):
    """One point of a rotational profile: distance to axis, height, tangent angle, arclength."""

    x: float
    z: float = 0.0
    sigma: float = 0.0
    s: float = 0.0

    model_config = {"frozen": True}

    @property
    def nu(self) -> float:
        return float(np.cos(self.sigma))


class ProfileCurve(BaseModel):
    """Arclength-sampled rotational profile (x(s), z(s), σ(s)), ν = cos σ."""

    s: np.ndarray
    x: np.ndarray
    z: np.ndarray
    sigma: np.ndarray
    kappa: Kappa
    prescription: dict[str, Any]
    closure: Closure
    step: float
    event: Optional[str] = None
    closure_defect: Optional[float] = None

    model_config = {"arbitrary_types_allowed": True}

    @property
    def nu(self) -> np.ndarray:
        return np.cos(self.sigma)

    @property
    def x_max(self) -> float:
        return float(np.max(self.x))

    @property
    def height(self) -> float:
        return float(self.z[-1] - self.z[0])

    def __len__(self) -> int:
        return int(self.s.size)

    def state(self, i: int) -> ProfileState:
        return ProfileState(x=float(self.x[i]), z=float(self.z[i]), sigma=float(self.sigma[i]), s=float(self.s[i]))


class RadialGraph(BaseModel):
    """Rotationally symmetric graph u(r) over the geodesic disk of radius R."""

    R: float
    r: np.ndarray
    u: np.ndarray
    phi: np.ndarray  # flux sn(r) u'/W
    nu: np.ndarray  # 1/W
    kappa: Kappa
    prescription: dict[str, Any]

    model_config = {"arbitrary_types_allowed": True}

    @property
    def depth(self) -> float:
        return float(-self.u[0])


class DiskGraph(BaseModel):
    """Graph u(r, θ) on the uniform polar grid r_i = i R/nr, θ_j = 2πj/ntheta.

    ``u`` has shape (nr + 1, ntheta); row 0 is the origin (all entries equal)
    and row nr is the boundary data.
    """

    R: float
    nr: int
    ntheta: int
    u: np.ndarray
    boundary: np.ndarray
    iterations: int
    residual: float
    kappa: Kappa
    prescription: dict[str, Any]
    residual_history: list[float] = Field(default_factory=list)

    model_config = {"arbitrary_types_allowed": True}

    @property
    def r(self) -> np.ndarray:
        return np.linspace(0.0, self.R, self.nr + 1)

    @property
    def theta(self) -> np.ndarray:
        return 2.0 * np.pi * np.arange(self.ntheta) / self.ntheta


class TriangleMesh(BaseModel):
    """Triangulated surface with vertices in polar coordinates (r, θ, z)."""

    vertices: np.ndarray  # (n, 3)
    faces: np.ndarray  # (m, 3) vertex indices
    kappa: Kappa

    model_config = {"arbitrary_types_allowed": True}

    @property
    def n_vertices(self) -> int:
        return int(self.vertices.shape[0])

    @property
    def n_faces(self) -> int:
        return int(self.faces.shape[0])
