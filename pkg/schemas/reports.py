"""Report schemas returned by validators, analyses and probes."""

from enum import Enum
from typing import Any, Optional

from pydantic import BaseModel, Field

from schemas.geometry import Kappa


class ClassReport(BaseModel):
    """Membership of a prescription in the admissibility classes for a given κ.

    ``margin``/``witness`` refer to the bound 4H(y) > 1-κ; the ``_even``
    fields to 4H(y) > (1-κ)√(1-y²).
    """

    kappa: Kappa
    in_c1k: bool
    in_c1k_even: bool
    even: bool
    margin: float
    witness: float = Field(ge=-1.0, le=1.0)
    margin_even: float
    witness_even: float = Field(ge=-1.0, le=1.0)


class Equilibrium(BaseModel):
    x: float
    sigma: float
    branch: str  # "+" for σ = π/2, "-" for σ = -π/2
    classification: str
    eigenvalues: list[tuple[float, float]]  # (real, imag)


class PhasePlaneReport(BaseModel):
    equilibria: list[Equilibrium] = Field(default_factory=list)
    cylinder_radius: Optional[float] = None
    orbit_samples: list[list[tuple[float, float]]] = Field(default_factory=list)
    sign_convention: str = "branch '+': sigma=pi/2, ct(x)=2H(0); branch '-': sigma=-pi/2, ct(x)=-2H(0)"


class ResidualReport(BaseModel):
    max_residual: float = Field(ge=0.0)
    mean_residual: float = Field(ge=0.0)
    worst_point: dict[str, float]
    nu_range: tuple[float, float]


class Verdict(str, Enum):
    bounded = "bounded"
    growing = "growing"
    inconclusive = "inconclusive"


class HeightProbeReport(BaseModel):
    """Cap depths |u(0)| against disk radius for a family of radial caps."""

    prescription: dict[str, Any]
    kappa: Kappa
    radii: list[float]
    heights: list[float]
    R_star: Optional[float] = None
    C_empirical: float
    bounded_verdict: Verdict
    comparison_height: Optional[float] = None
    in_c1k_even: bool = False
    # even class only: the H-sphere and the vertical cylinder it must enclose
    sphere_equator_radius: Optional[float] = None
    sphere_diameter: Optional[float] = None
    cylinder_radius: Optional[float] = None


class ConfinementReport(BaseModel):
    H0: float
    min_H: float
    d: float = Field(gt=0.0)
    slab_width: float
    cylinder_radius_bound: Optional[float] = None
