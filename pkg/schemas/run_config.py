"""Run configuration for the pmc command line (flags, optionally merged over a --config file)."""

import math
from pathlib import Path
from typing import Any, Literal, Optional

from pydantic import BaseModel, Field, PositiveFloat, PositiveInt, field_validator, model_validator

from schemas.geometry import ChartId

Command = Literal["sphere", "cylinder", "phase-plane", "solve-radial", "solve-disk", "verify", "heights", "diameter"]


class RunConfig(BaseModel):
    """One pmc invocation. Numeric parameters are positive."""

    model_config = {"extra": "forbid", "allow_inf_nan": False}

    command: Command
    kappa: int = -1
    prescription: Optional[str | dict[str, Any]] = None
    step: Optional[PositiveFloat] = None

    # graphs
    R: Optional[PositiveFloat] = None
    nr: PositiveInt = 64
    ntheta: PositiveInt = 64
    tol: Optional[PositiveFloat] = None
    max_iter: Optional[PositiveInt] = None
    damping: Optional[PositiveFloat] = Field(default=None, le=1.0)
    boundary: Optional[Path] = None
    g: float = 0.0

    # estimates
    radii: list[PositiveFloat] = Field(default_factory=list)
    H0: list[PositiveFloat] = Field(default_factory=list)

    # phase plane
    x_range: Optional[tuple[PositiveFloat, PositiveFloat]] = None
    sigma_range: tuple[float, float] = (-math.pi, math.pi)
    seeds: int = Field(default=0, ge=0)

    # io
    out: Optional[Path] = None
    mesh: Optional[Path] = None
    chart: ChartId = "quadric"
    ntheta_mesh: PositiveInt = 64
    digits: Optional[int] = Field(default=None, ge=1, le=17)
    input: Optional[Path] = None
    threads: Optional[PositiveInt] = None

    @field_validator("kappa")
    @classmethod
    def _kappa(cls, v: int) -> int:
        if v not in (-1, 1):
            raise ValueError("kappa must be -1 or 1")
        return v

    @model_validator(mode="after")
    def _required(self) -> "RunConfig":
        needs_h = {"sphere", "cylinder", "phase-plane", "solve-radial", "solve-disk", "heights"}
        if self.command in needs_h and self.prescription is None:
            raise ValueError(f"{self.command} needs --H")
        if self.command in ("solve-radial", "solve-disk") and self.R is None:
            raise ValueError(f"{self.command} needs --R")
        if self.command == "heights" and not self.radii:
            raise ValueError("heights needs --radii")
        if self.command == "diameter" and not self.H0:
            raise ValueError("diameter needs --H0")
        if self.command == "verify" and self.input is None:
            raise ValueError("verify needs --input")
        return self
