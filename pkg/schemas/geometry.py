"""Ambient geometry schemas: curvature sign, polar points, chart ids."""

import math
from typing import Literal

from pydantic import BaseModel, Field, field_validator

from core.errors import UsageError

ChartId = Literal["quadric", "poincare-disk", "polar"]
CHART_IDS: tuple[str, ...] = ("quadric", "poincare-disk", "polar")


class Kappa(BaseModel):
    """Curvature sign of the base M²(κ). Only ±1; the flat case is rejected."""

    value: int

    model_config = {"frozen": True}

    @field_validator("value")
    @classmethod
    def _plus_minus_one(cls, v: int) -> int:
        if v not in (-1, 1):
            raise ValueError("kappa must be -1 or +1")
        return v

    def __int__(self) -> int:
        return self.value


def as_kappa(value: "Kappa | int | float | str") -> Kappa:
    """Parse a curvature sign, rejecting anything but ±1."""
    if isinstance(value, Kappa):
        return value
    try:
        number = float(value)
    except (TypeError, ValueError):
        raise UsageError(f"kappa must be -1 or +1, got {value!r}") from None
    if number not in (-1.0, 1.0):
        raise UsageError(f"kappa must be -1 or +1, got {value!r}")
    return Kappa(value=int(number))


class AmbientPoint(BaseModel):
    """Point of M²(κ)×ℝ in geodesic polar coordinates about the rotation axis."""

    r: float = Field(ge=0.0)
    theta: float = 0.0
    z: float = 0.0

    model_config = {"frozen": True}

    @field_validator("theta")
    @classmethod
    def _wrap_theta(cls, v: float) -> float:
        wrapped = math.fmod(v, 2.0 * math.pi)
        if wrapped < 0.0:
            wrapped += 2.0 * math.pi
        # fmod can land exactly on 2π after the shift
        return 0.0 if wrapped >= 2.0 * math.pi else wrapped
