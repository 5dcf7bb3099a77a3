"""Prescription descriptors (JSON) for H: [-1, 1] -> R."""

from typing import Annotated, Literal, Union

from pydantic import BaseModel, Field, field_validator


class _Spec(BaseModel):
    model_config = {"allow_inf_nan": False, "extra": "forbid"}


class ConstantSpec(_Spec):
    type: Literal["constant"] = "constant"
    value: float


class LinearSpec(_Spec):
    """H(y) = y, the translating-soliton prescription."""

    type: Literal["linear"] = "linear"


class PolySpec(_Spec):
    """H(y) = sum a_i y^i."""

    type: Literal["poly"] = "poly"
    coeffs: list[float] = Field(min_length=1)


class EvenPolySpec(_Spec):
    """H(y) = sum a_2i y^2i; coeffs are [a0, a2, a4, ...]."""

    type: Literal["even-poly"] = "even-poly"
    coeffs: list[float] = Field(min_length=1)


class TableSpec(_Spec):
    """Sampled table, interpolated by a monotone cubic (PCHIP)."""

    type: Literal["table"] = "table"
    nodes: list[tuple[float, float]] = Field(min_length=4)

    @field_validator("nodes")
    @classmethod
    def _nodes_in_interval(cls, nodes: list[tuple[float, float]]) -> list[tuple[float, float]]:
        ys = [y for y, _ in nodes]
        if any(y < -1.0 or y > 1.0 for y in ys):
            raise ValueError("table nodes must lie in [-1, 1]")
        if len(set(ys)) != len(ys):
            raise ValueError("table nodes must have distinct y")
        return sorted(nodes)


PrescriptionSpec = Annotated[
    Union[ConstantSpec, LinearSpec, PolySpec, EvenPolySpec, TableSpec],
    Field(discriminator="type"),
]
