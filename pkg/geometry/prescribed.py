"""Prescription functions H: [-1, 1] -> R and their admissibility classes.

The classes are

    C¹_κ       : 4H(y) > 1 - κ               for all y in [-1, 1]
    C¹_κ,even  : H even, 4H(y) > (1 - κ)√(1 - y²)

checked with strict inequality on a uniform grid.
"""

import json
import math
from collections.abc import Callable
from typing import Any

import numpy as np
from pydantic import BaseModel, PrivateAttr, TypeAdapter, ValidationError
from scipy.interpolate import PchipInterpolator

from core.errors import UsageError
from schemas.geometry import Kappa, as_kappa
from schemas.prescription import (
    ConstantSpec,
    EvenPolySpec,
    LinearSpec,
    PolySpec,
    PrescriptionSpec,
    TableSpec,
)
from schemas.reports import ClassReport

PARITY_GRID = np.linspace(-1.0, 1.0, 1001)
CLASS_GRID = np.linspace(-1.0, 1.0, 2001)
PARITY_TOL = 1e-12

_spec_adapter: TypeAdapter = TypeAdapter(PrescriptionSpec)


class PrescribedFunction(BaseModel):
    """Evaluator for H(y) on [-1, 1] with derivative and parity flag. Immutable."""

    spec: PrescriptionSpec
    even: bool = False

    model_config = {"frozen": True}

    _eval: Callable[[np.ndarray], np.ndarray] = PrivateAttr()
    _deriv: Callable[[np.ndarray], np.ndarray] = PrivateAttr()
    _scalar: Callable[[float], float] = PrivateAttr()

    def __call__(self, y: float | np.ndarray) -> float | np.ndarray:
        if np.ndim(y) == 0:
            return self._scalar(float(y))
        return self._eval(np.asarray(y, dtype=float))

    def deriv(self, y: float | np.ndarray) -> float | np.ndarray:
        out = self._deriv(np.asarray(y, dtype=float))
        return float(out) if np.ndim(y) == 0 else out

    def scalar(self, y: float) -> float:
        """Fast path for inner integration loops."""
        return self._scalar(y)


# ---------------------------------------------------------------------------
# Builders
# ---------------------------------------------------------------------------


def _horner(coeffs: list[float]) -> Callable[[float], float]:
    rev = list(reversed(coeffs))

    def value(y: float) -> float:
        acc = 0.0
        for c in rev:
            acc = acc * y + c
        return acc

    return value


def _evaluators(spec: Any) -> tuple[Callable, Callable, Callable]:
    if isinstance(spec, ConstantSpec):
        v = float(spec.value)
        return (
            lambda y: np.full_like(y, v, dtype=float),
            lambda y: np.zeros_like(y, dtype=float),
            lambda y: v,
        )
    if isinstance(spec, LinearSpec):
        return (lambda y: np.array(y, dtype=float), lambda y: np.ones_like(y, dtype=float), lambda y: y)
    if isinstance(spec, (PolySpec, EvenPolySpec)):
        if isinstance(spec, EvenPolySpec):
            coeffs = [0.0] * (2 * len(spec.coeffs) - 1)
            coeffs[::2] = spec.coeffs
        else:
            coeffs = list(spec.coeffs)
        poly = np.polynomial.Polynomial(coeffs)
        dpoly = poly.deriv()
        return (lambda y: poly(y), lambda y: dpoly(y), _horner(coeffs))
    if isinstance(spec, TableSpec):
        ys = np.array([n[0] for n in spec.nodes])
        hs = np.array([n[1] for n in spec.nodes])
        interp = PchipInterpolator(ys, hs, extrapolate=True)
        dinterp = interp.derivative()
        return (lambda y: interp(y), lambda y: dinterp(y), lambda y: float(interp(y)))
    raise UsageError(f"unsupported prescription type {type(spec).__name__}")


def _build(spec: Any) -> PrescribedFunction:
    value, deriv, scalar = _evaluators(spec)
    sampled = value(PARITY_GRID)
    if not (np.all(np.isfinite(sampled)) and np.all(np.isfinite(deriv(PARITY_GRID)))):
        raise UsageError("prescription is not finite on [-1, 1]")
    even = bool(np.max(np.abs(sampled - value(-PARITY_GRID))) <= PARITY_TOL)
    H = PrescribedFunction(spec=spec, even=even)
    H._eval = value
    H._deriv = deriv
    H._scalar = scalar
    return H


def parse_prescription(text: "str | dict[str, Any] | PrescribedFunction") -> PrescribedFunction:
    """Parse a JSON descriptor (string or decoded dict) into an evaluator."""
    if isinstance(text, PrescribedFunction):
        return text
    if isinstance(text, str):
        try:
            payload = json.loads(text)
        except json.JSONDecodeError as exc:
            raise UsageError(f"malformed prescription JSON: {exc.msg}") from None
    else:
        payload = text
    if not isinstance(payload, dict):
        raise UsageError("prescription must be a JSON object")
    try:
        spec = _spec_adapter.validate_python(payload)
    except ValidationError as exc:
        first = exc.errors()[0]
        where = ".".join(str(p) for p in first.get("loc", ()))
        raise UsageError(f"invalid prescription ({where}): {first.get('msg')}") from None
    return _build(spec)


def constant(value: float) -> PrescribedFunction:
    return _build(ConstantSpec(value=value))


def describe(H: PrescribedFunction) -> dict[str, Any]:
    """Canonical descriptor; parse_prescription(describe(H)) rebuilds H."""
    return H.spec.model_dump(mode="json")


def minimum(H: PrescribedFunction) -> float:
    return float(np.min(H(CLASS_GRID)))


# ---------------------------------------------------------------------------
# Class validation
# ---------------------------------------------------------------------------


def validate_class(H: PrescribedFunction, kappa: Kappa | int) -> ClassReport:
    """Membership in C¹_κ and C¹_κ,even. Reports, never raises on non-membership."""
    k = as_kappa(kappa)
    y = CLASS_GRID
    values = 4.0 * H(y)
    slack = values - (1 - k.value)
    slack_even = values - (1 - k.value) * np.sqrt(1.0 - y * y)
    i = int(np.argmin(slack))
    j = int(np.argmin(slack_even))
    margin = float(slack[i])
    margin_even = float(slack_even[j])
    return ClassReport(
        kappa=k,
        in_c1k=margin > 0.0,
        in_c1k_even=H.even and margin_even > 0.0,
        even=H.even,
        margin=margin,
        witness=float(y[i]),
        margin_even=margin_even,
        witness_even=float(y[j]),
    )


def cmc_admissible(H0: float, kappa: Kappa | int) -> bool:
    """4H₀ > 1 - κ: a constant prescription in C¹_κ."""
    return 4.0 * H0 > 1 - as_kappa(kappa).value and math.isfinite(H0)
