"""Small argument checks shared by the public entry points."""

from __future__ import annotations

import math
from dataclasses import dataclass
from numbers import Real

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class ComplexPoint:
    """A point ``sigma + i t`` of the complex plane."""

    sigma: float
    t: float

    def __post_init__(self):
        if not (math.isfinite(self.sigma) and math.isfinite(self.t)):
            raise DomainError(f"non-finite point ({self.sigma}, {self.t})")

    @property
    def s(self) -> complex:
        return complex(self.sigma, self.t)

    def conjugate(self) -> ComplexPoint:
        return ComplexPoint(self.sigma, -self.t)

    def __complex__(self):
        return self.s


def as_point(s) -> ComplexPoint:
    """Coerce a ComplexPoint, complex, real or ``(sigma, t)`` pair."""
    if isinstance(s, ComplexPoint):
        return s
    if isinstance(s, (tuple, list)) and len(s) == 2:
        return ComplexPoint(float(s[0]), float(s[1]))
    z = complex(s)
    return ComplexPoint(z.real, z.imag)


def as_complex_array(s) -> np.ndarray:
    """Complex ndarray view of ``s`` with finiteness enforced."""
    arr = np.asarray(s, dtype=complex)
    if not np.all(np.isfinite(arr)):
        raise DomainError("non-finite entries in evaluation points")
    return arr


def check_positive(name: str, value, *, strict: bool = True) -> float:
    if not isinstance(value, Real) or not math.isfinite(value):
        raise DomainError(f"{name} must be a finite real, got {value!r}")
    if value < 0 or (strict and value == 0):
        raise DomainError(f"{name} must be {'>' if strict else '>='} 0, got {value}")
    return float(value)


def check_open_interval(name: str, value, lo: float, hi: float) -> float:
    if not isinstance(value, Real) or not (lo < value < hi):
        raise DomainError(f"{name} must lie in ({lo}, {hi}), got {value!r}")
    return float(value)


def check_weight_exponents(lam, p) -> tuple[float, float]:
    if not isinstance(lam, Real) or not math.isfinite(lam) or lam < 2:
        raise DomainError(f"lambda must be >= 2, got {lam!r}")
    return float(lam), check_open_interval("p", p, 0.0, 1.0)
