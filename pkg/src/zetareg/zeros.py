"""Critical-line zeros, the Riemann-von Mangoldt count, and synthetic zeros."""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from ._parallel import ordered_map
from ._validation import as_complex_array, check_positive
from .errors import DomainError, Nonconvergence, StepTooCoarseWarning
from .zeta_engine import DEFAULT_CONFIG, EvalConfig, hardy_z_array, zeta_array

MAX_STEP = 0.25
_CHUNK = 2048


@dataclass(frozen=True)
class ZeroRecord:
    index: int
    gamma: float
    bracket_width: float


def _z_values(t: np.ndarray, cfg: EvalConfig) -> np.ndarray:
    chunks = [t[i:i + _CHUNK] for i in range(0, t.size, _CHUNK)]
    parts = ordered_map(lambda c: hardy_z_array(c, cfg)[0], chunks)
    return np.concatenate(parts) if parts else np.zeros(0)


def _sign_change_brackets(t: np.ndarray, z: np.ndarray):
    """Brackets [lo, hi] with a sign change, plus grid points where Z == 0."""
    exact = t[z == 0.0]
    sz = np.sign(z)
    change = (sz[:-1] * sz[1:]) < 0
    return t[:-1][change], t[1:][change], z[:-1][change], exact


def _grid(t_min: float, t_max: float, step: float) -> np.ndarray:
    n = int(math.floor((t_max - t_min) / step + 1e-9))
    grid = t_min + step * np.arange(n + 1)
    if grid[-1] < t_max:
        grid = np.append(grid, t_max)
    return grid


def _count_sign_changes(t_min: float, t_max: float, step: float, cfg: EvalConfig) -> int:
    if t_max <= t_min:
        return 0
    grid = _grid(t_min, t_max, step)
    z = _z_values(grid, cfg)
    lo, _, _, exact = _sign_change_brackets(grid, z)
    # a zero sitting exactly on t_max belongs to the next range
    return lo.size + int(np.count_nonzero(exact < t_max))


def scan_zeros(t_min: float, t_max: float, step: float = 0.1, refine_tol: float = 1e-10,
               cfg: EvalConfig = DEFAULT_CONFIG) -> list[ZeroRecord]:
    """Locate sign changes of Hardy's Z on a grid and refine by bisection.

    Indices are global ranks: when ``t_min > 1`` the zeros in ``[1, t_min)``
    are counted first with the same step so the numbering matches N(T).
    Emits :class:`StepTooCoarseWarning` if ``step`` exceeds 0.25 or two
    located zeros are closer than ``2 * step``.
    """
    if not (1.0 <= t_min < t_max):
        raise DomainError(f"need 1 <= t_min < t_max, got [{t_min}, {t_max}]")
    check_positive("step", step)
    check_positive("refine_tol", refine_tol)
    if step > MAX_STEP:
        warnings.warn(f"scan step {step} exceeds {MAX_STEP}; close pairs may be missed",
                      StepTooCoarseWarning, stacklevel=2)

    grid = _grid(t_min, t_max, step)
    z = _z_values(grid, cfg)
    lo, hi, zlo, exact = _sign_change_brackets(grid, z)
    slo = np.sign(zlo)

    max_iter = 200
    it = 0
    while lo.size and np.max(hi - lo) > refine_tol:
        mid = 0.5 * (lo + hi)
        zm = _z_values(mid, cfg)
        same = np.sign(zm) == slo
        hit = zm == 0.0
        lo = np.where(same & ~hit, mid, lo)
        hi = np.where(~same | hit, mid, hi)
        lo = np.where(hit, mid, lo)
        it += 1
        if it > max_iter:
            raise Nonconvergence("bisection failed to reach refine_tol")

    gammas = np.concatenate([0.5 * (lo + hi), exact])
    widths = np.concatenate([hi - lo, np.full(exact.size, min(refine_tol, step) * 0.5)])
    order = np.argsort(gammas, kind="stable")
    gammas, widths = gammas[order], widths[order]
    # refine_tol below the float spacing at t would never be met exactly
    widths = np.maximum(widths, np.spacing(gammas))

    offset = _count_sign_changes(1.0, t_min, step, cfg) if t_min > 1.0 else 0
    records = [ZeroRecord(offset + i + 1, float(g), float(w))
               for i, (g, w) in enumerate(zip(gammas, widths))]
    if gammas.size > 1 and np.min(np.diff(gammas)) < 2.0 * step:
        warnings.warn("two located zeros are closer than 2*step; a pair may be missing",
                      StepTooCoarseWarning, stacklevel=2)
    return records


def count_zeros_rvm(T: float) -> float:
    """Main terms of N(T): (T/2pi) log(T/2pi) - T/2pi + 7/8."""
    if not T >= 2:
        raise DomainError(f"count_zeros_rvm requires T >= 2, got {T}")
    x = T / (2.0 * math.pi)
    return x * math.log(x) - x + 7.0 / 8.0


def count_zeros_rvm_deriv(T: float) -> float:
    return math.log(T / (2.0 * math.pi)) / (2.0 * math.pi)


@dataclass(frozen=True)
class CountReport:
    T: float
    scan_count: int
    formula: float
    difference: float
    band: float
    passed: bool


def verify_count(T: float, zeros: list[ZeroRecord]) -> CountReport:
    """Compare a scan count with the smooth count; band is 3 log T."""
    formula = count_zeros_rvm(T)
    n = sum(1 for z in zeros if z.gamma <= T)
    diff = abs(n - formula)
    band = 3.0 * math.log(T)
    return CountReport(T, n, formula, diff, band, diff <= band)


# ----------------------------------------------------------------------------
# synthetic zeros


class Base(str, enum.Enum):
    ZETA = "Zeta"
    CONSTANT_ONE = "ConstantOne"


@dataclass(frozen=True)
class InjectionSpec:
    beta: float
    gamma: float
    multiplicity: int = 1

    def __post_init__(self):
        if not (0.0 < self.beta < 1.0):
            raise DomainError(f"beta must lie in (0, 1), got {self.beta}")
        if not self.gamma > 0:
            raise DomainError(f"gamma must be > 0, got {self.gamma}")
        if int(self.multiplicity) != self.multiplicity or self.multiplicity < 1:
            raise DomainError(f"multiplicity must be a positive integer, got {self.multiplicity}")

    def roots(self) -> list[complex]:
        """Distinct members of {rho, conj rho, 1 - rho, 1 - conj rho}."""
        rho = complex(self.beta, self.gamma)
        out = []
        for r in (rho, rho.conjugate(), 1 - rho, 1 - rho.conjugate()):
            if all(abs(r - q) > 1e-15 for q in out):
                out.append(r)
        return out

    def normalizer(self) -> float:
        s0 = complex(2.0, self.gamma)
        return abs(np.prod([s0 - r for r in self.roots()]))


@dataclass(frozen=True)
class TestFunction:
    """base(s) times the normalised symmetric factors of every injection."""

    __test__ = False  # not a pytest class

    base: Base = Base.ZETA
    injections: tuple[InjectionSpec, ...] = field(default_factory=tuple)
    cfg: EvalConfig = DEFAULT_CONFIG

    def __post_init__(self):
        object.__setattr__(self, "base", Base(self.base))
        object.__setattr__(self, "injections", tuple(self.injections))

    def factor(self, s) -> np.ndarray:
        s = as_complex_array(s)
        out = np.ones(s.shape, dtype=complex)
        for spec in self.injections:
            q = np.ones(s.shape, dtype=complex)
            for r in spec.roots():
                q = q * (s - r)
            out = out * (q / spec.normalizer()) ** spec.multiplicity
        return out

    def base_values(self, s) -> np.ndarray:
        s = as_complex_array(s)
        if self.base is Base.CONSTANT_ONE:
            return np.ones(s.shape, dtype=complex)
        return zeta_array(s, self.cfg)[0]

    def __call__(self, s):
        s = as_complex_array(s)
        out = self.base_values(s)
        if self.injections:
            out = out * self.factor(s)
        return out

    def injected_zeros(self) -> list[tuple[complex, int]]:
        return [(r, spec.multiplicity) for spec in self.injections for r in spec.roots()]

    def is_constant(self) -> bool:
        return self.base is Base.CONSTANT_ONE and not self.injections

    def describe(self) -> dict:
        return {
            "base": self.base.value,
            "injections": [
                {"beta": j.beta, "gamma": j.gamma, "multiplicity": j.multiplicity}
                for j in self.injections
            ],
        }


def inject_zeros(specs, base: Base | str = Base.ZETA, cfg: EvalConfig = DEFAULT_CONFIG) -> TestFunction:
    """Build a test function with symmetric synthetic zeros."""
    return TestFunction(Base(base), tuple(specs), cfg)
