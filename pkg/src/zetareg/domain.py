"""The excised strip: a rectangle of half-height R minus zero and pole disks."""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import qmc

from ._validation import ComplexPoint, as_complex_array, as_point, check_positive
from .errors import DomainError, OverlapWithWallWarning
from .zeta_engine import DEFAULT_CONFIG, EvalConfig, zeta_array

DEFAULT_DELTA = 0.45
DEFAULT_N0 = 1.0
DEFAULT_ALPHA = 2.0
DEFAULT_EPS_POLE = 0.05
DEFAULT_THRESHOLD = 0.1
DEFAULT_SEED = 20240607


class DiskKind(str, enum.Enum):
    ZERO = "Zero"
    POLE = "Pole"
    THRESHOLD = "Threshold"


class Mode(str, enum.Enum):
    ZERO_CENTERED = "ZeroCentered"
    THRESHOLD_CENTERED = "ThresholdCentered"


@dataclass(frozen=True)
class ExcisionDisk:
    center: ComplexPoint
    radius: float
    kind: DiskKind
    index: int | None = None

    def __post_init__(self):
        if not self.radius > 0:
            raise DomainError("disk radius must be > 0")


@dataclass(frozen=True)
class RegulatedDomain:
    R: float
    sigma_lo: float
    sigma_hi: float
    delta: float
    N0: float
    alpha: float
    eps_pole: float
    mode: Mode
    disks: tuple[ExcisionDisk, ...] = field(default_factory=tuple)
    wall_overlaps: tuple[int, ...] = field(default_factory=tuple)

    @property
    def width(self) -> float:
        return self.sigma_hi - self.sigma_lo

    @property
    def area(self) -> float:
        return self.width * 2.0 * self.R

    def disk_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        centers = np.array([d.center.s for d in self.disks], dtype=complex)
        radii = np.array([d.radius for d in self.disks], dtype=float)
        return centers, radii

    def is_conjugate_symmetric(self) -> bool:
        key = {(round(d.center.sigma, 12), round(d.center.t, 12), d.radius) for d in self.disks}
        return all((s, -t if t else 0.0, r) in key for s, t, r in key)

    def with_disks(self, disks) -> RegulatedDomain:
        return RegulatedDomain(self.R, self.sigma_lo, self.sigma_hi, self.delta, self.N0,
                               self.alpha, self.eps_pole, self.mode, tuple(disks),
                               self.wall_overlaps)

    def to_dict(self) -> dict:
        return {
            "R": self.R,
            "sigma_lo": self.sigma_lo,
            "sigma_hi": self.sigma_hi,
            "delta": self.delta,
            "N0": self.N0,
            "alpha": self.alpha,
            "eps_pole": self.eps_pole,
            "mode": self.mode.value,
            "disks": [
                {"sigma": d.center.sigma, "t": d.center.t, "radius": d.radius,
                 "kind": d.kind.value, "index": d.index}
                for d in self.disks
            ],
            "wall_overlaps": list(self.wall_overlaps),
        }

    @classmethod
    def from_dict(cls, data: dict) -> RegulatedDomain:
        disks = tuple(
            ExcisionDisk(ComplexPoint(d["sigma"], d["t"]), d["radius"], DiskKind(d["kind"]), d.get("index"))
            for d in data["disks"]
        )
        return cls(data["R"], data["sigma_lo"], data["sigma_hi"], data["delta"], data["N0"],
                   data["alpha"], data["eps_pole"], Mode(data["mode"]), disks,
                   tuple(data.get("wall_overlaps", ())))


DEFAULT_WALLS = "centered"


def resolve_walls(delta: float, walls=DEFAULT_WALLS) -> tuple[float, float]:
    """Strip walls: "centered" is [1/2 - delta, 1/2 + delta], "inner" is
    [delta, 1 - delta]; an explicit (lo, hi) pair is passed through."""
    if isinstance(walls, str):
        if walls == "inner":
            return delta, 1.0 - delta
        if walls == "centered":
            return 0.5 - delta, 0.5 + delta
        raise DomainError(f"unknown wall preset {walls!r}")
    lo, hi = (float(w) for w in walls)
    if not lo < hi:
        raise DomainError(f"walls must satisfy lo < hi, got ({lo}, {hi})")
    return lo, hi


def _rect_distance(c: complex, lo: float, hi: float, R: float) -> float:
    dx = max(lo - c.real, 0.0, c.real - hi)
    dy = max(-R - c.imag, 0.0, c.imag - R)
    return math.hypot(dx, dy)


def _straddles_wall(c: complex, r: float, lo: float, hi: float) -> bool:
    return abs(c.real - lo) < r or abs(c.real - hi) < r


def excision_radius(index: int, N0: float, alpha: float) -> float:
    return float((index + N0) ** (-alpha))


def _rank_zero_centers(zeros, extra_zeros) -> list[tuple[complex, int]]:
    """Upper-half-plane zero centres ranked by ordinate (index from 1)."""
    upper = [complex(0.5, z.gamma) for z in zeros]
    for r in extra_zeros or ():
        r = complex(r)
        if r.imag > 0:
            upper.append(r)
    upper = sorted(set(upper), key=lambda c: (c.imag, c.real))
    return [(c, i + 1) for i, c in enumerate(upper)]


def build_domain(R: float, delta: float = DEFAULT_DELTA, zeros=(), N0: float = DEFAULT_N0,
                 alpha: float = DEFAULT_ALPHA, eps_pole: float = DEFAULT_EPS_POLE,
                 mode: Mode | str = Mode.ZERO_CENTERED, cfg: EvalConfig = DEFAULT_CONFIG, *,
                 walls=DEFAULT_WALLS, extra_zeros=(), threshold: float = DEFAULT_THRESHOLD,
                 grid_step: float | None = None, f=None) -> RegulatedDomain:
    """Build the regulated domain.

    ``zeros`` are located critical-line zeros (ZeroRecord-like objects with a
    ``gamma`` attribute).  ``extra_zeros`` adds arbitrary zero positions, e.g.
    injected off-line zeros; their conjugates are added automatically and all
    zeros are re-ranked by ordinate.  In threshold mode disks of radius
    ``eps_pole`` are placed on grid cells where ``|f| < threshold`` instead.
    """
    check_positive("R", R)
    if not (0.0 < delta < 0.5):
        raise DomainError(f"delta must lie in (0, 1/2), got {delta}")
    if not alpha > 1:
        raise DomainError(f"alpha must be > 1, got {alpha}")
    if not N0 >= 0:
        raise DomainError(f"N0 must be >= 0, got {N0}")
    check_positive("eps_pole", eps_pole)
    mode = Mode(mode)
    gammas = [z.gamma for z in zeros]
    if any(b < a for a, b in zip(gammas, gammas[1:])):
        raise DomainError("zeros must be sorted by ordinate")
    lo, hi = resolve_walls(delta, walls)

    disks: list[ExcisionDisk] = []
    if mode is Mode.ZERO_CENTERED:
        for c, idx in _rank_zero_centers(zeros, extra_zeros):
            r = excision_radius(idx, N0, alpha)
            for cc in (c, c.conjugate()):
                if _rect_distance(cc, lo, hi, R) < r:
                    disks.append(ExcisionDisk(ComplexPoint(cc.real, cc.imag), r, DiskKind.ZERO, idx))
    else:
        disks.extend(_threshold_disks(R, lo, hi, eps_pole, threshold, grid_step, f, cfg))

    pole = complex(1.0, 0.0)
    if _rect_distance(pole, lo, hi, R) < eps_pole:
        disks.append(ExcisionDisk(ComplexPoint(1.0, 0.0), eps_pole, DiskKind.POLE))

    overlaps = tuple(i for i, d in enumerate(disks)
                     if _straddles_wall(d.center.s, d.radius, lo, hi))
    if overlaps:
        warnings.warn(f"{len(overlaps)} excision disk(s) straddle a strip wall",
                      OverlapWithWallWarning, stacklevel=2)
    return RegulatedDomain(float(R), lo, hi, float(delta), float(N0), float(alpha),
                           float(eps_pole), mode, tuple(disks), overlaps)


def _threshold_disks(R, lo, hi, radius, threshold, grid_step, f, cfg):
    step = grid_step or radius
    ns = max(1, int(math.ceil((hi - lo) / step)))
    nt = max(1, int(math.ceil(R / step)))
    sig = lo + (np.arange(ns) + 0.5) * (hi - lo) / ns
    tt = (np.arange(nt) + 0.5) * R / nt
    S, T = np.meshgrid(sig, tt, indexing="ij")
    pts = (S + 1j * T).ravel()
    pts = pts[np.abs(pts - 1.0) > 1e-6]
    vals = np.abs(f(pts)) if f is not None else np.abs(zeta_array(pts, cfg)[0])
    hits = pts[vals < threshold]
    out = []
    # |f(conj s)| = |f(s)| for every function built here, so mirror the upper half
    for c in hits:
        out.append(ExcisionDisk(ComplexPoint(c.real, c.imag), radius, DiskKind.THRESHOLD))
        out.append(ExcisionDisk(ComplexPoint(c.real, -c.imag), radius, DiskKind.THRESHOLD))
    return out


def contains_array(domain: RegulatedDomain, s) -> np.ndarray:
    s = as_complex_array(s)
    inside = ((s.real >= domain.sigma_lo) & (s.real <= domain.sigma_hi)
              & (np.abs(s.imag) <= domain.R))
    for d in domain.disks:
        inside &= np.abs(s - d.center.s) >= d.radius
    return inside


def contains(domain: RegulatedDomain, s) -> bool:
    """True iff s is in the closed rectangle and outside every open disk."""
    return bool(contains_array(domain, np.array([as_point(s).s]))[0])


@dataclass(frozen=True)
class AreaAccount:
    naive_sum: float
    clipped_estimate: float
    clipped_err: float


def excised_area(domain: RegulatedDomain, points_per_disk: int = 2 ** 12, replicates: int = 8,
                 seed: int = DEFAULT_SEED) -> AreaAccount:
    """Naive disk-area sum and a sampled estimate of the area actually removed.

    The union of the disks, clipped to the rectangle, is sampled with
    scrambled Sobol points placed in each disk's bounding box; a point counts
    for disk i only if it is not in any earlier disk, so overlaps are not
    double counted.  The error is three standard errors over the replicates.
    """
    naive = float(sum(math.pi * d.radius ** 2 for d in domain.disks))
    if not domain.disks:
        return AreaAccount(0.0, 0.0, 0.0)
    centers, radii = domain.disk_arrays()
    lo, hi, R = domain.sigma_lo, domain.sigma_hi, domain.R
    estimates = np.zeros(replicates)
    m = int(math.log2(points_per_disk))
    for i, (c, r) in enumerate(zip(centers, radii)):
        x0, x1 = max(c.real - r, lo), min(c.real + r, hi)
        y0, y1 = max(c.imag - r, -R), min(c.imag + r, R)
        if x1 <= x0 or y1 <= y0:
            continue
        box = (x1 - x0) * (y1 - y0)
        earlier = [j for j in range(i) if abs(centers[j] - c) < radii[j] + r]
        for k in range(replicates):
            u = qmc.Sobol(2, scramble=True, seed=seed + 7919 * i + k).random_base2(m)
            pts = (x0 + u[:, 0] * (x1 - x0)) + 1j * (y0 + u[:, 1] * (y1 - y0))
            hit = np.abs(pts - c) < r
            for j in earlier:
                hit &= np.abs(pts - centers[j]) >= radii[j]
            estimates[k] += box * hit.mean()
    est = float(estimates.mean())
    err = float(3.0 * estimates.std(ddof=1) / math.sqrt(replicates)) if replicates > 1 else 0.0
    return AreaAccount(naive, est, err)


def total_excised_bound(N0: float, alpha: float, tail_tol: float = 1e-13) -> float:
    """pi * sum_{n>=1} (n + N0)**(-2 alpha), tail closed by integral bounds."""
    if not alpha > 1:
        raise DomainError(f"alpha must be > 1 for a finite excised measure, got {alpha}")
    if not N0 >= 0:
        raise DomainError(f"N0 must be >= 0, got {N0}")
    q = 2.0 * alpha
    # sum_{n>M} f(n) lies in [int_{M+1}^inf f, int_M^inf f]; pick M so the
    # bracket width f(M)-ish is below tail_tol
    M = int(math.ceil(tail_tol ** (-1.0 / q))) + 1
    M = max(M, 16)
    n = np.arange(1, M + 1, dtype=float)
    head = float(np.sum((n + N0)[::-1] ** (-q)))
    upper = (M + N0) ** (1 - q) / (q - 1)
    lower = (M + 1 + N0) ** (1 - q) / (q - 1)
    return math.pi * (head + 0.5 * (upper + lower))
