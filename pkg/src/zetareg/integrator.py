"""The weighted integrand J_C, the normalised area integral W(R), its
vertical projection Phi(t), sweeps over R, and local divergence probes."""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate, optimize
from scipy.special import roots_jacobi, roots_legendre

from ._validation import as_point, check_positive, check_weight_exponents
from .domain import (
    DEFAULT_SEED,
    AreaAccount,
    RegulatedDomain,
    build_domain,
    contains_array,
    excised_area,
)
from .errors import DomainError, EmptyDomain, FitPoor, OnCriticalLine, QuadratureFailure, ZeroValue
from .zeros import TestFunction, scan_zeros
from .zeta_engine import DEFAULT_CONFIG, EvalConfig

UNDERFLOW_GUARD = 1e-300
MIN_CELL = 1e-4


@dataclass(frozen=True)
class WeightParams:
    lam: float = 2.0
    p: float = 0.5

    def __post_init__(self):
        check_weight_exponents(self.lam, self.p)


def line_weight_integral(lo: float, hi: float, p: float) -> float:
    """Closed form of int_lo^hi |sigma - 1/2|**-p d sigma."""
    def prim(x):
        d = x - 0.5
        return math.copysign(abs(d) ** (1 - p) / (1 - p), d)
    return prim(hi) - prim(lo)


def _abs_pow(values: np.ndarray, lam: float) -> np.ndarray:
    mag = np.maximum(np.abs(values), UNDERFLOW_GUARD)
    return np.exp(-lam * np.log(mag))


def integrand(f: TestFunction, s, w: WeightParams, cfg: EvalConfig | None = None) -> float:
    """J_C(s) = |f(s)|**-lambda / |sigma - 1/2|**p at a single point."""
    pt = as_point(s)
    if pt.sigma == 0.5:
        raise OnCriticalLine("the line weight is undefined on Re s = 1/2")
    val = abs(complex(f(np.array([pt.s]))[0]))
    if val < UNDERFLOW_GUARD:
        raise ZeroValue(f"|f(s)| = {val:.3g} below the underflow guard at s = {pt.s}")
    return float(val ** (-w.lam) / abs(pt.sigma - 0.5) ** w.p)


# ----------------------------------------------------------------------------
# 2D adaptive quadrature over the excised rectangle


@dataclass(frozen=True)
class IntegralResult:
    value: float
    abs_err: float
    evals: int
    excised: AreaAccount
    normalized: bool
    converged: bool = True
    cells: int = 0

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "abs_err": self.abs_err,
            "evals": self.evals,
            "normalized": self.normalized,
            "converged": self.converged,
            "cells": self.cells,
            "excised": {
                "naive_sum": self.excised.naive_sum,
                "clipped_estimate": self.excised.clipped_estimate,
                "clipped_err": self.excised.clipped_err,
            },
        }


class _LineMap:
    """sigma <-> v = |sigma - 1/2|**(1-p) / (1-p) on one side of the line.

    In v the weight |sigma - 1/2|**-p d sigma becomes dv, so the line
    singularity is absorbed exactly by the antiderivative.
    """

    def __init__(self, p: float):
        self.q = 1.0 - p

    def v(self, sigma):
        return np.abs(np.asarray(sigma, dtype=float) - 0.5) ** self.q / self.q

    def sigma(self, v, side):
        return 0.5 + side * (self.q * np.asarray(v, dtype=float)) ** (1.0 / self.q)


class _CellIntegrator:
    """Tensor Gauss-Legendre rule in (v, t) on rectangular cells.

    Cells clear of every disk use the plain tensor rule.  Cells that meet a
    disk keep the Gauss nodes in t and, on each such row, integrate exactly
    over the v-intervals left after removing the disk chords.
    """

    def __init__(self, f, domain: RegulatedDomain, w: WeightParams, order: int):
        self.f = f
        self.lam = w.lam
        self.map = _LineMap(w.p)
        x, wx = roots_legendre(order)
        self.u = 0.5 * (x + 1.0)
        self.wu = 0.5 * wx
        self.centers, self.radii = domain.disk_arrays()
        self.evals = 0

    def sigma_bounds(self, v0, v1, side):
        a = self.map.sigma(v0, side)
        b = self.map.sigma(v1, side)
        return np.minimum(a, b), np.maximum(a, b)

    def classify(self, v0, v1, y0, y1, side):
        """0 = clear of all disks, 1 = meets a disk, 2 = inside one disk."""
        x0, x1 = self.sigma_bounds(v0, v1, side)
        status = np.zeros(v0.size, dtype=np.int8)
        for c, r in zip(self.centers, self.radii):
            dx = np.maximum(np.maximum(x0 - c.real, c.real - x1), 0.0)
            dy = np.maximum(np.maximum(y0 - c.imag, c.imag - y1), 0.0)
            touch = np.hypot(dx, dy) < r
            fx = np.maximum(np.abs(x0 - c.real), np.abs(x1 - c.real))
            fy = np.maximum(np.abs(y0 - c.imag), np.abs(y1 - c.imag))
            inside = np.hypot(fx, fy) <= r
            status = np.where(inside, 2, np.where(touch, np.maximum(status, 1), status))
        return status

    def _row_pieces(self, v0, v1, y, side):
        """v-intervals of [v0, v1] at height y outside every disk."""
        pieces = [(v0, v1)]
        for c, r in zip(self.centers, self.radii):
            dy = y - c.imag
            if abs(dy) >= r:
                continue
            h = math.sqrt(r * r - dy * dy)
            a, b = c.real - h, c.real + h
            if side > 0:
                if b <= 0.5:
                    continue
                ca, cb = float(self.map.v(max(a, 0.5))), float(self.map.v(b))
                if a <= 0.5:
                    ca = 0.0
            else:
                if a >= 0.5:
                    continue
                ca, cb = float(self.map.v(min(b, 0.5))), float(self.map.v(a))
                if b >= 0.5:
                    ca = 0.0
            nxt = []
            for u, w in pieces:
                if cb <= u or ca >= w:
                    nxt.append((u, w))
                    continue
                if ca > u:
                    nxt.append((u, ca))
                if cb < w:
                    nxt.append((cb, w))
            pieces = nxt
            if not pieces:
                break
        return pieces

    def _row_breaks(self, v0, v1, y0, y1, side):
        """Split [y0, y1] where a disk boundary crosses a cell side or is
        tangent, so each row integral is smooth on every sub-interval."""
        sb = [float(self.map.sigma(v0, side)), float(self.map.sigma(v1, side))]
        cuts = {y0, y1}
        for c, r in zip(self.centers, self.radii):
            cuts.update((c.imag - r, c.imag + r))
            for s in sb:
                dx = s - c.real
                if abs(dx) < r:
                    h = math.sqrt(r * r - dx * dx)
                    cuts.update((c.imag - h, c.imag + h))
        ys = sorted(y for y in cuts if y0 <= y <= y1)
        return [(a, b) for a, b in zip(ys[:-1], ys[1:]) if b - a > 1e-14 * max(1.0, abs(b))]

    def rule_values(self, v0, v1, y0, y1, side, status):
        out = np.zeros(v0.size)
        clear = np.flatnonzero(status == 0)
        partial = np.flatnonzero(status == 1)
        n = self.u.size
        pts, wts, owner = [], [], []
        if clear.size:
            hv = v1[clear] - v0[clear]
            k = y1[clear] - y0[clear]
            vs = v0[clear, None] + hv[:, None] * self.u
            ys = y0[clear, None] + k[:, None] * self.u
            sig = self.map.sigma(vs, side[clear, None])
            pts.append((sig[:, :, None] + 1j * ys[:, None, :]).ravel())
            ww = (hv[:, None] * self.wu)[:, :, None] * (k[:, None] * self.wu)[:, None, :]
            wts.append(ww.ravel())
            owner.append(np.repeat(clear, n * n))
        for i in partial:
            for ya, yb in self._row_breaks(v0[i], v1[i], y0[i], y1[i], side[i]):
                k = yb - ya
                for y, wy in zip(ya + k * self.u, k * self.wu):
                    for a, b in self._row_pieces(v0[i], v1[i], y, side[i]):
                        vs = a + (b - a) * self.u
                        pts.append(self.map.sigma(vs, side[i]) + 1j * y)
                        wts.append((b - a) * self.wu * wy)
                        owner.append(np.full(n, i))
        if not pts:
            return out
        pts = np.concatenate(pts)
        wts = np.concatenate(wts)
        owner = np.concatenate(owner)
        self.evals += pts.size
        vals = _abs_pow(self.f(pts), self.lam) * wts
        np.add.at(out, owner, vals)
        return out

    @staticmethod
    def split(v0, v1, y0, y1, side, st):
        vm = 0.5 * (v0 + v1)
        ym = 0.5 * (y0 + y1)
        return (np.concatenate([v0, vm, v0, vm]), np.concatenate([vm, v1, vm, v1]),
                np.concatenate([y0, y0, ym, ym]), np.concatenate([ym, ym, y1, y1]),
                np.tile(side, 4), np.tile(st, 4))

    def children(self, v0, v1, y0, y1, side, st):
        """Children cells with their own rule values; returns (q4 per parent, children)."""
        n = v0.size
        cv0, cv1, cy0, cy1, cside, pst = self.split(v0, v1, y0, y1, side, st)
        cst = np.where(pst == 0, 0, np.where(pst == 2, 2, self.classify(cv0, cv1, cy0, cy1, cside)))
        cq = self.rule_values(cv0, cv1, cy0, cy1, cside, cst)
        return cq.reshape(4, n).sum(axis=0), (cv0, cv1, cy0, cy1, cside, cst, cq)


def _initial_cells(lo, hi, y_lo, y_hi, lmap: _LineMap, target: float):
    """Cells in (v, t, side), split at sigma = 1/2, about ``target`` tall."""
    ranges = []
    if hi <= 0.5:
        ranges.append((float(lmap.v(hi)), float(lmap.v(lo)), -1.0))
    elif lo >= 0.5:
        ranges.append((float(lmap.v(lo)), float(lmap.v(hi)), 1.0))
    else:
        ranges.append((0.0, float(lmap.v(lo)), -1.0))
        ranges.append((0.0, float(lmap.v(hi)), 1.0))
    ny = max(1, int(math.ceil((y_hi - y_lo) / target)))
    y_edges = y_lo + (y_hi - y_lo) * np.arange(ny + 1) / ny
    y_edges[-1] = y_hi
    cols = []
    for a, b, sd in ranges:
        m = max(1, int(math.ceil((b - a) / target)))
        e = a + (b - a) * np.arange(m + 1) / m
        e[-1] = b
        V0, Y0 = np.meshgrid(e[:-1], y_edges[:-1], indexing="ij")
        V1, Y1 = np.meshgrid(e[1:], y_edges[1:], indexing="ij")
        cols.append((V0.ravel(), V1.ravel(), Y0.ravel(), Y1.ravel(), np.full(V0.size, sd)))
    return tuple(np.concatenate([c[j] for c in cols]) for j in range(5))


_FIELDS = ("v0", "v1", "y0", "y1", "side", "st", "q1", "q4")


def integrate_w(f: TestFunction, domain: RegulatedDomain, w: WeightParams = WeightParams(),
                quad_tol: float = 1e-6, *, rtol: float = 0.0, order: int = 4,
                min_cell: float = MIN_CELL, initial_cell: float = 0.25,
                max_evals: int = 20_000_000, area: AreaAccount | None = None,
                seed: int = DEFAULT_SEED) -> IntegralResult:
    """Normalised W(R) = (1/2R) * integral of J_C over the regulated domain.

    Global adaptive subdivision in (v, t), v the antiderivative of the line
    weight.  Every cell carries a Gauss estimate on itself (q1) and the sum
    over its quadrants (q4); |q4 - q1| is its error.  The tolerance applies
    to the normalised value: refinement stops when the summed error is below
    ``max(quad_tol, rtol * W)``.  Cells smaller than ``min_cell`` are not
    split further and the result is flagged unconverged if that stalls.
    """
    check_positive("quad_tol", quad_tol)
    R = domain.R
    symmetric = domain.is_conjugate_symmetric()
    y_lo = 0.0 if symmetric else -R
    norm = (2.0 if symmetric else 1.0) / (2.0 * R)
    ci = _CellIntegrator(f, domain, w, order)

    v0, v1, y0, y1, side = _initial_cells(domain.sigma_lo, domain.sigma_hi, y_lo, R, ci.map,
                                          initial_cell)
    st = ci.classify(v0, v1, y0, y1, side)
    q1 = ci.rule_values(v0, v1, y0, y1, side, st)
    q4, _ = ci.children(v0, v1, y0, y1, side, st)
    cells = dict(zip(_FIELDS, (v0, v1, y0, y1, side, st, q1, q4)))

    converged = True
    while True:
        err = np.abs(cells["q4"] - cells["q1"])
        total = float(np.sum(cells["q4"])) * norm
        total_err = float(np.sum(err)) * norm
        target = max(quad_tol, rtol * abs(total))
        if total_err <= target:
            break
        size = np.minimum(cells["v1"] - cells["v0"], cells["y1"] - cells["y0"])
        refinable = (size > 2 * min_cell) & (err > 0)
        if not np.any(refinable):
            converged = False
            break
        if ci.evals > max_evals:
            raise QuadratureFailure(
                f"W(R) quadrature exhausted {max_evals} evaluations at err {total_err:.3g} "
                f"(target {target:.3g})")
        # split the worst cells until their error would cover half the excess
        order_idx = np.argsort(-np.where(refinable, err, -1.0), kind="stable")
        cum = np.cumsum(err[order_idx]) * norm
        k = int(np.searchsorted(cum, 0.5 * (total_err - 0.5 * target))) + 1
        k = min(k, int(np.count_nonzero(refinable)), 50_000)
        pick = np.zeros(err.size, dtype=bool)
        pick[order_idx[:k]] = True
        parents = [cells[n][pick] for n in _FIELDS[:6]]
        _, (cv0, cv1, cy0, cy1, cside, cst, cq1) = ci.children(*parents)
        cq4, _ = ci.children(cv0, cv1, cy0, cy1, cside, cst)
        keep = ~pick
        for name, new in zip(_FIELDS, (cv0, cv1, cy0, cy1, cside, cst, cq1, cq4)):
            cells[name] = np.concatenate([cells[name][keep], new])

    # deterministic reduction in lexicographic cell order
    key = np.lexsort((cells["v0"], cells["side"], cells["y0"]))
    value = float(np.sum(cells["q4"][key])) * norm
    abs_err = float(np.sum(np.abs(cells["q4"] - cells["q1"])[key])) * norm
    if not math.isfinite(value):
        raise QuadratureFailure("W(R) is not finite; an unexcised zero lies in the domain")
    if area is None:
        area = excised_area(domain, seed=seed)
    return IntegralResult(max(value, 0.0), abs_err, ci.evals, area, True, converged,
                          int(key.size))


# ----------------------------------------------------------------------------
# vertical projection


def _line_intervals(domain: RegulatedDomain | None, t: float, lo: float, hi: float):
    cuts = []
    if domain is not None:
        for d in domain.disks:
            dy = t - d.center.t
            if abs(dy) < d.radius:
                h = math.sqrt(d.radius ** 2 - dy ** 2)
                cuts.append((d.center.sigma - h, d.center.sigma + h))
    pieces = [(lo, hi)]
    for a, b in sorted(cuts):
        nxt = []
        for u, v in pieces:
            if b <= u or a >= v:
                nxt.append((u, v))
                continue
            if a > u:
                nxt.append((u, a))
            if b < v:
                nxt.append((b, v))
        pieces = nxt
    out = []
    for u, v in pieces:
        if u < 0.5 < v:
            out += [(u, 0.5), (0.5, v)]
        elif v > u:
            out.append((u, v))
    return out


def phi_projection(f: TestFunction, t: float, domain: RegulatedDomain | None = None,
                   w: WeightParams = WeightParams(), quad_tol: float = 1e-8,
                   sigma_range: tuple[float, float] = (0.0, 1.0)) -> float:
    """Phi(t) = int |f(sigma + i t)|**-lambda |sigma - 1/2|**-p d sigma.

    Integrates over ``sigma_range`` minus the chords of the domain's disks at
    height t.  Pieces that end on sigma = 1/2 use QUADPACK's algebraic
    end-point weight so the line singularity is integrated exactly.
    """
    lo, hi = sigma_range
    if domain is not None and abs(t) > domain.R:
        raise DomainError(f"height {t} lies outside the domain |t| <= {domain.R}")
    pieces = _line_intervals(domain, float(t), lo, hi)
    lam, p = w.lam, w.p

    def g(sig):
        v = abs(complex(f(np.array([complex(sig, t)]))[0]))
        return max(v, UNDERFLOW_GUARD) ** (-lam)

    total = 0.0
    for a, b in pieces:
        tol = quad_tol / max(len(pieces), 1)
        if a == 0.5:
            val, _ = integrate.quad(g, a, b, weight="alg", wvar=(-p, 0.0), epsabs=tol, limit=200)
        elif b == 0.5:
            val, _ = integrate.quad(g, a, b, weight="alg", wvar=(0.0, -p), epsabs=tol, limit=200)
        else:
            val, _ = integrate.quad(lambda x: g(x) * abs(x - 0.5) ** (-p), a, b, epsabs=tol, limit=200)
        total += val
    return float(total)


# ----------------------------------------------------------------------------
# sweeps over R


@dataclass(frozen=True)
class DomainParams:
    delta: float = 0.45
    N0: float = 1.0
    alpha: float = 2.0
    eps_pole: float = 0.05
    walls: object = "centered"
    scan_step: float = 0.1


@dataclass(frozen=True)
class SweepReport:
    rows: list
    all_finite: bool
    loglog_slope: float | None
    monotone_decreasing: bool
    meta: dict = field(default_factory=dict)


def wr_sweep(f: TestFunction, R_list, params: DomainParams = DomainParams(),
             w: WeightParams = WeightParams(), quad_tol: float = 1e-6, *, rtol: float = 0.0,
             cfg: EvalConfig = DEFAULT_CONFIG, seed: int = DEFAULT_SEED) -> SweepReport:
    """W(R) for each R with a domain rebuilt per R; the trend is measured,
    not asserted."""
    R_list = [float(r) for r in R_list]
    if any(b <= a for a, b in zip(R_list, R_list[1:])):
        raise DomainError("R_list must be strictly increasing")
    zeros = []
    if f.base.value == "Zeta" and R_list[-1] > 1.0:
        zeros = scan_zeros(1.0, R_list[-1] + 1.0, params.scan_step, 1e-10, cfg)
    injected = [r for r, _ in f.injected_zeros()]
    rows = []
    for R in R_list:
        dom = build_domain(R, params.delta, [z for z in zeros if z.gamma <= R + 1.0], params.N0,
                           params.alpha, params.eps_pole, cfg=cfg, walls=params.walls,
                           extra_zeros=injected)
        rows.append((R, integrate_w(f, dom, w, quad_tol, rtol=rtol, seed=seed)))
    vals = np.array([r.value for _, r in rows])
    finite = bool(np.all(np.isfinite(vals)))
    slope = None
    if len(rows) >= 2 and np.all(vals > 0):
        slope = float(np.polyfit(np.log(R_list), np.log(vals), 1)[0])
    mono = bool(np.all(np.diff(vals) < 0))
    return SweepReport(rows, finite, slope, mono)


# ----------------------------------------------------------------------------
# divergence probes


class FitKind(str, enum.Enum):
    LOG_DIVERGENT = "LogDivergent"
    POWER_LAW = "PowerLaw"


@dataclass(frozen=True)
class ProbeResult:
    eps_list: list
    values: list
    fit_kind: FitKind
    exponent: float
    fit_r2: float
    predicted_exponent: float
    amplitude: float
    offset: float
    predicted_slope: float | None = None

    def to_dict(self) -> dict:
        return {
            "eps_list": list(self.eps_list),
            "values": list(self.values),
            "fit_kind": self.fit_kind.value,
            "exponent": self.exponent,
            "fit_r2": self.fit_r2,
            "predicted_exponent": self.predicted_exponent,
            "amplitude": self.amplitude,
            "offset": self.offset,
            "predicted_slope": self.predicted_slope,
        }


def _leading_coefficient(f: TestFunction, rho: complex, m: int, r: float = 1e-4) -> float:
    # |f(s)| ~ |c| |s - rho|^m; average the ratio around a small circle
    th = np.linspace(0, 2 * np.pi, 16, endpoint=False)
    pts = rho + r * np.exp(1j * th)
    return float(np.mean(np.abs(f(pts)) / r ** m))


def _annulus_values(f, rho, lam, p, eps_sorted, outer, on_line, n_theta, n_radial):
    """Integral of J_C over eps_k <= |s - rho| <= outer for each eps_k."""
    x, wx = roots_legendre(n_radial)
    # angular rule
    if on_line:
        # quarter panels with a Jacobi weight at the end where cos(theta) = 0
        xj, wj = roots_jacobi(n_theta, 0.0, -p)
        v = 0.5 * (xj + 1.0)
        wv = wj * 2.0 ** (p - 1.0)
        quarter = 0.5 * math.pi
        thetas, tweights, sing = [], [], []
        for start, sign in ((0.5 * math.pi, -1), (0.5 * math.pi, 1), (1.5 * math.pi, -1), (1.5 * math.pi, 1)):
            th = start + sign * quarter * v
            thetas.append(th)
            tweights.append(quarter ** (1 - p) * wv)
            sing.append(np.abs(th - start))
        thetas = np.concatenate(thetas)
        tweights = np.concatenate(tweights)
        sing = np.concatenate(sing)
    else:
        thetas = 2 * np.pi * np.arange(4 * n_theta) / (4 * n_theta)
        tweights = np.full(thetas.size, 2 * np.pi / thetas.size)
        sing = None
    # radial panels in u = log r, with breakpoints at every eps
    bps = np.unique(np.concatenate([np.log(eps_sorted), [math.log(outer)]]))
    panel_edges = [bps[0]]
    for a, b in zip(bps[:-1], bps[1:]):
        m = max(1, int(math.ceil((b - a) / 0.25)))
        panel_edges.extend(list(a + (b - a) * np.arange(1, m + 1) / m))
    panel_edges = np.array(panel_edges)
    contrib = np.zeros(panel_edges.size - 1)
    for i, (a, b) in enumerate(zip(panel_edges[:-1], panel_edges[1:])):
        u = a + (b - a) * 0.5 * (x + 1.0)
        wu = 0.5 * (b - a) * wx
        r = np.exp(u)
        pts = rho + r[:, None] * np.exp(1j * thetas)[None, :]
        fv = _abs_pow(f(pts.ravel()), lam).reshape(pts.shape)
        if on_line:
            # weight |r cos theta|^-p written as r^-p (|cos|/|theta - theta_s|)^-p |theta - theta_s|^-p
            ratio = np.abs(np.cos(thetas)) / sing
            weight = r[:, None] ** (-p) * ratio[None, :] ** (-p)
        else:
            weight = np.abs(pts.real - 0.5) ** (-p)
        inner = np.sum(fv * weight * tweights[None, :], axis=1)
        contrib[i] = float(np.sum(inner * r ** 2 * wu))
    # value for eps_k: sum of panels above log(eps_k)
    tail = np.cumsum(contrib[::-1])[::-1]
    out = []
    for e in eps_sorted:
        j = int(np.searchsorted(panel_edges, math.log(e) - 1e-12))
        out.append(float(tail[j]))
    return out


def divergence_probe(f: TestFunction, w: WeightParams, eps_list, annulus_outer: float = 0.02, *,
                     n_theta: int = 16, n_radial: int = 10, min_r2: float = 0.99) -> ProbeResult:
    """Integrate J_C over shrinking annuli around the injected zero and fit
    the growth as eps -> 0.

    Off the critical line the local exponent is lambda*m - 2; on it the line
    weight adds p.  A zero predicted exponent is fitted as A log(outer/eps) + B,
    a positive one as A eps**-k + B.
    """
    if len(f.injections) != 1:
        raise DomainError("divergence_probe needs a test function with exactly one injection")
    spec = f.injections[0]
    rho = complex(spec.beta, spec.gamma)
    m = spec.multiplicity
    eps = [float(e) for e in eps_list]
    if any(b >= a for a, b in zip(eps, eps[1:])):
        raise DomainError("eps_list must be strictly decreasing")
    if not (0 < eps[-1] and eps[0] < annulus_outer):
        raise DomainError("eps_list must lie in (0, annulus_outer)")
    on_line = spec.beta == 0.5
    if not on_line and annulus_outer >= abs(spec.beta - 0.5):
        raise DomainError("annulus must not reach the critical line for an off-line zero")
    lam, p = w.lam, w.p
    predicted = lam * m - 2.0 + (p if on_line else 0.0)
    vals = _annulus_values(f, rho, lam, p, np.array(eps), annulus_outer, on_line, n_theta, n_radial)
    e = np.array(eps)
    v = np.array(vals)

    pred_slope = None
    if abs(predicted) < 1e-12:
        xlog = np.log(annulus_outer / e)
        A, B = np.polyfit(xlog, v, 1)
        resid = v - (A * xlog + B)
        r2 = 1.0 - float(np.sum(resid ** 2) / np.sum((v - v.mean()) ** 2))
        kind, exponent = FitKind.LOG_DIVERGENT, 0.0
        c = _leading_coefficient(f, rho, m)
        pred_slope = 2 * math.pi * c ** (-lam) * (abs(spec.beta - 0.5) ** (-p) if not on_line else 1.0)
    else:
        k0 = max(predicted, 0.1)
        A0 = v[-1] * e[-1] ** k0

        def model(x, A, k, B):
            return A * x ** (-k) + B

        with warnings.catch_warnings():
            # an exactly fitting model leaves the covariance undefined
            warnings.simplefilter("ignore", optimize.OptimizeWarning)
            (A, k, B), _ = optimize.curve_fit(model, e, v, p0=(A0, k0, 0.0), sigma=v, maxfev=20000)
        fit = model(e, A, k, B)
        lv = np.log(v)
        r2 = 1.0 - float(np.sum((lv - np.log(np.maximum(fit, 1e-300))) ** 2) / np.sum((lv - lv.mean()) ** 2))
        kind, exponent = FitKind.POWER_LAW, float(k)
    result = ProbeResult(eps, vals, kind, float(exponent), float(r2), float(predicted),
                         float(A), float(B), pred_slope)
    if r2 < min_r2:
        raise FitPoor(f"fit r^2 = {r2:.4f} below {min_r2}", result)
    return result


# ----------------------------------------------------------------------------
# lower bound of |f| on the domain


@dataclass(frozen=True)
class MinimumEstimate:
    """Grid minimum of |f|; an upper bound on the true infimum."""

    value: float
    location: complex
    n_points: int
    grid_step: float
    grid_estimate: bool = True

    def __float__(self):
        return self.value


def lower_bound_m_R(f: TestFunction, domain: RegulatedDomain, grid_step: float) -> MinimumEstimate:
    """min |f| over the grid lo + i h, -R + j h restricted to the domain.

    The grid is anchored at the lower-left corner, so halving the step gives a
    superset of points and the estimate never increases.
    """
    check_positive("grid_step", grid_step)
    if domain.disks:
        rmin = min(d.radius for d in domain.disks)
        if grid_step > 0.5 * rmin * (1 + 1e-12):
            raise DomainError(f"grid_step {grid_step} exceeds half the smallest radius {rmin}")
    nx = int(math.floor(domain.width / grid_step + 1e-9))
    ny = int(math.floor(2 * domain.R / grid_step + 1e-9))
    xs = domain.sigma_lo + np.arange(nx + 1) * grid_step
    best, where, count = math.inf, None, 0
    rows_per_chunk = max(1, 200_000 // (nx + 1))
    for j0 in range(0, ny + 1, rows_per_chunk):
        js = np.arange(j0, min(ny + 1, j0 + rows_per_chunk))
        ys = -domain.R + js * grid_step
        pts = (xs[None, :] + 1j * ys[:, None]).ravel()
        pts = pts[contains_array(domain, pts)]
        if pts.size == 0:
            continue
        count += pts.size
        mag = np.abs(f(pts))
        i = int(np.argmin(mag))
        if mag[i] < best:
            best, where = float(mag[i]), complex(pts[i])
    if count == 0:
        raise EmptyDomain("no grid point lies inside the regulated domain")
    return MinimumEstimate(best, where, count, float(grid_step))


def bound_check(f: TestFunction, domain: RegulatedDomain, w: WeightParams, result: IntegralResult,
                grid_step: float, quad_tol: float) -> dict:
    """Compare W(R) with m_R**-lambda times the line-weight integral."""
    m = lower_bound_m_R(f, domain, grid_step)
    weight = line_weight_integral(domain.sigma_lo, domain.sigma_hi, w.p)
    bound = m.value ** (-w.lam) * weight
    return {
        "m_R": m.value,
        "m_R_location": [m.location.real, m.location.imag],
        "grid_step": grid_step,
        "line_weight_integral": weight,
        "bound": bound,
        "value": result.value,
        "passed": bool(result.value <= bound + quad_tol),
    }
