"""Evaluation of zeta(s), chi(s), the Riemann-Siegel theta and Hardy's Z.

Two independent representations are available in the half plane
``Re s > 0``:

* the alternating (eta) series, summed with the Cohen-Villegas-Zagier /
  Borwein Chebyshev weights, and
* the regulated Mellin integral, evaluated along a rotated ray so that the
  ``1/Gamma(s)`` prefactor does not amplify cancellation for large ``|t|``.

Points with ``Re s <= 0`` are reflected through the functional equation.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import integrate, special as sps

from ._validation import ComplexPoint, as_complex_array, as_point, check_positive
from .errors import (
    DomainError,
    Nonconvergence,
    PoleProximity,
    PrefactorSingularity,
    QuadratureFailure,
)
from .special import expm1c, log_gamma, log_sinpi

EULER_GAMMA = 0.5772156649015329
LOG2 = math.log(2.0)
_CVZ_BASE = math.log(3.0 + math.sqrt(8.0))
_EPS = np.finfo(float).eps

POLE_GUARD = 1e-12
PREFACTOR_GUARD = 1e-9
LAURENT_RADIUS = 0.05
# |t| * (pi/2 - ray angle) for the rotated Mellin contour; the loss of
# relative precision is about e**MELLIN_SLACK.
MELLIN_SLACK = 6.0
_MELLIN_SERIES_RADIUS = 0.5
_MIN_TERMS = 8


class Method(str, enum.Enum):
    ETA = "Eta"
    MELLIN = "Mellin"
    REFLECTION = "Reflection"
    LAURENT = "Laurent"


@dataclass(frozen=True)
class ZetaValue:
    value: complex
    abs_err: float
    method: Method
    terms_used: int

    def __post_init__(self):
        if not self.abs_err >= 0:
            raise ValueError("abs_err must be non-negative")


@dataclass(frozen=True)
class EvalConfig:
    """Accuracy knobs shared by every evaluator.

    ``tol`` is the target absolute error, ``max_terms`` caps the eta series
    length and ``mellin_panels`` is the subdivision limit handed to each
    adaptive quadrature call.
    """

    tol: float = 1e-10
    max_terms: int = 4000
    mellin_panels: int = 200

    def __post_init__(self):
        check_positive("tol", self.tol)
        if self.max_terms < 16:
            raise DomainError("max_terms must be >= 16")
        if self.mellin_panels < 1:
            raise DomainError("mellin_panels must be >= 1")


DEFAULT_CONFIG = EvalConfig()


# ----------------------------------------------------------------------------
# guards


def _check_pole(s: complex):
    if abs(s - 1.0) < POLE_GUARD:
        raise PoleProximity(f"s = {s} is within {POLE_GUARD} of the pole at 1")


def _prefactor_root_distance(s: complex) -> float:
    """Distance to the nearest root 1 + 2 pi i k / ln 2 with k != 0."""
    k = round(s.imag * LOG2 / (2.0 * math.pi))
    if k == 0:
        k = 1 if s.imag >= 0 else -1
    return abs(s - complex(1.0, 2.0 * math.pi * k / LOG2))


def eta_prefactor(s):
    """1 - 2**(1 - s), accurate near s = 1."""
    return -expm1c((1.0 - np.asarray(s, dtype=complex)) * LOG2)


# ----------------------------------------------------------------------------
# alternating series


@lru_cache(maxsize=64)
def _cvz_weights(n: int) -> np.ndarray:
    """Signed weights c_k with eta(s) ~ sum_k c_k (k+1)**-s, k < n.

    c_k = (-1)**k (d_n - d_k)/d_n with
    d_k = n sum_{i<=k} (n+i-1)! 4**i / ((n-i)! (2i)!), built in log space.
    """
    i = np.arange(n + 1, dtype=float)
    logs = (math.log(n) + sps.gammaln(n + i) - sps.gammaln(n - i + 1)
            - sps.gammaln(2 * i + 1) + i * math.log(4.0))
    a = np.exp(logs - logs.max())
    tail = np.cumsum(a[::-1])[::-1]  # tail[k] = sum_{i>=k} a_i
    w = tail[1:n + 1] / tail[0]      # (d_n - d_k)/d_n for k = 0..n-1
    w.setflags(write=False)
    signs = np.where(np.arange(n) % 2 == 0, 1.0, -1.0)
    out = signs * w
    out.setflags(write=False)
    return out


def _eta_log_bound_coeff(s: np.ndarray, prefactor: np.ndarray) -> np.ndarray:
    """log of 2 Gamma(sigma)/|Gamma(s)|/|1 - 2**(1-s)|, the n-independent
    part of the truncation bound."""
    sigma = s.real
    return (LOG2 + sps.gammaln(sigma) - log_gamma(s, check_poles=False).real
            - np.log(np.abs(prefactor)))


def _terms_needed(log_coeff: np.ndarray, tol: float) -> np.ndarray:
    n = np.ceil((log_coeff - math.log(0.5 * tol)) / _CVZ_BASE)
    return np.maximum(n, _MIN_TERMS).astype(int)


def _eta_block(s: np.ndarray, n: int):
    """Accelerated alternating sum for all points in ``s`` with n terms.

    Returns the sums and sum_k |c_k| (k+1)**-sigma (for rounding estimates).
    """
    c = _cvz_weights(n)
    logk = np.log(np.arange(1, n + 1, dtype=float))
    out = np.empty(s.shape, dtype=complex)
    mag = np.empty(s.shape, dtype=float)
    chunk = max(1, 2_000_000 // n)
    for lo in range(0, s.size, chunk):
        ss = s[lo:lo + chunk]
        e = np.exp(-np.outer(ss, logk))
        out[lo:lo + chunk] = e @ c
        mag[lo:lo + chunk] = np.exp(-np.outer(ss.real, logk)) @ np.abs(c)
    return out, mag


def eta_series_array(s, tol: float = DEFAULT_CONFIG.tol, max_terms: int = DEFAULT_CONFIG.max_terms):
    """Vectorised zeta via the alternating series for ``Re s > 0``.

    Returns ``(values, abs_err, terms)`` arrays.  No guard checks are made
    here; callers route pole and prefactor-root points elsewhere.
    """
    s = np.asarray(s, dtype=complex).ravel()
    pref = eta_prefactor(s)
    log_coeff = _eta_log_bound_coeff(s, pref)
    need = _terms_needed(log_coeff, tol)
    if np.any(need > max_terms):
        worst = s[np.argmax(need)]
        raise Nonconvergence(
            f"eta series needs {need.max()} terms at s = {worst} (max_terms = {max_terms})")
    # bucket the term counts so points share weight vectors
    buckets = np.minimum(((need + 15) // 16) * 16, max_terms)
    vals = np.empty(s.shape, dtype=complex)
    errs = np.empty(s.shape, dtype=float)
    for n in np.unique(buckets):
        idx = np.nonzero(buckets == n)[0]
        eta, mag = _eta_block(s[idx], int(n))
        trunc = np.exp(log_coeff[idx] - n * _CVZ_BASE)
        apref = np.abs(pref[idx])
        rounding = _EPS * (n + np.abs(s[idx].imag) * math.log(n + 1) + 4.0) * mag / apref
        vals[idx] = eta / pref[idx]
        errs[idx] = trunc + rounding + 4.0 * _EPS * np.abs(vals[idx])
    return vals, errs, buckets


def eta_eval(s, cfg: EvalConfig = DEFAULT_CONFIG) -> ZetaValue:
    """zeta(s) from the accelerated alternating Dirichlet series (Re s > 0)."""
    p = as_point(s)
    z = p.s
    if p.sigma <= 0:
        raise DomainError(f"eta series requires Re s > 0, got {z}")
    _check_pole(z)
    if _prefactor_root_distance(z) < PREFACTOR_GUARD:
        raise PrefactorSingularity(f"1 - 2**(1-s) vanishes near s = {z}; use mellin_eval")
    vals, errs, terms = eta_series_array(np.array([z]), cfg.tol, cfg.max_terms)
    return ZetaValue(complex(vals[0]), float(errs[0]), Method.ETA, int(terms[0]))


# ----------------------------------------------------------------------------
# regulated Mellin representation


@lru_cache(maxsize=1)
def _bernoulli_coeffs(count: int = 40) -> np.ndarray:
    # g(x) = 1/(e^x - 1) - 1/x = sum_k B_{k+1} x^k / (k+1)!
    b = sps.bernoulli(count + 1)
    k = np.arange(count)
    return b[k + 1] / sps.factorial(k + 1)


def _bose(x: complex) -> complex:
    # 1/(e^x - 1), stable for large Re x
    if x.real > 30.0:
        e = cmath.exp(-x)
        return e / (1.0 - e)
    if x.imag == 0:
        return 1.0 / math.expm1(x.real)
    return 1.0 / (cmath.exp(x) - 1.0)


def _mellin_tail_cutoff(sigma: float, c: float, target: float) -> tuple[float, float]:
    """Smallest X (on a geometric ladder) whose tail bound is below target.

    Bounds int_X^inf r**(sigma-1) / (e**(c r) - 1) dr using
    r**(sigma-1) <= X**(sigma-1) exp((sigma-1)(r-X)/X) for sigma > 1.
    """
    x = max(1.0, 2.0 * max(sigma - 1.0, 0.0) / c)
    for _ in range(400):
        rate = c - max(sigma - 1.0, 0.0) / x
        if rate > 0:
            bound = x ** (sigma - 1.0) * math.exp(-c * x) / (rate * -math.expm1(-c * x))
            if bound < target:
                return x, bound
        x *= 1.25
    raise QuadratureFailure("could not find a Mellin tail cutoff")


def _quad_complex(fn, a: float, b: float, epsabs: float, limit: int):
    with np.errstate(all="ignore"):
        val, err, info = integrate.quad(fn, a, b, epsabs=epsabs, epsrel=0.0, limit=limit,
                                        complex_func=True, full_output=True)
    err = complex(err)
    abserr = math.hypot(err.real, err.imag)
    msgs = [m for part in ("real", "imag") for m in info[part][1:]]
    hit_limit = any("maximum number of subdivisions" in str(m) for m in msgs)
    return complex(val), abserr, hit_limit


def mellin_eval(s, cfg: EvalConfig = DEFAULT_CONFIG) -> ZetaValue:
    """zeta(s) from the regulated Mellin integral (Re s > 0).

    With ``P = e^{i phi}`` and the ray ``x = r P`` the representation reads

        zeta(s) Gamma(s) = e^{i phi s} [ int_0^1 (1/(e^x - 1) - 1/x) r^{s-1} dr
                                        + int_1^inf r^{s-1} / (e^x - 1) dr ]
                           + P^{s-1} / (s - 1)

    which is the real-axis form for phi = 0.  The angle is pushed towards
    sign(t) pi/2 for large |t| so that no catastrophic cancellation occurs.
    """
    p = as_point(s)
    z = p.s
    if p.sigma <= 0:
        raise DomainError(f"Mellin representation requires Re s > 0, got {z}")
    _check_pole(z)
    sigma, t = p.sigma, p.t
    phi = 0.0
    if abs(t) > MELLIN_SLACK / (0.5 * math.pi):
        phi = math.copysign(0.5 * math.pi - MELLIN_SLACK / abs(t), t)
    rot = cmath.exp(1j * phi)
    c = math.cos(phi)
    lg = complex(log_gamma(z))
    scale = cmath.exp(1j * phi * z - lg)  # e^{i phi s} / Gamma(s)
    ascale = abs(scale)
    target = cfg.tol / max(ascale, 1e-300)
    zm1 = z - 1.0

    # near-origin piece of the first integral by its Bernoulli expansion
    r0 = _MELLIN_SERIES_RADIUS
    coeffs = _bernoulli_coeffs()
    k = np.arange(coeffs.size)
    series_terms = coeffs * np.exp(1j * k * phi) * np.exp((k + z) * math.log(r0)) / (k + z)
    head = complex(series_terms.sum())
    series_err = 4.0 * abs(series_terms[-1]) + _EPS * float(np.abs(series_terms).sum())

    def f_lower(r):
        x = r * rot
        return (_bose(x) - 1.0 / x) * cmath.exp(zm1 * math.log(r))

    def f_upper(r):
        return _bose(r * rot) * cmath.exp(zm1 * math.log(r))

    x_cut, tail_bound = _mellin_tail_cutoff(sigma, c, 0.1 * target)
    edges = [r0, 1.0]
    npan = max(1, math.ceil((x_cut - 1.0) / math.pi))
    edges_up = np.linspace(1.0, x_cut, npan + 1)
    panels = [(f_lower, edges[0], edges[1])] + [
        (f_upper, float(a), float(b)) for a, b in zip(edges_up[:-1], edges_up[1:])]
    per_panel = 0.5 * target / len(panels)
    total = head
    quad_err = 0.0
    magnitude = float(np.abs(series_terms).sum())
    hit_limit = False
    for fn, a, b in panels:
        val, err, limited = _quad_complex(fn, a, b, per_panel, cfg.mellin_panels)
        hit_limit |= limited
        total += val
        quad_err += err
        magnitude += abs(val)
    pole_term = cmath.exp(1j * phi * zm1 - lg) / zm1
    value = scale * total + pole_term
    abs_err = (ascale * (quad_err + series_err + tail_bound + 32 * _EPS * magnitude)
               + 8 * _EPS * abs(pole_term) + 1e-14 * abs(value))
    if hit_limit and abs_err > 100 * cfg.tol:
        raise QuadratureFailure(
            f"Mellin quadrature hit the panel limit with abs_err {abs_err:.2e} at s = {z}")
    return ZetaValue(value, abs_err, Method.MELLIN, len(panels))


# ----------------------------------------------------------------------------
# functional equation


def chi_array(s) -> np.ndarray:
    """chi(s) = 2^s pi^(s-1) sin(pi s / 2) Gamma(1 - s), evaluated in log space."""
    s = np.asarray(s, dtype=complex)
    with np.errstate(divide="ignore", invalid="ignore"):
        logchi = s * LOG2 + (s - 1.0) * math.log(math.pi) + log_sinpi(0.5 * s) + log_gamma(1.0 - s)
        out = np.exp(logchi)
    return np.where(np.isneginf(logchi.real), 0.0, out)


def chi_factor(s) -> complex:
    """chi(s) with zeta(s) = chi(s) zeta(1 - s)."""
    z = as_point(s).s
    return complex(chi_array(np.array([z]))[0])


def _chi_rel_err(s: complex) -> float:
    return 64 * _EPS * (1.0 + abs(s) * (1.0 + math.log1p(abs(s))))


def zeta_eval(s, cfg: EvalConfig = DEFAULT_CONFIG) -> ZetaValue:
    """Dispatching evaluator valid on the whole plane except s = 1."""
    p = as_point(s)
    z = p.s
    _check_pole(z)
    if abs(z - 1.0) < LAURENT_RADIUS:
        return _laurent(z)
    if p.sigma > 0:
        try:
            return eta_eval(p, cfg)
        except PrefactorSingularity:
            return mellin_eval(p, cfg)
    if abs(z) < POLE_GUARD:
        # zeta(0) = -1/2, zeta'(0) = -log(2 pi)/2
        return ZetaValue(-0.5 - 0.5 * math.log(2 * math.pi) * z, abs(z) ** 2, Method.REFLECTION, 0)
    w = 1.0 - z
    try:
        inner = eta_eval(w, cfg)
    except PrefactorSingularity:
        inner = mellin_eval(w, cfg)
    chi = chi_factor(z)
    value = chi * inner.value
    abs_err = abs(chi) * inner.abs_err + abs(value) * _chi_rel_err(z)
    return ZetaValue(value, abs_err, Method.REFLECTION, inner.terms_used)


def _laurent(z: complex) -> ZetaValue:
    d = z - 1.0
    # the next Laurent coefficient is -gamma_1 ~ 0.0728; 0.1 |s-1| covers the tail
    return ZetaValue(1.0 / d + EULER_GAMMA, 0.1 * abs(d), Method.LAURENT, 1)


def zeta_array(s, cfg: EvalConfig = DEFAULT_CONFIG):
    """Vectorised ``zeta_eval``: returns ``(values, abs_err)`` arrays.

    Bulk points in ``Re s > 0`` go through the series in one pass; the rare
    special points (Laurent disk, prefactor roots, left half plane) fall back
    to the scalar dispatcher.
    """
    s = as_complex_array(s)
    shape = s.shape
    flat = s.ravel()
    if np.any(np.abs(flat - 1.0) < POLE_GUARD):
        raise PoleProximity("evaluation point within 1e-12 of s = 1")
    vals = np.empty(flat.shape, dtype=complex)
    errs = np.empty(flat.shape, dtype=float)
    k = np.round(flat.imag * LOG2 / (2 * math.pi))
    k = np.where(k == 0, np.where(flat.imag >= 0, 1.0, -1.0), k)
    near_root = np.abs(flat - (1.0 + 2j * math.pi * k / LOG2)) < PREFACTOR_GUARD
    bulk = (flat.real > 0) & (np.abs(flat - 1.0) >= LAURENT_RADIUS) & ~near_root
    if np.any(bulk):
        v, e, _ = eta_series_array(flat[bulk], cfg.tol, cfg.max_terms)
        vals[bulk] = v
        errs[bulk] = e
    for i in np.nonzero(~bulk)[0]:
        zv = zeta_eval(complex(flat[i]), cfg)
        vals[i] = zv.value
        errs[i] = zv.abs_err
    return vals.reshape(shape), errs.reshape(shape)


# ----------------------------------------------------------------------------
# Euler product oracle


def primes_up_to(n: int) -> np.ndarray:
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for q in range(2, int(n ** 0.5) + 1):
        if sieve[q]:
            sieve[q * q::q] = False
    return np.nonzero(sieve)[0]


def euler_product_eval(s, prime_bound: int) -> complex:
    """Truncated Euler product over primes <= prime_bound (Re s > 1 only)."""
    z = as_point(s).s
    if z.real <= 1.0:
        raise DomainError(f"Euler product needs Re s > 1, got {z}")
    primes = primes_up_to(int(prime_bound)).astype(float)
    terms = np.exp(-z * np.log(primes))
    # log of prod (1 - p^-s)^-1, summed smallest terms first
    logs = -np.log1p(-terms)
    return complex(np.exp(logs[::-1].sum()))


# ----------------------------------------------------------------------------
# critical line


THETA_SWITCH = 10.0
THETA_ASYMPTOTIC_ERR = 1e-8


def hardy_theta_array(t) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    if np.any(t < 1.0):
        raise DomainError("hardy_theta requires t >= 1")
    out = np.empty(t.shape, dtype=float)
    hi = t >= THETA_SWITCH
    th = t[hi]
    out[hi] = (0.5 * th * np.log(th / (2 * math.pi)) - 0.5 * th - math.pi / 8
               + 1.0 / (48.0 * th) + 7.0 / (5760.0 * th ** 3))
    lo = ~hi
    if np.any(lo):
        tl = t[lo]
        out[lo] = log_gamma(0.25 + 0.5j * tl).imag - 0.5 * tl * math.log(math.pi)
    return out


def hardy_theta(t: float) -> float:
    """Riemann-Siegel theta.

    Uses the asymptotic expansion through the t**-3 term for t >= 10 (error
    below 1e-8) and the exact Gamma phase on [1, 10) where the expansion is
    not accurate enough.
    """
    return float(hardy_theta_array(np.array([float(t)]))[0])


def theta_error_bound(t) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    return np.where(t >= THETA_SWITCH, THETA_ASYMPTOTIC_ERR, 1e-12 * (1 + t))


@dataclass(frozen=True)
class HardyZValue:
    value: float
    residual: float
    residual_bound: float


def hardy_z_array(t, cfg: EvalConfig = DEFAULT_CONFIG):
    """Z(t) for an array of heights; returns ``(Z, residual, bound)``."""
    t = np.asarray(t, dtype=float)
    theta = hardy_theta_array(t)
    zv, ze = zeta_array(0.5 + 1j * t, cfg)
    prod = np.exp(1j * theta) * zv
    bound = 10.0 * (ze + theta_error_bound(t)) * (1.0 + np.abs(zv))
    return prod.real, prod.imag, bound


def hardy_z_detail(t: float, cfg: EvalConfig = DEFAULT_CONFIG) -> HardyZValue:
    z, r, b = hardy_z_array(np.array([float(t)]), cfg)
    return HardyZValue(float(z[0]), float(r[0]), float(b[0]))


def hardy_z(t: float, cfg: EvalConfig = DEFAULT_CONFIG) -> float:
    """Hardy's Z(t) = Re[e^{i theta(t)} zeta(1/2 + i t)]."""
    return hardy_z_detail(t, cfg).value


__all__ = [
    "ComplexPoint", "EvalConfig", "Method", "ZetaValue", "HardyZValue",
    "eta_eval", "mellin_eval", "chi_factor", "chi_array", "zeta_eval", "zeta_array",
    "eta_series_array", "euler_product_eval", "primes_up_to",
    "hardy_theta", "hardy_theta_array", "hardy_z", "hardy_z_array", "hardy_z_detail",
    "EULER_GAMMA",
]
