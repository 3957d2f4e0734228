"""Complex log-gamma and trigonometric helpers used by the zeta engine.

All routines are vectorised over numpy arrays and work in log space so that
factors such as ``1/Gamma(1/2 + 500i)`` (of size ``e**785``) can be combined
without overflow.
"""

from __future__ import annotations

import numpy as np

from .errors import PoleOfGamma

# Lanczos approximation, g = 7, nine coefficients (Godfrey).
_LANCZOS_G = 7.0
_LANCZOS_P = np.array([
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
])
_HALF_LOG_2PI = 0.5 * np.log(2.0 * np.pi)
_LOG_PI = np.log(np.pi)
POLE_GUARD = 1e-12


def sinpi(x):
    """sin(pi x) for real x, exactly zero at the integers."""
    x = np.asarray(x, dtype=float)
    r = x - 2.0 * np.round(0.5 * x)  # r in [-1, 1]
    out = np.sin(np.pi * r)
    return np.where(r == np.round(r), 0.0, out)


def cospi(x):
    """cos(pi x) for real x, exactly zero at the half-integers."""
    x = np.asarray(x, dtype=float)
    r = x - 2.0 * np.round(0.5 * x)
    out = np.cos(np.pi * r)
    return np.where(np.abs(r) == 0.5, 0.0, out)


def expm1c(z):
    """exp(z) - 1 for complex z without cancellation near z = 0."""
    z = np.asarray(z, dtype=complex)
    x, y = z.real, z.imag
    half = np.sin(0.5 * y)
    re = np.expm1(x) * np.cos(y) - 2.0 * half * half
    im = np.exp(x) * np.sin(y)
    return re + 1j * im


def log_sinpi(z):
    """A logarithm of sin(pi z); ``-inf`` where sin(pi z) vanishes exactly.

    The branch of the imaginary part is unspecified: callers only ever
    exponentiate the result or take its real part.
    """
    z = np.asarray(z, dtype=complex)
    a, b = z.real, z.imag
    out = np.empty(z.shape, dtype=complex)
    small = np.abs(b) <= 15.0
    with np.errstate(divide="ignore"):
        if np.any(small):
            aa, bb = a[small], b[small]
            val = sinpi(aa) * np.cosh(np.pi * bb) + 1j * cospi(aa) * np.sinh(np.pi * bb)
            out[small] = np.log(val)
        big = ~small
        if np.any(big):
            zz = z[big]
            up = zz.imag > 0
            # sin(pi z) = e^{-i pi z} (1 - e^{2 i pi z}) / (-2i) for Im z > 0, mirrored below.
            sgn = np.where(up, 1.0, -1.0)
            out[big] = (-1j * sgn * np.pi * zz
                        + np.log1p(-np.exp(2j * sgn * np.pi * zz))
                        - np.log(-2j * sgn))
    return out


def _lanczos_log_gamma(z):
    # valid for Re z >= 1/2; principal branch
    zm1 = z - 1.0
    x = np.full(z.shape, _LANCZOS_P[0], dtype=complex)
    for i in range(1, len(_LANCZOS_P)):
        x = x + _LANCZOS_P[i] / (zm1 + i)
    tt = zm1 + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (zm1 + 0.5) * np.log(tt) - tt + np.log(x)


def _is_gamma_pole(z):
    re = z.real
    return (re <= 0.5) & (np.abs(z - np.round(re)) < POLE_GUARD) & (np.round(re) <= 0)


def log_gamma(z, check_poles: bool = True):
    """log Gamma(z) for complex z.

    For ``Re z > 0`` the result is the principal branch (continuous from the
    positive real axis), which is what the Riemann-Siegel theta phase needs.
    For ``Re z <= 0`` the reflection formula is used and only ``exp`` of the
    result is meaningful.
    """
    z = np.asarray(z, dtype=complex)
    scalar = z.ndim == 0
    z = np.atleast_1d(z)
    if check_poles and np.any(_is_gamma_pole(z)):
        raise PoleOfGamma("Gamma has a pole at a non-positive integer")
    out = np.empty(z.shape, dtype=complex)
    right = z.real >= 0.5
    mid = (z.real > 0) & ~right
    left = z.real <= 0
    if np.any(right):
        out[right] = _lanczos_log_gamma(z[right])
    if np.any(mid):
        zz = z[mid]
        out[mid] = _lanczos_log_gamma(zz + 1.0) - np.log(zz)
    if np.any(left):
        zz = z[left]
        out[left] = _LOG_PI - log_sinpi(zz) - _lanczos_log_gamma(1.0 - zz)
    return out[0] if scalar else out


def gamma_complex(s) -> complex:
    """Gamma(s) for a single complex argument (reflection below Re s = 1/2)."""
    z = complex(s)
    if z.real >= 0.5:
        return complex(np.exp(_lanczos_log_gamma(np.array([z]))[0]))
    if _is_gamma_pole(np.array([z]))[0]:
        raise PoleOfGamma(f"Gamma has a pole at {z}")
    # Gamma(z) Gamma(1 - z) = pi / sin(pi z), with sin(pi z) in closed form
    w = 1.0 - z
    g = complex(np.exp(_lanczos_log_gamma(np.array([w]))[0]))
    sn = complex(sinpi(z.real) * np.cosh(np.pi * z.imag)
                 + 1j * cospi(z.real) * np.sinh(np.pi * z.imag))
    return np.pi / (sn * g)
