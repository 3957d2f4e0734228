"""Asymptotic approximations of zero ordinates and their comparison with
located zeros.

The corrected formula is

    gamma_n ~ (2 pi n / log n) * (1 + a / sqrt(n log n) + b / n
                                  + c log log n / log n + d / n**7)

with (a, b, c, d) fitted by linear least squares on the multiplicative
residual gamma_n log n / (2 pi n) - 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.utils.validation import check_is_fitted

from .errors import DomainError, NoConvergence, RankDeficient
from .zeros import ZeroRecord, count_zeros_rvm, count_zeros_rvm_deriv

MIN_SPAN = 4
BASIS_NAMES = ("a", "b", "c", "d")


def _check_n(n) -> np.ndarray:
    arr = np.asarray(n, dtype=float)
    if np.any(arr < 2) or np.any(arr != np.round(arr)):
        raise DomainError("n must be an integer >= 2")
    return arr


def gamma_main_term(n):
    """2 pi n / log n."""
    arr = _check_n(n)
    out = 2.0 * np.pi * arr / np.log(arr)
    return float(out) if np.ndim(n) == 0 else out


def basis(n) -> np.ndarray:
    """Design matrix with columns 1/sqrt(n log n), 1/n, log log n / log n, 1/n**7."""
    n = _check_n(n)
    ln = np.log(n)
    return np.column_stack([1.0 / np.sqrt(n * ln), 1.0 / n, np.log(ln) / ln, n ** -7.0])


@dataclass(frozen=True)
class ApproxParams:
    a: float = 0.0
    b: float = 0.0
    c: float = 0.0
    d: float = 0.0
    n_min: int | None = None
    n_max: int | None = None
    rms_residual: float | None = None
    rms_rel_error: float | None = None
    std_errors: tuple | None = None

    def coefficients(self) -> np.ndarray:
        return np.array([self.a, self.b, self.c, self.d])

    def to_dict(self) -> dict:
        return {
            "a": self.a, "b": self.b, "c": self.c, "d": self.d,
            "n_min": self.n_min, "n_max": self.n_max,
            "rms_residual": self.rms_residual,
            "rms_rel_error": self.rms_rel_error,
            "std_errors": None if self.std_errors is None else dict(zip(BASIS_NAMES, self.std_errors)),
        }


def gamma_approx(n, params: ApproxParams):
    """Corrected approximation of gamma_n."""
    arr = _check_n(n)
    corr = basis(arr.ravel()) @ params.coefficients()
    out = gamma_main_term(arr.ravel()) * (1.0 + corr)
    out = out.reshape(arr.shape)
    return float(out) if np.ndim(n) == 0 else out


def _lstsq(n: np.ndarray, gamma: np.ndarray):
    X = basis(n)
    y = gamma * np.log(n) / (2.0 * np.pi * n) - 1.0
    # column scaling: 1/n**7 is ~1e-7 of the other columns at n = 10
    scale = np.linalg.norm(X, axis=0)
    Xs = X / scale
    coef_s, _, rank, sv = np.linalg.lstsq(Xs, y, rcond=None)
    if rank < X.shape[1] or sv[-1] / sv[0] < 1e-14:
        raise RankDeficient(f"design matrix rank {rank}, condition {sv[0] / max(sv[-1], 1e-300):.3g}")
    coef = coef_s / scale
    resid = y - X @ coef
    dof = max(n.size - X.shape[1], 1)
    s2 = float(resid @ resid) / dof
    cov_s = s2 * np.linalg.inv(Xs.T @ Xs)
    std = np.sqrt(np.maximum(np.diag(cov_s), 0.0)) / scale
    return coef, resid, std


def _records_in_range(zeros, n_min: int, n_max: int):
    by_index = {z.index: z.gamma for z in zeros}
    missing = [k for k in range(n_min, n_max + 1) if k not in by_index]
    if missing:
        raise DomainError(f"zeros do not cover ranks {missing[0]}..{missing[-1]}")
    n = np.arange(n_min, n_max + 1, dtype=float)
    return n, np.array([by_index[int(k)] for k in n])


def fit_constants(zeros: list[ZeroRecord], n_min: int = 10, n_max: int = 300) -> ApproxParams:
    """Least-squares fit of (a, b, c, d) on ranks n_min..n_max."""
    if n_min < 2:
        raise DomainError("n_min must be >= 2")
    if n_max - n_min < MIN_SPAN:
        raise RankDeficient(f"need n_max - n_min >= {MIN_SPAN} for four coefficients")
    n, g = _records_in_range(zeros, n_min, n_max)
    return _fit_arrays(n, g)


def _fit_arrays(n, g) -> ApproxParams:
    coef, resid, std = _lstsq(n, g)
    p = ApproxParams(*map(float, coef))
    rel = (gamma_approx(n, p) - g) / g
    return ApproxParams(*map(float, coef), n_min=int(n[0]), n_max=int(n[-1]),
                        rms_residual=float(np.sqrt(np.mean(resid ** 2))),
                        rms_rel_error=float(np.sqrt(np.mean(rel ** 2))),
                        std_errors=tuple(map(float, std)))


class GammaApproximator(RegressorMixin, BaseEstimator):
    """Estimator wrapper around the corrected approximation.

    ``X`` holds ranks n (shape (k,) or (k, 1)); ``y`` the ordinates gamma_n.
    After ``fit`` the coefficients are in ``coef_`` (order a, b, c, d).
    """

    def __init__(self, min_span: int = MIN_SPAN):
        self.min_span = min_span

    @staticmethod
    def _ranks(X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if X.ndim == 2:
            if X.shape[1] != 1:
                raise DomainError("X must have a single column of ranks")
            X = X[:, 0]
        return X

    def fit(self, X, y):
        n = self._ranks(X)
        y = np.asarray(y, dtype=float)
        if n.shape != y.shape:
            raise DomainError("X and y lengths differ")
        if n.max() - n.min() < self.min_span:
            raise RankDeficient(f"need a rank span >= {self.min_span}")
        order = np.argsort(n)
        self.params_ = _fit_arrays(n[order], y[order])
        self.coef_ = self.params_.coefficients()
        self.std_errors_ = np.array(self.params_.std_errors)
        self.n_features_in_ = 1
        return self

    def predict(self, X):
        check_is_fitted(self, "coef_")
        return gamma_approx(self._ranks(X), self.params_)


def inverse_rvm(n: int, tol: float = 1e-10, max_iter: int = 100) -> float:
    """T with count_zeros_rvm(T) = n, by safeguarded Newton."""
    if not (n >= 1 and int(n) == n):
        raise DomainError(f"n must be a positive integer, got {n}")
    lo = 2.0 * math.pi * math.e  # N is increasing from here, N(lo) = 7/8 < 1
    hi = max(2.0 * lo, 4.0 * math.pi * n)
    while count_zeros_rvm(hi) < n:
        hi *= 2.0
    T = min(max(2.0 * math.pi * n / math.log(n + 2), lo), hi)
    for _ in range(max_iter):
        g = count_zeros_rvm(T) - n
        if g > 0:
            hi = min(hi, T)
        else:
            lo = max(lo, T)
        step = g / count_zeros_rvm_deriv(T)
        new = T - step
        if not (lo < new < hi):
            new = 0.5 * (lo + hi)
        if abs(new - T) <= tol or hi - lo <= tol:
            return new
        T = new
    raise NoConvergence(f"inverse_rvm({n}) did not converge in {max_iter} iterations")


# ----------------------------------------------------------------------------
# comparison tables

FORMULAS = ("main_term", "fitted", "inverse_rvm")


@dataclass(frozen=True)
class ComparisonRow:
    n: int
    gamma_true: float
    estimates: dict
    rel_errors: dict


@dataclass(frozen=True)
class ComparisonSummary:
    rows: list
    rms: dict
    max_rel: dict
    params: ApproxParams | None = None
    meta: dict = field(default_factory=dict)


def compare_table(zeros: list[ZeroRecord], n_min: int, n_max: int, formulas=FORMULAS,
                  params: ApproxParams | None = None) -> ComparisonSummary:
    """Per-rank estimates and relative errors; fitted params default to a
    fit on the same range."""
    unknown = set(formulas) - set(FORMULAS)
    if unknown:
        raise DomainError(f"unknown formulas: {sorted(unknown)}")
    n, g = _records_in_range(zeros, n_min, n_max)
    if "fitted" in formulas and params is None:
        params = fit_constants(zeros, n_min, n_max)
    est = {}
    if "main_term" in formulas:
        est["main_term"] = gamma_main_term(n)
    if "fitted" in formulas:
        est["fitted"] = gamma_approx(n, params)
    if "inverse_rvm" in formulas:
        est["inverse_rvm"] = np.array([inverse_rvm(int(k)) for k in n])
    rel = {k: np.abs(v - g) / g for k, v in est.items()}
    rows = [ComparisonRow(int(n[i]), float(g[i]),
                          {k: float(v[i]) for k, v in est.items()},
                          {k: float(v[i]) for k, v in rel.items()})
            for i in range(n.size)]
    rms = {k: float(np.sqrt(np.mean(v ** 2))) for k, v in rel.items()}
    mx = {k: float(np.max(v)) for k, v in rel.items()}
    return ComparisonSummary(rows, rms, mx, params)
