import math

import mpmath
import numpy as np
import pytest

from zetareg.errors import DomainError, PoleProximity, PrefactorSingularity
from zetareg.zeta_engine import (
    EULER_GAMMA,
    EvalConfig,
    Method,
    chi_factor,
    eta_eval,
    euler_product_eval,
    hardy_theta,
    hardy_z,
    hardy_z_detail,
    mellin_eval,
    zeta_array,
    zeta_eval,
)


def mp_zeta(s):
    with mpmath.workdps(30):
        return complex(mpmath.zeta(mpmath.mpc(s.real, s.imag)))


def test_eta_at_two_against_partial_sum():
    # sum_{n<=N} n^-2 plus the integral tail bracket
    N = 10 ** 6
    n = np.arange(1, N + 1, dtype=float)
    head = np.sum(1.0 / n[::-1] ** 2)
    oracle = head + 1.0 / (N + 0.5)
    v = eta_eval(2.0)
    assert abs(v.value - oracle) < 1e-10
    assert v.method is Method.ETA
    assert v.terms_used >= 1


def test_eta_at_half():
    v = eta_eval(0.5)
    assert abs(v.value - mp_zeta(0.5)) <= max(v.abs_err, 1e-12)
    assert v.value.real == pytest.approx(-1.4603545088, abs=1e-9)


def test_eta_pole():
    with pytest.raises(PoleProximity):
        eta_eval(1.0)


def test_eta_prefactor_root_redirects():
    s = 1 + 2j * math.pi / math.log(2)
    with pytest.raises(PrefactorSingularity):
        eta_eval(s)
    v = zeta_eval(s)
    assert v.method is Method.MELLIN
    assert abs(v.value - mp_zeta(s)) < 1e-8


@pytest.mark.parametrize("s", [2.0, 0.25 + 3j, 0.8 - 20j, 0.3 + 47.5j])
def test_mellin_agrees_with_eta(s):
    a, b = eta_eval(s), mellin_eval(s)
    assert abs(a.value - b.value) <= a.abs_err + b.abs_err
    assert abs(b.value - mp_zeta(s)) <= b.abs_err + 1e-14


def test_mellin_at_first_zero(mp_zeros):
    v = mellin_eval(0.5 + 1j * mp_zeros[0])
    assert abs(v.value) <= 1e-6


def test_chi_identities():
    assert abs(chi_factor(0.5) - 1) < 1e-14
    s = 0.3 + 5j
    assert abs(chi_factor(s) * chi_factor(1 - s) - 1) < 1e-12
    assert chi_factor(-2) == 0


@pytest.mark.parametrize("n", [2, 4, 6, 8])
def test_trivial_zeros(n):
    v = zeta_eval(-n)
    assert abs(v.value) <= 1e-10
    assert v.method is Method.REFLECTION


def test_reflection_against_mpmath():
    for s in [-0.5 + 3j, -3.3 - 7j, 0.0 + 2j, -1.0]:
        v = zeta_eval(s)
        ref = mp_zeta(s)
        assert abs(v.value - ref) <= max(v.abs_err, 1e-12 * abs(ref)), s


def test_laurent_near_pole():
    v = zeta_eval(1 + 1e-4)
    assert v.method is Method.LAURENT
    assert abs(v.value - (1e4 + EULER_GAMMA)) < 0.1
    assert abs(v.value - mp_zeta(1 + 1e-4)) <= v.abs_err


def test_zeta_value_at_zero():
    assert zeta_eval(0).value == pytest.approx(-0.5, abs=1e-14)


def test_euler_product_oracles():
    assert abs(euler_product_eval(2, 10 ** 6) - math.pi ** 2 / 6) < 1e-6
    assert abs(euler_product_eval(3, 10 ** 5) - zeta_eval(3).value) < 1e-8
    assert abs(euler_product_eval(4, 10 ** 3) - zeta_eval(4).value) < 1e-9
    with pytest.raises(DomainError):
        euler_product_eval(1.0, 100)


def test_conjugate_symmetry():
    for s in [0.3 + 7j, 0.75 + 33j, 2.5 + 1j]:
        a, b = zeta_eval(s), zeta_eval(s.conjugate())
        assert abs(a.value.conjugate() - b.value) <= 2 * max(a.abs_err, 1e-15)


def test_zeta_array_matches_scalar():
    s = np.array([0.2 + 3j, 0.5 + 14j, 1 + 1e-3, -2.0, 0.7 - 40j, 1 + 2j * math.pi / math.log(2)])
    vals, errs = zeta_array(s)
    for z, v, e in zip(s, vals, errs):
        w = zeta_eval(complex(z))
        assert abs(v - w.value) <= 1e-12 + e


def test_theta():
    with pytest.raises(DomainError):
        hardy_theta(0.5)
    assert hardy_theta(20) > hardy_theta(15)
    assert abs(hardy_theta(17.8455995)) < 1e-6
    with mpmath.workdps(40):
        ref = float(mpmath.siegeltheta(100))
    assert abs(hardy_theta(100) - ref) < 1e-8
    for t in (1.5, 4.0, 9.9):
        with mpmath.workdps(30):
            assert abs(hardy_theta(t) - float(mpmath.siegeltheta(t))) < 1e-10


def test_hardy_z(mp_zeros):
    d = hardy_z_detail(20.0)
    assert abs(abs(d.value) - abs(zeta_eval(0.5 + 20j).value)) < 1e-10
    assert hardy_z(14.0) * hardy_z(14.3) < 0
    assert abs(hardy_z(mp_zeros[0])) < 1e-6
    with mpmath.workdps(25):
        for t in (30.0, 101.5, 250.25):
            assert abs(hardy_z(t) - float(mpmath.siegelz(t))) < 1e-8


def test_error_estimates_are_honest():
    rng = np.random.default_rng(7)
    sig = rng.uniform(0.02, 1.5, 200)
    t = rng.uniform(-60, 60, 200)
    ok = 0
    for s in sig + 1j * t:
        if abs(s - 1) < 0.05:
            ok += 1
            continue
        v = zeta_eval(complex(s))
        ok += abs(v.value - mp_zeta(complex(s))) <= v.abs_err
    assert ok >= 198


def test_config_validation():
    with pytest.raises(DomainError):
        EvalConfig(tol=0)
    with pytest.raises(DomainError):
        EvalConfig(max_terms=8)
