import math

import numpy as np
import pytest

from zetareg.domain import build_domain
from zetareg.errors import DomainError, EmptyDomain, FitPoor, OnCriticalLine, ZeroValue
from zetareg.integrator import (
    FitKind,
    WeightParams,
    bound_check,
    divergence_probe,
    integrand,
    integrate_w,
    line_weight_integral,
    lower_bound_m_R,
    phi_projection,
    wr_sweep,
)
from zetareg.zeros import Base, InjectionSpec, inject_zeros
from zetareg.zeta_engine import eta_eval

ONE = inject_zeros([], Base.CONSTANT_ONE)
ZETA = inject_zeros([])
EPS = list(np.geomspace(5e-3, 1e-5, 10))


@pytest.fixture(scope="module")
def dom30(zeros_101):
    return build_domain(30, 0.45, [z for z in zeros_101 if z.gamma < 31])


@pytest.fixture(scope="module")
def w30(dom30):
    return integrate_w(ZETA, dom30, WeightParams(), 1e-7)


def test_weight_params_validation():
    with pytest.raises(DomainError):
        WeightParams(1.5, 0.5)
    with pytest.raises(DomainError):
        WeightParams(2, 1.0)


def test_integrand_examples():
    assert integrand(ONE, 0.75, WeightParams(2, 0.5)) == pytest.approx(2.0)
    z = eta_eval(0.75).value
    assert integrand(ZETA, 0.75, WeightParams(2, 0.5)) == pytest.approx(2 / abs(z) ** 2, rel=1e-12)
    with pytest.raises(OnCriticalLine):
        integrand(ZETA, 0.5 + 3j, WeightParams())
    f = inject_zeros([InjectionSpec(0.6, 30)], Base.CONSTANT_ONE)
    with pytest.raises(ZeroValue):
        integrand(f, 0.6 + 30j, WeightParams())


def test_line_weight_integral():
    assert line_weight_integral(0.1, 0.9, 0.5) == pytest.approx(2 * 0.4 ** 0.5 / 0.5)
    assert line_weight_integral(0.6, 0.9, 0.5) == pytest.approx(2 * (0.4 ** 0.5 - 0.1 ** 0.5))


@pytest.mark.parametrize("R", [1.0, 7.5, 40.0])
def test_constant_closed_form(R):
    d = build_domain(R, 0.1, [], walls="inner")
    r = integrate_w(ONE, d, WeightParams(2, 0.5), 1e-8)
    assert r.value == pytest.approx(2 * 0.4 ** 0.5 / 0.5, rel=1e-12)
    assert r.normalized and r.converged


def test_constant_one_sided_walls():
    d = build_domain(3, 0.1, [], walls=(0.6, 0.9))
    r = integrate_w(ONE, d, WeightParams(3, 0.3), 1e-10)
    assert r.value == pytest.approx(line_weight_integral(0.6, 0.9, 0.3), rel=1e-12)


def test_constant_with_disk_matches_area():
    # f = 1: rectangle integral of the weight minus the part under two disks
    from zetareg.errors import OverlapWithWallWarning
    from zetareg.zeros import ZeroRecord
    with pytest.warns(OverlapWithWallWarning):
        d = build_domain(5, 0.1, [ZeroRecord(1, 2.0, 1e-10)], walls=(0.6, 0.95), N0=1.0, alpha=2.0)
    r = integrate_w(ONE, d, WeightParams(2, 0.5), 1e-9)
    # the disk of radius 1/4 at 0.5 +- 2i reaches sigma = 0.75; remove its part by 1D quadrature
    from scipy import integrate
    rad = 0.25

    def chord(x):
        return 2 * math.sqrt(max(rad ** 2 - (x - 0.5) ** 2, 0.0)) * (x - 0.5) ** -0.5

    removed, _ = integrate.quad(chord, 0.6, 0.75, epsabs=1e-13)
    expected = (10 * line_weight_integral(0.6, 0.95, 0.5) - 2 * removed) / 10
    assert r.value == pytest.approx(expected, rel=1e-7)


def test_zeta_w30(w30, dom30):
    assert math.isfinite(w30.value) and w30.value > 0
    assert w30.abs_err <= 1e-7
    # halving the tolerance moves the value by less than the reported error
    r2 = integrate_w(ZETA, dom30, WeightParams(), 5e-8)
    assert abs(r2.value - w30.value) <= w30.abs_err


def test_bound_check(w30, dom30):
    step = min(d.radius for d in dom30.disks) / 2
    chk = bound_check(ZETA, dom30, WeightParams(), w30, step, 1e-7)
    assert chk["passed"] and chk["m_R"] > 0


def test_excision_monotone(zeros_101):
    zs = [z for z in zeros_101 if z.gamma < 21]
    small = build_domain(20, 0.45, zs, N0=1.0)
    big = build_domain(20, 0.45, zs, N0=0.5)
    a = integrate_w(ZETA, small, WeightParams(), 1e-7).value
    b = integrate_w(ZETA, big, WeightParams(), 1e-7).value
    assert b < a


def test_deterministic(dom30):
    a = integrate_w(ZETA, dom30, WeightParams(), 1e-5)
    b = integrate_w(ZETA, dom30, WeightParams(), 1e-5)
    assert a == b


def test_phi_projection(dom30):
    assert phi_projection(ONE, 3.0, None) == pytest.approx(2 * 0.5 ** 0.5 / 0.5, rel=1e-10)
    assert phi_projection(ZETA, 14.1347, dom30) > phi_projection(ZETA, 12.0, dom30) > 0
    with pytest.raises(DomainError):
        phi_projection(ZETA, 31.0, dom30)


def test_phi_skips_disk_chords(dom30):
    # at the centre height the chord [0.25, 0.75] is removed
    v = phi_projection(ONE, 14.1347251417581, dom30)
    assert v == pytest.approx(2 * (0.5 ** 0.5 - 0.25 ** 0.5) / 0.5, rel=1e-9)


def test_sweep_constant_is_flat():
    rep = wr_sweep(ONE, [5, 10, 20], quad_tol=1e-9)
    vals = [r.value for _, r in rep.rows]
    assert vals == pytest.approx([vals[0]] * 3, rel=1e-12)
    assert rep.all_finite


def test_sweep_requires_increasing():
    with pytest.raises(DomainError):
        wr_sweep(ONE, [10, 5])


def test_sweep_with_injected_zero_is_finite():
    f = inject_zeros([InjectionSpec(0.7, 8.0)])
    rep = wr_sweep(f, [10, 15], quad_tol=1e-6)
    assert rep.all_finite


@pytest.mark.parametrize("lam,m,expected", [(3, 1, 1.0), (2, 2, 2.0), (4, 1, 2.0)])
def test_probe_power_law(lam, m, expected):
    f = inject_zeros([InjectionSpec(0.6, 30.0, m)])
    r = divergence_probe(f, WeightParams(lam, 0.5), EPS)
    assert r.fit_kind is FitKind.POWER_LAW
    assert r.exponent == pytest.approx(expected, rel=0.05)
    assert r.fit_r2 >= 0.999
    assert all(b > a for a, b in zip(r.values, r.values[1:]))


def test_probe_log_divergent():
    f = inject_zeros([InjectionSpec(0.6, 30.0)])
    r = divergence_probe(f, WeightParams(2, 0.5), EPS)
    assert r.fit_kind is FitKind.LOG_DIVERGENT
    assert r.fit_r2 >= 0.999
    assert r.amplitude == pytest.approx(r.predicted_slope, rel=0.05)


def test_probe_on_line():
    f = inject_zeros([InjectionSpec(0.5, 30.0)])
    r = divergence_probe(f, WeightParams(2, 0.5), EPS)
    assert r.exponent == pytest.approx(0.5, rel=0.1)


def test_probe_constant_base_exact_exponent():
    f = inject_zeros([InjectionSpec(0.6, 30.0)], Base.CONSTANT_ONE)
    r = divergence_probe(f, WeightParams(3, 0.5), EPS)
    assert r.exponent == pytest.approx(1.0, rel=0.01)


def test_probe_preconditions():
    f = inject_zeros([InjectionSpec(0.6, 30.0)])
    with pytest.raises(DomainError):
        divergence_probe(f, WeightParams(), [1e-3, 2e-3])
    with pytest.raises(DomainError):
        divergence_probe(f, WeightParams(), [0.05, 1e-3])
    with pytest.raises(DomainError):
        divergence_probe(f, WeightParams(), EPS, annulus_outer=0.2)
    with pytest.raises(DomainError):
        divergence_probe(ZETA, WeightParams(), EPS)


def test_probe_poor_fit_carries_result():
    f = inject_zeros([InjectionSpec(0.6, 30.0)])
    with pytest.raises(FitPoor) as info:
        divergence_probe(f, WeightParams(3, 0.5), EPS, min_r2=1.01)
    assert info.value.result is not None


def test_lower_bound(dom30):
    d = build_domain(10, 0.45, [])
    assert lower_bound_m_R(ONE, d, 0.1).value == 1.0
    step = min(x.radius for x in dom30.disks) / 2
    m1 = lower_bound_m_R(ZETA, dom30, step)
    m2 = lower_bound_m_R(ZETA, dom30, step / 2)
    assert m1.value > 0 and m2.value <= m1.value and m1.grid_estimate
    with pytest.raises(DomainError):
        lower_bound_m_R(ZETA, dom30, 1.0)


def test_lower_bound_empty():
    from zetareg.domain import ExcisionDisk
    from zetareg._validation import ComplexPoint
    from zetareg.domain import DiskKind
    d = build_domain(1, 0.45, [])
    d = d.with_disks((ExcisionDisk(ComplexPoint(0.5, 0.0), 5.0, DiskKind.THRESHOLD),))
    with pytest.raises(EmptyDomain):
        lower_bound_m_R(ONE, d, 0.5)
