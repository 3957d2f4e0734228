import math
import warnings

import numpy as np
import pytest

from zetareg.domain import (
    DiskKind,
    Mode,
    RegulatedDomain,
    build_domain,
    contains,
    contains_array,
    excised_area,
    resolve_walls,
    total_excised_bound,
)
from zetareg.errors import DomainError, OverlapWithWallWarning
from zetareg.zeros import ZeroRecord


@pytest.fixture(scope="module")
def dom30(zeros_101):
    return build_domain(30, 0.45, [z for z in zeros_101 if z.gamma < 31])


def test_radii_schedule(dom30):
    zero_disks = [d for d in dom30.disks if d.kind is DiskKind.ZERO]
    assert len(zero_disks) == 6
    by_index = {}
    for d in zero_disks:
        by_index.setdefault(d.index, []).append(d)
    for idx, expected in [(1, 0.25), (2, 1 / 9), (3, 1 / 16)]:
        pair = by_index[idx]
        assert [d.radius for d in pair] == [expected, expected]
        assert pair[0].center.t == -pair[1].center.t


def test_contains_examples(dom30):
    assert not contains(dom30, 0.5 + 14.1347251417581j)
    assert contains(dom30, 0.7 + 2j)
    assert not contains(dom30, 0.5 + 31j)


def test_walls():
    assert resolve_walls(0.45, "centered") == pytest.approx((0.05, 0.95))
    assert resolve_walls(0.1, "inner") == pytest.approx((0.1, 0.9))
    assert resolve_walls(0.1, (0.2, 0.7)) == (0.2, 0.7)


def test_pole_disk_only_when_it_meets_rectangle():
    with pytest.warns(OverlapWithWallWarning):
        d = build_domain(5, 0.45, [], walls=(0.0, 1.0))
    assert [x.kind for x in d.disks] == [DiskKind.POLE]
    assert build_domain(5, 0.45, []).disks == ()


def test_alpha_precondition():
    with pytest.raises(DomainError):
        build_domain(10, 0.45, [], alpha=1.0)
    with pytest.raises(DomainError):
        build_domain(10, 0.5, [])


def test_unsorted_zeros_rejected():
    with pytest.raises(DomainError):
        build_domain(30, 0.45, [ZeroRecord(2, 21.0, 1e-10), ZeroRecord(1, 14.1, 1e-10)])


def test_wall_overlap_warning():
    with pytest.warns(OverlapWithWallWarning):
        d = build_domain(30, 0.3, [ZeroRecord(1, 14.13, 1e-10)], N0=0.5, alpha=1.5)
    assert d.wall_overlaps


def test_serialisation_roundtrip(dom30):
    assert RegulatedDomain.from_dict(dom30.to_dict()) == dom30


def test_conjugate_symmetry(dom30):
    rng = np.random.default_rng(1)
    s = rng.uniform(0, 1, 500) + 1j * rng.uniform(-32, 32, 500)
    assert np.array_equal(contains_array(dom30, s), contains_array(dom30, s.conj()))


def test_area_single_disk():
    d = build_domain(30, 0.45, [ZeroRecord(1, 14.13, 1e-10)])
    a = excised_area(d)
    # the disk and its conjugate
    assert a.naive_sum == pytest.approx(2 * math.pi / 16, rel=1e-14)
    assert abs(a.clipped_estimate - a.naive_sum) <= max(a.clipped_err, 1e-3 * a.naive_sum)


def test_area_half_disk_on_wall():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", OverlapWithWallWarning)
        d = build_domain(30, 0.45, [ZeroRecord(1, 14.13, 1e-10)], walls=(0.5, 0.95))
    a = excised_area(d)
    assert a.clipped_estimate == pytest.approx(a.naive_sum / 2, rel=2e-3)


def test_area_seed_reproducible(dom30):
    assert excised_area(dom30, seed=3) == excised_area(dom30, seed=3)


def test_total_excised_bound():
    assert total_excised_bound(0, 2) == pytest.approx(math.pi ** 5 / 90, abs=1e-12)
    assert total_excised_bound(1, 2) == pytest.approx(math.pi * (math.pi ** 4 / 90 - 1), abs=1e-12)
    with pytest.raises(DomainError):
        total_excised_bound(0, 1)


def test_threshold_mode():
    d = build_domain(20, 0.45, mode=Mode.THRESHOLD_CENTERED, threshold=0.1, grid_step=0.05)
    assert d.disks
    assert all(d0.kind is DiskKind.THRESHOLD for d0 in d.disks)
    # the first zero is covered
    assert not contains(d, 0.5 + 14.1347251417581j)
