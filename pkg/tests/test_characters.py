"""Burnside-Dixon character degrees, defects, and Alperin weight counts."""

import pytest

from brownlevi import characters as ch
from brownlevi import groups
from brownlevi.errors import TooLargeForCharacters


def full(G):
    return groups.full_subgroup(G)


def test_degrees_s3(s3):
    t = ch.character_degrees(full(s3))
    assert sorted(t.degrees) == [1, 1, 2]
    assert t.k == groups.conjugacy_classes(full(s3)).k


def test_degrees_abelian():
    C6 = groups.cyclic_group(6)
    t = ch.character_degrees(full(C6))
    assert t.degrees == [1] * 6


def test_degrees_gl23():
    G = groups.build_gl(2, 3)
    t = ch.character_degrees(full(G))
    assert sorted(t.degrees) == [1, 1, 2, 2, 2, 3, 3, 4]
    assert sum(d * d for d in t.degrees) == 48


def test_degrees_gl32(gl32):
    t = ch.character_degrees(full(gl32.group))
    assert sorted(t.degrees) == [1, 3, 3, 6, 7, 8]


def test_degree_lift_bound(gl42):
    t = ch.character_degrees(full(gl42.group))
    assert all(d * d <= gl42.group.order for d in t.degrees)
    assert all(2 * d < t.r for d in t.degrees)


def test_defects(s3):
    h = full(s3)
    assert ch.k0(h, 3) == 0
    assert ch.kd(h, 3, 1) == 3
    assert ch.k0(h, 2) == 1
    prof = ch.defect_profile(h, 3)
    assert sum(prof.counts.values()) == 3
    C5 = groups.cyclic_group(5)
    assert ch.k0(full(C5), 5) == 0


def test_defect_sum_and_range(gl24):
    h = full(gl24.group)
    prof = ch.defect_profile(h, 5)
    assert sum(prof.counts.values()) == 15
    assert all(d <= 1 for d in prof.counts)  # v_5(180) = 1
    assert ch.k0(h, 5) == 3  # the three degree-5 characters of C3 x A5


def test_k0_vanishes_with_normal_ell_subgroup(s4):
    # O_2(S4) = V4 is nontrivial, so no 2-defect-zero characters exist
    assert ch.k0(full(s4), 2) == 0


def test_weights(s3, s4, gl24, gl32):
    assert ch.count_weights(s3, 3) == 2
    assert ch.count_weights(s4, 3) == 4
    assert ch.count_weights(gl24.group, 5) == 9
    assert ch.count_weights(gl32.group, 7) == 4
    C5 = groups.cyclic_group(5)
    assert ch.count_weights(C5, 5) == 1


def test_bounds():
    G = groups.build_gl(2, 3)
    with pytest.raises(TooLargeForCharacters):
        ch.character_degrees(full(G), max_order=10)
    with pytest.raises(TooLargeForCharacters):
        ch.character_degrees(full(G), max_classes=2)


def test_class_count_agreement(gl33):
    h = full(gl33.group)
    t = ch.character_degrees(h)
    assert t.k == groups.conjugacy_classes(h).k == 24
    assert sum(d * d for d in t.degrees) == 11232
