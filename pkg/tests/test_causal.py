import pytest
from hypothesis import given
from hypothesis import strategies as st

from sublorentz.exceptions import NegativeParameter
from sublorentz.modules.causal import (BeakBranch, CausalMembership, beak_gap, beak_height,
                                       beak_point, default_tolerance, membership,
                                       reduced_attainable)
from sublorentz.modules.group_core import Point

taus = st.floats(min_value=0.01, max_value=50.0, allow_nan=False)


@pytest.mark.parametrize("q, expected", [
    (Point(1, 0, 0), CausalMembership.INTERIOR),
    (Point(2, 0, 1), CausalMembership.BOUNDARY),
    (Point(0, 1, 0), CausalMembership.OUTSIDE),
    (Point(0, 0, 0), CausalMembership.ORIGIN),
    (Point(-1, 0, 0), CausalMembership.OUTSIDE),
    (Point(3, 3, 0), CausalMembership.BOUNDARY),
])
def test_membership_exact(q, expected):
    assert membership(q, 0.0) is expected


def test_gap_sign():
    assert beak_gap(Point(1, 0, 0)) == -1.0
    assert beak_gap(Point(2, 0, 1)) == 0.0


def test_band_absorbs_rounding():
    q = Point(2.0, 0.0, 1.0 + 1e-12)
    assert membership(q, 0.0) is CausalMembership.OUTSIDE
    assert membership(q) is CausalMembership.BOUNDARY
    assert default_tolerance(Point(10, 0, 0)) == pytest.approx(100 * default_tolerance(Point(1, 0, 0)))


def test_negative_tolerance():
    with pytest.raises(ValueError):
        membership(Point(1, 0, 0), -1.0)


def test_reduced_attainable():
    assert reduced_attainable(Point(1, 0, 0))
    assert reduced_attainable(Point(0, 0, 0))
    assert not reduced_attainable(Point(2, 0, 1))


@pytest.mark.parametrize("tau1, tau2, branch, expected", [
    (1, 1, "+", Point(2, 0, 1)),
    (1, 1, "-", Point(2, 0, -1)),
    (0, 0, "+", Point(0, 0, 0)),
    (2, 3, "-", Point(5, -1, -6)),
])
def test_beak_point(tau1, tau2, branch, expected):
    assert beak_point(tau1, tau2, branch) == expected


def test_beak_point_rejects_negative():
    with pytest.raises(NegativeParameter):
        beak_point(-1, 1)


def test_branch_parse():
    assert BeakBranch.parse("upper") is BeakBranch.UPPER
    with pytest.raises(ValueError):
        BeakBranch.parse("sideways")


@given(taus, taus, st.sampled_from(["+", "-"]))
def test_beak_points_on_boundary(tau1, tau2, branch):
    assert membership(beak_point(tau1, tau2, branch)) is CausalMembership.BOUNDARY


@pytest.mark.parametrize("y, z, expected", [(0, 0, 0), (0, 1, 2), (3, 0, 3)])
def test_beak_height(y, z, expected):
    assert beak_height(y, z) == expected
