import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sublorentz.modules.causal import CausalMembership, beak_point, membership
from sublorentz.modules.distance import distance
from sublorentz.modules.exponential import ExpCoords, exp_map
from sublorentz.modules.group_core import Point
from sublorentz.modules.symmetry import (SymmetryChain, SymmetryElement, SymmetryKind, apply,
                                         apply_exp_coords, compose, distance_factor)

ELEMENTS = [SymmetryElement.rotation(0.7), SymmetryElement.rotation(-1.2), SymmetryElement.dilation(0.4),
            SymmetryElement.dilation(-0.8), SymmetryElement.reflection1(), SymmetryElement.reflection2()]
small = st.floats(min_value=-0.5, max_value=0.5, allow_nan=False)


def test_rotation_on_exp_coords():
    assert apply_exp_coords(SymmetryElement.rotation(1), ExpCoords(0, 2, 3)) == ExpCoords(1, 2, 3)


def test_dilation_on_point():
    q = apply(SymmetryElement.dilation(math.log(2)), Point(1, 0, 0))
    np.testing.assert_allclose(q.as_array(), [2, 0, 0], rtol=1e-15)


def test_reflections_on_point():
    assert apply(SymmetryElement.reflection1(), Point(2, 1, 0.5)) == Point(2, -1, 0.5)
    assert apply(SymmetryElement.reflection2(), Point(2, 1, 0.5)) == Point(2, 1, -0.5)


def test_rotation_preserves_cone_and_height():
    q = apply(SymmetryElement.rotation(0.9), Point(3, 1, 0.7))
    assert (q.x - q.y) * (q.x + q.y) == pytest.approx(8.0, rel=1e-13)
    assert q.z == 0.7


def test_parameterless_kinds():
    with pytest.raises(ValueError):
        SymmetryElement(SymmetryKind.REFLECTION1, 1.0)
    with pytest.raises(ValueError):
        SymmetryElement.rotation(math.inf)


class TestCompose:

    def test_rotations_add(self):
        chain = compose(SymmetryElement.rotation(0.5), SymmetryElement.rotation(0.25))
        assert chain.elements == (SymmetryElement.rotation(0.75),)

    def test_inverse_pair_cancels(self):
        assert compose(SymmetryElement.dilation(1.5), SymmetryElement.dilation(-1.5)).is_identity()

    def test_reflections_square_to_identity(self):
        r1 = SymmetryElement.reflection1()
        assert compose(r1, r1).is_identity()
        r2 = SymmetryElement.reflection2()
        assert compose(r2, r1, r1, r2).is_identity()

    def test_zero_parameters_dropped(self):
        assert compose(SymmetryElement.rotation(0.0), SymmetryElement.dilation(0.0)) == SymmetryChain()

    def test_order(self):
        # rotation acts first, then the reflection
        g = compose(SymmetryElement.reflection1(), SymmetryElement.rotation(1.0))
        q = Point(1, 0, 0)
        expected = apply(SymmetryElement.reflection1(), apply(SymmetryElement.rotation(1.0), q))
        assert apply(g, q) == expected
        assert apply(g, q).y == -math.sinh(1.0)

    def test_nested_chains(self):
        inner = compose(SymmetryElement.rotation(0.3), SymmetryElement.dilation(0.2))
        outer = compose(inner, SymmetryElement.dilation(-0.2), SymmetryElement.rotation(-0.3))
        assert outer.is_identity()


class TestInvariance:

    @pytest.mark.parametrize("g", [SymmetryElement.reflection1(), SymmetryElement.reflection2()])
    @pytest.mark.parametrize("branch", ["+", "-"])
    def test_reflections_keep_beak(self, g, branch):
        for tau1, tau2 in [(0.85, 1.15), (0.0, 2.0), (1.5, 0.0), (0.3, 4.0)]:
            q = apply(g, beak_point(tau1, tau2, branch))
            assert membership(q) is CausalMembership.BOUNDARY
        assert membership(apply(g, Point(0, 0, 0))) is CausalMembership.ORIGIN

    @pytest.mark.parametrize("g", ELEMENTS)
    def test_distance_scaling(self, g):
        q = exp_map(ExpCoords(0.2, -0.4, 1.3))
        assert distance(apply(g, q)).value == pytest.approx(distance_factor(g) * distance(q).value, rel=1e-10)

    def test_distance_factor(self):
        g = compose(SymmetryElement.dilation(0.5), SymmetryElement.rotation(2.0), SymmetryElement.dilation(0.25))
        assert distance_factor(g) == pytest.approx(math.exp(0.75))
        assert distance_factor(SymmetryElement.reflection2()) == 1.0

    @pytest.mark.parametrize("g", ELEMENTS)
    def test_exp_equivariance(self, g):
        lc = ExpCoords(0.3, 0.8, 1.1)
        lhs = apply(g, exp_map(lc)).as_array()
        rhs = exp_map(apply_exp_coords(g, lc)).as_array()
        np.testing.assert_allclose(lhs, rhs, rtol=1e-12, atol=1e-14)

    @settings(max_examples=30)
    @given(small, st.floats(-1.0, 1.0), st.floats(0.5, 2.0), st.sampled_from(ELEMENTS), st.sampled_from(ELEMENTS))
    def test_chain_equivariance(self, psi, c, t, g, h):
        lc = ExpCoords(psi, c, t)
        chain = compose(g, h)
        lhs = apply(chain, exp_map(lc)).as_array()
        rhs = exp_map(apply_exp_coords(chain, lc)).as_array()
        np.testing.assert_allclose(lhs, rhs, rtol=1e-10, atol=1e-12)
