import numpy as np
import pytest
from scipy.integrate import solve_ivp

from sublorentz.exceptions import DegenerateTarget, InadmissibleControl, Unreachable
from sublorentz.modules.causal import beak_point
from sublorentz.modules.distance import distance
from sublorentz.modules.exponential import ExpCoords, exp_map
from sublorentz.modules.group_core import ORIGIN, Control, Point
from sublorentz.optim.oracle import brute_force_distance, flow_constant, simulate, synthesis_seed


class TestFlow:

    def test_straight(self):
        assert flow_constant(ORIGIN, Control(1, 0), 2.0) == Point(2, 0, 0)

    def test_lightlike_from_offset(self):
        assert flow_constant(Point(1, 0, 0), Control(1, 1), 1.0) == Point(2, 1, 0.5)

    def test_inadmissible(self):
        with pytest.raises(InadmissibleControl):
            flow_constant(ORIGIN, Control(1, 2), 1.0)

    def test_negative_duration(self):
        with pytest.raises(ValueError):
            flow_constant(ORIGIN, Control(1, 0), -0.5)


class TestSimulate:

    def test_empty_schedule(self):
        end, length = simulate([])
        assert end == ORIGIN
        assert length == 0

    def test_broken_lightlike(self):
        end, length = simulate([(Control(1, -1), 1.0), (Control(1, 1), 1.0)])
        assert end == Point(2, 0, 1)
        assert length == 0.0

    def test_timelike_piece(self):
        end, length = simulate([(Control(2, 1), 1.0)])
        assert end == Point(2, 1, 0)
        assert length == pytest.approx(np.sqrt(3.0))


class TestSeed:

    def test_straight_segment(self):
        np.testing.assert_allclose(synthesis_seed(Point(2, 0, 0), 8), 0.0, atol=1e-12)

    def test_broken(self):
        seed = synthesis_seed(Point(2, 0, 1), 4)
        np.testing.assert_array_equal(seed, [-1, -1, 1, 1])


class TestBruteForce:

    def test_straight_segment(self):
        result = brute_force_distance(Point(2, 0, 0), pieces=8, starts=2, workers=1)
        assert result.length == pytest.approx(2.0, abs=1e-6)
        assert result.length <= 2.0 + 1e-6 + result.slack
        assert result.feasible_starts >= 1

    def test_curved_target(self):
        q = exp_map(ExpCoords(0.5, 1.0, 2.0))
        d = distance(q).value
        result = brute_force_distance(q, pieces=32, starts=3, seed=5, workers=1)
        assert 0.98 * d <= result.length <= d + 1e-6 + result.slack
        assert result.endpoint_error <= 1e-7

    def test_deterministic(self):
        q = exp_map(ExpCoords(-0.2, 0.6, 1.0))
        first = brute_force_distance(q, pieces=16, starts=3, seed=9, workers=2)
        second = brute_force_distance(q, pieces=16, starts=3, seed=9, workers=1)
        assert first.length == second.length

    def test_errors(self):
        with pytest.raises(Unreachable):
            brute_force_distance(Point(0, 1, 0))
        with pytest.raises(DegenerateTarget):
            brute_force_distance(ORIGIN)
        with pytest.raises(ValueError):
            brute_force_distance(Point(2, 0, 0), pieces=0)

    @pytest.mark.parametrize("q", [Point(2, 0, 1), beak_point(0.85, 1.15, "+"), beak_point(1.3, 0.4, "-")])
    def test_beak_targets(self, q):
        result = brute_force_distance(q, pieces=32, starts=2, workers=1)
        assert result.length == pytest.approx(0.0, abs=1e-3)
        assert result.endpoint_error <= 1e-7

    def test_nelder_mead(self):
        q = exp_map(ExpCoords(0.1, 0.3, 1.0))
        d = distance(q).value
        result = brute_force_distance(q, pieces=8, starts=1, method="nelder-mead", workers=1)
        assert 0.97 * d <= result.length <= d + 1e-6 + result.slack
        assert result.endpoint_error <= 1e-7

    def test_unknown_method(self):
        with pytest.raises(ValueError):
            brute_force_distance(Point(2, 0, 0), pieces=4, starts=1, method="bfgs", workers=1)

    def test_free_durations(self):
        q = exp_map(ExpCoords(0.1, 0.3, 1.0))
        d = distance(q).value
        result = brute_force_distance(q, pieces=6, starts=1, free_durations=True, workers=1)
        assert 0.97 * d <= result.length <= d + 1e-6 + result.slack
        assert sum(dt for _, dt in result.schedule) == pytest.approx(q.x, rel=1e-9)

    def test_more_pieces_never_worse(self):
        q = exp_map(ExpCoords(0.3, 0.8, 1.5))
        d = distance(q).value
        lengths = [brute_force_distance(q, pieces=n, starts=1, workers=1).length for n in (4, 8, 16)]
        assert all(b >= a - 1e-7 for a, b in zip(lengths, lengths[1:]))
        assert lengths[-1] <= d + 1e-5


class TestFlowAgainstIntegration:

    @pytest.mark.parametrize("q, u, dt", [
        (Point(0.3, -0.2, 0.1), Control(1.0, 0.4), 1.7),
        (Point(-1.0, 2.0, 0.5), Control(2.0, -2.0), 0.6),
        (ORIGIN, Control(1.5, 0.0), 3.0),
    ])
    def test_matches_ode(self, q, u, dt):
        def rhs(_, s):
            return [u.u1, u.u2, (s[0] * u.u2 - s[1] * u.u1) / 2.0]

        sol = solve_ivp(rhs, (0.0, dt), q.as_array(), method="DOP853", rtol=1e-13, atol=1e-14)
        np.testing.assert_allclose(flow_constant(q, u, dt).as_array(), sol.y[:, -1], rtol=0, atol=1e-12)
