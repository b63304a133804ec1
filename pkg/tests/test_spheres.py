import math

import numpy as np
import pytest

from sublorentz.exceptions import BadGrid, EmptySection, NegativeParameter
from sublorentz.modules.causal import beak_height
from sublorentz.modules.distance import distance
from sublorentz.modules.group_core import Point
from sublorentz.modules.spheres import (PROFILE, SectionPlane, ball_volume_trend, beak_sweep, f_excess,
                                        f_inverse, f_profile, sphere_envelope, sphere_mesh,
                                        sphere_section, sphere_x, tangent_plane_residual,
                                        zero_sphere_strata)


class TestProfile:

    def test_at_zero(self):
        assert f_profile(0.0) == 1.0

    def test_even(self):
        assert f_profile(-0.7) == f_profile(0.7)

    def test_between_beak_and_envelope(self):
        assert 20.0 < f_profile(5.0) < 21.0

    def test_quadratic_term(self):
        z = 1e-3
        assert (f_profile(z) - 1.0) / z ** 2 == pytest.approx(12.0, rel=1e-3)

    def test_excess_matches_difference(self):
        for z in (0.05, 0.5, 2.0):
            assert f_excess(z) == pytest.approx(f_profile(z) - 4 * z, rel=1e-9)

    def test_profile_composition(self):
        for z in (-0.4, 0.2, 3.0):
            assert PROFILE.f(z) == PROFILE.e(PROFILE.k(z))
            assert PROFILE.k(z) == PROFILE.b(z) / 2
            assert PROFILE.b(PROFILE.a(z)) == pytest.approx(z, rel=1e-12)
        assert PROFILE.excess(0.5) == f_excess(0.5)
        assert PROFILE.inverse(PROFILE.f(1.5)) == pytest.approx(1.5, rel=1e-9)

    def test_height_squared(self):
        assert PROFILE.height_squared(-0.3, 0.0) == pytest.approx(1.2)
        assert PROFILE.height_squared(2.0, 3.0) == pytest.approx(9.0 * f_profile(2.0 / 9.0))
        assert sphere_x(0.5, 2.0, 3.0) == math.sqrt(0.25 + PROFILE.height_squared(2.0, 3.0))

    def test_excess_decreasing(self):
        values = [f_excess(z) for z in (0.0, 0.1, 1.0, 10.0, 1000.0)]
        assert values[0] == 1.0
        assert all(a > b > 0 for a, b in zip(values, values[1:]))

    @pytest.mark.parametrize("z", [0.0, 0.01, 0.3, 4.0])
    def test_inverse(self, z):
        assert f_inverse(f_profile(z)) == pytest.approx(z, rel=1e-9, abs=1e-12)

    def test_inverse_domain(self):
        with pytest.raises(ValueError):
            f_inverse(0.5)


class TestSpherePoints:

    @pytest.mark.parametrize("R", [1.0, 2.0])
    def test_vertex(self, R):
        assert sphere_x(0, 0, R) == R

    def test_zero_sphere_is_beak(self):
        assert sphere_x(1.0, 2.0, 0.0) == beak_height(1.0, 2.0) == 3.0

    def test_points_have_distance_r(self):
        for y, z in ((0.5, 0.2), (-1.0, 1.5), (2.0, -0.3)):
            assert distance(Point(sphere_x(y, z, 1.5), y, z)).value == pytest.approx(1.5, rel=1e-9)

    def test_negative_radius(self):
        with pytest.raises(NegativeParameter):
            sphere_x(0, 0, -1.0)

    def test_envelope(self):
        assert sphere_envelope(0.0, 0.0) == (0.0, 1.0, 1.0)
        lower, upper, width = sphere_envelope(4.0, 4.0)
        assert lower < sphere_x(4.0, 4.0, 1.0) < upper
        assert sphere_x(4.0, 4.0, 1.0) - lower <= width


class TestMesh:

    def test_small_mesh(self):
        mesh = sphere_mesh(1.0, (-1, 1), (-1, 1), 3, 3)
        assert mesh.shape == (3, 3)
        np.testing.assert_allclose(mesh.vertices[4], [1, 0, 0])
        assert len(mesh.quads) == 4
        assert tuple(mesh.quads[0]) == (0, 1, 4, 3)
        # row-major in (iy, iz)
        np.testing.assert_allclose(mesh.vertices[1, 1:], [0, -1])
        np.testing.assert_allclose(mesh.vertices[3, 1:], [-1, 0])

    @pytest.mark.parametrize("ny, nz, y_range", [(1, 3, (-1, 1)), (3, 3, (1, -1)), (3, 3, (0, math.nan))])
    def test_bad_grid(self, ny, nz, y_range):
        with pytest.raises(BadGrid):
            sphere_mesh(1.0, y_range, (-1, 1), ny, nz)


class TestSections:

    def test_horizontal_hyperbola(self):
        section = sphere_section(1.0, "z=0", n=21)
        x, y, z = section.points.T
        np.testing.assert_allclose(x * x - y * y, 1.0, rtol=1e-12)
        assert np.all(z == 0.0)

    def test_horizontal_on_zero_sphere(self):
        section = sphere_section(0.0, "z=0", n=5, extent=2.0)
        np.testing.assert_allclose(section.points[:, 0], np.abs(section.points[:, 1]))
        assert set(section.branch) == {0, 1}

    def test_parabolas_on_zero_sphere(self):
        section = sphere_section(0.0, "y=0", n=11, extent=2.0)
        assert section.plane == SectionPlane("ratio", 0.0)
        x, _, z = section.points.T
        np.testing.assert_allclose(np.abs(z), x * x / 4.0)
        assert len(section.points) == 22

    def test_vertical_closed_curve(self):
        section = sphere_section(0.0, "x=2", n=50)
        x, y, z = section.points.T
        assert np.all(x == 2.0)
        np.testing.assert_allclose(y * y + 4 * np.abs(z), 4.0, atol=1e-12)

    def test_vertex_section(self):
        assert sphere_section(1.0, "x=1").points.tolist() == [[1.0, 0.0, 0.0]]

    @pytest.mark.parametrize("R, plane", [(1.0, "x=0.5"), (1.0, "y=2x"), (0.0, "x=-1")])
    def test_empty(self, R, plane):
        with pytest.raises(EmptySection):
            sphere_section(R, plane)

    def test_parse(self):
        assert SectionPlane.parse("y=0.5x") == SectionPlane("ratio", 0.5)
        assert SectionPlane.parse("y=-x") == SectionPlane("ratio", -1.0)
        assert SectionPlane.parse("x=2").label() == "x=2.0"
        with pytest.raises(ValueError):
            SectionPlane.parse("w=1")


class TestZeroSphere:

    def test_strata(self):
        points = np.array([[2, 0, 1], [2, 0, -1], [1, 1, 0], [1, -1, 0], [0, 0, 0]], dtype=float)
        assert zero_sphere_strata(points) == ["z>0", "z<0", "z=0,y>0", "z=0,y<0", "origin"]

    def test_sweep_stays_on_beak(self):
        grid = np.linspace(-1, 1, 5)
        for upper in (True, False):
            pts = beak_sweep(upper, grid, grid)
            assert len(pts) == 25
            x, y, z = pts.T
            np.testing.assert_allclose(x, np.sqrt(y * y + 4 * np.abs(z)), rtol=1e-12)
            assert np.all(z > 0) if upper else np.all(z < 0)

    def test_sweep_identity(self):
        np.testing.assert_allclose(beak_sweep(True, [0.0], [0.0]), [[2, 0, 1]])


class TestDiagnostics:

    def test_tangent_plane(self):
        assert tangent_plane_residual(0.2, 0.5) < 1e-6

    def test_volume_grows(self):
        volumes = ball_volume_trend((2.0, 4.0, 8.0), n=101)
        assert 0 < volumes[0] < volumes[1] < volumes[2]
