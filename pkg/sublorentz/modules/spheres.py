"""
Sub-Lorentzian spheres S(R) = {d = R}.

For R > 0 the sphere is the graph x = sqrt(y^2 + R^2 f(z/R^2)) with the
profile f = e o k, k = b/2, e(w) = sinh^2(w)/w^2. S(0) is the beak
x = sqrt(y^2 + 4|z|). The profile satisfies 4|z| < f(z) < 4|z| + 1, so all
spheres squeeze onto the beak as |z| grows.
"""

import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.integrate import trapezoid

from sublorentz.constants import EXCESS_SERIES_SWITCH, SINHC_SQ_SERIES_SWITCH
from sublorentz.exceptions import BadGrid, EmptySection, NegativeParameter
from sublorentz.modules.causal import beak_height
from sublorentz.modules.exponential import (ExpCoords, a_func, b_func, bracketed_inverse,
                                            covector_along, exp_map, sinhc)
from sublorentz.modules.group_core import Point, velocity_in_frame
from sublorentz.modules.symmetry import SymmetryElement, apply, compose


# ======= profile =======
def e_func(w: float) -> float:
    """sinh(w)^2 / w^2 with e(0) = 1."""
    if abs(w) < SINHC_SQ_SERIES_SWITCH:
        w2 = w * w
        return 1.0 + w2 / 3.0 + 2.0 * w2 * w2 / 45.0
    s = sinhc(w)
    return s * s


def k_func(z: float) -> float:
    return 0.5 * b_func(z)


def f_profile(z: float) -> float:
    """f(z) = e(k(z)); even, f(0) = 1, f(z) = 1 + 12 z^2 + O(z^4)."""
    return e_func(k_func(z))


def f_excess(z: float) -> float:
    """
    f(z) - 4|z| without cancellation.

    With c = |b(z)|, f(z) - 4|z| = (2c - 2 + 2e^{-c})/c^2, which lies in (0, 1)
    and decreases to 0 as |z| grows.
    """
    c = abs(b_func(z))
    if c < EXCESS_SERIES_SWITCH:
        return 1.0 - c / 3.0 + c * c / 12.0
    return (2.0 * c + 2.0 * math.expm1(-c)) / (c * c)


def f_inverse(v: float) -> float:
    """The z >= 0 with f(z) = v, defined for v >= 1."""
    if not v >= 1.0:
        raise ValueError(f"f takes values in [1, inf), got {v}")
    if v == 1.0:
        return 0.0
    w = bracketed_inverse(lambda s: e_func(s) - 1.0, v - 1.0, math.sqrt(3.0 * (v - 1.0)),
                          "f_inverse", upper=700.0)
    return a_func(2.0 * w)


@dataclass(frozen=True)
class SphereProfile:
    """Scalar functions behind the sphere graphs; the default instance is PROFILE."""
    a: Callable[[float], float] = a_func
    b: Callable[[float], float] = b_func
    k: Callable[[float], float] = k_func
    e: Callable[[float], float] = e_func
    f: Callable[[float], float] = f_profile
    excess: Callable[[float], float] = f_excess
    inverse: Callable[[float], float] = f_inverse

    def height_squared(self, z: float, R: float) -> float:
        """x^2 - y^2 on S(R) at height z."""
        if R == 0.0:
            return 4.0 * abs(z)
        return R * R * self.f(z / (R * R))


PROFILE = SphereProfile()


# ======= sphere points =======
def _check_radius(R: float) -> None:
    if not (R >= 0.0 and math.isfinite(R)):
        raise NegativeParameter(f"sphere radius must be finite and nonnegative, got {R}")


def sphere_x(y: float, z: float, R: float) -> float:
    """x-coordinate of the point of S(R) over (y, z)."""
    _check_radius(R)
    if R == 0.0:
        return beak_height(y, z)
    return math.sqrt(y * y + PROFILE.height_squared(z, R))


def sphere_gap(R1: float, R2: float, y: float, z: float) -> float:
    return abs(sphere_x(y, z, R1) - sphere_x(y, z, R2))


def sphere_envelope(y: float, z: float) -> Tuple[float, float, float]:
    """
    Envelope of the unit sphere over (y, z): the beak height, the upper
    envelope sqrt(y^2 + 4|z| + 1) and a bound min(1, 2/|y|, 1/sqrt|z|) on
    the gap between the two.
    """
    lower = beak_height(y, z)
    upper = math.sqrt(y * y + 4.0 * abs(z) + 1.0)
    width = 1.0
    if y != 0.0:
        width = min(width, 2.0 / abs(y))
    if z != 0.0:
        width = min(width, 1.0 / math.sqrt(abs(z)))
    return lower, upper, width


# ======= meshes =======
@dataclass
class SphereMesh:
    """
    Parameter-grid mesh of S(R). Vertex (iy, iz) sits at row-major index
    iz * ny + iy; quads list four vertex indices counter-clockwise in (y, z).
    """
    radius: float
    y_values: np.ndarray
    z_values: np.ndarray
    vertices: np.ndarray
    quads: np.ndarray

    @property
    def shape(self) -> Tuple[int, int]:
        return len(self.y_values), len(self.z_values)


def _check_range(name: str, bounds: Sequence[float]) -> Tuple[float, float]:
    lo, hi = (float(v) for v in bounds)
    if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
        raise BadGrid(f"{name} must be a finite increasing pair, got ({lo}, {hi})")
    return lo, hi


def sphere_mesh(R: float, y_range: Sequence[float], z_range: Sequence[float],
                ny: int, nz: int) -> SphereMesh:
    _check_radius(R)
    if ny < 2 or nz < 2:
        raise BadGrid(f"mesh needs at least 2 x 2 nodes, got {ny} x {nz}")
    ys = np.linspace(*_check_range("y_range", y_range), ny)
    zs = np.linspace(*_check_range("z_range", z_range), nz)
    # the profile depends on z only
    heights = np.array([PROFILE.height_squared(float(z), R) for z in zs])
    yy, hh = np.meshgrid(ys, heights)
    _, zz = np.meshgrid(ys, zs)
    vertices = np.column_stack([np.sqrt(yy.ravel() ** 2 + hh.ravel()), yy.ravel(), zz.ravel()])
    quads = []
    for iz in range(nz - 1):
        for iy in range(ny - 1):
            k = iz * ny + iy
            quads.append((k, k + 1, k + ny + 1, k + ny))
    return SphereMesh(radius=R, y_values=ys, z_values=zs, vertices=vertices,
                      quads=np.array(quads, dtype=int))


# ======= plane sections =======
@dataclass(frozen=True)
class SectionPlane:
    """Plane z = value, x = value, y = value or y = value * x (kind 'ratio')."""
    kind: str
    value: float

    @classmethod
    def parse(cls, spec: str) -> "SectionPlane":
        text = spec.replace(" ", "").lower()
        try:
            axis, rhs = text.split("=")
            if axis == "y" and rhs.endswith("x"):
                coeff = rhs[:-1]
                k = 1.0 if coeff in ("", "+") else -1.0 if coeff == "-" else float(coeff.rstrip("*"))
                return cls("ratio", k)
            value = float(rhs)
        except ValueError:
            raise ValueError(f"section must look like 'z=0', 'x=2', 'y=1' or 'y=0.5x', got {spec!r}")
        if axis not in ("x", "y", "z"):
            raise ValueError(f"section axis must be x, y or z, got {axis!r}")
        # y = 0 is the plane y = 0 * x
        if axis == "y" and value == 0.0:
            return cls("ratio", 0.0)
        return cls(axis, value)

    def label(self) -> str:
        return f"y={self.value}x" if self.kind == "ratio" else f"{self.kind}={self.value}"


@dataclass
class SphereSection:
    """Sampled intersection curve; branch numbers separate disconnected pieces."""
    radius: float
    plane: SectionPlane
    points: np.ndarray
    branch: np.ndarray


def _section(R, plane, points, branch=None) -> SphereSection:
    points = np.atleast_2d(np.asarray(points, dtype=float))
    if branch is None:
        branch = np.zeros(len(points), dtype=int)
    return SphereSection(radius=R, plane=plane, points=points, branch=np.asarray(branch, dtype=int))


def sphere_section(R: float, plane, n: int = 101, extent: float = 2.0) -> SphereSection:
    """
    Intersection of S(R) with a plane.

    Parameters:
    - R: float >= 0
    - plane: SectionPlane or str ('z=0', 'x=2', 'y=1', 'y=0.5x')
    - n: int
        Samples per branch.
    - extent: float
        Sampling reach for unbounded curves: the hyperbolic angle for
        z-sections, |z| for y-planes with R > 0, x for rays and half-parabolas.

    Raises:
    - EmptySection when the plane misses the sphere.
    """
    _check_radius(R)
    if n < 2:
        raise BadGrid(f"section needs at least 2 samples, got {n}")
    if not (extent > 0 and math.isfinite(extent)):
        raise BadGrid(f"extent must be positive and finite, got {extent}")
    if isinstance(plane, str):
        plane = SectionPlane.parse(plane)
    c = plane.value

    if plane.kind == "z":
        h = PROFILE.height_squared(c, R)
        if h > 0.0:
            sigma = np.linspace(-extent, extent, n)
            root = math.sqrt(h)
            return _section(R, plane, np.column_stack([root * np.cosh(sigma), root * np.sinh(sigma),
                                                       np.full(n, c)]))
        ys = np.linspace(-extent, extent, n)
        return _section(R, plane, np.column_stack([np.abs(ys), ys, np.zeros(n)]),
                        branch=(ys >= 0).astype(int))

    if plane.kind == "x":
        if c < R or (R == 0.0 and c < 0.0):
            raise EmptySection(f"plane x={c} misses S({R}), whose points have x >= {R}")
        if c == R:
            return _section(R, plane, [(R, 0.0, 0.0)])
        zmax = c * c / 4.0 if R == 0.0 else R * R * PROFILE.inverse(c * c / (R * R))
        theta = np.linspace(0.0, 2.0 * math.pi, n)
        zs = zmax * np.sin(theta)
        ys = np.sign(np.cos(theta)) * np.sqrt(np.maximum(0.0, [c * c - PROFILE.height_squared(float(z), R) for z in zs]))
        return _section(R, plane, np.column_stack([np.full(n, c), ys, zs]))

    if plane.kind == "y":
        zs = np.linspace(-extent, extent, n)
        xs = np.array([sphere_x(c, float(z), R) for z in zs])
        return _section(R, plane, np.column_stack([xs, np.full(n, c), zs]))

    # y = k x
    k = c
    if R > 0.0:
        if abs(k) >= 1.0:
            raise EmptySection(f"plane y={k}x misses S({R}): it lies outside the interior cone")
        zs = np.linspace(-extent, extent, n)
        xs = np.array([R * math.sqrt(PROFILE.f(float(z) / (R * R)) / ((1.0 - k) * (1.0 + k))) for z in zs])
        return _section(R, plane, np.column_stack([xs, k * xs, zs]))
    if abs(k) > 1.0:
        return _section(R, plane, [(0.0, 0.0, 0.0)])
    xs = np.linspace(0.0, extent, n)
    if abs(k) == 1.0:
        return _section(R, plane, np.column_stack([xs, k * xs, np.zeros(n)]))
    zs = (1.0 - k) * (1.0 + k) * xs * xs / 4.0
    upper = np.column_stack([xs, k * xs, zs])
    lower = np.column_stack([xs, k * xs, -zs])
    return _section(R, plane, np.vstack([upper, lower]),
                    branch=np.concatenate([np.zeros(n, dtype=int), np.ones(n, dtype=int)]))


# ======= zero sphere =======
STRATA = ("z>0", "z<0", "z=0,y>0", "z=0,y<0", "origin")


def zero_sphere_strata(points: np.ndarray, atol: float = 0.0) -> List[str]:
    """Label points of S(0) by the stratum they belong to."""
    labels = []
    for x, y, z in np.atleast_2d(points):
        if abs(z) > atol:
            labels.append(STRATA[0] if z > 0 else STRATA[1])
        elif abs(y) > atol:
            labels.append(STRATA[2] if y > 0 else STRATA[3])
        else:
            labels.append(STRATA[4])
    return labels


def beak_sweep(upper: bool, r_values: Sequence[float], s_values: Sequence[float]) -> np.ndarray:
    """
    Points e^{sY} o e^{rX0} (q) with q = (2, 0, 1) or (2, 0, -1).

    Each open sheet S(0) n {z > 0} (resp. z < 0) is swept once by (r, s).
    """
    q = Point(2.0, 0.0, 1.0 if upper else -1.0)
    rows = []
    for s in s_values:
        for r in r_values:
            g = compose(SymmetryElement.dilation(float(s)), SymmetryElement.rotation(float(r)))
            rows.append(apply(g, q).as_array())
    return np.array(rows)


# ======= diagnostics =======
def tangent_plane_residual(psi: float, c: float, h: float = 1e-5) -> float:
    """
    Normalized pairing of the covector at Exp(psi, c, 1) with the two
    finite-difference tangent vectors of the graph of S(1); O(h^2).
    """
    lc = ExpCoords(psi, c, 1.0)
    q = exp_map(lc)
    lam = covector_along(lc, 1.0).as_array()
    worst = 0.0
    for dy, dz in ((h, 0.0), (0.0, h)):
        plus = np.array([sphere_x(q.y + dy, q.z + dz, 1.0), q.y + dy, q.z + dz])
        minus = np.array([sphere_x(q.y - dy, q.z - dz, 1.0), q.y - dy, q.z - dz])
        tangent = (plus - minus) / (2.0 * h)
        v = velocity_in_frame(q, tangent)
        pairing = lam @ np.array([v.v1, v.v2, v.v3])
        worst = max(worst, abs(pairing) / (np.linalg.norm(lam) * np.linalg.norm(tangent)))
    return float(worst)


def ball_volume_trend(half_widths: Sequence[float] = (2.0, 4.0, 8.0), n: int = 201,
                      profile: Optional[Callable[[float], float]] = None) -> List[float]:
    """
    Volume between S(0) and the unit sphere over the boxes |y|, |z| <= L.

    The integrand sqrt(y^2 + f(z)) - sqrt(y^2 + 4|z|) is integrated by the
    trapezoid rule; the values grow without bound with L.
    """
    profile = profile or PROFILE.f
    volumes = []
    for L in half_widths:
        if not (L > 0 and math.isfinite(L)):
            raise BadGrid(f"box half-width must be positive, got {L}")
        ys = np.linspace(-L, L, n)
        zs = np.linspace(-L, L, n)
        fz = np.array([profile(float(z)) for z in zs])
        yy, ff = np.meshgrid(ys, fz)
        _, zz = np.meshgrid(ys, zs)
        integrand = np.sqrt(yy ** 2 + ff) - np.sqrt(yy ** 2 + 4.0 * np.abs(zz))
        volumes.append(float(trapezoid(trapezoid(integrand, ys, axis=1), zs)))
    return volumes
