"""
Sub-Lorentzian distance from the identity, its two-sided bounds and its
restrictions to coordinate planes.
"""

import math
import warnings
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple

import numpy as np
import pandas as pd

from sublorentz.constants import BEAK_CLAMP_MARGIN
from sublorentz.exceptions import BadGrid, Unreachable
from sublorentz.modules.causal import CausalMembership, membership
from sublorentz.modules.exponential import beta, p_over_sinh
from sublorentz.modules.group_core import Point, relative_point


class DistanceRegime(Enum):
    TIMELIKE = "Timelike"
    LIGHTLIKE_BOUNDARY = "LightlikeBoundary"
    ORIGIN = "Origin"


@dataclass(frozen=True)
class DistanceResult:
    value: float
    regime: DistanceRegime
    # beta argument z/(x^2 - y^2) and its inverse; p is inf on the beak
    w: float = 0.0
    p: float = 0.0
    reduced_precision: bool = False


def _reachable_label(q: Point, tol: float) -> CausalMembership:
    label = membership(q, tol)
    if label is CausalMembership.OUTSIDE:
        raise Unreachable(f"{q} lies outside J+, the distance is undefined")
    return label


def distance(q: Point, tol: float = 0.0) -> DistanceResult:
    """
    d(q) = sqrt(x^2 - y^2) * p / sinh p with p = beta(z / (x^2 - y^2)).

    Parameters:
    - q: Point
    - tol: float
        Boundary band used to classify q; the exact sets by default.

    Returns:
    - DistanceResult. On the beak and at the origin the value is 0.
      Interior points whose beta argument lies within BEAK_CLAMP_MARGIN
      of 1/4 are flagged reduced_precision (and a RuntimeWarning is issued).
    """
    label = _reachable_label(q, tol)
    if label is CausalMembership.ORIGIN:
        return DistanceResult(0.0, DistanceRegime.ORIGIN)
    if label is CausalMembership.BOUNDARY:
        return DistanceResult(0.0, DistanceRegime.LIGHTLIKE_BOUNDARY, w=math.copysign(0.25, q.z), p=math.copysign(math.inf, q.z))

    r = (q.x - q.y) * (q.x + q.y)
    w = q.z / r
    reduced = abs(w) > 0.25 - BEAK_CLAMP_MARGIN
    if reduced:
        if abs(w) >= 0.25:
            w = math.copysign(float(np.nextafter(0.25, 0.0)), w)
        warnings.warn(f"distance at {q}: beta argument {w!r} is within {BEAK_CLAMP_MARGIN} of 1/4, "
                      f"result has reduced precision", RuntimeWarning)
    p = beta(w)
    value = math.sqrt(r) * p_over_sinh(p)
    return DistanceResult(value, DistanceRegime.TIMELIKE, w=w, p=p, reduced_precision=reduced)


def distance_between(q1: Point, q2: Point, tol: float = 0.0) -> DistanceResult:
    """d(q1, q2) = d(q1^{-1} q2)."""
    return distance(relative_point(q1, q2), tol)


def distance_bounds(q: Point, tol: float = 0.0) -> Tuple[float, float]:
    """(sqrt(max(0, x^2 - y^2 - 4|z|)), sqrt(x^2 - y^2)), which bracket d(q)."""
    _reachable_label(q, tol)
    r = max(0.0, (q.x - q.y) * (q.x + q.y))
    return math.sqrt(max(0.0, r - 4.0 * abs(q.z))), math.sqrt(r)


def lower_ratio_squared(p: float) -> float:
    """(lower bound / d)^2 as a function of p: (sinh^2 p - sinh p cosh p + p)/p^2."""
    if p == 0.0:
        return 1.0
    ap = abs(p)
    # sinh^2 p - sinh p cosh p + p = p - sinh p e^{-p} = p - (1 - e^{-2p})/2
    numerator = ap + 0.5 * math.expm1(-2.0 * ap)
    if ap < 1e-3:
        # p - (1 - e^{-2p})/2 = p^2 - 2p^3/3 + p^4/3 - ...
        numerator = ap * ap * (1.0 - 2.0 * ap / 3.0 + ap * ap / 3.0)
    return numerator / (ap * ap)


def bound_ratios(q: Point, tol: float = 0.0) -> Tuple[float, float]:
    """
    (lower/d, d/upper) at q. Both are 1 on the plane z = 0 and both tend
    to 0 as q approaches the beak.
    """
    result = distance(q, tol)
    if result.regime is not DistanceRegime.TIMELIKE:
        return (0.0, 0.0) if result.regime is DistanceRegime.LIGHTLIKE_BOUNDARY else (1.0, 1.0)
    return math.sqrt(lower_ratio_squared(result.p)), p_over_sinh(result.p)


def distance_gradient(q: Point, h: float = 1e-6) -> np.ndarray:
    """Central-difference gradient of d at an interior point."""
    grad = np.zeros(3)
    base = q.as_array()
    step = h * max(1.0, abs(q.x))
    for k in range(3):
        e = np.zeros(3)
        e[k] = step
        plus = distance(Point.from_array(base + e)).value
        minus = distance(Point.from_array(base - e)).value
        grad[k] = (plus - minus) / (2.0 * step)
    return grad


# ======= plane restrictions =======
PLANE_AXES = {"z": ("x", "y"), "y": ("x", "z"), "x": ("y", "z")}


def parse_plane(spec: str) -> Tuple[str, float]:
    """Parse 'z=0', 'y=0' or 'x=1' into (axis, value)."""
    try:
        axis, value = spec.replace(" ", "").split("=")
        value = float(value)
    except ValueError:
        raise ValueError(f"plane must look like 'z=0', got {spec!r}")
    if axis not in PLANE_AXES:
        raise ValueError(f"plane axis must be one of x, y, z, got {axis!r}")
    return axis, value


def plane_restriction(plane: str, u_range: Tuple[float, float], v_range: Tuple[float, float],
                      nu: int, nv: int, tol: Optional[float] = 0.0) -> pd.DataFrame:
    """
    Evaluate d on a rectangular grid of a coordinate plane.

    Parameters:
    - plane: str
        'z=c', 'y=c' or 'x=c'; the free coordinates are listed in PLANE_AXES.
    - u_range, v_range: (lo, hi)
        Ranges of the first and second free coordinate.
    - nu, nv: int
        Grid sizes, at least 2 each.

    Returns:
    - pd.DataFrame with columns x, y, z, membership, d (d is NaN outside J+),
      rows ordered with v varying slowest.
    """
    axis, value = parse_plane(plane)
    if nu < 2 or nv < 2:
        raise BadGrid(f"grid needs at least 2 x 2 nodes, got {nu} x {nv}")
    for lo, hi in (u_range, v_range):
        if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
            raise BadGrid(f"range ({lo}, {hi}) must be finite and increasing")
    u_name, v_name = PLANE_AXES[axis]
    rows = []
    for v in np.linspace(v_range[0], v_range[1], nv):
        for u in np.linspace(u_range[0], u_range[1], nu):
            coords = {axis: value, u_name: float(u), v_name: float(v)}
            q = Point(coords["x"], coords["y"], coords["z"])
            label = membership(q, tol)
            d = math.nan if label is CausalMembership.OUTSIDE else distance(q, tol).value
            rows.append({"x": q.x, "y": q.y, "z": q.z, "membership": label.value, "d": d})
    return pd.DataFrame(rows, columns=["x", "y", "z", "membership", "d"])
