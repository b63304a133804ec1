"""
Optimal synthesis from the identity.

Interior targets are reached by the unique timelike normal extremal given by
exp_inverse. Points of the beak are reached by lightlike curves with one or
two edges along X1 - X2 and X1 + X2.
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional

import numpy as np

from sublorentz.exceptions import DegenerateTarget, NegativeParameter, Unreachable
from sublorentz.modules.causal import CausalMembership, membership
from sublorentz.modules.exponential import ExpCoords, exp_inverse, exp_map
from sublorentz.modules.group_core import Control, Piece, Point, velocity_in_frame


class TrajectoryKind(Enum):
    TIMELIKE_NORMAL = "TimelikeNormal"
    LIGHTLIKE_SINGLE = "LightlikeSingle"
    LIGHTLIKE_BROKEN = "LightlikeBroken"


class BrokenOrder(Enum):
    MINUS_THEN_PLUS = "MinusThenPlus"   # ends on the z >= 0 sheet
    PLUS_THEN_MINUS = "PlusThenMinus"   # ends on the z <= 0 sheet

    @property
    def sign(self) -> int:
        return 1 if self is BrokenOrder.MINUS_THEN_PLUS else -1

    @classmethod
    def parse(cls, value) -> "BrokenOrder":
        if isinstance(value, cls):
            return value
        aliases = {"minusthenplus": cls.MINUS_THEN_PLUS, "-+": cls.MINUS_THEN_PLUS,
                   "plusthenminus": cls.PLUS_THEN_MINUS, "+-": cls.PLUS_THEN_MINUS}
        key = str(value).replace("_", "").lower()
        if key not in aliases:
            raise ValueError(f"broken order must be MinusThenPlus or PlusThenMinus, got {value!r}")
        return aliases[key]


class ExtremalClass(Enum):
    STRICTLY_NORMAL = "StrictlyNormal"
    NONSTRICTLY_NORMAL = "NonstrictlyNormal"
    # abnormal without a normal lift; no optimal curve from the identity is of this type
    ABNORMAL_ONLY = "AbnormalOnly"


@dataclass
class Trajectory:
    """
    Sampled optimal curve.

    samples has one row (time, x, y, z) per sample; times are arclength for
    TimelikeNormal and the u1 = 1 parameter (equal to x) for the lightlike kinds.
    """
    kind: TrajectoryKind
    samples: np.ndarray
    length: float
    exp_coords: Optional[ExpCoords] = None
    direction: Optional[int] = None
    order: Optional[BrokenOrder] = None
    tau1: Optional[float] = None
    tau2: Optional[float] = None
    pieces: List[Piece] = field(default_factory=list)

    @property
    def endpoint(self) -> Point:
        return Point.from_array(self.samples[-1, 1:])

    @property
    def duration(self) -> float:
        return float(self.samples[-1, 0])

    def parameters(self) -> dict:
        if self.kind is TrajectoryKind.TIMELIKE_NORMAL:
            lc = self.exp_coords
            return {"psi": lc.psi, "c": lc.c, "t": lc.t}
        if self.kind is TrajectoryKind.LIGHTLIKE_SINGLE:
            return {"direction": "+" if self.direction > 0 else "-", "tau": self.duration}
        return {"order": self.order.value, "tau1": self.tau1, "tau2": self.tau2}


# ======= timelike =======
def control_at(traj: Trajectory, s: float) -> Control:
    """Control of the trajectory at parameter s."""
    if traj.kind is TrajectoryKind.TIMELIKE_NORMAL:
        lc = traj.exp_coords
        angle = lc.psi + lc.c * s
        return Control(math.cosh(angle), math.sinh(angle))
    elapsed = 0.0
    for u, dt in traj.pieces:
        elapsed += dt
        if s <= elapsed:
            return u
    return traj.pieces[-1][0]


def control_schedule(traj: Trajectory, pieces: int = 256) -> List[Piece]:
    """
    Piecewise-constant control law of the trajectory.

    Exact for the lightlike kinds; for TimelikeNormal the law is sampled at
    the midpoints of `pieces` equal time steps, each piece keeping unit speed.
    """
    if traj.kind is not TrajectoryKind.TIMELIKE_NORMAL:
        return list(traj.pieces)
    if pieces < 1:
        raise ValueError(f"pieces must be positive, got {pieces}")
    dt = traj.exp_coords.t / pieces
    return [(control_at(traj, (k + 0.5) * dt), dt) for k in range(pieces)]


def _timelike(q: Point, n: int) -> Trajectory:
    lc = exp_inverse(q)
    times = np.linspace(0.0, lc.t, n)
    rows = [(0.0, 0.0, 0.0, 0.0)]
    for s in times[1:]:
        p = exp_map(ExpCoords(lc.psi, lc.c, float(s)))
        rows.append((float(s), p.x, p.y, p.z))
    return Trajectory(kind=TrajectoryKind.TIMELIKE_NORMAL, samples=np.array(rows),
                      length=lc.t, exp_coords=lc)


# ======= lightlike =======
def _single(tau: float, direction: int, n: int) -> Trajectory:
    times = np.linspace(0.0, tau, n)
    samples = np.column_stack([times, times, direction * times, np.zeros(n)])
    return Trajectory(kind=TrajectoryKind.LIGHTLIKE_SINGLE, samples=samples, length=0.0,
                      direction=direction, pieces=[(Control(1.0, float(direction)), tau)])


def _broken(tau1: float, tau2: float, order: BrokenOrder, n: int) -> Trajectory:
    sigma = order.sign
    times = np.linspace(0.0, tau1 + tau2, n)
    first = times <= tau1
    ys = np.where(first, -sigma * times, sigma * (times - 2.0 * tau1))
    zs = np.where(first, 0.0, sigma * tau1 * (times - tau1))
    samples = np.column_stack([times, times, ys, zs])
    pieces = [(Control(1.0, float(-sigma)), tau1), (Control(1.0, float(sigma)), tau2)]
    return Trajectory(kind=TrajectoryKind.LIGHTLIKE_BROKEN, samples=samples, length=0.0,
                      order=order, tau1=tau1, tau2=tau2, pieces=pieces)


def abnormal_family(tau1: float, tau2: float, order="MinusThenPlus", n: int = 101) -> Trajectory:
    """
    Broken lightlike curve: tau1 along X1 -+ X2, then tau2 along X1 +- X2.

    MinusThenPlus ends at beak_point(tau1, tau2, "+"), PlusThenMinus at
    beak_point(tau1, tau2, "-").
    """
    if tau1 < 0 or tau2 < 0:
        raise NegativeParameter(f"edge lengths must be nonnegative, got tau1={tau1}, tau2={tau2}")
    if tau1 + tau2 == 0:
        raise DegenerateTarget("abnormal_family with tau1 = tau2 = 0 is the constant curve")
    if n < 2:
        raise ValueError(f"need at least 2 samples, got {n}")
    return _broken(float(tau1), float(tau2), BrokenOrder.parse(order), n)


def maximizer(q: Point, n: int = 101, tol: Optional[float] = None) -> Trajectory:
    """
    The unique length maximizer from the identity to q.

    Parameters:
    - q: Point in J+ other than the identity.
    - n: int
        Number of samples, at least 2.
    - tol: float or None
        Boundary band for dispatching between the timelike and lightlike
        constructions (default scaled tolerance).
    """
    if n < 2:
        raise ValueError(f"need at least 2 samples, got {n}")
    label = membership(q, tol)
    if label is CausalMembership.OUTSIDE:
        raise Unreachable(f"{q} lies outside J+")
    if label is CausalMembership.ORIGIN:
        raise DegenerateTarget("the maximizer to the identity is the constant curve")
    if label is CausalMembership.INTERIOR:
        return _timelike(q, n)

    if q.z == 0.0:
        return _single(q.x, 1 if q.y >= 0 else -1, n)
    order = BrokenOrder.MINUS_THEN_PLUS if q.z > 0 else BrokenOrder.PLUS_THEN_MINUS
    sigma = order.sign
    tau1 = max(0.0, (q.x - sigma * q.y) / 2.0)
    tau2 = max(0.0, (q.x + sigma * q.y) / 2.0)
    if tau1 == 0.0:
        return _single(tau2, sigma, n)
    if tau2 == 0.0:
        return _single(tau1, -sigma, n)
    return _broken(tau1, tau2, order, n)


def classify_extremal(traj: Trajectory) -> ExtremalClass:
    if traj.kind is TrajectoryKind.TIMELIKE_NORMAL:
        return ExtremalClass.STRICTLY_NORMAL
    return ExtremalClass.NONSTRICTLY_NORMAL


def dynamics_residual(traj: Trajectory) -> dict:
    """
    Finite-difference velocities between consecutive samples, written in the
    frame at the chord midpoint.

    Returns:
    - dict with 'cone' (largest |v2| - v1, should be <= O(dt^2)) and
      'vertical' (largest |v3|).
    """
    s = traj.samples
    cone, vertical = -math.inf, 0.0
    for k in range(len(s) - 1):
        dt = s[k + 1, 0] - s[k, 0]
        if dt <= 0:
            continue
        mid = Point.from_array((s[k, 1:] + s[k + 1, 1:]) / 2.0)
        v = velocity_in_frame(mid, (s[k + 1, 1:] - s[k, 1:]) / dt)
        cone = max(cone, abs(v.v2) - v.v1)
        vertical = max(vertical, abs(v.v3))
    return {"cone": cone, "vertical": vertical}
