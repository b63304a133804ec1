"""
Heisenberg group algebra, the left-invariant frame X1, X2, X3, causal
classification of horizontal vectors and the sub-Lorentzian length of
piecewise-constant admissible curves.
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Iterable, Sequence, Tuple

import numpy as np

from sublorentz.exceptions import InadmissibleControl, NonHorizontal


def _require_finite(name: str, **values: float) -> None:
    for key, value in values.items():
        if not math.isfinite(value):
            raise ValueError(f"{name}.{key} must be finite, got {value}")


@dataclass(frozen=True)
class Point:
    x: float
    y: float
    z: float

    def __post_init__(self):
        _require_finite("Point", x=self.x, y=self.y, z=self.z)

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=float)

    @classmethod
    def from_array(cls, arr) -> "Point":
        x, y, z = (float(v) for v in arr)
        return cls(x, y, z)

    def norm(self) -> float:
        return math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)


ORIGIN = Point(0.0, 0.0, 0.0)


@dataclass(frozen=True)
class FrameVector:
    """Tangent vector written in the frame X1, X2, X3."""
    v1: float
    v2: float
    v3: float = 0.0

    def __post_init__(self):
        _require_finite("FrameVector", v1=self.v1, v2=self.v2, v3=self.v3)

    def scaled(self, k: float) -> "FrameVector":
        return FrameVector(k * self.v1, k * self.v2, k * self.v3)


class CausalType(Enum):
    TIMELIKE = "Timelike"
    SPACELIKE = "Spacelike"
    LIGHTLIKE = "Lightlike"
    # curves that are nonspacelike but mix timelike and lightlike pieces
    NONSPACELIKE = "NonspacelikeOnly"

    @property
    def is_nonspacelike(self) -> bool:
        return self is not CausalType.SPACELIKE


class TimeOrientation(Enum):
    FUTURE_DIRECTED = "FutureDirected"
    PAST_DIRECTED = "PastDirected"
    NOT_APPLICABLE = "NotApplicable"


@dataclass(frozen=True)
class CausalClass:
    kind: CausalType
    orientation: TimeOrientation


@dataclass(frozen=True)
class Control:
    u1: float
    u2: float

    def __post_init__(self):
        _require_finite("Control", u1=self.u1, u2=self.u2)

    def is_admissible(self) -> bool:
        return self.u1 >= abs(self.u2)

    def speed(self) -> float:
        """Lorentzian speed sqrt(u1^2 - u2^2) of an admissible control."""
        return math.sqrt(max(0.0, (self.u1 - self.u2) * (self.u1 + self.u2)))


# a piece of a piecewise-constant curve: (control, duration)
Piece = Tuple[Control, float]


# ======= group law =======
def product(a: Point, b: Point) -> Point:
    return Point(a.x + b.x,
                 a.y + b.y,
                 a.z + b.z + (a.x * b.y - b.x * a.y) / 2.0)


def inverse(a: Point) -> Point:
    return Point(-a.x, -a.y, -a.z)


def left_translate(a: Point, q: Point) -> Point:
    """Left translation L_a(q) = a·q."""
    return product(a, q)


def relative_point(q1: Point, q2: Point) -> Point:
    """Position of q2 seen from q1, i.e. q1^{-1}·q2."""
    return product(inverse(q1), q2)


# ======= frame =======
def frame_at(q: Point) -> np.ndarray:
    """
    Frame fields at q in coordinate components.

    Returns:
    - frame: np.ndarray of shape (3, 3)
        Rows are X1 = (1, 0, -y/2), X2 = (0, 1, x/2), X3 = (0, 0, 1).
    """
    return np.array([[1.0, 0.0, -q.y / 2.0],
                     [0.0, 1.0, q.x / 2.0],
                     [0.0, 0.0, 1.0]])


def frame_field(i: int) -> Callable[[np.ndarray], np.ndarray]:
    """Coordinate expression of X_i as a vector field on R^3 (i in 1..3)."""
    if i not in (1, 2, 3):
        raise ValueError(f"frame index must be 1, 2 or 3, got {i}")

    def field(p: np.ndarray) -> np.ndarray:
        return frame_at(Point.from_array(p))[i - 1]

    return field


def lie_bracket(i: int, j: int, q: Point, h: float = 1e-5) -> np.ndarray:
    """
    Central-difference Lie bracket [X_i, X_j] at q.

    [X, Y](q) = DY(q) X(q) - DX(q) Y(q), with both Jacobians estimated by
    central differences of step h.
    """
    X, Y = frame_field(i), frame_field(j)
    p = q.as_array()

    def jacobian(field):
        cols = []
        for k in range(3):
            e = np.zeros(3)
            e[k] = h
            cols.append((field(p + e) - field(p - e)) / (2.0 * h))
        return np.stack(cols, axis=1)

    return jacobian(Y) @ X(p) - jacobian(X) @ Y(p)


def velocity_in_frame(q: Point, qdot) -> FrameVector:
    """Write a coordinate velocity (xdot, ydot, zdot) at q in the frame."""
    xd, yd, zd = (float(v) for v in qdot)
    return FrameVector(xd, yd, zd + q.y * xd / 2.0 - q.x * yd / 2.0)


# ======= causal classification =======
def metric(v: FrameVector) -> float:
    """g(v) = -v1^2 + v2^2 on the horizontal plane."""
    return (v.v2 - v.v1) * (v.v2 + v.v1)


def classify(v: FrameVector, tol: float = 0.0) -> CausalClass:
    """
    Causal class of a horizontal vector.

    Parameters:
    - v: FrameVector
        Must be horizontal (v3 == 0).
    - tol: float
        Absolute band around g(v) = 0 treated as lightlike.

    Returns:
    - CausalClass with orientation FutureDirected iff the vector is
      nonspacelike and v1 > 0.
    """
    if v.v3 != 0.0:
        raise NonHorizontal(f"vector {v} has v3 = {v.v3} != 0")
    g = metric(v)
    if v.v1 == 0.0 and v.v2 == 0.0:
        kind = CausalType.SPACELIKE
    elif g < -tol:
        kind = CausalType.TIMELIKE
    elif abs(g) <= tol:
        kind = CausalType.LIGHTLIKE
    else:
        kind = CausalType.SPACELIKE

    if kind is CausalType.SPACELIKE:
        orientation = TimeOrientation.NOT_APPLICABLE
    elif v.v1 > 0:
        orientation = TimeOrientation.FUTURE_DIRECTED
    else:
        orientation = TimeOrientation.PAST_DIRECTED
    return CausalClass(kind, orientation)


def _check_pieces(pieces: Iterable[Piece]) -> Sequence[Piece]:
    pieces = list(pieces)
    for k, (u, dt) in enumerate(pieces):
        if not u.is_admissible():
            raise InadmissibleControl(f"piece {k}: control {u} violates u1 >= |u2|")
        if not (dt >= 0.0 and math.isfinite(dt)):
            raise ValueError(f"piece {k}: duration must be finite and nonnegative, got {dt}")
    return pieces


def curve_length(pieces: Iterable[Piece]) -> float:
    """Sum over pieces of duration * sqrt(u1^2 - u2^2)."""
    return float(math.fsum(dt * u.speed() for u, dt in _check_pieces(pieces)))


def classify_schedule(pieces: Iterable[Piece]) -> CausalType:
    """Causal type of a piecewise-constant curve; zero-duration pieces are skipped."""
    kinds = set()
    for u, dt in pieces:
        if dt == 0.0:
            continue
        kinds.add(classify(FrameVector(u.u1, u.u2)).kind)
    if not kinds or CausalType.SPACELIKE in kinds:
        return CausalType.SPACELIKE
    if kinds == {CausalType.TIMELIKE}:
        return CausalType.TIMELIKE
    if kinds == {CausalType.LIGHTLIKE}:
        return CausalType.LIGHTLIKE
    return CausalType.NONSPACELIKE
