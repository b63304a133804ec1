"""
Membership in the chronological future I+ and the causal future J+ of the
identity, and the lightlike parametrization of their common boundary (the
Heisenberg beak).
"""

import math
from enum import Enum
from typing import Optional

from sublorentz.constants import BOUNDARY_RTOL
from sublorentz.exceptions import NegativeParameter
from sublorentz.modules.group_core import Point


class CausalMembership(Enum):
    INTERIOR = "Interior"
    BOUNDARY = "Boundary"
    ORIGIN = "Origin"
    OUTSIDE = "Outside"


class BeakBranch(Enum):
    UPPER = "+"   # z >= 0 sheet
    LOWER = "-"   # z <= 0 sheet

    @classmethod
    def parse(cls, value) -> "BeakBranch":
        if isinstance(value, cls):
            return value
        for member in cls:
            if value == member.value or str(value).lower() == member.name.lower():
                return member
        raise ValueError(f"beak branch must be '+' or '-', got {value!r}")


def default_tolerance(q: Point) -> float:
    """Boundary band for q; s is quadratic in the coordinates so the band scales with x^2."""
    return BOUNDARY_RTOL * max(1.0, q.x * q.x)


def beak_gap(q: Point) -> float:
    """s = -x^2 + y^2 + 4|z|, with x^2 - y^2 formed as (x - y)(x + y)."""
    return 4.0 * abs(q.z) - (q.x - q.y) * (q.x + q.y)


def membership(q: Point, tol: Optional[float] = None) -> CausalMembership:
    """
    Classify q against I+ and J+.

    Parameters:
    - q: Point
    - tol: float or None
        Width of the boundary band. None selects default_tolerance(q);
        pass 0.0 for the exact sets.
    """
    if tol is None:
        tol = default_tolerance(q)
    if tol < 0:
        raise ValueError(f"tolerance must be nonnegative, got {tol}")
    if q.norm() <= tol:
        return CausalMembership.ORIGIN
    s = beak_gap(q)
    if s < -tol and q.x > 0:
        return CausalMembership.INTERIOR
    if abs(s) <= tol and q.x >= 0:
        return CausalMembership.BOUNDARY
    return CausalMembership.OUTSIDE


def reduced_attainable(q: Point, tol: Optional[float] = None) -> bool:
    """Membership in I+ together with the identity, the attainable set of the strictly timelike system."""
    return membership(q, tol) in (CausalMembership.INTERIOR, CausalMembership.ORIGIN)


def beak_point(tau1: float, tau2: float, branch="+") -> Point:
    """
    Endpoint of the broken lightlike curve with edge lengths tau1, tau2.

    Branch "+" gives (tau1 + tau2, tau2 - tau1, tau1 tau2) and branch "-"
    gives (tau1 + tau2, tau1 - tau2, -tau1 tau2).
    """
    if tau1 < 0 or tau2 < 0:
        raise NegativeParameter(f"beak parameters must be nonnegative, got tau1={tau1}, tau2={tau2}")
    branch = BeakBranch.parse(branch)
    if branch is BeakBranch.UPPER:
        return Point(tau1 + tau2, tau2 - tau1, tau1 * tau2)
    return Point(tau1 + tau2, tau1 - tau2, -tau1 * tau2)


def beak_height(y: float, z: float) -> float:
    """x-coordinate of the beak over (y, z)."""
    return math.sqrt(y * y + 4.0 * abs(z))
