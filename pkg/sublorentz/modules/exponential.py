"""
The exponential map of the normal timelike extremals and its inverse.

Extremals leaving the identity are labelled by ExpCoords (psi, c, t): psi is
the hyperbolic angle of the initial velocity, c the conserved momentum h3
and t the arclength time. The scalar functions

    alpha(p) = (sinh 2p - 2p) / (8 sinh^2 p),   beta = alpha^{-1}
    a(c)     = (sinh c - c) / (2 c^2),          b    = a^{-1}

are defined here as well; the sphere profile is built from a and b.

All closed forms are written through three cancellation-free helpers:

    sinhc(u)     = sinh(u) / u
    sinh_tail(u) = (sinh(u) - u) / u^3     (Taylor series for small |u|)

so x = t sinhc(p) cosh(psi + p), y = t sinhc(p) sinh(psi + p) and
z = c t^3 sinh_tail(ct) / 2 with p = ct/2. These agree with the c = 0 map
in the limit, so no separate small-|ct| branch is needed.
"""

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Tuple

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from sublorentz.constants import (BETA_ABS_TOL, BETA_REL_TOL, BETA_SERIES_SWITCH,
                                  BRACKET_MAX_DOUBLINGS, LARGE_P_SWITCH, ROOT_MAXITER,
                                  ROOT_XTOL, SINH_TAIL_SERIES_SWITCH)
from sublorentz.exceptions import NonpositiveTime, NotInterior, OutOfDomain, SolverFailure
from sublorentz.modules.causal import CausalMembership, membership
from sublorentz.modules.group_core import Point

# sinh would overflow past this argument
_SINH_OVERFLOW = 709.0
# 1/(2k+3)! for k = 0..6
_SINH_TAIL_COEFFS = tuple(1.0 / math.factorial(2 * k + 3) for k in range(7))


@dataclass(frozen=True)
class ExpCoords:
    psi: float
    c: float
    t: float

    def __post_init__(self):
        for name in ("psi", "c", "t"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ValueError(f"ExpCoords.{name} must be finite, got {value}")

    def as_tuple(self) -> Tuple[float, float, float]:
        return (self.psi, self.c, self.t)


@dataclass(frozen=True)
class Covector:
    h1: float
    h2: float
    h3: float

    @classmethod
    def normal(cls, angle: float, c: float) -> "Covector":
        """Point of the level set h1^2 - h2^2 = 1, h1 < 0, at hyperbolic angle `angle`."""
        return cls(-math.cosh(angle), math.sinh(angle), c)

    def as_array(self) -> np.ndarray:
        return np.array([self.h1, self.h2, self.h3], dtype=float)

    def hamiltonian(self) -> float:
        return 0.5 * (self.h2 * self.h2 - self.h1 * self.h1)


# ======= cancellation-free helpers =======
def sinhc(u: float) -> float:
    """sinh(u)/u with sinhc(0) = 1."""
    if u == 0.0:
        return 1.0
    if abs(u) > _SINH_OVERFLOW:
        return math.inf
    return math.sinh(u) / u


def sinh_tail(u: float) -> float:
    """(sinh(u) - u)/u^3, equal to 1/6 at u = 0."""
    au = abs(u)
    if au < SINH_TAIL_SERIES_SWITCH:
        u2 = u * u
        acc = 0.0
        for coeff in reversed(_SINH_TAIL_COEFFS):
            acc = acc * u2 + coeff
        return acc
    if au > _SINH_OVERFLOW:
        return math.inf
    return (math.sinh(au) - au) / (au * au * au)


def p_over_sinh(p: float) -> float:
    """p/sinh(p), equal to 1 at p = 0 and decaying like 2|p|e^{-|p|}."""
    ap = abs(p)
    if ap < LARGE_P_SWITCH:
        return 1.0 / sinhc(ap)
    return 2.0 * ap * math.exp(-ap) / -math.expm1(-2.0 * ap)


# ======= alpha and beta =======
def alpha(p: float) -> float:
    """
    alpha(p) = (sinh 2p - 2p)/(8 sinh^2 p), an odd increasing bijection R -> (-1/4, 1/4).

    Near 0 it behaves like p/6 - p^3/45 + p^5/315.
    """
    ap = abs(p)
    if ap < LARGE_P_SWITCH:
        value = ap * sinh_tail(2.0 * ap) / sinhc(ap) ** 2
    else:
        e2 = math.exp(-2.0 * ap)
        coth = (1.0 + e2) / (1.0 - e2)
        tail = 4.0 * ap * e2 / (1.0 - e2) ** 2
        value = 0.25 * (coth - tail)
    return math.copysign(value, p)


def bracketed_inverse(func: Callable[[float], float], target: float, guess: float,
                       name: str, upper: float) -> float:
    """
    Solve func(x) = target for x >= 0 where func is increasing with func(0) = 0.

    The upper end of the bracket starts at twice the guess and is doubled
    (never past `upper`) until it overshoots; the root is then polished by
    brentq.
    """
    hi = min(max(2.0 * guess, 1e-300), upper)
    for _ in range(BRACKET_MAX_DOUBLINGS):
        f_hi = func(hi)
        if f_hi >= target:
            break
        if hi >= upper:
            raise OutOfDomain(f"{name}: target {target} lies beyond the representable range")
        hi = min(2.0 * hi, upper)
    else:
        raise SolverFailure(f"{name}: could not bracket a root for target {target}")
    if f_hi == target:
        return hi
    try:
        return brentq(lambda x: func(x) - target, 0.0, hi,
                      xtol=ROOT_XTOL, rtol=4 * np.finfo(float).eps, maxiter=ROOT_MAXITER)
    except RuntimeError as exc:
        raise SolverFailure(f"{name}: brentq failed for target {target}: {exc}")


def beta(w: float) -> float:
    """Inverse of alpha on (-1/4, 1/4)."""
    if not abs(w) < 0.25:
        raise OutOfDomain(f"beta is defined on (-1/4, 1/4), got w = {w}")
    if w == 0.0:
        return 0.0
    aw = abs(w)
    if aw < BETA_SERIES_SWITCH:
        p = 6.0 * aw + 28.8 * aw ** 3
    else:
        p = bracketed_inverse(alpha, aw, 6.0 * aw, "beta", upper=1e3)
        residual = abs(alpha(p) - aw)
        if residual > BETA_ABS_TOL + BETA_REL_TOL * aw:
            warnings.warn(f"beta({w}) converged with residual {residual:.3e}", RuntimeWarning)
    return math.copysign(p, w)


# ======= a and b =======
def a_func(c: float) -> float:
    """a(c) = (sinh c - c)/(2c^2), an odd increasing bijection of R with a(c) ~ c/12."""
    ac = abs(c)
    return math.copysign(0.5 * ac * sinh_tail(ac), c)


def b_func(z: float) -> float:
    """Inverse of a_func."""
    if not math.isfinite(z):
        raise OutOfDomain(f"b is defined on finite reals, got z = {z}")
    if z == 0.0:
        return 0.0
    az = abs(z)
    if az < BETA_SERIES_SWITCH:
        c = 12.0 * az - 86.4 * az ** 3
    else:
        c = bracketed_inverse(a_func, az, 12.0 * az, "b", upper=_SINH_OVERFLOW)
    return math.copysign(c, z)


# ======= exponential map =======
def exp_map(lc: ExpCoords) -> Point:
    """
    Endpoint of the arclength-parametrized normal extremal (psi, c) at time t.

    Parameters:
    - lc: ExpCoords
        Requires lc.t > 0.

    Returns:
    - Point in I+; (t cosh psi, t sinh psi, 0) when c = 0.
    """
    if not lc.t > 0:
        raise NonpositiveTime(f"exp_map needs t > 0, got t = {lc.t}")
    ct = lc.c * lc.t
    p = 0.5 * ct
    try:
        scale = lc.t * sinhc(p)
        x = scale * math.cosh(lc.psi + p)
        y = scale * math.sinh(lc.psi + p)
        z = 0.5 * lc.c * lc.t ** 3 * sinh_tail(ct)
        return Point(x, y, z)
    except (OverflowError, ValueError):
        raise OutOfDomain(f"exp_map overflows at {lc}")


def hyperbolic_angle(x: float, y: float) -> float:
    """artanh(y/x) for x > |y|, odd in y so both sides of y = 0 lose the same digits."""
    return math.copysign(0.5 * math.log1p(2.0 * abs(y) / (x - abs(y))), y)



def exp_inverse(q: Point, tol: float = 0.0) -> ExpCoords:
    """
    Exp coordinates of an interior point.

    Parameters:
    - q: Point
        Must classify as Interior under `tol`.
    - tol: float
        Boundary band passed to membership (exact sets by default).

    Returns:
    - ExpCoords with exp_map(result) = q.
    """
    label = membership(q, tol)
    if label is not CausalMembership.INTERIOR:
        raise NotInterior(f"exp_inverse needs an interior point, {q} is {label.value}")
    r = (q.x - q.y) * (q.x + q.y)
    theta = hyperbolic_angle(q.x, q.y)
    if q.z == 0.0:
        return ExpCoords(theta, 0.0, math.sqrt(r))
    w = q.z / r
    if abs(w) >= 0.25:
        w = math.copysign(np.nextafter(0.25, 0.0), w)
    p = beta(w)
    # p and z share a sign, so p * tail / z > 0; c^2 = 4 p^3 tail(2p) / z
    ratio = p * sinh_tail(2.0 * p) / q.z
    t = 1.0 / math.sqrt(ratio)
    c = 2.0 * p / t
    return ExpCoords(theta - p, c, t)


def covector_along(lc: ExpCoords, s: float) -> Covector:
    """Normal covector of the extremal lc at time s."""
    return Covector.normal(lc.psi + lc.c * s, lc.c)


# ======= Hamiltonian system =======
def hamiltonian_rhs(state) -> np.ndarray:
    """
    Right-hand side of the normal Hamiltonian system.

    Parameters:
    - state: array-like (h1, h2, h3, x, y, z)

    Returns:
    - np.ndarray (dh1, dh2, dh3, dx, dy, dz) with qdot = -h1 X1(q) + h2 X2(q).
    """
    h1, h2, h3, x, y, _ = (float(v) for v in state)
    u1, u2 = -h1, h2
    return np.array([-h2 * h3,
                     -h1 * h3,
                     0.0,
                     u1,
                     u2,
                     (x * u2 - y * u1) / 2.0])


@dataclass
class ExtremalIntegration:
    endpoint: Point
    covector: Covector
    max_drift: float
    times: np.ndarray
    states: np.ndarray


def integrate_extremal(lc: ExpCoords, rtol: float = 1e-12, atol: float = 1e-12) -> ExtremalIntegration:
    """
    Integrate hamiltonian_rhs from the identity with initial covector at angle psi.

    max_drift is the largest deviation of h1^2 - h2^2 from 1 over the
    accepted steps.
    """
    if not lc.t > 0:
        raise NonpositiveTime(f"integrate_extremal needs t > 0, got t = {lc.t}")
    h0 = Covector.normal(lc.psi, lc.c)
    y0 = np.array([h0.h1, h0.h2, h0.h3, 0.0, 0.0, 0.0])
    sol = solve_ivp(lambda _, s: hamiltonian_rhs(s), (0.0, lc.t), y0,
                    method="DOP853", rtol=rtol, atol=atol)
    if not sol.success:
        raise SolverFailure(f"integrate_extremal failed at {lc}: {sol.message}")
    states = sol.y.T
    drift = np.abs((states[:, 0] - states[:, 1]) * (states[:, 0] + states[:, 1]) - 1.0)
    last = states[-1]
    return ExtremalIntegration(endpoint=Point.from_array(last[3:]),
                               covector=Covector(*(float(v) for v in last[:3])),
                               max_drift=float(drift.max()),
                               times=sol.t,
                               states=states)
