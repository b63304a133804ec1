"""
Seeded point and coordinate generators used by the check suite, the tests
and the grid-producing CLI commands.
"""

import math
from typing import List, Optional, Sequence, Tuple

import numpy as np

from sublorentz.modules.causal import beak_point
from sublorentz.modules.exponential import ExpCoords, exp_map
from sublorentz.modules.group_core import Point

EPS = float(np.finfo(float).eps)


# =============================================================================
# Exp coordinates
# =============================================================================
def exp_coords_grid(n_psi: int, n_c: int, n_t: int,
                    psi_range: Tuple[float, float] = (-3.0, 3.0),
                    c_range: Tuple[float, float] = (-10.0, 10.0),
                    t_max: float = 10.0,
                    max_ct: Optional[float] = None) -> np.ndarray:
    """
    Tensor grid of (psi, c, t) with t in (0, t_max].

    Parameters:
    - max_ct: float or None
        Drop nodes with |c t| above this value.

    Returns:
    - np.ndarray of shape (M, 3)
    """
    psi = np.linspace(*psi_range, n_psi)
    c = np.linspace(*c_range, n_c)
    t = np.linspace(t_max / n_t, t_max, n_t)
    grid = np.stack(np.meshgrid(psi, c, t, indexing="ij"), axis=-1).reshape(-1, 3)
    if max_ct is not None:
        grid = grid[np.abs(grid[:, 1] * grid[:, 2]) <= max_ct]
    return grid


def sample_exp_coords(rng: np.random.Generator, n: int,
                      psi_range: Tuple[float, float] = (-1.0, 1.0),
                      c_range: Tuple[float, float] = (-2.0, 2.0),
                      t_range: Tuple[float, float] = (0.2, 3.0)) -> List[ExpCoords]:
    psi = rng.uniform(*psi_range, n)
    c = rng.uniform(*c_range, n)
    t = rng.uniform(*t_range, n)
    return [ExpCoords(float(a), float(b), float(s)) for a, b, s in zip(psi, c, t)]


def exp_inverse_condition(psi: float, c: float, t: float) -> float:
    """
    Rough relative error with which the float point exp_map(psi, c, t)
    determines (psi, c, t). Rounding x - y or x + y costs a factor
    e^{2|psi + ct/2|}; beta amplifies errors in z/(x^2 - y^2) by about
    e^{|ct|}/(4|ct|) once |ct| > 2.
    """
    p = abs(0.5 * c * t)
    amplification = 1.0 if p < 1.0 else math.exp(2.0 * p) / (8.0 * p)
    return EPS * (math.exp(2.0 * abs(psi + 0.5 * c * t)) + 4.0) * amplification


def conditioned_subgrid(grid: np.ndarray, limit: float = 1e-11) -> np.ndarray:
    """Rows of an Exp-coordinate grid whose image determines them to about `limit`."""
    keep = [exp_inverse_condition(*row) <= limit for row in grid]
    return grid[np.array(keep, dtype=bool)]


# =============================================================================
# Points
# =============================================================================
def sample_interior_points(rng: np.random.Generator, n: int, **ranges) -> List[Point]:
    """Interior points as images of random Exp coordinates."""
    return [exp_map(lc) for lc in sample_exp_coords(rng, n, **ranges)]


def sample_beak_points(rng: np.random.Generator, n: int, tau_max: float = 3.0) -> List[Point]:
    """Beak points from random edge lengths and a random sheet."""
    taus = rng.uniform(0.0, tau_max, size=(n, 2))
    upper = rng.random(n) < 0.5
    return [beak_point(float(t1), float(t2), "+" if up else "-")
            for (t1, t2), up in zip(taus, upper)]


def sample_causal_points(rng: np.random.Generator, n: int, beak_fraction: float = 0.2) -> List[Point]:
    """Mixture of interior and beak points of J+."""
    n_beak = int(round(beak_fraction * n))
    points = sample_interior_points(rng, n - n_beak) + sample_beak_points(rng, n_beak)
    order = rng.permutation(len(points))
    return [points[k] for k in order]


def sample_box_points(rng: np.random.Generator, n: int, half_width: float = 2.0) -> List[Point]:
    xyz = rng.uniform(-half_width, half_width, size=(n, 3))
    return [Point.from_array(row) for row in xyz]


# =============================================================================
# Sequences approaching the ends of the bound ratio
# =============================================================================
def seam_sequence(x: float, y: float, eps_values: Sequence[float]) -> List[Point]:
    """Points (x, y, eps) approaching the plane z = 0, where d equals its upper bound."""
    return [Point(x, y, float(eps)) for eps in eps_values]


def beak_sequence(tau1: float, tau2: float, eps_values: Sequence[float]) -> List[Point]:
    """Points (x + eps, y, z) approaching the beak point beak_point(tau1, tau2, '+')."""
    base = beak_point(tau1, tau2, "+")
    return [Point(base.x + float(eps), base.y, base.z) for eps in eps_values]
