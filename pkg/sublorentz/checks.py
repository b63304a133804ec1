"""
Invariant suite.

Every check draws its own points from a child of the run seed, measures the
worst violation of one invariant and compares it with a fixed tolerance.
`fast` runs small samples of every group; `full` runs acceptance-size
samples and adds the brute-force oracle comparisons.
"""

import math
import sys
import warnings
from dataclasses import dataclass
from typing import Callable, Dict, List, Tuple

import numpy as np
from tqdm.auto import tqdm

from sublorentz.constants import DEFAULT_SEED
from sublorentz.data.generators import (beak_sequence, conditioned_subgrid, exp_coords_grid,
                                        sample_beak_points, sample_box_points,
                                        sample_causal_points, sample_exp_coords,
                                        sample_interior_points, seam_sequence)
from sublorentz.exceptions import NoFeasibleSchedule
from sublorentz.modules.causal import CausalMembership, default_tolerance, membership
from sublorentz.modules.distance import bound_ratios, distance, distance_bounds
from sublorentz.modules.exponential import (ExpCoords, alpha, beta, exp_inverse, exp_map,
                                            integrate_extremal)
from sublorentz.modules.group_core import Control, Point, inverse, lie_bracket, product
from sublorentz.modules.spheres import (ball_volume_trend, beak_sweep, f_excess, f_profile,
                                        sphere_mesh, tangent_plane_residual)
from sublorentz.modules.symmetry import SymmetryElement, apply, apply_exp_coords, compose
from sublorentz.modules.synthesis import ExtremalClass, classify_extremal, dynamics_residual, maximizer
from sublorentz.optim.oracle import brute_force_distance, simulate
from sublorentz.utils import make_rng

LEVELS = ("fast", "full")


@dataclass
class CheckResult:
    group: str
    name: str
    passed: bool
    max_error: float
    tolerance: float
    n: int

    def as_record(self) -> dict:
        return {"group": self.group, "name": self.name, "passed": self.passed,
                "max_error": self.max_error, "tolerance": self.tolerance, "n": self.n}


@dataclass(frozen=True)
class Check:
    group: str
    name: str
    tolerance: float
    run: Callable[[np.random.Generator, str], Tuple[float, int]]
    levels: Tuple[str, ...] = LEVELS


def _size(level: str, fast: int, full: int) -> int:
    return fast if level == "fast" else full


def _mixed(a: float, b: float) -> float:
    """|a - b| relative to max(1, |b|)."""
    return abs(a - b) / max(1.0, abs(b))


def _point_error(p, q) -> float:
    return float(np.linalg.norm(p.as_array() - q.as_array()) / max(1.0, q.norm()))


# Narrow Exp-coordinate ranges keep rotated and integrated points well conditioned.
_NARROW = dict(psi_range=(-0.5, 0.5), c_range=(-1.0, 1.0), t_range=(0.5, 2.0))


# ======= group_core =======
def _associativity(rng, level):
    pts = sample_box_points(rng, 3 * _size(level, 100, 1000))
    worst = 0.0
    for a, b, c in zip(pts[0::3], pts[1::3], pts[2::3]):
        worst = max(worst, _point_error(product(product(a, b), c), product(a, product(b, c))))
    return worst, len(pts) // 3


def _inverse(rng, level):
    pts = sample_box_points(rng, _size(level, 100, 1000))
    return max(product(a, inverse(a)).norm() for a in pts), len(pts)


def _bracket(rng, level):
    pts = sample_box_points(rng, _size(level, 10, 100))
    target = np.array([0.0, 0.0, 1.0])
    return max(float(np.abs(lie_bracket(1, 2, q) - target).max()) for q in pts), len(pts)


def _lightlike_schedule(rng, level):
    end, length = simulate([(Control(1.0, -1.0), 1.0), (Control(1.0, 1.0), 1.0)])
    return max(abs(length), _point_error(end, Point(2.0, 0.0, 1.0))), 1


# ======= causal =======
def _beak_membership(rng, level):
    pts = sample_beak_points(rng, _size(level, 200, 1000))
    misses = sum(membership(q) is not CausalMembership.BOUNDARY for q in pts)
    return float(misses), len(pts)


def _interior_membership(rng, level):
    pts = sample_interior_points(rng, _size(level, 200, 1000))
    misses = sum(membership(q, 0.0) is not CausalMembership.INTERIOR for q in pts)
    return float(misses), len(pts)


# ======= exponential =======
def _coordinate_round_trip(rng, level):
    grid = conditioned_subgrid(exp_coords_grid(*(_size(level, 9, 41),) * 2, _size(level, 8, 40)))
    worst = 0.0
    for psi, c, t in grid:
        back = exp_inverse(exp_map(ExpCoords(psi, c, t)))
        worst = max(worst, _mixed(back.psi, psi), _mixed(back.c, c), _mixed(back.t, t))
    return worst, len(grid)


def _point_round_trip(rng, level):
    grid = exp_coords_grid(_size(level, 9, 41), _size(level, 9, 31), _size(level, 8, 30))
    worst, n = 0.0, 0
    for row in grid:
        q = exp_map(ExpCoords(*row))
        # far out on the grid the float image can round onto the beak
        if membership(q, 0.0) is not CausalMembership.INTERIOR:
            continue
        worst = max(worst, _point_error(exp_map(exp_inverse(q)), q))
        n += 1
    return worst, n


def _beta_alpha(rng, level):
    ps = np.linspace(-6.0, 6.0, _size(level, 121, 1201))
    return max(abs(beta(alpha(float(p))) - p) for p in ps), len(ps)


def _hamiltonian_endpoint(rng, level):
    coords = sample_exp_coords(rng, _size(level, 10, 100), psi_range=(-0.5, 0.5),
                               c_range=(-0.5, 0.5), t_range=(0.2, 2.0))
    worst = 0.0
    for lc in coords:
        worst = max(worst, _point_error(integrate_extremal(lc).endpoint, exp_map(lc)))
    return worst, len(coords)


def _hamiltonian_drift(rng, level):
    coords = sample_exp_coords(rng, _size(level, 10, 100), psi_range=(-0.5, 0.5),
                               c_range=(-0.5, 0.5), t_range=(0.2, 2.0))
    return max(integrate_extremal(lc).max_drift for lc in coords), len(coords)


# ======= distance =======
def _distance_identity(rng, level):
    grid = conditioned_subgrid(exp_coords_grid(*(_size(level, 9, 41),) * 2, _size(level, 8, 40)))
    worst = max(abs(distance(exp_map(ExpCoords(*row))).value - row[2]) / row[2] for row in grid)
    return worst, len(grid)


def _two_sided_bound(rng, level):
    pts = sample_causal_points(rng, _size(level, 500, 10000))
    worst = 0.0
    for q in pts:
        tol = default_tolerance(q)
        d = distance(q, tol).value
        lower, upper = distance_bounds(q, tol)
        worst = max(worst, lower - d - math.sqrt(tol), d - upper * (1.0 + 1e-12))
    return max(worst, 0.0), len(pts)


def _seam_ratio(rng, level):
    pts = seam_sequence(2.0, 0.5, [1e-2, 1e-4, 1e-6])
    lower_ratio, upper_ratio = bound_ratios(pts[-1])
    return max(1.0 - lower_ratio, 1.0 - upper_ratio), len(pts)


def _beak_ratio(rng, level):
    pts = beak_sequence(1.0, 1.0, [1e-2, 1e-4, 1e-6, 1e-8])
    return bound_ratios(pts[-1])[1], len(pts)


# ======= symmetry =======
def _invariance(kind):
    def run(rng, level):
        pts = sample_interior_points(rng, _size(level, 100, 1000), **_NARROW)
        s_values = rng.uniform(-3.0, 3.0, len(pts))
        worst = 0.0
        for q, s in zip(pts, s_values):
            if kind == "rotation":
                g, factor = SymmetryElement.rotation(float(s)), 1.0
            elif kind == "dilation":
                g, factor = SymmetryElement.dilation(float(s)), math.exp(s)
            else:
                g, factor = compose(SymmetryElement.reflection1(), SymmetryElement.reflection2()), 1.0
            d = distance(q).value
            worst = max(worst, abs(distance(apply(g, q)).value - factor * d) / (factor * d))
        return worst, len(pts)
    return run


def _equivariance(rng, level):
    coords = sample_exp_coords(rng, _size(level, 100, 1000), **_NARROW)
    s_values = rng.uniform(-3.0, 3.0, (len(coords), 2))
    worst = 0.0
    for lc, (r, s) in zip(coords, s_values):
        g = compose(SymmetryElement.dilation(float(s)), SymmetryElement.reflection1(),
                    SymmetryElement.rotation(float(r)), SymmetryElement.reflection2())
        worst = max(worst, _point_error(exp_map(apply_exp_coords(g, lc)), apply(g, exp_map(lc))))
    return worst, len(coords)


# ======= synthesis =======
def _beak_maximizer(rng, level):
    pts = sample_beak_points(rng, _size(level, 200, 1000))
    worst = 0.0
    for q in pts:
        traj = maximizer(q, n=3)
        worst = max(worst, _point_error(traj.endpoint, q), abs(traj.length))
    return worst, len(pts)


def _timelike_maximizer(rng, level):
    pts = sample_interior_points(rng, _size(level, 20, 200))
    worst = 0.0
    for q in pts:
        traj = maximizer(q, n=51)
        if classify_extremal(traj) is not ExtremalClass.STRICTLY_NORMAL:
            return math.inf, len(pts)
        worst = max(worst, _point_error(traj.endpoint, q))
    return worst, len(pts)


def _cone(rng, level):
    pts = sample_causal_points(rng, _size(level, 50, 500))
    worst = -math.inf
    for q in pts:
        worst = max(worst, dynamics_residual(maximizer(q, n=21))["cone"])
    return max(worst, 0.0), len(pts)


# ======= spheres =======
def _profile_bounds(rng, level):
    n = _size(level, 200, 1000)
    zs = np.sign(rng.uniform(-1.0, 1.0, n)) * 10.0 ** rng.uniform(-6.0, 2.0, n)
    worst = 0.0
    for z in zs:
        excess = f_profile(float(z)) - 4.0 * abs(z)
        stable = f_excess(float(z))
        if not (0.0 < excess < 1.0 and 0.0 < stable < 1.0):
            worst = max(worst, 1.0)
    return worst + abs(f_profile(0.0) - 1.0), n + 1


def _profile_quartic(rng, level):
    zs = np.linspace(0.01, 0.1, _size(level, 10, 100))
    fitted = max(abs(f_profile(float(z)) - 1.0 - 12.0 * z * z) / z ** 4 for z in zs)
    return fitted, len(zs)


def _excess_decay(rng, level):
    values = [f_excess(z) for z in (10.0, 100.0, 1000.0)]
    ok = values[0] > values[1] > values[2] > 0.0
    return 0.0 if ok else 1.0, len(values)


def _unit_sphere_distance(rng, level):
    n = _size(level, 11, 41)
    mesh = sphere_mesh(1.0, (-2.0, 2.0), (-2.0, 2.0), n, n)
    worst = max(abs(distance(p).value - 1.0) for p in map(Point.from_array, mesh.vertices))
    return worst, len(mesh.vertices)


def _zero_sphere_algebra(rng, level):
    n = _size(level, 21, 101)
    mesh = sphere_mesh(0.0, (-3.0, 3.0), (-3.0, 3.0), n, n)
    x, y, z = mesh.vertices.T
    residual = np.abs(16.0 * z * z - (x * x - y * y) ** 2) / (1.0 + x ** 4)
    return float(residual.max()) / 1e-10, len(x)


def _beak_sweep(rng, level):
    grid = np.linspace(-1.0, 1.0, _size(level, 5, 21))
    pts = np.vstack([beak_sweep(True, grid, grid), beak_sweep(False, grid, grid)])
    misses = sum(membership(Point.from_array(p)) is not CausalMembership.BOUNDARY for p in pts)
    return float(misses), len(pts)


def _tangent_plane(rng, level):
    coords = sample_exp_coords(rng, _size(level, 10, 100), **_NARROW)
    return max(tangent_plane_residual(lc.psi, lc.c) for lc in coords), len(coords)


def _ball_volume(rng, level):
    volumes = ball_volume_trend((2.0, 4.0, 8.0), n=_size(level, 101, 201))
    ok = volumes[0] < volumes[1] < volumes[2]
    return 0.0 if ok else 1.0, len(volumes)


# ======= oracle =======
def _oracle(rng, level):
    targets = sample_interior_points(rng, 50, psi_range=(-0.5, 0.5),
                                     c_range=(-1.5, 1.5), t_range=(0.5, 2.0))
    seeds = rng.integers(0, 2 ** 31, len(targets))
    worst = 0.0
    for q, seed in zip(targets, seeds):
        d = distance(q).value
        try:
            result = brute_force_distance(q, pieces=32, starts=6, seed=int(seed))
        except NoFeasibleSchedule:
            return math.inf, len(targets)
        excess = result.length - (d + 1e-6 + result.slack)
        shortfall = (0.98 * d - result.length) / d
        worst = max(worst, excess, shortfall)
    # 0 means every target stayed within [0.98 d, d + 1e-6 + slack]
    return max(worst, 0.0), len(targets)


CHECKS: List[Check] = [
    Check("group_core", "associativity", 1e-12, _associativity),
    Check("group_core", "inverse", 1e-15, _inverse),
    Check("group_core", "lie_bracket", 1e-8, _bracket),
    Check("group_core", "lightlike_schedule", 1e-15, _lightlike_schedule),
    Check("causal", "beak_points_on_boundary", 0.0, _beak_membership),
    Check("causal", "exp_images_interior", 0.0, _interior_membership),
    Check("exponential", "coordinate_round_trip", 1e-9, _coordinate_round_trip),
    Check("exponential", "point_round_trip", 1e-9, _point_round_trip),
    Check("exponential", "beta_inverts_alpha", 1e-11, _beta_alpha),
    Check("exponential", "hamiltonian_endpoint", 1e-8, _hamiltonian_endpoint),
    Check("exponential", "hamiltonian_drift", 1e-9, _hamiltonian_drift),
    Check("distance", "distance_of_exp", 1e-9, _distance_identity),
    Check("distance", "two_sided_bound", 0.0, _two_sided_bound),
    Check("distance", "ratio_near_seam", 0.01, _seam_ratio),
    Check("distance", "ratio_near_beak", 0.01, _beak_ratio),
    Check("symmetry", "rotation_invariance", 1e-10, _invariance("rotation")),
    Check("symmetry", "reflection_invariance", 1e-10, _invariance("reflection")),
    Check("symmetry", "dilation_scaling", 1e-10, _invariance("dilation")),
    Check("symmetry", "exp_equivariance", 1e-10, _equivariance),
    Check("synthesis", "beak_maximizer", 1e-9, _beak_maximizer),
    Check("synthesis", "timelike_maximizer", 1e-9, _timelike_maximizer),
    Check("synthesis", "nonspacelike_velocity", 1e-12, _cone),
    Check("spheres", "profile_bounds", 1e-12, _profile_bounds),
    Check("spheres", "profile_quartic_constant", 1e4, _profile_quartic),
    Check("spheres", "excess_decay", 0.0, _excess_decay),
    Check("spheres", "unit_sphere_distance", 1e-9, _unit_sphere_distance),
    Check("spheres", "zero_sphere_algebra", 1.0, _zero_sphere_algebra),
    Check("spheres", "beak_sweep_on_boundary", 0.0, _beak_sweep),
    Check("spheres", "tangent_plane", 1e-6, _tangent_plane),
    Check("spheres", "ball_volume_growth", 0.0, _ball_volume),
    Check("oracle", "brute_force_below_distance", 0.0, _oracle, levels=("full",)),
]


def run_checks(level: str = "fast", seed: int = DEFAULT_SEED, progress: bool = False) -> List[CheckResult]:
    """
    Run every check of `level`. Each check gets its own child seed, so
    results do not depend on which other checks run.
    """
    if level not in LEVELS:
        raise ValueError(f"level must be one of {LEVELS}, got {level!r}")
    children = np.random.SeedSequence(seed).spawn(len(CHECKS))
    results = []
    selected = [(check, child) for check, child in zip(CHECKS, children) if level in check.levels]
    for check, child in tqdm(selected, desc=f"Checks ({level})", file=sys.stderr, disable=not progress):
        with warnings.catch_warnings():
            # reduced-precision warnings are part of what the checks measure
            warnings.simplefilter("ignore", RuntimeWarning)
            max_error, n = check.run(make_rng(child), level)
        results.append(CheckResult(group=check.group, name=check.name,
                                   passed=bool(max_error <= check.tolerance),
                                   max_error=float(max_error), tolerance=check.tolerance, n=int(n)))
    return results


def summarize(results: List[CheckResult]) -> Dict[str, Tuple[int, int]]:
    """(passed, total) per group, in first-seen order."""
    summary: Dict[str, Tuple[int, int]] = {}
    for r in results:
        passed, total = summary.get(r.group, (0, 0))
        summary[r.group] = (passed + int(r.passed), total + 1)
    return summary


def print_summary(results: List[CheckResult], stream=sys.stderr) -> None:
    print("=" * 60, file=stream)
    print("  INVARIANT CHECKS", file=stream)
    print("=" * 60, file=stream)
    for group, (passed, total) in summarize(results).items():
        tag = "PASS" if passed == total else "FAIL"
        print(f"[{tag}] {group:<12} {passed}/{total}", file=stream)
        for r in results:
            if r.group == group and not r.passed:
                print(f"       {r.name}: max_error {r.max_error:.3e} > {r.tolerance:.1e}", file=stream)
    print("=" * 60, file=stream)
