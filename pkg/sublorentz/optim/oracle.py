"""
Independent length oracle.

Trajectories with piecewise-constant controls are integrated exactly
(flow_constant), and the length of such trajectories ending near a target is
maximized directly over the controls. The search knows nothing about the
closed-form distance, so it is used to falsify it: no schedule may beat d(q).
"""

import concurrent.futures
import math
from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Tuple

import numpy as np
from scipy.optimize import minimize
from tqdm.auto import tqdm

from sublorentz.constants import (DEFAULT_SEED, NUM_WORKERS, ORACLE_DEFAULT_ITERS,
                                  ORACLE_DEFAULT_PIECES, ORACLE_DEFAULT_STARTS,
                                  ORACLE_DEFAULT_TOL, ORACLE_PENALTY_WEIGHTS)
from sublorentz.exceptions import (DegenerateTarget, InadmissibleControl, NoFeasibleSchedule,
                                   Unreachable)
from sublorentz.modules.causal import CausalMembership, membership
from sublorentz.modules.distance import distance_gradient
from sublorentz.modules.group_core import ORIGIN, Control, Piece, Point, curve_length
from sublorentz.modules.synthesis import TrajectoryKind, control_at, maximizer
from sublorentz.utils import make_rng

ControlSchedule = List[Piece]


def flow_constant(q: Point, u: Control, dt: float) -> Point:
    """Exact flow of u1 X1 + u2 X2 for time dt starting at q."""
    if not u.is_admissible():
        raise InadmissibleControl(f"control {u} violates u1 >= |u2|")
    if not dt >= 0:
        raise ValueError(f"duration must be nonnegative, got {dt}")
    return Point(q.x + u.u1 * dt,
                 q.y + u.u2 * dt,
                 q.z + (q.x * u.u2 - q.y * u.u1) * dt / 2.0)


def simulate(schedule: Iterable[Piece]) -> Tuple[Point, float]:
    """Endpoint from the identity and length of a piecewise-constant schedule."""
    schedule = list(schedule)
    q = ORIGIN
    for u, dt in schedule:
        q = flow_constant(q, u, dt)
    return q, curve_length(schedule)


@dataclass
class OracleResult:
    length: float
    endpoint: Point
    endpoint_error: float
    # slack = tol * lipschitz; the search may legitimately exceed d(q) by slack
    lipschitz: float
    slack: float
    schedule: ControlSchedule = field(default_factory=list)
    feasible_starts: int = 0
    starts: int = 0


# ======= discretized problem =======
class _UniformProblem:
    """
    N pieces of equal duration x/N with u1 = 1. The endpoint is linear in
    u2: y = dt sum u_k and z = dt^2/2 sum (2k - N + 1) u_k, so the problem of
    maximizing dt sum sqrt(1 - u_k^2) is concave.
    """

    def __init__(self, q: Point, pieces: int):
        self.q = q
        self.n = pieces
        self.dt = q.x / pieces
        k = np.arange(pieces)
        self.A = np.vstack([np.full(pieces, self.dt), (2 * k - pieces + 1) * self.dt ** 2 / 2.0])
        self.b = np.array([q.y, q.z])

    def neg_length(self, u: np.ndarray):
        s = np.sqrt(np.clip(1.0 - u * u, 0.0, None))
        grad = self.dt * u / np.maximum(s, 1e-12)
        return -self.dt * s.sum(), grad

    def project(self, u: np.ndarray) -> np.ndarray:
        """Least-norm correction onto the endpoint constraints, then clip to |u| <= 1."""
        residual = self.b - self.A @ u
        u = u + self.A.T @ np.linalg.solve(self.A @ self.A.T, residual)
        return np.clip(u, -1.0, 1.0)

    def schedule(self, u: np.ndarray) -> ControlSchedule:
        return [(Control(1.0, float(v)), self.dt) for v in np.clip(u, -1.0, 1.0)]

    def solve_slsqp(self, u0: np.ndarray, iters: int) -> np.ndarray:
        res = minimize(self.neg_length, u0, jac=True, method="SLSQP",
                       bounds=[(-1.0, 1.0)] * self.n,
                       constraints=[{"type": "eq", "fun": lambda u: self.A @ u - self.b,
                                     "jac": lambda u: self.A}],
                       options={"maxiter": iters, "ftol": 1e-15})
        return res.x

    def solve_nelder_mead(self, u0: np.ndarray, iters: int) -> np.ndarray:
        phi = np.arctanh(np.clip(u0, -0.999, 0.999))
        for weight in ORACLE_PENALTY_WEIGHTS:
            def objective(p, weight=weight):
                u = np.tanh(p)
                gap = self.A @ u - self.b
                return self.neg_length(u)[0] + weight * float(gap @ gap)
            phi = minimize(objective, phi, method="Nelder-Mead",
                           options={"maxiter": iters * self.n, "xatol": 1e-12, "fatol": 1e-14}).x
        return np.tanh(phi)


class _FreeDurationProblem:
    """Per-piece (u2, dt) with sum dt = x; the endpoint is evaluated by simulate."""

    def __init__(self, q: Point, pieces: int):
        self.q = q
        self.n = pieces

    def schedule(self, v: np.ndarray) -> ControlSchedule:
        u, dt = np.clip(v[:self.n], -1.0, 1.0), np.clip(v[self.n:], 0.0, None)
        return [(Control(1.0, float(a)), float(b)) for a, b in zip(u, dt)]

    def solve(self, u0: np.ndarray, iters: int) -> np.ndarray:
        v0 = np.concatenate([u0, np.full(self.n, self.q.x / self.n)])

        def neg_length(v):
            u, dt = v[:self.n], v[self.n:]
            return -float(dt @ np.sqrt(np.clip(1.0 - u * u, 0.0, None)))

        def endpoint_gap(v):
            end, _ = simulate(self.schedule(v))
            return np.array([end.y - self.q.y, end.z - self.q.z])

        res = minimize(neg_length, v0, method="SLSQP",
                       bounds=[(-1.0, 1.0)] * self.n + [(0.0, self.q.x)] * self.n,
                       constraints=[{"type": "eq", "fun": lambda v: v[self.n:].sum() - self.q.x},
                                    {"type": "eq", "fun": endpoint_gap}],
                       options={"maxiter": iters, "ftol": 1e-15})
        return res.x


# ======= seeds =======
def synthesis_seed(q: Point, pieces: int, samples: int = 2001) -> np.ndarray:
    """u2 of the optimal synthesis at the midpoints of `pieces` equal x-steps."""
    traj = maximizer(q, n=samples)
    mids = (np.arange(pieces) + 0.5) * q.x / pieces
    if traj.kind is TrajectoryKind.TIMELIKE_NORMAL:
        # x increases along the extremal, so s(x) is obtained by interpolation
        s_mid = np.interp(mids, traj.samples[:, 1], traj.samples[:, 0])
        lc = traj.exp_coords
        return np.tanh(lc.psi + lc.c * s_mid)
    return np.array([control_at(traj, float(m)).u2 for m in mids])


def _local_search(q: Point, pieces: int, u0: np.ndarray, iters: int, method: str,
                  free_durations: bool) -> Tuple[ControlSchedule, Point, float, float]:
    if free_durations:
        problem = _FreeDurationProblem(q, pieces)
        schedule = problem.schedule(problem.solve(u0, iters))
    else:
        problem = _UniformProblem(q, pieces)
        if method == "slsqp":
            u = problem.solve_slsqp(u0, iters)
        elif method == "nelder-mead":
            u = problem.solve_nelder_mead(u0, iters)
        else:
            raise ValueError(f"method must be 'slsqp' or 'nelder-mead', got {method!r}")
        schedule = problem.schedule(problem.project(u))
    end, length = simulate(schedule)
    error = float(np.linalg.norm(end.as_array() - q.as_array()))
    return schedule, end, length, error


def brute_force_distance(q: Point, pieces: int = ORACLE_DEFAULT_PIECES,
                         iters: int = ORACLE_DEFAULT_ITERS, tol: float = ORACLE_DEFAULT_TOL,
                         starts: int = ORACLE_DEFAULT_STARTS, seed: int = DEFAULT_SEED,
                         method: str = "slsqp", free_durations: bool = False,
                         workers: int = NUM_WORKERS, progress: bool = False) -> OracleResult:
    """
    Longest schedule found from the identity to within `tol` of q.

    Parameters:
    - q: Point in J+ (Interior or Boundary).
    - pieces: int
        Number of constant-control pieces (u1 = 1).
    - iters: int
        Iteration cap of each local solve.
    - tol: float
        Radius of the endpoint ball a schedule must hit.
    - starts: int
        Multi-start count; the first start is the synthesis control law and
        is also kept as a candidate in its raw form, the rest are random.
        On Boundary targets the exact broken curve of the synthesis is a
        candidate too.
    - method: str
        'slsqp' (default) or 'nelder-mead' (penalty method, derivative free).
    - free_durations: bool
        Optimize piece durations as well as controls.

    Returns:
    - OracleResult with the best feasible length. Starts run concurrently
      and are merged by max with ties going to the lower start index.
    """
    if pieces < 1:
        raise ValueError(f"pieces must be positive, got {pieces}")
    label = membership(q)
    if label is CausalMembership.OUTSIDE:
        raise Unreachable(f"{q} lies outside J+")
    if label is CausalMembership.ORIGIN:
        raise DegenerateTarget("the oracle needs a target other than the identity")

    child_seeds = np.random.SeedSequence(seed).spawn(max(starts - 1, 0))
    seed_law = synthesis_seed(q, pieces)
    initial = [seed_law] + [make_rng(s).uniform(-0.9, 0.9, pieces) for s in child_seeds]

    def run(u0):
        return _local_search(q, pieces, u0, iters, method, free_durations)

    max_threads = max(1, min(workers, len(initial)))
    with concurrent.futures.ThreadPoolExecutor(max_threads) as executor:
        outcomes = list(tqdm(executor.map(run, initial), desc="Oracle starts",
                             total=len(initial), disable=not progress))

    raw_schedule = [(Control(1.0, float(v)), q.x / pieces) for v in np.clip(seed_law, -1.0, 1.0)]
    raw_end, raw_length = simulate(raw_schedule)
    raw_error = float(np.linalg.norm(raw_end.as_array() - q.as_array()))
    outcomes.append((raw_schedule, raw_end, raw_length, raw_error))
    if label is CausalMembership.BOUNDARY:
        # equal x-steps only hit a beak point when the break lands on a node
        exact_schedule = list(maximizer(q).pieces)
        exact_end, exact_length = simulate(exact_schedule)
        exact_error = float(np.linalg.norm(exact_end.as_array() - q.as_array()))
        outcomes.append((exact_schedule, exact_end, exact_length, exact_error))

    feasible = [o for o in outcomes if o[3] <= tol]
    if not feasible:
        best_error = min(o[3] for o in outcomes)
        raise NoFeasibleSchedule(f"no schedule with {pieces} pieces reached {q} within {tol} "
                                 f"(closest miss {best_error:.3e})")
    best = feasible[0]
    for candidate in feasible[1:]:
        if candidate[2] > best[2]:
            best = candidate

    if label is CausalMembership.INTERIOR:
        lipschitz = float(np.linalg.norm(distance_gradient(q)))
    else:
        # d grows like the square root of the distance to the beak
        lipschitz = 1.0 / math.sqrt(tol)
    schedule, end, length, error = best
    return OracleResult(length=length, endpoint=end, endpoint_error=error,
                        lipschitz=lipschitz, slack=tol * lipschitz, schedule=schedule,
                        feasible_starts=len(feasible), starts=len(initial))
