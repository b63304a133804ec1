"""
Command-line surface: distance queries, Exp round trips, maximizer samples,
sphere meshes and sections, and the invariant suite.

Records go to stdout (or --out) as CSV or JSON; diagnostics go to stderr.
Exit codes: 0 success, 1 bad arguments or grid, 2 target outside the domain
of the command, 3 failed invariant check.
"""

import sys
from typing import Any, Dict, List, Optional, Tuple

from sublorentz.checks import print_summary, run_checks
from sublorentz.constants import PROJECT_NAME
from sublorentz.data.export import format_float, render, write_output
from sublorentz.exceptions import (DegenerateTarget, EmptySection, NoFeasibleSchedule,
                                   NotInterior, SubLorentzError, Unreachable)
from sublorentz.modules.causal import membership
from sublorentz.modules.distance import distance, distance_bounds, plane_restriction
from sublorentz.modules.exponential import ExpCoords, exp_inverse, exp_map
from sublorentz.modules.group_core import Point
from sublorentz.modules.spheres import sphere_mesh, sphere_section, zero_sphere_strata
from sublorentz.modules.synthesis import maximizer
from sublorentz.utils import (get_default_cli_args, initialize_database, save_arguments_to_db,
                              save_checks_to_db, seed_everything)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_OUT_OF_DOMAIN = 2
EXIT_CHECK_FAILED = 3

OUT_OF_DOMAIN = (Unreachable, NotInterior, EmptySection, NoFeasibleSchedule, DegenerateTarget)
OUTPUT_SETTINGS = ("command", "format", "out", "verbose", "quiet", "record", "db_path")

# records, CSV columns, extra JSON meta
Output = Tuple[List[Dict[str, Any]], Optional[List[str]], Dict[str, Any]]


def _point(args) -> Point:
    return Point(args.x, args.y, args.z)


def _relative_residual(p: Point, q: Point) -> float:
    return float(((p.as_array() - q.as_array()) ** 2).sum() ** 0.5 / max(1.0, q.norm()))


# ======= commands =======
def cmd_dist(args) -> Output:
    q = _point(args)
    result = distance(q, args.tol)
    lower, upper = distance_bounds(q, args.tol)
    record = {"x": q.x, "y": q.y, "z": q.z, "membership": membership(q, args.tol).value,
              "d": result.value, "lower_bound": lower, "upper_bound": upper,
              "w": result.w, "p": result.p, "reduced_precision": result.reduced_precision}
    return [record], None, {"regime": result.regime.value}


def cmd_dist_grid(args) -> Output:
    frame = plane_restriction(args.plane, tuple(args.urange), tuple(args.vrange),
                              args.grid[0], args.grid[1], args.tol)
    return frame.to_dict("records"), list(frame.columns), {}


def cmd_exp(args) -> Output:
    q = exp_map(ExpCoords(args.psi, args.c, args.t))
    return [{"psi": args.psi, "c": args.c, "t": args.t, "x": q.x, "y": q.y, "z": q.z}], None, {}


def cmd_invexp(args) -> Output:
    q = _point(args)
    lc = exp_inverse(q)
    residual = _relative_residual(exp_map(lc), q)
    return [{"x": q.x, "y": q.y, "z": q.z, "psi": lc.psi, "c": lc.c, "t": lc.t,
             "residual": residual}], None, {}


def cmd_maximizer(args) -> Output:
    traj = maximizer(_point(args), n=args.samples)
    records = [{"kind": traj.kind.value, "t": row[0], "x": row[1], "y": row[2], "z": row[3]}
               for row in traj.samples]
    extra = {"kind": traj.kind.value, "trajectory": traj.parameters(), "length": traj.length}
    return records, ["kind", "t", "x", "y", "z"], extra


def cmd_sphere(args) -> Output:
    if args.section is not None:
        section = sphere_section(args.R, args.section, n=args.samples, extent=args.extent)
        records = [{"branch": b, "x": p[0], "y": p[1], "z": p[2]}
                   for b, p in zip(section.branch, section.points)]
        return records, ["branch", "x", "y", "z"], {"radius": args.R, "section": section.plane.label()}

    if args.strata and args.R != 0.0:
        raise ValueError(f"--strata labels points of S(0), got --R {args.R}")
    ny, nz = args.grid
    mesh = sphere_mesh(args.R, args.yrange, args.zrange, ny, nz)
    extra = {"radius": args.R, "ny": ny, "nz": nz}
    if args.quads:
        records = [{"quad": k, "v0": a, "v1": b, "v2": c, "v3": d}
                   for k, (a, b, c, d) in enumerate(mesh.quads)]
        return records, ["quad", "v0", "v1", "v2", "v3"], extra
    records = []
    for k, vertex in enumerate(mesh.vertices):
        records.append({"index": k, "iy": k % ny, "iz": k // ny,
                        "x": vertex[0], "y": vertex[1], "z": vertex[2]})
    columns = ["index", "iy", "iz", "x", "y", "z"]
    if args.strata:
        for record, label in zip(records, zero_sphere_strata(mesh.vertices)):
            record["stratum"] = label
        columns.append("stratum")
    return records, columns, extra


def cmd_check(args) -> Output:
    seed_everything(args.seed)
    results = run_checks(args.level, args.seed, progress=not args.quiet)
    if args.verbose:
        print_summary(results)
    if args.record:
        initialize_database(PROJECT_NAME, args.db_path, quiet=args.quiet)
        run_id = save_arguments_to_db(args, PROJECT_NAME, args.db_path, quiet=args.quiet)
        save_checks_to_db(run_id, results, PROJECT_NAME, args.db_path, quiet=args.quiet)
    passed = all(r.passed for r in results)
    return [r.as_record() for r in results], None, {"all_passed": passed}


COMMANDS = {
    "dist": cmd_dist,
    "dist-grid": cmd_dist_grid,
    "exp": cmd_exp,
    "invexp": cmd_invexp,
    "maximizer": cmd_maximizer,
    "sphere": cmd_sphere,
    "check": cmd_check,
}


def _parameters(args) -> Dict[str, Any]:
    return {k: v for k, v in vars(args).items() if k not in OUTPUT_SETTINGS}


def _banner(args) -> None:
    print("\n" + "=" * 50, file=sys.stderr)
    print(f"Running sublorentz {args.command} with the following arguments:", file=sys.stderr)
    for arg, value in vars(args).items():
        print(f"{arg}: {value}", file=sys.stderr)
    print("=" * 50 + "\n", file=sys.stderr)


def main(argv=None) -> int:
    args = get_default_cli_args(argv)
    if args.verbose:
        _banner(args)
    try:
        records, columns, extra = COMMANDS[args.command](args)
    except OUT_OF_DOMAIN as exc:
        print(f"sublorentz {args.command}: {exc}", file=sys.stderr)
        return EXIT_OUT_OF_DOMAIN
    except (SubLorentzError, ValueError) as exc:
        print(f"sublorentz {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    text = render(args.command, _parameters(args), records, args.format, columns, extra)
    write_output(text, args.out)

    if args.verbose and args.command in ("dist", "invexp"):
        summary = ", ".join(f"{k}={format_float(v)}" for k, v in records[0].items()
                            if isinstance(v, float))
        print(summary, file=sys.stderr)
    if args.command == "check" and not extra["all_passed"]:
        failed = [r["name"] for r in records if not r["passed"]]
        print(f"sublorentz check: {len(failed)} invariant(s) failed: {', '.join(failed)}",
              file=sys.stderr)
        return EXIT_CHECK_FAILED
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
