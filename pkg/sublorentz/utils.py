import argparse
import os
import random
import sqlite3
import sys
from enum import Enum

import numpy as np

from sublorentz.constants import CHECKS_DB_PATH, DEFAULT_SEED, VERSION


def seed_everything(seed=DEFAULT_SEED):
    """
    Set random seed for the stdlib and numpy global generators. Code that
    needs reproducible draws should still pass its own np.random.Generator.
    """
    random.seed(seed)
    np.random.seed(seed)


def make_rng(seed=DEFAULT_SEED) -> np.random.Generator:
    return np.random.default_rng(seed)


def convert_to_native(obj):
    """
    Recursively converts NumPy types (and enums) to native Python types.
    """
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    elif isinstance(obj, np.bool_):
        return bool(obj)
    elif isinstance(obj, np.floating):
        return float(obj)
    elif isinstance(obj, np.integer):
        return int(obj)
    elif isinstance(obj, Enum):
        return obj.value
    elif isinstance(obj, dict):
        return {k: convert_to_native(v) for k, v in obj.items()}
    elif isinstance(obj, (list, tuple)):
        return [convert_to_native(v) for v in obj]
    else:
        return obj


def _create_tables(cursor, project_name):
    cursor.execute(f"""
    CREATE TABLE IF NOT EXISTS {project_name}_arguments (
        id INTEGER PRIMARY KEY AUTOINCREMENT,
        timestamp DATETIME DEFAULT CURRENT_TIMESTAMP
    );
    """)
    cursor.execute(f"""
    CREATE TABLE IF NOT EXISTS {project_name}_checks (
        id INTEGER PRIMARY KEY AUTOINCREMENT,
        run_id INTEGER,
        check_group TEXT,
        name TEXT,
        passed INTEGER,
        max_error REAL,
        n INTEGER,
        FOREIGN KEY (run_id) REFERENCES {project_name}_arguments (id)
    );
    """)


def initialize_database(project_name, db_path=CHECKS_DB_PATH, quiet=False):
    """
    Create the '<project_name>_arguments' and '<project_name>_checks' tables.
    Argument columns are added on demand by save_arguments_to_db.
    """
    directory = os.path.dirname(db_path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    conn = sqlite3.connect(db_path)
    _create_tables(conn.cursor(), project_name)
    conn.commit()
    conn.close()
    if not quiet:
        print(f"Database initialized at {db_path}", file=sys.stderr)


def save_arguments_to_db(args, project_name, db_path=CHECKS_DB_PATH, quiet=False):
    """
    Store one run's arguments as a row of '<project_name>_arguments', one
    TEXT column 'arg_<name>' per argument. Returns the new run id.
    """
    args_dict = args if isinstance(args, dict) else vars(args)
    table_name = f"{project_name}_arguments"
    conn = sqlite3.connect(db_path)
    cursor = conn.cursor()
    _create_tables(cursor, project_name)

    known = {row[1] for row in cursor.execute(f"PRAGMA table_info({table_name});")}
    for column in (f"arg_{key}" for key in args_dict):
        if column not in known:
            cursor.execute(f"ALTER TABLE {table_name} ADD COLUMN {column} TEXT")

    columns = ", ".join(f"arg_{key}" for key in args_dict)
    placeholders = ", ".join("?" for _ in args_dict)
    cursor.execute(f"INSERT INTO {table_name} ({columns}) VALUES ({placeholders})",
                   [str(value) for value in args_dict.values()])
    run_id = cursor.lastrowid
    conn.commit()
    conn.close()

    if not quiet:
        print(f"Run {run_id} recorded in {table_name}", file=sys.stderr)
    return run_id


def save_checks_to_db(run_id, results, project_name, db_path=CHECKS_DB_PATH, quiet=False):
    """
    Save check results (objects with group, name, passed, max_error, n) for a run.
    """
    table_name = f"{project_name}_checks"
    conn = sqlite3.connect(db_path)
    cursor = conn.cursor()
    _create_tables(cursor, project_name)

    rows = [(run_id, r.group, r.name, int(r.passed), float(r.max_error), int(r.n)) for r in results]
    cursor.executemany(f"""
    INSERT INTO {table_name} (run_id, check_group, name, passed, max_error, n)
    VALUES (?, ?, ?, ?, ?, ?)
    """, rows)

    conn.commit()
    conn.close()
    if not quiet:
        print(f"{len(rows)} check results saved for run ID: {run_id} in table: {table_name}",
              file=sys.stderr)


class CliArgumentParser(argparse.ArgumentParser):
    """ArgumentParser whose usage errors exit with status 1 (2 is reserved for unreachable targets)."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _pair(kind):
    return dict(nargs=2, type=kind, metavar=("LO", "HI") if kind is float else ("NU", "NV"))


def get_default_cli_args(argv=None):
    """
    Parse command line arguments of the sublorentz tool.

    Params:
        argv: list of str or None. None reads sys.argv.
    """
    parser = CliArgumentParser(prog="sublorentz",
                               description="Sub-Lorentzian distance, synthesis and spheres on the Heisenberg group.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {VERSION}")

    # ======= output settings (shared by every subcommand) =======
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", type=str, default="csv", choices=["csv", "json"], help="Output format of the records.")
    common.add_argument("--out", type=str, default=None, help="Write records to this path instead of stdout.")
    common.add_argument("--verbose", action="store_true", default=False, help="Print the argument banner and summaries to stderr.")
    common.add_argument("--quiet", action="store_true", default=False, help="Disable progress bars.")

    commands = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=CliArgumentParser)
    commands.required = True

    # ======= distance settings =======
    dist = commands.add_parser("dist", parents=[common], help="Distance from the identity and its bounds.")
    for name in ("x", "y", "z"):
        dist.add_argument(name, type=float)
    dist.add_argument("--tol", type=float, default=0.0, help="Boundary band for classifying the point. 0 uses the exact sets.")

    grid = commands.add_parser("dist-grid", parents=[common], help="Distance restricted to a coordinate plane.")
    grid.add_argument("--plane", type=str, default="z=0", help="Plane 'z=c', 'y=c' or 'x=c'.")
    grid.add_argument("--urange", default=(-3.0, 3.0), help="Range of the first free coordinate.", **_pair(float))
    grid.add_argument("--vrange", default=(-3.0, 3.0), help="Range of the second free coordinate.", **_pair(float))
    grid.add_argument("--grid", default=(61, 61), help="Grid size along the two free coordinates.", **_pair(int))
    grid.add_argument("--tol", type=float, default=0.0)

    # ======= exponential map settings =======
    exp = commands.add_parser("exp", parents=[common], help="Endpoint of the normal extremal (psi, c) at time t.")
    for name in ("psi", "c", "t"):
        exp.add_argument(name, type=float)

    invexp = commands.add_parser("invexp", parents=[common], help="Exp coordinates of an interior point.")
    for name in ("x", "y", "z"):
        invexp.add_argument(name, type=float)

    # ======= synthesis settings =======
    maxi = commands.add_parser("maximizer", parents=[common], help="Sampled length maximizer from the identity.")
    for name in ("x", "y", "z"):
        maxi.add_argument(name, type=float)
    maxi.add_argument("--samples", type=int, default=101, help="Number of sampled points, at least 2.")

    # ======= sphere settings =======
    sphere = commands.add_parser("sphere", parents=[common], help="Mesh or plane section of the sphere S(R).")
    sphere.add_argument("--R", dest="R", type=float, default=1.0, help="Radius; 0 gives the beak.")
    sphere.add_argument("--grid", default=(41, 41), help="Mesh nodes along y and z.", **_pair(int))
    sphere.add_argument("--yrange", default=(-2.0, 2.0), **_pair(float))
    sphere.add_argument("--zrange", default=(-2.0, 2.0), **_pair(float))
    sphere.add_argument("--section", type=str, default=None, help="Emit the section by a plane such as 'z=0', 'x=2', 'y=1' or 'y=0.5x' instead of the mesh.")
    sphere.add_argument("--samples", type=int, default=101, help="Samples per section branch.")
    sphere.add_argument("--extent", type=float, default=2.0, help="Sampling reach of unbounded section curves.")
    sphere.add_argument("--quads", action="store_true", default=False, help="Emit the mesh quads instead of the vertices.")
    sphere.add_argument("--strata", action="store_true", default=False, help="Label mesh vertices by their stratum of S(0).")

    # ======= check settings =======
    check = commands.add_parser("check", parents=[common], help="Run the invariant suite.")
    check.add_argument("--level", type=str, default="fast", choices=["fast", "full"])
    check.add_argument("--seed", type=int, default=DEFAULT_SEED)
    check.add_argument("--record", action="store_true", default=False, help="Store the run and its results in the sqlite check database.")
    check.add_argument("--db_path", type=str, default=CHECKS_DB_PATH)

    return parser.parse_args(argv)
