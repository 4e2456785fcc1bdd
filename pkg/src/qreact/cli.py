"""Command-line front end: ``qreact {sweep,geometry,compare,schumacher}``.

Exit status is 0 on success, 1 for usage or configuration errors and 2 for
I/O failures.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import re
import sys
import tempfile
from pathlib import Path

import numpy as np

from . import infogeo
from .baselines import DiscordConfig, comparison_sweep
from .qstate import (
    STATE_FAMILIES,
    InvalidStateError,
    MeasurementSetting,
    joint_distribution,
    load_density_matrix,
    make_state,
)
from .reactivity import (
    IntegratorConfig,
    normalize_curve,
    reactivity_sweep,
    schumacher_quadrilateral,
    search_schumacher,
)

CSV_TAG = "# qreact-csv v1"
JSON_TAG = "qreact-json v1"
SWEEP_COLUMNS = [
    "lambda",
    "reactivity_raw",
    "reactivity_norm",
    "numerator_mean",
    "denominator_mean",
    "stderr",
    "samples",
    "degenerate_flag",
]
COMPARE_COLUMNS = ["lambda", "concurrence", "discord", "reactivity_norm", "reactivity_raw"]

_EXPR = re.compile(r"^[0-9eE.+\-*/() ]*(pi[0-9eE.+\-*/() ]*)*$")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def parse_number(text: str) -> float:
    """A float or a simple expression in ``pi`` such as ``3*pi/4``."""
    text = text.strip()
    if not text or not _EXPR.match(text):
        raise UsageError(f"cannot parse number {text!r}")
    try:
        return float(eval(text, {"__builtins__": {}}, {"pi": np.pi}))
    except Exception as exc:
        raise UsageError(f"cannot parse number {text!r}") from exc


def parse_angles(text: str) -> list:
    """``"t1,p1;t2,p2;..."`` -> ``[(t1, p1), (t2, p2), ...]``."""
    pairs = []
    for chunk in text.split(";"):
        parts = chunk.split(",")
        if len(parts) != 2:
            raise UsageError(f"expected 'theta,phi' but got {chunk!r}")
        pairs.append((parse_number(parts[0]), parse_number(parts[1])))
    return pairs


def _add_integrator_flags(p):
    g = p.add_argument_group("integration")
    g.add_argument("--config", help="JSON integrator config (flags override it)")
    g.add_argument("--method", choices=["grid", "mc", "monte_carlo"])
    g.add_argument("--grid-points", type=int)
    g.add_argument("--mc-samples", type=int)
    g.add_argument("--seed", type=int)
    g.add_argument("--free-first-detector", action="store_true", default=None,
                   help="integrate over the first detector too")


def integrator_from_args(args, base: IntegratorConfig) -> IntegratorConfig:
    """Flags override the config file, which overrides ``base``."""
    doc = base.to_dict()
    if args.config:
        doc.update(IntegratorConfig.from_json(args.config).to_dict())
    flags = {
        "method": args.method,
        "grid_points_per_angle": args.grid_points,
        "mc_samples": args.mc_samples,
        "rng_seed": args.seed,
    }
    doc.update({k: v for k, v in flags.items() if v is not None})
    if args.free_first_detector:
        doc["fix_first_detector"] = False
    return IntegratorConfig.from_dict(doc)


def _lambda_grid(args) -> list:
    if args.steps < 2:
        raise UsageError("--steps must be at least 2")
    if not 0.0 <= args.lambda_start < args.lambda_end <= 1.0:
        raise UsageError("need 0 <= lambda-start < lambda-end <= 1")
    return [float(x) for x in np.linspace(args.lambda_start, args.lambda_end, args.steps)]


def write_atomic(path, text: str) -> None:
    """Write ``text`` to ``path`` via a temporary file; nothing is left behind on failure."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(text: str, output) -> None:
    if output in (None, "-"):
        sys.stdout.write(text)
    else:
        write_atomic(output, text)


def _csv_text(columns, rows) -> str:
    buf = io.StringIO()
    buf.write(CSV_TAG + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([row[c] for c in columns])
    return buf.getvalue()


def _json_text(payload: dict) -> str:
    return json.dumps({"format": JSON_TAG, **payload}, indent=2) + "\n"


def sweep_rows(family: str, lambdas, cfg: IntegratorConfig, normalize: bool) -> list:
    results = reactivity_sweep(family, lambdas, cfg)
    norm = [""] * len(results)
    if normalize:
        try:
            norm = [r for _, r in normalize_curve([(lam, res.reactivity) for lam, res in zip(lambdas, results)])]
        except ValueError as exc:
            if not any(res.degenerate for res in results):
                raise UsageError(f"cannot normalize: {exc}") from exc
            print(f"warning: normalization skipped ({exc})", file=sys.stderr)
    rows = []
    for lam, res, rn in zip(lambdas, results, norm):
        rows.append({
            "lambda": lam,
            "reactivity_raw": res.reactivity,
            "reactivity_norm": rn,
            "numerator_mean": res.mean_numerator,
            "denominator_mean": res.mean_denominator,
            "stderr": res.stderr_estimate,
            "samples": res.samples_used,
            "degenerate_flag": int(res.degenerate),
        })
    return rows


def cmd_sweep(args) -> int:
    if args.family not in STATE_FAMILIES:
        raise UsageError(f"unknown family {args.family!r}")
    d = make_state(args.family, 1.0).dim_qubits
    cfg = integrator_from_args(args, IntegratorConfig.default_for(d))
    lambdas = _lambda_grid(args)
    rows = sweep_rows(args.family, lambdas, cfg, args.normalize)
    if args.format == "csv":
        text = _csv_text(SWEEP_COLUMNS, rows)
    else:
        text = _json_text({"family": args.family, "integrator": cfg.to_dict(), "rows": rows})
    _emit(text, args.output)
    return 0


def _load_state(args):
    if args.state_file:
        return load_density_matrix(args.state_file)
    if args.family is None:
        raise UsageError("give --family or --state-file")
    return make_state(args.family, args.lam)


def cmd_geometry(args) -> int:
    rho = _load_state(args)
    d = rho.dim_qubits
    if args.angles is None:
        angles = [(0.0, 0.0)] * d
    else:
        angles = parse_angles(args.angles)
    if len(angles) != d:
        raise UsageError(f"got {len(angles)} detector settings for a {d}-qubit state")
    p = joint_distribution(rho, MeasurementSetting(angles))
    report = infogeo.geometry_report(infogeo.entropy_table(p))
    payload = {"angles": angles, **report.to_dict()}
    _emit(_json_text(payload), args.output)
    return 0


def cmd_compare(args) -> int:
    if args.lambdas:
        lambdas = sorted({parse_number(x) for x in args.lambdas.split(",")})
    else:
        lambdas = sorted(set(_lambda_grid(args)) | {1.0 / 3.0})
    cfg = integrator_from_args(args, IntegratorConfig(method="grid", grid_points_per_angle=128))
    dcfg = DiscordConfig(coarse_grid=tuple(args.discord_grid), refine_iterations=args.refine)
    rows = comparison_sweep(lambdas, dcfg, cfg)
    table = [
        {
            "lambda": r.lam,
            "concurrence": r.concurrence,
            "discord": r.discord,
            "reactivity_norm": r.reactivity_normalized,
            "reactivity_raw": r.reactivity_raw,
        }
        for r in rows
    ]
    if args.format == "csv":
        text = _csv_text(COMPARE_COLUMNS, table)
    else:
        text = _json_text({"family": "werner2", "integrator": cfg.to_dict(), "rows": table})
    _emit(text, args.output)
    return 0


def cmd_schumacher(args) -> int:
    rho = make_state(args.family, args.lam)
    if rho.dim_qubits != 2:
        raise UsageError("the quadrilateral needs a two-qubit state")
    if args.angles:
        settings = parse_angles(args.angles)
        if len(settings) != 4:
            raise UsageError("give four settings: A1;A2;B1;B2")
        quad = schumacher_quadrilateral(rho, *settings)
    else:
        quad = search_schumacher(rho, points=args.points)
    payload = {
        "family": args.family,
        "settings": {k: [float(x) for x in v] for k, v in quad.settings.items()},
        "edges": quad.edges,
        "violation": quad.violation,
    }
    _emit(_json_text(payload), args.output)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qreact", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("sweep", help="reactivity over a lambda grid")
    p.add_argument("--family", required=True)
    p.add_argument("--lambda-start", type=float, default=0.0)
    p.add_argument("--lambda-end", type=float, default=1.0)
    p.add_argument("--steps", type=int, default=21)
    p.add_argument("--normalize", action="store_true")
    p.add_argument("--output", "-o")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    _add_integrator_flags(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("geometry", help="entropic geometry at one detector setting")
    p.add_argument("--family")
    p.add_argument("--lambda", dest="lam", type=float, default=1.0)
    p.add_argument("--state-file")
    p.add_argument("--angles", help='"theta1,phi1;theta2,phi2;..." (pi allowed)')
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_geometry)

    p = sub.add_parser("compare", help="concurrence, discord and reactivity for werner2")
    p.add_argument("--lambda-start", type=float, default=0.0)
    p.add_argument("--lambda-end", type=float, default=1.0)
    p.add_argument("--steps", type=int, default=21)
    p.add_argument("--lambdas", help="explicit comma-separated list, e.g. 0,1/3,1")
    p.add_argument("--discord-grid", type=int, nargs=2, default=[64, 32], metavar=("NTHETA", "NPHI"))
    p.add_argument("--refine", type=int, default=3)
    p.add_argument("--output", "-o")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    _add_integrator_flags(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("schumacher", help="Schumacher quadrilateral on a two-qubit state")
    p.add_argument("--family", default="singlet")
    p.add_argument("--lambda", dest="lam", type=float, default=1.0)
    p.add_argument("--angles", help='explicit "A1;A2;B1;B2" settings; omit to search')
    p.add_argument("--points", type=int, default=16)
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_schumacher)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, InvalidStateError, ValueError) as exc:
        print(f"qreact: error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"qreact: I/O error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
