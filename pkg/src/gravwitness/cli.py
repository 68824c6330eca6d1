"""Command-line entry point: ``gravwitness <command> --config cfg.json ...``.

Exit codes: 0 success, 2 usage/config error, 3 marginal feasibility,
4 infeasible, 5 effect not resolvable.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from dataclasses import asdict, dataclass, replace
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from pathlib import Path

from . import __version__, export
from .entanglement import concurrence, entanglement_entropy, negativity
from .errors import GravWitnessError, ValidationError
from .evolution import phases_at, proper_time, two_particle_amplitudes
from .feasibility import Axis, ScanGrid, check_constraints, scan
from .model import CODATA2018, config_from_mapping, validate
from .observables import simulate_events, survival_curve
from .phase import reduce_mod_2pi
from .power import NotResolvable, required_events

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_MARGINAL = 3
EXIT_INFEASIBLE = 4
EXIT_NOT_RESOLVABLE = 5


class UsageError(Exception):
    pass


@dataclass
class RunManifest:
    config_path: str
    config_sha256: str
    command: str
    argv: list
    outputs: list
    seed: int | None
    tool_version: str = __version__
    constants_version: str = CODATA2018.tag
    wall_clock_s: float = 0.0


def _exact_arg(text: str) -> Fraction:
    try:
        return Fraction(Decimal(text))
    except (InvalidOperation, ValueError) as exc:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from exc


def _seed_arg(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def _load(args):
    raw = Path(args.config).read_bytes()
    try:
        doc = json.loads(raw, parse_float=Decimal, parse_int=Decimal)
    except json.JSONDecodeError as exc:
        raise ValidationError([f"config: invalid JSON ({exc})"]) from exc
    if isinstance(doc, dict):
        for item in args.param or ():
            key, sep, value = item.partition("=")
            if not sep:
                raise UsageError(f"--param expects KEY=VALUE, got {item!r}")
            try:
                doc[key.strip()] = Decimal(value.strip())
            except InvalidOperation:
                raise UsageError(f"--param {key}: not a number: {value!r}") from None
    spec, config = validate(*config_from_mapping(doc))
    constants = replace(CODATA2018, G=0) if args.no_gravity else CODATA2018
    return spec, config, constants, hashlib.sha256(raw).hexdigest()


def _emit(text: str, out) -> list:
    if out is None:
        sys.stdout.write(text)
        return []
    Path(out).write_text(text)
    return [str(out)]


def _grid(lo: Fraction, hi: Fraction, points: int):
    if points < 2:
        raise UsageError("--points must be >= 2")
    step = (hi - lo) / (points - 1)
    return [lo + i * step for i in range(points)]


# --- commands ------------------------------------------------------------------


def cmd_curve(args, spec, config, constants):
    lo = args.L_min if args.L_min is not None else Fraction(0)
    hi = args.L_max if args.L_max is not None else config.L
    rows = survival_curve(spec, config, _grid(lo, hi, args.points), constants)
    return _emit(export.curve_csv(rows), args.out), EXIT_OK


def cmd_entangle(args, spec, config, constants):
    lo = args.tau_min if args.tau_min is not None else Fraction(0)
    hi = args.tau_max if args.tau_max is not None else proper_time(config, constants)
    per_metre = proper_time(replace(config, L=1), constants)
    rows = []
    for tau in _grid(lo, hi, args.points):
        amps = two_particle_amplitudes(spec, config.d, tau, constants)
        phi_e = phases_at(spec, config.d, tau, constants).phi_E
        rows.append(
            (
                tau,
                tau / per_metre,
                concurrence(amps),
                negativity(amps),
                entanglement_entropy(amps),
                reduce_mod_2pi(phi_e),
            )
        )
    return _emit(export.to_csv(export.ENTANGLE_COLUMNS, rows), args.out), EXIT_OK


def _report_text(report) -> str:
    lines = [f"{'constraint':<26} {'lhs':>12} {'rhs':>12} {'margin':>12}  status"]
    for c in report.constraints:
        lines.append(f"{c.name:<26} {c.lhs:>12.4e} {c.rhs:>12.4e} {c.margin:>12.4e}  {c.status}")
    lines.append(f"lambda = {report.lambda_m:.6e} m   tau = {report.tau_s:.6e} s")
    lines.append(
        f"Phi = {report.Phi_rad:.6e} rad   Phi_G = {report.Phi_G_rad:.6e} rad   phi_E = {report.phi_E_rad:.6e} rad"
    )
    lines.append(f"overall: {report.status}")
    lines.extend(f"note: {n}" for n in report.notes)
    return "\n".join(lines) + "\n"


def cmd_check(args, spec, config, constants):
    report = check_constraints(spec, config, constants)
    payload = export.dumps(report.to_dict())
    if args.format == "json" and args.out is None:
        sys.stdout.write(payload)
        outputs = []
    else:
        sys.stdout.write(_report_text(report))
        outputs = _emit(payload, args.out) if args.out else []
    code = {"pass": EXIT_OK, "marginal": EXIT_MARGINAL, "fail": EXIT_INFEASIBLE}[report.status]
    return outputs, code


def cmd_scan(args, spec, config, constants):
    if args.grid:
        grid = ScanGrid.from_mapping(json.loads(Path(args.grid).read_text()))
    elif args.axis:
        grid = ScanGrid(tuple(Axis.parse(a) for a in args.axis))
    else:
        raise UsageError("scan needs --axis or --grid")
    rows = scan(spec, config, grid, constants, workers=args.workers)
    text = export.scan_json(rows) if args.format == "json" else export.scan_csv(rows)
    return _emit(text, args.out), EXIT_OK


def cmd_events(args, spec, config, constants):
    if args.L_start is not None:
        config = replace(config, L=args.L_start)
    samples = simulate_events(
        spec,
        config,
        affected_fraction=args.affected_fraction,
        n_pairs=args.n,
        seed=args.seed,
        n_bins=args.bins,
        bin_width=args.bin_width,
        constants=constants,
        workers=args.workers,
    )
    return _emit(export.events_csv(samples), args.out), EXIT_OK


def cmd_power(args, spec, config, constants):
    result = required_events(
        spec,
        config,
        confidence=args.confidence,
        seed=args.seed,
        affected_fraction=args.affected_fraction,
        trials=args.trials,
        power=args.power,
        L=args.L,
        constants=constants,
    )
    if isinstance(result, NotResolvable):
        sys.stderr.write(f"not resolvable: {result.reason}\n")
        return _emit(export.dumps(result.to_dict()), args.out), EXIT_NOT_RESOLVABLE
    return _emit(export.dumps(result.to_dict()), args.out), EXIT_OK


COMMANDS = {
    "curve": cmd_curve,
    "entangle": cmd_entangle,
    "check": cmd_check,
    "scan": cmd_scan,
    "events": cmd_events,
    "power": cmd_power,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, help="JSON experiment config")
    common.add_argument("--out", help="output file (default: stdout)")
    common.add_argument("--manifest", help="run manifest path (default: OUT.manifest.json)")
    common.add_argument("--seed", type=_seed_arg, default=0)
    common.add_argument("--points", type=int, default=1000)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--param", action="append", metavar="KEY=VALUE", help="override a config value")
    common.add_argument("--no-gravity", action="store_true", help="set G = 0")
    common.add_argument("--workers", type=int, default=1)

    parser = argparse.ArgumentParser(prog="gravwitness", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("curve", parents=[common], help="survival probabilities vs baseline")
    p.add_argument("--L-min", dest="L_min", type=_exact_arg)
    p.add_argument("--L-max", dest="L_max", type=_exact_arg)

    p = sub.add_parser("entangle", parents=[common], help="entanglement measures vs proper time")
    p.add_argument("--tau-min", dest="tau_min", type=_exact_arg)
    p.add_argument("--tau-max", dest="tau_max", type=_exact_arg)

    sub.add_parser("check", parents=[common], help="feasibility constraints")

    p = sub.add_parser("scan", parents=[common], help="feasibility over a parameter grid")
    p.add_argument("--axis", action="append", help="name:min:max:points[:log]")
    p.add_argument("--grid", help="JSON grid file {\"axes\": [...]}")

    p = sub.add_parser("events", parents=[common], help="Monte-Carlo single/double hits")
    p.add_argument("--n", type=int, default=10_000, help="pairs emitted per bin")
    p.add_argument("--bins", type=int, default=100)
    p.add_argument("--bin-width", dest="bin_width", type=_exact_arg)
    p.add_argument("--L-start", dest="L_start", type=_exact_arg)
    p.add_argument("--affected-fraction", dest="affected_fraction", type=float, default=0.5)

    p = sub.add_parser("power", parents=[common], help="pairs needed to resolve the shift")
    p.add_argument("--confidence", type=float, default=0.95)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--power", type=float, default=0.9)
    p.add_argument("--L", dest="L", type=_exact_arg)
    p.add_argument("--affected-fraction", dest="affected_fraction", type=float, default=0.5)
    return parser


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    try:
        spec, config, constants, digest = _load(args)
        outputs, code = COMMANDS[args.command](args, spec, config, constants)
    except ValidationError as exc:
        for v in exc.violations:
            sys.stderr.write(f"config error: {v}\n")
        return EXIT_USAGE
    except (UsageError, GravWitnessError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE

    manifest_path = args.manifest or (f"{args.out}.manifest.json" if args.out else None)
    if manifest_path:
        manifest = RunManifest(
            config_path=str(args.config),
            config_sha256=digest,
            command=args.command,
            argv=argv,
            outputs=outputs,
            seed=args.seed,
            wall_clock_s=time.perf_counter() - start,
        )
        Path(manifest_path).write_text(json.dumps(asdict(manifest), indent=2) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
