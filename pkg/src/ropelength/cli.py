"""Command line: measure, optimize, zoo and experiments.

Exit codes: 0 success; 1 computation error; 2 usage error, missing or
malformed input; 3 initial curve not embedded (optimize).
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from . import zoo as zoo_mod
from .curve import load_curve, save_curve
from .distortion import ScanConfig
from .errors import (
    BadParameters,
    InitialNotEmbedded,
    ParseError,
    ThicknessError,
    UnknownGenerator,
)
from .experiments import (
    ball_probes,
    min_projection_diameter,
    write_ball_csv,
    write_projection_csv,
)
from .optimize import AnnealConfig, anneal, final_report, write_trajectory_csv
from .report import jsonable, label, measure, parse_symbolic

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_USAGE = 2
EXIT_NOT_EMBEDDED = 3

log = logging.getLogger("ropelength")


def _number(text):
    try:
        return parse_symbolic(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def _common(p: argparse.ArgumentParser):
    p.add_argument("--out", help="output file (measure, zoo) or directory (optimize, experiments)")
    p.add_argument("--samples", type=int, default=256, help="coarse samples per component (0: vertices only)")
    p.add_argument("--refine", type=int, default=60, help="golden-section refinement iterations")
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ropelength", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    m = sub.add_parser("measure", help="thickness report for a curve file")
    m.add_argument("curve")
    m.add_argument("--b", type=_number, nargs="+", default=None, help="distortion parameters (pi/3, pi/2 accepted)")
    m.add_argument("--k", type=_number, nargs="+", default=None, help="curvature thickness parameters")
    m.add_argument("--skip", type=int, default=1, help="edge clearance skip m")
    _common(m)

    o = sub.add_parser("optimize", help="anneal a curve toward lower ropelength")
    o.add_argument("curve")
    o.add_argument("--b", type=_number, default=AnnealConfig.b)
    o.add_argument("--k", type=_number, nargs="+", default=None)
    o.add_argument("--steps", type=int, default=AnnealConfig.steps)
    o.add_argument("--temperature", type=float, default=AnnealConfig.initial_temperature)
    o.add_argument("--cooling", type=float, default=AnnealConfig.cooling_rate)
    o.add_argument("--max-step", type=float, default=AnnealConfig.max_step)
    o.add_argument("--guard", type=float, default=AnnealConfig.guard_fraction)
    o.add_argument("--rescale-every", type=int, default=AnnealConfig.rescale_every)
    _common(o)

    z = sub.add_parser("zoo", help="write a test curve file")
    z.add_argument("name", help=", ".join(zoo_mod.GENERATORS))
    z.add_argument("--param", action="append", default=[], metavar="KEY=VALUE")
    z.add_argument("--n", type=int, default=None, help="vertices per component")
    z.add_argument("--expected", action="store_true", help="print known analytic values instead")
    _common(z)

    e = sub.add_parser("experiments", help="projection and ball-thickness probes")
    e.add_argument("curve")
    e.add_argument("--project", action="store_true")
    e.add_argument("--dirs", type=int, default=256)
    e.add_argument("--tb", action="store_true")
    _common(e)
    return parser


def _scan_config(args) -> ScanConfig:
    return ScanConfig(
        coarse_samples_per_component=args.samples,
        refine_iterations=args.refine,
        threads=max(1, args.threads),
    )


def _emit(data, out):
    text = json.dumps(jsonable(data), indent=2, sort_keys=True) + "\n"
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _outdir(args) -> Path:
    d = Path(args.out or ".")
    d.mkdir(parents=True, exist_ok=True)
    return d


def run_measure(args) -> int:
    curve = load_curve(args.curve)
    b_list = args.b or [parse_symbolic("pi/3")]
    k_list = args.k or [1.0]
    report = measure(curve, b_list, k_list, _scan_config(args), args.skip, {"seed": args.seed, "source": str(args.curve)})
    _emit(report, args.out)
    return EXIT_OK


def run_optimize(args) -> int:
    curve = load_curve(args.curve)
    cfg = AnnealConfig(
        b=args.b,
        steps=args.steps,
        initial_temperature=args.temperature,
        cooling_rate=args.cooling,
        max_step=args.max_step,
        guard_fraction=args.guard,
        seed=args.seed,
        rescale_every=args.rescale_every,
        final_config=_scan_config(args),
    )
    state, traj = anneal(curve, cfg)
    out = _outdir(args)
    write_trajectory_csv(out / "trajectory.csv", traj)
    save_curve(state.curve, out / "final_curve.json")
    save_curve(state.best_seen.curve, out / "best_curve.json")
    report = final_report(state, args.k or [1.0], [cfg.b], _scan_config(args))
    report.config.update(
        {
            "seed": cfg.seed,
            "steps": cfg.steps,
            "initial_temperature": cfg.initial_temperature,
            "cooling_rate": cfg.cooling_rate,
            "max_step": cfg.max_step,
            "guard_fraction": cfg.guard_fraction,
            "rescale_every": cfg.rescale_every,
            "final_objective": state.objective,
            "best_objective": state.best_seen.objective,
            "best_full_objective": state.best_full_objective,
        }
    )
    _emit(report, out / "final_report.json")
    return EXIT_OK


def _zoo_spec(args) -> zoo_mod.ZooSpec:
    params = {}
    for item in args.param:
        key, sep, value = item.partition("=")
        if not sep:
            raise BadParameters(f"--param expects KEY=VALUE, got {item!r}")
        params[key] = parse_symbolic(value)
    if args.n is None:
        return zoo_mod.ZooSpec(args.name, params)
    return zoo_mod.ZooSpec(args.name, params, args.n)


def run_zoo(args) -> int:
    spec = _zoo_spec(args)
    if args.expected:
        vals = zoo_mod.expected_values(spec)
        _emit({k: ({label(x): y for x, y in v.items()} if isinstance(v, dict) else v) for k, v in vals.items()}, args.out)
        return EXIT_OK
    curve = zoo_mod.make(spec)
    if args.out:
        save_curve(curve, args.out)
    else:
        sys.stdout.write(json.dumps(curve.to_dict()) + "\n")
    return EXIT_OK


def run_experiments(args) -> int:
    curve = load_curve(args.curve)
    if not (args.project or args.tb):
        raise BadParameters("choose at least one probe: --project and/or --tb")
    result = {"name": curve.name, "length": curve.total_length}
    out = Path(args.out) if args.out else None
    if out:
        out.mkdir(parents=True, exist_ok=True)
    if args.project:
        pr = min_projection_diameter(curve, args.dirs)
        result["projection"] = {
            "best_direction": pr.best_direction,
            "min_diameter": pr.min_diameter,
            "ratio": pr.ratio,
            "n_directions": args.dirs,
        }
        if out:
            write_projection_csv(out / "projection.csv", pr)
    if args.tb:
        probes = ball_probes(curve)
        best = min(probes, key=lambda p: (p.diameter, tuple(p.center))) if probes else None
        value = float("inf") if best is None else best.diameter
        result["tB_upper_bound"] = {
            "estimate": value,
            "center": None if best is None else best.center,
            "components": None if best is None else best.component_count,
            "source": None if best is None else best.source,
            "probes": len(probes),
        }
        if out:
            write_ball_csv(out / "ball_probes.csv", probes)
    _emit(result, out / "experiments.json" if out else None)
    return EXIT_OK


COMMANDS = {
    "measure": run_measure,
    "optimize": run_optimize,
    "zoo": run_zoo,
    "experiments": run_experiments,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return COMMANDS[args.command](args)
    except FileNotFoundError as exc:
        print(f"error: no such file: {exc.filename}", file=sys.stderr)
        return EXIT_USAGE
    except (ParseError, UnknownGenerator, BadParameters) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InitialNotEmbedded as exc:
        print(f"error: initial curve is not embedded: {exc}", file=sys.stderr)
        return EXIT_NOT_EMBEDDED
    except ThicknessError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR


def entry() -> None:
    sys.exit(main())
