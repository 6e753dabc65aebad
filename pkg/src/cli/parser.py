import argparse
from pathlib import Path

from cli.commands import FIT_KINDS, cmd_export_dem, cmd_fit, cmd_run, cmd_sweep
from schemas.terrain import DemChannel


def _float_list(text: str) -> list[float]:
    return [float(item) for item in text.split(",") if item.strip()]


def _run(args: argparse.Namespace) -> int:
    return cmd_run(args.config, args.out_dir, model_path=args.model, relative_from=args.relative_from)


def _fit(args: argparse.Namespace) -> int:
    return cmd_fit(
        args.data_glob, args.kind, args.out,
        r_eff=args.r_eff, f_ref=args.f_ref, base_path=args.base, sections=args.sections,
    )


def _sweep(args: argparse.Namespace) -> int:
    return cmd_sweep(args.config, args.v_list, args.alpha_list, args.out, model_path=args.model)


def _export_dem(args: argparse.Namespace) -> int:
    return cmd_export_dem(args.config, DemChannel(args.channel), args.out, threshold_mm=args.threshold_mm)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="regolith",
        description="Regression-driven wheel slip, sinkage and terrain deformation engine",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    run = commands.add_parser("run", help="Run a scenario and write telemetry")
    run.add_argument("config", type=Path)
    run.add_argument("out_dir", type=Path)
    run.add_argument("--model", type=Path, default=None, help="Model parameter file overriding the config")
    run.add_argument(
        "--relative-from", type=float, default=None, metavar="T0",
        help="Also write wheel-mean sinkage relative to the first record at or after T0",
    )
    run.set_defaults(handler=_run)

    fit = commands.add_parser("fit", help="Fit regression coefficients from run logs")
    fit.add_argument("data_glob")
    fit.add_argument("kind", choices=FIT_KINDS)
    fit.add_argument("out", type=Path)
    fit.add_argument("--r-eff", type=float, default=0.1, help="Effective wheel radius in m")
    fit.add_argument("--f-ref", type=float, default=8.72, help="Reference wheel load in N")
    fit.add_argument("--base", type=Path, default=None, help="Parameter file for the unfitted groups")
    fit.add_argument(
        "--sections", action="store_true",
        help="Read section traverses (alpha,distance,duration,revolutions) instead of run logs",
    )
    fit.set_defaults(handler=_fit)

    sweep = commands.add_parser("sweep", help="Steady-state slip map over speeds and slopes")
    sweep.add_argument("config", type=Path)
    sweep.add_argument("--v-list", type=_float_list, required=True)
    sweep.add_argument("--alpha-list", type=_float_list, required=True)
    sweep.add_argument("--out", type=Path, required=True)
    sweep.add_argument("--model", type=Path, default=None)
    sweep.set_defaults(handler=_sweep)

    export = commands.add_parser("export-dem", help="Run a deforming scenario and export a DEM channel")
    export.add_argument("config", type=Path)
    export.add_argument("--channel", choices=[c.value for c in DemChannel], default=DemChannel.rendered.value)
    export.add_argument("--threshold-mm", type=float, default=None)
    export.add_argument("--out", type=Path, required=True)
    export.set_defaults(handler=_export_dem)

    return parser
