"""Command-line front end.

Subcommands: simulate, rotate, sidereal, power, audit, interval. Results go
to stdout (or ``--out``) as JSON; diagnostics go to stderr. Exit status is 0
on success, 2 for bad input or configuration, 1 for failures while running.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import replace
from pathlib import Path

from . import __version__
from .config import (
    SEED_ENV,
    ConfigError,
    build_run_config,
    joint_model_from_dict,
    load_document,
)
from .constants import C_PAPER, speed_of_light
from .collapse import effective_phase, no_signaling_audit
from .ether import solve_arm_length
from .experiment import (
    RunConfig,
    rotation_protocol,
    scan_times,
    sidereal_scan,
    simulate_run,
    tally_to_probabilities,
)
from .spacetime import SpacetimeEvent, classify_interval, interval_squared
from .stats import (
    bootstrap_series,
    fit_series,
    required_heralds,
    two_proportion_test,
    wilson_interval,
)

EXIT_OK, EXIT_RUNTIME, EXIT_CONFIG = 0, 1, 2


def format_float(x: float) -> str:
    if not math.isfinite(x):
        return "null"
    text = format(x, ".17g")
    if not any(ch in text for ch in ".en"):
        text += ".0"
    return text


def dumps(obj, indent: int = 2, _level: int = 0) -> str:
    """JSON text with floats at 17 significant digits and insertion-ordered keys."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return format_float(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [f"{pad}{dumps(v, indent, _level + 1)}" for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    if hasattr(obj, "item"):
        return dumps(obj.item(), indent, _level)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _emit(payload: dict, out: str | None) -> None:
    text = dumps(payload) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _run_overrides(args: argparse.Namespace) -> dict:
    run = {}
    if args.n_heralds is not None:
        run["nHeralds"] = args.n_heralds
    env_seed = os.environ.get(SEED_ENV)
    if env_seed is not None:
        try:
            run["seed"] = int(env_seed)
        except ValueError:
            raise ConfigError(f"{SEED_ENV} must be an integer, got {env_seed!r}") from None
    if args.seed is not None:
        run["seed"] = args.seed
    for attr, key in (
        ("efficiency", "efficiency"),
        ("dark_count_prob", "darkCountProb"),
        ("visibility", "visibility"),
    ):
        value = getattr(args, attr)
        if value is not None:
            run[key] = value
    if args.separate_runs:
        run["separateRuns"] = True
    return run


def _load_run_config(args: argparse.Namespace) -> RunConfig:
    doc = load_document(args.config)
    run = _run_overrides(args)
    if run:
        doc = {**doc, "run": {**doc.get("run", {}), **run}}
    if args.model is not None:
        doc = {**doc, "model": args.model}
    if args.paper_mode:
        doc = {**doc, "constants": {**doc.get("constants", {}), "paperMode": True}}
    return build_run_config(doc)


def _metadata(cfg: RunConfig) -> dict:
    meta = {
        "version": __version__,
        "model": cfg.model.variant.value,
        "seed": cfg.seed,
        "nHeralds": cfg.n_heralds,
        "shards": cfg.shards,
        "paperMode": cfg.paper_mode,
        "speedOfLightMps": cfg.c,
    }
    if cfg.paper_mode:
        v, shift = 3.0e4, math.pi / 6
        meta["wavelengthNote"] = {
            "description": (
                "with c rounded to 3e8 m/s, a 6.25 m arm gives a pi/6 turn shift at 30 km/s "
                "only for 1500 nm photons; 1550 nm photons need a longer arm"
            ),
            "armLengthAt1500nmM": solve_arm_length(1500e-9, v, shift, c=C_PAPER),
            "armLengthAt1550nmM": solve_arm_length(1550e-9, v, shift, c=C_PAPER),
        }
    return meta


def _interval_dict(successes: int, n: int) -> dict:
    est = wilson_interval(successes, n)
    return {"low": est.ci_low, "high": est.ci_high}


def cmd_simulate(args: argparse.Namespace) -> int:
    cfg = _load_run_config(args)
    tally = simulate_run(cfg, threads=args.threads)
    p_a, p_b = tally_to_probabilities(tally)
    payload = {
        "command": "simulate",
        "metadata": _metadata(cfg),
        "phaseRad": float(effective_phase(cfg.model, cfg.interferometer, c=cfg.c)),
        "tally": tally.to_dict(),
        "P_A": p_a,
        "P_B": p_b,
        "wilson95": {
            "P_A": _interval_dict(tally.coinc_a, tally.heralds_a),
            "P_B": _interval_dict(tally.coinc_b, tally.heralds_b),
        },
    }
    _emit(payload, args.out)
    return EXIT_OK


def cmd_rotate(args: argparse.Namespace) -> int:
    cfg = _load_run_config(args)
    result = rotation_protocol(cfg, threads=args.threads)
    test = two_proportion_test(result.tally_before, result.tally_after)
    payload = {
        "command": "rotate",
        "metadata": _metadata(cfg),
        "before": {"P_A": result.before[0], "P_B": result.before[1]},
        "after": {"P_A": result.after[0], "P_B": result.after[1]},
        "deltaP": result.delta_p,
        "z": test.z,
        "pValue": test.p_value,
        "tallyBefore": result.tally_before.to_dict(),
        "tallyAfter": result.tally_after.to_dict(),
    }
    _emit(payload, args.out)
    return EXIT_OK


CSV_COLUMNS = ("t_s", "theta_eff_rad", "v_eff_mps", "P_A", "P_B")


def series_csv(series) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for p in series:
        writer.writerow([format_float(v) for v in (p.t, p.theta_eff, p.v_eff, p.p_a, p.p_b)])
    return buf.getvalue()


def cmd_sidereal(args: argparse.Namespace) -> int:
    cfg = _load_run_config(args)
    duration = args.hours * 3600.0
    try:
        scan_times(duration, args.step_s)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    series = sidereal_scan(cfg, duration, args.step_s, threads=args.threads)
    Path(args.csv).write_text(series_csv(series))
    fit = fit_series(series)
    boot_seed = cfg.seed if args.bootstrap_seed is None else args.bootstrap_seed
    ci = bootstrap_series(series, n_resamples=args.n_bootstrap, seed=boot_seed)
    payload = {
        "command": "sidereal",
        "metadata": _metadata(cfg),
        "durationS": duration,
        "stepS": args.step_s,
        "nPoints": len(series),
        "csv": str(args.csv),
        "fit": {
            "amplitude": fit.amplitude,
            "amplitudeErr": fit.amplitude_err,
            "phaseOffsetRad": fit.phase_offset,
            "periodS": fit.period,
            "chi2": fit.chi2,
            "dof": fit.dof,
        },
        "bootstrap": {
            "confidence": ci.confidence,
            "nResamples": ci.n_resamples,
            "amplitudeLow": ci.low,
            "amplitudeHigh": ci.high,
            "excludesZero": ci.low > 0.0,
        },
    }
    _emit(payload, args.out)
    return EXIT_OK


def cmd_power(args: argparse.Namespace) -> int:
    try:
        n = required_heralds(args.p0, args.p1, args.sigmas, args.power)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    payload = {
        "command": "power",
        "p0": args.p0,
        "p1": args.p1,
        "sigmas": args.sigmas,
        "power": args.power,
        "nRequired": n,
    }
    _emit(payload, args.out)
    return EXIT_OK


def cmd_audit(args: argparse.Namespace) -> int:
    model = joint_model_from_dict(load_document(args.model_file))
    result = no_signaling_audit(model)
    argmax = None
    if result.argmax is not None:
        alpha, alpha_prime, beta = result.argmax
        argmax = {"alice": alpha, "alicePrime": alpha_prime, "bob": beta}
    payload = {
        "command": "audit",
        "observable": model.observable,
        "maxShift": result.max_shift,
        "argmax": argmax,
        "signaling": result.max_shift > 0.0,
    }
    _emit(payload, args.out)
    return EXIT_OK


def cmd_interval(args: argparse.Namespace) -> int:
    c = speed_of_light(args.paper_mode)
    if not (math.isfinite(args.dt_s) and math.isfinite(args.dx_m)):
        raise ConfigError("--dt-s and --dx-m must be finite")
    origin = SpacetimeEvent(0.0)
    event = SpacetimeEvent(args.dt_s, args.dx_m)
    payload = {
        "command": "interval",
        "dtS": args.dt_s,
        "dxM": args.dx_m,
        "speedOfLightMps": c,
        "class": classify_interval(origin, event, c=c).value,
        "intervalSquaredM2": interval_squared(origin, event, c=c),
    }
    _emit(payload, args.out)
    return EXIT_OK


def _add_run_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="experiment config (JSON)")
    p.add_argument("--model", choices=["covariant", "preferred-frame", "ms-detectors"])
    p.add_argument("--n-heralds", type=int)
    p.add_argument("--seed", type=int, help=f"overrides the config seed and ${SEED_ENV}")
    p.add_argument("--efficiency", type=float)
    p.add_argument("--dark-count-prob", type=float)
    p.add_argument("--visibility", type=float)
    p.add_argument("--separate-runs", action="store_true")
    p.add_argument("--threads", type=int, default=1)


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", help="write JSON here instead of stdout")
    p.add_argument("--paper-mode", action="store_true", help="use c = 3e8 m/s")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="collapse-lab",
        description="Simulate and analyse the single-photon rotating-interferometer collapse test.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="one acquisition; tally and rate estimates")
    _add_run_options(p)
    _add_common(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("rotate", help="acquisitions before and after a 90 degree turn")
    _add_run_options(p)
    _add_common(p)
    p.set_defaults(func=cmd_rotate)

    p = sub.add_parser("sidereal", help="scan over sidereal time and fit the modulation")
    _add_run_options(p)
    _add_common(p)
    p.add_argument("--hours", type=float, default=24.0)
    p.add_argument("--step-s", type=float, default=600.0)
    p.add_argument("--csv", required=True, help="path for the time-series CSV")
    p.add_argument("--n-bootstrap", type=int, default=1000)
    p.add_argument("--bootstrap-seed", type=int)
    p.set_defaults(func=cmd_sidereal)

    p = sub.add_parser("power", help="heralds needed to detect a rate change")
    p.add_argument("--p0", type=float, default=0.50)
    p.add_argument("--p1", type=float, default=0.25)
    p.add_argument("--sigmas", type=float, default=5.0)
    p.add_argument("--power", type=float, default=0.99)
    p.add_argument("--out")
    p.set_defaults(func=cmd_power)

    p = sub.add_parser("audit", help="no-signaling audit of a two-party outcome table")
    p.add_argument("--model-file", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("interval", help="classify the separation of two detection events")
    p.add_argument("--dt-s", type=float, required=True)
    p.add_argument("--dx-m", type=float, required=True)
    _add_common(p)
    p.set_defaults(func=cmd_interval)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "threads", 1) < 1:
        parser.error("--threads must be at least 1")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:  # noqa: BLE001 - any other failure is a runtime error
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
