"""Command-line front end.

Subcommands:
    run        one trial; prints evacuation time and outcome
    sweep      batches across a door-delay range; CSV and optional SVG chart
    calibrate  zero-delay batch checked against the calibration band
    layout     emit a built-in layout as text

Every output file embeds a manifest (the exact inputs needed to reproduce
it): CSV as '#'-prefixed header comments, JSONL traces inside the first
line, SVG inside a metadata element. Identical invocations produce
byte-identical outputs.
"""

import argparse
import json
import sys

from . import __version__
from .chart import render_chart_svg
from .engine import COMPLETED, SimConfig, run_trial
from .experiment import run_batch, summarize, sweep, threshold_crossing
from .field import build_field
from .layout import (DEFAULT_BLOCKED, ExitSelection, LayoutError,
                     generate_a380_upper_deck, parse_layout, serialize_layout)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_LAYOUT = 3
EXIT_IO = 4

BUILTINS = ("a380-upper",)


def _add_common(p, trials_default=None):
    src = p.add_mutually_exclusive_group()
    src.add_argument("--layout", metavar="FILE", help="layout text file")
    src.add_argument("--builtin", choices=BUILTINS, default="a380-upper",
                     help="built-in layout (default: a380-upper)")
    p.add_argument("--blocked", default="port-front,port-rear,stbd-mid",
                   help="comma-separated exits to block on the built-in layout "
                        "(default: port-front,port-rear,stbd-mid; pass '' for none)")
    p.add_argument("--seed", type=int, default=42, help="base seed (default 42)")
    p.add_argument("--mean-door-delay", type=float, default=0.0, dest="mean_door_delay",
                   help="mean door delay D in seconds (default 0)")
    if trials_default is not None:
        p.add_argument("--trials", type=int, default=trials_default,
                       help=f"trials per batch (default {trials_default})")
    p.add_argument("--jobs", type=int, default=1, help="worker processes (default 1)")
    p.add_argument("--max-time", type=float, default=600.0, dest="max_time",
                   help="simulated-time cap per trial in seconds (default 600)")
    p.add_argument("--accel", type=float, default=SimConfig.acceleration,
                   help="acceleration in m/s per tick")
    p.add_argument("--decel", type=float, default=SimConfig.deceleration,
                   help="deceleration in m/s per tick")
    p.add_argument("--speed-lambda", type=float, default=SimConfig.speed_lambda,
                   dest="speed_lambda", help="Poisson mean of the max-speed count")
    p.add_argument("--out", metavar="FILE", help="write primary output here instead of stdout")


def build_parser():
    ap = argparse.ArgumentParser(
        prog="evacsim",
        description="Agent-based aircraft cabin evacuation simulator.")
    ap.add_argument("--version", action="version", version=f"evacsim {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a single trial")
    _add_common(p_run)
    p_run.add_argument("--trace", metavar="FILE", help="write a JSONL per-tick trace")

    p_sweep = sub.add_parser("sweep", help="door-delay sweep, one batch per value")
    _add_common(p_sweep, trials_default=100)
    p_sweep.add_argument("--d-from", type=float, default=0.1, dest="d_from")
    p_sweep.add_argument("--d-to", type=float, default=1.5, dest="d_to")
    p_sweep.add_argument("--d-step", type=float, default=0.1, dest="d_step")
    p_sweep.add_argument("--chart", metavar="FILE", help="also write an SVG chart")
    p_sweep.add_argument("--threshold", type=float, default=90.0,
                         help="reference line for the chart (default 90)")

    p_cal = sub.add_parser("calibrate", help="zero-delay calibration batch")
    _add_common(p_cal, trials_default=100)
    p_cal.add_argument("--band", default="54,64", metavar="LO,HI",
                       help="acceptance band for the mean in seconds (default 54,64)")

    p_lay = sub.add_parser("layout", help="emit a built-in layout as text")
    _add_common(p_lay)
    return ap


def _load_layout(args):
    if args.layout:
        try:
            with open(args.layout, "r", encoding="utf-8") as fh:
                text = fh.read()
            return parse_layout(text), f"file:{args.layout}"
        except OSError as e:
            print(f"evacsim: cannot read layout: {e}", file=sys.stderr)
            raise SystemExit(EXIT_LAYOUT)
        except LayoutError as e:
            print(f"evacsim: invalid layout: {e}", file=sys.stderr)
            raise SystemExit(EXIT_LAYOUT)
    blocked = frozenset(n for n in args.blocked.split(",") if n)
    try:
        return (generate_a380_upper_deck(ExitSelection(blocked)),
                f"builtin:{args.builtin}")
    except LayoutError as e:
        print(f"evacsim: invalid exit blocking: {e}", file=sys.stderr)
        raise SystemExit(EXIT_LAYOUT)


def _config(args):
    return SimConfig(
        mean_door_delay=args.mean_door_delay,
        acceleration=args.accel,
        deceleration=args.decel,
        speed_lambda=args.speed_lambda,
        max_sim_time=args.max_time,
    )


def _manifest(args, layout_src, config, **extra):
    m = {
        "tool": "evacsim",
        "version": __version__,
        "command": args.command,
        "layout": layout_src,
        "blocked": sorted(n for n in args.blocked.split(",") if n)
        if layout_src.startswith("builtin") else [],
        "seed": args.seed,
        "config": {
            "mean_door_delay": config.mean_door_delay,
            "exit_opening_time": config.exit_opening_time,
            "tick_length": config.tick_length,
            "acceleration": config.acceleration,
            "deceleration": config.deceleration,
            "speed_lambda": config.speed_lambda,
            "speed_step": config.speed_step,
            "speed_floor": config.speed_floor,
            "speed_cap": config.speed_cap,
            "max_sim_time": config.max_sim_time,
        },
    }
    m.update(extra)
    return json.dumps(m, sort_keys=True, separators=(",", ":"))


def _write_out(path, text):
    if path:
        try:
            with open(path, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        except OSError as e:
            print(f"evacsim: cannot write {path}: {e}", file=sys.stderr)
            raise SystemExit(EXIT_IO)
    else:
        sys.stdout.write(text)


class TraceWriter:
    """Streams one JSON object per tick to a file, then a summary line.

    The tick-0 line carries the run manifest. An empty trial (no agents)
    produces just the summary line, manifest included there instead.
    """

    def __init__(self, fh, manifest_json):
        self._fh = fh
        self._manifest = json.loads(manifest_json)
        self._seen_exited = 0
        self._wrote_any = False

    def on_state(self, state):
        exited_now = [r.agent_id for r in state.exited[self._seen_exited:]]
        self._seen_exited = len(state.exited)
        rec = {
            "tick": state.tick,
            "t_s": round(state.elapsed_s(), 4),
            "agents": [
                {"id": a.id, "x": round(a.x, 8), "y": round(a.y, 8),
                 "h": round(a.heading, 2), "s": round(a.speed, 4)}
                for a in state.agents()
            ],
            "exited": exited_now,
        }
        if state.initial_count == 0:
            return  # vacuous trial: summary only
        if not self._wrote_any:
            rec = {"tick": rec["tick"], "manifest": self._manifest, **rec}
            self._wrote_any = True
        self._fh.write(json.dumps(rec, sort_keys=False, separators=(",", ":")) + "\n")

    def finish(self, result):
        rec = {
            "summary": {
                "evac_time_s": round(result.evac_time_s, 4),
                "outcome": result.outcome,
                "ticks": result.ticks,
                "agents": result.initial_count,
                "exited": len(result.records),
                "seed": result.seed,
            }
        }
        if not self._wrote_any:
            rec = {"manifest": self._manifest, **rec}
        self._fh.write(json.dumps(rec, sort_keys=False, separators=(",", ":")) + "\n")


def write_trace(path, layout, field, config, seed, manifest_json):
    """Run one trial streaming its trace to ``path``; returns the result."""
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            tw = TraceWriter(fh, manifest_json)
            result = run_trial(layout, field, config, seed, observer=tw.on_state)
            tw.finish(result)
        return result
    except OSError as e:
        print(f"evacsim: cannot write trace: {e}", file=sys.stderr)
        raise SystemExit(EXIT_IO)


def cmd_run(args):
    layout, src = _load_layout(args)
    config = _config(args)
    field = build_field(layout)
    manifest = _manifest(args, src, config)
    if args.trace:
        result = write_trace(args.trace, layout, field, config, args.seed, manifest)
    else:
        result = run_trial(layout, field, config, args.seed)
    _write_out(args.out, f"evac_time_s={result.evac_time_s:.1f} outcome={result.outcome}\n")
    return EXIT_OK


def sweep_csv(points, manifest_json):
    lines = [f"# manifest: {manifest_json}",
             "D,trials,mean_s,std_s,min_s,max_s,timeouts"]
    for p in points:
        s = p.stats
        lines.append(f"{p.mean_door_delay:.4f},{s.n},{s.mean:.4f},{s.std_dev:.4f},"
                     f"{s.min:.4f},{s.max:.4f},{s.timeouts}")
    return "\n".join(lines) + "\n"


def cmd_sweep(args):
    layout, src = _load_layout(args)
    config = _config(args)
    manifest = _manifest(args, src, config, trials=args.trials,
                         d_from=args.d_from, d_to=args.d_to, d_step=args.d_step)
    points = sweep(layout, config, args.d_from, args.d_to, args.d_step,
                   args.trials, args.seed, jobs=args.jobs)
    _write_out(args.out, sweep_csv(points, manifest))
    if args.chart:
        svg = render_chart_svg(points, threshold=args.threshold, manifest=manifest)
        try:
            with open(args.chart, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(svg)
        except OSError as e:
            print(f"evacsim: cannot write chart: {e}", file=sys.stderr)
            raise SystemExit(EXIT_IO)
    return EXIT_OK


def cmd_calibrate(args):
    layout, src = _load_layout(args)
    config = _config(args).with_mean_door_delay(0.0)
    lo, hi = (float(v) for v in args.band.split(","))
    stats, _ = run_batch(layout, config, args.trials, args.seed, jobs=args.jobs)
    ok = lo <= stats.mean <= hi
    report = (
        f"trials={stats.n} mean_s={stats.mean:.4f} std_s={stats.std_dev:.4f} "
        f"min_s={stats.min:.4f} max_s={stats.max:.4f} timeouts={stats.timeouts}\n"
        f"band_lo={lo:.4f} band_hi={hi:.4f} result={'PASS' if ok else 'FAIL'}\n"
    )
    _write_out(args.out, report)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_layout(args):
    layout, _ = _load_layout(args)
    _write_out(args.out, serialize_layout(layout))
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "jobs", 1) < 1:
        parser.error("--jobs must be >= 1")
    if getattr(args, "trials", 1) < 1:
        parser.error("--trials must be >= 1")
    if args.command == "sweep" and args.d_step <= 0:
        parser.error("--d-step must be > 0")
    if args.command == "sweep" and args.d_from > args.d_to:
        parser.error("--d-from must be <= --d-to")
    if args.command == "calibrate":
        try:
            lo, hi = (float(v) for v in args.band.split(","))
        except ValueError:
            parser.error("--band must be LO,HI")
        if lo > hi:
            parser.error("--band must have LO <= HI")
    if args.mean_door_delay < 0:
        parser.error("--mean-door-delay must be >= 0")
    handler = {"run": cmd_run, "sweep": cmd_sweep,
               "calibrate": cmd_calibrate, "layout": cmd_layout}[args.command]
    return handler(args)


def entrypoint():
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
