"""Command line interface.

    frqme-grover point    --omega1-s 1 --tauc-s 0.01
    frqme-grover sweep    --grid 1e-2:1e2:49,1e-4:1:49 --mode both --out fig2c.csv
    frqme-grover optimum  --grid 1e-2:1e2:49,1e-4:1:49
    frqme-grover analytic --x-range 0:1:201 --numeric

Settings come from built-in defaults, then ``--config FILE`` (``key = value``
lines), then command line flags.
"""

import argparse
import csv
import io
import json
import sys

import numpy as np

from . import __version__
from .engine import MODES
from .model import PhysicalParams
from .seqdsl import BASIS_LABELS, DSLError, oracle_sequence, parse
from .sweep import (DEFAULT_J, DEFAULT_OMEGA_SE, J_PRESETS, SweepGrid, analytic_rows,
                    default_workers, emit, load_config, optimum_table, run_point, run_sweep,
                    sequence_hash)

DEFAULTS = {
    "mode": "both",
    "target": "01",
    "format": "csv",
    "j_hz": str(DEFAULT_J),
    "omega_se": repr(DEFAULT_OMEGA_SE),
    "grid": "1e-2:1e2:49,1e-4:1:49",
    "omega1_s": "1",
    "tauc_s": "1e-2",
    "x_range": "0:1:201",
}


def _parse_axis(text):
    lo, hi, n = text.split(":")
    return float(lo), float(hi), int(n)


def parse_grid(text):
    """``wmin:wmax:n,tmin:tmax:n`` -> (omega1_s axis, tauc_s axis)."""
    try:
        w, t = text.split(",")
        return _parse_axis(w), _parse_axis(t)
    except ValueError:
        raise ValueError(f"bad grid {text!r}; expected wmin:wmax:n,tmin:tmax:n") from None


def parse_j(text):
    return J_PRESETS.get(text, None) or float(text)


def build_parser():
    ap = argparse.ArgumentParser(prog="frqme-grover", description=__doc__.split("\n")[0])
    ap.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value settings file")
    common.add_argument("--mode", choices=MODES)
    common.add_argument("--target", choices=BASIS_LABELS, help="searched basis state")
    common.add_argument("--sequence", help="pulse program file replacing the built-in oracle")
    common.add_argument("--format", choices=("csv", "json"))
    common.add_argument("--out", help="output file (default: stdout)")
    common.add_argument("--workers", type=int)
    common.add_argument("--j", dest="j_hz", help="J coupling in Hz, or preset 10k / 100k")
    common.add_argument("--omega-se", dest="omega_se", help="system-environment coupling, rad/s")

    sub = ap.add_subparsers(dest="command", required=True)
    p = sub.add_parser("point", parents=[common], help="metrics at one parameter point")
    p.add_argument("--omega1-s", dest="omega1_s")
    p.add_argument("--tauc-s", dest="tauc_s")
    for name, text in (("sweep", "fidelity/purity/efficiency over a log grid"),
                       ("optimum", "per-tauc_s optimum drive amplitude")):
        s = sub.add_parser(name, parents=[common], help=text)
        s.add_argument("--grid", help="wmin:wmax:n,tmin:tmax:n (log spaced)")
    a = sub.add_parser("analytic", parents=[common],
                       help="closed-form DID-only curves over omega1*tau_c")
    a.add_argument("--x-range", dest="x_range", help="min:max:n, linear spacing")
    a.add_argument("--numeric", action="store_true",
                   help="add the engine's DID-only values for the sequence")
    return ap


def resolve(args):
    conf = dict(DEFAULTS)
    if args.config:
        conf.update(load_config(args.config))
    for key, value in vars(args).items():
        if value is not None and key not in ("config", "command"):
            conf[key] = value
    return conf


def _sequence(conf):
    if conf.get("sequence"):
        with open(conf["sequence"], encoding="utf-8") as fh:
            return parse(fh.read())
    return oracle_sequence(conf["target"])


def _write_table(rows, fmt, out, meta=None):
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: repr(v) if isinstance(v, float) else v for k, v in r.items()})
        text = buf.getvalue()
    else:
        text = json.dumps({"metadata": meta or {}, "records": rows}, indent=2) + "\n"
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _grid(conf):
    w_axis, t_axis = parse_grid(conf["grid"])
    return SweepGrid(omega1_s=w_axis, tauc_s=t_axis, mode=conf["mode"],
                     j_coupling=parse_j(conf["j_hz"]), omega_se=float(conf["omega_se"]),
                     target=conf["target"])


def run(argv=None):
    args = build_parser().parse_args(argv)
    conf = resolve(args)
    workers = int(conf["workers"]) if conf.get("workers") else default_workers()
    fmt, out = conf["format"], conf.get("out")
    seq = _sequence(conf)

    if args.command == "point":
        p = PhysicalParams.from_scaled(float(conf["omega1_s"]), float(conf["tauc_s"]),
                                       float(conf["omega_se"]), parse_j(conf["j_hz"]))
        rec = run_point(p, seq, conf["mode"], conf["target"])
        emit([rec], fmt, out or sys.stdout, seq=seq)
    elif args.command == "sweep":
        grid = _grid(conf)
        emit(run_sweep(grid, seq, workers), fmt, out or sys.stdout, grid=grid, seq=seq)
    elif args.command == "optimum":
        grid = _grid(conf)
        table = optimum_table(run_sweep(grid, seq, workers))
        rows = [{"tauc_s": o.tauc_s, "omega1_s_opt": o.omega1_s, "fidelity_max": o.fidelity,
                 "interior": o.interior} for o in table]
        _write_table(rows, fmt, out, {"grid": grid.describe(),
                                      "sequence_sha256": sequence_hash(seq)})
    elif args.command == "analytic":
        lo, hi, n = _parse_axis(conf["x_range"])
        xs = np.linspace(lo, hi, n)
        rows = analytic_rows(xs, numeric=args.numeric, target=conf["target"],
                             omega_se=float(conf["omega_se"]), j_coupling=parse_j(conf["j_hz"]),
                             seq=seq)
        _write_table(rows, fmt, out, {"x": "omega1 * tau_c"})
    return 0


def main(argv=None):
    try:
        return run(argv)
    except (ValueError, DSLError, OSError, RuntimeError) as exc:
        print(f"frqme-grover: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
