"""Command line driver.

Subcommands: ``simulate``, ``render``, ``sweep``, ``selftest``.
Exit codes: 0 success, 1 selftest failure, 2 config error,
3 numerical failure (singular inversion), 4 I/O error.
"""

import argparse
import csv
import json
import sys
from pathlib import Path

from .algebra import SingularMatrix
from .elements import DepolarizingEnsemble, apply_to_pol
from .experiment import (
    SCHEMES,
    ParseError,
    ValidationError,
    build_sample,
    emit_results,
    load_config,
    run,
    sweep,
)
from .fields import Grid, emit_map, render
from .states import radial_beam

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_NUMERIC, EXIT_IO = 0, 1, 2, 3, 4


def _load(args):
    cfg = load_config(args.config)
    if getattr(args, "seed", None) is not None:
        cfg.seed = args.seed
    if getattr(args, "trials", None) is not None:
        if args.trials < 1:
            raise ValidationError("--trials must be >= 1")
        cfg.trials = args.trials
    if getattr(args, "scheme", None) is not None:
        cfg.scheme = args.scheme
    return cfg


def cmd_simulate(args):
    cfg = _load(args)
    r = run(cfg)
    if args.out:
        emit_results(r, args.out, args.format)
    else:
        json.dump(r.to_dict(), sys.stdout, sort_keys=True, indent=2)
        sys.stdout.write("\n")
    return EXIT_OK


def cmd_render(args):
    cfg = _load(args)
    grid = cfg.render or Grid(256, 256)
    if args.beam == "probe":
        e = radial_beam()
    else:
        sample = build_sample(cfg)
        if isinstance(sample, DepolarizingEnsemble):
            raise ValidationError("render: a depolarizing ensemble has no single transmitted field")
        e = apply_to_pol(sample, radial_beam())
    fmt = args.format if args.format in ("csv", "pixmap") else "pixmap"
    emit_map(render(e, grid), args.out, fmt, args.layer)
    return EXIT_OK


def cmd_sweep(args):
    cfg = _load(args)
    sigmas = [float(s) for s in args.sigmas.split(",")]
    rows = sweep(cfg, sigmas)
    if args.format == "csv":
        fh = open(args.out, "w", newline="") if args.out else sys.stdout
        try:
            w = csv.DictWriter(fh, fieldnames=["sigma_rel", "scheme", "frob_median", "frob_p05", "frob_p95"],
                               lineterminator="\n")
            w.writeheader()
            w.writerows(rows)
        finally:
            if args.out:
                fh.close()
    else:
        text = json.dumps({"seed": cfg.seed, "config_hash": cfg.config_hash(), "rows": rows},
                          sort_keys=True, indent=2) + "\n"
        if args.out:
            Path(args.out).write_text(text)
        else:
            sys.stdout.write(text)
    return EXIT_OK


def cmd_selftest(args):
    from .acceptance import run_all

    results = run_all()
    failed = [c for c in results if not c.passed]
    print(f"{len(results) - len(failed)}/{len(results)} criteria passed")
    return EXIT_FAIL if failed else EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="radialpol", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, formats):
        sp.add_argument("--config", required=True, help="YAML/JSON experiment config")
        sp.add_argument("--seed", type=int, help="override the config seed")
        sp.add_argument("--out", help="output path (stdout if omitted, where allowed)")
        sp.add_argument("--format", choices=formats, default=formats[0])

    sp = sub.add_parser("simulate", help="run polarimetry schemes and score them")
    common(sp, ["json", "csv"])
    sp.add_argument("--trials", type=int)
    sp.add_argument("--scheme", choices=SCHEMES + ("all",))
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("render", help="write a transverse field map")
    common(sp, ["pixmap", "csv"])
    sp.add_argument("--layer", choices=["intensity", "phase_x", "phase_y"], default="intensity")
    sp.add_argument("--beam", choices=["transmitted", "probe"], default="transmitted")
    sp.set_defaults(func=cmd_render)

    sp = sub.add_parser("sweep", help="noise sweep over relative readout noise levels")
    common(sp, ["json", "csv"])
    sp.add_argument("--trials", type=int)
    sp.add_argument("--scheme", choices=SCHEMES + ("all",))
    sp.add_argument("--sigmas", default="1e-2,1e-3,1e-4", help="comma-separated sigma_rel values")
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("selftest", help="run the acceptance checks")
    sp.set_defaults(func=cmd_selftest)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.command == "render" and not args.out:
        print("error: render needs --out", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return args.func(args)
    except (ParseError, ValidationError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SingularMatrix as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
