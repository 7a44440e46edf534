"""Command line entry point: ``kspm <subcommand> ...``.

Exit status: 0 on success, 1 when a verification suite has a failing hard
check, 2 on usage or input errors.
"""
import argparse
import json
import sys

from . import formats
from .avalanches import record_log
from .core import fixed_point
from .exceptions import InputError, KSPMError
from .transducer import (
    ALGORITHM_EXACT,
    MODES,
    build_machine,
    format_state,
    format_word,
    parse_word,
    wave_steps,
)
from .verify import SUITES, run_suite
from .waves import pipeline_check, wave_sweep


def _d(text):
    try:
        D = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid D {text!r}") from None
    if D < 2:
        raise argparse.ArgumentTypeError(f"D must be >= 2, got {D}")
    return D


def _n(text):
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid count {text!r}") from None
    if n < 0:
        raise argparse.ArgumentTypeError(f"count must be >= 0, got {n}")
    return n


def _emit(text, out):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_fixedpoint(args):
    cfg = fixed_point(args.d, args.n)
    fmt = args.format
    if fmt == "json":
        text = json.dumps({"D": args.d, "N": args.n, "slopes": list(cfg.slopes),
                           "width": cfg.width}) + "\n"
    elif fmt == "csv":
        text = formats.config_to_csv(cfg)
    elif fmt == "ascii":
        text = formats.render_heights_ascii(cfg)
    else:
        text = formats.render_heights_svg(cfg)
    _emit(text, args.out)
    return 0


def cmd_avalanches(args):
    log = record_log(args.d, args.n)
    if args.format == "jsonl":
        text = formats.dumps_avalanche_log(log)
    elif args.format == "svg":
        text = formats.render_avalanches_svg(log, long_only=not args.all)
    else:
        text = formats.render_avalanches_ascii(log, long_only=not args.all)
    _emit(text, args.out)
    return 0


def cmd_transducer(args):
    machine = build_machine(args.d, args.mode)
    if args.action == "build":
        if args.format == "json":
            data = {
                "D": args.d, "mode": args.mode,
                "states": [format_state(q) for q in machine.states],
                "recurrent": sorted(format_state(q) for q in machine.recurrent),
                "edges": [{"from": format_state(q), "letter": format_word((x,), args.d, args.ab),
                           "to": format_state(r), "output": format_word(o, args.d, args.ab)}
                          for q, x, r, o in machine.edges()],
            }
            text = json.dumps(data, indent=2) + "\n"
        else:
            text = machine.to_dot(ab=args.ab)
        _emit(text, args.out)
        return 0
    if args.input is None:
        raise InputError(f"transducer {args.action} needs --input")
    word = parse_word(args.input, args.d)
    if args.action == "run":
        start = None
        if args.start is not None:
            if not args.start.isdigit():
                raise InputError(f"state {args.start!r} must be written as digits")
            start = tuple(int(c) for c in args.start)
        end, out = machine.run(word, start)
        text = json.dumps({"input": format_word(word, args.d, args.ab),
                           "output": format_word(out, args.d, args.ab),
                           "end_state": format_state(end)}) + "\n"
    else:
        text = json.dumps({"input_length": len(word),
                           "steps": wave_steps(machine, word)}) + "\n"
    _emit(text, args.out)
    return 0


def cmd_sweep(args):
    rows = wave_sweep(args.d, args.n_max)
    if args.format == "json":
        text = json.dumps([dict(N=r.N, i_N=r.i_N, L=r.L, width=r.width,
                                match_mode=r.match_mode) for r in rows]) + "\n"
    else:
        text = formats.sweep_to_csv(rows)
    _emit(text, args.out)
    return 0


def cmd_pipeline(args):
    rep = pipeline_check(args.d, args.n)
    _emit(json.dumps(rep.to_dict(), indent=2) + "\n", args.out)
    return 0


def cmd_verify(args):
    kw = {}
    if args.suite == "theorem3" and args.n_max is not None:
        kw["N_max"] = args.n_max
    elif args.suite == "conjectureD":
        if args.n_max is not None:
            kw["N_max"] = args.n_max
        if args.d:
            kw["Ds"] = tuple(args.d)
    elif args.suite == "avalanche-lemmas":
        if args.n_max is not None:
            kw["N"] = args.n_max
        if args.d:
            kw["Ds"] = tuple(args.d)
    elif args.suite == "core-laws":
        if args.samples is not None:
            kw["samples"] = args.samples
        if args.d:
            kw["Ds"] = tuple(args.d)
    elif args.suite == "appendix-words" and args.samples is not None:
        kw["height_samples"] = kw["bound_samples"] = args.samples
    seed = args.seed if args.seed is not None else (7 if args.suite == "appendix-words" else 0)
    rep = run_suite(args.suite, seed=seed, **kw)
    if args.format == "json":
        text = json.dumps(rep.to_dict(), indent=2) + "\n"
    else:
        text = rep.to_text()
    _emit(text, args.out)
    return 0 if rep.passed else 1


def build_parser():
    p = argparse.ArgumentParser(prog="kspm", description="Kadanoff sand pile laboratory")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, n_flag=None):
        sp.add_argument("--d", type=_d, default=3, help="model parameter D >= 2")
        if n_flag == "n":
            sp.add_argument("--n", type=_n, required=True, help="number of grains")
        elif n_flag == "n-max":
            sp.add_argument("--n-max", type=_n, required=True)
        sp.add_argument("--out", help="write to this path instead of stdout")

    sp = sub.add_parser("fixedpoint", help="compute pi(N)")
    common(sp, "n")
    sp.add_argument("--format", choices=("json", "csv", "ascii", "svg"), default="json")
    sp.set_defaults(func=cmd_fixedpoint)

    sp = sub.add_parser("avalanches", help="record and render avalanches")
    common(sp, "n")
    sp.add_argument("--format", choices=("ascii", "svg", "jsonl"), default="ascii")
    sp.add_argument("--all", action="store_true", help="render every avalanche, not only long ones")
    sp.set_defaults(func=cmd_avalanches)

    sp = sub.add_parser("transducer", help="build or run the interval transducer")
    sp.add_argument("action", choices=("build", "run", "steps"))
    common(sp)
    sp.add_argument("--mode", choices=MODES, default=ALGORITHM_EXACT)
    sp.add_argument("--format", choices=("dot", "json"), default="dot")
    sp.add_argument("--input", help="word as digits, or a/b for D=3")
    sp.add_argument("--from", dest="start", help="start state as digits, e.g. 21")
    sp.add_argument("--ab", action="store_true", help="print D=3 words with a/b")
    sp.set_defaults(func=cmd_transducer)

    sp = sub.add_parser("sweep", help="wave-match pi(N) for N <= N_max")
    common(sp, "n-max")
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("pipeline", help="compare interval words with transducer images")
    common(sp, "n")
    sp.set_defaults(func=cmd_pipeline)

    sp = sub.add_parser("verify", help="run a verification suite")
    sp.add_argument("--suite", choices=SUITES, required=True)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--n-max", type=_n)
    sp.add_argument("--samples", type=_n)
    sp.add_argument("--d", type=_d, action="append", help="repeatable")
    sp.add_argument("--format", choices=("text", "json"), default="text")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_verify)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except KSPMError as exc:
        print(f"kspm: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
