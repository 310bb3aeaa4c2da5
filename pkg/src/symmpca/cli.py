"""Command-line front end.

Subcommands: ``run`` (one simulation to CSV), ``figure`` (the seven-curve
convergence comparison plus an SVG), ``detsweep`` (det D'_alpha over alpha)
and ``verify`` (self-check suites). Exit codes: 0 ok, 1 usage error,
2 divergence, 3 verification failure.
"""

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import verify
from .analysis import det_sweep
from .dynamics import BackProjection, SimConfig, model_from_seed, run_simulation
from .errors import ConfigurationError, ContractError, DivergenceError
from .linalg import make_rng, random_stiefel
from .model import preset_eigenvalues
from .rules import RULE_KINDS, RuleSpec
from .svgplot import log_plot

EXIT_OK, EXIT_USAGE, EXIT_DIVERGENCE, EXIT_VERIFY = 0, 1, 2, 3

FIGURE_ALPHAS = (1.0, 2.0, 5.0, 10.0, 20.0)
FIGURE_STEPS = {"spaced": 20000, "nearby": 50000}
DETSWEEP_SEED = 0

RUN_DEFAULTS = {
    "rule": "n2s",
    "alpha": 0.0,
    "preset": "spaced",
    "eigenvalues": None,
    "n": None,
    "m": 4,
    "backprojection": "exact",
    "gamma": 1.0,
    "steps": 20000,
    "subsample": 100,
    "seed": 0,
    "out": None,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _eigenvalue_list(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}")


def _add_sim_flags(p, skip=()):
    add = {
        "rule": lambda: p.add_argument("--rule", choices=RULE_KINDS),
        "alpha": lambda: p.add_argument("--alpha", type=float),
        "preset": lambda: p.add_argument("--preset", choices=("spaced", "nearby")),
        "eigenvalues": lambda: p.add_argument("--eigenvalues", type=_eigenvalue_list,
                                              help="comma list, descending (custom spectrum)"),
        "n": lambda: p.add_argument("--n", type=int),
        "m": lambda: p.add_argument("--m", type=int),
        "backprojection": lambda: p.add_argument("--backprojection", choices=[b.value for b in BackProjection]),
        "gamma": lambda: p.add_argument("--gamma", type=float),
        "steps": lambda: p.add_argument("--steps", type=int),
        "subsample": lambda: p.add_argument("--subsample", type=int),
        "seed": lambda: p.add_argument("--seed", type=int),
    }
    for name, fn in add.items():
        if name not in skip:
            fn()
    p.add_argument("--config", help="JSON file with flag values; flags override it")


def build_parser():
    parser = _Parser(prog="symmpca", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    run = sub.add_parser("run", help="integrate one rule and write a step,e_o,e_p CSV")
    _add_sim_flags(run)
    run.add_argument("--out", help="CSV path (stdout if omitted)")

    fig = sub.add_parser("figure", help="seven-curve comparison (TwJ2S, N2S, M2S) with SVG")
    fig.add_argument("name", choices=sorted(FIGURE_STEPS))
    _add_sim_flags(fig, skip=("rule", "alpha", "preset", "eigenvalues"))
    fig.add_argument("--out-dir", default=".")
    fig.add_argument("--jobs", type=int, default=1)

    det = sub.add_parser("detsweep", help="det D'_alpha for alpha = 0.0, 0.1, ..., 20.0")
    det.add_argument("--seed", type=int, default=DETSWEEP_SEED)
    det.add_argument("--m", type=int, default=4)
    det.add_argument("--out", help="CSV path (stdout if omitted)")

    ver = sub.add_parser("verify", help="run the self-check suites")
    ver.add_argument("--only", action="append", choices=list(verify.SUITES), metavar="SUITE",
                     help=f"suite to run (repeatable): {', '.join(verify.SUITES)}")
    return parser


def resolve_options(args, defaults):
    """Merge defaults < JSON config file < explicit flags."""
    opts = dict(defaults)
    if getattr(args, "config", None):
        try:
            with open(args.config, encoding="utf-8") as fh:
                doc = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"--config: cannot read {args.config}: {exc}")
        for key, value in doc.items():
            key = key.replace("-", "_")
            if key not in defaults:
                raise UsageError(f"--config: unknown key {key!r}")
            if key == "eigenvalues" and isinstance(value, str):
                value = _eigenvalue_list(value)
            opts[key] = value
    for key in defaults:
        value = getattr(args, key, None)
        if value is not None:
            opts[key] = value
    return opts


def _lambdas(opts):
    if opts.get("eigenvalues"):
        lambdas = preset_eigenvalues("custom", opts["eigenvalues"])
    else:
        lambdas = preset_eigenvalues(opts["preset"])
    if opts.get("n") is not None and opts["n"] != len(lambdas):
        raise UsageError(f"--n {opts['n']} does not match {len(lambdas)} eigenvalues")
    return lambdas


def _sim_config(opts, spec):
    try:
        model = model_from_seed(_lambdas(opts), int(opts["seed"]))
        return SimConfig(
            model=model,
            spec=spec,
            m=int(opts["m"]),
            gamma=float(opts["gamma"]),
            steps=int(opts["steps"]),
            subsample=int(opts["subsample"]),
            backprojection=opts["backprojection"],
            seed=int(opts["seed"]),
        )
    except (ConfigurationError, ContractError) as exc:
        raise UsageError(str(exc))


def format_rows(rows):
    lines = ["step,e_o,e_p"]
    lines += [f"{r.step},{r.e_o:.16e},{r.e_p:.16e}" for r in rows]
    return "\n".join(lines) + "\n"


def _write(path, text):
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def cmd_run(args):
    opts = resolve_options(args, RUN_DEFAULTS)
    try:
        spec = RuleSpec(opts["rule"], float(opts["alpha"]))
    except (ConfigurationError, ContractError) as exc:
        raise UsageError(f"--rule/--alpha: {exc}")
    config = _sim_config(opts, spec)
    t0 = time.perf_counter()
    rows = run_simulation(config)
    _write(opts["out"], format_rows(rows))
    manifest = {
        "config": {k: v for k, v in opts.items() if k != "out"},
        "output_path": opts["out"] or "-",
        "emitted_rows": len(rows),
        "wall_time": round(time.perf_counter() - t0, 3),
    }
    print(json.dumps(manifest), file=sys.stderr if opts["out"] in (None, "-") else sys.stdout)
    return EXIT_OK


def figure_specs():
    return [RuleSpec("twj2s"), RuleSpec("n2s")] + [RuleSpec("m2s", a) for a in FIGURE_ALPHAS]


def _figure_curve(job):
    opts, spec = job
    return run_simulation(_sim_config(opts, spec))


def cmd_figure(args):
    defaults = dict(RUN_DEFAULTS, preset=args.name, steps=FIGURE_STEPS[args.name], gamma=None)
    defaults.pop("out")
    opts = resolve_options(args, defaults)
    if opts["gamma"] is None:
        opts["gamma"] = 1.0 if opts["backprojection"] == "exact" else 0.1
    specs = figure_specs()
    _sim_config(opts, specs[0])  # validate before spawning work
    out_dir = Path(args.out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise UsageError(f"--out-dir: {exc}")

    jobs = [(opts, spec) for spec in specs]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            traces = list(pool.map(_figure_curve, jobs))
    else:
        traces = [_figure_curve(job) for job in jobs]

    stem = f"{args.name}_{opts['backprojection']}"
    for spec, rows in zip(specs, traces):
        header = {"figure": args.name, "rule": spec.kind, "alpha": spec.alpha, **opts}
        text = f"# config: {json.dumps(header, sort_keys=True)}\n" + format_rows(rows)
        _write(out_dir / f"{stem}_{spec.label}.csv", text)
    labels = [spec.label for spec in specs]
    steps = [[r.step for r in rows] for rows in traces]
    log_plot(
        [
            ("orthonormality error e_o", [(s, [r.e_o for r in rows]) for s, rows in zip(steps, traces)]),
            ("projection error e_p", [(s, [r.e_p for r in rows]) for s, rows in zip(steps, traces)]),
        ],
        labels,
        out_dir / f"{stem}.svg",
    )
    print(f"wrote {len(specs)} CSV files and {stem}.svg to {out_dir}")
    return EXIT_OK


def detsweep_data(seed=DETSWEEP_SEED, m=4, n=10):
    """Sweep for a random semi-orthogonal ``n x m`` matrix and eigenvalues n..1."""
    lambdas = np.arange(n, 0, -1, dtype=float)
    Abar = random_stiefel(n, m, make_rng(seed))
    grid = np.round(np.linspace(0.0, 20.0, 201), 10)
    return det_sweep(Abar, lambdas, grid)


def cmd_detsweep(args):
    if not 1 <= args.m <= 10:
        raise UsageError("--m must lie in 1..10")
    result = detsweep_data(args.seed, args.m)
    config = {"seed": args.seed, "n": 10, "m": args.m, "eigenvalues": "10..1", "alpha_step": 0.1}
    lines = [f"# config: {json.dumps(config, sort_keys=True)}", "alpha,det"]
    lines += [f"{a:.1f},{d:.16e}" for a, d in zip(result.alphas, result.dets)]
    brackets = ", ".join(f"[{a:.1f}, {b:.1f}]" for a, b in result.zero_crossings)
    lines.append(f"# sign_changes: {len(result.zero_crossings)} {brackets}".rstrip())
    _write(args.out, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_verify(args):
    results = verify.run_suites(args.only)
    for name, ok, detail in results:
        print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
    failed = [name for name, ok, _ in results if not ok]
    if failed:
        print(f"verification failed: {', '.join(failed)}")
        return EXIT_VERIFY
    return EXIT_OK


COMMANDS = {"run": cmd_run, "figure": cmd_figure, "detsweep": cmd_detsweep, "verify": cmd_verify}


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DivergenceError as exc:
        print(f"diverged: {exc}", file=sys.stderr)
        return EXIT_DIVERGENCE


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
