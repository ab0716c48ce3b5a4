"""Command-line front end: problem files in, certificates and curve data out.

Subcommands: ``optimize`` (build and serialise an optimal pair),
``validate`` (check an explicit pair), ``curve`` (sample a decay curve to
CSV), ``compare`` (rank schedules by sharp constant), and ``reproduce``
(regenerate the bundled 2D benchmark figure data).  Exit codes: 2 unparsable
input, 3 invalid envelope constant, 4 failed validation, 5 unsustainable
envelope rate, 6 mixed equilibria.  No plotting here on purpose; every
consumer gets deterministic CSV/JSON bytes.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import __version__, benchmarks
from .construction import construct_optimal
from .equilibrium import spectral_gap, validate_pair
from .errors import FpoptError, InvalidConstant, MixedEquilibria, RateTooLarge
from .propagator import Schedule, norm_curve, sharp_constant, tangency_time
from .serialize import (
    ProblemFormatError,
    certificate_to_dict,
    dump_json,
    load_problem,
)

EXIT_PARSE = 2
EXIT_CONSTANT = 3
EXIT_VALIDATION = 4
EXIT_RATE = 5
EXIT_MIXED = 6

FIGURES = ("fig1", "fig2", "fig3", "fig4")
_FIGURE_T_MAX = 8.0


def _fail(message: str, code: int) -> int:
    print(f"fpopt: {message}", file=sys.stderr)
    return code


def _default_samples(args) -> int:
    if getattr(args, "samples", None):
        return int(args.samples)
    return int(os.environ.get("FPOPT_SAMPLES", 4096))


def _write_text(payload: str, out: str | None) -> None:
    if out:
        with open(out, "w", newline="") as handle:
            handle.write(payload)
    else:
        sys.stdout.write(payload)


def cmd_optimize(args) -> int:
    problem = load_problem(args.input)
    budget = args.budget if args.budget is not None else problem.budget
    if budget is None:
        return _fail("no budget: give 'c' in the problem file or --budget", EXIT_PARSE)
    variant = args.variant or problem.variant
    cert = construct_optimal(problem.covariance, budget, variant=variant)
    doc = certificate_to_dict(cert)
    if args.out:
        dump_json(doc, args.out)
    else:
        dump_json(doc, sys.stdout)
    return 0


def cmd_validate(args) -> int:
    try:
        problem = load_problem(args.input)
        if problem.pair is None:
            return _fail("validation needs an explicit pair in the input", EXIT_PARSE)
        report = validate_pair(problem.pair)
    except FpoptError as exc:
        # the pair could not even be assembled (bad diffusion, over budget, ...)
        dump_json({"passed": False, "error": str(exc)}, sys.stdout)
        return EXIT_VALIDATION
    dump_json(report.as_dict(), sys.stdout)
    return 0 if report.passed else EXIT_VALIDATION


def cmd_curve(args) -> int:
    problem = load_problem(args.input)
    source = problem.source
    if source is None:
        return _fail("curve needs a pair or a schedule in the input", EXIT_PARSE)
    analysis = problem.analysis or {}
    rate = args.rate if args.rate is not None else analysis.get("rate")
    if rate is None:
        rate = spectral_gap(source.asymptotic_pair)
    rate = float(rate)
    t_max = args.tmax if args.tmax is not None else analysis.get("t_max")
    if t_max is None:
        t_max = 20.0 / rate
    samples = args.samples or analysis.get("samples") or _default_samples(args)
    curve = norm_curve(source, float(t_max), int(samples), rate=rate)
    if args.out:
        curve.write_csv(args.out)
    else:
        curve.write_csv(sys.stdout)
    return 0


def cmd_compare(args) -> int:
    schedules, labels = [], []
    for path in args.inputs:
        problem = load_problem(path)
        source = problem.source
        if source is None:
            return _fail(f"{path}: needs a pair or a schedule", EXIT_PARSE)
        schedules.append(source)
        labels.append(os.path.basename(path))
    from .propagator import compare_schedules

    rows = compare_schedules(schedules, args.rate, labels=labels,
                             samples=_default_samples(args))
    lines = ["id\tsharp_constant\tmax_drift_frobenius"]
    for row in rows:
        lines.append(f"{row.label}\t{row.sharp_constant:.17g}"
                     f"\t{max(row.drift_norms):.17g}")
    _write_text("\n".join(lines) + "\n", args.out)
    return 0


def _write_envelope_csv(path, times, values) -> None:
    lines = ["t,value"]
    lines.extend(f"{t:.17g},{v:.17g}" for t, v in zip(times, values))
    with open(path, "w", newline="") as handle:
        handle.write("\n".join(lines) + "\n")


def _reproduce_fig1(outdir: str, samples: int) -> dict:
    """Three budgets on the benchmark equilibrium: curves, sharp envelopes,
    and the limiting pure-exponential curve."""
    cov = benchmarks.anisotropic_covariance()
    times = np.linspace(0.0, _FIGURE_T_MAX, samples)
    files = []
    for c in (1.5, 2.0, 3.0):
        cert = construct_optimal(cov, c)
        curve = norm_curve(cert.pair, _FIGURE_T_MAX, samples, rate=cert.rate)
        name = f"fig1_norm_c{c:g}.csv"
        curve.write_csv(os.path.join(outdir, name))
        files.append({"file": name, "role": "norm_curve", "params": {"c": c, "rate": cert.rate}})
        env_name = f"fig1_envelope_c{c:g}.csv"
        _write_envelope_csv(os.path.join(outdir, env_name), times, c * np.exp(-cert.rate * times))
        files.append({"file": env_name, "role": "envelope", "params": {"c": c, "rate": cert.rate}})
    _write_envelope_csv(os.path.join(outdir, "fig1_limit.csv"), times, np.exp(-times))
    files.append({"file": "fig1_limit.csv", "role": "limit", "params": {"rate": 1.0}})
    return {"figure": "fig1", "eps": benchmarks.DEFAULT_EPS, "files": files}


def _reproduce_fig2(outdir: str, samples: int) -> dict:
    """Budget sqrt(2): the unit-spaced weight ladder (mu = 3) against the
    shifted ladder (mu = 7), plus the two symmetric baselines."""
    c = float(np.sqrt(2.0))
    curves = {
        "fig2_norm_mu3.csv": (benchmarks.rotating_pair(3.0), {"mu": 3.0, "c": c}),
        "fig2_norm_mu7.csv": (benchmarks.rotating_pair(7.0), {"mu": 7.0}),
        "fig2_norm_symmetric.csv": (benchmarks.symmetric_pair(), {}),
        "fig2_norm_balanced.csv": (benchmarks.balanced_pair(), {}),
    }
    files = []
    for name, (pair, params) in curves.items():
        gap = spectral_gap(pair)
        curve = norm_curve(pair, _FIGURE_T_MAX, samples, rate=gap)
        curve.write_csv(os.path.join(outdir, name))
        files.append({"file": name, "role": "norm_curve", "params": {**params, "rate": gap}})
    times = np.linspace(0.0, _FIGURE_T_MAX, samples)
    _write_envelope_csv(os.path.join(outdir, "fig2_envelope.csv"), times, c * np.exp(-times))
    files.append({"file": "fig2_envelope.csv", "role": "envelope", "params": {"c": c, "rate": 1.0}})
    return {"figure": "fig2", "eps": benchmarks.DEFAULT_EPS, "files": files}


def _reproduce_fig3(outdir: str, samples: int) -> dict:
    """The five initial-layer candidates, switch time 0.1, plus the sharp
    envelope of the constant reference case."""
    switch = 0.1
    files = []
    for label, schedule in benchmarks.case_schedules(switch).items():
        curve = norm_curve(schedule, _FIGURE_T_MAX, samples, rate=1.0)
        name = f"fig3_schedule_{label}.csv"
        curve.write_csv(os.path.join(outdir, name))
        files.append({"file": name, "role": "norm_curve",
                      "params": {"case": label, "switch": switch, "rate": 1.0}})
    reference = sharp_constant(benchmarks.rotating_pair(benchmarks.REFERENCE_MU), 1.0,
                               samples=samples)
    times = np.linspace(0.0, _FIGURE_T_MAX, samples)
    _write_envelope_csv(os.path.join(outdir, "fig3_envelope_fp1.csv"),
                        times, reference * np.exp(-times))
    files.append({"file": "fig3_envelope_fp1.csv", "role": "envelope",
                  "params": {"constant": reference, "rate": 1.0}})
    return {"figure": "fig3", "eps": benchmarks.DEFAULT_EPS, "switch": switch, "files": files}


def _reproduce_fig4(outdir: str, samples: int) -> dict:
    """Tangency-timed switching: the reference rotation against initial
    layers of mu = 11 (switched at its first tangency) and mu = 13.8."""
    rate = 1.0
    fp5 = benchmarks.rotating_pair(11.0)
    fp5_switch = tangency_time(fp5, rate, samples=samples)
    cases = {
        "fp1": (Schedule.constant(benchmarks.rotating_pair(benchmarks.REFERENCE_MU)), None),
        "fp5": (benchmarks.split_schedule(fp5, fp5_switch), fp5_switch),
        "fp6": (benchmarks.split_schedule(benchmarks.rotating_pair(13.8),
                                          benchmarks.FAST_SWITCH), benchmarks.FAST_SWITCH),
    }
    times = np.linspace(0.0, _FIGURE_T_MAX, samples)
    files = []
    switch_times = {}
    for label, (schedule, switch) in cases.items():
        curve = norm_curve(schedule, _FIGURE_T_MAX, samples, rate=rate)
        name = f"fig4_schedule_{label}.csv"
        curve.write_csv(os.path.join(outdir, name))
        files.append({"file": name, "role": "norm_curve",
                      "params": {"case": label, "switch": switch, "rate": rate,
                                 "sharp_constant": curve.sharp_constant}})
        env_name = f"fig4_envelope_{label}.csv"
        _write_envelope_csv(os.path.join(outdir, env_name),
                            times, curve.sharp_constant * np.exp(-rate * times))
        files.append({"file": env_name, "role": "envelope",
                      "params": {"constant": curve.sharp_constant, "rate": rate}})
        if switch is not None:
            switch_times[label] = switch
    return {"figure": "fig4", "eps": benchmarks.DEFAULT_EPS,
            "switch_times": switch_times, "files": files}


_FIGURE_BUILDERS = {
    "fig1": _reproduce_fig1,
    "fig2": _reproduce_fig2,
    "fig3": _reproduce_fig3,
    "fig4": _reproduce_fig4,
}


def cmd_reproduce(args) -> int:
    outdir = args.outdir
    os.makedirs(outdir, exist_ok=True)
    manifest = _FIGURE_BUILDERS[args.figure](outdir, _default_samples(args))
    manifest["version"] = __version__
    dump_json(manifest, os.path.join(outdir, f"{args.figure}_manifest.json"))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fpopt",
        description="Fastest-decaying drift-diffusion pairs for a prescribed "
                    "Gaussian equilibrium: construction, validation, and exact "
                    "decay-curve data.")
    parser.add_argument("--version", action="version", version=f"fpopt {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("optimize", help="construct an optimal pair and print its certificate")
    p.add_argument("input", help="problem file (JSON)")
    p.add_argument("--budget", type=float, default=None, help="override the file's constant c")
    p.add_argument("--variant", choices=("standard", "transpose"), default=None)
    p.add_argument("--out", default=None, help="write the certificate here instead of stdout")
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("validate", help="check an explicit pair and print the report")
    p.add_argument("input", help="problem or certificate file (JSON)")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("curve", help="sample a decay curve with its envelope to CSV")
    p.add_argument("input", help="problem file with a pair or schedule")
    p.add_argument("--rate", type=float, default=None, help="envelope rate (default: spectral gap)")
    p.add_argument("--tmax", type=float, default=None, help="sampling horizon")
    p.add_argument("--samples", type=int, default=None, help="grid size (default FPOPT_SAMPLES or 4096)")
    p.add_argument("--out", default=None, help="CSV path (default stdout)")
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("compare", help="rank schedules by sharp envelope constant (TSV)")
    p.add_argument("inputs", nargs="+", help="problem files sharing one equilibrium")
    p.add_argument("--rate", type=float, required=True, help="common envelope rate")
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--out", default=None, help="TSV path (default stdout)")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("reproduce", help="regenerate the bundled benchmark figure data")
    p.add_argument("figure", choices=FIGURES)
    p.add_argument("--outdir", default=".", help="directory for the CSV files and manifest")
    p.add_argument("--samples", type=int, default=None)
    p.set_defaults(func=cmd_reproduce)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ProblemFormatError, OSError) as exc:
        return _fail(str(exc), EXIT_PARSE)
    except InvalidConstant as exc:
        return _fail(str(exc), EXIT_CONSTANT)
    except RateTooLarge as exc:
        return _fail(str(exc), EXIT_RATE)
    except MixedEquilibria as exc:
        return _fail(str(exc), EXIT_MIXED)
    except FpoptError as exc:
        return _fail(str(exc), EXIT_PARSE)


if __name__ == "__main__":
    raise SystemExit(main())
