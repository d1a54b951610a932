"""Command-line interface.

Exit codes: 0 on success, 1 when a command fails at run time (unreadable or
malformed input, numeric failure), 2 for invalid arguments.

Every number is written as JSON or CSV.  ``--plot PATH`` additionally
renders a PNG of the same data; it is never produced unless asked for.
"""

import argparse
import logging
import math
import sys

from . import __version__
from .errors import AovsError, DomainError
from .formats import FORMATS, dumps_json, read_matrix, write_csv, write_json, write_matrix
from .generators import DEFAULT_OVERSAMPLE, METHODS, EnergyConfig, GenSpec, generate
from .geometry import area_bound, cap_area_profile, default_h_grid
from .jl import (
    COUNT_VARIANTS,
    JL_CONSTANTS,
    cosine_distortion,
    jl_count_bound,
    jl_crossover_dimension,
    jl_min_dimension,
)

log = logging.getLogger("aovs")


class UsageError(Exception):
    """Raised by command handlers for argument combinations argparse cannot check."""


# -- argument types -------------------------------------------------------------


def _int_min(minimum):
    def parse(text):
        try:
            value = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
        if value < minimum:
            raise argparse.ArgumentTypeError(f"must be >= {minimum}, got {value}")
        return value

    parse.__name__ = f"integer >= {minimum}"
    return parse


def _float(text):
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"expected a finite number, got {text!r}")
    return value


def _positive_float(text):
    value = _float(text)
    if value <= 0:
        raise argparse.ArgumentTypeError(f"must be > 0, got {text}")
    return value


def _half_open_unit(text):
    value = _float(text)
    if not 0.0 <= value < 1.0:
        raise argparse.ArgumentTypeError(f"must lie in [0, 1), got {text}")
    return value


def _open_unit(text):
    value = _float(text)
    if not 0.0 < value < 1.0:
        raise argparse.ArgumentTypeError(f"must lie in the open interval (0, 1), got {text}")
    return value


def _seed(text):
    value = _int_min(0)(text)
    if value > 2 ** 64 - 1:
        raise argparse.ArgumentTypeError(f"seed must fit in 64 bits, got {text}")
    return value


def _int_list(minimum):
    item = _int_min(minimum)

    def parse(text):
        parts = [p for p in text.split(",") if p.strip()]
        if not parts:
            raise argparse.ArgumentTypeError("expected a comma-separated list of integers")
        return [item(p.strip()) for p in parts]

    return parse


def _seed_list(text):
    parts = [p for p in text.split(",") if p.strip()]
    if not parts:
        raise argparse.ArgumentTypeError("expected a comma-separated list of seeds")
    return [_seed(p.strip()) for p in parts]


def _method_list(text):
    names = [p.strip() for p in text.split(",") if p.strip()]
    unknown = [n for n in names if n not in METHODS]
    if unknown or not names:
        raise argparse.ArgumentTypeError(
            f"unknown method(s) {', '.join(unknown) or '(none)'}; choose from {', '.join(METHODS)}"
        )
    return names


# -- commands -------------------------------------------------------------------


def _emit(obj):
    sys.stdout.write(dumps_json(obj))


def cmd_bounds_cap(args):
    r = area_bound(args.dim, args.eps)
    out = {"n": r.n, "eps": r.eps, "log10_bound": r.log10_bound}
    if r.bound is not None:
        out["bound"] = r.bound
    _emit(out)


def cmd_jl_mindim(args):
    r = jl_min_dimension(args.k, args.eps, args.constant)
    _emit({"k": r.k, "eps": r.eps, "constant": r.c.label, "n_min": r.n_min})


def cmd_jl_distort(args):
    r = cosine_distortion(args.eps)
    _emit({"eps": r.eps, "lower": r.lower, "upper": r.upper})


def cmd_jl_count(args):
    variant = "paper-chain" if args.via_paper_chain else args.variant
    r = jl_count_bound(args.dim, args.threshold, variant, args.constant)
    out = {
        "n": r.n,
        "threshold": r.t,
        "variant": r.variant,
        "eps": r.eps,
        "log_count_plus_one": r.log_count_plus_one,
    }
    if r.count is not None:
        out["count"] = r.count
        out["guaranteed"] = r.guaranteed
    _emit(out)


def cmd_jl_crossover(args):
    variants = COUNT_VARIANTS if args.variant == "all" else (args.variant,)
    out = {"threshold": args.threshold, "constant": args.constant, "crossover": {}}
    for v in variants:
        out["crossover"][v] = jl_crossover_dimension(args.threshold, v, args.constant)
    _emit(out)


def _energy_cfg(args):
    return EnergyConfig(
        p=args.p,
        steps=args.steps,
        step_size=args.step_size,
        record_every=args.record_every,
    )


def cmd_generate(args):
    if args.plot and args.method != "energy":
        raise UsageError("--plot draws the optimisation trajectory and needs --method energy")
    if args.method == "orthonormal" and args.count > args.dim:
        raise UsageError(f"orthonormal needs --count <= --dim, got {args.count} > {args.dim}")
    try:
        spec = GenSpec(args.method, args.dim, args.count, seed=args.seed,
                       oversample=args.oversample, prune=args.prune)
        cfg = _energy_cfg(args)
    except DomainError as exc:
        raise UsageError(str(exc)) from None
    vs, report = generate(spec, cfg)
    write_matrix(vs, args.out, args.format)
    write_json(report.to_dict(), args.report)
    log.info("wrote %s and %s (max|cos| = %.6g)", args.out, args.report,
             report.achieved_max_abs_cos)
    if args.plot:
        from .plotting import plot_trajectory

        plot_trajectory(report.trajectory, args.plot,
                        f"energy p={cfg.p:g}, {spec.count} vectors in R^{spec.dim}")


def cmd_analyze(args):
    from .embed_stats import analyze_embeddings, compare_to_normal

    m = read_matrix(args.input, args.format)
    report = analyze_embeddings(m, args.pair_budget, args.seed, args.label or args.input)
    if args.stats_out:
        write_json(report.to_dict(), args.stats_out)
    else:
        _emit(report.to_dict())
    if args.hist_out:
        if report.standardized_histogram is None:
            raise DomainError("cosines have zero spread; there is no standardized histogram")
        write_csv(args.hist_out, ("bin_lo", "bin_hi", "count"),
                  report.standardized_histogram.to_rows())
    if args.normal_out or args.plot:
        rows = compare_to_normal(report)
        if args.normal_out:
            write_csv(args.normal_out, ("z", "empirical", "normal"), rows)
        if args.plot:
            from .plotting import plot_normal_comparison

            plot_normal_comparison(rows, args.plot, report.source_label)


def cmd_benchmark(args):
    from .bench import BenchGrid, run_benchmark, write_benchmark

    try:
        grid = BenchGrid(
            dims=args.dims,
            counts=args.counts,
            methods=args.methods,
            seeds=args.seeds,
            energy_cfg=_energy_cfg(args),
            oversample=args.oversample,
        )
        if not grid.cells():
            raise DomainError("no feasible cells: orthonormal alone needs some count <= dim")
    except DomainError as exc:
        raise UsageError(str(exc)) from None
    result = run_benchmark(grid, args.threads)
    best_path = write_benchmark(result, args.out)
    dims, table = result.best_table()
    _emit({
        "rows": args.out,
        "best": best_path,
        "best_table": {str(c): dict(zip(map(str, dims), vals)) for c, vals in table},
    })
    if args.plot:
        from .plotting import plot_benchmark

        plot_benchmark(result, args.plot)


def cmd_cap_profile(args):
    profile = cap_area_profile(args.dim, default_h_grid(args.points))
    write_csv(args.out, ("h", "fraction"), profile)
    if args.plot:
        from .plotting import plot_cap_profile

        plot_cap_profile(profile, args.dim, args.plot)


# -- parser ---------------------------------------------------------------------


def _add_energy_flags(p):
    g = p.add_argument_group("energy minimisation")
    g.add_argument("--p", type=_positive_float, default=8.0, help="energy exponent (default 8)")
    g.add_argument("--steps", type=_int_min(0), default=2000)
    g.add_argument("--step-size", type=_positive_float, default=0.01)
    g.add_argument("--record-every", type=_int_min(1), default=10)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="aovs", description="Bounds, generators and statistics for almost-orthogonal vectors."
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    bounds = sub.add_parser("bounds", help="theoretical bounds")
    bsub = bounds.add_subparsers(dest="bound", required=True)

    cap = bsub.add_parser("cap", help="area-based upper bound on eps-almost orthogonal directions")
    cap.add_argument("--dim", type=_int_min(2), required=True)
    cap.add_argument("--eps", type=_half_open_unit, required=True)
    cap.set_defaults(func=cmd_bounds_cap)

    jl = bsub.add_parser("jl", help="Johnson-Lindenstrauss calculus")
    jsub = jl.add_subparsers(dest="jl", required=True)
    constants = list(JL_CONSTANTS)

    mindim = jsub.add_parser("mindim", help="smallest target dimension for k points")
    mindim.add_argument("--k", type=_int_min(2), required=True)
    mindim.add_argument("--eps", type=_open_unit, required=True)
    mindim.add_argument("--constant", choices=constants, default="8")
    mindim.set_defaults(func=cmd_jl_mindim)

    distort = jsub.add_parser("distort", help="cosine drift of orthonormal vectors")
    distort.add_argument("--eps", type=_open_unit, required=True)
    distort.set_defaults(func=cmd_jl_distort)

    count = jsub.add_parser("count", help="guaranteed number of t-almost orthogonal vectors")
    count.add_argument("--dim", type=_int_min(1), required=True)
    count.add_argument("--threshold", type=_open_unit, required=True)
    how = count.add_mutually_exclusive_group()
    how.add_argument("--variant", choices=COUNT_VARIANTS, default="printed")
    how.add_argument("--via-paper-chain", action="store_true",
                     help="shorthand for --variant paper-chain (eps = threshold / 2)")
    count.add_argument("--constant", choices=constants, default="8")
    count.set_defaults(func=cmd_jl_count)

    cross = jsub.add_parser("crossover", help="first dimension where the count bound exceeds n")
    cross.add_argument("--threshold", type=_open_unit, required=True)
    cross.add_argument("--variant", choices=COUNT_VARIANTS + ("all",), default="all")
    cross.add_argument("--constant", choices=constants, default="8")
    cross.set_defaults(func=cmd_jl_crossover)

    gen = sub.add_parser("generate", help="generate a vector set")
    gen.add_argument("--method", choices=METHODS, required=True)
    gen.add_argument("--dim", type=_int_min(2), required=True)
    gen.add_argument("--count", type=_int_min(2), required=True)
    gen.add_argument("--seed", type=_seed, default=0)
    gen.add_argument("--oversample", type=_float, default=DEFAULT_OVERSAMPLE)
    gen.add_argument("--prune", action=argparse.BooleanOptionalAction, default=None,
                     help="oversample and prune (default: on for random and projection)")
    _add_energy_flags(gen)
    gen.add_argument("--out", required=True, help="vector file (.csv or .f32)")
    gen.add_argument("--format", choices=FORMATS)
    gen.add_argument("--report", required=True, help="JSON report path")
    gen.add_argument("--plot", metavar="PNG", help="also render the max|cos| trajectory")
    gen.set_defaults(func=cmd_generate)

    an = sub.add_parser("analyze", help="cosine and norm statistics of an embedding matrix")
    an.add_argument("--in", dest="input", required=True)
    an.add_argument("--format", choices=FORMATS)
    an.add_argument("--pair-budget", type=_int_min(0), default=2_000_000,
                    help="pairs to sample; 0 uses every pair")
    an.add_argument("--seed", type=_seed, default=0)
    an.add_argument("--label", default="")
    an.add_argument("--stats-out", help="JSON report path (default: stdout)")
    an.add_argument("--hist-out", help="standardized histogram CSV")
    an.add_argument("--normal-out", help="CSV z,empirical,normal")
    an.add_argument("--plot", metavar="PNG", help="also render the comparison with N(0, 1)")
    an.set_defaults(func=cmd_analyze)

    bench = sub.add_parser("benchmark", help="sweep methods over a (dim, count) grid")
    bench.add_argument("--dims", type=_int_list(2), required=True)
    bench.add_argument("--counts", type=_int_list(2), required=True)
    bench.add_argument("--methods", type=_method_list, default=list(METHODS))
    bench.add_argument("--seeds", type=_seed_list, default=[0, 1, 2])
    bench.add_argument("--oversample", type=_float, default=DEFAULT_OVERSAMPLE)
    bench.add_argument("--threads", type=_int_min(1), default=None,
                       help="worker threads (default: AOVS_THREADS or one per CPU)")
    _add_energy_flags(bench)
    bench.add_argument("--out", required=True, help="per-cell CSV; the best table goes to *-best.csv")
    bench.add_argument("--plot", metavar="PNG", help="also render best max|cos| per method")
    bench.set_defaults(func=cmd_benchmark)

    prof = sub.add_parser("cap-profile", help="cap area fraction against cap height")
    prof.add_argument("--dim", type=_int_min(2), required=True)
    prof.add_argument("--points", type=_int_min(2), default=401)
    prof.add_argument("--out", required=True)
    prof.add_argument("--plot", metavar="PNG")
    prof.set_defaults(func=cmd_cap_profile)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except (AovsError, OSError) as exc:
        print(f"aovs: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
