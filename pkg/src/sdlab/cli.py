"""Command-line interface.

One verb per library operation:

    slope {cf | convergents | witness | gap | exponent}
    solve
    cohomology
    counterexample {build | verify | solve | blowup}
    kunneth

Reports go to standard output: JSON by default (sorted keys, every
non-integer number a decimal string), CSV via ``--format csv`` for the
tabular commands.  Identical argv, config and input files produce
byte-identical output; wall-clock duration is printed to stderr only.
Exit status: 0 on success, 1 on a domain error (the error name and witness
data are emitted as JSON), 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction

from . import plots
from .cohomology import solve_primitive, truncated_cohomology
from .config import RunConfig, resolve_config
from .counterexample import (
    FamilySpec,
    blowup_profile,
    build_family,
    family_from_json,
    family_to_json,
    solve_family,
    verify_smoothness,
)
from .diophantine import (
    ApproximationWitness,
    NotFound,
    SmallDivisorGap,
    cf_expand,
    convergents,
    estimate_exponent,
    find_family_pairs,
    find_witness_definition,
    gap,
    parse_slope,
)
from .errors import SmallDivisorError
from .exact import Interval, render_fraction
from .fourier import series_from_json
from .kunneth import ProductFoliation, kunneth_check
from .report import Report, emit


def _common_flags() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", type=int, help="significant digits for decimal output")
    common.add_argument("--format", choices=("json", "csv"), dest="fmt", help="report format")
    common.add_argument("--config", help="path to a 'key = value' config file")
    common.add_argument("--out", help="also write the report (or built artifact) to this path")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_flags()
    parser = argparse.ArgumentParser(prog="sdlab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    slope = sub.add_parser("slope", help="Diophantine analysis of a slope")
    slope_sub = slope.add_subparsers(dest="subcommand", required=True)

    p_cf = slope_sub.add_parser("cf", parents=[common], help="continued-fraction digits")
    p_cf.add_argument("--slope", required=True)
    p_cf.add_argument("--depth", type=int)

    p_conv = slope_sub.add_parser("convergents", parents=[common], help="certified convergents")
    p_conv.add_argument("--slope", required=True)
    p_conv.add_argument("--depth", type=int)

    p_wit = slope_sub.add_parser("witness", parents=[common], help="approximation witnesses")
    p_wit.add_argument("--slope", required=True)
    p_wit.add_argument("--p", type=int, required=True, help="exponent (family form: search p = 2..p)")
    p_wit.add_argument("--form", choices=("definition", "family"), default="definition")
    p_wit.add_argument("--depth", type=int)

    p_gap = slope_sub.add_parser("gap", parents=[common], help="small-divisor gap scan")
    p_gap.add_argument("--slope", required=True)
    p_gap.add_argument("--radius", required=True, help="radius or comma list of radii")
    p_gap.add_argument("--method", choices=("auto", "scan", "convergents"), default="auto")
    p_gap.add_argument("--plot", help="render a log-log gap figure to this path")

    p_exp = slope_sub.add_parser("exponent", parents=[common], help="gap decay exponent fit")
    p_exp.add_argument("--slope", required=True)
    p_exp.add_argument("--radii", required=True, help="comma list of increasing radii")
    p_exp.add_argument("--threshold", type=float)
    p_exp.add_argument("--plot", help="render the fit figure to this path")

    p_solve = sub.add_parser("solve", parents=[common], help="solve the cohomological equation")
    p_solve.add_argument("--slope", required=True)
    p_solve.add_argument("--series", required=True, help="path to a series JSON file")

    p_coh = sub.add_parser("cohomology", parents=[common], help="truncated cohomology report")
    p_coh.add_argument("--slope", required=True)
    p_coh.add_argument("--radius", type=int, required=True)
    p_coh.add_argument("--threshold", type=float)

    cex = sub.add_parser("counterexample", help="the unbounded-primitives family")
    cex_sub = cex.add_subparsers(dest="subcommand", required=True)

    p_build = cex_sub.add_parser("build", parents=[common], help="build and certify a family")
    p_build.add_argument("--slope", required=True)
    p_build.add_argument("--pmax", type=int, required=True)
    p_build.add_argument("--depth", type=int)

    p_verify = cex_sub.add_parser("verify", parents=[common], help="smoothness certificate")
    p_verify.add_argument("--family", required=True, help="path to a family JSON file")
    p_verify.add_argument("--amax", type=int, default=2)
    p_verify.add_argument("--jmax", type=int, default=3)
    p_verify.add_argument("--interval", default="-1,1", help="time window 'lo,hi'")
    p_verify.add_argument("--samples", type=int)

    p_fsolve = cex_sub.add_parser("solve", parents=[common], help="primitive at a time slice")
    p_fsolve.add_argument("--family", required=True)
    p_fsolve.add_argument("--t", help="rational time, e.g. 1/2 or 0.5")
    p_fsolve.add_argument("--grid", help="trajectory sweep 'lo,hi,count'")
    p_fsolve.add_argument("--plot", help="render trajectories to this path (grid mode)")

    p_blow = cex_sub.add_parser("blowup", parents=[common], help="per-exponent suprema")
    p_blow.add_argument("--family", required=True)
    p_blow.add_argument("--interval", default="0,1", help="time window 'lo,hi'")
    p_blow.add_argument("--plot", help="render the blow-up figure to this path")

    p_kun = sub.add_parser("kunneth", parents=[common], help="product dimension identity")
    p_kun.add_argument(
        "--slope", action="append", required=True, help="factor slope (repeat per factor)"
    )
    p_kun.add_argument("--radius", type=int, required=True)
    p_kun.add_argument("--threshold", type=float)

    return parser


# ---------------------------------------------------------------------------
# payload builders


def _iv(interval: Interval, digits: int) -> dict:
    return {"lo": render_fraction(interval.lo, digits), "hi": render_fraction(interval.hi, digits)}


def _gap_dict(g: SmallDivisorGap, digits: int) -> dict:
    return {
        "radius": g.radius,
        "gap": _iv(g.gap, digits),
        "argmin": {"m": g.argmin[0], "n": g.argmin[1]},
        "method": g.method,
    }


def _witness_dict(w: ApproximationWitness, digits: int) -> dict:
    return {
        "p": w.p,
        "m": str(w.m),
        "n": str(w.n),
        "level": w.level,
        "bound_form": w.bound_form,
        "divisor": _iv(w.divisor, digits),
        "bound": render_fraction(w.bound, digits),
    }


def _parse_radii(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip()]


def _parse_interval(text: str) -> tuple[Fraction, Fraction]:
    lo, _, hi = text.partition(",")
    return (Fraction(lo), Fraction(hi))


def _handle_slope_cf(args, cfg: RunConfig) -> Report:
    slope = parse_slope(args.slope, default_cap=cfg.cap)
    depth = args.depth or cfg.depth
    digits = cf_expand(slope, depth)
    return Report(
        command="slope cf",
        config=cfg.as_dict(),
        payload={"slope": slope.literal(), "depth": depth, "partial_quotients": digits},
    )


def _handle_slope_convergents(args, cfg: RunConfig) -> Report:
    slope = parse_slope(args.slope, default_cap=cfg.cap)
    depth = args.depth or cfg.depth
    convs = convergents(slope, depth)
    rows = [
        {"level": c.level, "m": str(c.m), "n": str(c.n), "error": _iv(c.error, cfg.precision)}
        for c in convs
    ]
    return Report(
        command="slope convergents",
        config=cfg.as_dict(),
        payload={"slope": slope.literal(), "depth": depth, "convergents": rows},
        table=(
            ("level", "m", "n", "error_lo", "error_hi"),
            [
                (c.level, c.m, c.n, render_fraction(c.error.lo, cfg.precision), render_fraction(c.error.hi, cfg.precision))
                for c in convs
            ],
        ),
    )


def _handle_slope_witness(args, cfg: RunConfig) -> Report:
    slope = parse_slope(args.slope, default_cap=cfg.cap)
    depth = args.depth or cfg.depth
    payload: dict = {"slope": slope.literal(), "p": args.p, "form": args.form}
    table = None
    if args.form == "definition":
        result = find_witness_definition(slope, args.p, depth=depth)
        if isinstance(result, NotFound):
            payload["found"] = False
            payload["depth_searched"] = result.depth_searched
        else:
            payload["found"] = True
            payload["witness"] = _witness_dict(result, cfg.precision)
    else:
        pairs = find_family_pairs(slope, args.p, depth=depth)
        payload["found"] = True
        payload["pairs"] = [_witness_dict(w, cfg.precision) for w in pairs]
        table = (
            ("p", "m", "n", "level", "divisor_lo", "divisor_hi", "bound"),
            [
                (
                    w.p,
                    w.m,
                    w.n,
                    w.level,
                    render_fraction(w.divisor.lo, cfg.precision),
                    render_fraction(w.divisor.hi, cfg.precision),
                    render_fraction(w.bound, cfg.precision),
                )
                for w in pairs
            ],
        )
    return Report(command="slope witness", config=cfg.as_dict(), payload=payload, table=table)


def _handle_slope_gap(args, cfg: RunConfig) -> Report:
    slope = parse_slope(args.slope, default_cap=cfg.cap)
    radii = _parse_radii(args.radius)
    gaps = [gap(slope, r, method=args.method) for r in radii]
    payload = {
        "slope": slope.literal(),
        "gaps": [_gap_dict(g, cfg.precision) for g in gaps],
    }
    table = (
        ("radius", "gap_lo", "gap_hi", "argmin_m", "argmin_n", "method"),
        [
            (
                g.radius,
                render_fraction(g.gap.lo, cfg.precision),
                render_fraction(g.gap.hi, cfg.precision),
                g.argmin[0],
                g.argmin[1],
                g.method,
            )
            for g in gaps
        ],
    )
    return Report(command="slope gap", config=cfg.as_dict(), payload=payload, table=table)


def _handle_slope_exponent(args, cfg: RunConfig) -> Report:
    slope = parse_slope(args.slope, default_cap=cfg.cap)
    radii = _parse_radii(args.radii)
    fit = estimate_exponent(slope, radii, threshold=args.threshold or cfg.threshold)
    payload = {
        "slope": slope.literal(),
        "radii": list(fit.radii),
        "gaps": [_gap_dict(g, cfg.precision) for g in fit.gaps],
        "tau": repr(fit.tau),
        "residuals": [repr(r) for r in fit.residuals],
        "two_point_slopes": [repr(s) for s in fit.two_point_slopes],
        "superpolynomial": fit.superpolynomial,
        "threshold": repr(fit.threshold),
    }
    table = (
        ("radius", "gap_lo", "gap_hi", "two_point_slope"),
        [
            (
                g.radius,
                render_fraction(g.gap.lo, cfg.precision),
                render_fraction(g.gap.hi, cfg.precision),
                repr(fit.two_point_slopes[i - 1]) if i else "",
            )
            for i, g in enumerate(fit.gaps)
        ],
    )
    return Report(command="slope exponent", config=cfg.as_dict(), payload=payload, table=table)


def _handle_solve(args, cfg: RunConfig) -> Report:
    slope = parse_slope(args.slope, default_cap=cfg.cap)
    with open(args.series, encoding="utf-8") as fh:
        f = series_from_json(fh.read())
    solution = solve_primitive(f, slope, digits=cfg.precision)
    payload = {
        "slope": slope.literal(),
        "min_divisor": _iv(solution.min_divisor_used, cfg.precision),
        "amplification": solution.amplification,
        "solution": solution.g.to_json_dict(cfg.precision),
    }
    return Report(command="solve", config=cfg.as_dict(), payload=payload)


def _handle_cohomology(args, cfg: RunConfig) -> Report:
    slope = parse_slope(args.slope, default_cap=cfg.cap)
    rep = truncated_cohomology(slope, args.radius, threshold=args.threshold or cfg.threshold)
    payload = {
        "slope": rep.slope_literal,
        "radius": rep.radius,
        "dim_h0": rep.dim_h0,
        "dim_h1": rep.dim_h1,
        "gap": _gap_dict(rep.gap, cfg.precision),
        "hausdorff_flag": rep.hausdorff_flag,
    }
    table = (
        ("slope", "radius", "dim_h0", "dim_h1", "gap_lo", "gap_hi", "hausdorff_flag"),
        [
            (
                rep.slope_literal,
                rep.radius,
                rep.dim_h0,
                rep.dim_h1,
                render_fraction(rep.gap.gap.lo, cfg.precision),
                render_fraction(rep.gap.gap.hi, cfg.precision),
                rep.hausdorff_flag,
            )
        ],
    )
    return Report(command="cohomology", config=cfg.as_dict(), payload=payload, table=table)


def _handle_cex_build(args, cfg: RunConfig) -> Report:
    slope = parse_slope(args.slope, default_cap=cfg.cap)
    spec = build_family(slope, args.pmax, depth=args.depth or cfg.depth)
    payload = {
        "family": spec.to_json_dict(),
        "pairs": [_witness_dict(w, cfg.precision) for w in spec.pairs],
    }
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(family_to_json(spec) + "\n")
        payload["written"] = args.out
    return Report(command="counterexample build", config=cfg.as_dict(), payload=payload)


def _load_family(path: str) -> FamilySpec:
    with open(path, encoding="utf-8") as fh:
        return family_from_json(fh.read())


def _handle_cex_verify(args, cfg: RunConfig) -> Report:
    spec = _load_family(args.family)
    lo, hi = _parse_interval(args.interval)
    cert = verify_smoothness(
        spec,
        a_max=args.amax,
        j_max=args.jmax,
        interval=(lo, hi),
        samples=args.samples or cfg.samples,
    )
    entries = [
        {
            "a": e.a,
            "j": e.j,
            "sampled_sup": render_fraction(e.sampled_sup, cfg.precision),
            "tail_bound": render_fraction(e.tail_bound, cfg.precision),
            "constant": render_fraction(e.constant, cfg.precision),
        }
        for e in cert.entries
    ]
    payload = {
        "family": spec.to_json_dict(),
        "interval": [str(lo), str(hi)],
        "samples": cert.samples,
        "entries": entries,
        "rho_derivative_sup_bounds": cert.rho_sup_bounds,
        "pass": True,
    }
    table = (
        ("a", "j", "sampled_sup", "tail_bound", "constant"),
        [(e["a"], e["j"], e["sampled_sup"], e["tail_bound"], e["constant"]) for e in entries],
    )
    return Report(command="counterexample verify", config=cfg.as_dict(), payload=payload, table=table)


_NORMALIZATION_NOTE = (
    "primitive coefficients follow the bare-divisor convention g = f/(m + alpha*n); "
    "dividing by 2*pi gives the derivative-normalized variant g = f/(2*pi*i*(m + alpha*n))"
)


def _handle_cex_solve(args, cfg: RunConfig) -> Report:
    spec = _load_family(args.family)
    if (args.t is None) == (args.grid is None):
        raise ValueError("pass exactly one of --t or --grid")
    if args.t is not None:
        t = Fraction(args.t)
        sample = solve_family(spec, t, digits=cfg.precision)
        coeffs = sample.series.to_json_dict(cfg.precision)["coeffs"]
        payload = {
            "family": spec.to_json_dict(),
            "t": str(t),
            "active_p": sample.active_p,
            "coefficients": coeffs,
            "normalization": _NORMALIZATION_NOTE,
        }
        return Report(command="counterexample solve", config=cfg.as_dict(), payload=payload)
    lo_s, hi_s, count_s = args.grid.split(",")
    lo, hi, count = Fraction(lo_s), Fraction(hi_s), int(count_s)
    if count < 2:
        raise ValueError("grid needs at least two samples")
    rows = []
    for k in range(count):
        t = lo + (hi - lo) * k / (count - 1)
        sample = solve_family(spec, t, digits=cfg.precision)
        values = {w.p: (Fraction(0), Fraction(0)) for w in spec.pairs}
        for (m, n), (re, im) in sample.series.coeffs.items():
            for w in spec.pairs:
                if (w.m, w.n) == (m, n):
                    values[w.p] = (re, im)
        for w in spec.pairs:
            re, im = values[w.p]
            rows.append(
                {
                    "t": render_fraction(t, cfg.precision),
                    "p": w.p,
                    "re": render_fraction(re, cfg.precision),
                    "im": render_fraction(im, cfg.precision),
                }
            )
    payload = {
        "family": spec.to_json_dict(),
        "trajectory": rows,
        "normalization": _NORMALIZATION_NOTE,
    }
    table = (("t", "p", "re", "im"), [(r["t"], r["p"], r["re"], r["im"]) for r in rows])
    return Report(command="counterexample solve", config=cfg.as_dict(), payload=payload, table=table)


def _handle_cex_blowup(args, cfg: RunConfig) -> Report:
    spec = _load_family(args.family)
    lo, hi = _parse_interval(args.interval)
    rep = blowup_profile(spec, (lo, hi), digits=cfg.precision)
    entries = [
        {
            "p": e.p,
            "m": str(e.m),
            "n": str(e.n),
            "weight": str(e.weight),
            "sup": render_fraction(e.sup, cfg.precision),
            "sup_is_weight": e.sup_is_weight,
        }
        for e in rep.entries
    ]
    payload = {
        "family": spec.to_json_dict(),
        "interval": [str(lo), str(hi)],
        "suprema": entries,
        "contains_zero": rep.contains_zero,
        "strictly_increasing": rep.strictly_increasing,
        "unbounded_verdict": rep.unbounded_verdict,
        "normalization": _NORMALIZATION_NOTE,
    }
    table = (
        ("p", "m", "n", "weight", "sup", "sup_is_weight"),
        [(e["p"], e["m"], e["n"], e["weight"], e["sup"], e["sup_is_weight"]) for e in entries],
    )
    return Report(command="counterexample blowup", config=cfg.as_dict(), payload=payload, table=table)


def _handle_kunneth(args, cfg: RunConfig) -> Report:
    slopes = tuple(parse_slope(s, default_cap=cfg.cap) for s in args.slope)
    product = ProductFoliation(slopes)
    rep = kunneth_check(product, args.radius, threshold=args.threshold or cfg.threshold)
    payload = {
        "radius": rep.radius,
        "dims": list(rep.dims),
        "tensor": list(rep.tensor_prediction),
        "match": rep.match,
        "warnings": list(rep.warnings),
        "factor_gaps": [_gap_dict(r.gap, cfg.precision) for r in rep.factor_reports],
    }
    table = (
        ("radius", "dims", "tensor", "match", "warnings"),
        [
            (
                rep.radius,
                ";".join(map(str, rep.dims)),
                ";".join(map(str, rep.tensor_prediction)),
                rep.match,
                len(rep.warnings),
            )
        ],
    )
    return Report(command="kunneth", config=cfg.as_dict(), payload=payload, table=table)


_HANDLERS = {
    ("slope", "cf"): _handle_slope_cf,
    ("slope", "convergents"): _handle_slope_convergents,
    ("slope", "witness"): _handle_slope_witness,
    ("slope", "gap"): _handle_slope_gap,
    ("slope", "exponent"): _handle_slope_exponent,
    ("solve", None): _handle_solve,
    ("cohomology", None): _handle_cohomology,
    ("counterexample", "build"): _handle_cex_build,
    ("counterexample", "verify"): _handle_cex_verify,
    ("counterexample", "solve"): _handle_cex_solve,
    ("counterexample", "blowup"): _handle_cex_blowup,
    ("kunneth", None): _handle_kunneth,
}

_PLOTTERS = {
    ("slope", "gap"): plots.render_gap_figure,
    ("slope", "exponent"): plots.render_exponent_figure,
    ("counterexample", "blowup"): plots.render_blowup_figure,
    ("counterexample", "solve"): plots.render_trajectory_figure,
}


def run(argv: list[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    started = time.monotonic()
    try:
        cfg = resolve_config(
            config_path=getattr(args, "config", None),
            cli_overrides={
                "precision": getattr(args, "precision", None),
                "format": getattr(args, "fmt", None),
            },
        )
        handler = _HANDLERS[(args.command, getattr(args, "subcommand", None))]
        report = handler(args, cfg)
    except SmallDivisorError as err:
        sys.stdout.write(json.dumps(err.payload(), sort_keys=True, indent=2) + "\n")
        return 1
    except (ValueError, OSError, KeyError) as err:
        sys.stderr.write(f"error: {err}\n")
        return 2
    rendered = emit(report, cfg.format)
    sys.stdout.buffer.write(rendered)
    sys.stdout.flush()
    out_path = getattr(args, "out", None)
    if out_path and (args.command, getattr(args, "subcommand", None)) != ("counterexample", "build"):
        with open(out_path, "wb") as fh:
            fh.write(rendered)
    plot_path = getattr(args, "plot", None)
    if plot_path:
        plotter = _PLOTTERS.get((args.command, getattr(args, "subcommand", None)))
        if plotter is None:
            sys.stderr.write("error: this command has no figure form\n")
            return 2
        if getattr(args, "grid", "x") is None:
            sys.stderr.write("error: trajectory figures need --grid\n")
            return 2
        plotter(report.payload, plot_path)
    sys.stderr.write(f"# completed in {time.monotonic() - started:.3f}s\n")
    return 0


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
