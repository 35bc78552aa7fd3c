"""Command line front end: ``provar <subcommand>``.

Subcommands: sample, normalize, validate, approx, covariance, persist,
fit, pipeline.  Exit codes: 0 success, 1 runtime error (a documented
library failure, reported verbatim), 2 flag validation error.

Every subcommand is a pure function of (input files, flags, seed):
rerunning with identical inputs produces byte-identical outputs.  The
seed defaults to the PROVAR_SEED environment variable, then 0.
"""

import argparse
import json
import os
import sys

import numpy as np

from . import _svg
from .errors import CliUsageError, ProvarError
from .fit import fit_implicit, fit_to_json, select_degree
from .measure import (
    AnalyticDensity,
    Box,
    QuadratureSpec,
    normalize,
    pair_from_json,
    pair_to_json,
    validate_density,
)
from .poly import (
    SeriesSpec,
    bernstein_approx,
    format_poly,
    parse_poly,
    truncated_series,
)
from .stats import covariance, covariance_to_json
from .topology import (
    DEFAULT_SIMPLEX_BUDGET,
    build_rips,
    compute_persistence,
    diagram_to_json,
    persistent_betti_summary,
)
from .variety import (
    ThickenedDensity,
    builtin_variety,
    load_cloud,
    sample_parametric,
    sample_thickened,
    save_cloud,
)

__all__ = ["main"]


def _default_seed():
    env = os.environ.get("PROVAR_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise CliUsageError(
            "PROVAR_SEED must be an integer, got %r" % env
        ) from None


def _parse_box(text):
    """Parse --box 'lo1,hi1;lo2,hi2;...' into a Box."""
    intervals = []
    for part in text.split(";"):
        pieces = part.split(",")
        if len(pieces) != 2:
            raise CliUsageError(
                "--box: each interval needs 'lo,hi', got %r" % part
            )
        try:
            lo, hi = float(pieces[0]), float(pieces[1])
        except ValueError:
            raise CliUsageError("--box: unparsable number in %r" % part) from None
        if not lo < hi:
            raise CliUsageError(
                "--box: requires lo < hi per axis, got [%g, %g]" % (lo, hi)
            )
        intervals.append((lo, hi))
    return Box(tuple(a for a, _ in intervals), tuple(b for _, b in intervals))


def _parse_quad(text, seed):
    """Parse --quad 'gl:<m>' or 'mc:<N>'."""
    if text is None:
        return None
    kind, _, arg = text.partition(":")
    if kind == "gl":
        try:
            m = int(arg)
        except ValueError:
            raise CliUsageError("--quad gl:<m> needs an integer, got %r" % arg) from None
        if m < 1:
            raise CliUsageError("--quad gl:<m> requires m >= 1, got %d" % m)
        return QuadratureSpec.gauss(m)
    if kind == "mc":
        try:
            count = int(arg)
        except ValueError:
            raise CliUsageError("--quad mc:<N> needs an integer, got %r" % arg) from None
        if count < 1:
            raise CliUsageError("--quad mc:<N> requires N >= 1, got %d" % count)
        return QuadratureSpec.monte_carlo(count, seed=seed)
    raise CliUsageError("--quad must be gl:<m> or mc:<N>, got %r" % text)


def _parse_density(text):
    """Parse --density const:c | exponential:lam | gaussian:m,s | poly:path."""
    kind, _, arg = text.partition(":")
    try:
        if kind == "const":
            return AnalyticDensity("const", value=float(arg))
        if kind == "exponential":
            return AnalyticDensity("exponential", lam=float(arg))
        if kind == "gaussian":
            m, s = arg.split(",")
            return AnalyticDensity("gaussian", mean=float(m), sigma=float(s))
        if kind == "poly":
            with open(arg) as fh:
                return parse_poly(fh.read())
    except (ValueError, OSError, ProvarError) as exc:
        raise CliUsageError("--density: %s" % exc) from None
    raise CliUsageError(
        "--density must be const:c, exponential:lam, gaussian:mean,sigma "
        "or poly:path, got %r" % text
    )


def _build_variety(args):
    name = args.variety
    if name == "torus":
        if not (args.R > args.r > 0):
            raise CliUsageError(
                "--R/--r: torus requires R > r > 0, got R=%g, r=%g"
                % (args.R, args.r)
            )
        return builtin_variety("torus", R=args.R, r=args.r)
    if name == "sphere":
        if not args.r > 0:
            raise CliUsageError("--r: sphere requires r > 0, got %g" % args.r)
        return builtin_variety("sphere", r=args.r)
    if name == "elliptic":
        return builtin_variety("elliptic")
    raise CliUsageError("--variety must be torus, sphere or elliptic, got %r" % name)


def _write(path, text, verbose):
    with open(path, "w") as fh:
        fh.write(text)
    if verbose:
        print("wrote %s" % path)


def _sample_cloud(args, seed):
    variety = _build_variety(args)
    if args.n < 1:
        raise CliUsageError("--n must be >= 1, got %d" % args.n)
    if args.mode == "parametric":
        return sample_parametric(variety, args.n, seed=seed)
    sigma = args.sigma
    if sigma is not None and not sigma > 0:
        raise CliUsageError("--sigma must be > 0, got %g" % sigma)
    density = ThickenedDensity(variety, sigma)
    return sample_thickened(density, args.n, seed=seed)


# ----------------------------------------------------------------------
# subcommand implementations


def _cmd_sample(args):
    seed = args.seed if args.seed is not None else _default_seed()
    cloud = _sample_cloud(args, seed)
    save_cloud(cloud, args.out)
    if args.svg:
        _write(args.svg, _svg.svg_cloud(cloud.points,
                                        title="%s sample" % args.variety),
               args.verbose)
    if args.verbose:
        print("sampled %d points from %s" % (cloud.n, args.variety))
    return 0


def _cmd_normalize(args):
    seed = args.seed if args.seed is not None else _default_seed()
    density = _parse_density(args.density)
    box = _parse_box(args.box)
    spec = _parse_quad(args.quad, seed)
    pair = normalize(density, box, spec)
    text = pair_to_json(pair)
    if args.out:
        _write(args.out, text, args.verbose)
    print("omega = %r" % pair.omega)
    print("normalizer = %r" % pair.normalizer)
    return 0


def _cmd_validate(args):
    seed = args.seed if args.seed is not None else _default_seed()
    with open(args.pair) as fh:
        pair = pair_from_json(fh.read())
    spec = _parse_quad(args.quad, seed)
    if args.grid < 2:
        raise CliUsageError("--grid must be >= 2, got %d" % args.grid)
    report = validate_density(pair, spec, grid_per_axis=args.grid)
    text = json.dumps(report.to_dict(), sort_keys=True, indent=2) + "\n"
    if args.out:
        _write(args.out, text, args.verbose)
    if report.passed:
        print("valid density: min %r, re-integral %r"
              % (report.min_density, report.reintegral))
    else:
        print("INVALID density: failed %s (min %r, re-integral %r)"
              % (report.failed_check, report.min_density, report.reintegral))
    return 0


def _cmd_approx(args):
    if args.family:
        if args.order is None and args.family != "explicit":
            raise CliUsageError("--order is required for --family %s" % args.family)
        if args.family == "exponential":
            if args.lam is None:
                raise CliUsageError("--lam is required for the exponential family")
            spec = SeriesSpec.exponential(args.lam, args.order)
        elif args.family == "gaussian":
            if args.sigma is None:
                raise CliUsageError("--sigma is required for the gaussian family")
            spec = SeriesSpec.gaussian(args.mean, args.sigma, args.order)
        elif args.family == "explicit":
            if not args.coeffs:
                raise CliUsageError("--coeffs is required for the explicit family")
            try:
                coeffs = [float(c) for c in args.coeffs.split(",")]
            except ValueError:
                raise CliUsageError("--coeffs: unparsable number in %r"
                                    % args.coeffs) from None
            spec = SeriesSpec.explicit(coeffs)
        elif args.family == "shifted-power":
            spec = SeriesSpec.shifted_power(args.shift, args.order)
        else:
            raise CliUsageError("unknown --family %r" % args.family)
        poly = truncated_series(spec)
    elif args.poly:
        if args.bernstein is None:
            raise CliUsageError("--poly input needs --bernstein <N>")
        if args.bernstein < 1:
            raise CliUsageError("--bernstein must be >= 1, got %d" % args.bernstein)
        with open(args.poly) as fh:
            base = parse_poly(fh.read())
        poly = bernstein_approx(base, args.bernstein, nvars=base.nvars)
    else:
        raise CliUsageError("approx needs either --family or --poly")
    _write(args.out, format_poly(poly), args.verbose)
    print("degree %d polynomial with %d terms" % (poly.total_degree(), len(poly)))
    return 0


def _cmd_covariance(args):
    cloud = load_cloud(args.infile)
    report = covariance(cloud)
    _write(args.out, covariance_to_json(report), args.verbose)
    if args.svg:
        _write(args.svg, _svg.svg_heatmap(report.covariance), args.verbose)
    print("n = %d, trace = %r" % (report.n, float(np.trace(report.covariance))))
    return 0


def _cmd_persist(args):
    cloud = load_cloud(args.infile)
    if args.maxdim not in (0, 1, 2):
        raise CliUsageError("--maxdim must be 0, 1 or 2, got %d" % args.maxdim)
    if args.maxscale is not None and not args.maxscale > 0:
        raise CliUsageError("--maxscale must be > 0, got %g" % args.maxscale)
    if args.budget < 1:
        raise CliUsageError("--budget must be >= 1, got %d" % args.budget)
    if not 0 < args.ratio < 1:
        raise CliUsageError("--ratio must be in (0, 1), got %g" % args.ratio)
    filt = build_rips(cloud, max_dim=args.maxdim, max_scale=args.maxscale,
                      budget=args.budget)
    diag = compute_persistence(filt)
    _write(args.out, diagram_to_json(diag), args.verbose)
    if args.svg:
        _write(args.svg, _svg.svg_diagram(diag), args.verbose)
    summary = persistent_betti_summary(diag, args.ratio)
    print("simplices: %d, max scale %r" % (filt.simplex_count, filt.max_scale))
    print("betti summary (ratio %g): %s" % (args.ratio, list(summary)))
    return 0


def _cmd_fit(args):
    cloud = load_cloud(args.infile)
    if args.maxdeg < 1:
        raise CliUsageError("--maxdeg must be >= 1, got %d" % args.maxdeg)
    if not args.threshold > 0:
        raise CliUsageError("--threshold must be > 0, got %g" % args.threshold)
    result = select_degree(cloud, args.maxdeg, args.threshold)
    _write(args.out, fit_to_json(result), args.verbose)
    if args.poly_out:
        _write(args.poly_out, format_poly(result.to_multipoly()), args.verbose)
    print("selected degree %d, residual_rms %r, converged %s"
          % (result.degree, result.residual_rms, result.converged))
    return 0


def _cmd_pipeline(args):
    seed = args.seed if args.seed is not None else _default_seed()
    outdir = args.outdir
    os.makedirs(outdir, exist_ok=True)
    cloud = _sample_cloud(args, seed)
    paths = {
        "cloud": os.path.join(outdir, "cloud.csv"),
        "cloud_svg": os.path.join(outdir, "cloud.svg"),
        "cov": os.path.join(outdir, "covariance.json"),
        "cov_svg": os.path.join(outdir, "covariance.svg"),
        "diagram": os.path.join(outdir, "diagram.json"),
        "diagram_svg": os.path.join(outdir, "diagram.svg"),
        "fit": os.path.join(outdir, "fit.json"),
        "fitted_poly": os.path.join(outdir, "fitted.poly"),
        "summary": os.path.join(outdir, "summary.json"),
    }
    save_cloud(cloud, paths["cloud"])
    _write(paths["cloud_svg"],
           _svg.svg_cloud(cloud.points, title="%s sample" % args.variety),
           args.verbose)

    report = covariance(cloud)
    _write(paths["cov"], covariance_to_json(report), args.verbose)
    _write(paths["cov_svg"], _svg.svg_heatmap(report.covariance), args.verbose)

    maxdim = args.maxdim if args.maxdim is not None else min(2, cloud.dim - 1)
    if maxdim not in (0, 1, 2):
        raise CliUsageError("--maxdim must be 0, 1 or 2, got %d" % maxdim)
    if not 0 < args.ratio < 1:
        raise CliUsageError("--ratio must be in (0, 1), got %g" % args.ratio)
    filt = build_rips(cloud, max_dim=maxdim, max_scale=args.maxscale,
                      budget=args.budget)
    diag = compute_persistence(filt)
    _write(paths["diagram"], diagram_to_json(diag), args.verbose)
    _write(paths["diagram_svg"], _svg.svg_diagram(diag), args.verbose)
    summary_betti = persistent_betti_summary(diag, args.ratio)

    if args.maxdeg < 1:
        raise CliUsageError("--maxdeg must be >= 1, got %d" % args.maxdeg)
    result = select_degree(cloud, args.maxdeg, args.threshold)
    _write(paths["fit"], fit_to_json(result), args.verbose)
    _write(paths["fitted_poly"], format_poly(result.to_multipoly()), args.verbose)

    summary = {
        "variety": args.variety,
        "mode": args.mode,
        "n": int(cloud.n),
        "seed": int(seed),
        "covariance_trace": float(np.trace(report.covariance)),
        "max_dim": int(maxdim),
        "max_scale": float(filt.max_scale),
        "simplex_count": int(filt.simplex_count),
        "persistence_ratio": float(args.ratio),
        "betti_summary": [int(v) for v in summary_betti],
        "selected_degree": int(result.degree),
        "fit_residual_rms": float(result.residual_rms),
        "fit_converged": bool(result.converged),
        "artifacts": sorted(os.path.basename(p) for p in paths.values()),
    }
    _write(paths["summary"], json.dumps(summary, sort_keys=True, indent=2) + "\n",
           args.verbose)
    print("pipeline complete: selected degree %d, betti summary %s"
          % (result.degree, list(summary_betti)))
    return 0


# ----------------------------------------------------------------------
# argument parsing


def _add_sampling_flags(p):
    p.add_argument("--variety", required=True,
                   choices=["torus", "sphere", "elliptic"],
                   help="builtin variety to sample")
    p.add_argument("--R", type=float, default=2.0,
                   help="torus center-circle radius; requires R > r > 0")
    p.add_argument("--r", type=float, default=0.5,
                   help="torus tube radius / sphere radius; must be > 0")
    p.add_argument("--mode", choices=["parametric", "thickened"],
                   default="parametric",
                   help="exact-on-variety parametric draw, or Gaussian-band rejection")
    p.add_argument("--sigma", type=float, default=None,
                   help="band width for thickened mode (> 0); "
                        "default 0.05 x box diagonal")
    p.add_argument("--n", type=int, required=True, help="number of points (>= 1)")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="provar",
        description="Probability densities on algebraic varieties: "
                    "sample, normalize, approximate, summarize, persist, fit.",
    )
    parser.add_argument("--seed", type=int, default=None,
                        help="RNG seed (u64); falls back to PROVAR_SEED, then 0")
    parser.add_argument("-v", "--verbose", action="store_true",
                        help="report each file as it is written")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", help="draw a point cloud from a builtin variety")
    _add_sampling_flags(p)
    p.add_argument("--out", required=True, help="output cloud CSV path")
    p.add_argument("--svg", default=None, help="optional cloud projection SVG")
    p.set_defaults(func=_cmd_sample)

    p = sub.add_parser("normalize", help="integrate a density and normalize it")
    p.add_argument("--density", required=True,
                   help="const:c | exponential:lam | gaussian:mean,sigma | poly:path")
    p.add_argument("--box", required=True,
                   help="integration box 'lo1,hi1;lo2,hi2;...' (lo < hi per axis)")
    p.add_argument("--quad", default=None,
                   help="gl:<m> (m >= 1 nodes/axis) or mc:<N> (N >= 1 samples); "
                        "default: degree-matched Gauss-Legendre for polynomials, "
                        "mc:1000000 otherwise")
    p.add_argument("--out", default=None, help="optional pair JSON path")
    p.set_defaults(func=_cmd_normalize)

    p = sub.add_parser("validate", help="check the probability axioms of a pair")
    p.add_argument("--pair", required=True, help="pair JSON from 'normalize'")
    p.add_argument("--grid", type=int, default=64,
                   help="grid points per axis for the nonnegativity scan (>= 2)")
    p.add_argument("--quad", default=None, help="override re-integration quadrature")
    p.add_argument("--out", default=None, help="optional report JSON path")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("approx",
                       help="truncated series or Bernstein approximation, "
                            "as polynomial text")
    p.add_argument("--family",
                   choices=["exponential", "gaussian", "explicit", "shifted-power"],
                   default=None, help="series family to truncate")
    p.add_argument("--order", type=int, default=None,
                   help="truncation order K >= 0")
    p.add_argument("--lam", type=float, default=None,
                   help="exponential rate (> 0)")
    p.add_argument("--mean", type=float, default=0.0, help="gaussian mean")
    p.add_argument("--sigma", type=float, default=None, help="gaussian sigma (> 0)")
    p.add_argument("--shift", type=float, default=0.0, help="shifted-power shift")
    p.add_argument("--coeffs", default=None,
                   help="comma-separated coefficients for --family explicit")
    p.add_argument("--poly", default=None,
                   help="polynomial text file to Bernstein-approximate")
    p.add_argument("--bernstein", type=int, default=None,
                   help="Bernstein degree N >= 1 (with --poly)")
    p.add_argument("--out", required=True, help="output polynomial text path")
    p.set_defaults(func=_cmd_approx)

    p = sub.add_parser("covariance", help="sample mean/covariance of a cloud")
    p.add_argument("--in", dest="infile", required=True, help="cloud CSV path")
    p.add_argument("--out", required=True, help="output report JSON path")
    p.add_argument("--svg", default=None, help="optional covariance heatmap SVG")
    p.set_defaults(func=_cmd_covariance)

    p = sub.add_parser("persist",
                       help="Vietoris-Rips persistent homology of a cloud")
    p.add_argument("--in", dest="infile", required=True, help="cloud CSV path")
    p.add_argument("--maxdim", type=int, default=1,
                   help="top homology dimension (0, 1 or 2)")
    p.add_argument("--maxscale", type=float, default=None,
                   help="largest edge length (> 0); default 0.4 x cloud diameter")
    p.add_argument("--budget", type=int, default=DEFAULT_SIMPLEX_BUDGET,
                   help="simplex count budget (>= 1)")
    p.add_argument("--ratio", type=float, default=0.2,
                   help="significance ratio for the Betti summary, in (0, 1)")
    p.add_argument("--out", required=True, help="output diagram JSON path")
    p.add_argument("--svg", default=None, help="optional diagram SVG")
    p.set_defaults(func=_cmd_persist)

    p = sub.add_parser("fit", help="implicit polynomial fit with degree sweep")
    p.add_argument("--in", dest="infile", required=True, help="cloud CSV path")
    p.add_argument("--maxdeg", type=int, default=5,
                   help="largest degree to sweep (>= 1)")
    p.add_argument("--threshold", type=float, default=1e-6,
                   help="residual threshold for accepting a degree (> 0)")
    p.add_argument("--out", required=True, help="output fit JSON path")
    p.add_argument("--poly-out", dest="poly_out", default=None,
                   help="optional fitted polynomial in text format")
    p.set_defaults(func=_cmd_fit)

    p = sub.add_parser("pipeline",
                       help="sample -> covariance -> persist -> fit, with summary")
    _add_sampling_flags(p)
    p.add_argument("--outdir", required=True, help="directory for all artifacts")
    p.add_argument("--maxdim", type=int, default=None,
                   help="top homology dimension; default min(2, cloud dim - 1)")
    p.add_argument("--maxscale", type=float, default=None,
                   help="largest edge length (> 0); default 0.4 x cloud diameter")
    p.add_argument("--budget", type=int, default=DEFAULT_SIMPLEX_BUDGET,
                   help="simplex count budget (>= 1)")
    p.add_argument("--ratio", type=float, default=0.2,
                   help="significance ratio for the Betti summary, in (0, 1)")
    p.add_argument("--maxdeg", type=int, default=5,
                   help="largest fit degree to sweep (>= 1)")
    p.add_argument("--threshold", type=float, default=1e-6,
                   help="fit residual threshold (> 0)")
    p.set_defaults(func=_cmd_pipeline)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliUsageError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    except ProvarError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1
    except OSError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
