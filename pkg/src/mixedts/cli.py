"""Command-line front end.

Subcommands: ``density``, ``fit``, ``garch``, ``ica``, ``sample``, ``moments``.
All data travels through CSV files; diagnostics go to stderr and the exit code
is zero only on success.  Every command is deterministic given its inputs,
flags and seed.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .charfn import CfGridSpec
from .density import DensityGrid, mixedts_density
from .errors import EmptyInput
from .estimation import (FitOptions, fit_mixedts, fit_vg, format_fit_report,
                         histogram_spec_for)
from .garch import format_garch_report, garch_mixedts_pipeline
from .ica import ica_pipeline, jarque_bera
from .moments import mixedts_moments
from .params import MixedTsParams, from_kv, validate
from .sampling import sample_mixedts

DEFAULT_SEED = 12345


def _fail(message: str, code: int = 1) -> int:
    print(f"error: {message}", file=sys.stderr)
    return code


def _is_number(token: str) -> bool:
    try:
        float(token)
        return True
    except ValueError:
        return False


def _read_rows(path):
    """CSV rows as token lists, skipping blanks, comments and a header row."""
    rows = []
    with open(path) as fh:
        for raw in fh:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            rows.append([tok.strip() for tok in line.split(",")])
    if rows and not all(_is_number(tok) for tok in rows[0]):
        rows = rows[1:]
    if not rows:
        raise EmptyInput(f"no observations in {path}")
    return rows


def _read_series(path) -> np.ndarray:
    """One observation per row; the last column is the value (date,value allowed)."""
    return np.array([float(row[-1]) for row in _read_rows(path)])


def _read_matrix(path) -> np.ndarray:
    """Numeric matrix, one time observation per row."""
    rows = _read_rows(path)
    width = len(rows[0])
    if any(len(row) != width for row in rows):
        raise EmptyInput(f"ragged rows in {path}")
    return np.array([[float(tok) for tok in row] for row in rows])


def _load_mixedts_params(path) -> MixedTsParams:
    with open(path) as fh:
        return validate(from_kv(fh.read(), cls=MixedTsParams))


def _grid_spec(args, p: MixedTsParams) -> CfGridSpec | None:
    if args.grid_umax is not None:
        return CfGridSpec(u_max=args.grid_umax, n=args.grid_n)
    return None


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_grid_csv(grid: DensityGrid, path: Path) -> None:
    grid.to_csv(path)
    print(f"wrote {path}")


def _fit_options(args) -> FitOptions:
    return FitOptions(alpha_range=(args.alpha_min, args.alpha_max), seed=args.seed)


def cmd_density(args) -> int:
    p = _load_mixedts_params(args.params)
    grid = mixedts_density(p, spec=_grid_spec(args, p), n=args.grid_n)
    _write_grid_csv(grid, _out_dir(args) / "density.csv")
    return 0


def cmd_moments(args) -> int:
    p = _load_mixedts_params(args.params)
    m = mixedts_moments(p)
    print(f"mean {m.mean!r}")
    print(f"variance {m.variance!r}")
    print(f"skewness {m.skewness!r}")
    print(f"kurtosis {m.kurtosis!r}")
    return 0


def cmd_fit(args) -> int:
    data = _read_series(args.data)
    if args.standardize:
        data = (data - data.mean()) / data.std()
    hist = histogram_spec_for(data, k=args.bins)
    options = _fit_options(args)
    fitter = fit_vg if args.vg else fit_mixedts
    result = fitter(data, hist=hist, options=options)
    report = format_fit_report(result, label="VG" if args.vg else "MixedTS")
    out = _out_dir(args)
    (out / "fit_report.txt").write_text(report)
    _write_grid_csv(mixedts_density(result.params), out / "fitted_density.csv")
    print(report, end="")
    return 0


def cmd_garch(args) -> int:
    data = _read_series(args.data)
    gfit, fres = garch_mixedts_pipeline(data, innovations=args.innovations,
                                        fit_options=FitOptions(seed=args.seed),
                                        bins=args.bins)
    label = "VG" if args.innovations == "vg" else "MixedTS"
    report = format_garch_report(gfit) + format_fit_report(fres, label=label)
    (_out_dir(args) / "garch_report.txt").write_text(report)
    print(report, end="")
    return 0


def cmd_ica(args) -> int:
    factors = _read_matrix(args.factors_csv)
    portfolio = _read_series(args.portfolio_csv)
    if factors.shape[0] != len(portfolio):
        return _fail(f"length mismatch: {factors.shape[0]} factor rows vs "
                     f"{len(portfolio)} portfolio observations")
    result = ica_pipeline(factors.T, portfolio, l=args.n_factors, seed=args.seed)
    out = _out_dir(args)

    n = result.model.mixing.shape[0]
    labels = [f"IC{i + 1}" for i in range(n)]
    with open(out / "mixing_matrix.csv", "w") as fh:
        fh.write(",".join(labels) + "\n")
        for row in result.model.mixing:
            fh.write(",".join(repr(float(v)) for v in row) + "\n")
    with open(out / "jb_stats.csv", "w") as fh:
        fh.write("component,jb,skewness,kurtosis\n")
        for i, row in enumerate(result.model.sources):
            jb, s, k = jarque_bera(row)
            fh.write(f"{labels[i]},{jb!r},{s!r},{k!r}\n")
    _write_grid_csv(result.reconstruction, out / "reconstruction.csv")

    mean, var = result.normal_fit
    xs = result.reconstruction.xs
    normal_pdf = np.exp(-0.5 * (xs - mean) ** 2 / var) / np.sqrt(2 * np.pi * var)
    with open(out / "normal_comparison.csv", "w") as fh:
        fh.write("x,pdf\n")
        for x, v in zip(xs, normal_pdf):
            fh.write(f"{float(x)!r},{float(v)!r}\n")

    lines = ["# factor decomposition",
             f"r_squared {result.r_squared!r}",
             "beta " + ",".join(repr(float(b)) for b in result.beta),
             f"factors {args.n_factors}",
             f"noise_mean {result.noise_mean!r}",
             f"noise_var {result.noise_var!r}", ""]
    report = "\n".join(lines) + "".join(
        format_fit_report(f, label=f"factor {i + 1}")
        for i, f in enumerate(result.factor_fits))
    (out / "ica_report.txt").write_text(report)
    print(f"wrote {out / 'ica_report.txt'}")
    return 0


def cmd_sample(args) -> int:
    p = _load_mixedts_params(args.params)
    if args.count < 1:
        return _fail(f"count must be >= 1, got {args.count}")
    batch = sample_mixedts(p, args.count, args.seed)
    path = _out_dir(args) / "samples.csv"
    batch.to_csv(path)
    print(f"wrote {path}")
    return 0


def _add_common(sub, grid=False, fit=False):
    sub.add_argument("--seed", type=int, default=DEFAULT_SEED)
    sub.add_argument("--out", default=".")
    if grid:
        sub.add_argument("--grid-n", type=int, default=2 ** 14)
        sub.add_argument("--grid-umax", type=float, default=None)
    if fit:
        sub.add_argument("--bins", type=int, default=None)
        sub.add_argument("--alpha-min", type=float, default=1.0)
        sub.add_argument("--alpha-max", type=float, default=2.0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mixedts",
                                     description="Mixed tempered stable toolkit")
    parser.add_argument("--version", action="version", version=__version__)
    subs = parser.add_subparsers(dest="command", required=True)

    sp = subs.add_parser("density", help="invert a parameter file to a density CSV")
    sp.add_argument("params")
    _add_common(sp, grid=True)
    sp.set_defaults(func=cmd_density)

    sp = subs.add_parser("moments", help="closed-form moments of a parameter file")
    sp.add_argument("params")
    _add_common(sp)
    sp.set_defaults(func=cmd_moments)

    sp = subs.add_parser("fit", help="histogram MSE fit of a return sample")
    sp.add_argument("data")
    sp.add_argument("--vg", action="store_true", help="pin alpha at 2")
    sp.add_argument("--standardize", action="store_true")
    _add_common(sp, fit=True)
    sp.set_defaults(func=cmd_fit)

    sp = subs.add_parser("garch", help="two-stage filter and innovation fit")
    sp.add_argument("data")
    sp.add_argument("--innovations", choices=("mixedts", "vg"), default="mixedts")
    sp.add_argument("--bins", type=int, default=None)
    _add_common(sp)
    sp.set_defaults(func=cmd_garch)

    sp = subs.add_parser("ica", help="factor decomposition and density reconstruction")
    sp.add_argument("factors_csv")
    sp.add_argument("portfolio_csv")
    sp.add_argument("--factors", dest="n_factors", type=int, default=4)
    _add_common(sp)
    sp.set_defaults(func=cmd_ica)

    sp = subs.add_parser("sample", help="draw variates from a parameter file")
    sp.add_argument("params")
    sp.add_argument("--count", type=int, required=True)
    _add_common(sp)
    sp.set_defaults(func=cmd_sample)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:  # noqa: BLE001 - single exit funnel for the CLI
        return _fail(str(exc))


if __name__ == "__main__":
    sys.exit(main())
