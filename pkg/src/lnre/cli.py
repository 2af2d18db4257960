"""Command-line entry point.

Subcommands: divergence, estimate, simulate, newcomb, counterexample,
fisher, ks.  Exit codes: 0 success, 1 usage error, 2 numeric failure.
Every output-writing run also serializes a manifest (subcommand, flags,
seed, version, file list) so results can be reproduced bit for bit by
re-running the recorded argv.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .datasets import newcomb
from .divergences import TuningPair, dpd, kld, ldpd, lnre
from .errors import EmptyFile, NumericsError, ParseError
from .estimators import mlnree_student_r_location, mlnree_student_r_scale, mlnree_student_t
from .models import StudentParams, bernoulli_density, normal_density, student_density
from .plots import curves_tsv, histogram_tsv, render_svg
from .study import (
    StudyConfig,
    ks_distance,
    newcomb_pipeline,
    numeric_cdf,
    run_contamination_study,
)
from .sufficiency import counterexample_ex3, ex3_deformed, generalized_fisher_info


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse, but usage problems raise instead of exiting with code 2."""

    def error(self, message):
        raise UsageError(f"{self.prog}: {message}\n{self.format_usage()}")


@dataclass(frozen=True)
class Dataset:
    name: str
    values: np.ndarray
    source: str  # "embedded" or the csv path

    def __post_init__(self):
        if self.values.size == 0:
            raise EmptyFile(f"dataset {self.name!r} is empty")
        if not np.all(np.isfinite(self.values)):
            raise ParseError(0, "dataset contains non-finite values")


def load_csv(path) -> Dataset:
    """One numeric value per row; a single leading header row is tolerated."""
    lines = Path(path).read_text().splitlines()
    values = []
    for i, raw in enumerate(lines, start=1):
        text = raw.strip().strip(",")
        if not text:
            continue
        try:
            values.append(float(text))
        except ValueError:
            if i == 1 and not values:
                continue  # header
            raise ParseError(i, f"could not parse {raw!r} as a number")
    if not values:
        raise EmptyFile(f"no numeric rows in {path}")
    return Dataset(name=Path(path).stem, values=np.asarray(values), source=str(path))


def write_csv(dataset: Dataset, path) -> None:
    """Full-precision writer; load_csv(write_csv(x)) round-trips exactly."""
    with open(path, "w", newline="") as fh:
        fh.write("value\n")
        for v in dataset.values:
            fh.write(f"{float(v)!r}\n")


def load_dataset(spec: str) -> Dataset:
    if spec == "newcomb":
        return Dataset(name="newcomb", values=newcomb(), source="embedded")
    return load_csv(spec)


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


@dataclass
class RunManifest:
    subcommand: str
    argv: list
    seed: int | None
    version: str
    outputs: list

    def dump(self, out_dir: Path) -> None:
        payload = {
            "subcommand": self.subcommand,
            "argv": self.argv,
            "seed": self.seed,
            "version": self.version,
            "outputs": sorted(self.outputs),
        }
        (out_dir / "manifest.json").write_text(
            json.dumps(payload, indent=2, sort_keys=True) + "\n"
        )


class _Emitter:
    """Writes the per-run artifacts and the manifest."""

    def __init__(self, args, argv):
        self.out_dir = Path(args.out) if getattr(args, "out", None) else None
        self.argv = list(argv)
        self.seed = getattr(args, "seed", None)
        self.files = []
        if self.out_dir:
            self.out_dir.mkdir(parents=True, exist_ok=True)

    def write(self, name: str, text: str) -> None:
        if self.out_dir is None:
            return
        (self.out_dir / name).write_text(text)
        self.files.append(name)

    def finish(self, subcommand: str) -> None:
        if self.out_dir is None:
            return
        RunManifest(
            subcommand=subcommand,
            argv=self.argv,
            seed=self.seed,
            version=__version__,
            outputs=self.files,
        ).dump(self.out_dir)


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def _parse_floats(text: str):
    try:
        return tuple(float(tok) for tok in text.split(",") if tok)
    except ValueError:
        raise UsageError(f"could not parse float list {text!r}")


def _parse_bandwidth(text: str):
    if text == "silverman":
        return text
    try:
        return float(text)
    except ValueError:
        raise UsageError(f"bandwidth must be 'silverman' or a float, got {text!r}")


def parse_density_spec(spec: str):
    """Model specs like student-t:mu=0,sigma2=1,nu=3 or normal:mean=0,var=1."""
    name, _, rest = spec.partition(":")
    try:
        kv = {}
        for chunk in rest.split(","):
            if not chunk:
                continue
            key, _, val = chunk.partition("=")
            kv[key.strip()] = float(val)
    except ValueError:
        raise UsageError(f"bad density spec {spec!r}")
    try:
        if name in ("student-t", "student-r"):
            nu = kv["nu"]
            if name == "student-t" and nu <= 0:
                raise UsageError("student-t needs nu > 0")
            if name == "student-r" and nu >= 0:
                raise UsageError("student-r needs nu < 0")
            return student_density(
                StudentParams(kv.get("mu", 0.0), kv.get("sigma2", 1.0), nu)
            )
        if name == "normal":
            return normal_density(kv.get("mean", 0.0), kv.get("var", 1.0))
        if name == "bernoulli":
            return bernoulli_density(kv["p"])
    except KeyError as exc:
        raise UsageError(f"density spec {spec!r} is missing {exc}")
    raise UsageError(f"unknown family {name!r}")


def build_parser() -> _Parser:
    parser = _Parser(prog="lnre", description=__doc__)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("divergence", help="evaluate a divergence between two models")
    p.add_argument("--g", required=True, help="data-generating density spec")
    p.add_argument("--f", required=True, help="model density spec")
    p.add_argument(
        "--divergence", default="lnre", choices=("kld", "dpd", "ldpd", "lnre")
    )
    p.add_argument("--alpha", type=float, default=2.0)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--out")

    p = sub.add_parser("estimate", help="minimum-LNRE fit on a dataset")
    p.add_argument("--data", required=True, help="csv path or 'newcomb'")
    p.add_argument("--family", required=True, choices=("student-t", "student-r"))
    p.add_argument("--nu", type=float, required=True)
    p.add_argument("--beta", default="1", help="comma-separated beta grid")
    p.add_argument("--known-mu", type=float, default=None)
    p.add_argument("--known-sigma2", type=float, default=None)
    p.add_argument("--bandwidth", default="silverman")
    p.add_argument("--out")

    p = sub.add_parser("simulate", help="seeded contamination study")
    p.add_argument("--family", default="student-t", choices=("student-t", "student-r"))
    p.add_argument(
        "--estimand", default=None, choices=("t", "r-location", "r-scale")
    )
    p.add_argument("--nu", type=float, default=3.0)
    p.add_argument("--mu", type=float, default=0.0)
    p.add_argument("--sigma2", type=float, default=1.0)
    p.add_argument("--eta", default="0,0.05,0.1,0.15,0.2,0.25")
    p.add_argument("--beta", default="0.85,0.86,0.88,0.91,0.96,1,1.02")
    p.add_argument("--contaminant-mean", type=float, default=0.0)
    p.add_argument("--contaminant-var", type=float, default=16.0)
    p.add_argument("--n", type=int, default=50)
    p.add_argument("--reps", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--bandwidth", default="silverman")
    p.add_argument("--out")

    p = sub.add_parser("newcomb", help="light-speed data scale analysis")
    p.add_argument("--beta", default="0.9,1,1.5,1.9,2,2.1")
    p.add_argument("--nu", type=float, default=-7.0)
    p.add_argument("--bandwidth", default="silverman")
    p.add_argument("--format", default="csv,tsv,svg", help="any of csv,tsv,svg")
    p.add_argument("--out")

    p = sub.add_parser("counterexample", help="exact Bernoulli counterexample")
    p.add_argument("--out")

    p = sub.add_parser("fisher", help="generalized Fisher information report")
    p.add_argument("--lambdas", default="0.55,0.6,0.65,0.7,0.75,0.8,0.85,0.9,0.95")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--out")

    p = sub.add_parser("ks", help="Kolmogorov-Smirnov distance of a fitted model")
    p.add_argument("--data", required=True)
    p.add_argument(
        "--family", default="student-r", choices=("student-t", "student-r", "normal")
    )
    p.add_argument("--nu", type=float, default=-7.0)
    p.add_argument("--mu", type=float, default=0.0)
    p.add_argument("--sigma2", type=float, default=1.0)
    p.add_argument("--out")
    return parser


def _cmd_divergence(args, emit):
    g = parse_density_spec(args.g)
    f = parse_density_spec(args.f)
    fn = {"kld": kld, "dpd": dpd, "ldpd": ldpd, "lnre": lnre}[args.divergence]
    if args.divergence == "kld":
        result = fn(g, f)
    else:
        result = fn(g, f, TuningPair(alpha=args.alpha, beta=args.beta))
    text = (
        f"{args.divergence}({args.g}, {args.f}) = {_fmt(result.value)}\n"
        f"method: {result.method}, abs error estimate: {result.abs_error_estimate:.3e}\n"
    )
    print(text, end="")
    emit.write("result.txt", text)


def _cmd_estimate(args, emit):
    data = load_dataset(args.data)
    betas = _parse_floats(args.beta)
    bandwidth = _parse_bandwidth(args.bandwidth)
    rows = []
    for beta in betas:
        if args.family == "student-t":
            rec = mlnree_student_t(data.values, args.nu, beta, bandwidth)
            mu_hat, s2_hat = rec.estimate
        elif args.known_mu is not None:
            rec = mlnree_student_r_scale(
                data.values, args.nu, args.known_mu, beta, bandwidth
            )
            mu_hat, s2_hat = args.known_mu, rec.estimate
        elif args.known_sigma2 is not None:
            rec = mlnree_student_r_location(
                data.values, args.nu, args.known_sigma2, beta, bandwidth
            )
            mu_hat, s2_hat = rec.estimate, args.known_sigma2
        else:
            raise UsageError(
                "student-r estimation needs --known-mu (scale path) or "
                "--known-sigma2 (location path)"
            )
        rows.append((args.family, args.nu, beta, rec.alpha, mu_hat, s2_hat, rec.objective))
    text = _csv_text(
        ("family", "nu", "beta", "alpha", "mu_hat", "sigma2_hat", "objective"), rows
    )
    print(text, end="")
    emit.write("estimates.csv", text)


def _cmd_simulate(args, emit):
    estimand = args.estimand
    if estimand is None:
        estimand = "t" if args.family == "student-t" else "r-scale"
    cfg = StudyConfig(
        n=args.n,
        reps=args.reps,
        eta_grid=_parse_floats(args.eta),
        beta_grid=_parse_floats(args.beta),
        nu=args.nu,
        mu=args.mu,
        sigma2=args.sigma2,
        cont_mean=args.contaminant_mean,
        cont_var=args.contaminant_var,
        seed=args.seed,
        bandwidth_rule=_parse_bandwidth(args.bandwidth),
        estimand=estimand.replace("-", "_"),
    )
    table = run_contamination_study(cfg)
    rows = [
        (
            r.eta,
            r.beta,
            r.mean_mu,
            r.se_mu,
            r.mean_sigma2,
            r.se_sigma2,
            r.n_used,
            r.n_dropped,
            int(r.best),
        )
        for r in table.rows
    ]
    text = _csv_text(
        (
            "eta",
            "beta",
            "mean_mu",
            "se_mu",
            "mean_sigma2",
            "se_sigma2",
            "n_used",
            "n_dropped",
            "best",
        ),
        rows,
    )
    print(text, end="")
    emit.write("study.csv", text)


def _cmd_newcomb(args, emit):
    betas = _parse_floats(args.beta)
    formats = set(args.format.split(","))
    analysis = newcomb_pipeline(betas, _parse_bandwidth(args.bandwidth), args.nu)
    rows = [
        (f.beta, f.sigma2, f.d_ks, int(f.beta == analysis.best_beta))
        for f in analysis.fits
    ]
    table = _csv_text(("beta", "sigma2_hat", "d_ks", "best"), rows)
    print(f"mu_hat = {_fmt(analysis.mu_hat)} (sample mean)")
    print(table, end="")
    if "csv" in formats:
        emit.write("newcomb_fits.csv", table)
        cell_rows = [
            (i + 1, c.lower, c.upper, len(c.active))
            for i, c in enumerate(analysis.partition.cells)
        ]
        emit.write(
            "partition.csv",
            _csv_text(("cell", "lower", "upper", "n_active"), cell_rows),
        )
    if "tsv" in formats:
        emit.write(
            "histogram.tsv", histogram_tsv(analysis.hist_edges, analysis.hist_density)
        )
        emit.write(
            "curves.tsv",
            curves_tsv(
                analysis.curve_grid,
                ((f"beta={b}", vals) for b, vals in analysis.curves()),
            ),
        )
    if "svg" in formats:
        emit.write(
            "figure.svg",
            render_svg(
                analysis.hist_edges,
                analysis.hist_density,
                analysis.curve_grid,
                [(f"beta={b}", vals) for b, vals in analysis.curves()],
                title="Fitted scale family over the light-speed data",
            ),
        )


def _cmd_counterexample(args, emit):
    report = counterexample_ex3()
    text = report.render() + "\n"
    print(text, end="")
    emit.write("report.txt", text)


def _cmd_fisher(args, emit):
    lams = _parse_floats(args.lambdas)
    family = lambda lam: ex3_deformed(lam, args.n)
    ybar = lambda rows: rows.mean(axis=1)
    lines = []
    for lam in lams:
        r = generalized_fisher_info(family, lam, ybar)
        lines.append(
            f"lambda={_fmt(lam)}: i_n={_fmt(r.i_n)} i_ab={_fmt(r.i_ab)} "
            f"tau={_fmt(r.tau)} dtau={_fmt(r.dtau)} crlb={_fmt(r.crlb)} "
            f"var={_fmt(r.stat_variance)}"
        )
    text = "\n".join(lines) + "\n"
    print(text, end="")
    emit.write("report.txt", text)


def _cmd_ks(args, emit):
    data = load_dataset(args.data)
    if args.family == "normal":
        dens = normal_density(args.mu, args.sigma2)
    else:
        dens = student_density(StudentParams(args.mu, args.sigma2, args.nu))
    report = ks_distance(
        data.values,
        numeric_cdf(dens),
        params={"mu": args.mu, "sigma2": args.sigma2, "nu": args.nu},
    )
    text = f"D_KS = {_fmt(report.d_ks)}\n"
    print(text, end="")
    emit.write("report.txt", text)


_COMMANDS = {
    "divergence": _cmd_divergence,
    "estimate": _cmd_estimate,
    "simulate": _cmd_simulate,
    "newcomb": _cmd_newcomb,
    "counterexample": _cmd_counterexample,
    "fisher": _cmd_fisher,
    "ks": _cmd_ks,
}


def dispatch(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        emit = _Emitter(args, argv)
        _COMMANDS[args.subcommand](args, emit)
        emit.finish(args.subcommand)
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help and friends
        return int(exc.code or 0)
    except (NumericsError, ParseError, EmptyFile, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))
