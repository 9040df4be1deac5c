"""``hs`` command-line front end.

Exit codes: 0 success, 2 usage error, 3 data error, 4 numerical error.
Failures print one JSON object to stderr.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict
from pathlib import Path

import numpy as np

from . import __version__, kernels
from .bench import BenchGrid, bench, kernel_benchmark
from .diagnostics import chib_marginal_likelihood, effective_sample_size, ess_vs_thinning
from .errors import ConfigurationError, DataError, HsError, NumericalError, ParameterDomainError
from .glm import run_chain_glm
from .io import git_blob_hash, load_csv, read_draws, write_draws
from .linear import SamplerConfig, run_chain

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NUMERICAL = 0, 2, 3, 4

CONFIG_DEFAULTS = {
    "family": "linear",
    "h": None,
    "prior": "horseshoe",
    "sigma_prior": "jeffreys",
    "hs_plus_form": "conventional",
    "backend": "auto",
    "burn": 1000,
    "keep": 1000,
    "thin": 1,
    "seed": 0,
    "format": "csv",
    "destandardize": False,
}


class UsageError(HsError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _int_list(text):
    try:
        vals = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not vals or any(v < 1 for v in vals):
        raise argparse.ArgumentTypeError("values must be positive")
    return vals


def _chain_flags(p):
    p.add_argument("--input", required=True)
    p.add_argument("--config", help="JSON file of defaults; flags take precedence")
    p.add_argument("--family", choices=["linear", "logistic", "negbin"], default=None)
    p.add_argument("--h", type=float, default=None, help="negative-binomial dispersion")
    p.add_argument("--prior", choices=["horseshoe", "horseshoe_plus"], default=None)
    p.add_argument("--sigma-prior", dest="sigma_prior", choices=["jeffreys", "half-cauchy", "half_cauchy"], default=None)
    p.add_argument("--hs-plus-form", dest="hs_plus_form", choices=["conventional", "paper"], default=None)
    p.add_argument("--backend", choices=["auto", "rue", "fast"], default=None)
    p.add_argument("--burn", type=int, default=None)
    p.add_argument("--keep", type=int, default=None)
    p.add_argument("--thin", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", required=True)


def build_parser():
    parser = _Parser(prog="hs", description="Horseshoe regression Gibbs samplers")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    run_p = sub.add_parser("run", help="sample a posterior and write draws + diagnostics")
    _chain_flags(run_p)
    run_p.add_argument("--format", choices=["csv", "binary"], default=None)
    run_p.add_argument("--destandardize", action="store_true", default=None)

    ev = sub.add_parser("evidence", help="Chib log marginal likelihood (linear family)")
    _chain_flags(ev)

    b = sub.add_parser("bench", help="time 1000-draw runs over an n x p grid")
    b.add_argument("--n", type=_int_list, default=list(BenchGrid().n_values))
    b.add_argument("--p", type=_int_list, default=list(BenchGrid().p_values))
    b.add_argument("--iterations", type=int, default=1000)
    b.add_argument("--reps", type=int, default=3)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--kernels", action="store_true", help="compare numba and numpy kernels instead")
    b.add_argument("--out", required=True)

    e = sub.add_parser("ess", help="ESS proportion vs thinning table")
    e.add_argument("--draws", required=True)
    e.add_argument("--thin", type=_int_list, default=[1, 2, 4, 8, 16])
    e.add_argument("--out", required=True)
    return parser


def resolve_options(args) -> dict:
    """Merge defaults < JSON config file < explicit flags."""
    opts = dict(CONFIG_DEFAULTS)
    if getattr(args, "config", None):
        try:
            cfg = json.loads(Path(args.config).read_text())
        except FileNotFoundError:
            raise UsageError(f"config file not found: {args.config}") from None
        except json.JSONDecodeError as exc:
            raise UsageError(f"config file is not valid JSON: {exc}") from None
        unknown = set(cfg) - set(CONFIG_DEFAULTS)
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
        opts.update(cfg)
    for key in CONFIG_DEFAULTS:
        val = getattr(args, key, None)
        if val is not None:
            opts[key] = val
    if opts["family"] not in ("linear", "logistic", "negbin"):
        raise UsageError(f"invalid family {opts['family']!r}")
    if opts["family"] == "negbin" and opts["h"] is None:
        raise UsageError("--h is required for the negbin family")
    opts["sigma_prior"] = str(opts["sigma_prior"]).replace("-", "_")
    return opts


def _sampler_config(opts) -> SamplerConfig:
    return SamplerConfig(
        n_burn=int(opts["burn"]),
        n_keep=int(opts["keep"]),
        thin=int(opts["thin"]),
        prior_variant=opts["prior"],
        sigma_prior=opts["sigma_prior"],
        backend_policy=opts["backend"],
        seed=int(opts["seed"]),
        hs_plus_form=opts["hs_plus_form"],
    )


def _summary(draws, names):
    rows = []
    for j, name in enumerate(names):
        col = draws[:, j]
        try:
            ess = effective_sample_size(col)
        except DataError:
            ess = None
        lo, hi = np.quantile(col, [0.025, 0.975])
        rows.append(
            {
                "name": name,
                "mean": float(col.mean()),
                "sd": float(col.std(ddof=1)) if col.size > 1 else 0.0,
                "q025": float(lo),
                "q975": float(hi),
                "ess": ess,
                "ess_proportion": None if ess is None else ess / col.size,
            }
        )
    return rows


def cmd_run(args):
    opts = resolve_options(args)
    config = _sampler_config(opts)
    data = load_csv(args.input, opts["family"], opts["h"])
    if opts["family"] == "linear":
        chain = run_chain(data, config)
    else:
        chain = run_chain_glm(data, config)
    draws = chain.beta_draws
    names = list(data.names)
    if opts["destandardize"] and opts["family"] == "linear":
        beta, intercept = data.destandardize(draws)
        draws = np.column_stack([intercept, beta])
        names = ["intercept"] + names

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    draws_name = "draws.csv" if opts["format"] == "csv" else "draws.bin"
    write_draws(out / draws_name, draws, names, opts["format"])
    diag = {
        "family": opts["family"],
        "coefficients": _summary(draws, names),
        "sigma2_mean": float(chain.sigma2_draws.mean()),
        "tau2_median": float(np.median(chain.tau2_draws)),
        "wall_clock_seconds": chain.wall_clock_seconds,
        "n_keep": chain.n_keep,
    }
    (out / "diagnostics.json").write_text(json.dumps(diag, indent=2))
    meta = {
        "input": str(args.input),
        "input_git_blob_sha1": git_blob_hash(args.input),
        "config": asdict(config),
        "options": opts,
        "kernel_backend": kernels.active_backend(),
        "version": __version__,
        "n": data.n,
        "p": data.p,
    }
    (out / "metadata.json").write_text(json.dumps(meta, indent=2, sort_keys=True))
    return EXIT_OK


def cmd_evidence(args):
    opts = resolve_options(args)
    if opts["family"] != "linear":
        raise UsageError("evidence is only available for the linear family")
    config = _sampler_config(opts)
    data = load_csv(args.input, "linear")
    est = chib_marginal_likelihood(data, config)
    result = {
        "log_marginal": est.log_marginal,
        "std_error": est.std_error,
        "ordinate_breakdown": est.ordinate_breakdown,
        "block_std_errors": est.block_std_errors,
        "n_reduced_runs": est.n_reduced_runs,
        "input_git_blob_sha1": git_blob_hash(args.input),
        "config": asdict(config),
    }
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps(result, indent=2))
    return EXIT_OK


def cmd_bench(args):
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    if args.kernels:
        rows = kernel_benchmark()
        with open(out, "w") as fh:
            fh.write("backend,kernel,size,seconds\n")
            for r in rows:
                fh.write(f"{r['backend']},{r['kernel']},{r['size']},{r['seconds']:.6f}\n")
        return EXIT_OK
    grid = BenchGrid(args.n, args.p, args.iterations, args.reps, args.seed)

    def progress(n, p, t):
        msg = "failed" if t is None else f"{t:.3f}s"
        print(f"n={n} p={p}: {msg}", file=sys.stderr)

    bench(grid, out, progress)
    return EXIT_OK


def cmd_ess(args):
    names, draws = read_draws(args.draws)
    reports = ess_vs_thinning(draws, args.thin)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    with open(out, "w") as fh:
        fh.write("coefficient,thin,n_draws,ess,ess_proportion\n")
        for j, name in enumerate(names):
            for rep in reports:
                fh.write(
                    f"{name},{rep.thin_level},{rep.n_draws},"
                    f"{rep.per_coefficient_ess[j]:.6f},{rep.ess_proportion[j]:.6f}\n"
                )
    return EXIT_OK


COMMANDS = {"run": cmd_run, "evidence": cmd_evidence, "bench": cmd_bench, "ess": cmd_ess}


def _fail(code, kind, exc):
    print(json.dumps({"error": kind, "message": str(exc), "exit_code": code}), file=sys.stderr)
    return code


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args)
    except (UsageError, ConfigurationError) as exc:
        return _fail(EXIT_USAGE, "usage", exc)
    except (DataError, ParameterDomainError) as exc:
        return _fail(EXIT_DATA, "data", exc)
    except NumericalError as exc:
        return _fail(EXIT_NUMERICAL, "numerical", exc)
    except (OSError, ValueError) as exc:
        return _fail(EXIT_DATA, "data", exc)


if __name__ == "__main__":
    sys.exit(main())
