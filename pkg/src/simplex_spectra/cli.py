"""Command-line front end.

Subcommands: sample, spectrum, ensemble, confinement, gap, bound-compare,
oracle-verify, bounds. Options can come from a flat key=value config file
(--config); explicit flags win. Output is byte-identical across runs for a
fixed config and seed.

Exit codes: 0 success, 2 config error, 3 certificate/acceptance failure,
4 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from math import comb

from . import bounds, experiments, models, spectral
from .distributions import parse_dist
from .errors import ResourceCapError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_CERTIFICATE = 3
EXIT_RESOURCE = 4

WORKERS_ENV = "SIMPLEX_SPECTRA_WORKERS"

_DEFAULTS = {
    "d": 2,
    "n": "40",
    "p": None,
    "dist": None,
    "k": None,
    "trials": 1,
    "seed": 0,
    "xi": 0.75,
    "xi_prime": 1.0,
    "out": None,
    "format": "json",
    "workers": None,  # falls back to the environment variable, then 1
    "dense_cap": spectral.DENSE_CAP,
}

_SUBCOMMANDS = ("sample", "spectrum", "ensemble", "confinement", "gap",
                "bound-compare", "oracle-verify", "bounds")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="simplex-spectra",
        description="Spectra of random simplicial complexes: sampling, "
                    "eigenvalue experiments, closed-form bounds, and "
                    "combinatorial oracle verification.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _SUBCOMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--d", type=int)
        sp.add_argument("--n", type=str, help="int or comma-separated list")
        sp.add_argument("--p", type=float)
        sp.add_argument("--dist", type=str,
                        help="bernoulli:P | rademacher | uniform:A,B | "
                             "twopoint:X,Y,PI")
        sp.add_argument("--k", type=str, help="int or comma-separated list")
        sp.add_argument("--trials", type=int)
        sp.add_argument("--seed", type=int)
        sp.add_argument("--xi", type=float)
        sp.add_argument("--xi-prime", dest="xi_prime", type=float)
        sp.add_argument("--config", type=str)
        sp.add_argument("--out", type=str)
        sp.add_argument("--format", choices=("json", "csv", "binary"))
        sp.add_argument("--workers", type=int)
        sp.add_argument("--dense-cap", dest="dense_cap", type=int)
    return parser


def _read_config_file(path: str) -> dict:
    """Flat key=value lines; '#' starts a comment; keys match flag names."""
    values = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value")
            key, _, val = line.partition("=")
            key = key.strip().replace("-", "_")
            if key not in _DEFAULTS:
                raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
            values[key] = val.strip()
    return values


_INT_KEYS = ("d", "trials", "seed", "workers", "dense_cap")
_FLOAT_KEYS = ("p", "xi", "xi_prime")


def _merge_options(args: argparse.Namespace) -> dict:
    opts = dict(_DEFAULTS)
    if args.config:
        file_vals = _read_config_file(args.config)
        for key, val in file_vals.items():
            if key in _INT_KEYS:
                opts[key] = int(val)
            elif key in _FLOAT_KEYS:
                opts[key] = float(val)
            else:
                opts[key] = val
    for key in _DEFAULTS:  # explicit flags win over the config file
        flag_val = getattr(args, key, None)
        if flag_val is not None:
            opts[key] = flag_val
    if opts["workers"] is None:
        opts["workers"] = int(os.environ.get(WORKERS_ENV, "1"))
    opts["n_values"] = tuple(int(t) for t in str(opts["n"]).split(","))
    opts["k_values"] = (
        tuple(int(t) for t in str(opts["k"]).split(","))
        if opts["k"] is not None else ()
    )
    if opts["dist"] is not None and not hasattr(opts["dist"], "kind"):
        opts["dist"] = parse_dist(opts["dist"])
    return opts


def _write_output(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def _single_n(opts) -> int:
    if len(opts["n_values"]) != 1:
        raise ValueError("this subcommand takes a single n")
    return opts["n_values"][0]


def _cmd_sample(opts) -> int:
    n = _single_n(opts)
    if opts["p"] is None:
        raise ValueError("sample needs --p")
    sample = models.sample_complex(opts["d"], n, opts["p"], opts["seed"])
    if opts["format"] == "binary":
        if opts["out"] is None:
            raise ValueError("binary format needs --out")
        models.save_sample(sample, opts["out"])
    else:
        _write_output(models.sample_to_json(sample) + "\n", opts["out"])
    return EXIT_OK


def _cmd_spectrum(opts) -> int:
    n = _single_n(opts)
    if opts["dist"] is not None:
        mat = models.build_H(opts["d"], n, opts["dist"], opts["seed"])
    elif opts["p"] is not None:
        sample = models.sample_complex(opts["d"], n, opts["p"], opts["seed"])
        mat = models.build_A(sample)
    else:
        raise ValueError("spectrum needs --p or --dist")
    if comb(n, opts["d"]) <= opts["dense_cap"]:
        rep = spectral.full_spectrum(mat, cap=opts["dense_cap"])
    else:
        rep = spectral.extreme_eigs(mat)
    if opts["format"] == "csv":
        _write_output(rep.eigenvalues_csv(), opts["out"])
    else:
        _write_output(rep.to_json() + "\n", opts["out"])
    return EXIT_OK


def _experiment_config(kind: str, opts) -> experiments.ExperimentConfig:
    return experiments.ExperimentConfig(
        kind=kind,
        d=opts["d"],
        n_values=opts["n_values"],
        p=opts["p"],
        dist=opts["dist"],
        k_values=opts["k_values"],
        trials=opts["trials"],
        seed=opts["seed"],
        xi=opts["xi"],
        xi_prime=opts["xi_prime"],
        dense_cap=opts["dense_cap"],
        workers=opts["workers"],
    )


def _cmd_experiment(kind: str, opts) -> int:
    config = _experiment_config(kind, opts)
    report = experiments.run_experiment(config)
    fmt = "csv" if opts["format"] == "csv" else "json"
    text = experiments.emit(report, fmt, opts["out"])
    if opts["out"] is None:
        sys.stdout.write(text)
    return EXIT_OK


def _cmd_oracle_verify(opts) -> int:
    bundle = experiments.oracle_verify()
    _write_output(json.dumps(bundle, sort_keys=True, indent=2) + "\n",
                  opts["out"])
    return EXIT_OK if bundle["all_ok"] else EXIT_CERTIFICATE


def _cmd_bounds(opts) -> int:
    n = _single_n(opts)
    d = opts["d"]
    if opts["dist"] is not None:
        spec = opts["dist"]
    elif opts["p"] is not None:
        from .distributions import bernoulli

        spec = bernoulli(opts["p"])
    else:
        raise ValueError("bounds needs --p or --dist")
    payload = {
        "d": d,
        "n": n,
        "norm_limit": 2.0 * d**0.5,
        "k_zero": bounds.k_zero(n, spec),
        "theta_k": {},
        "theta_k_star": {},
        "schatten_bound": {},
    }
    for k in opts["k_values"] or (max(d, 2),):
        payload["theta_k"][str(k)] = bounds.theta_k(n, d, k)
        payload["theta_k_star"][str(k)] = bounds.theta_k_star(n, d, k, spec)
        if k >= d:
            payload["schatten_bound"][str(k)] = bounds.schatten_bound(
                n, d, k, spec)
    if opts["p"] is not None and 0.0 < opts["p"] < 1.0:
        q = opts["p"] * (1.0 - opts["p"])
        payload["gap_formula"] = n * q - 2.0 * (d * n * q) ** 0.5
        try:
            payload["gamma_interval"] = bounds.gamma_interval(
                opts["xi"], opts["xi_prime"], n, d, opts["p"])
        except ValueError:
            payload["gamma_interval"] = None
        payload["script_E"] = bounds.script_E(opts["xi"], n, d)
        payload["talagrand_rate"] = bounds.talagrand_rate(d, q)
    _write_output(json.dumps(payload, sort_keys=True, indent=2) + "\n",
                  opts["out"])
    return EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        opts = _merge_options(args)
        if args.command == "sample":
            return _cmd_sample(opts)
        if args.command == "spectrum":
            return _cmd_spectrum(opts)
        if args.command in ("ensemble", "confinement", "gap", "bound-compare"):
            return _cmd_experiment(args.command, opts)
        if args.command == "oracle-verify":
            return _cmd_oracle_verify(opts)
        if args.command == "bounds":
            return _cmd_bounds(opts)
        raise AssertionError(args.command)
    except ResourceCapError as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (ValueError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
