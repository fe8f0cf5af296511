"""Command-line front-end.

Subcommands:

* ``table``    — Kolmogorov-distance table over a (b, t) grid.
* ``pmf``      — both occupancy pmfs at one (b, t) cell, plus the verdict.
* ``mean``     — mean occupancy and matched arrival intensity.
* ``simulate`` — Monte Carlo occupancy histogram for one system.
* ``validate`` — the full cross-validation suite; exit 0 iff all checks pass.

Every value can come from three places with a documented precedence:
explicit command-line flag > config file (``--config``, INI format, sections
listed in ``CONFIG_SCHEMA``) > built-in default.  Machine-readable outputs
(csv/jsonl) are byte-deterministic for identical configuration; run metadata
that varies between runs (timings, backend summaries) goes to stderr.
"""

from __future__ import annotations

import argparse
import configparser
import sys
from typing import Optional

from . import __version__
from .errors import TransientQError
from .inversion import choose_truncation, invert_cf
from .metrics import (
    DEFAULT_THRESHOLD,
    approximation_verdict,
    build_distance_table,
    kolmogorov_distance,
)
from .models import (
    ModelParams,
    autonomous_cf,
    matched_intensity,
    mean_occupancy,
    poisson_matched_cf,
)
from .output import (
    normalize_format,
    write_pmf_pair_csv,
    write_pmf_pair_jsonl,
    write_pmf_pair_markdown,
    write_rows,
    write_table,
    write_validation,
)
from .simulate import SimConfig, simulate_autonomous, simulate_mtminf
from .validation import (
    DEFAULT_B_VALUES,
    DEFAULT_SEED,
    DEFAULT_T_VALUES,
    run_validation,
)


def _parse_grid(text: str) -> tuple[float, ...]:
    values = tuple(float(part) for part in str(text).split(",") if part.strip())
    if not values:
        raise ValueError(f"empty grid specification {text!r}")
    return values


#: flag -> (config section, config key, converter); the config file uses
#: INI syntax with these sections (see README for an example)
CONFIG_SCHEMA = {
    "b": ("model", "b", float),
    "t": ("model", "t", float),
    "mu": ("model", "mu", float),
    "n0": ("model", "n0", int),
    "b_grid": ("grids", "b_grid", _parse_grid),
    "t_grid": ("grids", "t_grid", _parse_grid),
    "tail_tol": ("inversion", "tail_tol", float),
    "reps": ("simulation", "reps", int),
    "seed": ("simulation", "seed", int),
    "max_events": ("simulation", "max_events", int),
    "system": ("simulation", "system", str),
    "backend": ("simulation", "backend", str),
    "threshold": ("metrics", "threshold", float),
    "format": ("output", "format", str),
    "out": ("output", "out", str),
}

DEFAULTS = {
    "mu": 1.0,
    "n0": 15,
    "b_grid": DEFAULT_B_VALUES,
    "t_grid": DEFAULT_T_VALUES,
    "tail_tol": 1e-9,
    "reps": 100_000,
    "seed": DEFAULT_SEED,
    "max_events": 1_000_000,
    "system": "autonomous",
    "backend": None,
    "threshold": DEFAULT_THRESHOLD,
    "format": "markdown",
    "out": None,
    "b": None,
    "t": None,
}


class Settings:
    """Value resolution: CLI flag > config file > built-in default."""

    def __init__(self, args: argparse.Namespace):
        self._args = vars(args)
        self._config = None
        path = self._args.get("config")
        if path:
            parser = configparser.ConfigParser()
            read = parser.read(path)
            if not read:
                raise TransientQError(f"config file {path!r} not found or unreadable")
            self._config = parser

    def get(self, name: str):
        value = self._args.get(name)
        if value is not None:
            return value
        if self._config is not None and name in CONFIG_SCHEMA:
            section, key, convert = CONFIG_SCHEMA[name]
            if self._config.has_option(section, key):
                try:
                    return convert(self._config.get(section, key))
                except ValueError as exc:
                    raise TransientQError(
                        f"config value [{section}] {key} is invalid: {exc}"
                    ) from exc
        return DEFAULTS.get(name)

    def require(self, name: str, flag: str):
        value = self.get(name)
        if value is None:
            raise TransientQError(f"missing required value: pass {flag} or set it in --config")
        return value


def _open_out(settings: Settings):
    path = settings.get("out")
    if path is None:
        return sys.stdout, False
    return open(path, "w", encoding="utf-8", newline=""), True


def _emit(settings: Settings, write_fn) -> None:
    stream, owned = _open_out(settings)
    try:
        write_fn(stream)
    finally:
        if owned:
            stream.close()


def cmd_table(settings: Settings) -> int:
    table = build_distance_table(
        mu=settings.get("mu"),
        n0=settings.get("n0"),
        b_values=settings.get("b_grid"),
        t_values=settings.get("t_grid"),
        tail_tol=settings.get("tail_tol"),
    )
    fmt = normalize_format(settings.get("format"))
    _emit(settings, lambda stream: write_table(table, fmt, stream))
    return 0


def cmd_pmf(settings: Settings) -> int:
    params = ModelParams(
        b=settings.require("b", "--b"), mu=settings.get("mu"), n0=settings.get("n0")
    )
    t = settings.require("t", "--t")
    threshold = settings.get("threshold")
    config = choose_truncation(params, t, settings.get("tail_tol"))
    p_auto = invert_cf(autonomous_cf(params), t, config)
    p_pois = invert_cf(poisson_matched_cf(params), t, config)
    rho = kolmogorov_distance(p_pois, p_auto)
    verdict = approximation_verdict(rho, threshold)
    fmt = normalize_format(settings.get("format"))
    if fmt == "csv":
        _emit(settings, lambda stream: write_pmf_pair_csv(p_auto, p_pois, stream))
        print(
            f"rho = {rho:.6f}; verdict: {verdict.value} (threshold {threshold:g})",
            file=sys.stderr,
        )
    elif fmt == "markdown":
        _emit(
            settings,
            lambda stream: write_pmf_pair_markdown(
                p_auto, p_pois, rho, verdict, threshold, stream
            ),
        )
    else:
        _emit(
            settings,
            lambda stream: write_pmf_pair_jsonl(
                p_auto, p_pois, rho, verdict, threshold, stream
            ),
        )
    return 0


def cmd_mean(settings: Settings) -> int:
    params = ModelParams(
        b=settings.require("b", "--b"), mu=settings.get("mu"), n0=settings.get("n0")
    )
    t_single = settings.get("t")
    times = (t_single,) if t_single is not None else settings.get("t_grid")
    rows = [
        (float(t), mean_occupancy(params, t), matched_intensity(params, t))
        for t in times
    ]
    fmt = normalize_format(settings.get("format"))
    _emit(
        settings,
        lambda stream: write_rows(fmt, ("t", "mean", "intensity"), rows, stream),
    )
    return 0


def cmd_simulate(settings: Settings) -> int:
    params = ModelParams(
        b=settings.require("b", "--b"), mu=settings.get("mu"), n0=settings.get("n0")
    )
    t = settings.require("t", "--t")
    system = str(settings.get("system")).lower()
    if system not in ("autonomous", "mtminf"):
        raise TransientQError(
            f"unknown system {system!r}; expected 'autonomous' or 'mtminf'"
        )
    config = SimConfig(
        replications=settings.get("reps"),
        seed=settings.get("seed"),
        max_events=settings.get("max_events"),
    )
    simulate = simulate_autonomous if system == "autonomous" else simulate_mtminf
    result = simulate(params, t, config, backend=settings.get("backend"))
    rows = [(i, int(c)) for i, c in enumerate(result.counts)]
    fmt = normalize_format(settings.get("format"))
    _emit(settings, lambda stream: write_rows(fmt, ("i", "count"), rows, stream))
    print(
        f"system={system} backend={result.backend} replications={result.replications} "
        f"seed={result.seed} elapsed={result.elapsed:.3f}s "
        f"empirical_mean={result.empirical_mean():.6f} "
        f"closed_form_mean={mean_occupancy(params, t):.6f}",
        file=sys.stderr,
    )
    return 0


def cmd_validate(settings: Settings, perturbation: Optional[str]) -> int:
    report = run_validation(
        mu=settings.get("mu"),
        n0=settings.get("n0"),
        b_values=settings.get("b_grid"),
        t_values=settings.get("t_grid"),
        reps=settings.get("reps"),
        seed=settings.get("seed"),
        tail_tol=settings.get("tail_tol"),
        backend=settings.get("backend"),
        cf_perturbation=perturbation,
    )
    for result in report.results:
        print(result.line())
    if settings.get("out") is not None:
        fmt = settings.get("format")
        fmt = "jsonl" if fmt == "markdown" else normalize_format(fmt)
        _emit(settings, lambda stream: write_validation(report, fmt, stream))
    summary = "all checks passed" if report.passed else (
        f"{len(report.failures())} of {len(report.results)} checks FAILED"
    )
    print(summary, file=sys.stderr)
    return 0 if report.passed else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="transientq",
        description=(
            "Transient occupancy analysis: autonomous birth-death system vs "
            "its mean-matched infinite-server approximation."
        ),
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--mu", type=float, default=None, help="service rate (default 1.0)")
    common.add_argument("--n0", type=int, default=None, help="initial occupancy (default 15)")
    common.add_argument("--config", default=None, help="INI config file; flags override it")
    common.add_argument(
        "--backend",
        choices=("auto", "numba", "numpy"),
        default=None,
        help="kernel backend (default: TRANSIENTQ_BACKEND or auto)",
    )
    common.add_argument("--out", default=None, help="output path (default stdout)")
    common.add_argument(
        "--format",
        default=None,
        help="csv | markdown | jsonl (default markdown)",
    )

    sub = parser.add_subparsers(dest="command", required=True)

    p_table = sub.add_parser(
        "table", parents=[common], help="distance table over a (b, t) grid"
    )
    p_table.add_argument("--b-grid", type=_parse_grid, default=None, help="comma-separated b values")
    p_table.add_argument("--t-grid", type=_parse_grid, default=None, help="comma-separated t values")
    p_table.add_argument("--tail-tol", type=float, default=None, help="aliasing tolerance (default 1e-9)")

    p_pmf = sub.add_parser(
        "pmf", parents=[common], help="both occupancy pmfs at one (b, t) cell"
    )
    p_pmf.add_argument("--b", type=float, default=None, help="birth intensity")
    p_pmf.add_argument("--t", type=float, default=None, help="time")
    p_pmf.add_argument("--tail-tol", type=float, default=None)
    p_pmf.add_argument(
        "--threshold", type=float, default=None, help="verdict threshold (default 0.03)"
    )

    p_mean = sub.add_parser(
        "mean", parents=[common], help="mean occupancy and matched intensity"
    )
    p_mean.add_argument("--b", type=float, default=None, help="birth intensity")
    p_mean.add_argument("--t", type=float, default=None, help="single time")
    p_mean.add_argument("--t-grid", type=_parse_grid, default=None, help="comma-separated times")

    p_sim = sub.add_parser(
        "simulate", parents=[common], help="Monte Carlo occupancy histogram"
    )
    p_sim.add_argument("--b", type=float, default=None, help="birth intensity")
    p_sim.add_argument("--t", type=float, default=None, help="time")
    p_sim.add_argument(
        "--system",
        choices=("autonomous", "mtminf"),
        default=None,
        help="which system to simulate (default autonomous)",
    )
    p_sim.add_argument("--reps", type=int, default=None, help="replications (default 100000)")
    p_sim.add_argument("--seed", type=int, default=None, help="base seed")
    p_sim.add_argument("--max-events", type=int, default=None, help="per-replication event cap")

    p_val = sub.add_parser(
        "validate", parents=[common], help="run the cross-validation suite"
    )
    p_val.add_argument("--b-grid", type=_parse_grid, default=None)
    p_val.add_argument("--t-grid", type=_parse_grid, default=None)
    p_val.add_argument("--tail-tol", type=float, default=None)
    p_val.add_argument("--reps", type=int, default=None, help="simulation replications")
    p_val.add_argument("--seed", type=int, default=None, help="simulation seed")
    p_val.add_argument(
        "--inject-cf-perturbation",
        choices=("autonomous", "poisson"),
        default=None,
        help="testing hook: multiply one CF by 1.001; affected checks must fail",
    )
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        settings = Settings(args)
        if args.command == "table":
            return cmd_table(settings)
        if args.command == "pmf":
            return cmd_pmf(settings)
        if args.command == "mean":
            return cmd_mean(settings)
        if args.command == "simulate":
            return cmd_simulate(settings)
        if args.command == "validate":
            return cmd_validate(settings, args.inject_cf_perturbation)
        parser.error(f"unknown command {args.command!r}")
    except TransientQError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 2


if __name__ == "__main__":
    sys.exit(main())
