"""Command-line interface.

Subcommands: deps-metrics, fit, bins, tailwalk, ccdf, ingest-ghtorrent.
Options come from hard defaults, then an optional flat key=value config file
(--config), then command-line flags, highest precedence last.  Exit codes:
0 success, 1 input/usage error, 2 numeric or degenerate-data failure.
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import fields

from ecotail.errors import DegenerateDataError, FitError, ParseError
from ecotail.heavytail.families import FAMILIES
from ecotail.pipeline import (
    RunConfig,
    cmd_bins,
    cmd_ccdf,
    cmd_deps_metrics,
    cmd_fit,
    cmd_ingest_ghtorrent,
    cmd_tailwalk,
    render_report,
)

_INT_KEYS = {"min_contributors", "bins", "workers", "seed"}
_FLOAT_KEYS = {"significance", "head_fraction_limit", "fixed_xmin"}
_BOOL_KEYS = {"per_repo_bins", "merged_only"}
_LIST_KEYS = {"families", "libraries", "exclude_logins"}
_CONFIG_KEYS = {f.name for f in fields(RunConfig)}

_DISPATCH = {
    "deps-metrics": cmd_deps_metrics,
    "fit": cmd_fit,
    "bins": cmd_bins,
    "tailwalk": cmd_tailwalk,
    "ccdf": cmd_ccdf,
    "ingest-ghtorrent": cmd_ingest_ghtorrent,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ParseError(message)


def _split_list(raw: str) -> tuple:
    return tuple(part.strip() for part in raw.split(",") if part.strip())


def _coerce(key: str, raw: str, where: str):
    try:
        if key in _INT_KEYS:
            return int(raw)
        if key in _FLOAT_KEYS:
            return float(raw)
        if key in _BOOL_KEYS:
            if raw not in ("true", "false"):
                raise ValueError("expected true or false")
            return raw == "true"
        if key in _LIST_KEYS:
            return _split_list(raw)
        return raw
    except ValueError as exc:
        raise ParseError(f"{where}: bad value for {key}: {exc}") from None


def _load_config_file(path: str) -> dict:
    entries = {}
    try:
        stream = open(path, "r", encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"config: {exc}") from None
    with stream:
        for lineno, line in enumerate(stream, start=1):
            text = line.strip()
            if not text or text.startswith("#"):
                continue
            if "=" not in text:
                raise ParseError(f"config line {lineno}: expected key=value")
            key, _, raw = text.partition("=")
            key = key.strip().replace("-", "_")
            if key not in _CONFIG_KEYS:
                raise ParseError(f"config line {lineno}: unknown key {key!r}")
            entries[key] = _coerce(key, raw.strip(), f"config line {lineno}")
    return entries


def _add_common(sub):
    sub.add_argument("--config", help="flat key=value config file")
    sub.add_argument("--out", help="write the report here instead of stdout")
    sub.add_argument("--format", choices=["json", "csv"], help="report format (default json)")
    sub.add_argument("--workers", type=int, help="parallel BFS workers (default 1)")
    sub.add_argument("--seed", type=int, help="reserved for synthetic generators")


def _add_sample_opts(sub):
    sub.add_argument("--kind", dest="sample_kind", choices=["discrete", "continuous"],
                     help="sample support (default discrete)")


def _add_record_filters(sub):
    sub.add_argument("--libraries", type=_split_list,
                     help="comma-separated library allowlist")
    sub.add_argument("--exclude-logins", type=_split_list,
                     help="comma-separated fnmatch patterns of contributors to drop")


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ecotail",
                     description="Heavy-tail statistics and small-world metrics "
                                 "for software-ecosystem networks")
    commands = parser.add_subparsers(dest="command", required=True)

    sub = commands.add_parser("deps-metrics", parents=[], help="dependency-graph metrics")
    sub.add_argument("--edges", help="edge list CSV (source,target)")
    sub.add_argument("--density-mode", dest="density_mode",
                     choices=["undirected", "directed"], help="density formula")
    _add_common(sub)

    sub = commands.add_parser("fit", help="heavy-tail fits and tournament per sample")
    sub.add_argument("--values", help="one-column CSV of sample values")
    sub.add_argument("--contributions", help="contributions CSV; one sample per library")
    _add_sample_opts(sub)
    sub.add_argument("--xmin-policy", dest="xmin_policy", choices=["ks", "fixed"],
                     help="tail threshold policy (default ks)")
    sub.add_argument("--fixed-xmin", dest="fixed_xmin", type=float,
                     help="xmin for --xmin-policy fixed (default: sample minimum)")
    sub.add_argument("--families", type=_split_list,
                     help=f"comma-separated subset of {', '.join(FAMILIES)}")
    sub.add_argument("--significance", type=float,
                     help="tournament significance threshold (default 0.1)")
    _add_record_filters(sub)
    _add_common(sub)

    sub = commands.add_parser("bins", help="head/tail-breaks partition")
    sub.add_argument("--values", help="one-column CSV of values")
    sub.add_argument("--edges", help="edge list CSV; bins library import counts")
    sub.add_argument("--contributions", help="contributions CSV; bins contributor totals")
    sub.add_argument("--head-fraction-limit", dest="head_fraction_limit", type=float,
                     help="recursion stop fraction (default 0.4)")
    _add_record_filters(sub)
    _add_common(sub)

    sub = commands.add_parser("tailwalk", help="walk up the contribution tail")
    sub.add_argument("--contributions", help="contributions CSV")
    sub.add_argument("--bins", type=int, help="number of cumulative steps (default: all)")
    sub.add_argument("--min-contributors", dest="min_contributors", type=int,
                     help="library exclusion threshold (default 3)")
    sub.add_argument("--head-fraction-limit", dest="head_fraction_limit", type=float,
                     help="recursion stop fraction (default 0.4)")
    sub.add_argument("--per-repo-bins", dest="per_repo_bins",
                     action="store_const", const=True,
                     help="bin per-library contributions instead of totals")
    _add_record_filters(sub)
    _add_common(sub)

    sub = commands.add_parser("ccdf", help="empirical complementary CDF plot data")
    sub.add_argument("--values", help="one-column CSV of values")
    sub.add_argument("--edges", help="edge list CSV; ccdf of import counts")
    sub.add_argument("--contributions", help="contributions CSV; ccdf of contributor totals")
    _add_sample_opts(sub)
    _add_record_filters(sub)
    _add_common(sub)

    sub = commands.add_parser("ingest-ghtorrent",
                              help="aggregate GHTorrent-style tables to contributions")
    sub.add_argument("--users", help="users CSV (id,login)")
    sub.add_argument("--projects", help="projects CSV (id,name,forked_from)")
    sub.add_argument("--commits", help="commits CSV (author_id,project_id,created_at)")
    sub.add_argument("--pull-requests", dest="pull_requests",
                     help="pull_requests CSV (user_id,project_id,merged,created_at)")
    sub.add_argument("--all-pulls", dest="merged_only",
                     action="store_const", const=False,
                     help="count all pull requests, not only merged ones")
    _add_record_filters(sub)
    _add_common(sub)

    return parser


def _build_run_config(args: argparse.Namespace) -> RunConfig:
    settings: dict = {}
    if getattr(args, "config", None):
        settings.update(_load_config_file(args.config))
    for key in _CONFIG_KEYS:
        value = getattr(args, key, None)
        if value is not None:
            settings[key] = value
    config = RunConfig(**settings)

    if config.workers < 1:
        raise ParseError(f"--workers must be >= 1, got {config.workers}")
    if not 0.0 < config.significance < 1.0:
        raise ParseError(f"significance must be in (0, 1), got {config.significance}")
    if config.format not in ("json", "csv"):
        raise ParseError(f"unknown output format: {config.format!r}")
    if config.density_mode not in ("undirected", "directed"):
        raise ParseError(f"unknown density mode: {config.density_mode!r}")
    if config.sample_kind not in ("discrete", "continuous"):
        raise ParseError(f"unknown sample kind: {config.sample_kind!r}")
    if config.xmin_policy not in ("ks", "fixed"):
        raise ParseError(f"unknown xmin policy: {config.xmin_policy!r}")
    unknown = [f for f in config.families if f not in FAMILIES]
    if unknown:
        raise ParseError(f"unknown families: {', '.join(unknown)}")
    return config


def _fmt3(value) -> str:
    if value is None:
        return "undefined"
    if isinstance(value, float):
        return f"{value:.3f}"
    return str(value)


def _summary_lines(report: dict) -> list:
    command = report["command"]
    if command == "deps-metrics":
        keys = ["nodes", "edges", "components", "giant_component_size",
                "density", "assortativity", "local_efficiency", "global_efficiency"]
        return [f"{k}: {_fmt3(report[k])}" for k in keys]
    if command == "fit":
        lines = []
        for r in report["rows"]:
            if "degenerate" in r:
                lines.append(f"{r['sample']}: n={r['n']} degenerate ({r['degenerate']})")
            else:
                lines.append(f"{r['sample']}: n={r['n']} xmin={_fmt3(r['xmin'])} "
                             f"winner={r['winner']}")
        return lines
    if command == "bins":
        sizes = [b["size"] for b in report["bins"]]
        thresholds = ", ".join(_fmt3(b["threshold"]) for b in report["bins"])
        return [f"bins (innermost first): sizes {sizes}", f"thresholds: {thresholds}"]
    if command == "tailwalk":
        header = ["bins_included", "nodes", "edges", "components", "density",
                  "assortativity", "local_efficiency", "global_efficiency"]
        lines = ["  ".join(header)]
        for r in report["rows"]:
            lines.append("  ".join(_fmt3(r[k]) for k in header))
        return lines
    if command == "ccdf":
        return [f"{len(report['rows'])} distinct values"]
    if command == "ingest-ghtorrent":
        return [f"{len(report['records'])} contribution records"]
    return []


def main(argv=None) -> int:
    logging.basicConfig(stream=sys.stderr, level=logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        config = _build_run_config(args)
        report = _DISPATCH[args.command](config)
        text = render_report(report, config.format)
        if config.out:
            with open(config.out, "w", encoding="utf-8", newline="") as handle:
                handle.write(text)
            for line in _summary_lines(report):
                print(line)
        else:
            sys.stdout.write(text)
        return 0
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (DegenerateDataError, FitError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
