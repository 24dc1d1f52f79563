"""End-to-end analysis commands behind the CLI.

Each ``cmd_*`` function takes a :class:`RunConfig` and returns a plain-dict
report.  Reports embed the tool version, the command name, and the effective
analysis configuration; they are rendered byte-identically for identical
inputs (JSON keys sorted, trailing newline, no worker-count dependence: the
``workers`` and ``out`` fields are execution details, not analysis inputs,
and are therefore not echoed).
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, fields
from fnmatch import fnmatchcase

import numpy as np

import ecotail
from ecotail.binning import head_tail_breaks, walk_schedule
from ecotail.errors import DegenerateDataError, ParseError
from ecotail.graphs.core import build_directed_graph, project_onto_contributors
from ecotail.graphs.metrics import full_metrics
from ecotail.heavytail.compare import best_fit
from ecotail.heavytail.families import FAMILIES
from ecotail.heavytail.samples import SampleSet, ccdf
from ecotail.ingest import (
    aggregate_contributions,
    build_bipartite_from_records,
    import_counts,
    parse_contributions,
    parse_edge_list,
    parse_ghtorrent_tables,
    parse_values,
    write_contributions,
)

__all__ = ["RunConfig", "cmd_deps_metrics", "cmd_fit", "cmd_bins",
           "cmd_tailwalk", "cmd_ccdf", "cmd_ingest_ghtorrent", "render_report"]

# Execution details excluded from the report's config echo so that runs with
# different worker counts or output paths stay byte-identical.
_UNECHOED = {"workers", "out"}


@dataclass
class RunConfig:
    """Effective configuration of one CLI run (defaults are the documented ones)."""

    edges: str | None = None
    contributions: str | None = None
    values: str | None = None
    users: str | None = None
    projects: str | None = None
    commits: str | None = None
    pull_requests: str | None = None
    density_mode: str = "undirected"       # deps-metrics density formula
    sample_kind: str = "discrete"          # discrete | continuous likelihoods
    xmin_policy: str = "ks"                # ks | fixed
    fixed_xmin: float | None = None        # fixed policy; None = sample minimum
    families: tuple = FAMILIES
    significance: float = 0.1
    head_fraction_limit: float = 0.4
    min_contributors: int = 3
    bins: int | None = None                # tail-walk steps; None = all bins
    per_repo_bins: bool = False
    merged_only: bool = True
    libraries: tuple | None = None         # restrict contributions to these
    exclude_logins: tuple = ()             # fnmatch patterns, e.g. "*-bot"
    format: str = "json"
    workers: int = 1
    seed: int | None = None                # reserved for synthetic generators
    out: str | None = None

    def echo(self) -> dict:
        out = {}
        for f in fields(self):
            if f.name in _UNECHOED:
                continue
            value = getattr(self, f.name)
            if isinstance(value, tuple):
                value = list(value)
            out[f.name] = value
        return out


def _report(config: RunConfig, command: str, payload: dict) -> dict:
    return {
        "tool": "ecotail",
        "version": ecotail.__version__,
        "command": command,
        "config": config.echo(),
        **payload,
    }


def _require(config: RunConfig, field_name: str, command: str) -> str:
    value = getattr(config, field_name)
    if not value:
        raise ParseError(f"{command} requires --{field_name.replace('_', '-')}")
    return value


def _filtered_records(config: RunConfig, records):
    if config.libraries is not None:
        wanted = set(config.libraries)
        records = [r for r in records if r.library in wanted]
    if config.exclude_logins:
        records = [
            r for r in records
            if not any(fnmatchcase(r.contributor, pat) for pat in config.exclude_logins)
        ]
    return records


def _make_sample(values, kind: str) -> SampleSet:
    try:
        return SampleSet(values, kind=kind)
    except ValueError as exc:
        raise ParseError(f"sample: {exc}") from None


def _resolved_xmin(config: RunConfig, sample: SampleSet):
    """None for KS selection, a pinned value for the fixed policy."""
    if config.xmin_policy == "ks":
        return None
    if config.xmin_policy == "fixed":
        if config.fixed_xmin is not None:
            return float(config.fixed_xmin)
        return float(sample.values.min())
    raise ParseError(f"unknown xmin policy: {config.xmin_policy!r}")


# ---------------------------------------------------------------------------
# commands


def cmd_deps_metrics(config: RunConfig) -> dict:
    """Whole-graph metrics of a dependency edge list."""
    path = _require(config, "edges", "deps-metrics")
    graph = build_directed_graph(parse_edge_list(path))
    if graph.n_nodes == 0:
        raise ParseError("edges: no usable edges (empty graph)")
    metrics = full_metrics(graph, density_mode=config.density_mode, workers=config.workers)
    return _report(config, "deps-metrics", metrics.to_dict())


def _fit_one_row(config: RunConfig, name: str, values, extra: dict) -> dict:
    row = {"sample": name, "n": int(len(values)), **extra}
    try:
        sample = _make_sample(values, config.sample_kind)
        result = best_fit(
            sample,
            xmin=_resolved_xmin(config, sample),
            significance=config.significance,
            families=config.families,
        )
    except DegenerateDataError as exc:
        row["degenerate"] = str(exc)
        return row
    row["xmin"] = result.xmin
    row["winner"] = result.winner
    row["fits"] = {
        e.family: {
            "params": e.fit.params,
            "loglik": e.fit.loglik,
            "ks_distance": e.fit.ks_distance,
            "n_tail": e.fit.n_tail,
            "beaten_by": list(e.beaten_by),
        }
        for e in result.entries
    }
    row["failures"] = dict(result.failures)
    return row


def cmd_fit(config: RunConfig) -> dict:
    """Distribution fits: one row per sample (Table-1 shape for contributions)."""
    rows = []
    if config.values:
        rows.append(_fit_one_row(config, "values", parse_values(config.values), {}))
    elif config.contributions:
        records = _filtered_records(config, parse_contributions(config.contributions))
        if not records:
            raise ParseError("contributions: no records after filtering")
        by_library: dict = {}
        for r in records:
            by_library.setdefault(r.library, []).append(r)
        for library in sorted(by_library):
            recs = by_library[library]
            weights = np.array([r.weight for r in recs], dtype=np.float64)
            extra = {
                "commits": int(sum(r.commits for r in recs)),
                "merged_pulls": int(sum(r.merged_pulls for r in recs)),
            }
            rows.append(_fit_one_row(config, library, weights, extra))
    else:
        raise ParseError("fit requires --values or --contributions")
    return _report(config, "fit", {"rows": rows})


def _binning_input(config: RunConfig, command: str):
    """(values, items) for bins/ccdf commands from whichever input was given."""
    if config.values:
        return parse_values(config.values), None
    if config.edges:
        counts = import_counts(parse_edge_list(config.edges))
        if not counts:
            raise ParseError("edges: no usable edges")
        libraries = sorted(counts)
        return np.array([counts[lib] for lib in libraries], dtype=np.float64), libraries
    if config.contributions:
        records = _filtered_records(config, parse_contributions(config.contributions))
        if not records:
            raise ParseError("contributions: no records after filtering")
        totals: dict = {}
        for r in records:
            totals[r.contributor] = totals.get(r.contributor, 0) + r.weight
        contributors = sorted(totals)
        return np.array([totals[c] for c in contributors], dtype=np.float64), contributors
    raise ParseError(f"{command} requires --values, --edges or --contributions")


def cmd_bins(config: RunConfig) -> dict:
    """Head/tail-breaks partition, innermost bin first, thresholds included."""
    values, items = _binning_input(config, "bins")
    partition = head_tail_breaks(values, config.head_fraction_limit, items=items)
    payload = {
        "n_values": int(len(values)),
        "bins": [
            {
                "index": i + 1,
                "threshold": b.threshold,
                "size": len(b.values),
                "members": list(b.members),
            }
            for i, b in enumerate(partition.bins)
        ],
    }
    return _report(config, "bins", payload)


def cmd_ccdf(config: RunConfig) -> dict:
    """Empirical complementary CDF rows (plot data), ascending in x."""
    values, _ = _binning_input(config, "ccdf")
    sample = _make_sample(values, config.sample_kind)
    xs, fracs = ccdf(sample)
    payload = {"rows": [{"x": float(x), "ccdf": float(f)} for x, f in zip(xs, fracs)]}
    return _report(config, "ccdf", payload)


def cmd_tailwalk(config: RunConfig) -> dict:
    """Walk up the contribution tail, re-measuring the projection at each step."""
    path = _require(config, "contributions", "tailwalk")
    records = _filtered_records(config, parse_contributions(path))
    if not records:
        raise ParseError("contributions: no records after filtering")
    bipartite, exclusions = build_bipartite_from_records(records, config.min_contributors)
    retained = set(bipartite.right_labels)
    kept = [r for r in records if r.library in retained]
    if not kept:
        raise DegenerateDataError(
            f"no library has at least {config.min_contributors} distinct contributors"
        )

    if config.per_repo_bins:
        values = np.array([r.weight for r in kept], dtype=np.float64)
        items = [r.contributor for r in kept]
    else:
        totals: dict = {}
        for r in kept:
            totals[r.contributor] = totals.get(r.contributor, 0) + r.weight
        contributors = sorted(totals)
        values = np.array([totals[c] for c in contributors], dtype=np.float64)
        items = contributors
    partition = head_tail_breaks(values, config.head_fraction_limit, items=items)

    k = config.bins if config.bins is not None else partition.n_bins
    try:
        steps = walk_schedule(partition, k)
    except ValueError as exc:
        raise ParseError(str(exc)) from None

    rows = []
    bin1_graph = None
    for j, step in enumerate(steps, start=1):
        sub = bipartite.restrict_left(set(step))
        if j == 1:
            bin1_graph = sub
        projection = project_onto_contributors(sub)
        m = full_metrics(projection, density_mode="undirected", workers=config.workers)
        rows.append({
            "bins_included": j,
            "nodes": m.nodes,
            "edges": m.edges,
            "components": m.components,
            "density": m.density,
            "assortativity": m.assortativity,
            "local_efficiency": m.local_efficiency,
            "global_efficiency": m.global_efficiency,
        })

    payload = {
        "bin_sizes": list(partition.sizes()),
        "thresholds": list(partition.thresholds()),
        "exclusions": [
            {"library": lib, "contributors": n} for lib, n in exclusions.excluded
        ],
        "rows": rows,
        "bin1_bipartite": {
            "contributors": sorted(bin1_graph.left_labels),
            "libraries": sorted(bin1_graph.right_labels),
            "edges": sorted(
                (
                    {
                        "contributor": bin1_graph.left_labels[li],
                        "library": bin1_graph.right_labels[ri],
                        "weight": int(w),
                    }
                    for li, ri, w in zip(
                        bin1_graph.edge_left, bin1_graph.edge_right, bin1_graph.weights
                    )
                ),
                key=lambda e: (e["contributor"], e["library"]),
            ),
        },
    }
    return _report(config, "tailwalk", payload)


def cmd_ingest_ghtorrent(config: RunConfig) -> dict:
    """Aggregate GHTorrent-style tables into contribution records."""
    for field_name in ("users", "projects", "commits", "pull_requests"):
        _require(config, field_name, "ingest-ghtorrent")
    bundle = parse_ghtorrent_tables(
        config.users, config.projects, config.commits, config.pull_requests
    )
    records = aggregate_contributions(bundle, merged_only=config.merged_only)
    records = _filtered_records(config, records)
    payload = {
        "records": [
            {
                "contributor": r.contributor,
                "library": r.library,
                "commits": r.commits,
                "pulls": r.merged_pulls,
            }
            for r in records
        ]
    }
    return _report(config, "ingest-ghtorrent", payload)


# ---------------------------------------------------------------------------
# rendering


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(["" if v is None else v for v in row])
    return buf.getvalue()


def _csv_report(report: dict) -> str:
    command = report["command"]
    if command == "deps-metrics":
        keys = ["nodes", "edges", "components", "giant_component_size",
                "density", "assortativity", "local_efficiency", "global_efficiency"]
        return _csv_text(["metric", "value"], [[k, report[k]] for k in keys])
    if command == "fit":
        header = ["sample", "n", "commits", "merged_pulls", "xmin", "winner", "degenerate"]
        rows = []
        for r in report["rows"]:
            rows.append([r.get("sample"), r.get("n"), r.get("commits"),
                         r.get("merged_pulls"), r.get("xmin"), r.get("winner"),
                         r.get("degenerate")])
        return _csv_text(header, rows)
    if command == "bins":
        rows = []
        for b in report["bins"]:
            for member in b["members"]:
                rows.append([b["index"], b["threshold"], member])
        return _csv_text(["bin", "threshold", "member"], rows)
    if command == "ccdf":
        return _csv_text(["x", "ccdf"], [[r["x"], r["ccdf"]] for r in report["rows"]])
    if command == "tailwalk":
        header = ["bins_included", "nodes", "edges", "components", "density",
                  "assortativity", "local_efficiency", "global_efficiency"]
        return _csv_text(header, [[r[k] for k in header] for r in report["rows"]])
    if command == "ingest-ghtorrent":
        buf = io.StringIO()
        from ecotail.ingest import ContributionRecord

        write_contributions(
            [
                ContributionRecord(r["contributor"], r["library"], r["commits"], r["pulls"])
                for r in report["records"]
            ],
            buf,
        )
        return buf.getvalue()
    raise ValueError(f"no CSV rendering for command {command!r}")


def render_report(report: dict, fmt: str) -> str:
    """Serialize a command report; identical reports give identical bytes."""
    if fmt == "json":
        return json.dumps(report, indent=2, sort_keys=True, allow_nan=False) + "\n"
    if fmt == "csv":
        return _csv_report(report)
    raise ParseError(f"unknown output format: {fmt!r}")
