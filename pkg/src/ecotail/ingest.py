"""Readers and aggregators for dependency edge lists and GHTorrent-style tables.

All inputs are UTF-8 CSV with a header row.  Columns are located by name, so
column order does not matter; unknown extra columns are ignored with a
warning.  Errors carry the table name and 1-based line number.  Timestamps
are ISO-8601 and interpreted as UTC (a bare timestamp is taken as UTC; an
explicit offset is converted).
"""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass
from datetime import datetime, timezone

import numpy as np

from ecotail.errors import ParseError
from ecotail.graphs.core import BipartiteGraph

logger = logging.getLogger(__name__)

__all__ = [
    "ContributionRecord",
    "TableBundle",
    "ExclusionReport",
    "parse_edge_list",
    "parse_values",
    "parse_contributions",
    "write_contributions",
    "parse_ghtorrent_tables",
    "aggregate_contributions",
    "import_counts",
    "build_bipartite_from_records",
]


def _read_table(source, required, table_name):
    """Rows of a CSV table as (lineno, {column: stripped value}).

    ``source`` is a path or an open text stream.  Missing required columns
    and wrong-arity rows raise ParseError; extra columns warn once.
    """
    if hasattr(source, "read"):
        stream, close = source, False
    else:
        stream, close = open(source, "r", encoding="utf-8", newline=""), True
    try:
        reader = csv.reader(stream)
        header = next(reader, None)
        if header is None:
            raise ParseError(f"{table_name}: empty file (missing header)")
        cols = [h.strip() for h in header]
        missing = [c for c in required if c not in cols]
        if missing:
            raise ParseError(f"{table_name}: missing required column(s): {', '.join(missing)}")
        extra = [c for c in cols if c not in required]
        if extra:
            logger.warning("%s: ignoring extra column(s): %s", table_name, ", ".join(extra))
        index = {c: cols.index(c) for c in required}
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(cols):
                raise ParseError(
                    f"{table_name} line {lineno}: expected {len(cols)} fields, got {len(row)}"
                )
            rows.append((lineno, {c: row[index[c]].strip() for c in required}))
        return rows
    finally:
        if close:
            stream.close()


def parse_edge_list(source) -> list:
    """(importer, imported) pairs from an edges CSV (header ``source,target``).

    Duplicates are preserved; deduplication belongs to graph construction.
    """
    pairs = []
    for lineno, rec in _read_table(source, ["source", "target"], "edges"):
        if not rec["source"] or not rec["target"]:
            raise ParseError(f"edges line {lineno}: empty label")
        pairs.append((rec["source"], rec["target"]))
    return pairs


def parse_values(source) -> np.ndarray:
    """Positive numeric sample from a one-column CSV (header ``value``)."""
    out = []
    for lineno, rec in _read_table(source, ["value"], "values"):
        try:
            v = float(rec["value"])
        except ValueError:
            raise ParseError(f"values line {lineno}: not a number: {rec['value']!r}") from None
        if not np.isfinite(v) or v <= 0:
            raise ParseError(f"values line {lineno}: values must be positive and finite")
        out.append(v)
    if not out:
        raise ParseError("values: no data rows")
    return np.asarray(out, dtype=np.float64)


@dataclass(frozen=True)
class ContributionRecord:
    """Aggregated activity of one contributor on one library."""

    contributor: str
    library: str
    commits: int
    merged_pulls: int

    def __post_init__(self):
        if not self.contributor or not self.library:
            raise ValueError("empty contributor or library label")
        if self.commits < 0 or self.merged_pulls < 0:
            raise ValueError("negative contribution count")
        if self.commits + self.merged_pulls < 1:
            raise ValueError("zero-activity record")

    @property
    def weight(self) -> int:
        return self.commits + self.merged_pulls


def parse_contributions(source) -> list:
    """ContributionRecords from a contributions CSV.

    Header ``contributor,library,commits,pulls``; (contributor, library)
    must be unique and each row must carry at least one contribution.
    """
    records = []
    seen = {}
    cols = ["contributor", "library", "commits", "pulls"]
    for lineno, rec in _read_table(source, cols, "contributions"):
        try:
            commits = int(rec["commits"])
            pulls = int(rec["pulls"])
        except ValueError:
            raise ParseError(f"contributions line {lineno}: counts must be integers") from None
        key = (rec["contributor"], rec["library"])
        if key in seen:
            raise ParseError(
                f"contributions line {lineno}: duplicate record for "
                f"{key[0]}/{key[1]} (first at line {seen[key]})"
            )
        seen[key] = lineno
        try:
            records.append(ContributionRecord(rec["contributor"], rec["library"], commits, pulls))
        except ValueError as exc:
            raise ParseError(f"contributions line {lineno}: {exc}") from None
    return records


def write_contributions(records, dest) -> None:
    """Write records to the contributions CSV format (order preserved)."""
    if hasattr(dest, "write"):
        stream, close = dest, False
    else:
        stream, close = open(dest, "w", encoding="utf-8", newline=""), True
    try:
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(["contributor", "library", "commits", "pulls"])
        for r in records:
            writer.writerow([r.contributor, r.library, r.commits, r.merged_pulls])
    finally:
        if close:
            stream.close()


@dataclass(frozen=True)
class TableBundle:
    """Cross-validated GHTorrent-style tables.

    users: id -> login; projects: id -> (name, forked_from id or None);
    commits: (author_id, project_id, created_at); pull_requests:
    (user_id, project_id, merged, created_at).  Fork links are carried
    through but never collapse projects.
    """

    users: dict
    projects: dict
    commits: tuple
    pull_requests: tuple


def _parse_timestamp(text: str, table: str, lineno: int) -> datetime:
    raw = text
    if raw.endswith("Z"):
        raw = raw[:-1] + "+00:00"
    try:
        ts = datetime.fromisoformat(raw)
    except ValueError:
        raise ParseError(f"{table} line {lineno}: invalid timestamp {text!r}") from None
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    return ts.astimezone(timezone.utc)


def parse_ghtorrent_tables(users, projects, commits, pull_requests) -> TableBundle:
    """Parse and join-validate the four table exports.

    Every author/user/project reference in commits and pull_requests must
    resolve; dangling keys are collected and reported together as e.g.
    "commits line 2: project 99".
    """
    user_map = {}
    for lineno, rec in _read_table(users, ["id", "login"], "users"):
        if not rec["id"] or not rec["login"]:
            raise ParseError(f"users line {lineno}: empty id or login")
        if rec["id"] in user_map:
            raise ParseError(f"users line {lineno}: duplicate id {rec['id']}")
        user_map[rec["id"]] = rec["login"]

    project_map = {}
    for lineno, rec in _read_table(projects, ["id", "name", "forked_from"], "projects"):
        if not rec["id"] or not rec["name"]:
            raise ParseError(f"projects line {lineno}: empty id or name")
        if rec["id"] in project_map:
            raise ParseError(f"projects line {lineno}: duplicate id {rec['id']}")
        project_map[rec["id"]] = (rec["name"], rec["forked_from"] or None)

    dangling = []
    commit_rows = []
    for lineno, rec in _read_table(commits, ["author_id", "project_id", "created_at"], "commits"):
        ts = _parse_timestamp(rec["created_at"], "commits", lineno)
        if rec["author_id"] not in user_map:
            dangling.append(f"commits line {lineno}: user {rec['author_id']}")
        if rec["project_id"] not in project_map:
            dangling.append(f"commits line {lineno}: project {rec['project_id']}")
        commit_rows.append((rec["author_id"], rec["project_id"], ts))

    pull_rows = []
    pull_cols = ["user_id", "project_id", "merged", "created_at"]
    for lineno, rec in _read_table(pull_requests, pull_cols, "pull_requests"):
        if rec["merged"] not in ("true", "false"):
            raise ParseError(
                f"pull_requests line {lineno}: merged must be true or false, got {rec['merged']!r}"
            )
        ts = _parse_timestamp(rec["created_at"], "pull_requests", lineno)
        if rec["user_id"] not in user_map:
            dangling.append(f"pull_requests line {lineno}: user {rec['user_id']}")
        if rec["project_id"] not in project_map:
            dangling.append(f"pull_requests line {lineno}: project {rec['project_id']}")
        pull_rows.append((rec["user_id"], rec["project_id"], rec["merged"] == "true", ts))

    if dangling:
        raise ParseError("unresolved foreign keys: " + "; ".join(dangling))
    return TableBundle(user_map, project_map, tuple(commit_rows), tuple(pull_rows))


def aggregate_contributions(bundle: TableBundle, merged_only: bool = True) -> list:
    """ContributionRecords keyed by (login, project name), sorted by key.

    commits counts commit rows; merged_pulls counts pull rows with
    merged=true (all pull rows when merged_only is false).  Keys with no
    counted activity produce no record.
    """
    counts = {}
    for author_id, project_id, _ts in bundle.commits:
        key = (bundle.users[author_id], bundle.projects[project_id][0])
        counts.setdefault(key, [0, 0])[0] += 1
    for user_id, project_id, merged, _ts in bundle.pull_requests:
        if merged_only and not merged:
            continue
        key = (bundle.users[user_id], bundle.projects[project_id][0])
        counts.setdefault(key, [0, 0])[1] += 1
    return [
        ContributionRecord(contributor, library, c, p)
        for (contributor, library), (c, p) in sorted(counts.items())
    ]


def import_counts(edges) -> dict:
    """Times-imported per library: distinct importers, self-imports ignored."""
    seen = set()
    counts = {}
    for source, target in edges:
        if source == target or (source, target) in seen:
            continue
        seen.add((source, target))
        counts[target] = counts.get(target, 0) + 1
    return counts


@dataclass(frozen=True)
class ExclusionReport:
    """Libraries dropped for having too few distinct contributors."""

    min_contributors_per_library: int
    excluded: tuple  # (library, distinct contributor count), sorted by library


def build_bipartite_from_records(records, min_contributors_per_library: int = 3):
    """(BipartiteGraph, ExclusionReport) from aggregated records.

    Edge weight is commits + merged_pulls.  Libraries with fewer distinct
    contributors than the threshold are excluded from the graph and listed
    in the report.
    """
    contributors_of = {}
    for r in records:
        contributors_of.setdefault(r.library, set()).add(r.contributor)
    excluded = tuple(
        (lib, len(people))
        for lib, people in sorted(contributors_of.items())
        if len(people) < min_contributors_per_library
    )
    dropped = {lib for lib, _ in excluded}
    kept = [r for r in records if r.library not in dropped]

    left, right = [], []
    left_index, right_index = {}, {}
    li, ri, weights = [], [], []
    for r in kept:
        if r.contributor not in left_index:
            left_index[r.contributor] = len(left)
            left.append(r.contributor)
        if r.library not in right_index:
            right_index[r.library] = len(right)
            right.append(r.library)
        li.append(left_index[r.contributor])
        ri.append(right_index[r.library])
        weights.append(r.weight)
    graph = BipartiteGraph(left, right, li, ri, weights)
    return graph, ExclusionReport(min_contributors_per_library, excluded)
