"""CSV readers, GHTorrent-style aggregation, bipartite construction."""

import io
import logging

import pytest

import synth
from ecotail.errors import ParseError
from ecotail.ingest import (
    ContributionRecord,
    aggregate_contributions,
    build_bipartite_from_records,
    import_counts,
    parse_contributions,
    parse_edge_list,
    parse_ghtorrent_tables,
    parse_values,
    write_contributions,
)


def test_edge_list_happy_path():
    src = io.StringIO("source,target\nnumpy,scipy\nflask,click\n")
    assert parse_edge_list(src) == [("numpy", "scipy"), ("flask", "click")]


def test_edge_list_column_order_does_not_matter():
    src = io.StringIO("target,source\nscipy,numpy\n")
    assert parse_edge_list(src) == [("numpy", "scipy")]


def test_edge_list_errors_carry_line_numbers():
    with pytest.raises(ParseError, match="edges line 3: empty label"):
        parse_edge_list(io.StringIO("source,target\na,b\n,b\n"))
    with pytest.raises(ParseError, match="edges line 2: expected 2 fields, got 3"):
        parse_edge_list(io.StringIO("source,target\na,b,c\n"))
    with pytest.raises(ParseError, match="missing required column"):
        parse_edge_list(io.StringIO("from,to\na,b\n"))
    with pytest.raises(ParseError, match="empty file"):
        parse_edge_list(io.StringIO(""))


def test_extra_columns_warn(caplog):
    with caplog.at_level(logging.WARNING, logger="ecotail.ingest"):
        parse_edge_list(io.StringIO("source,target,stars\na,b,99\n"))
    assert any("extra column" in r.message for r in caplog.records)
    assert any("stars" in r.getMessage() for r in caplog.records)


def test_parse_values():
    vals = parse_values(io.StringIO("value\n3\n1.5\n"))
    assert vals.tolist() == [3.0, 1.5]
    with pytest.raises(ParseError, match="values line 2: not a number"):
        parse_values(io.StringIO("value\nabc\n"))
    with pytest.raises(ParseError, match="positive"):
        parse_values(io.StringIO("value\n-1\n"))
    with pytest.raises(ParseError, match="no data rows"):
        parse_values(io.StringIO("value\n"))


def test_contribution_record_validation():
    with pytest.raises(ValueError, match="zero-activity"):
        ContributionRecord("a", "lib", 0, 0)
    with pytest.raises(ValueError, match="negative"):
        ContributionRecord("a", "lib", -1, 2)
    with pytest.raises(ValueError, match="empty"):
        ContributionRecord("", "lib", 1, 0)
    assert ContributionRecord("a", "lib", 2, 3).weight == 5


def test_contributions_round_trip():
    records = [
        ContributionRecord("alice", "numpy", 12, 3),
        ContributionRecord("bob", "scipy", 1, 0),
    ]
    buf = io.StringIO()
    write_contributions(records, buf)
    assert buf.getvalue().splitlines()[0] == "contributor,library,commits,pulls"
    assert parse_contributions(io.StringIO(buf.getvalue())) == records


def test_contributions_reject_duplicates_and_zero_rows():
    text = "contributor,library,commits,pulls\na,x,1,0\na,x,2,0\n"
    with pytest.raises(ParseError, match=r"line 3: duplicate record for a/x \(first at line 2\)"):
        parse_contributions(io.StringIO(text))
    with pytest.raises(ParseError, match="line 2: zero-activity"):
        parse_contributions(io.StringIO("contributor,library,commits,pulls\na,x,0,0\n"))
    with pytest.raises(ParseError, match="counts must be integers"):
        parse_contributions(io.StringIO("contributor,library,commits,pulls\na,x,1.5,0\n"))


# ---------------------------------------------------------------------------
# GHTorrent-style tables


def bundle_from(tmp_path):
    paths = synth.ghtorrent_fixture(tmp_path)
    return parse_ghtorrent_tables(*paths)


def test_ghtorrent_aggregation(tmp_path):
    records = aggregate_contributions(bundle_from(tmp_path))
    by_key = {(r.contributor, r.library): r for r in records}
    assert by_key["alice", "alpha"].commits == 6
    assert by_key["alice", "alpha"].merged_pulls == 2
    assert by_key["alice", "beta"].commits == 3
    assert by_key["carol", "beta"].merged_pulls == 0      # unmerged pull dropped
    assert by_key["henry", "alpha-fork"].commits == 1     # forks stay distinct
    assert [(r.contributor, r.library) for r in records] == sorted(by_key)


def test_ghtorrent_all_pulls_mode(tmp_path):
    records = aggregate_contributions(bundle_from(tmp_path), merged_only=False)
    by_key = {(r.contributor, r.library): r for r in records}
    assert by_key["carol", "beta"].merged_pulls == 1
    assert by_key["frank", "delta"].merged_pulls == 1


def test_ghtorrent_row_order_invariance(tmp_path):
    paths = synth.ghtorrent_fixture(tmp_path)
    baseline = aggregate_contributions(parse_ghtorrent_tables(*paths))
    lines = paths[2].read_text().splitlines()
    shuffled = [lines[0]] + list(reversed(lines[1:]))
    paths[2].write_text("\n".join(shuffled) + "\n")
    assert aggregate_contributions(parse_ghtorrent_tables(*paths)) == baseline


def test_ghtorrent_commit_conservation(tmp_path):
    bundle = bundle_from(tmp_path)
    records = aggregate_contributions(bundle)
    assert sum(r.commits for r in records) == len(bundle.commits)


def test_ghtorrent_foreign_key_errors_are_collected():
    users = io.StringIO("id,login\n1,alice\n")
    projects = io.StringIO("id,name,forked_from\n10,numpy,\n")
    commits = io.StringIO(
        "author_id,project_id,created_at\n"
        "1,99,2019-01-01T00:00:00Z\n"
        "7,10,2019-01-02T00:00:00Z\n"
    )
    pulls = io.StringIO("user_id,project_id,merged,created_at\n")
    with pytest.raises(ParseError) as err:
        parse_ghtorrent_tables(users, projects, commits, pulls)
    message = str(err.value)
    assert message.startswith("unresolved foreign keys: ")
    assert "commits line 2: project 99" in message
    assert "commits line 3: user 7" in message


def test_ghtorrent_validation_errors():
    with pytest.raises(ParseError, match="users line 3: duplicate id 1"):
        parse_ghtorrent_tables(
            io.StringIO("id,login\n1,a\n1,b\n"),
            io.StringIO("id,name,forked_from\n"),
            io.StringIO("author_id,project_id,created_at\n"),
            io.StringIO("user_id,project_id,merged,created_at\n"),
        )
    with pytest.raises(ParseError, match="merged must be true or false, got 'yes'"):
        parse_ghtorrent_tables(
            io.StringIO("id,login\n1,a\n"),
            io.StringIO("id,name,forked_from\n2,x,\n"),
            io.StringIO("author_id,project_id,created_at\n"),
            io.StringIO("user_id,project_id,merged,created_at\n1,2,yes,2019-01-01T00:00:00Z\n"),
        )
    with pytest.raises(ParseError, match="commits line 2: invalid timestamp"):
        parse_ghtorrent_tables(
            io.StringIO("id,login\n1,a\n"),
            io.StringIO("id,name,forked_from\n2,x,\n"),
            io.StringIO("author_id,project_id,created_at\n1,2,notatime\n"),
            io.StringIO("user_id,project_id,merged,created_at\n"),
        )


def test_timestamps_normalize_to_utc(tmp_path):
    users = io.StringIO("id,login\n1,a\n")
    projects = io.StringIO("id,name,forked_from\n2,x,\n")
    commits = io.StringIO(
        "author_id,project_id,created_at\n"
        "1,2,2019-06-01T12:00:00+02:00\n"
        "1,2,2019-06-01T10:00:00\n"
        "1,2,2019-06-01T10:00:00Z\n"
    )
    pulls = io.StringIO("user_id,project_id,merged,created_at\n")
    bundle = parse_ghtorrent_tables(users, projects, commits, pulls)
    stamps = {ts.isoformat() for _, _, ts in bundle.commits}
    assert stamps == {"2019-06-01T10:00:00+00:00"}


# ---------------------------------------------------------------------------
# import counts and bipartite construction


def test_import_counts():
    edges = [("a", "x"), ("b", "x"), ("a", "x"), ("x", "x"), ("a", "y")]
    assert import_counts(edges) == {"x": 2, "y": 1}


def test_build_bipartite_exclusions():
    records = [
        ContributionRecord("a", "big", 1, 0),
        ContributionRecord("b", "big", 1, 0),
        ContributionRecord("c", "big", 1, 0),
        ContributionRecord("a", "small", 5, 0),
    ]
    graph, report = build_bipartite_from_records(records, min_contributors_per_library=3)
    assert report.min_contributors_per_library == 3
    assert report.excluded == (("small", 1),)
    assert graph.right_labels == ("big",)
    assert graph.left_labels == ("a", "b", "c")
    assert graph.weight("a", "big") == 1
