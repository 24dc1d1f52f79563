"""Heavy-tail statistics and small-world metrics for software ecosystems."""

__version__ = "0.1.0"

from ecotail.errors import DegenerateDataError, EcotailError, FitError, ParseError
from ecotail.graphs import (
    BipartiteGraph,
    Components,
    DependencyGraph,
    MetricsReport,
    ProjectionGraph,
    build_directed_graph,
    degree_assortativity,
    density,
    full_metrics,
    global_efficiency,
    local_efficiency,
    project_onto_contributors,
    shortest_path_lengths_from,
    weakly_connected_components,
)
from ecotail.heavytail import (
    FAMILIES,
    BestFit,
    ComparisonResult,
    FitResult,
    SampleSet,
    best_fit,
    ccdf,
    fit_exponential,
    fit_family,
    fit_lognormal,
    fit_power_law,
    fit_truncated_power_law,
    loglikelihood_ratio,
    select_xmin,
)
from ecotail.binning import (
    Bin,
    BinPartition,
    head_tail_breaks,
    tail_members,
    walk_schedule,
)
from ecotail.ingest import (
    ContributionRecord,
    ExclusionReport,
    TableBundle,
    aggregate_contributions,
    build_bipartite_from_records,
    import_counts,
    parse_contributions,
    parse_edge_list,
    parse_ghtorrent_tables,
    parse_values,
    write_contributions,
)

__all__ = [
    "__version__",
    "EcotailError", "ParseError", "DegenerateDataError", "FitError",
    "DependencyGraph", "BipartiteGraph", "ProjectionGraph", "Components",
    "MetricsReport", "build_directed_graph", "weakly_connected_components",
    "density", "degree_assortativity", "shortest_path_lengths_from",
    "global_efficiency", "local_efficiency", "project_onto_contributors",
    "full_metrics",
    "SampleSet", "FitResult", "BestFit", "ComparisonResult", "FAMILIES",
    "ccdf", "select_xmin", "fit_power_law", "fit_truncated_power_law",
    "fit_lognormal", "fit_exponential", "fit_family", "loglikelihood_ratio",
    "best_fit",
    "Bin", "BinPartition", "head_tail_breaks", "tail_members", "walk_schedule",
    "ContributionRecord", "TableBundle", "ExclusionReport", "parse_edge_list",
    "parse_values", "parse_contributions", "write_contributions",
    "parse_ghtorrent_tables", "aggregate_contributions", "import_counts",
    "build_bipartite_from_records",
]
