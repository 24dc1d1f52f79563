from ecotail.graphs.core import (
    BipartiteGraph,
    DependencyGraph,
    ProjectionGraph,
    build_directed_graph,
    project_onto_contributors,
)
from ecotail.graphs.metrics import (
    Components,
    MetricsReport,
    degree_assortativity,
    density,
    full_metrics,
    global_efficiency,
    local_efficiency,
    shortest_path_lengths_from,
    weakly_connected_components,
)

__all__ = [
    "BipartiteGraph",
    "DependencyGraph",
    "ProjectionGraph",
    "build_directed_graph",
    "project_onto_contributors",
    "Components",
    "MetricsReport",
    "weakly_connected_components",
    "degree_assortativity",
    "density",
    "full_metrics",
    "global_efficiency",
    "local_efficiency",
    "shortest_path_lengths_from",
]
