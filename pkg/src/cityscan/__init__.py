"""Proximity-graph auditing of urban safety-infrastructure coverage."""

from .compliance import (
    PRESET_THRESHOLDS_M,
    PlacementSuggestion,
    RegulationRule,
    ViolationReport,
    aggregate_by_neighborhood,
    aggregate_by_type,
    detect_violations,
    preset_rule,
    rank_objects_for_maintenance,
    suggest_placements,
)
from .geo import (
    GeoPoint,
    PolygonRegion,
    UNASSIGNED,
    assign_neighborhood,
    build_spatial_index,
    haversine_distance,
    point_in_polygon,
)
from .graph import (
    ProximityGraph,
    build_bipartite_graph,
    build_unipartite_graph,
    connected_components,
    degree_centrality,
    isolated_vertices,
)
from .ingest import (
    CityDataset,
    Facility,
    SafetyObject,
    assemble_dataset,
    parse_boundaries_geojson,
    parse_facilities_csv,
    parse_objects_csv,
)

__all__ = [
    "GeoPoint",
    "PolygonRegion",
    "UNASSIGNED",
    "haversine_distance",
    "point_in_polygon",
    "assign_neighborhood",
    "build_spatial_index",
    "Facility",
    "SafetyObject",
    "CityDataset",
    "parse_facilities_csv",
    "parse_objects_csv",
    "parse_boundaries_geojson",
    "assemble_dataset",
    "ProximityGraph",
    "build_bipartite_graph",
    "build_unipartite_graph",
    "isolated_vertices",
    "degree_centrality",
    "connected_components",
    "RegulationRule",
    "ViolationReport",
    "PlacementSuggestion",
    "PRESET_THRESHOLDS_M",
    "preset_rule",
    "detect_violations",
    "aggregate_by_neighborhood",
    "aggregate_by_type",
    "rank_objects_for_maintenance",
    "suggest_placements",
]

__version__ = "0.1.0"
