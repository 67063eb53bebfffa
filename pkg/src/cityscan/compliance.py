"""Regulation checks: violation detection, aggregation, ranking, placement.

A facility violates a rule when it is an isolated vertex of the bipartite
proximity graph built at the rule's threshold, i.e. no safety object of
the rule's kind lies within threshold distance. Reports aggregate
violations per neighborhood and per facility type, mirroring the city
heatmaps and bar charts downstream.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .geo import GeoPoint, UNASSIGNED, build_spatial_index
from .graph import (
    build_bipartite_graph,
    degree_centrality,
    isolated_vertices,
    raw_id,
)
from .ingest import CityDataset, Facility

#: Statutory distance presets: hydrants within 30 m, shelters within 50 m.
PRESET_THRESHOLDS_M = {"hydrant": 30.0, "shelter": 50.0}


@dataclass(frozen=True)
class RegulationRule:
    """A (kind, threshold) pair, optionally skipping some facility types.

    The exclusion list exists for facility categories that satisfy the
    regulation internally (e.g. schools with built-in shelters); it
    defaults to empty.
    """

    kind: str
    threshold_m: float
    label: str = ""
    exclude_types: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.kind not in PRESET_THRESHOLDS_M:
            raise ValueError(f"unknown rule kind: {self.kind!r}")
        if not self.threshold_m > 0:
            raise ValueError(f"rule threshold must be positive, got {self.threshold_m}")
        if not self.label:
            object.__setattr__(self, "label", f"{self.kind} within {self.threshold_m:g} m")


def preset_rule(kind: str, threshold_m: float | None = None, exclude_types: Sequence[str] = ()) -> RegulationRule:
    """Rule for ``kind`` at its statutory threshold unless overridden."""
    if kind not in PRESET_THRESHOLDS_M:
        raise ValueError(f"unknown rule kind: {kind!r}")
    return RegulationRule(
        kind=kind,
        threshold_m=PRESET_THRESHOLDS_M[kind] if threshold_m is None else float(threshold_m),
        exclude_types=tuple(exclude_types),
    )


@dataclass(frozen=True)
class Violation:
    facility_id: str
    name: str
    facility_type: str
    neighborhood: str
    location: GeoPoint
    nearest_object_id: str | None
    nearest_distance_m: float | None


@dataclass(frozen=True)
class ReportTotals:
    facilities_checked: int
    violation_count: int


@dataclass(frozen=True)
class ViolationReport:
    rule: RegulationRule
    violations: tuple[Violation, ...]
    by_neighborhood: dict[str, int]
    by_type_and_neighborhood: dict[str, dict[str, int]]
    totals: ReportTotals


def _neighborhood_axis(dataset: CityDataset, checked: Sequence[Facility]) -> list[str]:
    """Dense neighborhood key order: sorted names, UNASSIGNED last if populated."""
    names = sorted(dataset.neighborhood_names)
    if any(f.neighborhood == UNASSIGNED for f in checked):
        names.append(UNASSIGNED)
    return names


def detect_violations(dataset: CityDataset, rule: RegulationRule) -> ViolationReport:
    """Find every checked facility with no in-range object of the rule's kind.

    Each violation is annotated with its true nearest object and distance;
    when the dataset holds no objects of the kind at all, every checked
    facility violates and the annotations are None.
    """
    objects = dataset.objects_of_kind(rule.kind)
    excluded = set(rule.exclude_types)
    checked = tuple(f for f in dataset.facilities if f.facility_type not in excluded)

    graph = build_bipartite_graph(checked, objects, rule.threshold_m)
    isolated = {raw_id(v) for v in isolated_vertices(graph, "left")}

    nearest_index = None
    if objects:
        nearest_index = build_spatial_index(
            [(o.id, o.location) for o in objects],
            cell_size_m=max(rule.threshold_m, 25.0),
        )

    violations = []
    for f in checked:
        if f.id not in isolated:
            continue
        nearest_id: str | None = None
        nearest_distance: float | None = None
        if nearest_index is not None:
            hit = nearest_index.nearest(f.location)
            assert hit is not None  # index built only when objects exist
            nearest_id, nearest_distance = hit
        violations.append(
            Violation(
                facility_id=f.id,
                name=f.name,
                facility_type=f.facility_type,
                neighborhood=f.neighborhood,
                location=f.location,
                nearest_object_id=nearest_id,
                nearest_distance_m=nearest_distance,
            )
        )
    violations.sort(key=lambda v: (v.neighborhood, v.facility_type, v.facility_id))

    neighborhood_axis = _neighborhood_axis(dataset, checked)
    by_neighborhood = {name: 0 for name in neighborhood_axis}
    type_axis = sorted({f.facility_type for f in dataset.facilities})
    by_type = {t: {name: 0 for name in neighborhood_axis} for t in type_axis}
    for v in violations:
        by_neighborhood[v.neighborhood] += 1
        by_type[v.facility_type][v.neighborhood] += 1

    return ViolationReport(
        rule=rule,
        violations=tuple(violations),
        by_neighborhood=by_neighborhood,
        by_type_and_neighborhood=by_type,
        totals=ReportTotals(facilities_checked=len(checked), violation_count=len(violations)),
    )


def aggregate_by_neighborhood(report: ViolationReport) -> list[tuple[str, int]]:
    """Neighborhood counts sorted by count descending, ties alphabetical."""
    return sorted(report.by_neighborhood.items(), key=lambda item: (-item[1], item[0]))


def aggregate_by_type(report: ViolationReport) -> dict[str, dict[str, int]]:
    """Dense facility-type x neighborhood violation matrix."""
    return {t: dict(row) for t, row in report.by_type_and_neighborhood.items()}


def rank_objects_for_maintenance(
    dataset: CityDataset, rule: RegulationRule, top_k: int
) -> list[tuple[str, int, float]]:
    """Objects of the rule's kind ranked by how many facilities they serve.

    Degree centrality over the bipartite graph at the rule's threshold;
    high-degree objects are the ones whose outage would strand the most
    facilities. Ties break by id ascending.
    """
    if top_k < 1:
        raise ValueError(f"top_k must be >= 1, got {top_k}")
    objects = dataset.objects_of_kind(rule.kind)
    excluded = set(rule.exclude_types)
    checked = tuple(f for f in dataset.facilities if f.facility_type not in excluded)
    graph = build_bipartite_graph(checked, objects, rule.threshold_m)
    centrality = degree_centrality(graph)
    ranked = [
        (raw_id(v), centrality[v][0], centrality[v][1]) for v in graph.right_vertices
    ]
    ranked.sort(key=lambda item: (-item[1], item[0]))
    return ranked[:top_k]


@dataclass(frozen=True)
class PlacementSuggestion:
    location: GeoPoint
    covered_facility_ids: frozenset[str] = field(default_factory=frozenset)
    covered_count: int = 0


def suggest_placements(
    dataset: CityDataset, rule: RegulationRule, k: int
) -> list[PlacementSuggestion]:
    """Greedy max-coverage placement of up to ``k`` new safety objects.

    Candidate locations are the violating facilities themselves (the only
    coordinates the data offers). Each step picks the candidate covering
    the most still-uncovered violations within the rule's threshold, ties
    by candidate facility id ascending, and stops early once every
    violation is covered. Covered sets across picks are disjoint.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    report = detect_violations(dataset, rule)
    if not report.violations:
        return []

    violation_index = build_spatial_index(
        [(v.facility_id, v.location) for v in report.violations],
        cell_size_m=max(rule.threshold_m, 25.0),
    )
    candidates = sorted(report.violations, key=lambda v: v.facility_id)
    cover = {
        v.facility_id: frozenset(
            fid for fid, _ in violation_index.query_within(v.location, rule.threshold_m)
        )
        for v in candidates
    }

    uncovered = {v.facility_id for v in report.violations}
    suggestions: list[PlacementSuggestion] = []
    location_of = {v.facility_id: v.location for v in candidates}
    while uncovered and len(suggestions) < k:
        best_id = None
        best_gain: frozenset[str] = frozenset()
        for candidate in candidates:
            gain = cover[candidate.facility_id] & uncovered
            if len(gain) > len(best_gain):
                best_id = candidate.facility_id
                best_gain = gain
        assert best_id is not None  # every uncovered violation covers itself
        suggestions.append(
            PlacementSuggestion(
                location=location_of[best_id],
                covered_facility_ids=best_gain,
                covered_count=len(best_gain),
            )
        )
        uncovered -= best_gain
    return suggestions
