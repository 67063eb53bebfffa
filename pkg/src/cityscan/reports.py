"""Canonical export documents: violation reports, heatmaps, bar tables."""

from __future__ import annotations

import csv
import io

from .compliance import PlacementSuggestion, RegulationRule, ViolationReport
from .geo import UNASSIGNED, PolygonRegion
from .ingest import CityDataset


def rule_to_dict(rule: RegulationRule) -> dict:
    return {
        "kind": rule.kind,
        "threshold_m": rule.threshold_m,
        "label": rule.label,
        "exclude_types": list(rule.exclude_types),
    }


def report_to_dict(report: ViolationReport) -> dict:
    """Canonical violation-report document; key order is deterministic."""
    return {
        "rule": rule_to_dict(report.rule),
        "totals": {
            "facilities_checked": report.totals.facilities_checked,
            "violation_count": report.totals.violation_count,
        },
        "violations": [
            {
                "facility_id": v.facility_id,
                "name": v.name,
                "facility_type": v.facility_type,
                "neighborhood": v.neighborhood,
                "location": {"lat": v.location.lat, "lon": v.location.lon},
                "nearest_object_id": v.nearest_object_id,
                "nearest_distance_m": v.nearest_distance_m,
            }
            for v in report.violations
        ],
        "by_neighborhood": dict(report.by_neighborhood),
        "by_type": {t: dict(row) for t, row in report.by_type_and_neighborhood.items()},
    }


def violations_to_csv(report: ViolationReport) -> str:
    """Flat CSV of the violations array, one row per violating facility."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(
        [
            "facility_id",
            "name",
            "facility_type",
            "neighborhood",
            "lat",
            "lon",
            "nearest_object_id",
            "nearest_distance_m",
        ]
    )
    for v in report.violations:
        writer.writerow(
            [
                v.facility_id,
                v.name,
                v.facility_type,
                v.neighborhood,
                repr(v.location.lat),
                repr(v.location.lon),
                v.nearest_object_id if v.nearest_object_id is not None else "",
                repr(v.nearest_distance_m) if v.nearest_distance_m is not None else "",
            ]
        )
    return buf.getvalue()


def _geometry_for(parts: list[PolygonRegion]) -> dict:
    polygons = []
    for region in parts:
        rings = [
            [[p.lon, p.lat] for p in ring] + [[ring[0].lon, ring[0].lat]] for ring in region.rings
        ]
        polygons.append(rings)
    if len(polygons) == 1:
        return {"type": "Polygon", "coordinates": polygons[0]}
    return {"type": "MultiPolygon", "coordinates": polygons}


def build_heatmap_document(dataset: CityDataset, report: ViolationReport) -> dict:
    """Choropleth-ready FeatureCollection of per-neighborhood violation counts.

    One feature per neighborhood name (multi-part regions merge into a
    MultiPolygon), plus a synthetic point feature for the UNASSIGNED
    bucket when it is populated. Counts sum to the report total.
    """
    rule = report.rule
    excluded = set(rule.exclude_types)
    checked = [f for f in dataset.facilities if f.facility_type not in excluded]
    checked_by_neighborhood: dict[str, int] = {}
    for f in checked:
        checked_by_neighborhood[f.neighborhood] = checked_by_neighborhood.get(f.neighborhood, 0) + 1

    parts_by_name: dict[str, list[PolygonRegion]] = {}
    for region in dataset.neighborhoods:
        parts_by_name.setdefault(region.name, []).append(region)

    features = []
    for name in dataset.neighborhood_names:
        features.append(
            {
                "type": "Feature",
                "properties": {
                    "name": name,
                    "violation_count": report.by_neighborhood.get(name, 0),
                    "facilities_checked": checked_by_neighborhood.get(name, 0),
                    "rule_kind": rule.kind,
                    "threshold_m": rule.threshold_m,
                },
                "geometry": _geometry_for(parts_by_name[name]),
            }
        )

    if UNASSIGNED in report.by_neighborhood:
        stray = [f for f in checked if f.neighborhood == UNASSIGNED]
        lat = sum(f.location.lat for f in stray) / len(stray)
        lon = sum(f.location.lon for f in stray) / len(stray)
        features.append(
            {
                "type": "Feature",
                "properties": {
                    "name": UNASSIGNED,
                    "violation_count": report.by_neighborhood[UNASSIGNED],
                    "facilities_checked": checked_by_neighborhood.get(UNASSIGNED, 0),
                    "rule_kind": rule.kind,
                    "threshold_m": rule.threshold_m,
                },
                "geometry": {"type": "Point", "coordinates": [lon, lat]},
            }
        )

    return {"type": "FeatureCollection", "features": features}


def bars_table_csv(report: ViolationReport) -> str:
    """Facility-type x neighborhood matrix as CSV with TOTAL row and column."""
    neighborhoods = list(report.by_neighborhood.keys())
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["facility_type", *neighborhoods, "TOTAL"])
    column_totals = {name: 0 for name in neighborhoods}
    for ftype, row in report.by_type_and_neighborhood.items():
        counts = [row.get(name, 0) for name in neighborhoods]
        for name, count in zip(neighborhoods, counts):
            column_totals[name] += count
        writer.writerow([ftype, *counts, sum(counts)])
    writer.writerow(
        ["TOTAL", *(column_totals[name] for name in neighborhoods), sum(column_totals.values())]
    )
    return buf.getvalue()


def suggestions_to_dict(rule: RegulationRule, suggestions: list[PlacementSuggestion]) -> dict:
    """Placement suggestions in pick order."""
    return {
        "rule": rule_to_dict(rule),
        "suggestions": [
            {
                "location": {"lat": s.location.lat, "lon": s.location.lon},
                "covered_count": s.covered_count,
                "covered_facility_ids": sorted(s.covered_facility_ids),
            }
            for s in suggestions
        ],
    }
