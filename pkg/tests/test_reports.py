from __future__ import annotations

import csv
import io

from cityscan.compliance import aggregate_by_type, detect_violations, preset_rule
from cityscan.geo import GeoPoint, UNASSIGNED, point_in_polygon
from cityscan.ingest import Facility, assemble_dataset, parse_boundaries_geojson
from cityscan.reports import (
    bars_table_csv,
    build_heatmap_document,
    report_to_dict,
    violations_to_csv,
)
from conftest import CITY_LAT, CITY_LON, square_region
import json


def small_city():
    facilities = [
        Facility("f1", "Day One", "daycare", GeoPoint(CITY_LAT + 0.01, CITY_LON + 0.01)),
        Facility("f2", "School", "education", GeoPoint(CITY_LAT + 0.02, CITY_LON + 0.01)),
        Facility("f3", "Stray", "daycare", GeoPoint(CITY_LAT + 0.4, CITY_LON + 0.4)),
    ]
    regions = (
        square_region("Alef", CITY_LAT, CITY_LON, 0.05),
        square_region("Bet", CITY_LAT + 0.05, CITY_LON, 0.05),
    )
    return assemble_dataset(facilities, [], regions, source="test")


class TestReportDocument:
    def test_canonical_fields(self):
        ds = small_city()
        report = detect_violations(ds, preset_rule("hydrant"))
        doc = report_to_dict(report)
        assert set(doc) == {"rule", "totals", "violations", "by_neighborhood", "by_type"}
        assert doc["rule"]["kind"] == "hydrant"
        assert doc["rule"]["threshold_m"] == 30.0
        assert doc["totals"] == {"facilities_checked": 3, "violation_count": 3}
        first = doc["violations"][0]
        assert set(first) == {
            "facility_id",
            "name",
            "facility_type",
            "neighborhood",
            "location",
            "nearest_object_id",
            "nearest_distance_m",
        }
        assert first["nearest_object_id"] is None  # no hydrants in this city

    def test_csv_flattening(self):
        ds = small_city()
        report = detect_violations(ds, preset_rule("hydrant"))
        rows = list(csv.DictReader(io.StringIO(violations_to_csv(report))))
        assert len(rows) == report.totals.violation_count
        assert rows[0]["facility_id"] == report.violations[0].facility_id
        assert rows[0]["nearest_distance_m"] == ""


class TestHeatmapDocument:
    def test_feature_counts_and_sum(self):
        ds = small_city()
        report = detect_violations(ds, preset_rule("hydrant"))
        doc = build_heatmap_document(ds, report)
        assert doc["type"] == "FeatureCollection"
        names = [f["properties"]["name"] for f in doc["features"]]
        assert names == ["Alef", "Bet", UNASSIGNED]  # 2 regions + populated stray bucket
        total = sum(f["properties"]["violation_count"] for f in doc["features"])
        assert total == report.totals.violation_count
        for f in doc["features"]:
            props = f["properties"]
            assert props["rule_kind"] == "hydrant"
            assert props["threshold_m"] == 30.0
            assert props["facilities_checked"] >= props["violation_count"] >= 0

    def test_unassigned_feature_is_point_at_centroid(self):
        ds = small_city()
        doc = build_heatmap_document(ds, detect_violations(ds, preset_rule("hydrant")))
        stray = doc["features"][-1]
        assert stray["geometry"]["type"] == "Point"
        lon, lat = stray["geometry"]["coordinates"]
        assert (lat, lon) == (CITY_LAT + 0.4, CITY_LON + 0.4)

    def test_no_unassigned_feature_when_all_assigned(self):
        ds = small_city()
        ds = ds.subset(neighborhoods=["Alef", "Bet"])
        report = detect_violations(ds, preset_rule("hydrant"))
        doc = build_heatmap_document(ds, report)
        assert [f["properties"]["name"] for f in doc["features"]] == ["Alef", "Bet"]

    def test_multipart_region_merges_into_one_feature(self):
        geojson = {
            "type": "FeatureCollection",
            "features": [
                {
                    "type": "Feature",
                    "properties": {"name": "Ramot"},
                    "geometry": {
                        "type": "MultiPolygon",
                        "coordinates": [
                            [[[34.0, 31.0], [34.1, 31.0], [34.1, 31.1], [34.0, 31.1], [34.0, 31.0]]],
                            [[[34.3, 31.0], [34.4, 31.0], [34.4, 31.1], [34.3, 31.1], [34.3, 31.0]]],
                        ],
                    },
                }
            ],
        }
        regions = parse_boundaries_geojson(json.dumps(geojson))
        assert len(regions) == 2  # expanded on ingest
        ds = assemble_dataset([], [], regions, source="test")
        doc = build_heatmap_document(ds, detect_violations(ds, preset_rule("hydrant")))
        (feature,) = doc["features"]  # re-merged for the choropleth
        assert feature["geometry"]["type"] == "MultiPolygon"
        assert len(feature["geometry"]["coordinates"]) == 2

    def test_zero_violation_city(self):
        regions = (square_region("Only", 31.0, 34.0, 1.0),)
        ds = assemble_dataset([], [], regions, source="test")
        doc = build_heatmap_document(ds, detect_violations(ds, preset_rule("hydrant")))
        assert [f["properties"]["violation_count"] for f in doc["features"]] == [0]

    def test_geometry_contains_its_facilities(self):
        ds = small_city()
        doc = build_heatmap_document(ds, detect_violations(ds, preset_rule("hydrant")))
        alef = doc["features"][0]
        ring = alef["geometry"]["coordinates"][0]
        assert ring[0] == ring[-1]  # closed GeoJSON ring
        region = ds.neighborhoods[0]
        assert point_in_polygon(GeoPoint(CITY_LAT + 0.01, CITY_LON + 0.01), region)


class TestBarsTable:
    def test_all_zero_matrix(self):
        # compliant city: hydrant co-located with the only facility
        from cityscan.ingest import SafetyObject

        regions = (square_region("A", 31.0, 34.0, 1.0), square_region("B", 32.0, 34.0, 1.0))
        ds = assemble_dataset(
            [Facility("f1", "x", "daycare", GeoPoint(31.5, 34.5))],
            [SafetyObject("h1", "hydrant", GeoPoint(31.5, 34.5))],
            regions,
            source="t",
        )
        report = detect_violations(ds, preset_rule("hydrant"))
        table = bars_table_csv(report)
        rows = table.strip().split("\n")
        assert rows[0] == "facility_type,A,B,TOTAL"
        assert rows[1] == "daycare,0,0,0"
        assert rows[-1] == "TOTAL,0,0,0"

    def test_single_violation_one_cell(self):
        regions = (square_region("Alef", CITY_LAT, CITY_LON, 0.05),)
        ds = assemble_dataset(
            [Facility("f1", "x", "daycare", GeoPoint(CITY_LAT + 0.01, CITY_LON + 0.01))],
            [],
            regions,
            source="t",
        )
        table = bars_table_csv(detect_violations(ds, preset_rule("hydrant")))
        rows = table.strip().split("\n")
        assert rows == ["facility_type,Alef,TOTAL", "daycare,1,1", "TOTAL,1,1"]

    def test_matrix_matches_aggregate(self):
        ds = small_city()
        report = detect_violations(ds, preset_rule("hydrant"))
        matrix = aggregate_by_type(report)
        parsed = list(csv.reader(io.StringIO(bars_table_csv(report))))
        header = parsed[0]
        assert header[0] == "facility_type" and header[-1] == "TOTAL"
        neighborhoods = header[1:-1]
        body = {row[0]: row[1:] for row in parsed[1:]}
        for ftype, row in matrix.items():
            cells = body[ftype]
            assert [int(c) for c in cells[:-1]] == [row[n] for n in neighborhoods]
            assert int(cells[-1]) == sum(row.values())
        total_row = body["TOTAL"]
        assert int(total_row[-1]) == report.totals.violation_count
