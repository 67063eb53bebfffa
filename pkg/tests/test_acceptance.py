"""Acceptance gate: one test per criterion, each printing a PASS line.

Run with ``pytest -s tests/test_acceptance.py`` to see the per-criterion
lines. Every tolerance is pinned here; nothing is deferred.
"""

from __future__ import annotations

import json
import math
import random
import time

import pytest
from fastapi.testclient import TestClient

from cityscan.api import create_app
from cityscan.cli import main
from cityscan.compliance import (
    RegulationRule,
    detect_violations,
    suggest_placements,
)
from cityscan.fixture import FixtureConfig, generate_city, write_fixture
from cityscan.geo import EARTH_RADIUS_M, GeoPoint, PolygonRegion, haversine_distance, point_in_polygon
from cityscan.graph import build_bipartite_graph, isolated_vertices, raw_id
from cityscan.ingest import (
    SafetyObject,
    assemble_dataset,
    parse_boundaries_geojson,
    parse_facilities_csv,
    parse_objects_csv,
)
from cityscan.reports import build_heatmap_document, bars_table_csv
from conftest import random_facilities, random_objects
from oracles import (
    brute_force_bipartite_edges,
    brute_force_min_distances,
    min_edge_distance,
    reference_great_circle_m,
    winding_contains,
)
from test_compliance import two_cluster_city
from test_geo import random_star_ring

GRAPH_SUITE_SEED = 987_001
GRAPH_SUITE_THRESHOLDS = (0.0, 10.0, 30.0, 50.0, 100.0, 500.0)


def graph_suite_instances(rng: random.Random):
    """The 200 seeded random instances shared by the two oracle criteria."""
    for _ in range(200):
        n, m = rng.randint(0, 500), rng.randint(0, 500)
        threshold = rng.choice(GRAPH_SUITE_THRESHOLDS)
        yield random_facilities(rng, n), random_objects(rng, m), threshold


def test_oracle_equivalence_graphs():
    started = time.perf_counter()
    rng = random.Random(GRAPH_SUITE_SEED)
    checked = 0
    for facilities, objects, threshold in graph_suite_instances(rng):
        graph = build_bipartite_graph(facilities, objects, threshold)
        got_edges = {(raw_id(e.u), raw_id(e.v)) for e in graph.edges}
        assert got_edges == brute_force_bipartite_edges(facilities, objects, threshold)

        got_isolated = {raw_id(v) for v in isolated_vertices(graph, "left")}
        nearest = brute_force_min_distances(facilities, objects)
        if objects:
            expected_isolated = {fid for fid, (_, d) in nearest.items() if d > threshold}
        else:
            expected_isolated = {f.id for f in facilities}
        assert got_isolated == expected_isolated
        checked += 1
    elapsed = time.perf_counter() - started
    assert checked == 200
    assert elapsed < 60.0
    print(f"PASS oracle equivalence (graphs): 200/200 instances exact in {elapsed:.1f}s (< 60s)")


def test_oracle_equivalence_violations():
    rng = random.Random(GRAPH_SUITE_SEED)
    checked = 0
    for facilities, objects, threshold in graph_suite_instances(rng):
        if threshold == 0.0:
            continue  # regulation thresholds are strictly positive; the
            # zero-threshold instances are covered by the graph-level check
        dataset = assemble_dataset(facilities, objects, [])
        report = detect_violations(dataset, RegulationRule("hydrant", threshold))
        nearest = brute_force_min_distances(facilities, objects)
        if objects:
            expected = {fid for fid, (_, d) in nearest.items() if d > threshold}
        else:
            expected = {f.id for f in facilities}
        assert {v.facility_id for v in report.violations} == expected
        for v in report.violations:
            if objects:
                oid, dist = nearest[v.facility_id]
                assert v.nearest_object_id == oid
                assert v.nearest_distance_m == pytest.approx(dist, rel=1e-9, abs=1e-9)
                assert v.nearest_distance_m > threshold
            else:
                assert v.nearest_object_id is None and v.nearest_distance_m is None
        checked += 1
    print(f"PASS oracle equivalence (violations): {checked} positive-threshold instances exact")


def test_geodesic_correctness():
    rng = random.Random(55_100)
    worst = 0.0
    for i in range(10_000):
        if i % 2 == 0:  # global pair
            a = GeoPoint(rng.uniform(-90, 90), rng.uniform(-180, 180))
            b = GeoPoint(rng.uniform(-90, 90), rng.uniform(-180, 180))
        else:  # city-scale pair, exercises the short-distance regime
            a = GeoPoint(rng.uniform(-60, 60), rng.uniform(-179, 179))
            b = GeoPoint(a.lat + rng.uniform(-0.05, 0.05), a.lon + rng.uniform(-0.05, 0.05))
        got = haversine_distance(a, b)
        ref = reference_great_circle_m(a.lat, a.lon, b.lat, b.lon)
        if ref > 0:
            worst = max(worst, abs(got - ref) / ref)
    assert worst <= 1e-6

    equator = haversine_distance(GeoPoint(0.0, 0.0), GeoPoint(0.0, 1.0))
    assert equator == pytest.approx(111_194.93, abs=0.01)
    assert equator == pytest.approx(EARTH_RADIUS_M * math.pi / 180.0, rel=1e-12)
    print(
        f"PASS geodesic correctness: 10,000 pairs within 1e-6 relative (worst {worst:.2e}); "
        f"equator degree = {equator:.2f} m"
    )


def test_point_in_polygon_agreement():
    rng = random.Random(771_000)
    polygons = probes = 0
    for _ in range(1000):
        ring_xy = random_star_ring(rng)
        region = PolygonRegion("r", (tuple(GeoPoint(y, x) for x, y in ring_xy),))
        accepted = 0
        attempts = 0
        while accepted < 100 and attempts < 2000:
            attempts += 1
            px, py = rng.uniform(-1.7, 1.7), rng.uniform(-1.7, 1.7)
            if min_edge_distance(px, py, [ring_xy]) < 1e-9:
                continue
            assert point_in_polygon(GeoPoint(py, px), region) == winding_contains(px, py, [ring_xy])
            accepted += 1
        assert accepted == 100
        probes += accepted
        polygons += 1
    print(f"PASS point-in-polygon: {polygons} polygons x 100 probes, 100% agreement ({probes} probes)")


def test_monotonicity_and_conservation_fuzz():
    rng = random.Random(33_000)
    for _ in range(1000):
        facilities = random_facilities(rng, rng.randint(0, 25))
        objects = random_objects(rng, rng.randint(0, 25))
        t_low = rng.uniform(0.0, 200.0)
        t_high = t_low + rng.uniform(0.0, 200.0)

        g_low = build_bipartite_graph(facilities, objects, t_low)
        g_high = build_bipartite_graph(facilities, objects, t_high)
        assert {(e.u, e.v) for e in g_low.edges} <= {(e.u, e.v) for e in g_high.edges}
        assert isolated_vertices(g_high, "left") <= isolated_vertices(g_low, "left")

        dataset = assemble_dataset(facilities, objects, [])
        report_low = detect_violations(dataset, RegulationRule("hydrant", t_low + 1.0))
        report_high = detect_violations(dataset, RegulationRule("hydrant", t_high + 1.0))
        low_ids = {v.facility_id for v in report_low.violations}
        high_ids = {v.facility_id for v in report_high.violations}
        assert high_ids <= low_ids  # raising the threshold never adds a violation

        for report in (report_low, report_high):
            assert (
                report.totals.violation_count
                == len(report.violations)
                == sum(report.by_neighborhood.values())
                == sum(sum(row.values()) for row in report.by_type_and_neighborhood.values())
            )
    print("PASS threshold monotonicity + aggregate conservation: 1000 fuzzed instances")


def test_municipal_scale_shape_check():
    hydrant_city = generate_city(
        FixtureConfig(seed=101, facilities=1000, objects=2596, object_kind="hydrant")
    )
    shelter_city = generate_city(
        FixtureConfig(seed=202, facilities=0, objects=265, object_kind="shelter")
    )

    started = time.perf_counter()
    dataset = assemble_dataset(
        hydrant_city.facilities,
        hydrant_city.objects + shelter_city.objects,
        hydrant_city.regions,
        source="municipal-scale",
    )
    results = {}
    for kind, threshold in (("hydrant", 30.0), ("shelter", 50.0)):
        report = detect_violations(dataset, RegulationRule(kind, threshold))
        heatmap = build_heatmap_document(dataset, report)
        bars = bars_table_csv(report)
        results[kind] = (report, heatmap, bars)
    elapsed = time.perf_counter() - started

    assert dataset.counts() == {"facilities": 1000, "hydrants": 2596, "shelters": 265}
    assert len(dataset.neighborhood_names) == 15
    assert elapsed < 2.0

    for kind, (report, heatmap, bars) in results.items():
        per_feature = {
            f["properties"]["name"]: f["properties"]["violation_count"] for f in heatmap["features"]
        }
        assert per_feature == report.by_neighborhood
        assert sum(per_feature.values()) == report.totals.violation_count
        grand_total = int(bars.strip().splitlines()[-1].split(",")[-1])
        assert grand_total == report.totals.violation_count
        assert report.totals.facilities_checked == 1000
    print(
        "PASS municipal-scale shape check: 1000 facilities / 2596 hydrants / 265 shelters / "
        f"15 neighborhoods analyzed in {elapsed:.2f}s (< 2s); cross-document totals reconcile"
    )


def test_greedy_suggester():
    dataset = two_cluster_city()
    rule = RegulationRule("hydrant", 30.0)
    report = detect_violations(dataset, rule)
    assert report.totals.violation_count == 6

    # exhaustive candidate evaluation: best marginal gains are 4 then 2
    locations = {v.facility_id: v.location for v in report.violations}
    cover = {
        fid: {
            other
            for other, loc in locations.items()
            if haversine_distance(locations[fid], loc) <= rule.threshold_m
        }
        for fid in locations
    }
    assert max(len(c) for c in cover.values()) == 4
    best_first = max(cover.values(), key=len)
    assert max(len(c - best_first) for c in cover.values()) == 2

    suggestions = suggest_placements(dataset, rule, k=2)
    assert [s.covered_count for s in suggestions] == [4, 2]

    new_objects = list(dataset.objects) + [
        SafetyObject(f"placed{i}", "hydrant", s.location) for i, s in enumerate(suggestions)
    ]
    rerun = detect_violations(
        assemble_dataset(dataset.facilities, new_objects, dataset.neighborhoods), rule
    )
    assert rerun.totals.violation_count == 0
    print("PASS greedy suggester: two-cluster picks cover (4, 2); re-run after placement is clean")


@pytest.fixture(scope="module")
def parity_city_dir(tmp_path_factory):
    from cityscan.ingest import objects_to_csv

    out = tmp_path_factory.mktemp("parity-city")
    hydrant_city = generate_city(
        FixtureConfig(seed=314, facilities=150, objects=100, object_kind="hydrant")
    )
    shelter_city = generate_city(
        FixtureConfig(seed=159, facilities=0, objects=40, object_kind="shelter")
    )
    write_fixture(hydrant_city, out)
    (out / "shelters.csv").write_text(objects_to_csv(shelter_city.objects), encoding="utf-8")
    return out


def test_cli_api_parity(parity_city_dir, tmp_path):
    facilities = parse_facilities_csv((parity_city_dir / "facilities.csv").read_text()).records
    hydrants = parse_objects_csv((parity_city_dir / "objects.csv").read_text(), "hydrant").records
    shelters = parse_objects_csv((parity_city_dir / "shelters.csv").read_text(), "shelter").records
    regions = parse_boundaries_geojson((parity_city_dir / "boundaries.geojson").read_text())
    dataset = assemble_dataset(facilities, hydrants + shelters, regions, source="parity")
    client = TestClient(create_app(dataset))

    rng = random.Random(2718)
    names = list(dataset.neighborhood_names)
    types = list(dataset.facility_types)
    compared = 0
    for case in range(20):
        kind = rng.choice(["hydrant", "shelter"])
        threshold = round(rng.uniform(10.0, 400.0), 1)
        filter_n = rng.sample(names, rng.randint(1, 3)) if rng.random() < 0.5 else []
        filter_t = rng.sample(types, rng.randint(1, 2)) if rng.random() < 0.4 else []

        objects_file = "objects.csv" if kind == "hydrant" else "shelters.csv"
        cli_args = [
            "--facilities", str(parity_city_dir / "facilities.csv"),
            "--objects", str(parity_city_dir / objects_file),
            "--kind", kind,
            "--threshold", str(threshold),
            "--boundaries", str(parity_city_dir / "boundaries.geojson"),
        ]
        for name in filter_n:
            cli_args += ["--neighborhood", name]
        for ftype in filter_t:
            cli_args += ["--facility-type", ftype]

        report_path = tmp_path / f"report{case}.json"
        heatmap_path = tmp_path / f"heatmap{case}.json"
        assert main(["analyze", *cli_args, "--output", str(report_path)]) == 0
        assert main(["heatmap", *cli_args, "--output", str(heatmap_path)]) == 0

        params = [("kind", kind), ("threshold", str(threshold))]
        params += [("neighborhood", n) for n in filter_n]
        params += [("facility_type", t) for t in filter_t]

        api_report = client.get("/api/violations", params=params).json()
        cli_report = json.loads(report_path.read_text())
        for key in ("rule", "totals", "violations", "by_neighborhood", "by_type"):
            assert api_report[key] == cli_report[key], f"case {case}: field {key} diverged"

        api_heatmap = client.get("/api/heatmap", params=params).json()
        cli_heatmap = json.loads(heatmap_path.read_text())
        assert api_heatmap == cli_heatmap, f"case {case}: heatmap diverged"

        if case % 5 == 0:
            suggest_path = tmp_path / f"suggest{case}.json"
            assert main(["suggest", *cli_args, "--k", "4", "--output", str(suggest_path)]) == 0
            api_suggest = client.get("/api/suggestions", params=[*params, ("k", "4")]).json()
            cli_suggest = json.loads(suggest_path.read_text())
            for key in ("rule", "suggestions"):
                assert api_suggest[key] == cli_suggest[key], f"case {case}: suggestions diverged"
        compared += 1

    assert compared == 20
    print("PASS CLI/API parity: 20 random (kind, threshold, filter) parameter sets value-equal")
