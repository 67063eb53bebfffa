#!/usr/bin/env python3
"""Record API responses into frontend/test/fixtures for the UI contract tests."""

from __future__ import annotations

import json
from pathlib import Path

from fastapi.testclient import TestClient

from cityscan.api import create_app
from cityscan.fixture import FixtureConfig, generate_city
from cityscan.ingest import assemble_dataset

FIXTURE_DIR = Path(__file__).resolve().parent.parent / "frontend" / "test" / "fixtures"


def main() -> None:
    hydrant_city = generate_city(FixtureConfig(seed=42, facilities=120, objects=80))
    shelter_city = generate_city(
        FixtureConfig(seed=43, facilities=0, objects=30, object_kind="shelter")
    )
    dataset = assemble_dataset(
        hydrant_city.facilities,
        hydrant_city.objects + shelter_city.objects,
        hydrant_city.regions,
        source="ui-fixture-42",
    )
    client = TestClient(create_app(dataset))

    recordings = {
        "meta.json": ("/api/meta", {}),
        "neighborhoods.json": ("/api/neighborhoods", {}),
        "violations.json": ("/api/violations", {"kind": "hydrant", "threshold": "30"}),
        "heatmap.json": ("/api/heatmap", {"kind": "hydrant", "threshold": "30"}),
        "violations_zero.json": ("/api/violations", {"kind": "hydrant", "threshold": "5000"}),
        "heatmap_zero.json": ("/api/heatmap", {"kind": "hydrant", "threshold": "5000"}),
        "centrality.json": ("/api/centrality", {"kind": "hydrant", "threshold": "120", "top": "10"}),
        "suggestions.json": ("/api/suggestions", {"kind": "hydrant", "threshold": "30", "k": "5"}),
    }
    FIXTURE_DIR.mkdir(parents=True, exist_ok=True)
    for filename, (path, params) in recordings.items():
        response = client.get(path, params=params)
        response.raise_for_status()
        (FIXTURE_DIR / filename).write_text(json.dumps(response.json(), indent=2) + "\n")
        print(f"recorded {filename} from GET {path}")


if __name__ == "__main__":
    main()
