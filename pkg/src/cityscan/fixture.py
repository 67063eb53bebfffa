"""Seeded synthetic city generator with brute-force ground truth.

The real municipal extract cannot be redistributed, so tests and demos
run against generated cities: a rectangular grid of neighborhoods with
uniformly scattered facilities and safety objects. The generator records
which facilities violate a given threshold by an all-pairs distance scan,
independent of the indexed graph pipeline under test.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .geo import GeoPoint, PolygonRegion, haversine_distance
from .ingest import (
    BEER_SHEVA_NEIGHBORHOODS,
    Facility,
    KNOWN_FACILITY_TYPES,
    SafetyObject,
    facilities_to_csv,
    objects_to_csv,
    regions_to_geojson,
)

DEFAULT_THRESHOLDS_M = (30.0, 50.0)


@dataclass(frozen=True)
class FixtureConfig:
    seed: int
    facilities: int
    objects: int
    neighborhoods: int = 15
    object_kind: str = "hydrant"
    center_lat: float = 31.252
    center_lon: float = 34.791
    span_lat_deg: float = 0.055
    span_lon_deg: float = 0.065
    stray_fraction: float = 0.03  # facilities placed outside every boundary


@dataclass(frozen=True)
class FixtureCity:
    config: FixtureConfig
    facilities: tuple[Facility, ...]
    objects: tuple[SafetyObject, ...]
    regions: tuple[PolygonRegion, ...]


def _neighborhood_names(count: int) -> list[str]:
    if count == len(BEER_SHEVA_NEIGHBORHOODS):
        return list(BEER_SHEVA_NEIGHBORHOODS)
    return [f"N{i + 1:02d}" for i in range(count)]


def _grid_regions(config: FixtureConfig) -> tuple[PolygonRegion, ...]:
    names = _neighborhood_names(config.neighborhoods)
    cols = max(1, math.ceil(math.sqrt(config.neighborhoods)))
    south = config.center_lat - config.span_lat_deg / 2
    west = config.center_lon - config.span_lon_deg / 2
    rows = max(1, math.ceil(config.neighborhoods / cols))
    d_lat = config.span_lat_deg / rows
    d_lon = config.span_lon_deg / cols

    regions = []
    for i, name in enumerate(names):
        r, c = divmod(i, cols)
        lat0 = south + r * d_lat
        lon0 = west + c * d_lon
        ring = (
            GeoPoint(lat0, lon0),
            GeoPoint(lat0, lon0 + d_lon),
            GeoPoint(lat0 + d_lat, lon0 + d_lon),
            GeoPoint(lat0 + d_lat, lon0),
        )
        regions.append(PolygonRegion(name=name, rings=(ring,)))
    return tuple(regions)


def generate_city(config: FixtureConfig) -> FixtureCity:
    rng = random.Random(config.seed)
    regions = _grid_regions(config)
    south = config.center_lat - config.span_lat_deg / 2
    west = config.center_lon - config.span_lon_deg / 2

    type_pool = sorted(KNOWN_FACILITY_TYPES)
    facilities = []
    n_stray = round(config.facilities * config.stray_fraction)
    for i in range(config.facilities):
        if i < config.facilities - n_stray:
            lat = south + rng.random() * config.span_lat_deg
            lon = west + rng.random() * config.span_lon_deg
        else:
            # east of every boundary: guarantees an UNASSIGNED bucket
            lat = south + rng.random() * config.span_lat_deg
            lon = west + config.span_lon_deg * (1.1 + rng.random() * 0.2)
        ftype = rng.choice(type_pool)
        facilities.append(
            Facility(
                id=f"f{i:04d}",
                name=f"{ftype.replace('_', ' ').title()} {i:03d}",
                facility_type=ftype,
                location=GeoPoint(lat, lon),
            )
        )

    objects = []
    prefix = config.object_kind[0]
    for i in range(config.objects):
        lat = south + rng.random() * config.span_lat_deg
        lon = west + rng.random() * config.span_lon_deg
        objects.append(
            SafetyObject(id=f"{prefix}{i:04d}", kind=config.object_kind, location=GeoPoint(lat, lon))
        )

    return FixtureCity(config, tuple(facilities), tuple(objects), regions)


def ground_truth_violations(
    facilities: Sequence[Facility],
    objects: Sequence[SafetyObject],
    thresholds_m: Sequence[float] = DEFAULT_THRESHOLDS_M,
) -> dict[str, list[str]]:
    """Violating facility ids per threshold, by exhaustive distance scan."""
    out: dict[str, list[str]] = {f"{t:g}": [] for t in thresholds_m}
    for f in facilities:
        min_d = math.inf
        for o in objects:
            d = haversine_distance(f.location, o.location)
            if d < min_d:
                min_d = d
        for t in thresholds_m:
            if min_d > t:
                out[f"{t:g}"].append(f.id)
    return out


def write_fixture(
    city: FixtureCity, out_dir: str | Path, thresholds_m: Sequence[float] = DEFAULT_THRESHOLDS_M
) -> dict:
    """Write CSVs, boundaries, and the ground-truth manifest; returns the manifest."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "facilities.csv").write_text(facilities_to_csv(city.facilities), encoding="utf-8")
    (out / "objects.csv").write_text(objects_to_csv(city.objects), encoding="utf-8")
    (out / "boundaries.geojson").write_text(
        json.dumps(regions_to_geojson(city.regions), indent=2) + "\n", encoding="utf-8"
    )
    manifest = {
        "seed": city.config.seed,
        "object_kind": city.config.object_kind,
        "counts": {
            "facilities": len(city.facilities),
            "objects": len(city.objects),
            "neighborhoods": city.config.neighborhoods,
        },
        "neighborhood_names": _neighborhood_names(city.config.neighborhoods),
        "violations_by_threshold": ground_truth_violations(
            city.facilities, city.objects, thresholds_m
        ),
    }
    (out / "ground_truth.json").write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    return manifest
