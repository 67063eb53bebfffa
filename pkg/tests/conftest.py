from __future__ import annotations

import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))  # make tests/oracles.py importable

from cityscan.geo import GeoPoint, PolygonRegion
from cityscan.ingest import Facility, SafetyObject, assemble_dataset

# A Beer-Sheva-sized sandbox for random instances.
CITY_LAT, CITY_LON = 31.252, 34.791
CITY_SPAN = 0.05


def random_point(rng: random.Random, span: float = CITY_SPAN) -> GeoPoint:
    return GeoPoint(CITY_LAT + (rng.random() - 0.5) * span, CITY_LON + (rng.random() - 0.5) * span)


def random_facilities(rng: random.Random, n: int, span: float = CITY_SPAN) -> list[Facility]:
    types = ["daycare", "education", "synagogue", "health_clinic"]
    return [
        Facility(
            id=f"f{i:04d}",
            name=f"facility {i}",
            facility_type=rng.choice(types),
            location=random_point(rng, span),
        )
        for i in range(n)
    ]


def random_objects(rng: random.Random, n: int, kind: str = "hydrant", span: float = CITY_SPAN) -> list[SafetyObject]:
    return [
        SafetyObject(id=f"o{i:04d}", kind=kind, location=random_point(rng, span))
        for i in range(n)
    ]


def square_region(name: str, south: float, west: float, size: float) -> PolygonRegion:
    ring = (
        GeoPoint(south, west),
        GeoPoint(south, west + size),
        GeoPoint(south + size, west + size),
        GeoPoint(south + size, west),
    )
    return PolygonRegion(name=name, rings=(ring,))


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20_26)


@pytest.fixture
def small_dataset(rng):
    facilities = random_facilities(rng, 40)
    objects = random_objects(rng, 60)
    regions = (
        square_region("West", CITY_LAT - CITY_SPAN, CITY_LON - CITY_SPAN, CITY_SPAN),
        square_region("East", CITY_LAT - CITY_SPAN, CITY_LON, CITY_SPAN),
        square_region("North", CITY_LAT, CITY_LON - CITY_SPAN, 2 * CITY_SPAN),
    )
    return assemble_dataset(facilities, objects, regions, source="synthetic")
