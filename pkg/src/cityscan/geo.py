"""Geodesic distance, polygon containment, and a grid-based radius index.

All coordinates are WGS84 decimal degrees. Distances are great-circle
meters on a sphere of mean radius ``EARTH_RADIUS_M``; at city scale the
difference from an ellipsoidal model is negligible next to the tens of
meters that regulation thresholds work in.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

EARTH_RADIUS_M = 6_371_000.0
METERS_PER_DEG_LAT = EARTH_RADIUS_M * math.pi / 180.0
HALF_CIRCUMFERENCE_M = EARTH_RADIUS_M * math.pi

#: Bucket name for points that fall outside every known region.
UNASSIGNED = "UNASSIGNED"


class GeoValidationError(ValueError):
    """Raised for non-finite or out-of-range coordinates and degenerate rings."""


@dataclass(frozen=True)
class GeoPoint:
    """A WGS84 coordinate; latitude and longitude in decimal degrees."""

    lat: float
    lon: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.lat) and math.isfinite(self.lon)):
            raise GeoValidationError(f"non-finite coordinate: ({self.lat}, {self.lon})")
        if not -90.0 <= self.lat <= 90.0:
            raise GeoValidationError(f"latitude {self.lat} outside [-90, 90]")
        if not -180.0 <= self.lon <= 180.0:
            raise GeoValidationError(f"longitude {self.lon} outside [-180, 180]")


@dataclass(frozen=True)
class PolygonRegion:
    """A named region: one outer ring plus zero or more hole rings.

    Rings are implicitly closed (the last vertex connects back to the
    first) and must each contain at least three distinct vertices.
    """

    name: str
    rings: tuple[tuple[GeoPoint, ...], ...]

    def __post_init__(self) -> None:
        if not self.rings:
            raise GeoValidationError(f"region {self.name!r} has no rings")
        for ring in self.rings:
            distinct = {(p.lat, p.lon) for p in ring}
            if len(ring) < 3 or len(distinct) < 3:
                raise GeoValidationError(
                    f"region {self.name!r} has a ring with fewer than 3 distinct vertices"
                )

    @property
    def outer(self) -> tuple[GeoPoint, ...]:
        return self.rings[0]

    @property
    def holes(self) -> tuple[tuple[GeoPoint, ...], ...]:
        return self.rings[1:]

    def bounding_box(self) -> tuple[float, float, float, float]:
        """(min_lat, min_lon, max_lat, max_lon) over the outer ring."""
        lats = [p.lat for p in self.outer]
        lons = [p.lon for p in self.outer]
        return min(lats), min(lons), max(lats), max(lons)


def haversine_distance(a: GeoPoint, b: GeoPoint) -> float:
    """Great-circle distance between two points, in meters.

    Symmetric bit-for-bit: both coordinate deltas pass through ``abs``
    before conversion, so evaluation order is identical for (a, b) and
    (b, a). Returns exactly 0.0 when the coordinates are identical.
    """
    d_phi = math.radians(abs(a.lat - b.lat))
    d_lam = math.radians(abs(a.lon - b.lon))
    phi1 = math.radians(a.lat)
    phi2 = math.radians(b.lat)
    h = math.sin(d_phi / 2.0) ** 2 + math.cos(phi1) * math.cos(phi2) * math.sin(d_lam / 2.0) ** 2
    h = min(1.0, h)  # guard rounding above 1 near antipodes
    return 2.0 * EARTH_RADIUS_M * math.atan2(math.sqrt(h), math.sqrt(1.0 - h))


def _on_segment(px: float, py: float, ax: float, ay: float, bx: float, by: float) -> bool:
    cross = (bx - ax) * (py - ay) - (by - ay) * (px - ax)
    if cross != 0.0:
        return False
    return min(ax, bx) <= px <= max(ax, bx) and min(ay, by) <= py <= max(ay, by)


def point_in_polygon(p: GeoPoint, region: PolygonRegion) -> bool:
    """Even-odd (ray casting) containment in planar lon/lat space.

    A point exactly on any ring edge counts as inside, so facilities
    sitting on a shared boundary are never dropped. Holes are handled by
    the even-odd rule itself: crossing into a hole flips parity back out.
    """
    x, y = p.lon, p.lat
    inside = False
    for ring in region.rings:
        n = len(ring)
        for i in range(n):
            a = ring[i]
            b = ring[(i + 1) % n]
            if _on_segment(x, y, a.lon, a.lat, b.lon, b.lat):
                return True
            if (a.lat > y) != (b.lat > y):
                x_cross = a.lon + (y - a.lat) * (b.lon - a.lon) / (b.lat - a.lat)
                if x < x_cross:
                    inside = not inside
    return inside


def assign_neighborhood(p: GeoPoint, regions: Sequence[PolygonRegion]) -> str:
    """Name of the first region containing ``p``; UNASSIGNED when none does.

    Input order breaks ties for overlapping regions, which makes the
    assignment deterministic even on imperfect boundary data.
    """
    for region in regions:
        low_lat, low_lon, high_lat, high_lon = region.bounding_box()
        if not (low_lat <= p.lat <= high_lat and low_lon <= p.lon <= high_lon):
            continue
        if point_in_polygon(p, region):
            return region.name
    return UNASSIGNED


class SpatialIndex:
    """Uniform lat/lon grid over (id, GeoPoint) pairs.

    The grid only narrows the candidate set; every query re-checks exact
    haversine distances, so results are identical to a brute-force scan.
    Instances are immutable once built.
    """

    def __init__(self, points: Iterable[tuple[str, GeoPoint]], cell_size_m: float = 100.0):
        entries = list(points)
        seen: set[str] = set()
        for pid, _ in entries:
            if pid in seen:
                raise ValueError(f"duplicate id in spatial index: {pid!r}")
            seen.add(pid)

        self._points: tuple[tuple[str, GeoPoint], ...] = tuple(entries)
        self._cell_size_m = max(float(cell_size_m), 1.0)

        mean_lat = 0.0
        if entries:
            mean_lat = sum(p.lat for _, p in entries) / len(entries)
        self._lat_edge_deg = self._cell_size_m / METERS_PER_DEG_LAT
        cos_mean = max(math.cos(math.radians(mean_lat)), 1e-6)
        self._lon_edge_deg = self._cell_size_m / (METERS_PER_DEG_LAT * cos_mean)
        self._n_lon_cells = max(1, math.ceil(360.0 / self._lon_edge_deg))

        cells: dict[tuple[int, int], list[tuple[str, GeoPoint]]] = {}
        for pid, point in entries:
            cells.setdefault(self._cell_of(point), []).append((pid, point))
        self._cells = cells

    def __len__(self) -> int:
        return len(self._points)

    def _cell_of(self, p: GeoPoint) -> tuple[int, int]:
        return self._lat_index(p.lat), self._lon_index(p.lon)

    def _lat_index(self, lat: float) -> int:
        return math.floor((lat + 90.0) / self._lat_edge_deg)

    def _lon_index(self, lon: float) -> int:
        j = math.floor((lon + 180.0) / self._lon_edge_deg)
        return min(max(j, 0), self._n_lon_cells - 1)

    def _lon_cell_range(self, lon_min: float, lon_max: float) -> set[int]:
        """Lon cell indices covering [lon_min, lon_max], wrapping the antimeridian."""
        if lon_max - lon_min >= 360.0:
            return set(range(self._n_lon_cells))
        intervals: list[tuple[float, float]] = []
        if lon_min < -180.0:
            intervals.append((lon_min + 360.0, 180.0))
            intervals.append((-180.0, lon_max))
        elif lon_max > 180.0:
            intervals.append((lon_min, 180.0))
            intervals.append((-180.0, lon_max - 360.0))
        else:
            intervals.append((lon_min, lon_max))
        cells: set[int] = set()
        for low, high in intervals:
            cells.update(range(self._lon_index(low), self._lon_index(high) + 1))
        return cells

    def query_within(self, center: GeoPoint, radius_m: float) -> list[tuple[str, float]]:
        """All indexed points within ``radius_m`` (inclusive) of ``center``.

        Returns (id, distance) pairs sorted by distance then id.
        """
        if not radius_m >= 0:  # also rejects NaN
            raise ValueError(f"invalid radius: {radius_m}")
        if not self._points:
            return []

        # Conservative spherical cap bounding box; slight inflation keeps
        # rounding from ever excluding a qualifying point.
        delta_rad = radius_m / EARTH_RADIUS_M
        delta_deg = math.degrees(delta_rad) * (1.0 + 1e-9) + 1e-12
        lat_min = center.lat - delta_deg
        lat_max = center.lat + delta_deg

        if lat_max >= 90.0 or lat_min <= -90.0:
            lon_cells = set(range(self._n_lon_cells))
        else:
            sin_ratio = math.sin(min(delta_rad, math.pi / 2.0)) / math.cos(math.radians(center.lat))
            if sin_ratio >= 1.0:
                lon_cells = set(range(self._n_lon_cells))
            else:
                lam_deg = math.degrees(math.asin(sin_ratio)) * (1.0 + 1e-9) + 1e-12
                lon_cells = self._lon_cell_range(center.lon - lam_deg, center.lon + lam_deg)

        i_low = self._lat_index(max(lat_min, -90.0))
        i_high = self._lat_index(min(lat_max, 90.0))

        n_cells = (i_high - i_low + 1) * len(lon_cells)
        if n_cells > max(256, 4 * len(self._points)):
            candidates: Iterable[tuple[str, GeoPoint]] = self._points
        else:
            gathered: list[tuple[str, GeoPoint]] = []
            for i in range(i_low, i_high + 1):
                for j in lon_cells:
                    gathered.extend(self._cells.get((i, j), ()))
            candidates = gathered

        hits = []
        for pid, point in candidates:
            d = haversine_distance(center, point)
            if d <= radius_m:
                hits.append((pid, d))
        hits.sort(key=lambda item: (item[1], item[0]))
        return hits

    def nearest(self, center: GeoPoint) -> tuple[str, float] | None:
        """The closest indexed point to ``center``; ties break by id ascending.

        Doubles the probe radius until something is found: any non-empty
        radius query already contains the global minimum, so its first
        entry is exact.
        """
        if not self._points:
            return None
        radius = self._cell_size_m
        while True:
            hits = self.query_within(center, radius)
            if hits:
                return hits[0]
            # A half-circumference probe covers the whole sphere, so the
            # loop always terminates on a non-empty index.
            radius = min(radius * 2.0, HALF_CIRCUMFERENCE_M)


def build_spatial_index(
    points: Iterable[tuple[str, GeoPoint]], cell_size_m: float = 100.0
) -> SpatialIndex:
    """Build an immutable radius/nearest index; duplicate ids are rejected."""
    return SpatialIndex(points, cell_size_m=cell_size_m)
