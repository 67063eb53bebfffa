"""Parsing of facility/object CSVs and boundary GeoJSON into a city snapshot."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, replace
from datetime import datetime, timezone
from typing import Iterable, Sequence

from .geo import GeoPoint, GeoValidationError, PolygonRegion, UNASSIGNED, assign_neighborhood

#: Facility categories named by the source data; anything else is kept verbatim.
KNOWN_FACILITY_TYPES = frozenset(
    {
        "community_center",
        "daycare",
        "gas_station",
        "education",
        "health_clinic",
        "sport_center",
        "synagogue",
    }
)

OBJECT_KINDS = ("hydrant", "shelter")

#: The 15 Beer-Sheva neighborhood names, shipped as fixture vocabulary only.
BEER_SHEVA_NEIGHBORHOODS = (
    "Alef",
    "Bet",
    "Gimel",
    "Dalet",
    "Hei",
    "Vav",
    "Tet",
    "Ramot",
    "Down-Town",
    "Yod-Alef",
    "Old-Town",
    "Ashan",
    "Noi-Beka",
    "Darom",
    "Nahot",
)

POINTS_CSV_COLUMNS = ("id", "name", "type", "lat", "lon")


class IngestError(ValueError):
    """File-level ingestion failure (bad header, duplicate id, bad feature)."""


@dataclass(frozen=True)
class Facility:
    id: str
    name: str
    facility_type: str
    location: GeoPoint
    neighborhood: str = UNASSIGNED


@dataclass(frozen=True)
class SafetyObject:
    id: str
    kind: str  # "hydrant" | "shelter"
    location: GeoPoint
    neighborhood: str = UNASSIGNED


@dataclass(frozen=True)
class RowRejection:
    row: int  # physical line number; the header is line 1
    reason: str


@dataclass(frozen=True)
class ParseResult:
    records: tuple
    rejected: tuple[RowRejection, ...]

    def require_clean(self, source: str = "input") -> tuple:
        """Return records, or fail loudly if any row was rejected."""
        if self.rejected:
            first = self.rejected[0]
            raise IngestError(
                f"{source}: row {first.row}: {first.reason}"
                + (f" (+{len(self.rejected) - 1} more rejected rows)" if len(self.rejected) > 1 else "")
            )
        return self.records


@dataclass(frozen=True)
class DatasetMetadata:
    source: str
    loaded_at: str


@dataclass(frozen=True)
class CityDataset:
    """Immutable snapshot of facilities, safety objects, and boundaries."""

    facilities: tuple[Facility, ...]
    objects: tuple[SafetyObject, ...]
    neighborhoods: tuple[PolygonRegion, ...]
    metadata: DatasetMetadata

    @property
    def neighborhood_names(self) -> tuple[str, ...]:
        """Unique region names in first-appearance order."""
        seen: dict[str, None] = {}
        for region in self.neighborhoods:
            seen.setdefault(region.name, None)
        return tuple(seen)

    @property
    def facility_types(self) -> tuple[str, ...]:
        return tuple(sorted({f.facility_type for f in self.facilities}))

    def objects_of_kind(self, kind: str) -> tuple[SafetyObject, ...]:
        return tuple(o for o in self.objects if o.kind == kind)

    def counts(self) -> dict[str, int]:
        return {
            "facilities": len(self.facilities),
            "hydrants": sum(1 for o in self.objects if o.kind == "hydrant"),
            "shelters": sum(1 for o in self.objects if o.kind == "shelter"),
        }

    def facilities_by_neighborhood(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for f in self.facilities:
            out[f.neighborhood] = out.get(f.neighborhood, 0) + 1
        return out

    def subset(
        self,
        neighborhoods: Sequence[str] | None = None,
        facility_types: Sequence[str] | None = None,
    ) -> "CityDataset":
        """Restrict the facility list; objects and boundaries are kept whole.

        Objects stay complete because a facility's compliance depends on
        every safety object in the city, not just those in the selection.
        """
        wanted_n = set(neighborhoods) if neighborhoods else None
        wanted_t = set(facility_types) if facility_types else None
        kept = tuple(
            f
            for f in self.facilities
            if (wanted_n is None or f.neighborhood in wanted_n)
            and (wanted_t is None or f.facility_type in wanted_t)
        )
        return CityDataset(kept, self.objects, self.neighborhoods, self.metadata)


def _as_text(source) -> str:
    if isinstance(source, bytes):
        return source.decode("utf-8")
    if isinstance(source, str):
        return source
    data = source.read()
    return data.decode("utf-8") if isinstance(data, bytes) else data


def _read_header(reader, source: str) -> dict[str, int]:
    try:
        header = next(reader)
    except StopIteration:
        raise IngestError(f"{source}: empty file, expected a header row") from None
    positions = {name.strip(): idx for idx, name in enumerate(header)}
    missing = [col for col in POINTS_CSV_COLUMNS if col not in positions]
    if missing:
        raise IngestError(f"{source}: header missing columns: {', '.join(missing)}")
    return positions


def _parse_point_rows(source, schema_label: str):
    """Yield (row_number, id, name, type, point_or_reason) for each data row."""
    text = _as_text(source)
    reader = csv.reader(io.StringIO(text))
    try:
        rows = list(reader)
    except csv.Error as e:
        raise IngestError(f"{schema_label}: malformed CSV: {e}") from None
    reader = iter(rows)
    cols = _read_header(reader, schema_label)
    for i, row in enumerate(reader):
        row_no = i + 2
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) <= max(cols.values()):
            yield row_no, None, None, None, "too few columns"
            continue
        raw_id = row[cols["id"]].strip()
        if not raw_id:
            yield row_no, None, None, None, "missing id"
            continue
        try:
            lat = float(row[cols["lat"]])
            lon = float(row[cols["lon"]])
        except ValueError:
            yield row_no, raw_id, None, None, (
                f"unparseable coordinates: lat={row[cols['lat']]!r} lon={row[cols['lon']]!r}"
            )
            continue
        try:
            point = GeoPoint(lat, lon)
        except GeoValidationError as e:
            yield row_no, raw_id, None, None, str(e)
            continue
        yield row_no, raw_id, row[cols["name"]], row[cols["type"]].strip(), point


def parse_facilities_csv(source) -> ParseResult:
    """Parse the points CSV under the facility schema.

    Unknown facility-type strings are preserved as-is rather than
    rejected; the open-data vocabulary routinely exceeds the known set.
    """
    records: list[Facility] = []
    rejected: list[RowRejection] = []
    seen: set[str] = set()
    for row_no, raw_id, name, ftype, payload in _parse_point_rows(source, "facilities"):
        if isinstance(payload, str):
            rejected.append(RowRejection(row_no, payload))
            continue
        if not ftype:
            rejected.append(RowRejection(row_no, "missing facility type"))
            continue
        if raw_id in seen:
            raise IngestError(f"duplicate facility id: {raw_id!r} (row {row_no})")
        seen.add(raw_id)
        records.append(Facility(id=raw_id, name=name, facility_type=ftype, location=payload))
    return ParseResult(tuple(records), tuple(rejected))


def parse_objects_csv(source, kind: str) -> ParseResult:
    """Parse the points CSV under the object schema.

    The ``type`` column is ignored; the object kind comes from the caller.
    """
    if kind not in OBJECT_KINDS:
        raise IngestError(f"unknown object kind: {kind!r}")
    records: list[SafetyObject] = []
    rejected: list[RowRejection] = []
    seen: set[str] = set()
    for row_no, raw_id, _name, _ftype, payload in _parse_point_rows(source, f"{kind} objects"):
        if isinstance(payload, str):
            rejected.append(RowRejection(row_no, payload))
            continue
        if raw_id in seen:
            raise IngestError(f"duplicate {kind} id: {raw_id!r} (row {row_no})")
        seen.add(raw_id)
        records.append(SafetyObject(id=raw_id, kind=kind, location=payload))
    return ParseResult(tuple(records), tuple(rejected))


def _ring_from_coords(coords, region_name: str, feature_idx: int) -> tuple[GeoPoint, ...]:
    points = []
    for pair in coords:
        if not isinstance(pair, (list, tuple)) or len(pair) < 2:
            raise IngestError(f"feature {feature_idx} ({region_name!r}): malformed coordinate {pair!r}")
        lon, lat = pair[0], pair[1]
        try:
            points.append(GeoPoint(float(lat), float(lon)))
        except (TypeError, ValueError, GeoValidationError) as e:
            raise IngestError(f"feature {feature_idx} ({region_name!r}): {e}") from None
    # GeoJSON rings are explicitly closed; our rings close implicitly.
    if len(points) > 1 and points[0] == points[-1]:
        points = points[:-1]
    if len(points) < 3:
        raise IngestError(f"feature {feature_idx} ({region_name!r}): ring with fewer than 3 vertices")
    return tuple(points)


def _region_from_polygon(coords, name: str, feature_idx: int) -> PolygonRegion:
    if not coords:
        raise IngestError(f"feature {feature_idx} ({name!r}): polygon with no rings")
    rings = tuple(_ring_from_coords(ring, name, feature_idx) for ring in coords)
    try:
        return PolygonRegion(name=name, rings=rings)
    except GeoValidationError as e:
        raise IngestError(f"feature {feature_idx}: {e}") from None


def parse_boundaries_geojson(source) -> tuple[PolygonRegion, ...]:
    """Parse a FeatureCollection of named Polygon/MultiPolygon features.

    MultiPolygon features expand into one region per part, all sharing the
    feature's name.
    """
    try:
        doc = json.loads(_as_text(source))
    except json.JSONDecodeError as e:
        raise IngestError(f"boundaries: invalid JSON: {e}") from None
    if not isinstance(doc, dict) or doc.get("type") != "FeatureCollection":
        raise IngestError("boundaries: expected a GeoJSON FeatureCollection")

    regions: list[PolygonRegion] = []
    features = doc.get("features", [])
    if not isinstance(features, list):
        raise IngestError("boundaries: 'features' must be an array")
    for idx, feature in enumerate(features):
        if not isinstance(feature, dict):
            raise IngestError(f"feature {idx}: not an object")
        props = feature.get("properties")
        props = props if isinstance(props, dict) else {}
        name = props.get("name")
        if not isinstance(name, str) or not name:
            raise IngestError(f"feature {idx}: missing string property 'name'")
        geometry = feature.get("geometry")
        geometry = geometry if isinstance(geometry, dict) else {}
        gtype = geometry.get("type")
        coords = geometry.get("coordinates")
        if gtype == "Polygon":
            regions.append(_region_from_polygon(coords, name, idx))
        elif gtype == "MultiPolygon":
            if not coords:
                raise IngestError(f"feature {idx} ({name!r}): MultiPolygon with no parts")
            for part in coords:
                regions.append(_region_from_polygon(part, name, idx))
        else:
            raise IngestError(f"feature {idx} ({name!r}): unsupported geometry type {gtype!r}")
    return tuple(regions)


def assemble_dataset(
    facilities: Iterable[Facility],
    objects: Iterable[SafetyObject],
    regions: Iterable[PolygonRegion],
    source: str = "",
) -> CityDataset:
    """Assign every entity its neighborhood and freeze the snapshot."""
    region_list = tuple(regions)
    placed_f = tuple(
        replace(f, neighborhood=assign_neighborhood(f.location, region_list)) for f in facilities
    )
    placed_o = tuple(
        replace(o, neighborhood=assign_neighborhood(o.location, region_list)) for o in objects
    )

    seen_f: set[str] = set()
    for f in placed_f:
        if f.id in seen_f:
            raise IngestError(f"duplicate facility id: {f.id!r}")
        seen_f.add(f.id)
    seen_o: set[tuple[str, str]] = set()
    for o in placed_o:
        if (o.kind, o.id) in seen_o:
            raise IngestError(f"duplicate {o.kind} id: {o.id!r}")
        seen_o.add((o.kind, o.id))

    metadata = DatasetMetadata(
        source=source, loaded_at=datetime.now(timezone.utc).isoformat(timespec="seconds")
    )
    return CityDataset(placed_f, placed_o, region_list, metadata)


# --- canonical writers (round-trip counterparts of the parsers) ---


def facilities_to_csv(facilities: Iterable[Facility]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(POINTS_CSV_COLUMNS)
    for f in facilities:
        writer.writerow([f.id, f.name, f.facility_type, repr(f.location.lat), repr(f.location.lon)])
    return buf.getvalue()


def objects_to_csv(objects: Iterable[SafetyObject]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(POINTS_CSV_COLUMNS)
    for o in objects:
        writer.writerow([o.id, "", o.kind, repr(o.location.lat), repr(o.location.lon)])
    return buf.getvalue()


def regions_to_geojson(regions: Iterable[PolygonRegion]) -> dict:
    features = []
    for region in regions:
        rings = [
            [[p.lon, p.lat] for p in ring] + [[ring[0].lon, ring[0].lat]] for ring in region.rings
        ]
        features.append(
            {
                "type": "Feature",
                "properties": {"name": region.name},
                "geometry": {"type": "Polygon", "coordinates": rings},
            }
        )
    return {"type": "FeatureCollection", "features": features}
