"""HTTP service over an immutable dataset snapshot.

Every endpoint is a pure function of (snapshot, query params); analysis
results are memoized per parameter set, which is invisible to clients.
The dataset is attached at startup and never mutated, so concurrent
requests need no coordination beyond the cache lock.
"""

from __future__ import annotations

import math
import threading

from fastapi import FastAPI, Query, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from .compliance import (
    PRESET_THRESHOLDS_M,
    RegulationRule,
    detect_violations,
    rank_objects_for_maintenance,
    suggest_placements,
)
from .geo import UNASSIGNED
from .ingest import CityDataset, regions_to_geojson
from .reports import build_heatmap_document, report_to_dict, suggestions_to_dict


class ApiError(Exception):
    def __init__(self, status_code: int, message: str, param: str | None = None):
        super().__init__(message)
        self.status_code = status_code
        self.message = message
        self.param = param


def _require_dataset(request: Request) -> CityDataset:
    dataset = request.app.state.dataset
    if dataset is None:
        raise ApiError(503, "dataset not loaded yet, retry shortly", None)
    return dataset


def _parse_kind(kind: str) -> str:
    if kind not in PRESET_THRESHOLDS_M:
        raise ApiError(400, f"unknown kind {kind!r}, expected hydrant or shelter", "kind")
    return kind


def _parse_threshold(raw: str | None, kind: str) -> float:
    if raw is None:
        return PRESET_THRESHOLDS_M[kind]
    try:
        value = float(raw)
    except ValueError:
        raise ApiError(400, f"threshold must be a number, got {raw!r}", "threshold") from None
    if not math.isfinite(value) or value <= 0:
        raise ApiError(400, f"threshold must be positive, got {raw!r}", "threshold")
    return value


def _parse_count(raw: str | None, default: int, param: str) -> int:
    if raw is None:
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ApiError(400, f"{param} must be an integer, got {raw!r}", param) from None
    if value < 1:
        raise ApiError(400, f"{param} must be >= 1, got {value}", param)
    return value


def create_app(dataset: CityDataset | None = None, ui_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="cityscan")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    app.state.dataset = dataset
    app.state.report_cache = {}
    app.state.cache_lock = threading.Lock()

    @app.exception_handler(ApiError)
    async def _api_error(request: Request, exc: ApiError):
        headers = {"Retry-After": "1"} if exc.status_code == 503 else None
        return JSONResponse(
            status_code=exc.status_code,
            content={"error": exc.message, "param": exc.param},
            headers=headers,
        )

    def analyze(request, kind, threshold, neighborhoods, facility_types):
        """Detect violations for the given params, memoized per parameter set."""
        dataset = _require_dataset(request)
        kind = _parse_kind(kind)
        threshold_m = _parse_threshold(threshold, kind)
        known_n = set(dataset.neighborhood_names) | {UNASSIGNED}
        unknown = {
            "neighborhood": [n for n in neighborhoods if n not in known_n],
            "facility_type": [t for t in facility_types if t not in set(dataset.facility_types)],
        }
        key = (kind, threshold_m, tuple(sorted(set(neighborhoods))), tuple(sorted(set(facility_types))))
        cached = app.state.report_cache.get(key)
        if cached is None:
            sub = dataset.subset(neighborhoods or None, facility_types or None)
            report = detect_violations(sub, RegulationRule(kind=kind, threshold_m=threshold_m))
            cached = (sub, report)
            with app.state.cache_lock:
                app.state.report_cache[key] = cached
        params = {
            "kind": kind,
            "threshold_m": threshold_m,
            "neighborhood": list(neighborhoods),
            "facility_type": list(facility_types),
        }
        return cached[0], cached[1], params, unknown

    @app.get("/api/meta")
    def meta(request: Request):
        dataset = _require_dataset(request)
        return {
            "counts": dataset.counts(),
            "neighborhoods": list(dataset.neighborhood_names),
            "facility_types": list(dataset.facility_types),
            "rule_presets": dict(PRESET_THRESHOLDS_M),
            "source": dataset.metadata.source,
            "data_timestamp": dataset.metadata.loaded_at,
        }

    @app.get("/api/neighborhoods")
    def neighborhoods(request: Request):
        dataset = _require_dataset(request)
        return regions_to_geojson(dataset.neighborhoods)

    @app.get("/api/violations")
    def violations(
        request: Request,
        kind: str = Query("hydrant"),
        threshold: str | None = Query(None),
        neighborhood: list[str] = Query([]),
        facility_type: list[str] = Query([]),
    ):
        _, report, params, unknown = analyze(request, kind, threshold, neighborhood, facility_type)
        return {"params": params, "unknown": unknown, **report_to_dict(report)}

    @app.get("/api/heatmap")
    def heatmap(
        request: Request,
        kind: str = Query("hydrant"),
        threshold: str | None = Query(None),
        neighborhood: list[str] = Query([]),
        facility_type: list[str] = Query([]),
    ):
        sub, report, _, _ = analyze(request, kind, threshold, neighborhood, facility_type)
        return build_heatmap_document(sub, report)

    @app.get("/api/centrality")
    def centrality(
        request: Request,
        kind: str = Query("hydrant"),
        threshold: str | None = Query(None),
        neighborhood: list[str] = Query([]),
        facility_type: list[str] = Query([]),
        top: str | None = Query(None),
    ):
        dataset = _require_dataset(request)
        kind = _parse_kind(kind)
        threshold_m = _parse_threshold(threshold, kind)
        top_k = _parse_count(top, 20, "top")
        sub = dataset.subset(neighborhood or None, facility_type or None)
        ranked = rank_objects_for_maintenance(
            sub, RegulationRule(kind=kind, threshold_m=threshold_m), top_k
        )
        locations = {o.id: o.location for o in dataset.objects_of_kind(kind)}
        return {
            "params": {
                "kind": kind,
                "threshold_m": threshold_m,
                "top": top_k,
                "neighborhood": list(neighborhood),
                "facility_type": list(facility_type),
            },
            "objects": [
                {
                    "id": oid,
                    "kind": kind,
                    "lat": locations[oid].lat,
                    "lon": locations[oid].lon,
                    "degree": degree,
                    "normalized": normalized,
                }
                for oid, degree, normalized in ranked
            ],
        }

    @app.get("/api/suggestions")
    def suggestions(
        request: Request,
        kind: str = Query("hydrant"),
        threshold: str | None = Query(None),
        neighborhood: list[str] = Query([]),
        facility_type: list[str] = Query([]),
        k: str | None = Query(None),
    ):
        dataset = _require_dataset(request)
        kind = _parse_kind(kind)
        threshold_m = _parse_threshold(threshold, kind)
        k_count = _parse_count(k, 5, "k")
        rule = RegulationRule(kind=kind, threshold_m=threshold_m)
        sub = dataset.subset(neighborhood or None, facility_type or None)
        picked = suggest_placements(sub, rule, k_count)
        return {
            "params": {
                "kind": kind,
                "threshold_m": threshold_m,
                "k": k_count,
                "neighborhood": list(neighborhood),
                "facility_type": list(facility_type),
            },
            **suggestions_to_dict(rule, picked),
        }

    if ui_dir is not None:
        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app
