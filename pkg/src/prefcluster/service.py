"""HTTP JSON API around the selection pipeline, plus static webui hosting.

The service is stateless: every request re-runs the pure engine, so
identical requests return identical bodies. Computation happens only in
the core modules; handlers here just validate, dispatch and serialize.
Errors use one envelope: {"error": {"code", "message", "field"?}}.
"""

from __future__ import annotations

import json
import logging
import mimetypes
import time
from dataclasses import dataclass, field as dataclass_field
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import FileResponse, JSONResponse
from pydantic import BaseModel, ConfigDict, Field
from starlette.exceptions import HTTPException as StarletteHTTPException

from . import __version__
from .dataio import TreeParseError, parse_tree_json, result_to_document
from .engine import EmptyTreeError, Node, PreferenceTree, jjcluster
from .geo import haversine_km, validate_point
from .provider import (
    Backend,
    NotFoundError,
    ProviderError,
    QuerySpec,
    RateLimitedError,
    SpecValidationError,
    fetch_tree,
)
from .render import legend, to_geojson

__all__ = ["ServiceSettings", "create_app", "ApiError"]

logger = logging.getLogger("prefcluster.service")


@dataclass
class ServiceSettings:
    backend: Backend
    tiles: dict[str, str] = dataclass_field(default_factory=dict)
    ui_dist: Optional[Path] = None


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str, field_name: str | None = None):
        self.status = status
        self.code = code
        self.message = message
        self.field_name = field_name
        super().__init__(message)

    def response(self) -> JSONResponse:
        body: dict = {"error": {"code": self.code, "message": self.message}}
        if self.field_name:
            body["error"]["field"] = self.field_name
        return JSONResponse(status_code=self.status, content=body)


class CenterBody(BaseModel):
    lat: float
    lon: float


class InlineNodeBody(BaseModel):
    name: str
    lat: float
    lon: float


class InlineClassBody(BaseModel):
    model_config = ConfigDict(populate_by_name=True)
    class_name: str = Field(alias="class")
    nodes: list[InlineNodeBody]


class ClusterRequestBody(BaseModel):
    """Either a location-based query (place or center, radius, preferences)
    or an inline tree; supplying both is rejected."""

    model_config = ConfigDict(populate_by_name=True)

    location: Optional[str] = None
    center: Optional[CenterBody] = None
    radius_km: Optional[float] = None
    preferences: Optional[list[str]] = None
    limit_per_class: int = 50
    map_style: str = "openstreetmap"
    tree: Optional[list[InlineClassBody]] = None


def _tree_from_inline(inline: list[InlineClassBody]) -> PreferenceTree:
    doc = [
        {"class": c.class_name, "nodes": [n.model_dump() for n in c.nodes]}
        for c in inline
    ]
    try:
        return parse_tree_json(json.dumps(doc))
    except TreeParseError as exc:
        location = getattr(exc, "location", None)
        raise ApiError(400, "validation", str(exc), str(location) if location else "tree") from exc


def _spec_from_body(body: ClusterRequestBody) -> QuerySpec:
    center = None
    if body.center is not None:
        try:
            center = validate_point(body.center.lat, body.center.lon)
        except ValueError as exc:
            raise ApiError(400, "validation", str(exc), "center") from exc
    missing = [
        name
        for name, value in (
            ("radius_km", body.radius_km),
            ("preferences", body.preferences),
        )
        if value is None
    ]
    if body.location is None and center is None:
        missing.insert(0, "location")
    if missing:
        raise ApiError(
            400, "validation", f"missing required field(s): {', '.join(missing)}", missing[0]
        )
    try:
        return QuerySpec(
            radius_km=body.radius_km,
            preferences=tuple(body.preferences),
            place=body.location,
            center=center,
            limit_per_class=body.limit_per_class,
            map_style=body.map_style,
        )
    except SpecValidationError as exc:
        raise ApiError(400, "validation", str(exc), exc.field) from exc


def _geo_metric(a: Node, b: Node) -> float:
    return haversine_km(a.point, b.point)


def create_app(settings: ServiceSettings) -> FastAPI:
    app = FastAPI(title="prefcluster", version=__version__, docs_url=None, redoc_url=None)

    @app.exception_handler(ApiError)
    async def handle_api_error(request: Request, exc: ApiError):
        return exc.response()

    @app.exception_handler(StarletteHTTPException)
    async def handle_http_exception(request: Request, exc: StarletteHTTPException):
        code = "not_found" if exc.status_code == 404 else "http_error"
        return ApiError(exc.status_code, code, str(exc.detail)).response()

    @app.exception_handler(RequestValidationError)
    async def handle_request_validation(request: Request, exc: RequestValidationError):
        errors = exc.errors()
        field_name = None
        if errors:
            loc = [str(part) for part in errors[0].get("loc", []) if part != "body"]
            field_name = ".".join(loc) or None
            message = f"{field_name or 'body'}: {errors[0].get('msg', 'invalid')}"
        else:  # pragma: no cover
            message = "invalid request body"
        return ApiError(400, "validation", message, field_name).response()

    @app.middleware("http")
    async def log_requests(request: Request, call_next):
        started = time.perf_counter()
        response = await call_next(request)
        elapsed_ms = (time.perf_counter() - started) * 1000.0
        logger.info(
            "%s %s %d %.1fms", request.method, request.url.path, response.status_code, elapsed_ms
        )
        return response

    @app.get("/api/health")
    def health():
        body = {"status": "ok", "version": __version__, "backend": settings.backend.name}
        if settings.backend.name == "live" and not getattr(settings.backend, "has_credentials", True):
            body["credential_warning"] = True
        return body

    @app.post("/api/cluster")
    def cluster(body: ClusterRequestBody):
        explicit = body.model_fields_set
        if body.tree is not None:
            conflicting = sorted(
                explicit & {"location", "center", "radius_km", "preferences"}
            )
            if conflicting:
                raise ApiError(
                    400,
                    "validation",
                    f"request mixes an inline tree with location fields: {', '.join(conflicting)}",
                    "tree",
                )
            tree = _tree_from_inline(body.tree)
        else:
            spec = _spec_from_body(body)
            try:
                tree = fetch_tree(spec, settings.backend)
            except NotFoundError as exc:
                raise ApiError(404, "not_found", str(exc)) from exc
            except RateLimitedError as exc:
                raise ApiError(502, "rate_limited", str(exc)) from exc
            except ProviderError as exc:
                raise ApiError(502, "provider_unavailable", str(exc)) from exc

        try:
            result = jjcluster(tree, _geo_metric)
        except EmptyTreeError as exc:
            raise ApiError(422, "empty_tree", str(exc)) from exc

        # Same document shape as the result-file serializer, but numbers stay
        # at full float precision so responses match in-process results.
        response = result_to_document(result)
        response["geojson"] = json.loads(to_geojson(result, tree))
        response["legend"] = [
            {
                "class": entry.class_name,
                "color": entry.color,
                "count": entry.count,
                "selected": entry.selected_name,
            }
            for entry in legend(tree, result)
        ]
        response["query_echo"] = body.model_dump(exclude_unset=True, by_alias=True)
        return response

    @app.get("/ui")
    @app.get("/ui/")
    @app.get("/ui/{asset_path:path}")
    def ui(asset_path: str = ""):
        if ".." in asset_path.split("/"):
            raise ApiError(400, "validation", "path traversal rejected")
        root = settings.ui_dist
        if root is None or not Path(root).is_dir():
            raise ApiError(404, "not_found", "webui not built")
        root = Path(root).resolve()
        target = (root / asset_path).resolve() if asset_path else root / "index.html"
        if not str(target).startswith(str(root)):
            raise ApiError(400, "validation", "path traversal rejected")
        if target.is_dir():
            target = target / "index.html"
        if not target.is_file():
            raise ApiError(404, "not_found", f"no such asset: /ui/{asset_path}")
        media_type = mimetypes.guess_type(target.name)[0] or "application/octet-stream"
        return FileResponse(target, media_type=media_type)

    return app
