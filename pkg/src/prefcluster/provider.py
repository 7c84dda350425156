"""Fetching venue data: a geocoder and category-scoped venue search.

Two interchangeable backends sit behind the same three operations. The
fixture backend reads a directory of JSON files and is fully
deterministic, which is what tests and demos use. The live backend talks
HTTPS to a configured provider and is the only code that knows the
provider's field names. Regardless of backend, search results are
post-filtered by great-circle distance and deduplicated before use.
"""

from __future__ import annotations

import json
import logging
import os
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Optional, Protocol

import requests

from .engine import Node, PreferenceClass, PreferenceTree
from .geo import GeoPoint, haversine_km

__all__ = [
    "MAP_STYLES",
    "QuerySpec",
    "Venue",
    "SpecValidationError",
    "ProviderError",
    "NotFoundError",
    "ProviderUnavailableError",
    "RateLimitedError",
    "Backend",
    "FixtureBackend",
    "LiveBackend",
    "load_credentials",
    "geocode",
    "search_venues",
    "fetch_tree",
]

logger = logging.getLogger(__name__)

MAP_STYLES = ("openstreetmap", "terrain")

MAX_RADIUS_KM = 50.0
MAX_PREFERENCES = 30
MAX_LIMIT_PER_CLASS = 100
RADIUS_SLACK_KM = 0.1

RETRY_BACKOFF_S = (0.5, 1.0, 2.0)

ENV_PROVIDER_ID = "PREFCLUST_PROVIDER_ID"
ENV_PROVIDER_SECRET = "PREFCLUST_PROVIDER_SECRET"
ENV_CREDENTIALS_FILE = "PREFCLUST_CREDENTIALS_FILE"


class SpecValidationError(ValueError):
    """A query field violates its bounds; ``field`` names the offender."""

    def __init__(self, field_name: str, detail: str):
        self.field = field_name
        super().__init__(f"{field_name}: {detail}")


class ProviderError(RuntimeError):
    pass


class NotFoundError(ProviderError):
    pass


class ProviderUnavailableError(ProviderError):
    pass


class RateLimitedError(ProviderError):
    def __init__(self, message: str, retry_after_s: float | None = None):
        self.retry_after_s = retry_after_s
        super().__init__(message)


@dataclass(frozen=True)
class Venue:
    name: str
    point: GeoPoint
    category: str
    source_id: str

    def __post_init__(self):
        if not self.name:
            raise ValueError("venue name must be non-empty")


@dataclass(frozen=True)
class QuerySpec:
    """One user request: where to look, how far, and for what, in order."""

    radius_km: float
    preferences: tuple[str, ...]
    place: Optional[str] = None
    center: Optional[GeoPoint] = None
    limit_per_class: int = 50
    map_style: str = "openstreetmap"

    def __post_init__(self):
        if (self.place is None) == (self.center is None):
            raise SpecValidationError("location", "exactly one of place or center required")
        if self.place is not None and not self.place.strip():
            raise SpecValidationError("location", "place must be non-empty")
        if not (0.0 < self.radius_km <= MAX_RADIUS_KM):
            raise SpecValidationError(
                "radius_km", f"must be in (0, {MAX_RADIUS_KM:g}], got {self.radius_km!r}"
            )
        if not (1 <= len(self.preferences) <= MAX_PREFERENCES):
            raise SpecValidationError(
                "preferences", f"need 1..{MAX_PREFERENCES} entries, got {len(self.preferences)}"
            )
        seen = set()
        for pref in self.preferences:
            if not pref.strip():
                raise SpecValidationError("preferences", "preference names must be non-empty")
            if pref.strip().casefold() in seen:
                raise SpecValidationError("preferences", f"duplicate preference {pref!r}")
            seen.add(pref.strip().casefold())
        if not (1 <= self.limit_per_class <= MAX_LIMIT_PER_CLASS):
            raise SpecValidationError(
                "limit_per_class", f"must be in 1..{MAX_LIMIT_PER_CLASS}, got {self.limit_per_class}"
            )
        if self.map_style not in MAP_STYLES:
            raise SpecValidationError(
                "map_style", f"must be one of {'/'.join(MAP_STYLES)}, got {self.map_style!r}"
            )


class Backend(Protocol):
    """A venue/geocoder source. Implementations must be thread-shareable."""

    name: str

    def geocode_raw(self, place: str) -> GeoPoint: ...

    def venues_raw(
        self, center: GeoPoint, radius_km: float, category: str, limit: int
    ) -> list[Venue]: ...


def load_credentials(env: dict | None = None) -> tuple[Optional[str], Optional[str]]:
    """Provider credentials from the environment, or from the key=value file
    named by PREFCLUST_CREDENTIALS_FILE. Returns (client_id, client_secret)."""
    env = os.environ if env is None else env
    client_id = env.get(ENV_PROVIDER_ID)
    client_secret = env.get(ENV_PROVIDER_SECRET)
    if client_id and client_secret:
        return client_id, client_secret
    path = env.get(ENV_CREDENTIALS_FILE)
    if path and Path(path).is_file():
        values: dict[str, str] = {}
        for line in Path(path).read_text(encoding="utf-8").splitlines():
            line = line.strip()
            if not line or line.startswith("#") or "=" not in line:
                continue
            key, _, value = line.partition("=")
            values[key.strip().lower()] = value.strip()
        client_id = client_id or values.get("provider_id")
        client_secret = client_secret or values.get("provider_secret")
    return client_id, client_secret


class FixtureBackend:
    """Deterministic offline backend reading a directory of JSON files.

    ``<place>.geocode.json`` holds ``{"lat": .., "lon": ..}``;
    ``<place>.<category>.venues.json`` holds an array of
    ``{"name", "lat", "lon", "id"}``. Place and category are lowercased for
    lookup. Venue queries are resolved by center, so every place's file for
    the category is read and the radius filter does the scoping.
    """

    name = "fixture"

    def __init__(self, directory: str | Path):
        self.directory = Path(directory)

    def geocode_raw(self, place: str) -> GeoPoint:
        path = self.directory / f"{place.strip().lower()}.geocode.json"
        if not path.is_file():
            raise NotFoundError(f"no fixture geocode entry for {place!r}")
        try:
            doc = json.loads(path.read_text(encoding="utf-8"))
            return GeoPoint(float(doc["lat"]), float(doc["lon"]))
        except (KeyError, ValueError, json.JSONDecodeError) as exc:
            raise ProviderUnavailableError(f"broken fixture file {path.name}: {exc}") from exc

    def venues_raw(
        self, center: GeoPoint, radius_km: float, category: str, limit: int
    ) -> list[Venue]:
        pattern = f"*.{category.strip().lower()}.venues.json"
        venues: list[Venue] = []
        for path in sorted(self.directory.glob(pattern)):
            place = path.name.split(".", 1)[0]
            try:
                entries = json.loads(path.read_text(encoding="utf-8"))
            except json.JSONDecodeError as exc:
                raise ProviderUnavailableError(f"broken fixture file {path.name}: {exc}") from exc
            for i, entry in enumerate(entries):
                venues.append(
                    Venue(
                        name=str(entry["name"]),
                        point=GeoPoint(float(entry["lat"]), float(entry["lon"])),
                        category=category,
                        source_id=str(entry.get("id", f"fixture:{place}:{i}")),
                    )
                )
        return venues


class LiveBackend:
    """HTTP backend for a venue provider with a generic JSON wire format.

    This adapter is the only place aware of the provider's endpoint shapes:
    GET {base}/geocode?q=<place> returning {"lat", "lon"}, and
    GET {base}/venues?lat&lon&radius_km&category&limit returning
    {"venues": [{"name", "lat", "lon", "id"}]}. Transient failures are
    retried three times with 0.5/1/2 s backoff; 429 responses honor
    Retry-After.
    """

    name = "live"

    def __init__(
        self,
        base_url: str,
        client_id: Optional[str] = None,
        client_secret: Optional[str] = None,
        session: Optional[requests.Session] = None,
        sleep: Callable[[float], None] = time.sleep,
    ):
        if not base_url:
            raise ProviderUnavailableError("provider.base_url is not configured")
        self.base_url = base_url.rstrip("/")
        self.client_id = client_id
        self.client_secret = client_secret
        self.session = session or requests.Session()
        self.sleep = sleep

    @property
    def has_credentials(self) -> bool:
        return bool(self.client_id and self.client_secret)

    def _get(self, path: str, params: dict) -> dict:
        if self.has_credentials:
            params = {**params, "client_id": self.client_id, "client_secret": self.client_secret}
        url = f"{self.base_url}{path}"
        last_error: Exception | None = None
        for attempt in range(len(RETRY_BACKOFF_S) + 1):
            try:
                response = self.session.get(url, params=params, timeout=30)
            except requests.RequestException as exc:
                last_error = exc
            else:
                if response.status_code == 404:
                    raise NotFoundError(f"{path}: not found")
                if response.status_code in (401, 403):
                    raise ProviderUnavailableError(
                        f"{path}: authentication rejected (status {response.status_code}); "
                        "check provider credentials"
                    )
                if response.status_code == 429:
                    retry_after = _parse_retry_after(response)
                    if attempt < len(RETRY_BACKOFF_S):
                        self.sleep(retry_after if retry_after is not None else RETRY_BACKOFF_S[attempt])
                        continue
                    raise RateLimitedError(f"{path}: rate limited", retry_after)
                if response.status_code >= 500:
                    last_error = ProviderUnavailableError(
                        f"{path}: server error {response.status_code}"
                    )
                else:
                    try:
                        return response.json()
                    except ValueError as exc:
                        last_error = ProviderUnavailableError(f"{path}: bad JSON: {exc}")
            if attempt < len(RETRY_BACKOFF_S):
                self.sleep(RETRY_BACKOFF_S[attempt])
        raise ProviderUnavailableError(f"{path}: giving up after retries: {last_error}")

    def geocode_raw(self, place: str) -> GeoPoint:
        doc = self._get("/geocode", {"q": place})
        try:
            return GeoPoint(float(doc["lat"]), float(doc["lon"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise ProviderUnavailableError(f"/geocode: unusable response: {exc}") from exc

    def venues_raw(
        self, center: GeoPoint, radius_km: float, category: str, limit: int
    ) -> list[Venue]:
        doc = self._get(
            "/venues",
            {
                "lat": center.lat,
                "lon": center.lon,
                "radius_km": radius_km,
                "category": category,
                "limit": limit,
            },
        )
        entries = doc.get("venues")
        if not isinstance(entries, list):
            raise ProviderUnavailableError("/venues: unusable response: missing venues list")
        venues = []
        for i, entry in enumerate(entries):
            try:
                venues.append(
                    Venue(
                        name=str(entry["name"]),
                        point=GeoPoint(float(entry["lat"]), float(entry["lon"])),
                        category=category,
                        source_id=str(entry.get("id", f"live:{i}")),
                    )
                )
            except (KeyError, TypeError, ValueError) as exc:
                logger.warning("skipping unusable venue entry %d: %s", i, exc)
        return venues


def _parse_retry_after(response) -> float | None:
    value = response.headers.get("Retry-After") if response.headers else None
    if value is None:
        return None
    try:
        return max(0.0, float(value))
    except ValueError:
        return None


def geocode(place: str, backend: Backend) -> GeoPoint:
    """Resolve a place name to one representative coordinate."""
    if not place or not place.strip():
        raise SpecValidationError("location", "place must be non-empty")
    return backend.geocode_raw(place.strip())


def search_venues(
    center: GeoPoint,
    radius_km: float,
    category: str,
    limit: int,
    backend: Backend,
) -> list[Venue]:
    """Category search around a center.

    Whatever the backend claims, results are filtered to radius_km + 0.1 km
    by great-circle distance, deduplicated by (name, coordinates rounded to
    5 decimals), and truncated to ``limit``, preserving backend order.
    """
    if not (0.0 < radius_km <= MAX_RADIUS_KM):
        raise SpecValidationError("radius_km", f"must be in (0, {MAX_RADIUS_KM:g}]")
    raw = backend.venues_raw(center, radius_km, category, limit)
    seen: set[tuple[str, float, float]] = set()
    venues: list[Venue] = []
    for venue in raw:
        if haversine_km(center, venue.point) > radius_km + RADIUS_SLACK_KM:
            continue
        key = (venue.name, round(venue.point.lat, 5), round(venue.point.lon, 5))
        if key in seen:
            continue
        seen.add(key)
        venues.append(venue)
        if len(venues) == limit:
            break
    return venues


def fetch_tree(spec: QuerySpec, backend: Backend) -> PreferenceTree:
    """Build the preference tree for a query: one class per preference, in
    order; preferences with no venues stay as empty classes."""
    center = spec.center if spec.center is not None else geocode(spec.place, backend)
    classes = []
    for i, pref in enumerate(spec.preferences):
        try:
            venues = search_venues(center, spec.radius_km, pref, spec.limit_per_class, backend)
        except ProviderError as exc:
            raise type(exc)(f"while fetching class {pref!r}: {exc}") from exc
        classes.append(PreferenceClass(pref, tuple(Node(i, v.name, v.point) for v in venues)))
    return PreferenceTree(tuple(classes))
