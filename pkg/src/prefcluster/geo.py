"""Validated geographic coordinates and great-circle distance.

All public interfaces take and return degrees; radians appear only inside
the distance formula. Distances are kilometers on a sphere of radius
``EARTH_RADIUS_KM``, so every value lies in [0, pi * R].
"""

from __future__ import annotations

from dataclasses import dataclass
from math import asin, cos, radians, sin, sqrt
from typing import Final

__all__ = [
    "EARTH_RADIUS_KM",
    "MAX_DISTANCE_KM",
    "GeoPoint",
    "OutOfRangeError",
    "validate_point",
    "haversine_km",
]

EARTH_RADIUS_KM: Final[float] = 6371.0
MAX_DISTANCE_KM: Final[float] = 3.141592653589793 * EARTH_RADIUS_KM  # half the great circle


class OutOfRangeError(ValueError):
    """A latitude or longitude lies outside its legal range.

    Carries the offending field name ("lat" or "lon") and the rejected value.
    """

    def __init__(self, field: str, value: float):
        self.field = field
        self.value = value
        limit = 90.0 if field == "lat" else 180.0
        super().__init__(f"{field} {value!r} out of range [-{limit:g}, {limit:g}]")


@dataclass(frozen=True)
class GeoPoint:
    """A latitude/longitude pair in degrees. Out-of-range values are rejected."""

    lat: float
    lon: float

    def __post_init__(self):
        if not isinstance(self.lat, (int, float)) or not (-90.0 <= self.lat <= 90.0):
            raise OutOfRangeError("lat", self.lat)
        if not isinstance(self.lon, (int, float)) or not (-180.0 <= self.lon <= 180.0):
            raise OutOfRangeError("lon", self.lon)


def validate_point(lat: float, lon: float) -> GeoPoint:
    """Return a GeoPoint iff both coordinates are in range; never clamps."""
    return GeoPoint(float(lat), float(lon))


def haversine_km(a: GeoPoint, b: GeoPoint) -> float:
    """Great-circle distance between two points, in kilometers.

    Symmetric, zero iff the coordinates are identical, and bounded by
    half the circumference of the sphere.
    """
    lat1, lat2 = radians(a.lat), radians(b.lat)
    dlat = lat2 - lat1
    dlon = radians(b.lon) - radians(a.lon)
    h = sin(dlat / 2.0) ** 2 + cos(lat1) * cos(lat2) * sin(dlon / 2.0) ** 2
    # Floating error can push h a hair above 1 for antipodal points.
    if h > 1.0:
        h = 1.0
    return 2.0 * EARTH_RADIUS_KM * asin(sqrt(h))
