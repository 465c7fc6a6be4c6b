#pragma once

namespace geotravel {

/// A latitude/longitude pair in degrees. Construction validates the ranges
/// lat in [-90, 90] and lon in [-180, 180].
struct GeoPoint {
  double lat = 0.0;
  double lon = 0.0;

  GeoPoint() = default;
  GeoPoint(double lat_deg, double lon_deg);
};

/// Axis-aligned rectangle given by its south-west and north-east corners.
/// Boxes crossing the antimeridian are rejected at construction.
struct GeoBox {
  GeoPoint south_west;
  GeoPoint north_east;

  GeoBox() = default;
  GeoBox(GeoPoint sw, GeoPoint ne);
};

/// Boundary-inclusive containment test.
bool point_in_box(const GeoPoint& p, const GeoBox& b);

/// True iff the rectangles share at least one point. Edge and corner contact
/// count as overlap.
bool boxes_overlap(const GeoBox& a, const GeoBox& b);

/// Arithmetic centre of the box.
GeoPoint box_centroid(const GeoBox& b);

}  // namespace geotravel
