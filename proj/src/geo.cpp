#include "geotravel/geo.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace geotravel {

GeoPoint::GeoPoint(double lat_deg, double lon_deg) : lat(lat_deg), lon(lon_deg) {
  if (!(lat >= -90.0 && lat <= 90.0))
    throw std::invalid_argument("latitude out of range: " + std::to_string(lat));
  if (!(lon >= -180.0 && lon <= 180.0))
    throw std::invalid_argument("longitude out of range: " + std::to_string(lon));
}

GeoBox::GeoBox(GeoPoint sw, GeoPoint ne) : south_west(sw), north_east(ne) {
  if (south_west.lat > north_east.lat || south_west.lon > north_east.lon)
    throw std::invalid_argument("box corners out of order (south-west must not exceed north-east)");
}

bool point_in_box(const GeoPoint& p, const GeoBox& b) {
  return p.lat >= b.south_west.lat && p.lat <= b.north_east.lat &&
         p.lon >= b.south_west.lon && p.lon <= b.north_east.lon;
}

bool boxes_overlap(const GeoBox& a, const GeoBox& b) {
  return a.south_west.lat <= b.north_east.lat && b.south_west.lat <= a.north_east.lat &&
         a.south_west.lon <= b.north_east.lon && b.south_west.lon <= a.north_east.lon;
}

GeoPoint box_centroid(const GeoBox& b) {
  return GeoPoint((b.south_west.lat + b.north_east.lat) / 2.0,
                  (b.south_west.lon + b.north_east.lon) / 2.0);
}

}  // namespace geotravel
