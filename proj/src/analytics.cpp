#include "geotravel/analytics.hpp"

#include <algorithm>
#include <json.hpp>
#include <unordered_map>

#include "geotravel/textprep.hpp"
#include "geotravel/time_util.hpp"

namespace geotravel {

using nlohmann::json;

std::array<std::uint64_t, 7> day_of_week_histogram(std::span<const Tweet> tweets,
                                                   int utc_offset_minutes) {
  std::array<std::uint64_t, 7> counts{};
  for (const Tweet& t : tweets) {
    std::int64_t shifted = t.created_at + static_cast<std::int64_t>(utc_offset_minutes) * 60;
    counts[static_cast<std::size_t>(weekday_mon0(shifted))] += 1;
  }
  return counts;
}

UserActivitySummary tweets_per_user_distribution(std::span<const Tweet> tweets) {
  std::unordered_map<std::int64_t, std::uint64_t> per_user;
  for (const Tweet& t : tweets) per_user[t.user_id] += 1;

  UserActivitySummary s;
  s.distinct_users = per_user.size();
  for (const auto& [user, count] : per_user) {
    s.histogram[count] += 1;
    if (count < 10)
      s.band_lt10 += 1;
    else if (count <= 100)
      s.band_10_100 += 1;
    else
      s.band_gt100 += 1;
  }
  return s;
}

HeatmapGrid heatmap_grid(std::span<const Tweet> tweets, const GeoBox& bounds,
                         std::uint32_t rows, std::uint32_t cols) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("grid must be at least 1x1");
  HeatmapGrid grid;
  grid.bounds = bounds;
  grid.rows = rows;
  grid.cols = cols;
  grid.cells.assign(static_cast<std::size_t>(rows) * cols, 0);

  const double lat_span = bounds.north_east.lat - bounds.south_west.lat;
  const double lon_span = bounds.north_east.lon - bounds.south_west.lon;

  for (const Tweet& t : tweets) {
    std::optional<GeoPoint> p = effective_point(t);
    if (!p || !point_in_box(*p, bounds)) {
      grid.dropped += 1;
      continue;
    }
    std::uint32_t row = 0, col = 0;
    if (lat_span > 0.0) {
      double r = (p->lat - bounds.south_west.lat) / lat_span * rows;
      row = std::min(rows - 1, static_cast<std::uint32_t>(r));
    }
    if (lon_span > 0.0) {
      double c = (p->lon - bounds.south_west.lon) / lon_span * cols;
      col = std::min(cols - 1, static_cast<std::uint32_t>(c));
    }
    grid.cells[static_cast<std::size_t>(row) * cols + col] += 1;
  }
  return grid;
}

void HeatmapGrid::merge(const HeatmapGrid& other) {
  if (rows != other.rows || cols != other.cols ||
      bounds.south_west.lat != other.bounds.south_west.lat ||
      bounds.south_west.lon != other.bounds.south_west.lon ||
      bounds.north_east.lat != other.bounds.north_east.lat ||
      bounds.north_east.lon != other.bounds.north_east.lon)
    throw std::invalid_argument("cannot merge heatmaps with different geometry");
  for (std::size_t i = 0; i < cells.size(); ++i) cells[i] += other.cells[i];
  dropped += other.dropped;
}

std::vector<std::pair<std::string, std::uint64_t>> top_hashtags(
    std::span<const Tweet> tweets, std::size_t k) {
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  std::unordered_map<std::string, std::uint64_t> counts;
  for (const Tweet& t : tweets)
    for (const std::string& token : tokenize(normalize(t.text)))
      if (token.front() == '#') counts[token] += 1;

  std::vector<std::pair<std::string, std::uint64_t>> ranked(counts.begin(), counts.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (ranked.size() > k) ranked.resize(k);
  return ranked;
}

void heatmap_to_csv(std::ostream& os, const HeatmapGrid& grid) {
  os << "row,col,lat_center,lon_center,count\n";
  const double dlat = (grid.bounds.north_east.lat - grid.bounds.south_west.lat) / grid.rows;
  const double dlon = (grid.bounds.north_east.lon - grid.bounds.south_west.lon) / grid.cols;
  for (std::uint32_t r = 0; r < grid.rows; ++r) {
    for (std::uint32_t c = 0; c < grid.cols; ++c) {
      double lat = grid.bounds.south_west.lat + (r + 0.5) * dlat;
      double lon = grid.bounds.south_west.lon + (c + 0.5) * dlon;
      os << r << ',' << c << ',' << lat << ',' << lon << ',' << grid.at(r, c) << '\n';
    }
  }
}

void heatmap_to_geojson(std::ostream& os, const HeatmapGrid& grid) {
  const double dlat = (grid.bounds.north_east.lat - grid.bounds.south_west.lat) / grid.rows;
  const double dlon = (grid.bounds.north_east.lon - grid.bounds.south_west.lon) / grid.cols;
  json features = json::array();
  for (std::uint32_t r = 0; r < grid.rows; ++r) {
    for (std::uint32_t c = 0; c < grid.cols; ++c) {
      double south = grid.bounds.south_west.lat + r * dlat;
      double west = grid.bounds.south_west.lon + c * dlon;
      double north = south + dlat;
      double east = west + dlon;
      json feature;
      feature["type"] = "Feature";
      feature["geometry"] = {
          {"type", "Polygon"},
          {"coordinates", json::array({json::array({
                              json::array({west, south}),
                              json::array({east, south}),
                              json::array({east, north}),
                              json::array({west, north}),
                              json::array({west, south}),
                          })})}};
      feature["properties"] = {{"row", r}, {"col", c}, {"count", grid.at(r, c)}};
      features.push_back(std::move(feature));
    }
  }
  json out;
  out["type"] = "FeatureCollection";
  out["features"] = std::move(features);
  os << out.dump(2) << '\n';
}

namespace {
constexpr std::array<const char*, 7> kDayNames = {"mon", "tue", "wed", "thu",
                                                  "fri", "sat", "sun"};
}

std::string dow_to_json(const std::array<std::uint64_t, 7>& counts) {
  json j;
  for (std::size_t d = 0; d < 7; ++d) j[kDayNames[d]] = counts[d];
  return j.dump();
}

void dow_to_csv(std::ostream& os, const std::array<std::uint64_t, 7>& counts) {
  os << "day,count\n";
  for (std::size_t d = 0; d < 7; ++d) os << kDayNames[d] << ',' << counts[d] << '\n';
}

std::string users_to_json(const UserActivitySummary& s) {
  json histogram = json::array();
  for (const auto& [activity, users] : s.histogram)
    histogram.push_back({{"tweets", activity}, {"users", users}});
  json j;
  j["distinct_users"] = s.distinct_users;
  j["band_lt10"] = s.band_lt10;
  j["band_10_100"] = s.band_10_100;
  j["band_gt100"] = s.band_gt100;
  j["histogram"] = std::move(histogram);
  return j.dump(2);
}

void users_to_csv(std::ostream& os, const UserActivitySummary& s) {
  os << "tweets,users\n";
  for (const auto& [activity, users] : s.histogram) os << activity << ',' << users << '\n';
}

}  // namespace geotravel
