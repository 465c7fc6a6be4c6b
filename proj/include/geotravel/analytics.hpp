#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "geotravel/corpus.hpp"

namespace geotravel {

/// Counts per weekday, index 0 = Monday .. 6 = Sunday, after shifting each
/// timestamp by utc_offset_minutes.
std::array<std::uint64_t, 7> day_of_week_histogram(std::span<const Tweet> tweets,
                                                   int utc_offset_minutes);

/// Per-user activity distribution with the three report bands
/// [1,10), [10,100] and (100,inf).
struct UserActivitySummary {
  std::map<std::uint64_t, std::uint64_t> histogram;  // tweets-per-user -> users
  std::uint64_t band_lt10 = 0;
  std::uint64_t band_10_100 = 0;
  std::uint64_t band_gt100 = 0;
  std::uint64_t distinct_users = 0;
};

UserActivitySummary tweets_per_user_distribution(std::span<const Tweet> tweets);

/// Spatial count grid over a bounding box. Cells are row-major with row 0 at
/// the southern edge; tweets without an effective point or outside the
/// bounds are tallied in `dropped`.
struct HeatmapGrid {
  GeoBox bounds;
  std::uint32_t rows = 0;
  std::uint32_t cols = 0;
  std::vector<std::uint64_t> cells;  // rows * cols
  std::uint64_t dropped = 0;

  std::uint64_t at(std::uint32_t row, std::uint32_t col) const {
    return cells[static_cast<std::size_t>(row) * cols + col];
  }

  /// Field-wise addition of a grid with identical bounds and shape, so
  /// partitioned aggregation merges to the same result as one pass.
  void merge(const HeatmapGrid& other);
};

/// Bins each tweet's effective point (precise coordinates, else place-box
/// centroid). Points on the northern/eastern boundary land in the last
/// row/column.
HeatmapGrid heatmap_grid(std::span<const Tweet> tweets, const GeoBox& bounds,
                         std::uint32_t rows, std::uint32_t cols);

/// Hashtag counts over normalized, tokenized text; top k by count, ties
/// broken lexicographically.
std::vector<std::pair<std::string, std::uint64_t>> top_hashtags(
    std::span<const Tweet> tweets, std::size_t k);

// Export formats.
void heatmap_to_csv(std::ostream& os, const HeatmapGrid& grid);
void heatmap_to_geojson(std::ostream& os, const HeatmapGrid& grid);
std::string dow_to_json(const std::array<std::uint64_t, 7>& counts);
void dow_to_csv(std::ostream& os, const std::array<std::uint64_t, 7>& counts);
std::string users_to_json(const UserActivitySummary& summary);
void users_to_csv(std::ostream& os, const UserActivitySummary& summary);

}  // namespace geotravel
