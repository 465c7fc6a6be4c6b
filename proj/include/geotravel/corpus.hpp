#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "geotravel/geo.hpp"

namespace geotravel {

/// One ingested social-media record.
struct Tweet {
  std::int64_t id = 0;
  std::string text;
  std::string lang;
  std::int64_t created_at = 0;  // UTC unix seconds
  std::optional<GeoPoint> coordinates;
  std::optional<GeoBox> place_box;
  std::optional<std::string> place_name;
  std::int64_t user_id = 0;
};

enum class GeoResolutionKind {
  InsideByCoordinates,   // precise point inside the city box
  InsideByPlaceOverlap,  // place box intersects the city box
  Outside,
  Unresolvable,  // neither coordinates nor place present
};

/// Outcome of resolving one tweet against a city box. effective_point is the
/// precise point or the place-box centroid, present only for the two inside
/// kinds.
struct GeoResolution {
  GeoResolutionKind kind = GeoResolutionKind::Unresolvable;
  std::optional<GeoPoint> effective_point;
};

/// Composition tallies over a record stream.
struct CorpusStats {
  std::uint64_t total = 0;
  std::uint64_t lang_match = 0;
  std::uint64_t lang_other = 0;
  std::uint64_t inside_box = 0;
  std::uint64_t outside_box = 0;  // includes unresolvable records
  std::uint64_t lang_and_inside = 0;
  std::uint64_t unresolvable = 0;
  std::uint64_t skipped_malformed = 0;

  /// Field-wise addition; associative and commutative.
  void merge(const CorpusStats& other);
};

/// Parses one JSON-lines record. Required fields: id, text, lang, created_at.
/// Throws RecordMalformed on invalid JSON or field values, RecordIncomplete
/// on missing required fields or empty text.
Tweet parse_tweet_record(std::string_view line);

/// Resolves a tweet against the city box. Precise coordinates take strict
/// precedence over the place box; a tweet with neither is Unresolvable.
GeoResolution resolve_location(const Tweet& t, const GeoBox& city);

/// Effective point for spatial analytics: the precise point if present, else
/// the place-box centroid, else nothing.
std::optional<GeoPoint> effective_point(const Tweet& t);

struct FilterResult {
  std::vector<Tweet> retained;
  CorpusStats stats;
};

/// Retains records with lang == language that resolve inside the city box,
/// tallying composition stats over the full input.
FilterResult filter_corpus(std::span<const Tweet> records, const GeoBox& city,
                           const std::string& language);

/// Streaming variant: reads JSON-lines from `in`, writes retained lines to
/// `out` unmodified, and returns the stats. Malformed lines are reported to
/// `errlog` (when non-null) with their line number and counted as skipped.
CorpusStats filter_stream(std::istream& in, std::ostream& out, const GeoBox& city,
                          const std::string& language, std::ostream* errlog = nullptr);

/// Stats-only pass over a JSON-lines stream.
CorpusStats stats_stream(std::istream& in, const GeoBox& city,
                         const std::string& language, std::ostream* errlog = nullptr);

/// Reads every record of a JSON-lines stream, skipping malformed lines.
/// `skipped` (when non-null) receives the number of skipped lines.
std::vector<Tweet> read_tweets(std::istream& in, std::uint64_t* skipped = nullptr,
                               std::ostream* errlog = nullptr);

std::string stats_to_json(const CorpusStats& s);

}  // namespace geotravel
